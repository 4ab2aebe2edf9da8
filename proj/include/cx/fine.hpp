#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "complex.hpp"
#include "scenarios.hpp"

namespace cx {

/* Two coefficient algebras glued over a shared class lattice, acting on a
   free module spanned by intersection generators of (half-)integer degree. */
struct FineSpec {
    std::string label;
    ComplexSpec cl0, cl1;                 // per-side data over their own bases
    ClassBasis bar;                       // combined class lattice
    std::vector<NovikovExponent> embed0;  // cl0 class -> bar exponent
    std::vector<NovikovExponent> embed1;  // cl1 class -> bar exponent

    /* combined complex over bar: cl0 ring generators, then cl1, then
       intersections; ring differentials embedded, intersection rows = dF */
    ComplexSpec total;
    std::vector<int> intersections; // generator indices in total
};

inline NovikovExponent embed_exponent(const NovikovExponent& lam,
                                      const std::vector<NovikovExponent>& embed,
                                      const ClassBasis& bar)
{
    NovikovExponent out = zero_exponent(bar);
    for (std::size_t i = 0; i < lam.size(); ++i)
        if (lam[i] != 0) {
            const NovikovExponent& img = embed.at(i);
            for (std::size_t j = 0; j < out.size(); ++j)
                out[j] += lam[i] * img[j];
        }
    return out;
}

/* Builds the combined generator table and embeds the two side
   differentials; intersection rows start out zero and are filled by the
   caller (or the parser) against total.gens. */
inline FineSpec assemble_fine(ComplexSpec cl0, ComplexSpec cl1, ClassBasis bar,
                              std::vector<NovikovExponent> embed0,
                              std::vector<NovikovExponent> embed1,
                              const std::vector<std::pair<std::string, Q>>& inters,
                              Window window)
{
    FineSpec f;
    f.cl0 = std::move(cl0);
    f.cl1 = std::move(cl1);
    f.bar = std::move(bar);
    f.bar.check();
    f.embed0 = std::move(embed0);
    f.embed1 = std::move(embed1);
    if (f.embed0.size() != f.cl0.basis.size() || f.embed1.size() != f.cl1.basis.size())
        throw std::invalid_argument("embedding does not cover the declared classes");

    f.total.label = f.label;
    f.total.basis = f.bar;
    f.total.window = std::move(window);
    for (auto& g : f.cl0.gens.gens)
        f.total.gens.add(g.name, g.morse_index);
    for (auto& g : f.cl1.gens.gens)
        f.total.gens.add(g.name, g.morse_index);
    for (auto& [name, deg] : inters) {
        Z den = denominator(deg);
        if (den != 1 && den != 2)
            throw std::invalid_argument("intersection degree must have denominator 1 or 2: " + name);
        f.intersections.push_back(f.total.gens.add(name, deg + 1, true, deg));
    }

    auto embed_elt = [&](const Element& a, int offset, const std::vector<NovikovExponent>& embed) {
        Element out;
        for (auto& [m, c] : a.terms) {
            Monomial t;
            t.factors = m.factors;
            for (auto& [g, e] : t.factors) {
                (void)e;
                g += offset;
            }
            t.lam = embed_exponent(m.lam, embed, f.bar);
            out.add_term(t, c);
        }
        return out;
    };

    f.total.diff.assign(f.total.gens.size(), Element{});
    for (std::size_t i = 0; i < f.cl0.gens.size(); ++i)
        f.total.diff[i] = embed_elt(f.cl0.diff[i], 0, f.embed0);
    int off = static_cast<int>(f.cl0.gens.size());
    for (std::size_t i = 0; i < f.cl1.gens.size(); ++i)
        f.total.diff[static_cast<std::size_t>(off) + i] = embed_elt(f.cl1.diff[i], off, f.embed1);
    return f;
}

inline std::vector<std::string> validate_fine(const FineSpec& f)
{
    std::vector<std::string> bad = validate_spec(f.cl0);
    for (auto& s : validate_spec(f.cl1))
        bad.push_back(s);
    try {
        f.bar.check();
        f.total.window.check(f.bar);
    } catch (const std::exception& e) {
        bad.emplace_back(e.what());
    }

    auto check_embed = [&](const ClassBasis& side, const std::vector<NovikovExponent>& embed,
                           const char* tag) {
        std::set<NovikovExponent> seen;
        for (std::size_t i = 0; i < side.entries.size(); ++i) {
            if (embed[i].size() != f.bar.size()) {
                bad.push_back(std::string(tag) + ": embedding image has the wrong length");
                continue;
            }
            auto [mu, om] = maslov_area(embed[i], f.bar);
            if (mu != side.entries[i].maslov || om != side.entries[i].area)
                bad.push_back(std::string(tag) + "." + side.entries[i].name
                              + ": embedding changes (maslov, area)");
            if (is_zero(embed[i]) || !seen.insert(embed[i]).second)
                bad.push_back(std::string(tag) + "." + side.entries[i].name
                              + ": embedding is not injective");
        }
    };
    check_embed(f.cl0.basis, f.embed0, "cl0");
    check_embed(f.cl1.basis, f.embed1, "cl1");

    for (auto& g0 : f.cl0.gens.gens)
        if (f.cl1.gens.index_of(g0.name) >= 0)
            bad.push_back("generator " + g0.name + " declared on both sides");

    for (int ai : f.intersections) {
        const Generator& a = f.total.gens.at(ai);
        const Element& da = f.total.d_of(ai);
        std::optional<Q> dd = homogeneous_degree(da, f.total.gens, f.bar);
        if (!da.is_zero() && (!dd || *dd != a.degree - 1))
            bad.push_back("d " + a.name + ": not homogeneous of degree " + to_string(a.degree - 1));
        for (auto& [m, c] : da.terms) {
            (void)c;
            if (intersection_count(m, f.total.gens) != 1)
                bad.push_back("d " + a.name + ": term without exactly one intersection factor");
            Q wt = weight_of(m, f.total.gens, f.bar);
            if (wt < 0)
                bad.push_back("d " + a.name + ": term of weight " + to_string(wt)
                              + " below the generator weight");
        }
    }
    return bad;
}

/* d_F a = s(a) a + delta(a): the coefficient on a itself and the rest. */
inline std::pair<Element, Element> split_sa(const FineSpec& f, int ai)
{
    Element sa, delta;
    for (auto& [m, c] : f.total.d_of(ai).terms) {
        if (!m.factors.empty() && m.factors.back().first == ai && m.factors.back().second == 1) {
            Monomial u;
            u.factors.assign(m.factors.begin(), m.factors.end() - 1);
            u.lam = m.lam;
            sa.add_term(u, c);
        } else {
            delta.terms.emplace(m, c);
        }
    }
    return { sa, delta };
}

struct SaReport {
    bool pass = true;
    std::vector<std::string> diagnostics;
};

inline SaReport check_sa_squared(const FineSpec& f, const Window& w)
{
    SaReport r;
    for (int ai : f.intersections) {
        auto [sa, delta] = split_sa(f, ai);
        (void)delta;
        if (!sa.is_zero()) {
            std::optional<Q> d = homogeneous_degree(sa, f.total.gens, f.bar);
            if (!d || *d != -1) {
                r.pass = false;
                r.diagnostics.push_back("s(" + f.total.gens.at(ai).name + ") does not have degree -1");
            }
        }
        Element sq = multiply(sa, sa, f.total.gens, f.bar, w);
        if (!sq.is_zero()) {
            r.pass = false;
            r.diagnostics.push_back("s(" + f.total.gens.at(ai).name + ")^2 != 0");
        }
    }
    return r;
}

inline D2Result check_dF_squared(const FineSpec& f, const Window& w)
{
    // the ring rows come first, so a broken coefficient algebra is reported
    // before any intersection generator
    return check_d_squared(f.total, w);
}

inline HomologyReport fine_homology(const FineSpec& f, const Window& w)
{
    return homology_of(f.total, w, EnumMode::one_intersection);
}

/* Substitute cl1 generators by cl0 generators throughout dF, dropping the
   cl1 side: the module becomes one over a single coefficient algebra. */
inline FineSpec symmetrize(const FineSpec& f,
                           const std::vector<std::pair<std::string, std::string>>& ident)
{
    std::vector<int> to(f.total.gens.size(), -1);
    std::vector<bool> covered(f.cl1.gens.size(), false);
    for (auto& [from, into] : ident) {
        int src = f.cl1.gens.index_of(from);
        int dst = f.cl0.gens.index_of(into);
        if (src < 0 || dst < 0)
            throw std::invalid_argument("identification names an unknown generator");
        if (f.cl1.gens.at(src).degree != f.cl0.gens.at(dst).degree)
            throw std::invalid_argument("identification is not degree-preserving: " + from);
        covered[static_cast<std::size_t>(src)] = true;
        to[f.cl0.gens.size() + static_cast<std::size_t>(src)] = dst;
    }
    for (std::size_t i = 0; i < covered.size(); ++i)
        if (!covered[i])
            throw std::invalid_argument("identification misses generator " + f.cl1.gens.at(static_cast<int>(i)).name);

    FineSpec out;
    out.label = f.label;
    out.cl0 = f.cl0;
    out.bar = f.bar;
    out.embed0 = f.embed0;
    out.total.label = f.label;
    out.total.basis = f.bar;
    out.total.window = f.total.window;
    out.total.allow_flat = f.total.allow_flat;
    out.total.homology_max_basis = f.total.homology_max_basis;
    for (auto& g : f.cl0.gens.gens)
        out.total.gens.add(g.name, g.morse_index);
    std::vector<std::pair<std::string, Q>> inters;
    for (int ai : f.intersections) {
        const Generator& a = f.total.gens.at(ai);
        out.intersections.push_back(out.total.gens.add(a.name, a.morse_index, true, a.degree));
    }
    for (std::size_t i = 0; i < f.total.gens.size(); ++i) {
        if (to[i] >= 0)
            continue;
        const Generator& g = f.total.gens.at(static_cast<int>(i));
        int ni = out.total.gens.index_of(g.name);
        if (ni >= 0)
            to[i] = ni;
    }

    auto remap = [&](const Element& a) {
        Element r;
        for (auto& [m, c] : a.terms) {
            std::vector<std::pair<int, long long>> raw = m.factors;
            for (auto& [g, e] : raw) {
                (void)e;
                if (to[static_cast<std::size_t>(g)] < 0)
                    throw std::logic_error("unmapped generator during symmetrize");
                g = to[static_cast<std::size_t>(g)];
            }
            auto nf = normalize(std::move(raw), m.lam, out.total.gens);
            if (!nf)
                continue;
            r.add_term(nf->second, c * nf->first);
        }
        return r;
    };

    out.total.diff.assign(out.total.gens.size(), Element{});
    for (std::size_t i = 0; i < f.cl0.gens.size(); ++i)
        out.total.diff[static_cast<std::size_t>(to[i])] = remap(f.total.diff[i]);
    for (std::size_t k = 0; k < f.intersections.size(); ++k) {
        int old_ai = f.intersections[k];
        out.total.diff[static_cast<std::size_t>(out.intersections[k])] =
            remap(f.total.d_of(old_ai));
    }
    return out;
}

/* Circle times a critical-point-free line: two intersection points of
   degrees 1/2 and -1/2 over the circle algebra. The sign on (dm) a is the
   unique one with d_F^2 = 0. */
inline FineSpec builtin_circle_line(bool flip_sign = false)
{
    ComplexSpec cl0 = example_s1();
    ComplexSpec cl1;
    cl1.label = "line";
    cl1.window.fit_basis(cl1.basis);

    ClassBasis bar;
    bar.entries = { { "barlam0", 2, Q(1) } };

    Window w = cl0.window; // word <= 6, box -2..4, degrees -6..6

    FineSpec f = assemble_fine(cl0, cl1, bar, { { 1 } }, {},
                               { { "a", Q(1, 2) }, { "b", Q(-1, 2) } }, w);
    f.label = "circle-line";
    f.total.label = f.label;

    int m = f.total.gens.index_of("m");
    int a = f.total.gens.index_of("a");
    int b = f.total.gens.index_of("b");
    NovikovExponent zero = zero_exponent(f.bar);

    Element da; // d a = m a + b
    da.add_term(Monomial{ { { m, 1 }, { a, 1 } }, zero }, 1);
    da.add_term(Monomial{ { { b, 1 } }, zero }, 1);

    Element db; // d b = m b - (dm) a
    db.add_term(Monomial{ { { m, 1 }, { b, 1 } }, zero }, 1);
    const Element& dm = f.total.d_of(m);
    for (auto& [t, c] : dm.terms) {
        auto raw = t.factors;
        raw.emplace_back(a, 1);
        db.add_term(Monomial{ std::move(raw), t.lam }, (flip_sign ? 1 : -1) * c);
    }

    f.total.diff[static_cast<std::size_t>(a)] = da;
    f.total.diff[static_cast<std::size_t>(b)] = db;
    return f;
}

} // namespace cx
