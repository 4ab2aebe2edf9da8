#pragma once

#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "linalg.hpp"

namespace cx {

struct WindowTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ComplexSpec {
    std::string label;
    ClassBasis basis;
    GenTable gens;
    std::vector<Element> diff; // per generator, as declared (truncated on use)
    Window window;
    bool allow_flat = false;            // accept weight-preserving non-Morse terms
    long long homology_max_basis = 200000;

    const Element& d_of(int g) const { return diff.at(static_cast<std::size_t>(g)); }
};

/* Morse term: single generator factor, exponent 1, trivial class. */
inline bool is_morse_term(const Monomial& m)
{
    return m.factors.size() == 1 && m.factors[0].second == 1 && is_zero(m.lam);
}

inline Element d0_part(const Element& dx)
{
    Element r;
    for (auto& [m, c] : dx.terms)
        if (is_morse_term(m))
            r.terms.emplace(m, c);
    return r;
}

inline Element d_plus_part(const Element& dx)
{
    Element r;
    for (auto& [m, c] : dx.terms)
        if (!is_morse_term(m))
            r.terms.emplace(m, c);
    return r;
}

inline std::vector<std::string> validate_spec(const ComplexSpec& s)
{
    std::vector<std::string> bad;
    try {
        s.basis.check();
    } catch (const std::exception& e) {
        bad.emplace_back(e.what());
    }
    try {
        s.window.check(s.basis);
    } catch (const std::exception& e) {
        bad.emplace_back(e.what());
    }
    if (s.diff.size() != s.gens.size()) {
        bad.emplace_back("differential table does not cover the generators");
        return bad;
    }

    Q top = 0;
    bool have_ring = false;
    for (auto& g : s.gens.gens)
        if (!g.is_intersection) {
            if (!is_integer(g.morse_index) || g.morse_index < 0)
                bad.push_back("generator " + g.name + ": Morse index must be a nonnegative integer");
            if (!have_ring || g.morse_index > top)
                top = g.morse_index;
            have_ring = true;
        }

    for (std::size_t gi = 0; gi < s.gens.size(); ++gi) {
        const Generator& x = s.gens.at(static_cast<int>(gi));
        const Element& dx = s.diff[gi];
        bool refs_ok = true;
        for (auto& [m, c] : dx.terms) {
            (void)c;
            for (auto& [f, e] : m.factors) {
                (void)e;
                if (f < 0 || f >= static_cast<int>(s.gens.size())) {
                    bad.push_back("d " + x.name + ": unknown generator index");
                    refs_ok = false;
                }
            }
            if (m.lam.size() != s.basis.size()) {
                bad.push_back("d " + x.name + ": class exponent does not match basis");
                refs_ok = false;
            }
        }
        if (!refs_ok)
            continue;

        std::optional<Q> dd = homogeneous_degree(dx, s.gens, s.basis);
        if (!dx.is_zero() && (!dd || *dd != x.degree - 1))
            bad.push_back("d " + x.name + ": not homogeneous of degree " + to_string(x.degree - 1));

        for (auto& [m, c] : dx.terms) {
            (void)c;
            if (!is_zero(m.lam))
                for (auto& [f, e] : m.factors) {
                    (void)e;
                    const Generator& g = s.gens.at(f);
                    if (!g.is_intersection && g.morse_index == 0) {
                        bad.push_back("d " + x.name + ": index-0 generator " + g.name
                                      + " inside a quantum term");
                        break;
                    }
                }
            if (word_len_of(m, s.gens) == 0 && !x.is_intersection && have_ring && x.morse_index == top)
                bad.push_back("d " + x.name + ": free term at top index");

            Q base = x.is_intersection ? 0 : 1; // weight of x itself as a monomial
            Q wt = weight_of(m, s.gens, s.basis);
            if (wt < base)
                bad.push_back("d " + x.name + ": term of weight " + to_string(wt)
                              + " below the generator weight");
            else if (wt == base && !is_morse_term(m) && !s.allow_flat)
                bad.push_back("d " + x.name + ": weight-preserving non-Morse term (flat class)");
        }
    }
    return bad;
}

/* Leibniz extension of the declared differential; degree -1 derivation. */
inline Element apply_d(const ComplexSpec& s, const Element& a, const Window& w, DropLog* log = nullptr)
{
    Element out;
    for (auto& [m, c] : a.terms) {
        int prefix_odd = 0; // parity of the degree sum left of the current factor
        for (std::size_t i = 0; i < m.factors.size(); ++i) {
            auto [g, e] = m.factors[i];
            const Element& dg = s.d_of(g);
            const Generator& gen = s.gens.at(g);
            if (!dg.is_zero()) {
                Q base = c * e * (prefix_odd ? -1 : 1);
                for (auto& [tm, tc] : dg.terms) {
                    std::vector<std::pair<int, long long>> raw;
                    raw.reserve(m.factors.size() + tm.factors.size());
                    for (std::size_t j = 0; j < i; ++j)
                        raw.push_back(m.factors[j]);
                    if (e > 1)
                        raw.emplace_back(g, e - 1);
                    raw.insert(raw.end(), tm.factors.begin(), tm.factors.end());
                    for (std::size_t j = i + 1; j < m.factors.size(); ++j)
                        raw.push_back(m.factors[j]);
                    auto nf = normalize(std::move(raw), exp_combine(m.lam, tm.lam), s.gens);
                    if (!nf)
                        continue;
                    Drop dr = classify(nf->second, s.gens, s.basis, w);
                    if (dr != Drop::keep) {
                        if (log)
                            log->note(dr);
                        continue;
                    }
                    out.add_term(nf->second, base * tc * nf->first);
                }
            }
            if (i + 1 < m.factors.size() && is_odd_degree(gen.degree) && e % 2 != 0)
                prefix_odd ^= 1;
        }
    }
    return out;
}

struct D2Result {
    bool pass = true;
    std::string offender;
    Element residual;
};

inline D2Result check_d_squared(const ComplexSpec& s, const Window& w)
{
    for (std::size_t gi = 0; gi < s.gens.size(); ++gi) {
        Element x = element_of(Monomial{ { { static_cast<int>(gi), 1 } }, zero_exponent(s.basis) });
        Element dd = apply_d(s, apply_d(s, x, w), w);
        if (!dd.is_zero())
            return { false, s.gens.at(static_cast<int>(gi)).name, dd };
    }
    return {};
}

/* Chain maps between specs sharing a class basis. algebra mode extends
   multiplicatively; linear mode transports single-generator monomials and
   kills the rest (projection onto the linear part). */
struct ChainMap {
    std::vector<Element> images; // per source generator, element of the target
    Q shift = 0;
    enum class Mode { algebra, linear } mode = Mode::algebra;
};

inline Element transport(const ChainMap& phi, const ComplexSpec& tgt, const Element& a,
                         const Window& w, DropLog* log = nullptr)
{
    Element out;
    for (auto& [m, c] : a.terms) {
        if (phi.mode == ChainMap::Mode::linear) {
            if (m.factors.size() != 1 || m.factors[0].second != 1)
                continue;
            Monomial cls;
            cls.lam = m.lam;
            Element img = multiply(phi.images.at(static_cast<std::size_t>(m.factors[0].first)),
                                   element_of(cls), tgt.gens, tgt.basis, w, log);
            out = add_scale(out, c, img);
            continue;
        }
        Element acc = unit_element(tgt.basis);
        for (auto& [g, e] : m.factors)
            for (long long k = 0; k < e && !acc.is_zero(); ++k)
                acc = multiply(acc, phi.images.at(static_cast<std::size_t>(g)), tgt.gens, tgt.basis, w, log);
        Monomial cls;
        cls.lam = m.lam;
        acc = multiply(acc, element_of(cls), tgt.gens, tgt.basis, w, log);
        out = add_scale(out, c, acc);
    }
    return out;
}

struct ChainMapResult {
    bool pass = true;
    std::vector<std::string> diagnostics;
};

inline ChainMapResult check_chain_map(const ChainMap& phi, const ComplexSpec& src,
                                      const ComplexSpec& tgt, const Window& w)
{
    ChainMapResult r;
    auto fail = [&](const std::string& msg) {
        r.pass = false;
        r.diagnostics.push_back(msg);
    };
    if (phi.images.size() != src.gens.size()) {
        fail("map does not cover the source generators");
        return r;
    }
    if (src.basis.entries.size() != tgt.basis.entries.size()) {
        fail("class bases differ");
        return r;
    }
    for (std::size_t i = 0; i < src.basis.entries.size(); ++i) {
        const ClassEntry &a = src.basis.entries[i], &b = tgt.basis.entries[i];
        if (a.maslov != b.maslov || a.area != b.area) {
            fail("class bases differ at " + a.name);
            return r;
        }
    }

    for (std::size_t gi = 0; gi < src.gens.size(); ++gi) {
        const Generator& x = src.gens.at(static_cast<int>(gi));
        const Element& img = phi.images[gi];
        if (!img.is_zero()) {
            std::optional<Q> dg = homogeneous_degree(img, tgt.gens, tgt.basis);
            if (!dg || *dg != x.degree + phi.shift)
                fail("image of " + x.name + " is not homogeneous of degree "
                     + to_string(x.degree + phi.shift));
            if (phi.shift == 0) {
                for (auto& [m, c] : img.terms) {
                    (void)c;
                    if (weight_of(m, tgt.gens, tgt.basis) < 1) {
                        fail("image of " + x.name + " lowers the filtration level");
                        break;
                    }
                }
            }
        }
        Element lhs = transport(phi, tgt, apply_d(src, element_of(Monomial{ { { static_cast<int>(gi), 1 } }, zero_exponent(src.basis) }), w), w);
        Element rhs = apply_d(tgt, img, w);
        if (!(lhs == rhs))
            fail("does not commute with d on " + x.name);
    }
    return r;
}

/* Window monomial enumeration. */
enum class EnumMode { plain, one_intersection };

inline std::vector<Monomial> enumerate_window(const GenTable& gens, const ClassBasis& basis,
                                              const Window& w, EnumMode mode, long long guard)
{
    std::vector<std::vector<std::pair<int, long long>>> words;
    std::vector<std::pair<int, long long>> cur;
    long long produced = 0;

    int first_inter = -1;
    int n_ring = 0;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (gens.at(static_cast<int>(i)).is_intersection) {
            if (first_inter < 0)
                first_inter = static_cast<int>(i);
        } else {
            ++n_ring;
        }
    }
    if (mode == EnumMode::one_intersection && first_inter < 0)
        throw std::invalid_argument("no intersection generators declared");

    std::function<void(int, long long)> rec = [&](int g, long long budget) {
        if (g == n_ring) {
            words.push_back(cur);
            if (++produced > guard)
                throw WindowTooLarge("window basis exceeds the configured cap");
            return;
        }
        const Generator& gen = gens.at(g);
        long long emax = is_odd_degree(gen.degree) ? std::min<long long>(1, budget) : budget;
        for (long long e = 0; e <= emax; ++e) {
            if (e > 0)
                cur.emplace_back(g, e);
            rec(g + 1, budget - e);
            if (e > 0)
                cur.pop_back();
        }
    };
    rec(0, w.max_word_len);

    std::vector<NovikovExponent> lams;
    NovikovExponent lam(basis.size(), 0);
    long long lam_count = 1;
    for (auto& [lo, hi] : w.box) {
        lam_count *= (hi - lo + 1);
        if (lam_count > guard)
            throw WindowTooLarge("window exponent box exceeds the configured cap");
    }
    std::function<void(std::size_t)> lrec = [&](std::size_t i) {
        if (i == basis.size()) {
            lams.push_back(lam);
            return;
        }
        for (long long v = w.box[i].first; v <= w.box[i].second; ++v) {
            lam[i] = v;
            lrec(i + 1);
        }
    };
    lrec(0);

    std::vector<int> inters;
    if (mode == EnumMode::one_intersection)
        for (std::size_t i = 0; i < gens.size(); ++i)
            if (gens.at(static_cast<int>(i)).is_intersection)
                inters.push_back(static_cast<int>(i));

    std::vector<Monomial> out;
    long long total = 0;
    auto consider = [&](Monomial&& m) {
        if (classify(m, gens, basis, w) != Drop::keep)
            return;
        out.push_back(std::move(m));
        if (++total > guard)
            throw WindowTooLarge("window basis exceeds the configured cap");
    };
    for (auto& word : words)
        for (auto& l : lams) {
            if (mode == EnumMode::plain) {
                consider(Monomial{ word, l });
            } else {
                for (int ig : inters) {
                    auto wf = word;
                    wf.emplace_back(ig, 1);
                    consider(Monomial{ std::move(wf), l });
                }
            }
        }
    std::sort(out.begin(), out.end());
    return out;
}

struct DegreeRow {
    Q degree;
    std::size_t dim = 0;
    std::size_t rank_out = 0; // rank of d leaving this degree
    std::size_t rank_in = 0;  // rank of d arriving from degree+1
    long long betti = 0;
    bool edge = false;      // d-adjacent to the outside of the degree interval
    bool certified = false; // betti provably equals the windowed homology here
    bool lossy = false;     // word/box truncation hit d at this degree or above
};

struct HomologyReport {
    std::vector<DegreeRow> rows; // ascending degree
    bool any_lossy = false;

    const DegreeRow* row(const Q& d) const
    {
        for (auto& r : rows)
            if (r.degree == d)
                return &r;
        return nullptr;
    }
};

/* Windowed homology with per-degree certification. A degree q with q-1 and
   q+1 inside the interval is certified when either
     (a) the assembled d_q has zero kernel: no cycle of the ambient complex
         lies in the window span at q, so betti 0 is exact there; or
     (b) no word/box truncation fired anywhere in the assembly: the window
         span is then a d-closed subcomplex and every betti is its honest
         homology.
   Weight drops are the legal quotient by the filtration and poison nothing;
   degree drops only happen at the interval edges, which are never
   certified. */
inline HomologyReport homology_of(const ComplexSpec& s, const Window& w,
                                  EnumMode mode = EnumMode::plain)
{
    std::vector<Monomial> all = enumerate_window(s.gens, s.basis, w, mode, s.homology_max_basis);

    std::map<Q, std::vector<Monomial>> by_deg;
    for (auto& m : all)
        by_deg[degree_of(m, s.gens, s.basis)].push_back(m);

    bool half = false;
    for (auto& g : s.gens.gens)
        if (!is_integer(g.degree))
            half = true;
    Q step = half ? Q(1, 2) : Q(1);
    for (Q d = w.degree_lo; d <= w.degree_hi; d += step)
        by_deg.try_emplace(d);

    std::map<Q, std::size_t> index_base;
    std::map<Q, std::map<Monomial, std::size_t>> index;
    for (auto& [d, ms] : by_deg) {
        auto& ix = index[d];
        for (std::size_t i = 0; i < ms.size(); ++i)
            ix.emplace(ms[i], i);
    }

    struct Block {
        QMat mat;           // d: C_q -> C_{q-1}
        bool lossy = false; // word/box drops while assembling
    };
    std::map<Q, Block> blocks;
    for (auto& [d, ms] : by_deg) {
        Block b;
        auto tgt = by_deg.find(d - 1);
        std::size_t tdim = tgt == by_deg.end() ? 0 : tgt->second.size();
        b.mat = QMat(tdim, ms.size());
        DropLog log;
        for (std::size_t c = 0; c < ms.size(); ++c) {
            Element img = apply_d(s, element_of(ms[c]), w, &log);
            for (auto& [tm, tc] : img.terms) {
                auto& ix = index[d - 1];
                auto it = ix.find(tm);
                if (it == ix.end())
                    throw std::logic_error("differential image escaped the enumerated basis");
                b.mat.at(it->second, c) = tc;
            }
        }
        b.lossy = log.lossy();
        blocks.emplace(d, std::move(b));
    }

    HomologyReport rep;
    for (auto& [d, b] : blocks)
        rep.any_lossy = rep.any_lossy || b.lossy;

    std::map<Q, std::size_t> ranks;
    for (auto& [d, b] : blocks)
        ranks.emplace(d, rank_of(b.mat));

    for (auto& [d, ms] : by_deg) {
        DegreeRow row;
        row.degree = d;
        row.dim = ms.size();
        row.rank_out = ranks.at(d);
        auto up = ranks.find(d + 1);
        row.rank_in = up == ranks.end() ? 0 : up->second;
        long long ker = static_cast<long long>(row.dim) - static_cast<long long>(row.rank_out);
        row.betti = std::max<long long>(0, ker - static_cast<long long>(row.rank_in));
        row.edge = (d - 1 < w.degree_lo) || (d + 1 > w.degree_hi);
        row.lossy = blocks.at(d).lossy
                    || (blocks.count(d + 1) && blocks.at(d + 1).lossy);
        row.certified = !row.edge && (ker == 0 || !rep.any_lossy);
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace cx
