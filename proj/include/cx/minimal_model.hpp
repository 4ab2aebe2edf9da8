#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "complex.hpp"

namespace cx {

struct D0Split {
    std::vector<Element> d0, d_plus; // per generator
};

inline D0Split split_d0(const ComplexSpec& s)
{
    D0Split r;
    r.d0.reserve(s.diff.size());
    r.d_plus.reserve(s.diff.size());
    for (auto& row : s.diff) {
        r.d0.push_back(d0_part(row));
        r.d_plus.push_back(d_plus_part(row));
    }
    return r;
}

namespace detail {

inline Element gen_element(const ClassBasis& basis, int i, const Q& c = 1)
{
    return element_of(Monomial{ { { i, 1 } }, zero_exponent(basis) }, c);
}

inline std::vector<Element> identity_images(const ComplexSpec& s)
{
    std::vector<Element> v;
    v.reserve(s.gens.size());
    for (std::size_t i = 0; i < s.gens.size(); ++i)
        v.push_back(gen_element(s.basis, static_cast<int>(i)));
    return v;
}

} // namespace detail

/* Rational basis change putting the weight-preserving part in pair/zero form:
   every generator has d0 = 0 or d0 = (renamed pivot), each pivot hit once.
   change_out, when given, receives each input generator as an element of the
   returned spec. */
inline ComplexSpec normalize_d0(const ComplexSpec& s, std::vector<Element>* change_out = nullptr)
{
    ComplexSpec t = s;
    const int n = static_cast<int>(t.gens.size());
    Window wide = wide_window(t.basis);
    std::vector<Element> change = detail::identity_images(t);

    auto substitute = [&](const std::vector<Element>& images) {
        ChainMap phi{ images, 0, ChainMap::Mode::algebra };
        for (auto& row : t.diff)
            row = transport(phi, t, row, wide);
        for (auto& e : change)
            e = transport(phi, t, e, wide);
    };

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return t.gens.at(a).degree < t.gens.at(b).degree;
    });

    std::vector<char> paired(static_cast<std::size_t>(n), 0);
    for (int xi : order) {
        if (paired[xi])
            continue;
        Element d0x = d0_part(t.diff[xi]);
        if (d0x.is_zero())
            continue;

        // pivot: smallest unpaired generator in d0(x); d0^2 = 0 guarantees one
        int yi = -1;
        Q a = 0;
        for (auto& [m, c] : d0x.terms) {
            int f = m.factors[0].first;
            if (!paired[f] && (yi < 0 || f < yi)) {
                yi = f;
                a = c;
            }
        }
        if (yi < 0)
            throw std::runtime_error("normalize_d0: d0 does not square to zero at "
                                     + t.gens.at(xi).name);

        // the pivot index now denotes y' := d0(x); its row is the matching
        // combination of old rows, and old y = (1/a)(y' - rest) elsewhere.
        // d0(x) = y exactly is already normal: no rename, identity change.
        if (d0x.terms.size() > 1 || a != 1) {
            Element nrow;
            for (auto& [m, c] : d0x.terms)
                nrow = add_scale(nrow, c, t.diff[m.factors[0].first]);
            t.diff[yi] = nrow;
            std::string nm = t.gens.gens[yi].name;
            do
                nm += "'";
            while (t.gens.index_of(nm) >= 0);
            t.gens.gens[yi].name = nm;

            std::vector<Element> sigma = detail::identity_images(t);
            Element inv = detail::gen_element(t.basis, yi, 1 / a);
            for (auto& [m, c] : d0x.terms)
                if (m.factors[0].first != yi)
                    inv = add_scale(inv, -c / a, detail::gen_element(t.basis, m.factors[0].first));
            sigma[yi] = inv;
            substitute(sigma);
        }

        // clear the pivot from every other row: u' := u - b x
        Monomial pivot{ { { yi, 1 } }, zero_exponent(t.basis) };
        for (int ui = 0; ui < n; ++ui) {
            if (ui == xi || paired[ui])
                continue;
            auto it = t.diff[ui].terms.find(pivot);
            if (it == t.diff[ui].terms.end())
                continue;
            Q b = it->second;
            t.diff[ui] = add_scale(t.diff[ui], -b, t.diff[xi]);
            std::vector<Element> s2 = detail::identity_images(t);
            s2[ui] = add_scale(detail::gen_element(t.basis, ui), b,
                               detail::gen_element(t.basis, xi));
            substitute(s2);
        }

        paired[xi] = paired[yi] = 1;
    }

    if (change_out)
        *change_out = change;
    return t;
}

struct EliminationStep {
    std::string x, y;
    Element y_image;          // y's expression in the reduced spec
    std::vector<Element> map; // every old generator -> element of the reduced spec
};

/* Quotient by the acyclic ideal (x, dx) when d0(x) is a single generator y.
   y is rewritten as a window-convergent series in the survivors by iterated
   substitution; each pass strictly raises the weight of the residual. */
inline std::pair<ComplexSpec, EliminationStep>
eliminate_pair(const ComplexSpec& s, const std::string& xname, const Window& w)
{
    int xi = s.gens.index_of(xname);
    if (xi < 0)
        throw std::invalid_argument("unknown generator " + xname);
    Element d0x = d0_part(s.diff[xi]);
    if (d0x.terms.size() != 1)
        throw std::runtime_error("no pair: d0 " + xname
                                 + (d0x.is_zero() ? " = 0" : " is not a single generator"));
    int yi = d0x.terms.begin()->first.factors[0].first;
    Q c = d0x.terms.begin()->second;
    if (yi == xi)
        throw std::runtime_error("no pair: d0 " + xname + " returns to " + xname);
    Element r = d_plus_part(s.diff[xi]); // dx = c y + r

    ChainMap phi{ detail::identity_images(s), 0, ChainMap::Mode::algebra };
    phi.images[xi] = Element{};
    Element ycur;
    long long cap = w.max_word_len + 64;
    for (auto& [lo, hi] : w.box)
        cap += hi - lo;
    cap = std::min<long long>(cap, 4096);
    bool settled = false;
    for (long long i = 0; i <= cap; ++i) {
        phi.images[yi] = ycur;
        Element next = scale(transport(phi, s, r, w), -1 / c);
        if (next == ycur) {
            settled = true;
            break;
        }
        ycur = std::move(next);
    }
    if (!settled)
        throw std::runtime_error("eliminating " + xname + " does not raise the filtration");

    ComplexSpec t;
    t.label = s.label;
    t.basis = s.basis;
    t.window = s.window;
    t.allow_flat = s.allow_flat;
    t.homology_max_basis = s.homology_max_basis;
    std::vector<int> to(s.gens.size(), -1);
    for (std::size_t i = 0; i < s.gens.size(); ++i) {
        if (static_cast<int>(i) == xi || static_cast<int>(i) == yi)
            continue;
        const Generator& g = s.gens.at(static_cast<int>(i));
        to[i] = t.gens.add(g.name, g.morse_index, g.is_intersection, g.degree);
    }
    auto remap = [&](const Element& e) {
        Element o;
        for (auto& [m, q] : e.terms) {
            Monomial nm;
            nm.lam = m.lam;
            for (auto& [f, ex] : m.factors)
                nm.factors.emplace_back(to[f], ex);
            o.add_term(std::move(nm), q);
        }
        return o;
    };

    EliminationStep step;
    step.x = xname;
    step.y = s.gens.at(yi).name;
    step.y_image = remap(ycur);
    step.map.resize(s.gens.size());
    for (std::size_t i = 0; i < s.gens.size(); ++i) {
        if (static_cast<int>(i) == xi)
            continue;
        step.map[i] = static_cast<int>(i) == yi ? step.y_image
                                                : detail::gen_element(t.basis, to[i]);
    }
    for (std::size_t i = 0; i < s.gens.size(); ++i)
        if (to[i] >= 0)
            t.diff.push_back(remap(transport(phi, s, s.diff[i], w)));
    return { std::move(t), std::move(step) };
}

struct ReductionTrace {
    std::vector<EliminationStep> steps;
    std::vector<std::vector<Element>> basis_changes; // one per normalize pass that acted
    ChainMap P;                                      // input generators -> reduced spec
};

/* Sum of the betti numbers of (generators, d0) as a linear complex: each
   matched pair kills two generators, so the sum is n - 2 rank(d0). */
inline long long morse_betti_total(const ComplexSpec& s)
{
    const std::size_t n = s.gens.size();
    QMat m(n, n); // block-diagonal by degree, so one global rank works
    for (std::size_t x = 0; x < n && x < s.diff.size(); ++x)
        for (auto& [mm, c] : d0_part(s.diff[x]).terms)
            m.at(static_cast<std::size_t>(mm.factors[0].first), x) = c;
    return static_cast<long long>(n) - 2 * static_cast<long long>(rank_of(m));
}

inline std::pair<ComplexSpec, ReductionTrace> minimal_model(const ComplexSpec& s, const Window& w)
{
    ReductionTrace tr;
    ComplexSpec cur = s;
    std::vector<Element> pimg = detail::identity_images(s);
    const long long want_gens = morse_betti_total(s);

    auto push_through = [&](const std::vector<Element>& images, const ComplexSpec& tgt) {
        ChainMap phi{ images, 0, ChainMap::Mode::algebra };
        for (auto& e : pimg)
            e = transport(phi, tgt, e, w);
    };

    for (std::size_t pass = 0;; ++pass) {
        if (pass > s.gens.size() + 1)
            throw std::logic_error("minimal_model: reduction does not terminate");
        std::vector<Element> chg;
        ComplexSpec norm = normalize_d0(cur, &chg);
        if (chg != detail::identity_images(norm)) {
            push_through(chg, norm);
            tr.basis_changes.push_back(std::move(chg));
        }
        cur = std::move(norm);

        bool any = false;
        while (true) {
            int best = -1;
            for (std::size_t i = 0; i < cur.gens.size(); ++i) {
                if (d0_part(cur.diff[i]).is_zero())
                    continue;
                if (best < 0 || cur.gens.at(static_cast<int>(i)).degree < cur.gens.at(best).degree)
                    best = static_cast<int>(i);
            }
            if (best < 0)
                break;
            any = true;
            auto [red, step] = eliminate_pair(cur, cur.gens.at(best).name, w);
            push_through(step.map, red);
            tr.steps.push_back(std::move(step));
            cur = std::move(red);
        }
        if (!any)
            break;
    }

    for (auto& row : cur.diff)
        if (!d0_part(row).is_zero())
            throw std::logic_error("minimal_model: output keeps a weight-preserving term");
    if (static_cast<long long>(cur.gens.size()) != want_gens)
        throw std::logic_error("minimal_model: generator count differs from the Morse betti sum");

    tr.P = ChainMap{ pimg, 0, ChainMap::Mode::algebra };
    ChainMapResult cm = check_chain_map(tr.P, s, cur, w);
    if (!cm.pass)
        throw std::logic_error("minimal_model: projection is not a chain map: " + cm.diagnostics.front());

    HomologyReport h0 = homology_of(s, w), h1 = homology_of(cur, w);
    for (auto& r0 : h0.rows) {
        if (!r0.certified)
            continue;
        const DegreeRow* r1 = h1.row(r0.degree);
        if (r1 && r1->certified && r1->betti != r0.betti)
            throw std::logic_error("minimal_model: certified homology changed at degree "
                                   + to_string(r0.degree));
    }
    return { std::move(cur), std::move(tr) };
}

} // namespace cx
