#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "complex.hpp"

namespace cx {

/* SV (x) V: a ring monomial times one marked generator written at the far
   right. The marked factor adds its generator degree but no word length or
   weight. */
struct TildeElement {
    std::map<std::pair<Monomial, int>, Q> terms;

    void add_term(Monomial m, int v, const Q& c)
    {
        if (c == 0)
            return;
        auto key = std::make_pair(std::move(m), v);
        auto it = terms.find(key);
        if (it == terms.end()) {
            terms.emplace(std::move(key), c);
        } else {
            it->second += c;
            if (it->second == 0)
                terms.erase(it);
        }
    }
    bool is_zero() const { return terms.empty(); }
    bool operator==(const TildeElement& o) const { return terms == o.terms; }
};

inline Q tilde_degree(const Monomial& m, int v, const GenTable& gens, const ClassBasis& basis)
{
    return degree_of(m, gens, basis) + gens.at(v).degree;
}

inline Drop tilde_classify(const Monomial& m, int v, const GenTable& gens,
                           const ClassBasis& basis, const Window& w)
{
    if (w.weight_cutoff && !(weight_of(m, gens, basis) < *w.weight_cutoff))
        return Drop::weight;
    if (word_len_of(m, gens) > w.max_word_len)
        return Drop::word;
    for (std::size_t i = 0; i < m.lam.size(); ++i)
        if (m.lam[i] < w.box[i].first || m.lam[i] > w.box[i].second)
            return Drop::box;
    Q d = tilde_degree(m, v, gens, basis);
    if (d < w.degree_lo || d > w.degree_hi)
        return Drop::degree;
    return Drop::keep;
}

/* alpha(x1...xk) = sum_i (-1)^(|x_i| sum_{j>i} |x_j|) x1...x^_i...xk (x_i)bar,
   with alpha(x^e) = e x^(e-1) xbar on powers of even generators. Class
   exponents ride along as central coefficients; alpha(1) = alpha(e^lam) = 0. */
inline TildeElement alpha(const Element& a, const GenTable& gens)
{
    TildeElement out;
    for (auto& [m, c] : a.terms) {
        std::vector<int> suffix(m.factors.size() + 1, 0);
        for (std::size_t i = m.factors.size(); i-- > 0;) {
            auto [g, e] = m.factors[i];
            int p = is_odd_degree(gens.at(g).degree) ? static_cast<int>(e % 2) : 0;
            suffix[i] = suffix[i + 1] ^ p;
        }
        for (std::size_t i = 0; i < m.factors.size(); ++i) {
            auto [g, e] = m.factors[i];
            int sign = 1;
            if (is_odd_degree(gens.at(g).degree) && suffix[i + 1])
                sign = -1;
            Monomial rest = m;
            if (e == 1)
                rest.factors.erase(rest.factors.begin() + static_cast<std::ptrdiff_t>(i));
            else
                rest.factors[i].second = e - 1;
            out.add_term(std::move(rest), g, c * sign * e);
        }
    }
    return out;
}

/* Left module action of the ring on marked elements; the marked factor stays
   rightmost, so Koszul signs arise only inside the ring part. */
inline TildeElement multiply(const Element& a, const TildeElement& t, const GenTable& gens,
                             const ClassBasis& basis, const Window& w, DropLog* log = nullptr)
{
    TildeElement out;
    for (auto& [m, c] : a.terms)
        for (auto& [key, q] : t.terms) {
            const auto& [m2, v] = key;
            std::vector<std::pair<int, long long>> raw = m.factors;
            raw.insert(raw.end(), m2.factors.begin(), m2.factors.end());
            auto nf = normalize(std::move(raw), exp_combine(m.lam, m2.lam), gens);
            if (!nf)
                continue;
            Drop dr = tilde_classify(nf->second, v, gens, basis, w);
            if (dr != Drop::keep) {
                if (log)
                    log->note(dr);
                continue;
            }
            out.add_term(nf->second, v, c * q * nf->first);
        }
    return out;
}

/* d(x vbar) = (dx) vbar + (-1)^|x| x alpha(dv). */
inline TildeElement tilde_d(const ComplexSpec& s, const TildeElement& t, const Window& w,
                            DropLog* log = nullptr)
{
    TildeElement out;
    Window wide = wide_window(s.basis);
    for (auto& [key, c] : t.terms) {
        const auto& [m, v] = key;
        Element dm = apply_d(s, element_of(m), wide);
        for (auto& [m2, c2] : dm.terms) {
            Drop dr = tilde_classify(m2, v, s.gens, s.basis, w);
            if (dr != Drop::keep) {
                if (log)
                    log->note(dr);
                continue;
            }
            out.add_term(m2, v, c * c2);
        }
        TildeElement adv = alpha(s.d_of(v), s.gens);
        if (!adv.is_zero()) {
            Q sgn = is_odd_degree(degree_of(m, s.gens, s.basis)) ? -1 : 1;
            TildeElement part = multiply(element_of(m, c * sgn), adv, s.gens, s.basis, w, log);
            for (auto& [k2, c2] : part.terms)
                out.add_term(k2.first, k2.second, c2);
        }
    }
    return out;
}

struct AlphaChainResult {
    bool pass = true;
    Monomial sample;
    TildeElement residual; // alpha(d sample) - d(alpha(sample)) in window
};

inline AlphaChainResult check_alpha_chain(const ComplexSpec& s, const Window& w,
                                          const std::vector<Monomial>& samples)
{
    Window wide = wide_window(s.basis);
    for (auto& m : samples) {
        TildeElement lhs;
        for (auto& [k, c] : alpha(apply_d(s, element_of(m), wide), s.gens).terms)
            if (tilde_classify(k.first, k.second, s.gens, s.basis, w) == Drop::keep)
                lhs.add_term(k.first, k.second, c);
        TildeElement rhs = tilde_d(s, alpha(element_of(m), s.gens), w);
        for (auto& [k, c] : rhs.terms)
            lhs.add_term(k.first, k.second, -c);
        if (!lhs.is_zero())
            return { false, m, std::move(lhs) };
    }
    return {};
}

/* Windowed homology of (SV (x) V, d); certification rules as in homology_of.
   Degrees shift by the marked generator, so the ring enumeration widens the
   degree interval accordingly before pairing and filtering. */
inline HomologyReport tilde_homology(const ComplexSpec& s, const Window& w)
{
    Q vmin = 0, vmax = 0;
    for (auto& g : s.gens.gens) {
        vmin = std::min(vmin, g.degree);
        vmax = std::max(vmax, g.degree);
    }
    Window ew = w;
    ew.degree_lo = w.degree_lo - vmax;
    ew.degree_hi = w.degree_hi - vmin;
    std::vector<Monomial> ring = enumerate_window(s.gens, s.basis, ew, EnumMode::plain,
                                                  s.homology_max_basis);

    using Key = std::pair<Monomial, int>;
    std::map<Q, std::vector<Key>> by_deg;
    long long total = 0;
    for (auto& m : ring)
        for (std::size_t v = 0; v < s.gens.size(); ++v)
            if (tilde_classify(m, static_cast<int>(v), s.gens, s.basis, w) == Drop::keep) {
                by_deg[tilde_degree(m, static_cast<int>(v), s.gens, s.basis)]
                    .emplace_back(m, static_cast<int>(v));
                if (++total > s.homology_max_basis)
                    throw WindowTooLarge("window basis exceeds the configured cap");
            }

    bool half = false;
    for (auto& g : s.gens.gens)
        if (!is_integer(g.degree))
            half = true;
    Q step = half ? Q(1, 2) : Q(1);
    for (Q d = w.degree_lo; d <= w.degree_hi; d += step)
        by_deg.try_emplace(d);

    std::map<Q, std::map<Key, std::size_t>> index;
    for (auto& [d, ks] : by_deg) {
        auto& ix = index[d];
        for (std::size_t i = 0; i < ks.size(); ++i)
            ix.emplace(ks[i], i);
    }

    struct Block {
        QMat mat;
        bool lossy = false;
    };
    std::map<Q, Block> blocks;
    for (auto& [d, ks] : by_deg) {
        Block b;
        auto tgt = by_deg.find(d - 1);
        std::size_t tdim = tgt == by_deg.end() ? 0 : tgt->second.size();
        b.mat = QMat(tdim, ks.size());
        DropLog log;
        for (std::size_t c = 0; c < ks.size(); ++c) {
            TildeElement x;
            x.add_term(ks[c].first, ks[c].second, 1);
            TildeElement img = tilde_d(s, x, w, &log);
            for (auto& [tk, tc] : img.terms) {
                auto& ix = index[d - 1];
                auto it = ix.find(tk);
                if (it == ix.end())
                    throw std::logic_error("marked differential image escaped the basis");
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

    for (auto& [d, ks] : by_deg) {
        DegreeRow row;
        row.degree = d;
        row.dim = ks.size();
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
