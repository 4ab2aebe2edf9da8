#pragma once

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "complex.hpp"

namespace cx {

/* Word-area filtration level: the weight w(x_1...x_k e^lam) = k + 2 omega/eps,
   with intersection-point factors contributing no word length. */
inline Q filtration_level(const Monomial& m, const GenTable& gens, const ClassBasis& basis)
{
    return weight_of(m, gens, basis);
}

/* Pages 0 and 1 of the word-area spectral sequence, binned by exact
   (level, degree). mats holds the d_0 blocks (level, q) -> (level, q-1) on
   page 0 and is empty on page 1. */
struct PageReport {
    int r = 0;
    std::map<std::pair<Q, Q>, long long> dims;
    std::map<std::pair<Q, Q>, QMat> mats;

    long long dim(const Q& level, const Q& degree) const
    {
        auto it = dims.find({ level, degree });
        return it == dims.end() ? 0 : it->second;
    }
    long long degree_total(const Q& degree) const
    {
        long long n = 0;
        for (auto& [key, d] : dims)
            if (key.second == degree)
                n += d;
        return n;
    }
};

/* E0 = associated graded of the window complex: d0 keeps exactly the
   weight-preserving terms of d, which never leave their (level, degree-1)
   bin. E1 = kernel modulo image of d0, exact linear algebra per bin. */
inline std::pair<PageReport, PageReport> pages(const ComplexSpec& s, const Window& w)
{
    std::vector<Monomial> ms = enumerate_window(s.gens, s.basis, w, EnumMode::plain,
                                                s.homology_max_basis);

    using Bin = std::pair<Q, Q>;
    std::map<Bin, std::vector<Monomial>> bins;
    for (auto& m : ms)
        bins[{ filtration_level(m, s.gens, s.basis), degree_of(m, s.gens, s.basis) }]
            .push_back(m);

    std::map<Bin, std::map<Monomial, std::size_t>> index;
    for (auto& [key, v] : bins) {
        auto& ix = index[key];
        for (std::size_t i = 0; i < v.size(); ++i)
            ix.emplace(v[i], i);
    }

    PageReport e0;
    e0.r = 0;
    for (auto& [key, v] : bins)
        e0.dims[key] = static_cast<long long>(v.size());

    for (auto& [key, v] : bins) {
        Bin tgt{ key.first, key.second - 1 };
        auto tb = bins.find(tgt);
        QMat mat(tb == bins.end() ? 0 : tb->second.size(), v.size());
        for (std::size_t c = 0; c < v.size(); ++c) {
            Element img = apply_d(s, element_of(v[c]), w);
            for (auto& [t, coef] : img.terms) {
                if (filtration_level(t, s.gens, s.basis) != key.first)
                    continue; // d - d0 raises the level; not part of this page
                auto it = index.find(tgt);
                if (it == index.end() || !it->second.count(t))
                    throw std::logic_error("level-preserving image escaped its bin");
                mat.at(it->second.at(t), c) = coef;
            }
        }
        e0.mats.emplace(key, std::move(mat));
    }

    PageReport e1;
    e1.r = 1;
    std::map<Bin, std::size_t> ranks;
    for (auto& [key, mat] : e0.mats)
        ranks.emplace(key, rank_of(mat));
    for (auto& [key, v] : bins) {
        long long out = static_cast<long long>(ranks.at(key));
        auto up = ranks.find({ key.first, key.second + 1 });
        long long in = up == ranks.end() ? 0 : static_cast<long long>(up->second);
        long long dim = static_cast<long long>(v.size());
        e1.dims[key] = std::max<long long>(0, dim - out - in);
    }
    return { std::move(e0), std::move(e1) };
}

/* Filtration discipline of a validated differential: the Morse part keeps
   each generator's level, everything else strictly raises it. */
inline bool level_discipline(const ComplexSpec& s)
{
    for (std::size_t g = 0; g < s.gens.size() && g < s.diff.size(); ++g) {
        Monomial x{ { { static_cast<int>(g), 1 } }, zero_exponent(s.basis) };
        Q base = filtration_level(x, s.gens, s.basis);
        for (auto& [m, c] : d0_part(s.diff[g]).terms)
            if (filtration_level(m, s.gens, s.basis) != base)
                return false;
        for (auto& [m, c] : d_plus_part(s.diff[g]).terms)
            if (!(filtration_level(m, s.gens, s.basis) > base))
                return false;
    }
    return true;
}

/* A degree-0 chain map preserves the word-area filtration when every term of
   every generator image sits at or above the generator's own level. */
inline bool filtration_preserved(const ChainMap& phi, const ComplexSpec& src,
                                 const ComplexSpec& tgt)
{
    for (std::size_t g = 0; g < src.gens.size() && g < phi.images.size(); ++g) {
        Monomial x{ { { static_cast<int>(g), 1 } }, zero_exponent(src.basis) };
        Q base = filtration_level(x, src.gens, src.basis);
        for (auto& [m, c] : phi.images[g].terms)
            if (filtration_level(m, tgt.gens, tgt.basis) < base)
                return false;
    }
    return true;
}

} // namespace cx
