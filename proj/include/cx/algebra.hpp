#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "novikov.hpp"
#include "rational.hpp"

namespace cx {

/* Algebra generator. degree = morse_index - 1 for ring generators; intersection
   generators carry their degree directly (denominator 2 allowed) and always
   sort after every ring generator. */
struct Generator {
    std::string name;
    Q morse_index = 0;
    Q degree = -1;
    int order_key = 0;
    bool is_intersection = false;
};

struct GenTable {
    std::vector<Generator> gens; // position == order_key

    int index_of(const std::string& name) const
    {
        for (std::size_t i = 0; i < gens.size(); ++i)
            if (gens[i].name == name)
                return static_cast<int>(i);
        return -1;
    }

    int add(const std::string& name, Q morse_index, bool intersection = false, std::optional<Q> degree = {})
    {
        if (index_of(name) >= 0)
            throw std::invalid_argument("duplicate generator " + name);
        if (!intersection && !gens.empty() && gens.back().is_intersection)
            throw std::invalid_argument("ring generator declared after an intersection generator");
        Generator g;
        g.name = name;
        g.morse_index = morse_index;
        g.degree = degree ? *degree : morse_index - 1;
        g.order_key = static_cast<int>(gens.size());
        g.is_intersection = intersection;
        gens.push_back(g);
        return g.order_key;
    }

    const Generator& at(int i) const { return gens.at(static_cast<std::size_t>(i)); }
    std::size_t size() const { return gens.size(); }
};

/* Sorted generator powers times a class exponent. */
struct Monomial {
    std::vector<std::pair<int, long long>> factors; // (generator index, exponent >= 1), strictly increasing
    NovikovExponent lam;

    bool operator<(const Monomial& o) const
    {
        if (factors != o.factors)
            return factors < o.factors;
        return lam < o.lam;
    }
    bool operator==(const Monomial& o) const { return factors == o.factors && lam == o.lam; }

    bool is_unit() const { return factors.empty() && is_zero(lam); }
};

inline Monomial unit_monomial(const ClassBasis& basis)
{
    return Monomial{ {}, zero_exponent(basis) };
}

inline Q degree_of(const Monomial& m, const GenTable& gens, const ClassBasis& basis)
{
    Q d = 0;
    for (auto& [g, e] : m.factors)
        d += Q(e) * gens.at(g).degree;
    auto [mu, omega] = maslov_area(m.lam, basis);
    (void)omega;
    return d - mu;
}

/* Intersection factors do not count toward word length. */
inline long long word_len_of(const Monomial& m, const GenTable& gens)
{
    long long k = 0;
    for (auto& [g, e] : m.factors)
        if (!gens.at(g).is_intersection)
            k += e;
    return k;
}

inline Q weight_of(const Monomial& m, const GenTable& gens, const ClassBasis& basis)
{
    return weight(word_len_of(m, gens), m.lam, basis);
}

inline int intersection_count(const Monomial& m, const GenTable& gens)
{
    int n = 0;
    for (auto& [g, e] : m.factors)
        if (gens.at(g).is_intersection)
            n += static_cast<int>(e);
    return n;
}

/* Koszul sign for one transposition; both degrees must be integers. */
inline int transposition_sign(const Generator& a, const Generator& b)
{
    bool oa = is_odd_degree(a.degree), ob = is_odd_degree(b.degree);
    return (oa && ob) ? -1 : 1;
}

/* Sort an as-written factor list into normal form, accumulating the Koszul
   sign. Returns nullopt when an odd-degree generator repeats. */
inline std::optional<std::pair<int, Monomial>>
normalize(std::vector<std::pair<int, long long>> raw, NovikovExponent lam, const GenTable& gens)
{
    int sign = 1;
    // insertion sort; each swap of adjacent factors (g_i^e_i, g_j^e_j) costs
    // (-1)^(e_i |g_i| * e_j |g_j|)
    for (std::size_t i = 1; i < raw.size(); ++i) {
        std::size_t j = i;
        while (j > 0 && raw[j - 1].first > raw[j].first) {
            const Generator& a = gens.at(raw[j - 1].first);
            const Generator& b = gens.at(raw[j].first);
            bool oa = is_odd_degree(a.degree) && (raw[j - 1].second % 2 != 0);
            bool ob = is_odd_degree(b.degree) && (raw[j].second % 2 != 0);
            if (oa && ob)
                sign = -sign;
            std::swap(raw[j - 1], raw[j]);
            --j;
        }
    }
    Monomial m;
    m.lam = std::move(lam);
    for (auto& [g, e] : raw) {
        if (e == 0)
            continue;
        if (e < 0)
            throw std::invalid_argument("negative generator exponent");
        if (!m.factors.empty() && m.factors.back().first == g)
            m.factors.back().second += e;
        else
            m.factors.emplace_back(g, e);
    }
    for (auto& [g, e] : m.factors) {
        if (e > 1 && is_odd_degree(gens.at(g).degree))
            return std::nullopt; // odd square vanishes over Q
    }
    return std::make_pair(sign, std::move(m));
}

/* Truncation window. Absent weight cutoff = no weight truncation. */
struct Window {
    std::optional<Q> weight_cutoff;                    // keep weight < cutoff
    long long max_word_len = 6;                        // keep word length <= max
    std::vector<std::pair<long long, long long>> box;  // per class, inclusive
    Q degree_lo = -8, degree_hi = 8;                   // inclusive

    void fit_basis(const ClassBasis& basis)
    {
        box.resize(basis.size(), { -4, 4 });
    }

    void check(const ClassBasis& basis) const
    {
        if (box.size() != basis.size())
            throw std::invalid_argument("window box does not match class basis");
        for (auto& [lo, hi] : box)
            if (lo > hi)
                throw std::invalid_argument("empty window box");
        if (degree_lo > degree_hi)
            throw std::invalid_argument("empty degree interval");
        if (max_word_len < 0)
            throw std::invalid_argument("negative word length cap");
    }
};

/* Wide-open window for evaluating declared differentials: declarations are
   stored untruncated and clipped only at use sites. */
inline Window wide_window(const ClassBasis& basis)
{
    Window w;
    w.max_word_len = 1000000000;
    w.box.assign(basis.size(), { -1000000000, 1000000000 });
    w.degree_lo = -1000000000;
    w.degree_hi = 1000000000;
    return w;
}

enum class Drop { keep, weight, word, box, degree };

inline Drop classify(const Monomial& m, const GenTable& gens, const ClassBasis& basis, const Window& w)
{
    if (w.weight_cutoff && !(weight_of(m, gens, basis) < *w.weight_cutoff))
        return Drop::weight;
    if (word_len_of(m, gens) > w.max_word_len)
        return Drop::word;
    for (std::size_t i = 0; i < m.lam.size(); ++i)
        if (m.lam[i] < w.box[i].first || m.lam[i] > w.box[i].second)
            return Drop::box;
    Q d = degree_of(m, gens, basis);
    if (d < w.degree_lo || d > w.degree_hi)
        return Drop::degree;
    return Drop::keep;
}

/* Per-monomial truncation accounting; "lossy" = something other than the
   weight quotient or the degree interval edge removed a term. */
struct DropLog {
    bool weight = false, word = false, box = false, degree = false;
    void note(Drop d)
    {
        switch (d) {
        case Drop::weight: weight = true; break;
        case Drop::word: word = true; break;
        case Drop::box: box = true; break;
        case Drop::degree: degree = true; break;
        case Drop::keep: break;
        }
    }
    bool lossy() const { return word || box; }
    bool any() const { return weight || word || box || degree; }
};

struct Element {
    std::map<Monomial, Q> terms;

    bool is_zero() const { return terms.empty(); }
    std::size_t size() const { return terms.size(); }

    void add_term(const Monomial& m, const Q& c)
    {
        if (c == 0)
            return;
        auto it = terms.find(m);
        if (it == terms.end()) {
            terms.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == 0)
                terms.erase(it);
        }
    }

    bool operator==(const Element& o) const { return terms == o.terms; }
};

inline Element element_of(const Monomial& m, const Q& c = 1)
{
    Element e;
    e.add_term(m, c);
    return e;
}

inline Element unit_element(const ClassBasis& basis, const Q& c = 1)
{
    return element_of(unit_monomial(basis), c);
}

/* a + c*b; no truncation (addition creates no new monomials). */
inline Element add_scale(const Element& a, const Q& c, const Element& b)
{
    Element r = a;
    if (c != 0)
        for (auto& [m, cb] : b.terms)
            r.add_term(m, c * cb);
    return r;
}

inline Element scale(const Element& a, const Q& c)
{
    Element r;
    if (c != 0)
        for (auto& [m, ca] : a.terms)
            r.terms.emplace(m, c * ca);
    return r;
}

inline Element truncate(const Element& a, const GenTable& gens, const ClassBasis& basis,
                        const Window& w, DropLog* log = nullptr)
{
    Element r;
    for (auto& [m, c] : a.terms) {
        Drop d = classify(m, gens, basis, w);
        if (d == Drop::keep)
            r.terms.emplace(m, c);
        else if (log)
            log->note(d);
    }
    return r;
}

inline Element multiply(const Element& a, const Element& b, const GenTable& gens,
                        const ClassBasis& basis, const Window& w, DropLog* log = nullptr)
{
    Element r;
    for (auto& [ma, ca] : a.terms)
        for (auto& [mb, cb] : b.terms) {
            std::vector<std::pair<int, long long>> raw = ma.factors;
            raw.insert(raw.end(), mb.factors.begin(), mb.factors.end());
            auto nf = normalize(std::move(raw), exp_combine(ma.lam, mb.lam), gens);
            if (!nf)
                continue;
            Drop d = classify(nf->second, gens, basis, w);
            if (d != Drop::keep) {
                if (log)
                    log->note(d);
                continue;
            }
            r.add_term(nf->second, ca * cb * nf->first);
        }
    return r;
}

inline Element power(const Element& a, long long e, const GenTable& gens,
                     const ClassBasis& basis, const Window& w)
{
    Element r = unit_element(basis);
    for (long long i = 0; i < e; ++i)
        r = multiply(r, a, gens, basis, w);
    return r;
}

/* Degree of a homogeneous element; nullopt for 0 or mixed degrees. */
inline std::optional<Q> homogeneous_degree(const Element& a, const GenTable& gens, const ClassBasis& basis)
{
    std::optional<Q> d;
    for (auto& [m, c] : a.terms) {
        Q dm = degree_of(m, gens, basis);
        if (!d)
            d = dm;
        else if (*d != dm)
            return std::nullopt;
    }
    return d;
}

} // namespace cx
