#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "complex.hpp"

namespace cx {

/* n-labeled oriented metric tree: a root with no ingoing edge, every other
   vertex with exactly one; disk vertices span a connected subtree containing
   the root; edges touching a sphere vertex have length zero. Markers
   0..n1 land on disk vertices (0 on the root), the rest on sphere vertices. */
struct TreeEdge {
    int from = 0;
    int to = 0;
    Q length = 0;
};

struct MarkedTree {
    int n_vertices = 0;
    int root = 0;
    std::vector<TreeEdge> edges;
    std::vector<char> in_disk;        // per vertex
    std::vector<int> markers;         // marker index -> vertex
    long long n1 = 0;                 // markers 0..n1 are disk markers
    std::vector<NovikovExponent> cls; // per vertex
    std::vector<char> constant_map;   // per vertex
};

inline long long special_point_count(const MarkedTree& t, int v)
{
    long long n = 0;
    for (int m : t.markers)
        if (m == v)
            ++n;
    for (auto& e : t.edges)
        if (e.from == v || e.to == v)
            ++n;
    return n;
}

inline std::vector<std::string> validate_tree(const MarkedTree& t)
{
    std::vector<std::string> bad;
    const int n = t.n_vertices;
    if (n < 1) {
        bad.emplace_back("tree needs at least one vertex");
        return bad;
    }
    auto vertex_ok = [&](int v) { return 0 <= v && v < n; };
    if (!vertex_ok(t.root))
        bad.emplace_back("root is not a vertex");
    if (static_cast<int>(t.in_disk.size()) != n || static_cast<int>(t.cls.size()) != n
        || static_cast<int>(t.constant_map.size()) != n) {
        bad.emplace_back("per-vertex tables must cover every vertex");
        return bad;
    }

    std::vector<int> indeg(static_cast<std::size_t>(n), 0);
    bool edges_ok = true;
    for (auto& e : t.edges) {
        if (!vertex_ok(e.from) || !vertex_ok(e.to) || e.from == e.to) {
            bad.emplace_back("edge endpoints must be distinct vertices");
            edges_ok = false;
            continue;
        }
        if (e.length < 0)
            bad.emplace_back("edge length must be >= 0");
        ++indeg[static_cast<std::size_t>(e.to)];
    }
    if (edges_ok && vertex_ok(t.root)) {
        for (int v = 0; v < n; ++v) {
            if (v == t.root && indeg[static_cast<std::size_t>(v)] != 0)
                bad.emplace_back("the root has an ingoing edge");
            if (v != t.root && indeg[static_cast<std::size_t>(v)] != 1)
                bad.emplace_back("vertex " + std::to_string(v)
                                 + " needs exactly one ingoing edge");
        }
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        seen[static_cast<std::size_t>(t.root)] = 1;
        std::vector<int> queue{ t.root };
        while (!queue.empty()) {
            int v = queue.back();
            queue.pop_back();
            for (auto& e : t.edges)
                if (e.from == v && !seen[static_cast<std::size_t>(e.to)]) {
                    seen[static_cast<std::size_t>(e.to)] = 1;
                    queue.push_back(e.to);
                }
        }
        for (int v = 0; v < n; ++v)
            if (!seen[static_cast<std::size_t>(v)])
                bad.emplace_back("vertex " + std::to_string(v)
                                 + " is not reachable from the root");
    }

    if (vertex_ok(t.root) && !t.in_disk[static_cast<std::size_t>(t.root)])
        bad.emplace_back("the root must be a disk vertex");
    for (auto& e : t.edges) {
        if (!vertex_ok(e.from) || !vertex_ok(e.to))
            continue;
        bool df = t.in_disk[static_cast<std::size_t>(e.from)];
        bool dt = t.in_disk[static_cast<std::size_t>(e.to)];
        if (dt && !df)
            bad.emplace_back("disk vertices must span a subtree containing the root");
        if ((!df || !dt) && e.length != 0)
            bad.emplace_back("an edge touching a sphere vertex must have length 0");
    }

    if (t.markers.empty()) {
        bad.emplace_back("marker 0 is required");
    } else {
        if (t.n1 < 0 || t.n1 >= static_cast<long long>(t.markers.size()))
            bad.emplace_back("disk marker count out of range");
        if (vertex_ok(t.markers[0]) && t.markers[0] != t.root)
            bad.emplace_back("marker 0 must sit on the root");
        for (std::size_t i = 0; i < t.markers.size(); ++i) {
            int v = t.markers[i];
            if (!vertex_ok(v)) {
                bad.emplace_back("marker " + std::to_string(i) + " is not on a vertex");
                continue;
            }
            bool disk = t.in_disk[static_cast<std::size_t>(v)];
            if (static_cast<long long>(i) <= t.n1 && !disk)
                bad.emplace_back("marker " + std::to_string(i) + " must sit on a disk vertex");
            if (static_cast<long long>(i) > t.n1 && disk)
                bad.emplace_back("marker " + std::to_string(i)
                                 + " must sit on a sphere vertex");
        }
    }

    for (std::size_t v = 1; v < t.cls.size(); ++v)
        if (t.cls[v].size() != t.cls[0].size())
            bad.emplace_back("class exponents must share one basis");

    // stability of ghost components: enough special points and a zero-length
    // chain out to a non-constant vertex
    for (int v = 0; v < n; ++v) {
        if (!t.constant_map[static_cast<std::size_t>(v)])
            continue;
        if (special_point_count(t, v) < 3)
            bad.emplace_back("constant vertex " + std::to_string(v)
                             + " has fewer than 3 special points");
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        seen[static_cast<std::size_t>(v)] = 1;
        std::vector<int> queue{ v };
        bool escaped = false;
        while (!queue.empty() && !escaped) {
            int u = queue.back();
            queue.pop_back();
            for (auto& e : t.edges) {
                if (e.length != 0)
                    continue;
                int o = e.from == u ? e.to : (e.to == u ? e.from : -1);
                if (o < 0 || seen[static_cast<std::size_t>(o)])
                    continue;
                if (!t.constant_map[static_cast<std::size_t>(o)]) {
                    escaped = true;
                    break;
                }
                seen[static_cast<std::size_t>(o)] = 1;
                queue.push_back(o);
            }
        }
        if (!escaped)
            bad.emplace_back("constant vertex " + std::to_string(v)
                             + " has no zero-length chain to a non-constant vertex");
    }
    return bad;
}

/* Expected dimension of a tree moduli space with top generator degree
   x, end degrees x_i and total class lam:
     plain:  |x| - sum |x_i| + mu(lam) - 1
     fine:   |x| - sum |x_i| - 1   (strip ends carry lam inside their degrees) */
enum class DimMode { plain, fine };

inline Q expected_dimension(const Q& top, const std::vector<Q>& ends,
                            const NovikovExponent& lam, const ClassBasis& basis,
                            DimMode mode = DimMode::plain)
{
    Q d = top;
    for (auto& e : ends)
        d -= e;
    if (mode == DimMode::plain)
        d += Q(maslov_area(lam, basis).first);
    return d - 1;
}

/* One boundary stratum of a one-dimensional moduli space: the ordered ends S
   split as S = <S' u S''>, a joint generator y, and a class splitting
   lam = lam' + lam''. sign = eps({y}, <S', y>) eps(S'', S) with the
   convention ab = (-1)^(|a| |b|) ba. */
struct Splitting {
    std::vector<int> left;  // S', order inherited from S
    int y = 0;
    std::vector<int> right; // S'', order inherited from S
    NovikovExponent lam_left, lam_right;
    int sign = 1;
};

namespace detail {

/* Sign moving y to the front of <S', y>; y enters before equal generators,
   so it crosses exactly the strictly smaller ones. */
inline int sign_join_front(int y, const std::vector<int>& left, const GenTable& gens)
{
    if (!is_odd_degree(gens.at(y).degree))
        return 1;
    int cross = 0;
    for (int g : left)
        if (g < y && is_odd_degree(gens.at(g).degree))
            ++cross;
    return cross % 2 ? -1 : 1;
}

/* Sign moving the sub-multiset at the masked positions to the front of ends. */
inline int sign_move_front(const std::vector<int>& ends, const std::vector<char>& in_right,
                           const GenTable& gens)
{
    int cross = 0;
    for (std::size_t j = 0; j < ends.size(); ++j) {
        if (!in_right[j] || !is_odd_degree(gens.at(ends[j]).degree))
            continue;
        for (std::size_t i = 0; i < j; ++i)
            if (!in_right[i] && is_odd_degree(gens.at(ends[i]).degree))
                ++cross;
    }
    return cross % 2 ? -1 : 1;
}

inline void lam_splits(const NovikovExponent& lam,
                       const std::vector<std::pair<long long, long long>>& box,
                       std::vector<std::pair<NovikovExponent, NovikovExponent>>& out)
{
    NovikovExponent cur(lam.size(), 0);
    long long guard = 1;
    for (std::size_t i = 0; i < box.size(); ++i) {
        long long w = box[i].second - box[i].first + 1;
        if (w <= 0 || guard > 1000000 / w)
            throw WindowTooLarge("class-splitting box exceeds the configured cap");
        guard *= w;
    }
    std::vector<std::size_t> stack;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == lam.size()) {
            NovikovExponent rest(lam.size());
            for (std::size_t k = 0; k < lam.size(); ++k)
                rest[k] = lam[k] - cur[k];
            out.emplace_back(cur, std::move(rest));
            return;
        }
        for (long long v = box[i].first; v <= box[i].second; ++v) {
            long long r = lam[i] - v;
            if (r < box[i].first || r > box[i].second)
                continue;
            cur[i] = v;
            rec(i + 1);
        }
        cur[i] = 0;
    };
    rec(0);
}

} // namespace detail

inline std::vector<Splitting> boundary_splittings(
    const std::vector<int>& ends, const NovikovExponent& lam, const GenTable& gens,
    const std::vector<std::pair<long long, long long>>& box)
{
    if (lam.size() != box.size())
        throw std::invalid_argument("class exponent and box sizes differ");
    for (std::size_t i = 1; i < ends.size(); ++i)
        if (ends[i - 1] > ends[i])
            throw std::invalid_argument("ends must respect the generator order");
    for (int g : ends)
        gens.at(g); // range check

    std::vector<std::pair<NovikovExponent, NovikovExponent>> lams;
    detail::lam_splits(lam, box, lams);

    std::vector<Splitting> out;
    const std::size_t k = ends.size();
    if (k >= 63)
        throw WindowTooLarge("too many ends to enumerate splittings");
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << k); ++mask) {
        Splitting base;
        std::vector<char> in_right(k, 0);
        for (std::size_t i = 0; i < k; ++i) {
            if (mask & (std::uint64_t(1) << i)) {
                in_right[i] = 1;
                base.right.push_back(ends[i]);
            } else {
                base.left.push_back(ends[i]);
            }
        }
        int eps_right = detail::sign_move_front(ends, in_right, gens);
        for (std::size_t y = 0; y < gens.size(); ++y) {
            int eps_join = detail::sign_join_front(static_cast<int>(y), base.left, gens);
            for (auto& [l1, l2] : lams) {
                Splitting s = base;
                s.y = static_cast<int>(y);
                s.lam_left = l1;
                s.lam_right = l2;
                s.sign = eps_join * eps_right;
                out.push_back(std::move(s));
            }
        }
    }
    return out;
}

/* Independent d^2 check: re-derives every second-order term by pairing raw
   differential coefficients through the splitting signs eps({y}, <S', y>)
   and eps(S'', S), then compares the accumulated sums termwise against the
   chain module's own residual. Both sides must agree and vanish. Splittings
   that differ only by relabeling equal ends collapse into the algebra's
   normal form here (words with a repeated odd generator are zero), so each
   second-order word is paired exactly once. drop_signs treats every
   reordering as even, the deliberate negative control. */
struct TreeD2Result {
    bool pass = true;
    std::vector<std::string> mismatches;
};

inline TreeD2Result d_squared_consistency(const ComplexSpec& s, const Window& w,
                                          bool drop_signs = false)
{
    TreeD2Result res;
    using Key = std::pair<std::vector<std::pair<int, long long>>, NovikovExponent>;

    auto group = [](const std::vector<int>& flat) {
        std::vector<std::pair<int, long long>> g;
        for (int v : flat) {
            if (!g.empty() && g.back().first == v)
                ++g.back().second;
            else
                g.emplace_back(v, 1);
        }
        return g;
    };

    for (std::size_t x = 0; x < s.gens.size() && x < s.diff.size(); ++x) {
        std::map<Key, Q> acc;
        for (auto& [m1, c1] : s.diff[x].terms) {
            std::vector<int> ends1;
            for (auto& [g, e] : m1.factors)
                for (long long i = 0; i < e; ++i)
                    ends1.push_back(g);
            for (std::size_t p = 0; p < ends1.size(); ++p) {
                int y = ends1[p];
                if (y >= static_cast<int>(s.diff.size()))
                    continue;
                std::vector<int> left = ends1;
                left.erase(left.begin() + static_cast<std::ptrdiff_t>(p));
                int eps1 = drop_signs ? 1 : detail::sign_join_front(y, left, s.gens);
                for (auto& [m2, c2] : s.diff[static_cast<std::size_t>(y)].terms) {
                    std::vector<int> ends2;
                    for (auto& [g, e] : m2.factors)
                        for (long long i = 0; i < e; ++i)
                            ends2.push_back(g);

                    // stable merge giving x_{S''} x_{S'} its sorted order;
                    // S'' copies precede equal S' copies
                    std::vector<int> total;
                    std::vector<char> in_right;
                    std::size_t a = 0, b = 0;
                    while (a < left.size() || b < ends2.size()) {
                        bool take_left = b == ends2.size()
                                         || (a < left.size() && left[a] < ends2[b]);
                        if (take_left) {
                            total.push_back(left[a++]);
                            in_right.push_back(0);
                        } else {
                            total.push_back(ends2[b++]);
                            in_right.push_back(1);
                        }
                    }
                    int eps2 = drop_signs ? 1 : detail::sign_move_front(total, in_right, s.gens);

                    auto nf = normalize(group(total), exp_combine(m1.lam, m2.lam), s.gens);
                    if (!nf)
                        continue; // an odd generator repeats: the word is zero
                    if (classify(nf->second, s.gens, s.basis, w) != Drop::keep)
                        continue;
                    Key key{ nf->second.factors, nf->second.lam };
                    Q add = c1 * c2 * eps1 * eps2 * nf->first;
                    auto it = acc.find(key);
                    if (it == acc.end())
                        acc.emplace(std::move(key), std::move(add));
                    else
                        it->second += add;
                }
            }
        }

        Element module = apply_d(s, s.diff[x], w);
        auto show = [&](const Key& key) {
            std::string out;
            for (auto& [g, e] : key.first) {
                if (!out.empty())
                    out += ' ';
                out += s.gens.at(g).name;
                if (e != 1)
                    out += '^' + std::to_string(e);
            }
            if (out.empty())
                out = "1";
            for (std::size_t i = 0; i < key.second.size(); ++i)
                if (key.second[i] != 0)
                    out += " e^" + std::to_string(key.second[i]) + "."
                           + s.basis.entries[i].name;
            return out;
        };
        auto note = [&](const Key& key, const Q& split_sum, const Q& residual) {
            res.pass = false;
            res.mismatches.push_back(
                "d^2 " + s.gens.at(static_cast<int>(x)).name + ": ends " + show(key)
                + " splitting sum " + to_string(split_sum) + " vs module "
                + to_string(residual));
        };
        for (auto& [key, sum] : acc) {
            Q residual = 0;
            auto it = module.terms.find(Monomial{ key.first, key.second });
            if (it != module.terms.end())
                residual = it->second;
            if (sum != residual || sum != 0)
                note(key, sum, residual);
        }
        for (auto& [m, c] : module.terms) {
            if (c == 0)
                continue;
            Key key{ m.factors, m.lam };
            if (!acc.count(key))
                note(key, 0, c);
        }
    }
    return res;
}

} // namespace cx
