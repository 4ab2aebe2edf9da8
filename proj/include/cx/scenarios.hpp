#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "complex.hpp"

namespace cx {

inline Window default_window(const ClassBasis& basis)
{
    Window w;
    w.fit_basis(basis);
    return w;
}

/* Circle with one disk class: dm = (1 + M + M^2 + ...) e^[lam0] truncated,
   dM = 0. */
inline ComplexSpec example_s1(const Q& omega = 1)
{
    ComplexSpec s;
    s.label = "s1";
    s.basis.entries = { { "lam0", 2, omega } };
    s.basis.check();
    s.gens.add("m", 0);
    s.gens.add("M", 1);
    s.window.fit_basis(s.basis);
    s.window.max_word_len = 6;
    s.window.box = { { -2, 4 } };
    s.window.degree_lo = -6;
    s.window.degree_hi = 6;

    int M = s.gens.index_of("M");
    Element dm;
    for (long long k = 0;; ++k) {
        Monomial t;
        if (k > 0)
            t.factors = { { M, k } };
        t.lam = { 1 };
        if (classify(t, s.gens, s.basis, s.window) != Drop::keep)
            break;
        dm.add_term(t, 1);
    }
    s.diff = { dm, Element{} };
    return s;
}

/* Purely Morse differential: quantum part empty, d = the given linear map. */
inline ComplexSpec example_no_bubbling(const std::vector<std::pair<std::string, long long>>& morse_gens,
                                       const std::vector<std::pair<std::string, std::string>>& d0_pairs,
                                       const ClassBasis& basis)
{
    ComplexSpec s;
    s.label = "no-bubbling";
    s.basis = basis;
    s.basis.check();
    for (auto& [name, ind] : morse_gens)
        s.gens.add(name, Q(ind));
    s.diff.assign(s.gens.size(), Element{});
    for (auto& [x, y] : d0_pairs) {
        int xi = s.gens.index_of(x), yi = s.gens.index_of(y);
        if (xi < 0 || yi < 0)
            throw std::invalid_argument("unknown generator in Morse pair");
        Monomial t;
        t.factors = { { yi, 1 } };
        t.lam = zero_exponent(s.basis);
        s.diff[static_cast<std::size_t>(xi)].add_term(t, 1);
    }
    s.window.fit_basis(s.basis);

    // d0 must square to zero over Q before any window enters
    for (std::size_t g = 0; g < s.gens.size(); ++g) {
        Window wide = s.window;
        wide.max_word_len = 2;
        Element dd = apply_d(s, apply_d(s, element_of(Monomial{ { { static_cast<int>(g), 1 } }, zero_exponent(s.basis) }), wide), wide);
        if (!dd.is_zero())
            throw std::invalid_argument("Morse differential does not square to zero");
    }
    return s;
}

/* Windowed dimensions of the free graded-commutative algebra on the given
   degrees tensored with the class group: independent counting oracle, no
   shared machinery with homology enumeration. */
inline std::map<Q, long long> sym_lambda_dims(const std::vector<Q>& degrees,
                                              const ClassBasis& basis, const Window& w)
{
    std::map<Q, long long> out;
    std::vector<std::pair<Q, Q>> lam_opts; // (degree shift -mu, weight shift 2w/eps)
    {
        std::function<void(std::size_t, long long, Q)> rec = [&](std::size_t i, long long mu, Q om) {
            if (i == basis.size()) {
                lam_opts.emplace_back(Q(-mu), 2 * om / basis.epsilon_D);
                return;
            }
            for (long long v = w.box[i].first; v <= w.box[i].second; ++v)
                rec(i + 1, mu + v * basis.entries[i].maslov, om + v * basis.entries[i].area);
        };
        rec(0, 0, Q(0));
    }

    std::function<void(std::size_t, long long, Q)> words = [&](std::size_t i, long long len, Q deg) {
        if (i == degrees.size()) {
            for (auto& [dshift, wshift] : lam_opts) {
                Q d = deg + dshift;
                if (d < w.degree_lo || d > w.degree_hi)
                    continue;
                if (w.weight_cutoff && !(Q(len) + wshift < *w.weight_cutoff))
                    continue;
                ++out[d];
            }
            return;
        }
        long long emax = w.max_word_len - len;
        if (is_odd_degree(degrees[i]))
            emax = std::min<long long>(emax, 1);
        for (long long e = 0; e <= emax; ++e)
            words(i + 1, len + e, deg + e * degrees[i]);
    };
    words(0, 0, Q(0));
    return out;
}

/* Degree bookkeeping for the product of a circle with a sphere of dimension
   n-1: which even Maslov numbers a nontrivial disk class must realize. */
struct MaslovVerdict {
    long long n = 0;
    bool even_case = false;
    std::vector<long long> required; // Im(mu) must meet this set

    struct LogEntry {
        std::string branch;   // "free" or "tilde"
        std::string gen;      // generator carrying the forced term
        Q source_degree;      // degree of the generator
        Q target_degree;      // degree of the generator part of the term
        long long mu;         // forced Maslov number: mu = 1 - source + target
        std::string status;   // kept | parity | top-index | q-map
    };
    std::vector<LogEntry> log;
};

inline MaslovVerdict maslov_scan(long long n)
{
    if (n < 2)
        throw std::invalid_argument("maslov-scan requires n >= 2");
    MaslovVerdict v;
    v.n = n;
    v.even_case = (n % 2 == 0);

    auto push = [&](const std::string& branch, const std::string& gen, Q src, Q tgt,
                    const std::string& status) {
        MaslovVerdict::LogEntry e;
        e.branch = branch;
        e.gen = gen;
        e.source_degree = src;
        e.target_degree = tgt;
        Q mu = 1 - src + tgt;
        if (!is_integer(mu))
            throw std::logic_error("non-integer Maslov number in scan");
        e.mu = static_cast<long long>(numerator(mu).convert_to<long long>());
        e.status = status;
        v.log.push_back(e);
        return e.mu;
    };

    // generators m, a, b, M of degree ind - 1 with ind in {0, 1, n-1, n}
    Q dm = -1, da = 0, db = n - 2, dM = n - 1;

    // branch 1: the complex has a free term a(lam) e^lam in some dx
    long long mu_m = push("free", "m", dm, 0, "kept");
    push("free", "a", da, 0, "parity");
    long long mu_b = push("free", "b", db, 0, (n % 2 == 0) ? "parity" : "kept");
    push("free", "M", dM, 0, "top-index");

    // branch 2: no free terms, so the marked complex needs d ybar = c Mbar e^lam
    long long mu_bbar = push("tilde", "b", db, dM, "kept");
    long long mu_mbar = push("tilde", "m", dm, dM, (n % 2 == 0) ? "parity" : "q-map");
    long long mu_abar = push("tilde", "a", da, dM, (n % 2 == 0) ? "kept" : "parity");

    (void)mu_bbar;
    std::set<long long> req;
    req.insert(mu_m); // 2, both branches
    if (v.even_case)
        req.insert(mu_abar); // n
    else
        req.insert(mu_b); // 3 - n
    (void)mu_mbar;
    v.required.assign(req.begin(), req.end());
    return v;
}

} // namespace cx
