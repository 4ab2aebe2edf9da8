#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "complex.hpp"

namespace cx {

/* A free term a(lam) e^lam of some dx: no generator factors at all. */
struct FreeTermWitness {
    int gen = -1;
    NovikovExponent lam;
    Q coeff;
    bool high = false;      // Morse index of the carrying generator >= 1
    bool parity_ok = true;  // high witnesses must sit on even Morse indices
};

struct FreeTermReport {
    std::vector<FreeTermWitness> witnesses;
    bool has_high = false;
    bool parity_pass = true;
};

inline FreeTermReport find_free_terms(const ComplexSpec& s)
{
    FreeTermReport r;
    for (std::size_t gi = 0; gi < s.gens.size() && gi < s.diff.size(); ++gi) {
        const Generator& x = s.gens.at(static_cast<int>(gi));
        for (auto& [m, c] : s.diff[gi].terms) {
            if (!m.factors.empty())
                continue;
            FreeTermWitness w;
            w.gen = static_cast<int>(gi);
            w.lam = m.lam;
            w.coeff = c;
            w.high = !x.is_intersection && x.morse_index >= 1;
            if (w.high)
                w.parity_ok = is_integer(x.morse_index) && !is_odd_degree(x.morse_index);
            r.has_high = r.has_high || w.high;
            r.parity_pass = r.parity_pass && w.parity_ok;
            r.witnesses.push_back(std::move(w));
        }
    }
    return r;
}

/* tau = (1/a) x e^{-lam0} and the truncated Neumann inverse c of d(tau):
   d(c tau) == 1 in the window whenever the series converges there. */
struct Certificate {
    int gen = -1;
    NovikovExponent lam0;
    Q coeff = 1;
    Element tau, b, c;
    bool verified = false; // d(c tau) == 1 and dc == 0 in the window
};

inline Certificate acyclicity_certificate(const ComplexSpec& s, const Window& w)
{
    FreeTermReport ft = find_free_terms(s);
    if (ft.witnesses.empty())
        throw std::runtime_error("no free term: the complex carries no acyclicity certificate");

    // minimal area, then minimal Maslov number, then lexicographic exponent
    const FreeTermWitness* best = nullptr;
    auto key = [&](const FreeTermWitness& x) {
        auto [mu, om] = maslov_area(x.lam, s.basis);
        return std::tuple<Q, long long, NovikovExponent>(om, mu, x.lam);
    };
    for (auto& x : ft.witnesses)
        if (!best || key(x) < key(*best))
            best = &x;

    Certificate cert;
    cert.gen = best->gen;
    cert.lam0 = best->lam;
    cert.coeff = best->coeff;

    Monomial tm;
    tm.factors = { { cert.gen, 1 } };
    tm.lam = exp_negate(cert.lam0);
    if (classify(tm, s.gens, s.basis, w) != Drop::keep)
        throw std::runtime_error("window excludes the certificate exponent -lam0");
    cert.tau = element_of(tm, 1 / cert.coeff);

    Element dtau = apply_d(s, cert.tau, w);
    Monomial unit = unit_monomial(s.basis);
    auto u = dtau.terms.find(unit);
    if (u == dtau.terms.end() || u->second != 1)
        throw std::logic_error("free term did not normalize to the unit");
    cert.b = dtau;
    cert.b.add_term(unit, -1);

    long long cap = w.max_word_len + 64;
    for (auto& [lo, hi] : w.box)
        cap += hi - lo;
    cap = std::min<long long>(cap, 4096);
    cert.c = unit_element(s.basis);
    Element pow = unit_element(s.basis);
    for (long long i = 1;; ++i) {
        pow = multiply(pow, cert.b, s.gens, s.basis, w);
        if (pow.is_zero())
            break;
        if (i > cap)
            throw std::runtime_error("Neumann series does not converge in this window");
        cert.c = add_scale(cert.c, i % 2 ? -1 : 1, pow);
    }

    Element ctau = multiply(cert.c, cert.tau, s.gens, s.basis, w);
    cert.verified = apply_d(s, ctau, w) == unit_element(s.basis)
                    && apply_d(s, cert.c, w).is_zero();
    return cert;
}

} // namespace cx
