#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"

namespace cx {

/* One formal class: integer Maslov number, exact nonnegative area. */
struct ClassEntry {
    std::string name;
    long long maslov = 0;
    Q area = 0;
};

struct ClassBasis {
    std::vector<ClassEntry> entries;
    Q epsilon_D = 1; // minimal disk area parameter, > 0

    std::size_t size() const { return entries.size(); }

    int index_of(const std::string& name) const
    {
        for (std::size_t i = 0; i < entries.size(); ++i)
            if (entries[i].name == name)
                return static_cast<int>(i);
        return -1;
    }

    void check() const
    {
        if (!(epsilon_D > 0))
            throw std::invalid_argument("epsilon_D must be > 0");
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (entries[i].area < 0)
                throw std::invalid_argument("class area must be >= 0: " + entries[i].name);
            for (std::size_t j = i + 1; j < entries.size(); ++j)
                if (entries[i].name == entries[j].name)
                    throw std::invalid_argument("duplicate class name " + entries[i].name);
        }
    }
};

/* Exponent vector over the class basis; negative entries allowed. */
using NovikovExponent = std::vector<long long>;

inline NovikovExponent zero_exponent(const ClassBasis& basis)
{
    return NovikovExponent(basis.size(), 0);
}

inline bool is_zero(const NovikovExponent& a)
{
    for (long long c : a)
        if (c != 0)
            return false;
    return true;
}

inline NovikovExponent exp_combine(const NovikovExponent& a, const NovikovExponent& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("exponent basis mismatch");
    NovikovExponent r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] + b[i];
    return r;
}

inline NovikovExponent exp_negate(const NovikovExponent& a)
{
    NovikovExponent r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = -a[i];
    return r;
}

inline std::pair<long long, Q> maslov_area(const NovikovExponent& lam, const ClassBasis& basis)
{
    if (lam.size() != basis.size())
        throw std::invalid_argument("exponent basis mismatch");
    long long mu = 0;
    Q omega = 0;
    for (std::size_t i = 0; i < lam.size(); ++i) {
        mu += lam[i] * basis.entries[i].maslov;
        omega += Q(lam[i]) * basis.entries[i].area;
    }
    return { mu, omega };
}

/* w(x_1...x_k e^lam) = k + 2*omega(lam)/epsilon_D */
inline Q weight(long long word_len, const NovikovExponent& lam, const ClassBasis& basis)
{
    auto [mu, omega] = maslov_area(lam, basis);
    (void)mu;
    return Q(word_len) + 2 * omega / basis.epsilon_D;
}

} // namespace cx
