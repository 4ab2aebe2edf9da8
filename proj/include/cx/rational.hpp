#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cx {

using Q = boost::multiprecision::cpp_rational;
using Z = boost::multiprecision::cpp_int;

inline std::string to_string(const Q& q)
{
    std::ostringstream os;
    os << q;
    return os.str();
}

inline bool is_integer(const Q& q) { return denominator(q) == 1; }

inline bool is_odd_degree(const Q& q)
{
    if (!is_integer(q))
        throw std::invalid_argument("parity of non-integer degree " + to_string(q));
    return numerator(q) % 2 != 0;
}

/* "p/q" or "p", optional leading '-'. Throws on anything else. */
inline Q parse_rational(const std::string& s)
{
    if (s.empty())
        throw std::invalid_argument("empty rational");
    auto slash = s.find('/');
    auto check_int = [](const std::string& t) {
        if (t.empty())
            throw std::invalid_argument("bad rational");
        size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size())
            throw std::invalid_argument("bad rational");
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i])))
                throw std::invalid_argument("bad rational digit in '" + t + "'");
    };
    if (slash == std::string::npos) {
        check_int(s);
        return Q(Z(s));
    }
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    check_int(num);
    check_int(den);
    Z d(den);
    if (d == 0)
        throw std::invalid_argument("zero denominator");
    return Q(Z(num), d);
}

} // namespace cx
