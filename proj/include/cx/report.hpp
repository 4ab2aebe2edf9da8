#pragma once

#include <cx/complex.hpp>
#include <cx/parse.hpp>
#include <cx/tilde.hpp>

#include <iomanip>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace cx {

/* Machine-readable tail appended to every subcommand's output: flat
   `key = value` lines between ---report--- fences, so scripts can cut the
   block out and grep it without a parser. Keys never contain spaces; a
   degree used inside a key is printed in minimal rational form. */
struct Report {
    std::vector<std::pair<std::string, std::string>> rows;

    void put(const std::string& k, const std::string& v) { rows.push_back({ k, v }); }
    void num(const std::string& k, long long v) { put(k, std::to_string(v)); }
    void flag(const std::string& k, bool v) { put(k, v ? "1" : "0"); }
    void rat(const std::string& k, const Q& v) { put(k, print_rat(v)); }

    std::string str() const
    {
        std::ostringstream os;
        os << "---report---\n";
        for (auto& [k, v] : rows)
            os << k << " = " << v << "\n";
        os << "---report---\n";
        return os.str();
    }
};

inline std::string print_tilde_element(const TildeElement& t, const GenTable& gens,
                                       const ClassBasis& basis)
{
    if (t.terms.empty())
        return "0";
    std::string out;
    for (auto& [key, c] : t.terms) {
        const auto& [m, v] = key;
        bool neg = c < 0;
        Q mag = neg ? -c : c;
        std::vector<std::string> parts;
        if (mag != 1)
            parts.push_back(print_rat(mag));
        for (auto& [g, e] : m.factors) {
            std::string f = gens.at(g).name;
            if (e > 1)
                f += "^" + std::to_string(e);
            parts.push_back(std::move(f));
        }
        if (!is_zero(m.lam))
            parts.push_back("e[" + print_lincomb(m.lam, basis) + "]");
        parts.push_back(gens.at(v).name + "~");
        std::string body;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i)
                body += " * ";
            body += parts[i];
        }
        if (out.empty())
            out = (neg ? "-" : "") + body;
        else
            out += (neg ? " - " : " + ") + body;
    }
    return out;
}

/* Fixed-width homology table plus the per-degree report keys shared by the
   plain, fine and marked-module homology subcommands. */
inline std::string homology_table(const HomologyReport& h)
{
    std::ostringstream os;
    os << std::left << std::setw(8) << "degree" << std::setw(6) << "dim" << std::setw(7)
       << "betti" << std::setw(11) << "certified" << "lossy\n";
    for (auto& r : h.rows) {
        os << std::left << std::setw(8) << print_rat(r.degree) << std::setw(6) << r.dim
           << std::setw(7) << r.betti << std::setw(11) << (r.certified ? "yes" : "no")
           << (r.lossy ? "yes" : "no") << "\n";
    }
    return os.str();
}

inline void homology_keys(Report& rep, const HomologyReport& h)
{
    rep.num("rows", static_cast<long long>(h.rows.size()));
    rep.flag("any_lossy", h.any_lossy);
    for (auto& r : h.rows) {
        std::string d = print_rat(r.degree);
        rep.num("dim." + d, static_cast<long long>(r.dim));
        rep.num("betti." + d, r.betti);
        rep.flag("certified." + d, r.certified);
        rep.flag("lossy." + d, r.lossy);
    }
}

} // namespace cx
