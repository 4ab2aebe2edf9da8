#pragma once

#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fine.hpp"

namespace cx {

struct ParseError : std::runtime_error {
    int line = 0, col = 0;
    ParseError(int l, int c, const std::string& msg)
        : std::runtime_error("line " + std::to_string(l) + ", col " + std::to_string(c) + ": " + msg)
        , line(l)
        , col(c)
    {
    }
};

namespace lex {

enum class Kind { ident, number, plus, minus, star, caret, slash, lparen, rparen,
                  lbracket, rbracket, eq, dot, dotdot, end };

struct Token {
    Kind kind = Kind::end;
    std::string text;
    int col = 1;
};

inline std::vector<Token> tokens_of(const std::string& s, int line)
{
    std::vector<Token> out;
    std::size_t i = 0;
    auto push = [&](Kind k, std::size_t begin, std::size_t len) {
        out.push_back({ k, s.substr(begin, len), static_cast<int>(begin) + 1 });
    };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '#')
            break;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t b = i;
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '\''))
                ++i;
            push(Kind::ident, b, i - b);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t b = i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                ++i;
            push(Kind::number, b, i - b);
            continue;
        }
        if (c == '.' && i + 1 < s.size() && s[i + 1] == '.') {
            push(Kind::dotdot, i, 2);
            i += 2;
            continue;
        }
        Kind k;
        switch (c) {
        case '+': k = Kind::plus; break;
        case '-': k = Kind::minus; break;
        case '*': k = Kind::star; break;
        case '^': k = Kind::caret; break;
        case '/': k = Kind::slash; break;
        case '(': k = Kind::lparen; break;
        case ')': k = Kind::rparen; break;
        case '[': k = Kind::lbracket; break;
        case ']': k = Kind::rbracket; break;
        case '=': k = Kind::eq; break;
        case '.': k = Kind::dot; break;
        default:
            throw ParseError(line, static_cast<int>(i) + 1,
                             std::string("unexpected character '") + c + "'");
        }
        push(k, i, 1);
        ++i;
    }
    out.push_back({ Kind::end, "", static_cast<int>(s.size()) + 1 });
    return out;
}

struct Cursor {
    std::vector<Token> t;
    std::size_t i = 0;
    int line = 0;

    const Token& peek(std::size_t ahead = 0) const
    {
        return t[std::min(i + ahead, t.size() - 1)];
    }
    bool at(Kind k) const { return peek().kind == k; }
    bool accept(Kind k)
    {
        if (!at(k))
            return false;
        ++i;
        return true;
    }
    Token expect(Kind k, const std::string& what)
    {
        if (!at(k))
            throw ParseError(line, peek().col, "expected " + what);
        return t[i++];
    }
    [[noreturn]] void fail(const std::string& msg) const
    {
        throw ParseError(line, peek().col, msg);
    }
};

inline long long integer_of(Cursor& c, const std::string& what)
{
    bool neg = c.accept(Kind::minus);
    if (!neg)
        c.accept(Kind::plus);
    Token t = c.expect(Kind::number, what);
    try {
        long long v = std::stoll(t.text);
        return neg ? -v : v;
    } catch (const std::exception&) {
        throw ParseError(c.line, t.col, "integer out of range");
    }
}

inline Q rational_of(Cursor& c, const std::string& what)
{
    bool neg = c.accept(Kind::minus);
    if (!neg)
        c.accept(Kind::plus);
    Token num = c.expect(Kind::number, what);
    Q q(Z(num.text));
    if (c.accept(Kind::slash)) {
        Token den = c.expect(Kind::number, "a denominator");
        Z d(den.text);
        if (d == 0)
            throw ParseError(c.line, den.col, "zero denominator");
        q = Q(Z(num.text), d);
    }
    return neg ? -q : q;
}

} // namespace lex

/* integer linear combination of class names: "lam0", "2 lam1 - lam0" */
inline NovikovExponent parse_lincomb(lex::Cursor& c, const ClassBasis& basis)
{
    using lex::Kind;
    NovikovExponent lam = zero_exponent(basis);
    int sign = c.accept(Kind::minus) ? -1 : 1;
    for (;;) {
        long long coeff = 1;
        if (c.at(Kind::number)) {
            coeff = lex::integer_of(c, "a coefficient");
            c.accept(Kind::star);
        }
        lex::Token name = c.expect(Kind::ident, "a class name");
        int idx = basis.index_of(name.text);
        if (idx < 0)
            throw ParseError(c.line, name.col, "unknown class " + name.text);
        lam[static_cast<std::size_t>(idx)] += sign * coeff;
        if (c.accept(Kind::plus))
            sign = 1;
        else if (c.accept(Kind::minus))
            sign = -1;
        else
            break;
    }
    return lam;
}

namespace detail {

inline Element parse_expr(lex::Cursor& c, const GenTable& gens, const ClassBasis& basis,
                          const Window& wide);

inline Element parse_factor(lex::Cursor& c, const GenTable& gens, const ClassBasis& basis,
                            const Window& wide)
{
    using lex::Kind;
    if (c.accept(Kind::lparen)) {
        Element e = parse_expr(c, gens, basis, wide);
        c.expect(Kind::rparen, "')'");
        if (c.accept(Kind::caret)) {
            lex::Token t = c.expect(Kind::number, "an exponent");
            return power(e, std::stoll(t.text), gens, basis, wide);
        }
        return e;
    }
    if (c.at(Kind::number)) {
        Q q = lex::rational_of(c, "a number");
        return unit_element(basis, q);
    }
    if (c.at(Kind::ident)) {
        lex::Token name = c.t[c.i++];
        if (name.text == "e" && c.accept(Kind::lbracket)) {
            NovikovExponent lam = parse_lincomb(c, basis);
            c.expect(Kind::rbracket, "']'");
            return element_of(Monomial{ {}, std::move(lam) });
        }
        int idx = gens.index_of(name.text);
        if (idx < 0)
            throw ParseError(c.line, name.col, "unknown generator " + name.text);
        long long e = 1;
        if (c.accept(Kind::caret)) {
            lex::Token t = c.expect(Kind::number, "an exponent");
            try {
                e = std::stoll(t.text);
            } catch (const std::exception&) {
                throw ParseError(c.line, t.col, "exponent out of range");
            }
        }
        auto nf = normalize({ { idx, e } }, zero_exponent(basis), gens);
        if (!nf)
            return Element{}; // odd square
        return element_of(nf->second, nf->first);
    }
    c.fail("expected a factor");
}

inline Element parse_term(lex::Cursor& c, const GenTable& gens, const ClassBasis& basis,
                          const Window& wide)
{
    Element acc = parse_factor(c, gens, basis, wide);
    while (c.accept(lex::Kind::star))
        acc = multiply(acc, parse_factor(c, gens, basis, wide), gens, basis, wide);
    return acc;
}

inline Element parse_expr(lex::Cursor& c, const GenTable& gens, const ClassBasis& basis,
                          const Window& wide)
{
    using lex::Kind;
    int sign = 1;
    if (c.accept(Kind::minus))
        sign = -1;
    else
        c.accept(Kind::plus);
    Element acc = scale(parse_term(c, gens, basis, wide), sign);
    for (;;) {
        if (c.accept(Kind::plus))
            sign = 1;
        else if (c.accept(Kind::minus))
            sign = -1;
        else
            break;
        acc = add_scale(acc, sign, parse_term(c, gens, basis, wide));
    }
    return acc;
}

} // namespace detail

inline Element parse_element(const std::string& text, const GenTable& gens,
                             const ClassBasis& basis, int line = 1)
{
    lex::Cursor c{ lex::tokens_of(text, line), 0, line };
    Element e = detail::parse_expr(c, gens, basis, wide_window(basis));
    if (!c.at(lex::Kind::end))
        c.fail("trailing input after expression");
    return e;
}

/* ------------------------------------------------------------------ */
/* file parsing                                                        */
/* ------------------------------------------------------------------ */

struct ParsedSpec {
    bool is_fine = false;
    ComplexSpec complex;
    FineSpec fine;
};

namespace detail {

struct SrcLine {
    int no = 0;
    std::string text;
};

using Section = std::vector<SrcLine>;

inline std::map<std::string, Section> split_sections(const std::string& text,
                                                     const std::set<std::string>& known)
{
    std::map<std::string, Section> out;
    std::istringstream in(text);
    std::string raw;
    std::string cur;
    int no = 0;
    while (std::getline(in, raw)) {
        ++no;
        std::string s = raw;
        auto hash = s.find('#');
        if (hash != std::string::npos)
            s.erase(hash);
        std::size_t a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos)
            continue;
        std::size_t b = s.find_last_not_of(" \t\r");
        s = s.substr(a, b - a + 1);
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ParseError(no, 1, "unterminated section header");
            cur = s.substr(1, s.size() - 2);
            if (!known.count(cur))
                throw ParseError(no, 1, "unknown section [" + cur + "]");
            out[cur]; // ensure presence even when empty
            continue;
        }
        if (cur.empty())
            throw ParseError(no, 1, "declaration before any section header");
        out[cur].push_back({ no, s });
    }
    return out;
}

inline lex::Cursor cursor_of(const SrcLine& l)
{
    return { lex::tokens_of(l.text, l.no), 0, l.no };
}

inline void parse_class_lines(const Section& sec, ClassBasis& basis,
                              std::vector<SrcLine>* embeds = nullptr)
{
    using lex::Kind;
    for (auto& line : sec) {
        lex::Cursor c = cursor_of(line);
        if (embeds && c.peek(0).kind == Kind::ident && c.peek(0).text == "embed"
            && c.peek(1).kind == Kind::ident && c.peek(2).kind == Kind::dot) {
            embeds->push_back(line);
            continue;
        }
        ClassEntry e;
        e.name = c.expect(Kind::ident, "a class name").text;
        if (e.name == "e")
            throw ParseError(line.no, 1, "the name 'e' is reserved");
        lex::Token key = c.expect(Kind::ident, "maslov=");
        if (key.text != "maslov")
            throw ParseError(line.no, key.col, "expected maslov=");
        c.expect(Kind::eq, "'='");
        e.maslov = lex::integer_of(c, "a Maslov number");
        key = c.expect(Kind::ident, "area=");
        if (key.text != "area")
            throw ParseError(line.no, key.col, "expected area=");
        c.expect(Kind::eq, "'='");
        e.area = lex::rational_of(c, "an area");
        if (!c.at(Kind::end))
            c.fail("trailing input after class declaration");
        basis.entries.push_back(std::move(e));
    }
}

inline void parse_generator_lines(const Section& sec, GenTable& gens)
{
    using lex::Kind;
    for (auto& line : sec) {
        lex::Cursor c = cursor_of(line);
        std::string name = c.expect(Kind::ident, "a generator name").text;
        if (name == "e")
            throw ParseError(line.no, 1, "the name 'e' is reserved");
        lex::Token key = c.expect(Kind::ident, "index=");
        if (key.text != "index")
            throw ParseError(line.no, key.col, "expected index=");
        c.expect(Kind::eq, "'='");
        long long idx = lex::integer_of(c, "a Morse index");
        if (!c.at(Kind::end))
            c.fail("trailing input after generator declaration");
        try {
            gens.add(name, Q(idx));
        } catch (const std::exception& e) {
            throw ParseError(line.no, 1, e.what());
        }
    }
}

inline std::vector<std::pair<std::string, Q>> parse_intersection_lines(const Section& sec)
{
    using lex::Kind;
    std::vector<std::pair<std::string, Q>> out;
    for (auto& line : sec) {
        lex::Cursor c = cursor_of(line);
        std::string name = c.expect(Kind::ident, "an intersection name").text;
        if (name == "e")
            throw ParseError(line.no, 1, "the name 'e' is reserved");
        lex::Token key = c.expect(Kind::ident, "degree=");
        if (key.text != "degree")
            throw ParseError(line.no, key.col, "expected degree=");
        c.expect(Kind::eq, "'='");
        Q deg = lex::rational_of(c, "a degree");
        if (!c.at(Kind::end))
            c.fail("trailing input after intersection declaration");
        out.emplace_back(std::move(name), std::move(deg));
    }
    return out;
}

struct FileConfig {
    std::optional<Q> epsilon;
    std::optional<Q> cutoff;
    std::optional<long long> max_word;
    std::vector<std::pair<std::string, std::pair<long long, long long>>> box;
    std::optional<std::pair<Q, Q>> degrees;
    std::optional<long long> guard;
    std::optional<bool> allow_flat;
};

inline FileConfig parse_config_lines(const Section& sec)
{
    using lex::Kind;
    FileConfig cfg;
    for (auto& line : sec) {
        lex::Cursor c = cursor_of(line);
        std::string key = c.expect(Kind::ident, "a config key").text;
        while (c.at(Kind::dot)) {
            c.accept(Kind::dot);
            key += "." + c.expect(Kind::ident, "a config key part").text;
        }
        c.expect(Kind::eq, "'='");
        if (key == "epsilon_D") {
            cfg.epsilon = lex::rational_of(c, "a rational");
        } else if (key == "window.weight_cutoff") {
            cfg.cutoff = lex::rational_of(c, "a rational");
        } else if (key == "window.max_word_len") {
            cfg.max_word = lex::integer_of(c, "an integer");
        } else if (key == "window.degrees") {
            Q lo = lex::rational_of(c, "a degree bound");
            c.expect(Kind::dotdot, "'..'");
            Q hi = lex::rational_of(c, "a degree bound");
            cfg.degrees = { lo, hi };
        } else if (key.rfind("window.box.", 0) == 0) {
            std::string cls = key.substr(std::string("window.box.").size());
            long long lo = lex::integer_of(c, "a box bound");
            c.expect(Kind::dotdot, "'..'");
            long long hi = lex::integer_of(c, "a box bound");
            cfg.box.emplace_back(cls, std::make_pair(lo, hi));
        } else if (key == "homology_max_basis") {
            cfg.guard = lex::integer_of(c, "an integer");
        } else if (key == "allow_flat") {
            lex::Token t = c.expect(Kind::ident, "true or false");
            if (t.text == "true")
                cfg.allow_flat = true;
            else if (t.text == "false")
                cfg.allow_flat = false;
            else
                throw ParseError(line.no, t.col, "expected true or false");
        } else {
            throw ParseError(line.no, 1, "unknown config key " + key);
        }
        if (!c.at(Kind::end))
            c.fail("trailing input after config value");
    }
    return cfg;
}

inline Window window_of(const FileConfig& cfg, const ClassBasis& basis)
{
    Window w;
    w.fit_basis(basis);
    if (cfg.cutoff)
        w.weight_cutoff = *cfg.cutoff;
    if (cfg.max_word)
        w.max_word_len = *cfg.max_word;
    if (cfg.degrees) {
        w.degree_lo = cfg.degrees->first;
        w.degree_hi = cfg.degrees->second;
    }
    for (auto& [cls, range] : cfg.box) {
        int idx = basis.index_of(cls);
        if (idx < 0)
            throw ParseError(0, 0, "window.box names unknown class " + cls);
        w.box[static_cast<std::size_t>(idx)] = range;
    }
    return w;
}

inline void parse_diff_lines(const Section& sec, ComplexSpec& s)
{
    using lex::Kind;
    s.diff.assign(s.gens.size(), Element{});
    std::set<int> seen;
    for (auto& line : sec) {
        lex::Cursor c = cursor_of(line);
        lex::Token d = c.expect(Kind::ident, "'d'");
        if (d.text != "d")
            throw ParseError(line.no, d.col, "differential lines start with 'd'");
        lex::Token name = c.expect(Kind::ident, "a generator name");
        int idx = s.gens.index_of(name.text);
        if (idx < 0)
            throw ParseError(line.no, name.col, "unknown generator " + name.text);
        if (!seen.insert(idx).second)
            throw ParseError(line.no, name.col, "duplicate differential for " + name.text);
        c.expect(Kind::eq, "'='");
        try {
            s.diff[static_cast<std::size_t>(idx)] =
                parse_expr(c, s.gens, s.basis, wide_window(s.basis));
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(line.no, 1, e.what());
        }
        if (!c.at(Kind::end))
            c.fail("trailing input after differential");
    }
}

inline void apply_order(const Section& sec, ComplexSpec& s)
{
    using lex::Kind;
    if (sec.empty())
        return;
    std::vector<std::string> names;
    for (auto& line : sec) {
        lex::Cursor c = cursor_of(line);
        while (c.at(Kind::ident))
            names.push_back(c.t[c.i++].text);
        if (!c.at(Kind::end))
            c.fail("expected generator names");
    }
    if (names.size() != s.gens.size())
        throw ParseError(sec.front().no, 1, "[order] must list every generator exactly once");
    GenTable reordered;
    for (auto& n : names) {
        int idx = s.gens.index_of(n);
        if (idx < 0)
            throw ParseError(sec.front().no, 1, "[order] names unknown generator " + n);
        const Generator& g = s.gens.at(idx);
        try {
            reordered.add(g.name, g.morse_index, g.is_intersection, g.degree);
        } catch (const std::exception& e) {
            throw ParseError(sec.front().no, 1, e.what());
        }
    }
    s.gens = std::move(reordered);
}

} // namespace detail

inline ParsedSpec parse_spec_text(const std::string& text, const std::string& label = "")
{
    using detail::Section;
    static const std::set<std::string> known = {
        "config", "classes", "generators", "order", "differential",
        "classes.cl0", "classes.cl1", "generators.cl0", "generators.cl1",
        "differential.cl0", "differential.cl1", "bar_classes", "intersections",
        "fine_differential"
    };
    auto sections = detail::split_sections(text, known);
    auto sec = [&](const std::string& name) -> const Section& {
        static const Section empty;
        auto it = sections.find(name);
        return it == sections.end() ? empty : it->second;
    };
    auto has = [&](const std::string& name) { return sections.count(name) != 0; };

    bool fine = has("intersections") || has("bar_classes") || has("fine_differential")
                || has("classes.cl0") || has("classes.cl1");
    static const std::set<std::string> plain_only = { "classes", "generators", "order",
                                                      "differential" };
    for (auto& [name, lines] : sections) {
        (void)lines;
        bool po = plain_only.count(name) != 0;
        if (fine && po)
            throw ParseError(0, 0, "section [" + name + "] is not allowed in a fine module file");
        if (!fine && !po && name != "config")
            throw ParseError(0, 0, "section [" + name + "] requires a fine module file");
    }

    detail::FileConfig cfg = detail::parse_config_lines(sec("config"));

    ParsedSpec out;
    out.is_fine = fine;
    if (!fine) {
        ComplexSpec& s = out.complex;
        s.label = label;
        detail::parse_class_lines(sec("classes"), s.basis);
        if (cfg.epsilon)
            s.basis.epsilon_D = *cfg.epsilon;
        s.window = detail::window_of(cfg, s.basis);
        if (cfg.guard)
            s.homology_max_basis = *cfg.guard;
        if (cfg.allow_flat)
            s.allow_flat = *cfg.allow_flat;
        detail::parse_generator_lines(sec("generators"), s.gens);
        detail::apply_order(sec("order"), s);
        detail::parse_diff_lines(sec("differential"), s);
        return out;
    }

    ComplexSpec cl0, cl1;
    cl0.label = label + ".cl0";
    cl1.label = label + ".cl1";
    detail::parse_class_lines(sec("classes.cl0"), cl0.basis);
    detail::parse_class_lines(sec("classes.cl1"), cl1.basis);

    ClassBasis bar;
    std::vector<detail::SrcLine> embed_lines;
    detail::parse_class_lines(sec("bar_classes"), bar, &embed_lines);
    if (cfg.epsilon) {
        bar.epsilon_D = *cfg.epsilon;
        cl0.basis.epsilon_D = *cfg.epsilon;
        cl1.basis.epsilon_D = *cfg.epsilon;
    }

    detail::parse_generator_lines(sec("generators.cl0"), cl0.gens);
    detail::parse_generator_lines(sec("generators.cl1"), cl1.gens);

    Window main = detail::window_of(cfg, bar);
    auto side_window = [&](const ClassBasis& basis) {
        Window w = main;
        w.box.clear();
        w.fit_basis(basis);
        return w;
    };
    cl0.window = side_window(cl0.basis);
    cl1.window = side_window(cl1.basis);
    if (cfg.allow_flat) {
        cl0.allow_flat = *cfg.allow_flat;
        cl1.allow_flat = *cfg.allow_flat;
    }

    detail::parse_diff_lines(sec("differential.cl0"), cl0);
    detail::parse_diff_lines(sec("differential.cl1"), cl1);

    std::vector<NovikovExponent> embed0(cl0.basis.size()), embed1(cl1.basis.size());
    std::vector<bool> have0(cl0.basis.size(), false), have1(cl1.basis.size(), false);
    for (auto& line : embed_lines) {
        lex::Cursor c = detail::cursor_of(line);
        c.expect(lex::Kind::ident, "'embed'"); // the embed keyword
        lex::Token side = c.expect(lex::Kind::ident, "cl0 or cl1");
        c.expect(lex::Kind::dot, "'.'");
        lex::Token cls = c.expect(lex::Kind::ident, "a class name");
        c.expect(lex::Kind::eq, "'='");
        NovikovExponent img = parse_lincomb(c, bar);
        if (!c.at(lex::Kind::end))
            c.fail("trailing input after embedding");
        if (side.text == "cl0") {
            int idx = cl0.basis.index_of(cls.text);
            if (idx < 0)
                throw ParseError(line.no, cls.col, "unknown cl0 class " + cls.text);
            embed0[static_cast<std::size_t>(idx)] = std::move(img);
            have0[static_cast<std::size_t>(idx)] = true;
        } else if (side.text == "cl1") {
            int idx = cl1.basis.index_of(cls.text);
            if (idx < 0)
                throw ParseError(line.no, cls.col, "unknown cl1 class " + cls.text);
            embed1[static_cast<std::size_t>(idx)] = std::move(img);
            have1[static_cast<std::size_t>(idx)] = true;
        } else {
            throw ParseError(line.no, side.col, "embedding side must be cl0 or cl1");
        }
    }
    for (std::size_t i = 0; i < have0.size(); ++i)
        if (!have0[i])
            throw ParseError(0, 0, "class cl0." + cl0.basis.entries[i].name + " has no embedding");
    for (std::size_t i = 0; i < have1.size(); ++i)
        if (!have1[i])
            throw ParseError(0, 0, "class cl1." + cl1.basis.entries[i].name + " has no embedding");

    auto inters = detail::parse_intersection_lines(sec("intersections"));

    FineSpec& f = out.fine;
    try {
        f = assemble_fine(std::move(cl0), std::move(cl1), std::move(bar),
                          std::move(embed0), std::move(embed1), inters, main);
    } catch (const std::exception& e) {
        throw ParseError(0, 0, e.what());
    }
    f.label = label;
    f.total.label = label;
    if (cfg.guard)
        f.total.homology_max_basis = *cfg.guard;
    if (cfg.allow_flat)
        f.total.allow_flat = *cfg.allow_flat;

    using lex::Kind;
    std::set<int> seen;
    for (auto& line : sec("fine_differential")) {
        lex::Cursor c = detail::cursor_of(line);
        lex::Token d = c.expect(Kind::ident, "'d'");
        if (d.text != "d")
            throw ParseError(line.no, d.col, "differential lines start with 'd'");
        lex::Token name = c.expect(Kind::ident, "an intersection name");
        int idx = f.total.gens.index_of(name.text);
        if (idx < 0 || !f.total.gens.at(idx).is_intersection)
            throw ParseError(line.no, name.col,
                             "fine differential rows must name an intersection generator");
        if (!seen.insert(idx).second)
            throw ParseError(line.no, name.col, "duplicate differential for " + name.text);
        c.expect(Kind::eq, "'='");
        try {
            f.total.diff[static_cast<std::size_t>(idx)] =
                detail::parse_expr(c, f.total.gens, f.bar, wide_window(f.bar));
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(line.no, 1, e.what());
        }
        if (!c.at(Kind::end))
            c.fail("trailing input after differential");
    }
    return out;
}

/* ------------------------------------------------------------------ */
/* canonical printing; print(parse(text)) == text on canonical files   */
/* ------------------------------------------------------------------ */

inline std::string print_rat(const Q& q) // minimal form
{
    return to_string(q);
}

inline std::string print_rat_full(const Q& q) // always p/q
{
    std::ostringstream os;
    os << numerator(q) << "/" << denominator(q);
    return os.str();
}

inline std::string print_lincomb(const NovikovExponent& lam, const ClassBasis& basis)
{
    std::string out;
    for (std::size_t i = 0; i < lam.size(); ++i) {
        long long c = lam[i];
        if (c == 0)
            continue;
        if (out.empty()) {
            if (c < 0)
                out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        long long a = c < 0 ? -c : c;
        if (a != 1)
            out += std::to_string(a) + " ";
        out += basis.entries[i].name;
    }
    return out;
}

inline std::string print_element(const Element& a, const GenTable& gens, const ClassBasis& basis)
{
    if (a.is_zero())
        return "0";
    std::string out;
    for (auto& [m, c] : a.terms) {
        bool neg = c < 0;
        Q mag = neg ? -c : c;
        std::vector<std::string> parts;
        if (mag != 1 || (m.factors.empty() && is_zero(m.lam)))
            parts.push_back(print_rat(mag));
        for (auto& [g, e] : m.factors) {
            std::string f = gens.at(g).name;
            if (e > 1)
                f += "^" + std::to_string(e);
            parts.push_back(std::move(f));
        }
        if (!is_zero(m.lam))
            parts.push_back("e[" + print_lincomb(m.lam, basis) + "]");
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

namespace detail {

inline void print_config(std::ostringstream& os, const ComplexSpec& s, const ClassBasis& basis)
{
    os << "[config]\n";
    os << "epsilon_D = " << print_rat_full(basis.epsilon_D) << "\n";
    if (s.window.weight_cutoff)
        os << "window.weight_cutoff = " << print_rat_full(*s.window.weight_cutoff) << "\n";
    os << "window.max_word_len = " << s.window.max_word_len << "\n";
    for (std::size_t i = 0; i < basis.entries.size(); ++i)
        os << "window.box." << basis.entries[i].name << " = " << s.window.box[i].first << ".."
           << s.window.box[i].second << "\n";
    os << "window.degrees = " << print_rat(s.window.degree_lo) << ".."
       << print_rat(s.window.degree_hi) << "\n";
    if (s.homology_max_basis != 200000)
        os << "homology_max_basis = " << s.homology_max_basis << "\n";
    if (s.allow_flat)
        os << "allow_flat = true\n";
}

inline void print_classes(std::ostringstream& os, const ClassBasis& basis)
{
    for (auto& e : basis.entries)
        os << e.name << " maslov=" << e.maslov << " area=" << print_rat_full(e.area) << "\n";
}

inline void print_generators(std::ostringstream& os, const GenTable& gens)
{
    for (auto& g : gens.gens)
        if (!g.is_intersection)
            os << g.name << " index=" << print_rat(g.morse_index) << "\n";
}

inline void print_diff(std::ostringstream& os, const ComplexSpec& s)
{
    for (std::size_t i = 0; i < s.gens.size(); ++i)
        if (!s.gens.at(static_cast<int>(i)).is_intersection)
            os << "d " << s.gens.at(static_cast<int>(i)).name << " = "
               << print_element(s.diff[i], s.gens, s.basis) << "\n";
}

} // namespace detail

inline std::string print_spec(const ComplexSpec& s)
{
    std::ostringstream os;
    detail::print_config(os, s, s.basis);
    os << "[classes]\n";
    detail::print_classes(os, s.basis);
    os << "[generators]\n";
    detail::print_generators(os, s.gens);
    os << "[differential]\n";
    detail::print_diff(os, s);
    return os.str();
}

inline std::string print_fine(const FineSpec& f)
{
    std::ostringstream os;
    detail::print_config(os, f.total, f.bar);
    os << "[classes.cl0]\n";
    detail::print_classes(os, f.cl0.basis);
    os << "[classes.cl1]\n";
    detail::print_classes(os, f.cl1.basis);
    os << "[generators.cl0]\n";
    detail::print_generators(os, f.cl0.gens);
    os << "[generators.cl1]\n";
    detail::print_generators(os, f.cl1.gens);
    os << "[differential.cl0]\n";
    detail::print_diff(os, f.cl0);
    os << "[differential.cl1]\n";
    detail::print_diff(os, f.cl1);
    os << "[bar_classes]\n";
    detail::print_classes(os, f.bar);
    for (std::size_t i = 0; i < f.cl0.basis.size(); ++i)
        os << "embed cl0." << f.cl0.basis.entries[i].name << " = "
           << print_lincomb(f.embed0[i], f.bar) << "\n";
    for (std::size_t i = 0; i < f.cl1.basis.size(); ++i)
        os << "embed cl1." << f.cl1.basis.entries[i].name << " = "
           << print_lincomb(f.embed1[i], f.bar) << "\n";
    os << "[intersections]\n";
    for (int ai : f.intersections) {
        const Generator& g = f.total.gens.at(ai);
        os << g.name << " degree=" << print_rat_full(g.degree) << "\n";
    }
    os << "[fine_differential]\n";
    for (int ai : f.intersections)
        os << "d " << f.total.gens.at(ai).name << " = "
           << print_element(f.total.d_of(ai), f.total.gens, f.bar) << "\n";
    return os.str();
}

} // namespace cx
