#include <cx/certificates.hpp>
#include <cx/fine.hpp>
#include <cx/minimal_model.hpp>
#include <cx/report.hpp>
#include <cx/scenarios.hpp>
#include <cx/spectral.hpp>
#include <cx/trees.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace cx;

namespace {

/* Exit codes: 0 = pass, 1 = the input is well-formed but a checked identity
   fails, 2 = unreadable or malformed input (including invalid flags). */

int usage(const std::string& msg = "")
{
    if (!msg.empty())
        std::cerr << "error: " << msg << "\n";
    std::cerr << "usage: cx <command> [args]\n"
                 "  validate FILE\n"
                 "  check-d2 FILE\n"
                 "  homology FILE\n"
                 "  free-terms FILE\n"
                 "  certify FILE\n"
                 "  minimal-model FILE\n"
                 "  tilde FILE\n"
                 "  tilde-homology FILE\n"
                 "  sseq FILE\n"
                 "  fine check-d2 FILE\n"
                 "  fine homology FILE\n"
                 "  symmetrize FILE [--identify FROM=INTO[,FROM=INTO...]]\n"
                 "  chain-map SRCFILE TGTFILE MAPFILE\n"
                 "  trees validate FILE\n"
                 "  trees dim FILE --top G [--ends G1,G2,...] [--class LC] [--fine]\n"
                 "  trees splittings FILE --ends G1,G2,... [--class LC]\n"
                 "  example s1 [--omega Q]\n"
                 "  example no-bubbling\n"
                 "  maslov-scan --n N\n"
                 "exit codes: 0 pass, 1 failed check, 2 input error\n";
    return 2;
}

int input_error(const std::string& msg)
{
    std::cerr << "error: " << msg << "\n";
    return 2;
}

std::optional<std::string> slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string stem_of(const std::string& path)
{
    auto slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = base.rfind('.');
    return dot == std::string::npos || dot == 0 ? base : base.substr(0, dot);
}

/* --name value, --name=value; --fine is the only bare switch. */
struct Flags {
    std::vector<std::string> pos;
    std::map<std::string, std::string> val;
    std::set<std::string> on;

    const std::string* get(const std::string& k) const
    {
        auto it = val.find(k);
        return it == val.end() ? nullptr : &it->second;
    }
};

bool parse_flags(const std::vector<std::string>& args, std::size_t from, Flags& out,
                 std::string& err)
{
    static const std::set<std::string> switches = { "fine" };
    for (std::size_t i = from; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.size() < 2 || a.compare(0, 2, "--") != 0) {
            out.pos.push_back(a);
            continue;
        }
        std::string name = a.substr(2);
        auto eq = name.find('=');
        if (eq != std::string::npos) {
            out.val[name.substr(0, eq)] = name.substr(eq + 1);
            continue;
        }
        if (switches.count(name)) {
            out.on.insert(name);
            continue;
        }
        if (i + 1 >= args.size()) {
            err = "flag --" + name + " needs a value";
            return false;
        }
        out.val[name] = args[++i];
    }
    return true;
}

std::optional<Q> rational_from(const std::string& text)
{
    try {
        lex::Cursor c{ lex::tokens_of(text, 1), 0, 1 };
        Q q = lex::rational_of(c, "a rational");
        if (!c.at(lex::Kind::end))
            return std::nullopt;
        return q;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::optional<long long> integer_from(const std::string& text)
{
    try {
        lex::Cursor c{ lex::tokens_of(text, 1), 0, 1 };
        long long v = lex::integer_of(c, "an integer");
        if (!c.at(lex::Kind::end))
            return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            if (!cur.empty())
                out.push_back(cur);
            cur.clear();
        } else if (ch != ' ') {
            cur += ch;
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

/* ------------------------------------------------------------------ */
/* loading and gating                                                  */
/* ------------------------------------------------------------------ */

int load_any(const std::string& path, ParsedSpec& out)
{
    auto text = slurp(path);
    if (!text)
        return input_error("cannot read " + path);
    bool any_section = false;
    std::istringstream in(*text);
    for (std::string line; std::getline(in, line);) {
        auto a = line.find_first_not_of(" \t\r");
        if (a != std::string::npos && line[a] == '[') {
            any_section = true;
            break;
        }
    }
    if (!any_section)
        return input_error(path + ": no sections found");
    try {
        out = parse_spec_text(*text, stem_of(path));
    } catch (const ParseError& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return 2;
    }
    return 0;
}

int load_plain(const std::string& path, ComplexSpec& s)
{
    ParsedSpec p;
    if (int rc = load_any(path, p))
        return rc;
    if (p.is_fine)
        return input_error(path + ": expected a plain complex, found a fine module");
    s = p.complex;
    return 0;
}

int load_fine(const std::string& path, FineSpec& f)
{
    ParsedSpec p;
    if (int rc = load_any(path, p))
        return rc;
    if (!p.is_fine)
        return input_error(path + ": expected a fine module, found a plain complex");
    f = p.fine;
    return 0;
}

int show_invalid(const std::vector<std::string>& bad)
{
    for (auto& b : bad)
        std::cerr << "invalid: " << b << "\n";
    return 2;
}

int gate_plain(const ComplexSpec& s)
{
    auto bad = validate_spec(s);
    return bad.empty() ? 0 : show_invalid(bad);
}

int gate_fine(const FineSpec& f)
{
    auto bad = validate_fine(f);
    return bad.empty() ? 0 : show_invalid(bad);
}

int gate_d2(const ComplexSpec& s)
{
    D2Result r = check_d_squared(s, s.window);
    if (r.pass)
        return 0;
    std::cerr << "d^2 != 0 at " << r.offender << ": residual = "
              << print_element(r.residual, s.gens, s.basis) << "\n";
    return 1;
}

/* ------------------------------------------------------------------ */
/* subcommands                                                         */
/* ------------------------------------------------------------------ */

int cmd_validate(const std::string& path)
{
    ParsedSpec p;
    if (int rc = load_any(path, p))
        return rc;
    std::vector<std::string> bad = p.is_fine ? validate_fine(p.fine) : validate_spec(p.complex);
    std::cout << path << ": " << (p.is_fine ? "fine module" : "plain complex") << ", "
              << (bad.empty() ? "valid" : "invalid") << "\n";
    for (auto& b : bad)
        std::cout << "  - " << b << "\n";
    Report rep;
    rep.put("command", "validate");
    rep.put("kind", p.is_fine ? "fine" : "plain");
    rep.put("status", bad.empty() ? "pass" : "fail");
    rep.num("diagnostics", static_cast<long long>(bad.size()));
    std::cout << rep.str();
    return bad.empty() ? 0 : 2;
}

int cmd_check_d2(const std::string& path)
{
    ComplexSpec s;
    if (int rc = load_plain(path, s))
        return rc;
    if (int rc = gate_plain(s))
        return rc;
    D2Result r = check_d_squared(s, s.window);
    Report rep;
    rep.put("command", "check-d2");
    rep.put("status", r.pass ? "pass" : "fail");
    if (r.pass) {
        std::cout << "d^2 == 0 within the window: pass\n";
    } else {
        std::cout << "d^2 != 0 at " << r.offender << ": residual = "
                  << print_element(r.residual, s.gens, s.basis) << "\n";
        rep.put("offender", r.offender);
        rep.put("residual", print_element(r.residual, s.gens, s.basis));
    }
    std::cout << rep.str();
    return r.pass ? 0 : 1;
}

int cmd_homology(const std::string& path)
{
    ComplexSpec s;
    if (int rc = load_plain(path, s))
        return rc;
    if (int rc = gate_plain(s))
        return rc;
    if (int rc = gate_d2(s))
        return rc;
    HomologyReport h;
    try {
        h = homology_of(s, s.window);
    } catch (const WindowTooLarge& e) {
        return input_error(e.what());
    }
    std::cout << "windowed homology of " << s.label << ":\n" << homology_table(h);
    if (h.any_lossy)
        std::cout << "note: truncation dropped terms; uncertified rows are lower bounds only\n";
    Report rep;
    rep.put("command", "homology");
    homology_keys(rep, h);
    std::cout << rep.str();
    return 0;
}

int cmd_free_terms(const std::string& path)
{
    ComplexSpec s;
    if (int rc = load_plain(path, s))
        return rc;
    if (int rc = gate_plain(s))
        return rc;
    FreeTermReport ft = find_free_terms(s);
    std::cout << "free terms of " << s.label << ":\n";
    if (ft.witnesses.empty())
        std::cout << "  (none)\n";
    Report rep;
    rep.put("command", "free-terms");
    rep.num("count", static_cast<long long>(ft.witnesses.size()));
    rep.flag("has_high", ft.has_high);
    rep.put("parity", ft.parity_pass ? "pass" : "fail");
    for (std::size_t i = 0; i < ft.witnesses.size(); ++i) {
        const FreeTermWitness& wit = ft.witnesses[i];
        const Generator& g = s.gens.at(wit.gen);
        std::cout << "  " << g.name << ": " << print_rat(wit.coeff) << " * e["
                  << print_lincomb(wit.lam, s.basis) << "] (morse index " << print_rat(g.morse_index)
                  << (wit.high ? ", high" : "") << (wit.parity_ok ? "" : ", parity violation")
                  << ")\n";
        std::string key = "witness." + std::to_string(i);
        rep.put(key, g.name);
        rep.put(key + ".lam", print_lincomb(wit.lam, s.basis));
        rep.rat(key + ".coeff", wit.coeff);
        rep.flag(key + ".high", wit.high);
    }
    std::cout << rep.str();
    return ft.parity_pass ? 0 : 1;
}

int cmd_certify(const std::string& path)
{
    ComplexSpec s;
    if (int rc = load_plain(path, s))
        return rc;
    if (int rc = gate_plain(s))
        return rc;
    Certificate cert;
    try {
        cert = acyclicity_certificate(s, s.window);
    } catch (const WindowTooLarge& e) {
        return input_error(e.what());
    } catch (const std::exception& e) {
        std::cerr << "certify: " << e.what() << "\n";
        return 1;
    }
    std::cout << "acyclicity certificate for " << s.label << ":\n"
              << "  free term: " << print_rat(cert.coeff) << " * " << s.gens.at(cert.gen).name
              << " * e[" << print_lincomb(cert.lam0, s.basis) << "]\n"
              << "  tau = " << print_element(cert.tau, s.gens, s.basis) << "\n"
              << "  c = " << print_element(cert.c, s.gens, s.basis) << "\n"
              << "  d(c * tau) == 1 and d c == 0: " << (cert.verified ? "yes" : "no") << "\n";
    Report rep;
    rep.put("command", "certify");
    rep.put("gen", s.gens.at(cert.gen).name);
    rep.put("lam0", print_lincomb(cert.lam0, s.basis));
    rep.rat("coeff", cert.coeff);
    rep.put("tau", print_element(cert.tau, s.gens, s.basis));
    rep.put("c", print_element(cert.c, s.gens, s.basis));
    rep.put("verified", cert.verified ? "pass" : "fail");
    std::cout << rep.str();
    return cert.verified ? 0 : 1;
}

int cmd_minimal_model(const std::string& path)
{
    ComplexSpec s;
    if (int rc = load_plain(path, s))
        return rc;
    if (int rc = gate_plain(s))
        return rc;
    if (int rc = gate_d2(s))
        return rc;
    ComplexSpec red;
    ReductionTrace tr;
    try {
        std::tie(red, tr) = minimal_model(s, s.window);
    } catch (const WindowTooLarge& e) {
        return input_error(e.what());
    } catch (const std::exception& e) {
        std::cerr << "minimal-model: " << e.what() << "\n";
        return 1;
    }
    std::cout << print_spec(red);
    bool d0_zero = true;
    for (auto& dx : red.diff)
        if (!d0_part(dx).is_zero())
            d0_zero = false;
    ChainMapResult cm = check_chain_map(tr.P, s, red, s.window);
    Report rep;
    rep.put("command", "minimal-model");
    rep.num("steps", static_cast<long long>(tr.steps.size()));
    for (std::size_t i = 0; i < tr.steps.size(); ++i)
        rep.put("step." + std::to_string(i), tr.steps[i].x + " " + tr.steps[i].y);
    std::string surv;
    for (auto& g : red.gens.gens) {
        if (!surv.empty())
            surv += " ";
        surv += g.name;
    }
    rep.put("survivors", surv);
    rep.flag("d0_zero", d0_zero);
    rep.put("chain_map", cm.pass ? "pass" : "fail");
    std::cout << rep.str();
    return cm.pass && d0_zero ? 0 : 1;
}

int cmd_tilde(const std::string& path)
{
    ComplexSpec s;
    if (int rc = load_plain(path, s))
        return rc;
    if (int rc = gate_plain(s))
        return rc;
    if (int rc = gate_d2(s))
        return rc;
    std::vector<Monomial> samples;
    try {
        samples = enumerate_window(s.gens, s.basis, s.window, EnumMode::plain,
                                   s.homology_max_basis);
    } catch (const WindowTooLarge& e) {
        return input_error(e.what());
    }
    std::cout << "marked module over " << s.label << ":\n";
    for (std::size_t g = 0; g < s.gens.size(); ++g) {
        TildeElement unit;
        unit.add_term(Monomial{ {}, zero_exponent(s.basis) }, static_cast<int>(g), 1);
        TildeElement dg = tilde_d(s, unit, s.window);
        std::cout << "  d " << s.gens.at(static_cast<int>(g)).name << "~ = "
                  << print_tilde_element(dg, s.gens, s.basis) << "\n";
    }
    AlphaChainResult ac = check_alpha_chain(s, s.window, samples);
    std::cout << "alpha commutes with d on " << samples.size() << " basis monomials: "
              << (ac.pass ? "pass" : "fail") << "\n";
    Report rep;
    rep.put("command", "tilde");
    rep.num("samples", static_cast<long long>(samples.size()));
    rep.put("alpha_chain", ac.pass ? "pass" : "fail");
    if (!ac.pass) {
        std::cout << "  at " << print_element(element_of(ac.sample), s.gens, s.basis)
                  << ": residual = " << print_tilde_element(ac.residual, s.gens, s.basis) << "\n";
        rep.put("sample", print_element(element_of(ac.sample), s.gens, s.basis));
        rep.put("residual", print_tilde_element(ac.residual, s.gens, s.basis));
    }
    std::cout << rep.str();
    return ac.pass ? 0 : 1;
}

int cmd_tilde_homology(const std::string& path)
{
    ComplexSpec s;
    if (int rc = load_plain(path, s))
        return rc;
    if (int rc = gate_plain(s))
        return rc;
    if (int rc = gate_d2(s))
        return rc;
    HomologyReport h;
    try {
        h = tilde_homology(s, s.window);
    } catch (const WindowTooLarge& e) {
        return input_error(e.what());
    }
    std::cout << "marked homology of " << s.label
              << " -- suspension model S(s^-1 H) (x) Lambda (x) H:\n"
              << homology_table(h);
    Report rep;
    rep.put("command", "tilde-homology");
    rep.put("model", "S(s^-1 H) (x) Lambda (x) H");
    homology_keys(rep, h);
    std::cout << rep.str();
    return 0;
}

int cmd_sseq(const std::string& path)
{
    ComplexSpec s;
    if (int rc = load_plain(path, s))
        return rc;
    if (int rc = gate_plain(s))
        return rc;
    PageReport e0, e1;
    try {
        std::tie(e0, e1) = pages(s, s.window);
    } catch (const WindowTooLarge& e) {
        return input_error(e.what());
    }
    bool disc = level_discipline(s);
    std::cout << "word-area spectral sequence of " << s.label << ":\n";
    auto show_page = [&](const PageReport& p) {
        std::cout << "E^" << p.r << ":\n";
        for (auto& [key, dim] : p.dims)
            std::cout << "  level " << print_rat(key.first) << ", degree "
                      << print_rat(key.second) << ": dim " << dim << "\n";
    };
    show_page(e0);
    show_page(e1);
    std::cout << "level discipline (d0 preserves, rest raises): " << (disc ? "yes" : "no")
              << "\n";
    Report rep;
    rep.put("command", "sseq");
    rep.flag("discipline", disc);
    auto page_keys = [&](const char* tag, const PageReport& p) {
        rep.num(std::string(tag) + ".bins", static_cast<long long>(p.dims.size()));
        for (auto& [key, dim] : p.dims)
            rep.num(std::string(tag) + "." + print_rat(key.first) + "." + print_rat(key.second),
                    dim);
    };
    page_keys("e0", e0);
    page_keys("e1", e1);
    std::cout << rep.str();
    return 0;
}

int cmd_fine_check_d2(const std::string& path)
{
    FineSpec f;
    if (int rc = load_fine(path, f))
        return rc;
    if (int rc = gate_fine(f))
        return rc;
    D2Result r = check_dF_squared(f, f.total.window);
    Report rep;
    rep.put("command", "fine.check-d2");
    rep.put("status", r.pass ? "pass" : "fail");
    if (r.pass) {
        std::cout << "dF^2 == 0 within the window: pass\n";
    } else {
        std::cout << "dF^2 != 0 at " << r.offender << ": residual = "
                  << print_element(r.residual, f.total.gens, f.bar) << "\n";
        rep.put("offender", r.offender);
        rep.put("residual", print_element(r.residual, f.total.gens, f.bar));
    }
    std::cout << rep.str();
    return r.pass ? 0 : 1;
}

int cmd_fine_homology(const std::string& path)
{
    FineSpec f;
    if (int rc = load_fine(path, f))
        return rc;
    if (int rc = gate_fine(f))
        return rc;
    D2Result r = check_dF_squared(f, f.total.window);
    if (!r.pass) {
        std::cerr << "dF^2 != 0 at " << r.offender << ": residual = "
                  << print_element(r.residual, f.total.gens, f.bar) << "\n";
        return 1;
    }
    HomologyReport h;
    try {
        h = fine_homology(f, f.total.window);
    } catch (const WindowTooLarge& e) {
        return input_error(e.what());
    }
    std::cout << "fine homology of " << f.label << " (at most one intersection factor):\n"
              << homology_table(h);
    Report rep;
    rep.put("command", "fine.homology");
    homology_keys(rep, h);
    std::cout << rep.str();
    return 0;
}

int cmd_symmetrize(const std::string& path, const Flags& fl)
{
    std::vector<std::pair<std::string, std::string>> ident;
    if (const std::string* spec = fl.get("identify")) {
        for (auto& item : split_list(*spec)) {
            auto eq = item.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
                return input_error("bad identification '" + item + "', want FROM=INTO");
            ident.emplace_back(item.substr(0, eq), item.substr(eq + 1));
        }
    }
    FineSpec f;
    if (int rc = load_fine(path, f))
        return rc;
    if (int rc = gate_fine(f))
        return rc;
    FineSpec out;
    try {
        out = symmetrize(f, ident);
    } catch (const std::exception& e) {
        return input_error(e.what());
    }
    std::cout << print_fine(out);
    D2Result r = check_dF_squared(out, out.total.window);
    Report rep;
    rep.put("command", "symmetrize");
    rep.num("pairs", static_cast<long long>(ident.size()));
    rep.put("status", r.pass ? "pass" : "fail");
    if (!r.pass) {
        rep.put("offender", r.offender);
        rep.put("residual", print_element(r.residual, out.total.gens, out.bar));
    }
    std::cout << rep.str();
    return r.pass ? 0 : 1;
}

int cmd_chain_map(const std::string& srcPath, const std::string& tgtPath,
                  const std::string& mapPath)
{
    ComplexSpec src, tgt;
    if (int rc = load_plain(srcPath, src))
        return rc;
    if (int rc = gate_plain(src))
        return rc;
    if (int rc = load_plain(tgtPath, tgt))
        return rc;
    if (int rc = gate_plain(tgt))
        return rc;
    auto text = slurp(mapPath);
    if (!text)
        return input_error("cannot read " + mapPath);

    ChainMap phi;
    phi.images.assign(src.gens.size(), Element{});
    try {
        auto secs = detail::split_sections(*text, { "map" });
        auto it = secs.find("map");
        if (it == secs.end())
            throw ParseError(1, 1, "missing [map] section");
        for (auto& line : it->second) {
            auto c = detail::cursor_of(line);
            using lex::Kind;
            lex::Token head = c.expect(Kind::ident, "a declaration");
            if (head.text == "shift") {
                c.expect(Kind::eq, "'='");
                phi.shift = lex::rational_of(c, "a shift");
            } else if (head.text == "mode") {
                c.expect(Kind::eq, "'='");
                lex::Token m = c.expect(Kind::ident, "algebra or linear");
                if (m.text == "algebra")
                    phi.mode = ChainMap::Mode::algebra;
                else if (m.text == "linear")
                    phi.mode = ChainMap::Mode::linear;
                else
                    throw ParseError(line.no, m.col, "mode must be algebra or linear");
            } else if (head.text == "phi") {
                lex::Token name = c.expect(Kind::ident, "a source generator");
                int g = src.gens.index_of(name.text);
                if (g < 0)
                    throw ParseError(line.no, name.col, "unknown generator " + name.text);
                c.expect(Kind::eq, "'='");
                phi.images[static_cast<std::size_t>(g)] =
                    detail::parse_expr(c, tgt.gens, tgt.basis, wide_window(tgt.basis));
            } else {
                throw ParseError(line.no, head.col, "unknown declaration " + head.text);
            }
            if (!c.at(Kind::end))
                c.fail("trailing input after declaration");
        }
    } catch (const ParseError& e) {
        std::cerr << mapPath << ": " << e.what() << "\n";
        return 2;
    }

    ChainMapResult r = check_chain_map(phi, src, tgt, src.window);
    bool filt = filtration_preserved(phi, src, tgt);
    std::cout << "chain map " << src.label << " -> " << tgt.label << " (mode "
              << (phi.mode == ChainMap::Mode::algebra ? "algebra" : "linear") << ", shift "
              << print_rat(phi.shift) << "): " << (r.pass ? "pass" : "fail") << "\n";
    for (auto& d : r.diagnostics)
        std::cout << "  - " << d << "\n";
    Report rep;
    rep.put("command", "chain-map");
    rep.put("mode", phi.mode == ChainMap::Mode::algebra ? "algebra" : "linear");
    rep.rat("shift", phi.shift);
    rep.put("status", r.pass ? "pass" : "fail");
    rep.flag("filtration", filt);
    rep.num("diagnostics", static_cast<long long>(r.diagnostics.size()));
    for (std::size_t i = 0; i < r.diagnostics.size(); ++i)
        rep.put("diag." + std::to_string(i), r.diagnostics[i]);
    std::cout << rep.str();
    return r.pass ? 0 : 1;
}

/* ------------------------------------------------------------------ */
/* trees                                                               */
/* ------------------------------------------------------------------ */

MarkedTree parse_tree_text(const std::string& text)
{
    using lex::Kind;
    auto secs = detail::split_sections(text, { "tree" });
    auto it = secs.find("tree");
    if (it == secs.end())
        throw ParseError(1, 1, "missing [tree] section");

    MarkedTree t;
    long long n_classes = 0;
    bool saw_vertices = false, saw_disk = false;
    std::map<long long, int> markers;
    std::vector<std::pair<int, std::vector<long long>>> cls_lines;
    std::vector<int> constant, disk;

    for (auto& line : it->second) {
        auto c = detail::cursor_of(line);
        lex::Token head = c.expect(Kind::ident, "a declaration");
        auto vertex_arg = [&](const std::string& what) {
            long long v = lex::integer_of(c, what);
            return static_cast<int>(v);
        };
        if (head.text == "vertices") {
            c.expect(Kind::eq, "'='");
            t.n_vertices = vertex_arg("a vertex count");
            saw_vertices = true;
        } else if (head.text == "root") {
            c.expect(Kind::eq, "'='");
            t.root = vertex_arg("a vertex");
        } else if (head.text == "disk") {
            c.expect(Kind::eq, "'='");
            saw_disk = true;
            while (c.at(Kind::number) || c.at(Kind::minus))
                disk.push_back(vertex_arg("a vertex"));
        } else if (head.text == "edge") {
            TreeEdge e;
            e.from = vertex_arg("a source vertex");
            e.to = vertex_arg("a target vertex");
            lex::Token key = c.expect(Kind::ident, "length");
            if (key.text != "length")
                throw ParseError(line.no, key.col, "expected length");
            c.expect(Kind::eq, "'='");
            e.length = lex::rational_of(c, "a length");
            t.edges.push_back(e);
        } else if (head.text == "marker") {
            long long idx = lex::integer_of(c, "a marker index");
            c.expect(Kind::eq, "'='");
            int v = vertex_arg("a vertex");
            if (!markers.emplace(idx, v).second)
                throw ParseError(line.no, head.col,
                                 "marker " + std::to_string(idx) + " declared twice");
        } else if (head.text == "n1") {
            c.expect(Kind::eq, "'='");
            t.n1 = lex::integer_of(c, "a marker index");
        } else if (head.text == "constant") {
            c.expect(Kind::eq, "'='");
            while (c.at(Kind::number) || c.at(Kind::minus))
                constant.push_back(vertex_arg("a vertex"));
        } else if (head.text == "classes") {
            c.expect(Kind::eq, "'='");
            n_classes = lex::integer_of(c, "a class count");
            if (n_classes < 0)
                throw ParseError(line.no, head.col, "negative class count");
        } else if (head.text == "class") {
            int v = vertex_arg("a vertex");
            c.expect(Kind::eq, "'='");
            std::vector<long long> row;
            while (c.at(Kind::number) || c.at(Kind::minus))
                row.push_back(lex::integer_of(c, "an exponent"));
            cls_lines.emplace_back(v, std::move(row));
        } else {
            throw ParseError(line.no, head.col, "unknown declaration " + head.text);
        }
        if (!c.at(Kind::end))
            c.fail("trailing input after declaration");
    }

    if (!saw_vertices)
        throw ParseError(1, 1, "missing vertices declaration");
    int n = t.n_vertices;
    if (n < 1)
        throw ParseError(1, 1, "vertices must be at least 1");

    t.in_disk.assign(static_cast<std::size_t>(n), saw_disk ? 0 : 1);
    for (int v : disk) {
        if (v < 0 || v >= n)
            throw ParseError(1, 1, "disk vertex out of range");
        t.in_disk[static_cast<std::size_t>(v)] = 1;
    }
    t.constant_map.assign(static_cast<std::size_t>(n), 0);
    for (int v : constant) {
        if (v < 0 || v >= n)
            throw ParseError(1, 1, "constant vertex out of range");
        t.constant_map[static_cast<std::size_t>(v)] = 1;
    }
    for (std::size_t i = 0; i < markers.size(); ++i)
        if (!markers.count(static_cast<long long>(i)))
            throw ParseError(1, 1, "marker indices must be 0..k without gaps");
    for (auto& [idx, v] : markers)
        t.markers.push_back(v);
    t.cls.assign(static_cast<std::size_t>(n),
                 NovikovExponent(static_cast<std::size_t>(n_classes), 0));
    for (auto& [v, row] : cls_lines) {
        if (v < 0 || v >= n)
            throw ParseError(1, 1, "class vertex out of range");
        if (static_cast<long long>(row.size()) != n_classes)
            throw ParseError(1, 1, "class row length does not match classes");
        t.cls[static_cast<std::size_t>(v)] = NovikovExponent(row.begin(), row.end());
    }
    return t;
}

int cmd_trees_validate(const std::string& path)
{
    auto text = slurp(path);
    if (!text)
        return input_error("cannot read " + path);
    MarkedTree t;
    try {
        t = parse_tree_text(*text);
    } catch (const ParseError& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return 2;
    }
    auto bad = validate_tree(t);
    std::cout << path << ": marked tree with " << t.n_vertices << " vertices, "
              << t.edges.size() << " edges, " << t.markers.size() << " markers: "
              << (bad.empty() ? "valid" : "invalid") << "\n";
    for (auto& b : bad)
        std::cout << "  - " << b << "\n";
    Report rep;
    rep.put("command", "trees.validate");
    rep.num("vertices", t.n_vertices);
    rep.num("edges", static_cast<long long>(t.edges.size()));
    rep.num("markers", static_cast<long long>(t.markers.size()));
    rep.put("status", bad.empty() ? "pass" : "fail");
    rep.num("diagnostics", static_cast<long long>(bad.size()));
    std::cout << rep.str();
    return bad.empty() ? 0 : 2;
}

/* A degree argument is either a generator name (resolved against the spec)
   or a literal rational. */
std::optional<Q> degree_arg(const ComplexSpec& s, const std::string& text)
{
    int g = s.gens.index_of(text);
    if (g >= 0)
        return s.gens.at(g).degree;
    return rational_from(text);
}

int cmd_trees_dim(const std::string& path, const Flags& fl)
{
    ComplexSpec s;
    if (int rc = load_plain(path, s))
        return rc;
    const std::string* top = fl.get("top");
    if (!top)
        return usage("trees dim needs --top");
    auto top_deg = degree_arg(s, *top);
    if (!top_deg)
        return input_error("unknown generator or degree '" + *top + "'");
    std::vector<Q> ends;
    if (const std::string* e = fl.get("ends")) {
        for (auto& item : split_list(*e)) {
            auto d = degree_arg(s, item);
            if (!d)
                return input_error("unknown generator or degree '" + item + "'");
            ends.push_back(*d);
        }
    }
    NovikovExponent lam = zero_exponent(s.basis);
    if (const std::string* lc = fl.get("class")) {
        try {
            lex::Cursor c{ lex::tokens_of(*lc, 1), 0, 1 };
            lam = parse_lincomb(c, s.basis);
            if (!c.at(lex::Kind::end))
                c.fail("trailing input after class");
        } catch (const ParseError& e) {
            return input_error(std::string("--class: ") + e.what());
        }
    }
    DimMode mode = fl.on.count("fine") ? DimMode::fine : DimMode::plain;
    Q dim = expected_dimension(*top_deg, ends, lam, s.basis, mode);
    std::cout << "expected dimension = " << print_rat(dim) << "\n";
    Report rep;
    rep.put("command", "trees.dim");
    rep.rat("top", *top_deg);
    std::string es;
    for (auto& d : ends) {
        if (!es.empty())
            es += " ";
        es += print_rat(d);
    }
    rep.put("ends", es);
    std::string lc = print_lincomb(lam, s.basis);
    rep.put("class", lc.empty() ? "0" : lc);
    rep.put("mode", mode == DimMode::fine ? "fine" : "plain");
    rep.rat("dimension", dim);
    std::cout << rep.str();
    return 0;
}

int cmd_trees_splittings(const std::string& path, const Flags& fl)
{
    ComplexSpec s;
    if (int rc = load_plain(path, s))
        return rc;
    if (int rc = gate_plain(s))
        return rc;
    const std::string* e = fl.get("ends");
    if (!e)
        return usage("trees splittings needs --ends");
    std::vector<int> ids;
    for (auto& item : split_list(*e)) {
        int g = s.gens.index_of(item);
        if (g < 0)
            return input_error("unknown generator '" + item + "'");
        ids.push_back(g);
    }
    std::sort(ids.begin(), ids.end());
    NovikovExponent lam = zero_exponent(s.basis);
    if (const std::string* lc = fl.get("class")) {
        try {
            lex::Cursor c{ lex::tokens_of(*lc, 1), 0, 1 };
            lam = parse_lincomb(c, s.basis);
            if (!c.at(lex::Kind::end))
                c.fail("trailing input after class");
        } catch (const ParseError& ex) {
            return input_error(std::string("--class: ") + ex.what());
        }
    }
    std::vector<Splitting> sp;
    try {
        sp = boundary_splittings(ids, lam, s.gens, s.window.box);
    } catch (const WindowTooLarge& ex) {
        return input_error(ex.what());
    } catch (const std::invalid_argument& ex) {
        return input_error(ex.what());
    }
    auto names = [&](const std::vector<int>& v) {
        std::string out = "(";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i)
                out += " ";
            out += s.gens.at(v[i]).name;
        }
        return out + ")";
    };
    auto lc_or_zero = [&](const NovikovExponent& x) {
        std::string out = print_lincomb(x, s.basis);
        return out.empty() ? std::string("0") : out;
    };
    std::string ends_txt;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i)
            ends_txt += " ";
        ends_txt += s.gens.at(ids[i]).name;
    }
    std::cout << "boundary splittings of ends (" << ends_txt << "), class "
              << lc_or_zero(lam) << ":\n";
    long long plus = 0, minus = 0;
    for (auto& x : sp) {
        (x.sign > 0 ? plus : minus)++;
        std::cout << "  " << (x.sign > 0 ? "+" : "-") << " y=" << s.gens.at(x.y).name
                  << " lower=" << names(x.left) << " e^[" << lc_or_zero(x.lam_left)
                  << "] upper=" << names(x.right) << " e^[" << lc_or_zero(x.lam_right)
                  << "]\n";
    }
    std::cout << "count = " << sp.size() << "\n";
    Report rep;
    rep.put("command", "trees.splittings");
    rep.put("ends", ends_txt);
    rep.put("class", lc_or_zero(lam));
    rep.num("count", static_cast<long long>(sp.size()));
    rep.num("plus", plus);
    rep.num("minus", minus);
    std::cout << rep.str();
    return 0;
}

/* ------------------------------------------------------------------ */
/* examples and the scan                                               */
/* ------------------------------------------------------------------ */

int cmd_example(const std::string& which, const Flags& fl)
{
    ComplexSpec s;
    Report rep;
    rep.put("command", "example." + which);
    if (which == "s1") {
        Q omega = 1;
        if (const std::string* o = fl.get("omega")) {
            auto q = rational_from(*o);
            if (!q || *q <= 0)
                return input_error("--omega wants a positive rational");
            omega = *q;
        }
        s = example_s1(omega);
        rep.rat("omega", omega);
    } else if (which == "no-bubbling") {
        ClassBasis basis;
        basis.entries = { { "lam0", 2, 1 } };
        s = example_no_bubbling({ { "m", 0 }, { "a", 1 }, { "b", 1 }, { "M", 2 } }, {}, basis);
    } else {
        return usage("unknown example " + which);
    }
    std::cout << print_spec(s);
    rep.num("generators", static_cast<long long>(s.gens.size()));
    rep.num("classes", static_cast<long long>(s.basis.size()));
    std::cout << rep.str();
    return 0;
}

int cmd_maslov_scan(const Flags& fl)
{
    const std::string* nv = fl.get("n");
    if (!nv)
        return usage("maslov-scan needs --n");
    auto n = integer_from(*nv);
    if (!n)
        return input_error("--n wants an integer");
    MaslovVerdict v;
    try {
        v = maslov_scan(*n);
    } catch (const std::invalid_argument& e) {
        return input_error(e.what());
    }
    std::cout << "Maslov scan for S^1 x S^{n-1}, n = " << v.n << " ("
              << (v.even_case ? "even" : "odd") << " case)\n"
              << "required Maslov numbers:";
    for (long long mu : v.required)
        std::cout << " " << mu;
    std::cout << "\n";
    for (auto& e : v.log)
        std::cout << "  " << e.branch << ": " << e.gen << ", deg " << print_rat(e.source_degree)
                  << " -> deg " << print_rat(e.target_degree) << ", mu = " << e.mu << " ["
                  << e.status << "]\n";
    Report rep;
    rep.put("command", "maslov-scan");
    rep.num("n", v.n);
    rep.put("case", v.even_case ? "even" : "odd");
    std::string req;
    for (long long mu : v.required) {
        if (!req.empty())
            req += " ";
        req += std::to_string(mu);
    }
    rep.put("required", req);
    rep.num("log", static_cast<long long>(v.log.size()));
    for (std::size_t i = 0; i < v.log.size(); ++i)
        rep.put("log." + std::to_string(i), v.log[i].branch + " " + v.log[i].gen + " "
                                                + std::to_string(v.log[i].mu) + " "
                                                + v.log[i].status);
    std::cout << rep.str();
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty())
        return usage();
    const std::string& cmd = args[0];

    auto need = [&](std::size_t k) { return args.size() > k; };
    Flags fl;
    std::string err;

    try {
        if (cmd == "validate" || cmd == "check-d2" || cmd == "homology" || cmd == "free-terms"
            || cmd == "certify" || cmd == "minimal-model" || cmd == "tilde"
            || cmd == "tilde-homology" || cmd == "sseq") {
            if (!need(1))
                return usage(cmd + " needs a file");
            const std::string& path = args[1];
            if (cmd == "validate")
                return cmd_validate(path);
            if (cmd == "check-d2")
                return cmd_check_d2(path);
            if (cmd == "homology")
                return cmd_homology(path);
            if (cmd == "free-terms")
                return cmd_free_terms(path);
            if (cmd == "certify")
                return cmd_certify(path);
            if (cmd == "minimal-model")
                return cmd_minimal_model(path);
            if (cmd == "tilde")
                return cmd_tilde(path);
            if (cmd == "tilde-homology")
                return cmd_tilde_homology(path);
            return cmd_sseq(path);
        }
        if (cmd == "fine") {
            if (!need(2))
                return usage("fine needs check-d2|homology and a file");
            if (args[1] == "check-d2")
                return cmd_fine_check_d2(args[2]);
            if (args[1] == "homology")
                return cmd_fine_homology(args[2]);
            return usage("unknown fine subcommand " + args[1]);
        }
        if (cmd == "symmetrize") {
            if (!parse_flags(args, 1, fl, err))
                return usage(err);
            if (fl.pos.size() != 1)
                return usage("symmetrize needs exactly one file");
            return cmd_symmetrize(fl.pos[0], fl);
        }
        if (cmd == "chain-map") {
            if (!need(3))
                return usage("chain-map needs SRCFILE TGTFILE MAPFILE");
            return cmd_chain_map(args[1], args[2], args[3]);
        }
        if (cmd == "trees") {
            if (!need(2))
                return usage("trees needs validate|dim|splittings and a file");
            if (!parse_flags(args, 2, fl, err))
                return usage(err);
            if (fl.pos.size() != 1)
                return usage("trees " + args[1] + " needs exactly one file");
            if (args[1] == "validate")
                return cmd_trees_validate(fl.pos[0]);
            if (args[1] == "dim")
                return cmd_trees_dim(fl.pos[0], fl);
            if (args[1] == "splittings")
                return cmd_trees_splittings(fl.pos[0], fl);
            return usage("unknown trees subcommand " + args[1]);
        }
        if (cmd == "example") {
            if (!need(1))
                return usage("example needs s1|no-bubbling");
            if (!parse_flags(args, 2, fl, err))
                return usage(err);
            return cmd_example(args[1], fl);
        }
        if (cmd == "maslov-scan") {
            if (!parse_flags(args, 1, fl, err))
                return usage(err);
            return cmd_maslov_scan(fl);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return usage("unknown command " + cmd);
}
