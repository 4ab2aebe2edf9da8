#include <catch2/catch_amalgamated.hpp>

#include <cx/fine.hpp>

using namespace cx;

namespace {

Element gen_elt(const ComplexSpec& s, const std::string& name)
{
    Monomial m;
    m.factors = { { s.gens.index_of(name), 1 } };
    m.lam = zero_exponent(s.basis);
    return element_of(m);
}

Monomial mono(const ComplexSpec& s, std::vector<std::pair<std::string, long long>> factors,
              NovikovExponent lam = {})
{
    std::vector<std::pair<int, long long>> raw;
    for (auto& [n, e] : factors)
        raw.emplace_back(s.gens.index_of(n), e);
    if (lam.empty())
        lam = zero_exponent(s.basis);
    auto nf = normalize(std::move(raw), std::move(lam), s.gens);
    REQUIRE(nf);
    REQUIRE(nf->first == 1);
    return nf->second;
}

/* Two perfect circles glued along a critical-point-free pair of intersection
   points: dF x = (m - mp) x, the standard acyclic module. */
FineSpec two_sided_perfect()
{
    ComplexSpec cl0;
    cl0.label = "left";
    cl0.gens.add("m", 0);
    cl0.gens.add("M", 1);
    cl0.diff = { Element{}, Element{} };
    cl0.window.fit_basis(cl0.basis);

    ComplexSpec cl1;
    cl1.label = "right";
    cl1.gens.add("mp", 0);
    cl1.gens.add("Mp", 1);
    cl1.diff = { Element{}, Element{} };
    cl1.window.fit_basis(cl1.basis);

    Window w;
    w.degree_lo = -6;
    w.degree_hi = 6;

    FineSpec f = assemble_fine(cl0, cl1, ClassBasis{}, {}, {},
                               { { "a", Q(1, 2) }, { "b", Q(-1, 2) } }, w);
    f.label = "two-sided";
    for (int ai : f.intersections) {
        Element d;
        d.add_term(mono(f.total, { { "m", 1 }, { f.total.gens.at(ai).name, 1 } }), 1);
        d.add_term(mono(f.total, { { "mp", 1 }, { f.total.gens.at(ai).name, 1 } }), -1);
        f.total.diff[static_cast<std::size_t>(ai)] = d;
    }
    return f;
}

} // namespace

TEST_CASE("fine: builtin circle/line shape")
{
    FineSpec f = builtin_circle_line();
    REQUIRE(f.total.gens.size() == 4);
    CHECK(f.total.gens.at(0).name == "m");
    CHECK(f.total.gens.at(1).name == "M");
    CHECK(f.total.gens.at(2).name == "a");
    CHECK(f.total.gens.at(3).name == "b");
    CHECK(f.total.gens.at(2).degree == Q(1, 2));
    CHECK(f.total.gens.at(3).degree == Q(-1, 2));
    CHECK(f.intersections == std::vector<int>{ 2, 3 });
    CHECK(f.total.d_of(0).size() == 7); // dm = (1 + M + ... + M^6) e^[barlam0]
    CHECK(validate_fine(f).empty());
}

TEST_CASE("fine: s(a) splitting of the builtin example")
{
    FineSpec f = builtin_circle_line();
    auto [sa, da] = split_sa(f, 2);
    CHECK(sa == gen_elt(f.total, "m"));
    CHECK(da == gen_elt(f.total, "b"));

    auto [sb, db] = split_sa(f, 3);
    CHECK(sb == gen_elt(f.total, "m"));
    Element expect; // -(dm) a
    for (auto& [t, c] : f.total.d_of(0).terms) {
        auto raw = t.factors;
        raw.emplace_back(2, 1);
        expect.add_term(Monomial{ std::move(raw), t.lam }, -c);
    }
    CHECK(db == expect);

    SaReport r = check_sa_squared(f, f.total.window);
    CHECK(r.pass);
}

TEST_CASE("fine: even-degree s(a) fails the square check")
{
    ComplexSpec cl0;
    cl0.gens.add("E", 1); // degree 0
    cl0.diff = { Element{} };
    cl0.window.fit_basis(cl0.basis);
    FineSpec f = assemble_fine(cl0, ComplexSpec{}, ClassBasis{}, {}, {},
                               { { "a", Q(1, 2) } }, Window{});
    f.total.diff[1] = element_of(mono(f.total, { { "E", 1 }, { "a", 1 } }));

    SaReport r = check_sa_squared(f, f.total.window);
    REQUIRE_FALSE(r.pass);
    bool square = false, degree = false;
    for (auto& d : r.diagnostics) {
        square = square || d.find("^2 != 0") != std::string::npos;
        degree = degree || d.find("degree -1") != std::string::npos;
    }
    CHECK(square);
    CHECK(degree);
}

TEST_CASE("fine: builtin passes dF^2, the flipped sign fails with 2(dm)a")
{
    FineSpec good = builtin_circle_line();
    CHECK(check_dF_squared(good, good.total.window).pass);

    FineSpec bad = builtin_circle_line(true);
    D2Result r = check_dF_squared(bad, bad.total.window);
    REQUIRE_FALSE(r.pass);
    CHECK(r.offender == "a");
    Element expect; // 2 (dm) a
    for (auto& [t, c] : bad.total.d_of(0).terms) {
        auto raw = t.factors;
        raw.emplace_back(2, 1);
        expect.add_term(Monomial{ std::move(raw), t.lam }, 2 * c);
    }
    CHECK(r.residual == expect);
}

TEST_CASE("fine: circle/line homology vanishes away from the window edges")
{
    FineSpec f = builtin_circle_line();
    HomologyReport rep = fine_homology(f, f.total.window);
    CHECK(rep.any_lossy); // word drops while assembling d

    // dim/betti/edge/certified over the half-integer grid, frozen by hand
    struct Row {
        Q deg;
        std::size_t dim;
        long long betti;
        bool edge, cert;
    };
    std::vector<Row> expect = {
        { 6, 0, 0, true, false },     { Q(11, 2), 0, 0, true, false },
        { 5, 0, 0, false, true },     { Q(9, 2), 7, 0, false, true },
        { 4, 0, 0, false, true },     { Q(7, 2), 13, 0, false, false },
        { 3, 0, 0, false, true },     { Q(5, 2), 13, 0, false, false },
        { 2, 0, 0, false, true },     { Q(3, 2), 13, 0, false, false },
        { 1, 0, 0, false, true },     { Q(1, 2), 13, 0, false, false },
        { 0, 0, 0, false, true },     { Q(-1, 2), 13, 0, false, false },
        { -1, 0, 0, false, true },    { Q(-3, 2), 13, 0, false, false },
        { -2, 0, 0, false, true },    { Q(-5, 2), 13, 0, false, false },
        { -3, 0, 0, false, true },    { Q(-7, 2), 13, 0, false, false },
        { -4, 0, 0, false, true },    { Q(-9, 2), 13, 0, false, false },
        { -5, 0, 0, false, true },    { Q(-11, 2), 13, 6, true, false },
        { -6, 0, 0, true, false },
    };
    REQUIRE(rep.rows.size() == expect.size());
    for (auto& e : expect) {
        const DegreeRow* r = rep.row(e.deg);
        REQUIRE(r != nullptr);
        INFO("degree " << to_string(e.deg));
        CHECK(r->dim == e.dim);
        CHECK(r->betti == e.betti);
        CHECK(r->edge == e.edge);
        CHECK(r->certified == e.cert);
        if (r->certified)
            CHECK(r->betti == 0);
    }
}

TEST_CASE("fine: zero differential gives free-module ranks")
{
    FineSpec f = builtin_circle_line();
    for (auto& d : f.total.diff)
        d = Element{};
    HomologyReport rep = fine_homology(f, f.total.window);
    CHECK_FALSE(rep.any_lossy);
    for (auto& r : rep.rows) {
        CHECK(r.betti == static_cast<long long>(r.dim));
        CHECK(r.certified == !r.edge);
    }
    CHECK(rep.row(Q(9, 2))->dim == 7);
    CHECK(rep.row(Q(1, 2))->dim == 13);
}

TEST_CASE("fine: validate rejects malformed intersection rows")
{
    FineSpec f = builtin_circle_line();

    SECTION("two intersection factors in one term")
    {
        Element d;
        d.add_term(mono(f.total, { { "a", 1 }, { "b", 1 } }), 1);
        f.total.diff[2] = d;
        auto bad = validate_fine(f);
        REQUIRE_FALSE(bad.empty());
        bool hit = false;
        for (auto& s : bad)
            hit = hit || s.find("exactly one intersection factor") != std::string::npos;
        CHECK(hit);
    }
    SECTION("inhomogeneous row")
    {
        Element d = f.total.d_of(2);
        d.add_term(mono(f.total, { { "M", 1 }, { "a", 1 } }), 1); // degree 1/2, not -1/2
        f.total.diff[2] = d;
        auto bad = validate_fine(f);
        REQUIRE(bad.size() == 1);
        CHECK(bad[0].find("not homogeneous") != std::string::npos);
    }
    SECTION("embedding must preserve maslov and area")
    {
        f.embed0 = { { 2 } }; // lam0 -> 2 barlam0 doubles both
        auto bad = validate_fine(f);
        REQUIRE(bad.size() == 1);
        CHECK(bad[0].find("(maslov, area)") != std::string::npos);
    }
}

TEST_CASE("fine: two-sided perfect module")
{
    FineSpec f = two_sided_perfect();
    CHECK(validate_fine(f).empty());
    CHECK(check_dF_squared(f, f.total.window).pass);

    Element u = add_scale(gen_elt(f.total, "m"), -1, gen_elt(f.total, "mp"));
    for (int ai : f.intersections) {
        auto [s, rest] = split_sa(f, ai);
        CHECK(s == u);
        CHECK(rest.is_zero());
    }
    CHECK(check_sa_squared(f, f.total.window).pass);

    HomologyReport rep = fine_homology(f, f.total.window);
    CHECK(rep.any_lossy);
    bool some_certified = false;
    for (auto& r : rep.rows)
        if (r.certified) {
            some_certified = true;
            CHECK(r.betti == 0);
        }
    CHECK(some_certified);
}

TEST_CASE("fine: symmetrize identifies the two minima")
{
    FineSpec f = two_sided_perfect();
    FineSpec sym = symmetrize(f, { { "mp", "m" }, { "Mp", "M" } });

    REQUIRE(sym.total.gens.size() == 4); // m, M, a, b
    CHECK(sym.total.d_of(sym.total.gens.index_of("a")).is_zero());
    CHECK(sym.total.d_of(sym.total.gens.index_of("b")).is_zero());
    CHECK(check_dF_squared(sym, sym.total.window).pass);

    HomologyReport rep = fine_homology(sym, sym.total.window);
    CHECK_FALSE(rep.any_lossy);
    CHECK(rep.row(Q(1, 2))->dim == 7);   // M^j a
    CHECK(rep.row(Q(-1, 2))->dim == 13); // M^j b, m M^j a
    CHECK(rep.row(Q(-3, 2))->dim == 6);  // m M^j b
    CHECK(rep.row(Q(5, 2))->dim == 0);
    for (auto& r : rep.rows)
        CHECK(r.betti == static_cast<long long>(r.dim));
}

TEST_CASE("fine: symmetrize on the builtin is the identity")
{
    FineSpec f = builtin_circle_line();
    FineSpec sym = symmetrize(f, {});
    CHECK(sym.total.gens.size() == f.total.gens.size());
    for (std::size_t i = 0; i < f.total.diff.size(); ++i)
        CHECK(sym.total.diff[i] == f.total.diff[i]);
}

TEST_CASE("fine: symmetrize rejects bad identifications")
{
    FineSpec f = two_sided_perfect();
    CHECK_THROWS_AS(symmetrize(f, { { "mp", "M" }, { "Mp", "M" } }), std::invalid_argument);
    CHECK_THROWS_AS(symmetrize(f, { { "mp", "m" } }), std::invalid_argument);
    CHECK_THROWS_AS(symmetrize(f, { { "zz", "m" }, { "Mp", "M" } }), std::invalid_argument);
}

TEST_CASE("fine: assemble rejects bad intersection degrees and embeddings")
{
    ComplexSpec cl0;
    cl0.basis.entries = { { "lam0", 2, Q(1) } };
    cl0.gens.add("m", 0);
    cl0.diff = { Element{} };
    cl0.window.fit_basis(cl0.basis);

    ClassBasis bar;
    bar.entries = { { "barlam0", 2, Q(1) } };
    Window w;
    w.fit_basis(bar);

    CHECK_THROWS_AS(assemble_fine(cl0, ComplexSpec{}, bar, { { 1 } }, {},
                                  { { "a", Q(1, 3) } }, w),
                    std::invalid_argument); // degree denominator 3
    CHECK_THROWS_AS(assemble_fine(cl0, ComplexSpec{}, bar, {}, {}, {}, w),
                    std::invalid_argument); // lam0 has no embedding image
    CHECK_THROWS_AS(assemble_fine(cl0, ComplexSpec{}, bar, { { 1 } }, {},
                                  { { "m", Q(1, 2) } }, w),
                    std::invalid_argument); // name collides with a ring generator
}
