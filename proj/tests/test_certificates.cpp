#include <catch2/catch_amalgamated.hpp>

#include <cx/certificates.hpp>
#include <cx/fine.hpp>
#include <cx/scenarios.hpp>

using namespace cx;

namespace {

Element gen_pow(const ComplexSpec& s, const std::string& name, long long e,
                NovikovExponent lam)
{
    Monomial m;
    m.factors = { { s.gens.index_of(name), e } };
    m.lam = std::move(lam);
    return element_of(m);
}

Element class_elt(const ComplexSpec& s, NovikovExponent lam)
{
    Monomial m;
    m.lam = std::move(lam);
    return element_of(m);
}

std::string thrown_by_certificate(const ComplexSpec& s)
{
    try {
        acyclicity_certificate(s, s.window);
    } catch (const std::exception& e) {
        return e.what();
    }
    FAIL("expected acyclicity_certificate to throw");
    return {};
}

} // namespace

TEST_CASE("free terms: circle differential has exactly one")
{
    ComplexSpec s = example_s1();
    FreeTermReport r = find_free_terms(s);
    REQUIRE(r.witnesses.size() == 1);
    CHECK(r.witnesses[0].gen == s.gens.index_of("m"));
    CHECK(r.witnesses[0].lam == NovikovExponent{ 1 });
    CHECK(r.witnesses[0].coeff == 1);
    CHECK_FALSE(r.witnesses[0].high);
    CHECK(r.witnesses[0].parity_ok);
    CHECK_FALSE(r.has_high);
    CHECK(r.parity_pass);
}

TEST_CASE("free terms: zero differential has none and no certificate")
{
    ComplexSpec s;
    s.gens.add("x", 0);
    s.window.fit_basis(s.basis);
    s.diff = { Element{} };
    CHECK(find_free_terms(s).witnesses.empty());
    CHECK(thrown_by_certificate(s).find("no free term") != std::string::npos);
}

TEST_CASE("free terms: witness above index zero is flagged high")
{
    ComplexSpec s;
    s.basis.entries = { { "lam", 0, Q(1) } };
    s.gens.add("x", 2);
    s.gens.add("z", 3);
    s.window.fit_basis(s.basis);
    s.diff = { class_elt(s, { 1 }), Element{} };
    REQUIRE(validate_spec(s).empty());

    FreeTermReport r = find_free_terms(s);
    REQUIRE(r.witnesses.size() == 1);
    CHECK(r.witnesses[0].high);
    CHECK(r.witnesses[0].parity_ok); // index 2 is even
    CHECK(r.has_high);
    CHECK(r.parity_pass);

    // dx = e^[lam] exactly: b = 0, c = 1, and the inverse is immediate
    Certificate cert = acyclicity_certificate(s, s.window);
    CHECK(cert.b.is_zero());
    CHECK(cert.c == unit_element(s.basis));
    CHECK(cert.verified);
}

TEST_CASE("free terms: odd-index witness fails the parity diagnostic")
{
    ComplexSpec s;
    s.basis.entries = { { "lam", 1, Q(1) } };
    s.gens.add("y", 1);
    s.gens.add("z", 2);
    s.window.fit_basis(s.basis);
    s.diff = { class_elt(s, { 1 }), Element{} };
    REQUIRE(validate_spec(s).empty());

    FreeTermReport r = find_free_terms(s);
    REQUIRE(r.witnesses.size() == 1);
    CHECK(r.witnesses[0].high);
    CHECK_FALSE(r.witnesses[0].parity_ok);
    CHECK(r.has_high);
    CHECK_FALSE(r.parity_pass);
}

TEST_CASE("certificate: circle pins tau = m e^[-lam0] and c = 1 - M")
{
    ComplexSpec s = example_s1();
    Certificate cert = acyclicity_certificate(s, s.window);
    CHECK(cert.gen == s.gens.index_of("m"));
    CHECK(cert.lam0 == NovikovExponent{ 1 });
    CHECK(cert.coeff == 1);
    CHECK(cert.tau == gen_pow(s, "m", 1, { -1 }));

    Element b_want;
    for (long long k = 1; k <= 6; ++k)
        b_want = add_scale(b_want, 1, gen_pow(s, "M", k, { 0 }));
    CHECK(cert.b == b_want);

    Element c_want = add_scale(unit_element(s.basis), -1, gen_pow(s, "M", 1, { 0 }));
    CHECK(cert.c == c_want);

    REQUIRE(cert.verified);
    Element ctau = multiply(cert.c, cert.tau, s.gens, s.basis, s.window);
    CHECK(apply_d(s, ctau, s.window) == unit_element(s.basis));
    CHECK(apply_d(s, cert.c, s.window).is_zero());
}

TEST_CASE("certificate: leading coefficient is normalized away")
{
    ComplexSpec s = example_s1();
    s.diff[0] = scale(s.diff[0], 3);
    REQUIRE(validate_spec(s).empty());

    Certificate cert = acyclicity_certificate(s, s.window);
    CHECK(cert.coeff == 3);
    REQUIRE(cert.tau.terms.size() == 1);
    CHECK(cert.tau.terms.begin()->second == Q(1) / 3);
    CHECK(cert.c == add_scale(unit_element(s.basis), -1, gen_pow(s, "M", 1, { 0 })));
    CHECK(cert.verified);
}

TEST_CASE("certificate: witness selection order")
{
    SECTION("smaller area wins") {
        ComplexSpec s;
        s.basis.entries = { { "lamA", 2, Q(2) }, { "lamB", 2, Q(1) } };
        s.gens.add("x", 0);
        s.gens.add("u", 1);
        s.window.fit_basis(s.basis);
        Element dx = add_scale(class_elt(s, { 1, 0 }), 1, class_elt(s, { 0, 1 }));
        s.diff = { dx, Element{} };
        REQUIRE(validate_spec(s).empty());

        Certificate cert = acyclicity_certificate(s, s.window);
        CHECK(cert.lam0 == NovikovExponent{ 0, 1 });

        FreeTermReport r = find_free_terms(s);
        Q best = maslov_area(cert.lam0, s.basis).second;
        for (auto& w : r.witnesses)
            CHECK(best <= maslov_area(w.lam, s.basis).second);
    }
    SECTION("area tie: smaller Maslov number wins") {
        ComplexSpec s;
        s.basis.entries = { { "lamC", 0, Q(1) }, { "lamD", 2, Q(1) } };
        s.gens.add("x0", 0);
        s.gens.add("x2", 2);
        s.gens.add("z", 3);
        s.window.fit_basis(s.basis);
        s.diff = { class_elt(s, { 0, 1 }), class_elt(s, { 1, 0 }), Element{} };
        REQUIRE(validate_spec(s).empty());

        Certificate cert = acyclicity_certificate(s, s.window);
        CHECK(cert.lam0 == NovikovExponent{ 1, 0 });
        CHECK(cert.gen == s.gens.index_of("x2"));
    }
    SECTION("area and Maslov tie: lexicographically smaller exponent wins") {
        ComplexSpec s;
        s.basis.entries = { { "lam1", 2, Q(1) }, { "lam2", 2, Q(1) } };
        s.gens.add("x", 0);
        s.gens.add("u", 1);
        s.window.fit_basis(s.basis);
        Element dx = add_scale(class_elt(s, { 1, 0 }), 1, class_elt(s, { 0, 1 }));
        s.diff = { dx, Element{} };

        Certificate cert = acyclicity_certificate(s, s.window);
        CHECK(cert.lam0 == NovikovExponent{ 0, 1 });
    }
}

TEST_CASE("certificate: exponent drift needs an asymmetric box")
{
    ComplexSpec s;
    s.basis.entries = { { "lam1", 2, Q(1) }, { "lam2", 2, Q(1) } };
    s.gens.add("x", 0);
    s.gens.add("u", 1);
    s.window.fit_basis(s.basis);
    Element dx = add_scale(class_elt(s, { 1, 0 }), 1, class_elt(s, { 0, 1 }));
    s.diff = { dx, Element{} };
    REQUIRE(validate_spec(s).empty());

    SECTION("box wide enough for the series to telescope") {
        s.window.box = { { 0, 5 }, { -6, 0 } };
        Certificate cert = acyclicity_certificate(s, s.window);

        Element c_want;
        for (long long i = 0; i <= 5; ++i)
            c_want = add_scale(c_want, i % 2 ? -1 : 1, class_elt(s, { i, -i }));
        CHECK(cert.c == c_want);
        CHECK(cert.verified);
    }
    SECTION("default box truncates c itself: verification honestly fails") {
        Certificate cert = acyclicity_certificate(s, s.window);
        CHECK_FALSE(cert.verified);
    }
}

TEST_CASE("certificate: window that excludes -lam0 is an error")
{
    ComplexSpec s = example_s1();
    s.window.box = { { 0, 4 } };
    CHECK(thrown_by_certificate(s).find("window excludes") != std::string::npos);
}

TEST_CASE("certificate: fine module total complex")
{
    FineSpec f = builtin_circle_line();
    FreeTermReport r = find_free_terms(f.total);
    REQUIRE(r.witnesses.size() == 1);
    CHECK(r.witnesses[0].gen == f.total.gens.index_of("m"));

    Certificate cert = acyclicity_certificate(f.total, f.total.window);
    Element c_want = add_scale(unit_element(f.total.basis), -1,
                               gen_pow(f.total, "M", 1, { 0 }));
    CHECK(cert.c == c_want);
    CHECK(cert.verified);
}

TEST_CASE("certificate: certified interior degrees of the circle are acyclic")
{
    ComplexSpec s = example_s1();
    Certificate cert = acyclicity_certificate(s, s.window);
    REQUIRE(cert.verified);
    HomologyReport rep = homology_of(s, s.window);
    for (auto& row : rep.rows)
        if (row.certified)
            CHECK(row.betti == 0);
}
