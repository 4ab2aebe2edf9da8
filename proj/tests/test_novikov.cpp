#include <catch2/catch_amalgamated.hpp>

#include <cx/novikov.hpp>

using namespace cx;

static ClassBasis two_classes()
{
    ClassBasis b;
    b.entries = { { "lam0", 2, Q(1) }, { "lam1", -1, Q(1, 2) } };
    b.epsilon_D = 1;
    b.check();
    return b;
}

TEST_CASE("class basis validation")
{
    ClassBasis b = two_classes();
    CHECK(b.size() == 2);
    CHECK(b.index_of("lam0") == 0);
    CHECK(b.index_of("lam1") == 1);
    CHECK(b.index_of("nope") == -1);

    SECTION("rejects nonpositive epsilon")
    {
        b.epsilon_D = 0;
        CHECK_THROWS(b.check());
    }
    SECTION("rejects negative area")
    {
        b.entries[0].area = Q(-1);
        CHECK_THROWS(b.check());
    }
    SECTION("rejects duplicate names")
    {
        b.entries[1].name = "lam0";
        CHECK_THROWS(b.check());
    }
    SECTION("zero area is a legal class entry")
    {
        b.entries[0].area = 0;
        CHECK_NOTHROW(b.check());
    }
}

TEST_CASE("exponent arithmetic")
{
    ClassBasis b = two_classes();
    NovikovExponent z = zero_exponent(b);
    REQUIRE(z.size() == 2);
    CHECK(is_zero(z));

    NovikovExponent u = { 2, -1 };
    NovikovExponent v = { 1, 3 };
    CHECK(exp_combine(u, v) == NovikovExponent{ 3, 2 });
    CHECK(exp_negate(u) == NovikovExponent{ -2, 1 });
    CHECK(exp_combine(u, exp_negate(u)) == z);
    CHECK_THROWS(exp_combine(u, NovikovExponent{ 1 }));
}

TEST_CASE("maslov and area are linear in the exponent")
{
    ClassBasis b = two_classes();
    auto [mu, omega] = maslov_area({ 2, -1 }, b);
    // 2*2 + (-1)*(-1) = 5, 2*1 + (-1)*(1/2) = 3/2
    CHECK(mu == 5);
    CHECK(omega == Q(3, 2));

    auto [mu0, omega0] = maslov_area(zero_exponent(b), b);
    CHECK(mu0 == 0);
    CHECK(omega0 == 0);
}

TEST_CASE("weight formula")
{
    ClassBasis b = two_classes();
    // word length 1, lam = lam0: 1 + 2*1/1 = 3
    CHECK(weight(1, { 1, 0 }, b) == Q(3));
    // word length 0, lam = -lam0: 0 + 2*(-1)/1 = -2
    CHECK(weight(0, { -1, 0 }, b) == Q(-2));
    // epsilon_D rescales the area part only
    b.epsilon_D = Q(1, 2);
    CHECK(weight(1, { 1, 0 }, b) == Q(5));
}

TEST_CASE("rational parsing")
{
    CHECK(parse_rational("3/4") == Q(3, 4));
    CHECK(parse_rational("-3/4") == Q(-3, 4));
    CHECK(parse_rational("7") == Q(7));
    CHECK(parse_rational("-0") == Q(0));
    CHECK_THROWS(parse_rational(""));
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("a/b"));
    CHECK_THROWS(parse_rational("1/2/3"));
}

TEST_CASE("degree parity")
{
    CHECK(is_odd_degree(Q(3)));
    CHECK(is_odd_degree(Q(-1)));
    CHECK_FALSE(is_odd_degree(Q(0)));
    CHECK_FALSE(is_odd_degree(Q(-4)));
    CHECK_THROWS(is_odd_degree(Q(1, 2)));
}
