#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

using namespace geoflow;
using geoflow::testutil::rf;

TEST_CASE("rational canonical form") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(denominator(Rational(3) / Rational(-6)) == 2);
    CHECK(numerator(Rational(3) / Rational(-6)) == -1);
    CHECK(parseRational("7/21") == Rational(1, 3));
}

TEST_CASE("polynomial arithmetic examples") {
    VarListPtr vx = makeVars({"x"});
    MultiPoly x = MultiPoly::variable(vx, "x");
    MultiPoly one = MultiPoly::constant(vx, Rational(1));

    CHECK((x + one) * (x - one) == x * x - one);
    CHECK((x + (-x)).isZero());

    VarListPtr vr = makeVars({"r", "theta", "z"});
    MultiPoly r = MultiPoly::variable(vr, "r");
    MultiPoly q = MultiPoly::constant(vr, Rational(1)) + r * r;
    // hand-expanded oracle: (1+r^2)^2 = 1 + 2 r^2 + r^4
    MultiPoly expanded(vr);
    expanded.addTerm({0, 0, 0}, Rational(1));
    expanded.addTerm({2, 0, 0}, Rational(2));
    expanded.addTerm({4, 0, 0}, Rational(1));
    CHECK(q * q == expanded);

    CHECK_THROWS_AS(MultiPoly::variable(vx, "x") + MultiPoly::variable(vr, "r"),
                    MismatchedVariablesError);
}

TEST_CASE("polynomial partial derivatives") {
    VarListPtr vr = makeVars({"r", "theta", "z"});
    MultiPoly r = MultiPoly::variable(vr, "r");
    CHECK((r * r).partial("r") == r.scaled(Rational(2)));
    CHECK((r * r).partial("z").isZero());

    // term-by-term oracle for d/dr (1 + 2 r^2 + r^4)
    MultiPoly p(vr);
    p.addTerm({0, 0, 0}, Rational(1));
    p.addTerm({2, 0, 0}, Rational(2));
    p.addTerm({4, 0, 0}, Rational(1));
    MultiPoly expect(vr);
    expect.addTerm({1, 0, 0}, Rational(4));
    expect.addTerm({3, 0, 0}, Rational(4));
    CHECK(p.partial("r") == expect);
    CHECK_THROWS(p.partial("w"));
}

TEST_CASE("rational function canonical form") {
    VarListPtr vr = makeVars({"r"});
    MultiPoly r = MultiPoly::variable(vr, "r");
    MultiPoly one = MultiPoly::constant(vr, Rational(1));

    RationalFunction a(r * r.scaled(Rational(2)), one.scaled(Rational(2)));
    CHECK(a == RationalFunction(r * r));

    // gcd cancellation with a multiplication oracle
    MultiPoly num = r * r + r * r * r * r; // r^2 + r^4
    MultiPoly den = one + r * r;           // 1 + r^2
    RationalFunction b(num, den);
    CHECK(b == RationalFunction(r * r));
    CHECK(b.num() * den == num * b.den());

    RationalFunction z(MultiPoly(vr), den);
    CHECK(z.isZero());
    CHECK(z.den() == one);

    CHECK_THROWS_AS(RationalFunction(r, MultiPoly(vr)), MathDomainError);

    // canonical form is idempotent
    RationalFunction c = rf("(r^2+r^4)/(1+r^2)", vr);
    CHECK(RationalFunction(c.num(), c.den()) == c);

    // denominator has positive integer-primitive leading form
    RationalFunction d = rf("r/(2-2*r)", vr);
    CHECK(d.den().leadingCoeff() > 0);
    CHECK(d.den().content() == Rational(1));
}

TEST_CASE("canonical form under common factors (property)") {
    std::mt19937_64 rng(20240817);
    VarListPtr vars = makeVars({"u", "v", "w"});
    int done = 0;
    while (done < 40) {
        MultiPoly a = testutil::randomPoly(rng, vars, 3, 3);
        MultiPoly b = testutil::randomPoly(rng, vars, 3, 3);
        MultiPoly c = testutil::randomPoly(rng, vars, 2, 2);
        if (b.isZero() || c.isZero()) continue;
        ++done;
        CHECK(RationalFunction(a * c, b * c) == RationalFunction(a, b));
    }
}

TEST_CASE("ring axioms on random samples") {
    std::mt19937_64 rng(7);
    VarListPtr vars = makeVars({"u", "v", "w", "t"});
    for (int i = 0; i < 30; ++i) {
        MultiPoly a = testutil::randomPoly(rng, vars, 4, 4);
        MultiPoly b = testutil::randomPoly(rng, vars, 4, 4);
        MultiPoly c = testutil::randomPoly(rng, vars, 4, 4);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * b == b * a);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a * b) * c == a * (b * c));
    }
}

TEST_CASE("gcd and exact division") {
    VarListPtr vars = makeVars({"u", "v"});
    MultiPoly u = MultiPoly::variable(vars, "u");
    MultiPoly v = MultiPoly::variable(vars, "v");
    MultiPoly one = MultiPoly::constant(vars, Rational(1));

    MultiPoly p = (u + v) * (u - v);
    MultiPoly q = (u + v) * (u + v);
    CHECK(polyGcd(p, q) == u + v);
    CHECK(divExact(p, u + v) == u - v);
    CHECK_THROWS_AS(divExact(u * u + one, u + one), std::logic_error);

    std::mt19937_64 rng(99);
    for (int i = 0; i < 20; ++i) {
        MultiPoly a = testutil::randomPoly(rng, vars, 3, 3);
        MultiPoly b = testutil::randomPoly(rng, vars, 3, 3);
        if (a.isZero() || b.isZero()) continue;
        MultiPoly g = polyGcd(a, b);
        CHECK(divExact(a.primitivePart(), g) * g == a.primitivePart());
        CHECK(divExact(b.primitivePart(), g) * g == b.primitivePart());
    }
}

TEST_CASE("expression parsing") {
    VarList vars{"r", "theta", "z"};
    VarListPtr vp = makeVars({"r", "theta", "z"});

    ExprPtr e = parseExpression("r^2/(1+r^2)", vars);
    REQUIRE(e->kind == ExpressionAst::Kind::Div);
    CHECK(e->lhs->kind == ExpressionAst::Kind::Pow);
    CHECK(e->lhs->lhs->kind == ExpressionAst::Kind::Variable);
    CHECK(e->lhs->lhs->name == "r");
    CHECK(e->lhs->exponent == 2);
    CHECK(e->rhs->kind == ExpressionAst::Kind::Add);

    ExprPtr zero = parseExpression("0", vars);
    CHECK(zero->kind == ExpressionAst::Kind::Constant);
    CHECK(zero->value == 0);

    RationalFunction cov = rf("2*z/(1+r^2)", vp);
    RationalFunction manual =
        RationalFunction(MultiPoly::variable(vp, "z").scaled(Rational(2)),
                         MultiPoly::constant(vp, Rational(1)) +
                             MultiPoly::variable(vp, "r") * MultiPoly::variable(vp, "r"));
    CHECK(cov == manual);

    CHECK_THROWS_AS(parseExpression("r + q", vars), ParseError);
    CHECK_THROWS_AS(parseExpression("r^-2", vars), ParseError);
    CHECK_THROWS_AS(parseExpression("r +", vars), ParseError);
    CHECK_THROWS_AS(parseExpression("(r", vars), ParseError);
    try {
        parseExpression("1 + %", vars);
        CHECK(false);
    } catch (const ParseError& err) {
        CHECK(err.position() == 4);
    }
}

TEST_CASE("print-parse fixed point") {
    VarList vars{"r", "theta", "z", "x1", "x2"};
    const char* samples[] = {
        "r^2/(1+r^2)",
        "2*z/(1+r^2)",
        "-r2",
        "(r^2+2)/(1+r^2)^2",
        "1/3",
        "x1*(x2^2+2)/(3*(1+x2^2)^2)",
        "-(r - z)*(r + z)",
        "0",
    };
    VarList all{"r", "theta", "z", "x1", "x2", "r2"};
    for (const char* s : samples) {
        ExprPtr e = parseExpression(s, all);
        std::string printed = printExpression(e);
        ExprPtr again = parseExpression(printed, all);
        CHECK(*again == *e);
        VarListPtr vp = makeVars(all);
        CHECK(evalExpression(again, vp) == evalExpression(e, vp));
    }
}

TEST_CASE("numeric evaluation and pole guard") {
    VarListPtr vr = makeVars({"r"});
    CHECK(rf("r^2/(1+r^2)", vr).evalDouble({1.0}) == doctest::Approx(0.5));
    CHECK(rf("1/(1+r^2)", vr).evalDouble({0.0}) == doctest::Approx(1.0));
    // hand arithmetic oracle: (1+2)/(1+1)^2 = 3/4
    CHECK(rf("(r^2+2)/(r^2+1)^2", vr).evalDouble({1.0}) == doctest::Approx(0.75));
    CHECK_THROWS_AS(rf("1/r", vr).evalDouble({1e-13}), PoleError);
    CHECK(rf("(r^2+2)/(r^2+1)^2", vr).evalRational({Rational(1)}) == Rational(3, 4));
    CHECK_THROWS_AS(rf("1/r", vr).evalRational({Rational(0)}), PoleError);
}
