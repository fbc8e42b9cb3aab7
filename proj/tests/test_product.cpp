#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <geoflow/product.hpp>

#include "test_util.hpp"

using namespace geoflow;
using geoflow::testutil::chartExampleR3;
using geoflow::testutil::chartLine;
using geoflow::testutil::omegaCovector;
using geoflow::testutil::rf;

namespace {

ProductMetric lineTimesLine() {
    return productMetric(chartLine("x1"), chartLine("x2"), false);
}

MomentumPolynomial coordFn(const ChartPtr& chart, const std::string& name) {
    return MomentumPolynomial::coefficient(chart,
                                           RationalFunction::variable(chart->coordsPtr(), name));
}

MomentumPolynomial angularMomentum(const ProductMetric& pm) {
    // x1 p2 - x2 p1 on the joint chart
    MomentumPolynomial f(pm.joint);
    f.addTerm({0, 1}, RationalFunction::variable(pm.joint->coordsPtr(), "x1"));
    f.addTerm({1, 0}, -RationalFunction::variable(pm.joint->coordsPtr(), "x2"));
    return f;
}

AnsatzSpec exampleSpec(const ChartPtr& factor) {
    const std::string r = factor->coords()[0];
    const std::string z = factor->coords()[2];
    MultiPoly den = rf(r + "^2*(1+" + r + "^2)^2", factor->coordsPtr()).num();
    AnsatzSpec spec = AnsatzSpec::make(factor, 1, 2, den);
    spec.coeffVars = std::vector<std::string>{r, z};
    return spec;
}

} // namespace

TEST_CASE("product metric assembly") {
    ProductMetric pm = lineTimesLine();
    CHECK(pm.joint->dim() == 2);
    MomentumPolynomial h = hamiltonian(pm.joint);
    MomentumPolynomial expect(pm.joint);
    expect.addTerm({2, 0}, RationalFunction::constant(pm.joint->coordsPtr(), Rational(1, 2)));
    expect.addTerm({0, 2}, RationalFunction::constant(pm.joint->coordsPtr(), Rational(1, 2)));
    CHECK(h == expect);
    CHECK(h == pm.h1() + pm.h2());

    // name collision requires the auto-rename flag
    CHECK_THROWS_AS(productMetric(chartLine("x"), chartLine("x"), false), MathDomainError);
    ProductMetric renamed = productMetric(chartLine("x"), chartLine("x"), true);
    CHECK(renamed.joint->coords() == VarList{"x_1", "x_2"});

    // 4-dimensional block assembly
    ProductMetric mixed = productMetric(chartLine("t"), chartExampleR3(), false);
    CHECK(mixed.joint->dim() == 4);
    CHECK(hamiltonian(mixed.joint) == mixed.h1() + mixed.h2());
}

TEST_CASE("bi-homogeneous split") {
    ProductMetric pm = lineTimesLine();
    MomentumPolynomial am = angularMomentum(pm);
    BiHomogeneousSplit split = bihomogeneousSplit(am, pm);
    REQUIRE(split.degree == 1);
    // S_0 = x1 p2, S_1 = -x2 p1
    MomentumPolynomial s0(pm.joint), s1(pm.joint);
    s0.addTerm({0, 1}, RationalFunction::variable(pm.joint->coordsPtr(), "x1"));
    s1.addTerm({1, 0}, -RationalFunction::variable(pm.joint->coordsPtr(), "x2"));
    CHECK(split.parts[0] == s0);
    CHECK(split.parts[1] == s1);
    CHECK(split.sum() == am);

    // a factor-1 momentum concentrates in the top part
    ProductMetric pex = productMetric(chartExampleR3("1"), chartExampleR3("2"), false);
    MomentumPolynomial pTheta1 = MomentumPolynomial::momentum(pex.joint, 1);
    BiHomogeneousSplit single = bihomogeneousSplit(pTheta1, pex);
    CHECK(single.parts[0].isZero());
    CHECK(single.parts[1] == pTheta1);

    MomentumPolynomial notHom = am + hamiltonian(pm.joint);
    CHECK_THROWS_AS(bihomogeneousSplit(notHom, pm), MathDomainError);
}

TEST_CASE("chain equations") {
    ProductMetric pm = lineTimesLine();
    MomentumPolynomial am = angularMomentum(pm);
    CHECK(chainCheck(bihomogeneousSplit(am, pm), pm).ok);

    // x1 p2 alone fails at the mixed equation {H1, S_0} + {H2, S_1}
    MomentumPolynomial half(pm.joint);
    half.addTerm({0, 1}, RationalFunction::variable(pm.joint->coordsPtr(), "x1"));
    ChainCheckResult bad = chainCheck(bihomogeneousSplit(half, pm), pm);
    CHECK(!bad.ok);
    CHECK(bad.failingEquation == 1);
    CHECK(!bad.residual.isZero());
}

TEST_CASE("ladder composition (hand telescoping oracle)") {
    ProductMetric pm = lineTimesLine();
    LadderElement x1 = LadderElement::certify(coordFn(pm.factor1, "x1"));
    LadderElement x2 = LadderElement::certify(coordFn(pm.factor2, "x2"));
    CHECK(x1.k == 2);

    MomentumPolynomial composed = composeIntegral(pm, x1, x2, 2);
    CHECK(composed == angularMomentum(pm));
    CHECK(isIntegral(composed));

    // k = 1 is the plain product
    LadderElement p1 = LadderElement::certify(MomentumPolynomial::momentum(pm.factor1, 0));
    LadderElement p2 = LadderElement::certify(MomentumPolynomial::momentum(pm.factor2, 0));
    MomentumPolynomial prod = composeIntegral(pm, p1, p2, 1);
    CHECK(prod == pm.lift1(p1.f) * pm.lift2(p2.f));

    // certificate violation: x^2 on the line is not in L_2
    LadderElement bogus{coordFn(pm.factor1, "x1") * coordFn(pm.factor1, "x1"), 2, 0};
    CHECK_THROWS_AS(composeIntegral(pm, bogus, x2, 2), MathDomainError);
}

TEST_CASE("composition of the curved covectors gives the degree-3 Killing tensor") {
    ProductMetric pm = productMetric(chartExampleR3("1"), chartExampleR3("2"), false);
    SymmetricCotensor omega1 = omegaCovector(pm.factor1);
    SymmetricCotensor omega2 = omegaCovector(pm.factor2);

    LadderElement f1 = LadderElement::certify(tensorToPoly(omega1));
    LadderElement f2 = LadderElement::certify(tensorToPoly(omega2));
    REQUIRE(f1.k == 2);
    MomentumPolynomial fK = composeIntegral(pm, f1, f2, 2);

    // telescoping form: F_Omega1 * F_nablaOmega2 - F_nablaOmega1 * F_Omega2
    MomentumPolynomial direct =
        pm.lift1(f1.f) * pm.lift2(applyH(f2.f)) - pm.lift1(applyH(f1.f)) * pm.lift2(f2.f);
    CHECK(fK == direct);
    CHECK(isIntegral(fK));
    CHECK(fK.homogeneousDegree() == 3);

    // tensor route: K = Omega1 . nablaOmega2 - Omega2 . nablaOmega1 (symmetrized)
    SymmetricCotensor k1 = symProduct(polyToTensor(pm.lift1(f1.f)),
                                      polyToTensor(pm.lift2(applyH(f2.f))));
    SymmetricCotensor k2 = symProduct(polyToTensor(pm.lift2(f2.f)),
                                      polyToTensor(pm.lift1(applyH(f1.f))));
    SymmetricCotensor kTensor = k1 - k2;
    CHECK(tensorToPoly(kTensor) == fK);
    CHECK(killingOperator(kTensor).isZero());
}

TEST_CASE("graded family and Jordan ladders on the line") {
    ChartPtr line = chartLine("x");
    GradedFamily fam = buildGradedFamily(line, 1, AnsatzSpec::make(line, 1, 4));
    REQUIRE(fam.grades.size() == 2);
    CHECK(fam.grades[0].size() == 2); // {1, x}
    CHECK(fam.grades[1].size() == 1); // {p}

    std::vector<JordanLadder> ladders = jordanLadders(fam);
    REQUIRE(ladders.size() == 2);
    CHECK(ladders[0].length() == 2);
    CHECK(ladders[0].grade == 0);
    CHECK(ladders[1].length() == 1);
    std::size_t total = 0;
    for (const auto& l : ladders) total += l.length();
    CHECK(total == fam.dimension());

    for (const auto& l : ladders) {
        for (std::size_t i = 0; i + 1 < l.length(); ++i)
            CHECK(applyH(l.chain[i]) == l.chain[i + 1]);
        CHECK(applyH(l.chain.back()).isZero());
        CHECK(l.chain.front().homogeneousDegree() == l.grade);
    }
}

TEST_CASE("Jordan ladders on the curved factor include the covector chain") {
    ChartPtr ex = chartExampleR3();
    GradedFamily fam = buildGradedFamily(ex, 2, exampleSpec(ex));
    std::vector<JordanLadder> ladders = jordanLadders(fam);

    std::size_t total = 0;
    bool hasLengthTwo = false;
    std::vector<MomentumPolynomial> all;
    for (const auto& l : ladders) {
        total += l.length();
        if (l.length() == 2 && l.grade == 1) hasLengthTwo = true;
        for (std::size_t i = 0; i + 1 < l.length(); ++i)
            CHECK(applyH(l.chain[i]) == l.chain[i + 1]);
        CHECK(applyH(l.chain.back()).isZero());
        for (const auto& c : l.chain) all.push_back(c);
    }
    CHECK(total == fam.dimension());
    CHECK(hasLengthTwo);
    // chain vectors form a basis
    std::vector<MomentumPolynomial> span;
    CHECK(extendSpan(span, all) == static_cast<int>(fam.dimension()));

    // F_Omega then sits inside the family with H F_Omega = F_nablaOmega
    MomentumPolynomial fOmega = tensorToPoly(omegaCovector(ex));
    CHECK(expandOverBasis(fOmega, fam.grades[1]).has_value());
    CHECK(expandOverBasis(applyH(fOmega), fam.grades[2]).has_value());
}

TEST_CASE("decompose the flat angular momentum") {
    ProductMetric pm = lineTimesLine();
    MomentumPolynomial am = angularMomentum(pm);
    AnsatzSpec spec1 = AnsatzSpec::make(pm.factor1, 1, 4);
    AnsatzSpec spec2 = AnsatzSpec::make(pm.factor2, 1, 4);
    ReducibleForm form = decomposeIntegral(am, pm, spec1, spec2);

    CHECK(form.residual.isZero());
    REQUIRE(form.terms.size() == 1);
    CHECK(form.terms[0].k == 2);
    CHECK(form.classification == Reducibility::IrreducibleWitnessed);
    CHECK(form.expandTerms() == am);
    // generator pair is (x1, x2) up to scale
    CHECK(form.terms[0].f1.degree == 0);
    CHECK(form.terms[0].f2.degree == 0);

    ClassificationResult cls = reducibilityClassify(form);
    CHECK(cls.verdict == Reducibility::IrreducibleWitnessed);
    REQUIRE(cls.witness.has_value());
    CHECK(!cls.witness->isZero());
}

TEST_CASE("decompose a reducible product of Killing momenta") {
    ProductMetric pm = productMetric(chartExampleR3("1"), chartExampleR3("2"), false);
    MomentumPolynomial pTheta1 = MomentumPolynomial::momentum(pm.joint, 1);
    MomentumPolynomial pTheta2 = MomentumPolynomial::momentum(pm.joint, 4);
    MomentumPolynomial f = pTheta1 * pTheta2;

    ReducibleForm form =
        decomposeIntegral(f, pm, exampleSpec(pm.factor1), exampleSpec(pm.factor2));
    CHECK(form.residual.isZero());
    REQUIRE(form.terms.size() == 1);
    CHECK(form.terms[0].k == 1);
    CHECK(form.classification == Reducibility::Reducible);
    CHECK(reducibilityClassify(form).verdict == Reducibility::Reducible);
}

TEST_CASE("decompose the degree-3 tensor of the curved product") {
    ProductMetric pm = productMetric(chartExampleR3("1"), chartExampleR3("2"), false);
    LadderElement f1 = LadderElement::certify(tensorToPoly(omegaCovector(pm.factor1)));
    LadderElement f2 = LadderElement::certify(tensorToPoly(omegaCovector(pm.factor2)));
    MomentumPolynomial fK = composeIntegral(pm, f1, f2, 2);

    ReducibleForm form =
        decomposeIntegral(fK, pm, exampleSpec(pm.factor1), exampleSpec(pm.factor2));
    CHECK(form.residual.isZero());
    REQUIRE(form.terms.size() == 1);
    CHECK(form.terms[0].k == 2);
    CHECK(form.terms[0].coefficient == Rational(1));
    CHECK(form.classification == Reducibility::IrreducibleWitnessed);
    CHECK(form.expandTerms() == fK);

    ClassificationResult cls = reducibilityClassify(form);
    CHECK(cls.verdict == Reducibility::IrreducibleWitnessed);
    REQUIRE(cls.witness.has_value());
    // the witness is the nonzero (2,2)-bidegree component of {H1, F_K}
    CHECK(!cls.witness->isZero());
    MomentumPolynomial bracket = poissonBracket(pm.h1(), fK);
    CHECK(bracket == pm.lift1(applyH(f1.f)) * pm.lift2(applyH(f2.f)));
    CHECK(*cls.witness == bracket);
}

TEST_CASE("errors: non-integrals and too-small ansatz") {
    ProductMetric pm = lineTimesLine();
    MomentumPolynomial notIntegral(pm.joint);
    notIntegral.addTerm({0, 1}, RationalFunction::variable(pm.joint->coordsPtr(), "x1"));
    CHECK_THROWS_AS(decomposeIntegral(notIntegral, pm, AnsatzSpec::make(pm.factor1, 1, 3),
                                      AnsatzSpec::make(pm.factor2, 1, 3)),
                    MathDomainError);

    // x1^2 p2 - ... needs coefficient degree 2; degree-0 ansatz must fail loudly
    LadderElement f1 = LadderElement::certify(coordFn(pm.factor1, "x1") *
                                              coordFn(pm.factor1, "x1"));
    LadderElement f2 = LadderElement::certify(coordFn(pm.factor2, "x2") *
                                              coordFn(pm.factor2, "x2"));
    MomentumPolynomial composed = composeIntegral(pm, f1, f2, 3);
    CHECK(isIntegral(composed));
    CHECK_THROWS_AS(decomposeIntegral(composed, pm, AnsatzSpec::make(pm.factor1, 1, 0),
                                      AnsatzSpec::make(pm.factor2, 1, 0)),
                    AnsatzIncompleteError);
}

TEST_CASE("integrals with torus-like factor-1 coefficients stay reducible") {
    // Coefficients free of x1 are the polynomial data that would descend to a
    // circle factor; every integral the solver finds in that family must
    // decompose with k = 1 terms only.
    ProductMetric pm = lineTimesLine();
    for (int d = 1; d <= 2; ++d) {
        AnsatzSpec spec = AnsatzSpec::make(pm.joint, d, 3);
        spec.coeffVars = std::vector<std::string>{"x2"};
        LadderBasis basis = solveKilling(pm.joint, spec);
        CHECK(basis.dimension() == static_cast<std::size_t>(d + 1));
        for (const auto& f : basis.basis) {
            ReducibleForm form = decomposeIntegral(f, pm, AnsatzSpec::make(pm.factor1, 1, 3),
                                                   AnsatzSpec::make(pm.factor2, 1, 3));
            CHECK(form.residual.isZero());
            CHECK(form.classification == Reducibility::Reducible);
            for (const auto& t : form.terms) CHECK(t.k == 1);
        }
    }
}

TEST_CASE("decompose-compose round trip (seeded sample)") {
    ProductMetric pm = lineTimesLine();
    std::mt19937_64 rng(987654321);
    std::uniform_int_distribution<int> kDist(1, 3), sDist(0, 2), cDist(-4, 4);

    auto randomLadder = [&](const ChartPtr& chart, const std::string& coord, int s, int k) {
        const VarListPtr& vars = chart->coordsPtr();
        // coefficient polynomial of degree exactly k-1
        MultiPoly a(vars);
        for (int i = 0; i < k; ++i) {
            int c = cDist(rng);
            if (i == k - 1 && c == 0) c = 1;
            Exponents e(1, static_cast<unsigned>(i));
            a.addTerm(e, Rational(c));
        }
        MomentumPolynomial f = MomentumPolynomial::coefficient(chart, RationalFunction(a));
        for (int i = 0; i < s; ++i) f = f * MomentumPolynomial::momentum(chart, 0);
        (void)coord;
        return LadderElement::certify(f);
    };

    for (int rep = 0; rep < 12; ++rep) {
        int k = kDist(rng), s1 = sDist(rng), s2 = sDist(rng);
        LadderElement f1 = randomLadder(pm.factor1, "x1", s1, k);
        LadderElement f2 = randomLadder(pm.factor2, "x2", s2, k);
        REQUIRE(f1.k == k);
        REQUIRE(f2.k == k);
        MomentumPolynomial composed = composeIntegral(pm, f1, f2, k);
        CHECK(isIntegral(composed));
        CHECK(composed.homogeneousDegree() == s1 + s2 + k - 1);

        int d = s1 + s2 + k - 1;
        AnsatzSpec spec1 = AnsatzSpec::make(pm.factor1, 1, d);
        AnsatzSpec spec2 = AnsatzSpec::make(pm.factor2, 1, d);
        ReducibleForm form = decomposeIntegral(composed, pm, spec1, spec2);
        CHECK(form.residual.isZero());
        CHECK(form.expandTerms() == composed);
    }
}
