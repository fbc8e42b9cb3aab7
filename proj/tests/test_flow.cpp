#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <geoflow/product.hpp>

#include <atomic>
#include <thread>

#include "test_util.hpp"

using namespace geoflow;
using geoflow::testutil::chartEuclidean2;
using geoflow::testutil::chartExampleR3;
using geoflow::testutil::chartLine;
using geoflow::testutil::omegaCovector;
using geoflow::testutil::rf;

TEST_CASE("hamiltonians") {
    ChartPtr flat = chartEuclidean2();
    MomentumPolynomial h = hamiltonian(flat);
    MomentumPolynomial expect(flat);
    expect.addTerm({2, 0}, RationalFunction::constant(flat->coordsPtr(), Rational(1, 2)));
    expect.addTerm({0, 2}, RationalFunction::constant(flat->coordsPtr(), Rational(1, 2)));
    CHECK(h == expect);

    ChartPtr ex = chartExampleR3();
    MomentumPolynomial hex = hamiltonian(ex);
    MomentumPolynomial want(ex);
    want.addTerm({2, 0, 0}, rf("1/2", ex->coordsPtr()));
    want.addTerm({0, 2, 0}, rf("(1+r^2)/(2*r^2)", ex->coordsPtr()));
    want.addTerm({0, 0, 2}, rf("(1+r^2)/2", ex->coordsPtr()));
    CHECK(hex == want);

    // product chart: joint Hamiltonian splits as h1 + h2
    ProductMetric pm = productMetric(chartExampleR3("1"), chartExampleR3("2"), false);
    CHECK(hamiltonian(pm.joint) == pm.h1() + pm.h2());
}

TEST_CASE("poisson bracket basics") {
    ChartPtr ex = chartExampleR3();
    MomentumPolynomial h = hamiltonian(ex);
    MomentumPolynomial pTheta = MomentumPolynomial::momentum(ex, 1);
    MomentumPolynomial pZ = MomentumPolynomial::momentum(ex, 2);

    CHECK(poissonBracket(h, pTheta).isZero());
    CHECK(poissonBracket(h, pZ).isZero());

    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 10; ++rep) {
        MomentumPolynomial f = testutil::randomHomogeneous(rng, ex, 2, 2, 3);
        CHECK(poissonBracket(f, f).isZero());
    }

    // hand bracket oracle: {H, r p_r + 2 z p_z} = p_r^2 + p_theta^2/r^2 + (r^2+2) p_z^2
    MomentumPolynomial fOmega = tensorToPoly(omegaCovector(ex));
    MomentumPolynomial bracket = poissonBracket(h, fOmega);
    MomentumPolynomial expect(ex);
    expect.addTerm({2, 0, 0}, rf("1", ex->coordsPtr()));
    expect.addTerm({0, 2, 0}, rf("1/r^2", ex->coordsPtr()));
    expect.addTerm({0, 0, 2}, rf("r^2+2", ex->coordsPtr()));
    CHECK(bracket == expect);
    CHECK(bracket == h.scaled(Rational(2)) - pTheta * pTheta + pZ * pZ);
    CHECK(applyH(fOmega) == bracket);

    ChartPtr other = chartEuclidean2();
    CHECK_THROWS_AS(poissonBracket(h, hamiltonian(other)), ChartMismatchError);
}

TEST_CASE("iterated H and ladder degree") {
    ChartPtr line = chartLine("x1");
    MomentumPolynomial x = MomentumPolynomial::coefficient(
        line, RationalFunction::variable(line->coordsPtr(), "x1"));
    MomentumPolynomial p = MomentumPolynomial::momentum(line, 0);

    CHECK(iterateH(x, 1) == p); // free particle: H x = p
    CHECK(iterateH(x, 2).isZero());

    // hand oracle: H(x^2) = 2xp, H^2(x^2) = 2p^2, H^3(x^2) = 0
    MomentumPolynomial x2 = x * x;
    CHECK(iterateH(x2, 1) == x.scaled(Rational(2)) * p);
    CHECK(iterateH(x2, 2) == (p * p).scaled(Rational(2)));
    CHECK(iterateH(x2, 3).isZero());
    CHECK(ladderDegree(x2, 5) == 3);

    ChartPtr ex = chartExampleR3();
    MomentumPolynomial pTheta = MomentumPolynomial::momentum(ex, 1);
    CHECK(iterateH(pTheta, 1).isZero());
    CHECK(ladderDegree(pTheta, 3) == 1);

    MomentumPolynomial fOmega = tensorToPoly(omegaCovector(ex));
    CHECK(iterateH(fOmega, 2).isZero());
    CHECK(ladderDegree(fOmega, 5) == 2);
    CHECK(!ladderDegree(MomentumPolynomial::coefficient(
                            ex, RationalFunction::variable(ex->coordsPtr(), "theta")),
                        2)
               .has_value());

    LadderElement el = LadderElement::certify(fOmega);
    CHECK(el.k == 2);
    CHECK(el.degree == 1);
}

TEST_CASE("degree raising (property)") {
    std::mt19937_64 rng(20240818);
    ChartPtr charts[] = {chartEuclidean2(), chartExampleR3()};
    int checked = 0;
    for (const ChartPtr& chart : charts) {
        for (int d = 0; d <= 3; ++d) {
            for (int rep = 0; rep < 25; ++rep) {
                MomentumPolynomial f = testutil::randomHomogeneous(rng, chart, d, 2, 3);
                if (f.isZero()) continue;
                MomentumPolynomial hf = applyH(f);
                ++checked;
                if (!hf.isZero()) CHECK(hf.homogeneousDegree() == d + 1);
            }
        }
    }
    CHECK(checked > 150);
}

TEST_CASE("Leibniz and Jacobi (property)") {
    std::mt19937_64 rng(424242);
    ChartPtr ex = chartExampleR3();
    MomentumPolynomial h = hamiltonian(ex);
    for (int rep = 0; rep < 8; ++rep) {
        MomentumPolynomial f = testutil::randomHomogeneous(rng, ex, 1, 2, 2);
        MomentumPolynomial g = testutil::randomHomogeneous(rng, ex, 2, 2, 2);
        CHECK(poissonBracket(h, f * g) ==
              poissonBracket(h, f) * g + f * poissonBracket(h, g));

        MomentumPolynomial k = testutil::randomHomogeneous(rng, ex, 1, 1, 2);
        MomentumPolynomial jacobi = poissonBracket(f, poissonBracket(g, k)) +
                                    poissonBracket(g, poissonBracket(k, f)) +
                                    poissonBracket(k, poissonBracket(f, g));
        CHECK(jacobi.isZero());
    }
}

TEST_CASE("homogeneous parts of a sum of integrals stay integrals") {
    ChartPtr ex = chartExampleR3();
    MomentumPolynomial h = hamiltonian(ex);
    MomentumPolynomial pTheta = MomentumPolynomial::momentum(ex, 1);
    MomentumPolynomial pZ = MomentumPolynomial::momentum(ex, 2);
    MomentumPolynomial one =
        MomentumPolynomial::coefficient(ex, RationalFunction::constant(ex->coordsPtr(),
                                                                       Rational(3)));
    MomentumPolynomial mixed = h + pTheta + pZ * pZ.scaled(Rational(5)) + one;
    CHECK(isIntegral(mixed));
    for (int d = 0; d <= 2; ++d) {
        MomentumPolynomial part = mixed.homogeneousPart(d);
        CHECK(isIntegral(part));
    }
}

TEST_CASE("shared charts are safe to use from several threads") {
    ChartPtr ex = chartExampleR3();
    MomentumPolynomial fOmega = tensorToPoly(omegaCovector(ex));
    std::vector<std::thread> workers;
    std::atomic<int> failures{0};
    for (int t = 0; t < 4; ++t) {
        workers.emplace_back([&] {
            for (int i = 0; i < 5; ++i) {
                if (!iterateH(fOmega, 2).isZero()) ++failures;
                if (!applyH(hamiltonian(ex)).isZero()) ++failures;
            }
        });
    }
    for (auto& w : workers) w.join();
    CHECK(failures == 0);
}

TEST_CASE("bracket-Killing equivalence on corpus tensors") {
    ChartPtr ex = chartExampleR3();
    SymmetricCotensor omega = omegaCovector(ex);
    SymmetricCotensor nabla = killingOperator(omega);

    // Killing tensor <-> vanishing bracket
    CHECK(killingOperator(nabla).isZero());
    CHECK(isIntegral(tensorToPoly(nabla)));
    // Omega itself is not Killing and its polynomial is not an integral
    CHECK(!killingOperator(omega).isZero());
    CHECK(!isIntegral(tensorToPoly(omega)));

    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 6; ++rep) {
        SymmetricCotensor t(ex, 2);
        for (const auto& idx : sortedTuples(3, 2))
            t.set(idx, RationalFunction(testutil::randomPoly(rng, ex->coordsPtr(), 2, 2)));
        CHECK(killingOperator(t).isZero() == isIntegral(tensorToPoly(t)));
    }
}
