#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <geoflow/numeric.hpp>
#include <geoflow/product.hpp>

#include "test_util.hpp"

using namespace geoflow;
using geoflow::testutil::chartEuclidean2;
using geoflow::testutil::chartExampleR3;
using geoflow::testutil::chartLine;
using geoflow::testutil::omegaCovector;

TEST_CASE("straight lines on the flat plane") {
    ChartPtr flat = chartEuclidean2();
    FlowState init;
    init.x = Eigen::Vector2d(0.25, -1.0);
    init.p = Eigen::Vector2d(1.0, 0.0);
    Trajectory traj = integrateGeodesic(flat, init, 2.0, 1e-2);
    CHECK(!traj.truncated);
    const FlowState& last = traj.states.back();
    CHECK(last.x(0) == doctest::Approx(0.25 + last.s).epsilon(1e-12));
    CHECK(last.x(1) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(traj.energyDrift < 1e-14);
}

TEST_CASE("energy conservation and Killing momenta on the curved chart") {
    ChartPtr ex = chartExampleR3();
    FlowState init;
    init.x = Eigen::Vector3d(1.0, 0.0, 0.0);
    init.p = Eigen::Vector3d(0.3, 0.7, 0.4);
    init = normalizeEnergy(ex, init);

    CompiledPoly h(hamiltonian(ex));
    CHECK(h.eval(init.x.data(), init.p.data()) == doctest::Approx(0.5).epsilon(1e-12));

    Trajectory traj = integrateGeodesic(ex, init, 10.0, 1e-3);
    CHECK(!traj.truncated);
    CHECK(traj.energyDrift < 1e-10);

    // p_theta is conserved along the flow
    std::vector<double> ptheta = evalAlong(MomentumPolynomial::momentum(ex, 1), traj);
    CHECK(relativeVariation(ptheta) < 1e-10);

    // F_Omega restricts to an affine function of arclength
    MomentumPolynomial fOmega = tensorToPoly(omegaCovector(ex));
    std::vector<double> values = evalAlong(fOmega, traj);
    std::vector<double> grid;
    for (const auto& st : traj.states) grid.push_back(st.s);
    FitReport fit = fitPolyInS(values, grid, 3);
    CHECK(fit.fittedDegree <= 1);
    CHECK(fit.residualRms < 1e-6);
}

TEST_CASE("pole guard truncates trajectories leaving the chart") {
    ChartPtr ex = chartExampleR3();
    // radially inward with no angular momentum: hits r = 0
    FlowState init;
    init.x = Eigen::Vector3d(0.4, 0.0, 0.0);
    init.p = Eigen::Vector3d(-1.0, 0.0, 0.0);
    init = normalizeEnergy(ex, init);
    Trajectory traj = integrateGeodesic(ex, init, 5.0, 1e-3, {1e-6});
    CHECK(traj.truncated);
}

TEST_CASE("polynomial fits recover degrees") {
    std::vector<double> grid;
    for (int i = 0; i <= 200; ++i) grid.push_back(0.05 * i);

    std::vector<double> constant(grid.size(), 3.25);
    FitReport c = fitPolyInS(constant, grid, 4);
    CHECK(c.fittedDegree == 0);
    CHECK(c.residualRms < 1e-12);

    // free particle: x(s) = x0 + v s, so x^2 is a degree-2 polynomial of s
    ChartPtr line = chartLine("x");
    FlowState init;
    init.x = Eigen::VectorXd::Constant(1, 0.5);
    init.p = Eigen::VectorXd::Constant(1, 1.0);
    Trajectory traj = integrateGeodesic(line, init, 3.0, 1e-2);
    MomentumPolynomial x2 = MomentumPolynomial::coefficient(
        line, RationalFunction::variable(line->coordsPtr(), "x"));
    x2 = x2 * x2;
    std::vector<double> values = evalAlong(x2, traj);
    std::vector<double> sgrid;
    for (const auto& st : traj.states) sgrid.push_back(st.s);
    FitReport q = fitPolyInS(values, sgrid, 5);
    CHECK(q.fittedDegree == 2);
    CHECK(q.residualRms < 1e-9);

    CHECK_THROWS_AS(fitPolyInS(values, grid, 3), std::invalid_argument);
    CHECK_THROWS_AS(fitPolyInS({1.0, 2.0}, {0.0, 0.0}, 2), std::invalid_argument);
}

TEST_CASE("conserved quantities on the product metric") {
    ProductMetric pm = productMetric(chartExampleR3("1"), chartExampleR3("2"), false);
    LadderElement f1 = LadderElement::certify(tensorToPoly(omegaCovector(pm.factor1)));
    LadderElement f2 = LadderElement::certify(tensorToPoly(omegaCovector(pm.factor2)));
    MomentumPolynomial fK = composeIntegral(pm, f1, f2, 2);

    std::mt19937_64 rng(1234);
    std::vector<std::pair<double, double>> box = {{0.8, 1.4}, {0.0, 3.0}, {-1.0, 1.0},
                                                  {0.8, 1.4}, {0.0, 3.0}, {-1.0, 1.0}};
    for (int rep = 0; rep < 3; ++rep) {
        FlowState init = randomUnitEnergyState(pm.joint, rng, box);
        Trajectory traj = integrateGeodesic(pm.joint, init, 5.0, 1e-3);
        REQUIRE(!traj.truncated);
        CHECK(traj.energyDrift < 1e-9);
        std::vector<double> values = evalAlong(fK, traj);
        CHECK(relativeVariation(values) < 1e-8);
    }
}

TEST_CASE("csv report shape") {
    QuantityReport row;
    row.trajectoryId = 3;
    row.quantity = "H";
    row.min = 0.5;
    row.max = 0.5;
    row.relDrift = 0.0;
    row.fittedDegree = 0;
    row.residualRms = 1e-17;
    std::string csv = reportCsv({row});
    CHECK(csv.find("trajectory_id,quantity,min,max,rel_drift,fitted_degree,residual_rms") !=
          std::string::npos);
    CHECK(csv.find("3,H,") != std::string::npos);
}
