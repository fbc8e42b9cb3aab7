#ifndef GEOFLOW_TEST_UTIL_HPP
#define GEOFLOW_TEST_UTIL_HPP

#include <random>

#include <geoflow/expression.hpp>
#include <geoflow/flow.hpp>

namespace geoflow::testutil {

inline RationalFunction rf(const std::string& text, const VarListPtr& vars) {
    return parseRationalFunction(text, vars);
}

inline ChartPtr chartLine(const std::string& coord = "x") {
    VarListPtr vars = makeVars({coord});
    RfMatrix g(1, 1);
    g(0, 0) = RationalFunction::constant(vars, Rational(1));
    return MetricChart::create("euclidean1", vars, g);
}

inline ChartPtr chartEuclidean2() {
    VarListPtr vars = makeVars({"x", "y"});
    RfMatrix g(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            g(i, j) = RationalFunction::constant(vars, Rational(i == j ? 1 : 0));
    return MetricChart::create("euclidean2", vars, g);
}

// Curved R^3 in cylindrical coordinates: dr^2 + r^2/(1+r^2) dtheta^2 + 1/(1+r^2) dz^2.
inline ChartPtr chartExampleR3(const std::string& suffix = "") {
    std::string r = "r" + suffix, th = "theta" + suffix, z = "z" + suffix;
    VarListPtr vars = makeVars({r, th, z});
    RfMatrix g(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g(i, j) = RationalFunction::zero(vars);
    g(0, 0) = rf("1", vars);
    g(1, 1) = rf(r + "^2/(1+" + r + "^2)", vars);
    g(2, 2) = rf("1/(1+" + r + "^2)", vars);
    return MetricChart::create("example_r3" + suffix, vars, g, r + " > 0");
}

// Omega = r dr + (2z/(1+r^2)) dz on the example chart.
inline SymmetricCotensor omegaCovector(const ChartPtr& chart) {
    const VarListPtr& vars = chart->coordsPtr();
    const std::string r = chart->coords()[0], z = chart->coords()[2];
    SymmetricCotensor t(chart, 1);
    t.set({0}, rf(r, vars));
    t.set({2}, rf("2*" + z + "/(1+" + r + "^2)", vars));
    return t;
}

inline MultiPoly randomPoly(std::mt19937_64& rng, const VarListPtr& vars, int maxDeg,
                            int terms) {
    std::uniform_int_distribution<int> coeff(-5, 5);
    std::uniform_int_distribution<int> deg(0, maxDeg);
    MultiPoly p(vars);
    for (int t = 0; t < terms; ++t) {
        Exponents e(vars->size(), 0u);
        int budget = deg(rng);
        std::uniform_int_distribution<std::size_t> pick(0, vars->size() - 1);
        for (int i = 0; i < budget; ++i) ++e[pick(rng)];
        p.addTerm(e, Rational(coeff(rng)));
    }
    return p;
}

inline MomentumPolynomial randomHomogeneous(std::mt19937_64& rng, const ChartPtr& chart,
                                            int degree, int coeffDeg, int terms) {
    MomentumPolynomial f(chart);
    auto moms = [&] {
        std::vector<Exponents> out;
        std::function<void(Exponents&, std::size_t, int)> rec = [&](Exponents& e,
                                                                    std::size_t pos, int rem) {
            if (pos + 1 == chart->dim()) {
                e[pos] = static_cast<unsigned>(rem);
                out.push_back(e);
                return;
            }
            for (int k = 0; k <= rem; ++k) {
                e[pos] = static_cast<unsigned>(k);
                rec(e, pos + 1, rem - k);
            }
        };
        Exponents e(chart->dim(), 0u);
        rec(e, 0, degree);
        return out;
    }();
    std::uniform_int_distribution<std::size_t> pick(0, moms.size() - 1);
    for (int t = 0; t < terms; ++t) {
        MultiPoly c = randomPoly(rng, chart->coordsPtr(), coeffDeg, 2);
        if (c.isZero()) continue;
        f.addTerm(moms[pick(rng)], RationalFunction(std::move(c)));
    }
    return f;
}

} // namespace geoflow::testutil

#endif
