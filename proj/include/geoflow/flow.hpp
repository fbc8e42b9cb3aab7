#ifndef GEOFLOW_FLOW_HPP
#define GEOFLOW_FLOW_HPP

#include <geoflow/momentum_poly.hpp>

namespace geoflow {

// Geodesic-flow Hamiltonian (1/2) g^{ij} p_i p_j; memoized per chart together
// with its coordinate and momentum partials.
const MomentumPolynomial& hamiltonian(const ChartPtr& chart);
const MomentumPolynomial& hamiltonianCoordPartial(const ChartPtr& chart, std::size_t i);
const MomentumPolynomial& hamiltonianMomentumPartial(const ChartPtr& chart, std::size_t i);

// Canonical bracket, sign convention {f,g} = sum_i df/dp_i dg/dx^i - df/dx^i dg/dp_i,
// so {H, f} is the derivative of f along the flow.
MomentumPolynomial poissonBracket(const MomentumPolynomial& f, const MomentumPolynomial& g);

// {H, f} with the cached Hamiltonian partials.
MomentumPolynomial applyH(const MomentumPolynomial& f);

// k-fold nested bracket with the Hamiltonian.
MomentumPolynomial iterateH(const MomentumPolynomial& f, int k);

bool isIntegral(const MomentumPolynomial& f);

// Smallest k <= kMax with H^k f = 0, or nullopt. Zero input reports 1.
std::optional<int> ladderDegree(const MomentumPolynomial& f, int kMax);

struct LadderElement {
    MomentumPolynomial f;
    int k = 1;      // smallest positive k with H^k f = 0
    int degree = 0; // momentum degree

    static LadderElement certify(MomentumPolynomial f, int kMax = 16);
};

} // namespace geoflow

#endif
