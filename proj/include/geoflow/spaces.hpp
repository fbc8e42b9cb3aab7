#ifndef GEOFLOW_SPACES_HPP
#define GEOFLOW_SPACES_HPP

#include <geoflow/flow.hpp>

namespace geoflow {

class AnsatzIncompleteError : public std::runtime_error {
public:
    explicit AnsatzIncompleteError(const std::string& what) : std::runtime_error(what) {}
};

/*
 * Coefficient family for the linear solves: numerators over a fixed
 * denominator, deg(numerator) <= coeffDegree + deg(denominator), so plain
 * polynomials of degree <= coeffDegree always belong. coeffVars optionally
 * restricts which coordinates may appear in the numerators.
 */
struct AnsatzSpec {
    int momentumDegree = 1;
    int coeffDegree = 2;
    MultiPoly denominator; // defaults to 1 on the chart via make()
    std::optional<std::vector<std::string>> coeffVars;

    static AnsatzSpec make(const ChartPtr& chart, int momentumDegree, int coeffDegree);
    static AnsatzSpec make(const ChartPtr& chart, int momentumDegree, int coeffDegree,
                           MultiPoly denominator);
    AnsatzSpec withMomentumDegree(int d) const;
};

// Basis of a ladder space {f homogeneous of degree d : H^k f = 0} relative to
// an ansatz. Vectors are normalized: first nonzero coordinate 1 in the fixed
// ansatz monomial order.
struct LadderBasis {
    ChartPtr chart;
    int d = 0;
    int k = 1;
    std::vector<MomentumPolynomial> basis;

    std::size_t dimension() const { return basis.size(); }
};

// All momentum monomials of the given total degree over n momenta, leading
// monomials first (descending graded lex).
std::vector<Exponents> momentumMonomials(std::size_t n, int degree);

// The ansatz family members, in the fixed deterministic column order.
std::vector<MomentumPolynomial> ansatzElements(const ChartPtr& chart, const AnsatzSpec& spec);

// Exact basis of {f in the ansatz : H f = 0} (k = 1).
LadderBasis solveKilling(const ChartPtr& chart, const AnsatzSpec& spec);
// Exact basis of {f in the ansatz : H^k f = 0, f homogeneous of degree d}.
LadderBasis solveLadder(const ChartPtr& chart, int d, int k, const AnsatzSpec& spec);

// ---- linearization over a common denominator -------------------------------
// Shared by the solvers, the span arithmetic and the decomposition pipeline:
// momentum polynomials are flattened to exact sparse vectors over keys
// (momentum exponents, cleared-numerator coordinate exponents).

class PolyLinearizer {
public:
    explicit PolyLinearizer(ChartPtr chart);

    // Registers polys first (the common denominator grows as needed), then
    // call row() for each.
    void collect(const MomentumPolynomial& f);
    SparseRatRow row(const MomentumPolynomial& f);

    int keyCount() const { return nextKey_; }

private:
    ChartPtr chart_;
    MultiPoly commonDen_;
    std::map<std::pair<Exponents, Exponents>, int> keys_;
    int nextKey_ = 0;
};

// Coefficients of target over the basis, or nullopt when target lies outside
// the span. Exact.
std::optional<std::vector<Rational>> expandOverBasis(
    const MomentumPolynomial& target, const std::vector<MomentumPolynomial>& basis);

// Appends those candidates that are independent of the current span; returns
// the number appended.
int extendSpan(std::vector<MomentumPolynomial>& span,
               const std::vector<MomentumPolynomial>& candidates);

bool sameSpan(const std::vector<MomentumPolynomial>& a,
              const std::vector<MomentumPolynomial>& b);

} // namespace geoflow

#endif
