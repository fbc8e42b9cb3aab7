#ifndef GEOFLOW_PRODUCT_HPP
#define GEOFLOW_PRODUCT_HPP

#include <geoflow/spaces.hpp>

namespace geoflow {

/*
 * Block product of two charts. Joint coordinates are factor1's followed by
 * factor2's; the joint Hamiltonian is exactly the sum of the factor
 * Hamiltonians lifted to the joint chart.
 */
struct ProductMetric {
    ChartPtr factor1;
    ChartPtr factor2;
    ChartPtr joint;

    std::size_t dim1() const { return factor1->dim(); }
    std::size_t dim2() const { return factor2->dim(); }

    MomentumPolynomial lift1(const MomentumPolynomial& f) const { return f.liftedTo(joint); }
    MomentumPolynomial lift2(const MomentumPolynomial& f) const { return f.liftedTo(joint); }

    // Factor Hamiltonians lifted to the joint chart.
    MomentumPolynomial h1() const { return hamiltonian(factor1).liftedTo(joint); }
    MomentumPolynomial h2() const { return hamiltonian(factor2).liftedTo(joint); }
};

// Throws on coordinate-name collision unless autoRename is set, in which case
// colliding names get _1/_2 suffixes.
ProductMetric productMetric(const ChartPtr& m1, const ChartPtr& m2, bool autoRename = false);

// p-degree of a joint momentum exponent vector (factor-1 block).
int factor1Degree(const ProductMetric& pm, const Exponents& e);

/*
 * Split of a homogeneous degree-d polynomial by the factor-1 momentum degree:
 * parts[l] collects the terms with deg_p = l (hence deg_q = d - l).
 */
struct BiHomogeneousSplit {
    int degree = 0;
    std::vector<MomentumPolynomial> parts; // size degree + 1

    MomentumPolynomial sum() const;
};

BiHomogeneousSplit bihomogeneousSplit(const MomentumPolynomial& f, const ProductMetric& pm);

// Chain system: {H2,S_0} = 0, {H1,S_l} + {H2,S_{l+1}} = 0, {H1,S_d} = 0.
// Equation index l (0..d+1) is the bidegree level: {H1,S_{l-1}} + {H2,S_l}.
struct ChainCheckResult {
    bool ok = true;
    int failingEquation = -1;
    MomentumPolynomial residual;

    explicit ChainCheckResult(MomentumPolynomial r) : residual(std::move(r)) {}
};

ChainCheckResult chainCheck(const BiHomogeneousSplit& split, const ProductMetric& pm);

// The ladder composition sum_{l=0}^{k-1} (-1)^l (H1^l f1)(H2^{k-1-l} f2); an
// exact integral of the product, homogeneous of degree deg f1 + deg f2 + k - 1.
// Requires H^k f_i = 0 on the factors.
MomentumPolynomial composeIntegral(const ProductMetric& pm, const LadderElement& f1,
                                   const LadderElement& f2, int k);

/*
 * Graded family of one factor: grades[j] spans a subspace of the degree-j
 * polynomials with H^{d-j+1} f = 0, built from the ansatz solver bases and
 * closed under H so the recorded action is exact. action[j] is the matrix of
 * H from grade j into grade j+1.
 */
struct GradedFamily {
    ChartPtr chart;
    int degree = 0;
    std::vector<std::vector<MomentumPolynomial>> grades;
    std::vector<RatMatrix> action;

    std::size_t dimension() const;
    GradedFamily renamedTo(const ChartPtr& target) const;
};

GradedFamily buildGradedFamily(const ChartPtr& chart, int d, const AnsatzSpec& spec);

// Cyclic ladder (f, Hf, ..., H^{m-1}f) with a grade-homogeneous generator.
struct JordanLadder {
    int grade = 0; // momentum degree of the generator
    std::vector<MomentumPolynomial> chain;
    std::vector<RatVector> coords; // coordinates in the family basis

    std::size_t length() const { return chain.size(); }
};

// Direct-sum decomposition of the family into cyclic ladders of the nilpotent
// H-action. Generators are picked greedily by maximal ladder length, ties
// broken by the deterministic basis order.
std::vector<JordanLadder> jordanLadders(const GradedFamily& family);

struct LadderTerm {
    LadderElement f1;
    LadderElement f2;
    int k = 1;
    Rational coefficient;

    MomentumPolynomial expand(const ProductMetric& pm) const;
};

enum class Reducibility { Reducible, IrreducibleWitnessed };

struct ReducibleForm {
    std::vector<LadderTerm> terms;
    MomentumPolynomial residual;
    Reducibility classification = Reducibility::Reducible;

    // Context for reducibility_classify.
    std::shared_ptr<const ProductMetric> pm;
    MomentumPolynomial input;
    std::vector<MomentumPolynomial> killing1; // H-kernels of the factor families
    std::vector<MomentumPolynomial> killing2;

    MomentumPolynomial expandTerms() const;
};

// Decomposition of an exact integral of the product into ladder terms via the
// bi-homogeneous split, membership certification, Jordan ladders on the factor
// families and kernel extraction per tensor block. Throws
// AnsatzIncompleteError naming the failing part when the ansatz cannot span a
// component, MathDomainError when f is not an integral.
ReducibleForm decomposeIntegral(const MomentumPolynomial& f, const ProductMetric& pm,
                                const AnsatzSpec& spec1, const AnsatzSpec& spec2);

struct ClassificationResult {
    Reducibility verdict = Reducibility::Reducible;
    // For the irreducible case: a nonzero bidegree component of {H1, F}.
    std::optional<MomentumPolynomial> witness;
};

// Reducible iff an all-k=1 representation exists within the computed tensor
// space (exact feasibility solve); otherwise returns the bracket witness.
ClassificationResult reducibilityClassify(const ReducibleForm& rf);

} // namespace geoflow

#endif
