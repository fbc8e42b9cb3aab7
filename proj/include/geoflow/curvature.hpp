#ifndef GEOFLOW_CURVATURE_HPP
#define GEOFLOW_CURVATURE_HPP

#include <geoflow/geometry.hpp>

namespace geoflow {

/*
 * Fully lowered curvature tensor evaluated exactly at a rational point:
 * R(a,b,c,d) = g_{ae} R^e_{bcd}, with R(X,Y)Z the curvature operator of the
 * Levi-Civita connection. The sectional numerator is R(X,Y,X,Y).
 */
class RiemannAtPoint {
public:
    RiemannAtPoint(const ChartPtr& chart, std::vector<Rational> point);

    int dim() const { return n_; }
    const Rational& get(int a, int b, int c, int d) const;
    // Numerator of the sectional curvature of span(X, Y).
    Rational sectionalNumerator(const std::vector<Rational>& x,
                                const std::vector<Rational>& y) const;
    // Q(X)_{bd} = R(a,b,c,d) X^a X^c; X is degenerate iff Q(X) = 0.
    RatMatrix directionForm(const std::vector<Rational>& x) const;

    // True when every nonzero component is carried by a coordinate 2-plane
    // ({a,b} = {c,d} as sets).
    bool planeDiagonal() const;
    // Plane component R(i,j,i,j).
    const Rational& plane(int i, int j) const;

private:
    std::size_t flat(int a, int b, int c, int d) const;

    int n_;
    std::vector<Rational> comps_;
};

struct DegeneracyCone {
    std::vector<int> support;       // coordinates allowed nonzero
    std::vector<Rational> squares;  // X_i^2 for i in support (positive)
};

/*
 * The set of directions X with R(X,Y,X,Y) = 0 for every Y. For
 * plane-diagonal curvature the analysis is exact: coordinate subspaces that
 * are entirely degenerate plus cone samples from support patterns. Otherwise
 * only the curvature nullity (a guaranteed subset) is reported and
 * `complete` is false.
 */
struct CurvatureDegeneracy {
    bool complete = true;
    bool diagonalStructure = true;
    std::vector<std::vector<int>> subspaceSupports;
    std::vector<DegeneracyCone> cones;
    std::vector<std::vector<Rational>> nullityBasis; // fallback description

    bool empty() const {
        return subspaceSupports.empty() && cones.empty() && nullityBasis.empty();
    }
    bool fullSpace(int n) const {
        for (const auto& s : subspaceSupports)
            if (static_cast<int>(s.size()) == n) return true;
        return false;
    }
    std::string toString(const VarList& coords) const;
};

// Requires dim >= 2 and the metric nondegenerate at the point; throws
// PoleError when the point sits on a pole of any metric component and
// MathDomainError when the metric degenerates there.
CurvatureDegeneracy sectionalCurvatureDegeneracy(const ChartPtr& chart,
                                                 const std::vector<Rational>& point);

// Strict-positivity feasibility of {t > 0 : A t = 0} by exact
// Fourier-Motzkin elimination; returns a positive sample when feasible.
std::optional<std::vector<Rational>> positiveKernelSample(const RatMatrix& a);

} // namespace geoflow

#endif
