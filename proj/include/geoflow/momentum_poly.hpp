#ifndef GEOFLOW_MOMENTUM_POLY_HPP
#define GEOFLOW_MOMENTUM_POLY_HPP

#include <geoflow/geometry.hpp>

namespace geoflow {

class ChartMismatchError : public MathDomainError {
public:
    explicit ChartMismatchError(const std::string& what) : MathDomainError(what) {}
};

/*
 * Polynomial in the momenta with rational-function coefficients in the chart
 * coordinates. Term keys are momentum exponent vectors in graded lex order.
 */
class MomentumPolynomial {
public:
    using TermMap = std::map<Exponents, RationalFunction, GradedLexLess>;

    // Empty state (no chart); assign before use.
    MomentumPolynomial() = default;
    explicit MomentumPolynomial(ChartPtr chart) : chart_(std::move(chart)) {}

    static MomentumPolynomial zero(ChartPtr chart) { return MomentumPolynomial(std::move(chart)); }
    static MomentumPolynomial momentum(const ChartPtr& chart, std::size_t i);
    static MomentumPolynomial coefficient(const ChartPtr& chart, RationalFunction c);

    const ChartPtr& chart() const { return chart_; }
    const TermMap& terms() const { return terms_; }
    bool isZero() const { return terms_.empty(); }

    void addTerm(const Exponents& momExp, const RationalFunction& coeff);
    RationalFunction coeff(const Exponents& momExp) const;

    MomentumPolynomial operator-() const;
    MomentumPolynomial operator+(const MomentumPolynomial& o) const;
    MomentumPolynomial operator-(const MomentumPolynomial& o) const;
    MomentumPolynomial operator*(const MomentumPolynomial& o) const;
    MomentumPolynomial& operator+=(const MomentumPolynomial& o);
    bool operator==(const MomentumPolynomial& o) const;
    bool operator!=(const MomentumPolynomial& o) const { return !(*this == o); }

    MomentumPolynomial scaled(const Rational& c) const;
    MomentumPolynomial scaled(const RationalFunction& c) const;

    MomentumPolynomial partialCoord(std::size_t i) const;
    MomentumPolynomial partialMomentum(std::size_t i) const;

    int momentumDegree() const; // max over terms, -1 for zero
    // Degree when every term shares it, nullopt otherwise. Zero counts as
    // homogeneous of every degree and reports nullopt with isZero() true.
    std::optional<int> homogeneousDegree() const;
    bool isHomogeneous() const { return isZero() || homogeneousDegree().has_value(); }
    // Terms of the given total momentum degree.
    MomentumPolynomial homogeneousPart(int degree) const;

    // Transport onto a chart whose coordinates contain this chart's (a product
    // chart); momentum exponents are mapped by coordinate name.
    MomentumPolynomial liftedTo(const ChartPtr& target) const;
    // Positional rename onto a chart of the same dimension.
    MomentumPolynomial renamedTo(const ChartPtr& target) const;

    double evalDouble(const std::vector<double>& x, const std::vector<double>& p,
                      double poleEps = 1e-12) const;

    std::string toString() const;

    void requireSameChart(const MomentumPolynomial& o) const;

private:
    ChartPtr chart_;
    TermMap terms_;
};

} // namespace geoflow

#endif
