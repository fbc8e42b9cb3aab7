#ifndef GEOFLOW_RATIONAL_FUNCTION_HPP
#define GEOFLOW_RATIONAL_FUNCTION_HPP

#include <geoflow/multipoly.hpp>

namespace geoflow {

class MathDomainError : public std::runtime_error {
public:
    explicit MathDomainError(const std::string& what) : std::runtime_error(what) {}
};

class PoleError : public MathDomainError {
public:
    explicit PoleError(const std::string& what) : MathDomainError(what) {}
};

/*
 * Quotient of multivariate polynomials in canonical form:
 *   - gcd(num, den) is a unit,
 *   - den has integer coprime coefficients and positive leading coefficient
 *     (graded lex), absorbing all rational scale into num.
 * The form is unique, so operator== is mathematical equality. Polynomials
 * have den == 1.
 */
class RationalFunction {
public:
    RationalFunction() = default;
    RationalFunction(MultiPoly num, MultiPoly den);
    explicit RationalFunction(MultiPoly num);

    static RationalFunction zero(VarListPtr vars);
    static RationalFunction constant(VarListPtr vars, const Rational& c);
    static RationalFunction variable(VarListPtr vars, const std::string& name);

    const MultiPoly& num() const { return num_; }
    const MultiPoly& den() const { return den_; }
    const VarList& vars() const { return num_.vars(); }
    const VarListPtr& varsPtr() const { return num_.varsPtr(); }

    bool isZero() const { return num_.isZero(); }
    bool isPolynomial() const { return den_.isConstant(); }
    bool isConstant() const { return num_.isConstant() && den_.isConstant(); }
    Rational constantValue() const;

    RationalFunction operator-() const;
    RationalFunction operator+(const RationalFunction& o) const;
    RationalFunction operator-(const RationalFunction& o) const;
    RationalFunction operator*(const RationalFunction& o) const;
    RationalFunction operator/(const RationalFunction& o) const;
    RationalFunction& operator+=(const RationalFunction& o);

    bool operator==(const RationalFunction& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RationalFunction& o) const { return !(*this == o); }

    RationalFunction scaled(const Rational& c) const;
    RationalFunction pow(int k) const; // negative k inverts
    RationalFunction partial(std::size_t varIndex) const;

    RationalFunction extendedTo(const VarListPtr& wider) const;
    RationalFunction renamedTo(const VarListPtr& target) const;

    // Numeric evaluation with a pole guard on the denominator.
    double evalDouble(const std::vector<double>& point, double poleEps = 1e-12) const;
    // Exact evaluation at a rational point; throws PoleError on a zero denominator.
    Rational evalRational(const std::vector<Rational>& point) const;

    std::string toString() const;

private:
    void normalize();

    MultiPoly num_;
    MultiPoly den_ = MultiPoly::constant(num_.varsPtr(), Rational(1));
};

inline RationalFunction rfNormalize(MultiPoly num, MultiPoly den) {
    return RationalFunction(std::move(num), std::move(den));
}

} // namespace geoflow

#endif
