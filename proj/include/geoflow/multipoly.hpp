#ifndef GEOFLOW_MULTIPOLY_HPP
#define GEOFLOW_MULTIPOLY_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <geoflow/rational.hpp>

namespace geoflow {

using VarList = std::vector<std::string>;
using VarListPtr = std::shared_ptr<const VarList>;

// Exponent vector, one entry per variable of the owning polynomial.
using Exponents = std::vector<unsigned>;

inline unsigned totalDegree(const Exponents& e) {
    unsigned d = 0;
    for (unsigned k : e) d += k;
    return d;
}

// Graded lexicographic order: compare total degree first, then the exponent
// vectors lexicographically (earlier variables weigh more). The term maps are
// kept in ascending order, so rbegin() is the leading term.
struct GradedLexLess {
    bool operator()(const Exponents& a, const Exponents& b) const {
        unsigned da = totalDegree(a), db = totalDegree(b);
        if (da != db) return da < db;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

class MismatchedVariablesError : public std::runtime_error {
public:
    explicit MismatchedVariablesError(const std::string& what) : std::runtime_error(what) {}
};

/*
 * Multivariate polynomial over the rationals in canonical form: a fixed,
 * ordered variable list and a term map with no zero coefficients. All
 * operations require both operands to carry the same variable list; use
 * extendedTo() to align first.
 */
class MultiPoly {
public:
    using TermMap = std::map<Exponents, Rational, GradedLexLess>;

    MultiPoly() : vars_(emptyVars()) {}
    explicit MultiPoly(VarListPtr vars) : vars_(std::move(vars)) {}

    static MultiPoly zero(VarListPtr vars) { return MultiPoly(std::move(vars)); }
    static MultiPoly constant(VarListPtr vars, const Rational& c);
    static MultiPoly variable(VarListPtr vars, const std::string& name);
    static MultiPoly monomial(VarListPtr vars, Exponents e, const Rational& c);

    const VarList& vars() const { return *vars_; }
    const VarListPtr& varsPtr() const { return vars_; }
    const TermMap& terms() const { return terms_; }

    bool isZero() const { return terms_.empty(); }
    bool isConstant() const;
    // Constant term (zero if absent).
    Rational constantValue() const;

    int totalDegree() const; // -1 for the zero polynomial
    int degreeIn(std::size_t varIndex) const;

    const Rational& leadingCoeff() const; // requires nonzero
    const Exponents& leadingExponents() const;

    void addTerm(const Exponents& e, const Rational& c);

    MultiPoly operator-() const;
    MultiPoly operator+(const MultiPoly& o) const;
    MultiPoly operator-(const MultiPoly& o) const;
    MultiPoly operator*(const MultiPoly& o) const;
    MultiPoly& operator+=(const MultiPoly& o);
    MultiPoly& operator-=(const MultiPoly& o);

    bool operator==(const MultiPoly& o) const;
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }

    MultiPoly scaled(const Rational& c) const;
    MultiPoly pow(unsigned k) const;
    MultiPoly partial(std::size_t varIndex) const;
    MultiPoly partial(const std::string& varName) const;

    // Same polynomial over a variable list that contains vars() as a subset.
    MultiPoly extendedTo(const VarListPtr& wider) const;
    // Rename variables positionally onto another list of equal size.
    MultiPoly renamedTo(const VarListPtr& target) const;

    double evalDouble(const std::vector<double>& point) const;
    Rational evalRational(const std::vector<Rational>& point) const;

    // Content: positive rational c such that *this / c has coprime integer
    // coefficients. Zero polynomial has content 0.
    Rational content() const;
    // this / content(), with sign chosen so the leading coefficient is positive.
    MultiPoly primitivePart() const;
    bool hasIntegerCoeffs() const;

    std::size_t varIndex(const std::string& name) const;
    std::string toString() const;

private:
    static const VarListPtr& emptyVars();
    void requireSameVars(const MultiPoly& o) const;

    VarListPtr vars_;
    TermMap terms_;
};

// gcd of primitive parts, returned primitive with positive leading
// coefficient (subresultant polynomial remainder sequences). gcd(0,0) = 0.
MultiPoly polyGcd(const MultiPoly& a, const MultiPoly& b);
MultiPoly polyLcm(const MultiPoly& a, const MultiPoly& b);

// Exact division; throws std::logic_error when the division leaves a remainder.
MultiPoly divExact(const MultiPoly& a, const MultiPoly& b);

inline MultiPoly polyAdd(const MultiPoly& a, const MultiPoly& b) { return a + b; }
inline MultiPoly polySub(const MultiPoly& a, const MultiPoly& b) { return a - b; }
inline MultiPoly polyMul(const MultiPoly& a, const MultiPoly& b) { return a * b; }

VarListPtr makeVars(std::vector<std::string> names);

} // namespace geoflow

#endif
