#ifndef GEOFLOW_EXPRESSION_HPP
#define GEOFLOW_EXPRESSION_HPP

#include <memory>

#include <geoflow/rational_function.hpp>

namespace geoflow {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/*
 * Expression grammar:
 *   expr   := term (('+'|'-') term)*
 *   term   := factor (('*'|'/') factor)*
 *   factor := base ('^' UINT)?
 *   base   := NUMBER | IDENT | '(' expr ')' | '-' base
 * NUMBER is a decimal integer; rationals are written with '/'. Whitespace is
 * insignificant. Exponents must be non-negative integers.
 */
struct ExpressionAst {
    enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg };

    Kind kind;
    Rational value;         // Constant
    std::string name;       // Variable
    unsigned exponent = 0;  // Pow
    std::shared_ptr<const ExpressionAst> lhs, rhs; // rhs unused for Pow/Neg

    bool operator==(const ExpressionAst& o) const;
};

using ExprPtr = std::shared_ptr<const ExpressionAst>;

// Parses text over the allowed variables; unknown identifiers are rejected.
ExprPtr parseExpression(const std::string& text, const VarList& allowedVars);

// Minimal-parenthesis printing; parseExpression(printExpression(e)) == e.
std::string printExpression(const ExprPtr& e);

RationalFunction evalExpression(const ExprPtr& e, const VarListPtr& vars);

// parse + eval in one step.
RationalFunction parseRationalFunction(const std::string& text, const VarListPtr& vars);

} // namespace geoflow

#endif
