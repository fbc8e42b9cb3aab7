#include <geoflow/expression.hpp>

#include <algorithm>
#include <cctype>
#include <sstream>

namespace geoflow {

bool ExpressionAst::operator==(const ExpressionAst& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case Kind::Constant: return value == o.value;
        case Kind::Variable: return name == o.name;
        case Kind::Pow: return exponent == o.exponent && *lhs == *o.lhs;
        case Kind::Neg: return *lhs == *o.lhs;
        default: return *lhs == *o.lhs && *rhs == *o.rhs;
    }
}

namespace {

struct Token {
    enum class Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Kind kind;
    std::string text;
    std::size_t pos;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) {}

    Token next() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        std::size_t start = i_;
        if (i_ >= s_.size()) return {Token::Kind::End, "", start};
        char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            return {Token::Kind::Number, s_.substr(start, i_ - start), start};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
                ++i_;
            return {Token::Kind::Ident, s_.substr(start, i_ - start), start};
        }
        ++i_;
        switch (c) {
            case '+': return {Token::Kind::Plus, "+", start};
            case '-': return {Token::Kind::Minus, "-", start};
            case '*': return {Token::Kind::Star, "*", start};
            case '/': return {Token::Kind::Slash, "/", start};
            case '^': return {Token::Kind::Caret, "^", start};
            case '(': return {Token::Kind::LParen, "(", start};
            case ')': return {Token::Kind::RParen, ")", start};
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;
};

class Parser {
public:
    Parser(const std::string& text, const VarList& vars)
        : lex_(text), vars_(vars) { advance(); }

    ExprPtr parse() {
        ExprPtr e = expr();
        if (tok_.kind != Token::Kind::End)
            throw ParseError("trailing input '" + tok_.text + "'", tok_.pos);
        return e;
    }

private:
    void advance() { tok_ = lex_.next(); }

    static ExprPtr node(ExpressionAst n) {
        return std::make_shared<const ExpressionAst>(std::move(n));
    }

    ExprPtr expr() {
        ExprPtr e = term();
        while (tok_.kind == Token::Kind::Plus || tok_.kind == Token::Kind::Minus) {
            bool add = tok_.kind == Token::Kind::Plus;
            advance();
            ExprPtr r = term();
            ExpressionAst n;
            n.kind = add ? ExpressionAst::Kind::Add : ExpressionAst::Kind::Sub;
            n.lhs = e;
            n.rhs = r;
            e = node(std::move(n));
        }
        return e;
    }

    ExprPtr term() {
        ExprPtr e = factor();
        while (tok_.kind == Token::Kind::Star || tok_.kind == Token::Kind::Slash) {
            bool mul = tok_.kind == Token::Kind::Star;
            advance();
            ExprPtr r = factor();
            ExpressionAst n;
            n.kind = mul ? ExpressionAst::Kind::Mul : ExpressionAst::Kind::Div;
            n.lhs = e;
            n.rhs = r;
            e = node(std::move(n));
        }
        return e;
    }

    ExprPtr factor() {
        ExprPtr b = base();
        if (tok_.kind == Token::Kind::Caret) {
            std::size_t caretPos = tok_.pos;
            advance();
            if (tok_.kind == Token::Kind::Minus)
                throw ParseError("negative exponent", tok_.pos);
            if (tok_.kind != Token::Kind::Number)
                throw ParseError("exponent must be a non-negative integer", caretPos);
            unsigned long v = 0;
            try {
                v = std::stoul(tok_.text);
            } catch (const std::exception&) {
                throw ParseError("exponent out of range", tok_.pos);
            }
            advance();
            ExpressionAst n;
            n.kind = ExpressionAst::Kind::Pow;
            n.exponent = static_cast<unsigned>(v);
            n.lhs = b;
            return node(std::move(n));
        }
        return b;
    }

    ExprPtr base() {
        switch (tok_.kind) {
            case Token::Kind::Number: {
                ExpressionAst n;
                n.kind = ExpressionAst::Kind::Constant;
                n.value = Rational(Integer(tok_.text));
                advance();
                return node(std::move(n));
            }
            case Token::Kind::Ident: {
                if (std::find(vars_.begin(), vars_.end(), tok_.text) == vars_.end())
                    throw ParseError("unknown identifier '" + tok_.text + "'", tok_.pos);
                ExpressionAst n;
                n.kind = ExpressionAst::Kind::Variable;
                n.name = tok_.text;
                advance();
                return node(std::move(n));
            }
            case Token::Kind::LParen: {
                advance();
                ExprPtr e = expr();
                if (tok_.kind != Token::Kind::RParen)
                    throw ParseError("expected ')'", tok_.pos);
                advance();
                return e;
            }
            case Token::Kind::Minus: {
                advance();
                ExprPtr b = base();
                ExpressionAst n;
                n.kind = ExpressionAst::Kind::Neg;
                n.lhs = b;
                return node(std::move(n));
            }
            default:
                throw ParseError("expected a number, identifier, '(' or '-'", tok_.pos);
        }
    }

    Lexer lex_;
    const VarList& vars_;
    Token tok_{Token::Kind::End, "", 0};
};

// Precedence levels for printing: 0 add, 1 mul, 2 unary, 3 pow/atom.
int level(const ExpressionAst& e) {
    switch (e.kind) {
        case ExpressionAst::Kind::Add:
        case ExpressionAst::Kind::Sub: return 0;
        case ExpressionAst::Kind::Mul:
        case ExpressionAst::Kind::Div: return 1;
        case ExpressionAst::Kind::Neg: return 2;
        case ExpressionAst::Kind::Pow: return 3;
        default: return 4;
    }
}

void print(const ExpressionAst& e, std::ostream& out, int parentLevel) {
    int mine = level(e);
    bool parens = mine < parentLevel;
    if (parens) out << "(";
    switch (e.kind) {
        case ExpressionAst::Kind::Constant:
            if (e.value < 0) {
                out << "-" << Rational(-e.value).str();
            } else {
                out << e.value.str();
            }
            break;
        case ExpressionAst::Kind::Variable:
            out << e.name;
            break;
        case ExpressionAst::Kind::Add:
            print(*e.lhs, out, 0);
            out << " + ";
            print(*e.rhs, out, 1);
            break;
        case ExpressionAst::Kind::Sub:
            print(*e.lhs, out, 0);
            out << " - ";
            print(*e.rhs, out, 1);
            break;
        case ExpressionAst::Kind::Mul:
            print(*e.lhs, out, 1);
            out << "*";
            print(*e.rhs, out, 2);
            break;
        case ExpressionAst::Kind::Div:
            print(*e.lhs, out, 1);
            out << "/";
            print(*e.rhs, out, 2);
            break;
        case ExpressionAst::Kind::Neg:
            out << "-";
            print(*e.lhs, out, 2);
            break;
        case ExpressionAst::Kind::Pow:
            print(*e.lhs, out, 4);
            out << "^" << e.exponent;
            break;
    }
    if (parens) out << ")";
}

} // namespace

ExprPtr parseExpression(const std::string& text, const VarList& allowedVars) {
    return Parser(text, allowedVars).parse();
}

std::string printExpression(const ExprPtr& e) {
    std::ostringstream out;
    print(*e, out, 0);
    return out.str();
}

RationalFunction evalExpression(const ExprPtr& e, const VarListPtr& vars) {
    switch (e->kind) {
        case ExpressionAst::Kind::Constant:
            return RationalFunction::constant(vars, e->value);
        case ExpressionAst::Kind::Variable:
            return RationalFunction::variable(vars, e->name);
        case ExpressionAst::Kind::Add:
            return evalExpression(e->lhs, vars) + evalExpression(e->rhs, vars);
        case ExpressionAst::Kind::Sub:
            return evalExpression(e->lhs, vars) - evalExpression(e->rhs, vars);
        case ExpressionAst::Kind::Mul:
            return evalExpression(e->lhs, vars) * evalExpression(e->rhs, vars);
        case ExpressionAst::Kind::Div: {
            RationalFunction d = evalExpression(e->rhs, vars);
            if (d.isZero()) throw MathDomainError("division by zero in expression");
            return evalExpression(e->lhs, vars) / d;
        }
        case ExpressionAst::Kind::Neg:
            return -evalExpression(e->lhs, vars);
        case ExpressionAst::Kind::Pow:
            return evalExpression(e->lhs, vars).pow(static_cast<int>(e->exponent));
    }
    throw std::logic_error("unreachable expression kind");
}

RationalFunction parseRationalFunction(const std::string& text, const VarListPtr& vars) {
    return evalExpression(parseExpression(text, *vars), vars);
}

} // namespace geoflow
