#include <geoflow/multipoly.hpp>

#include <algorithm>
#include <sstream>

namespace geoflow {

const VarListPtr& MultiPoly::emptyVars() {
    static const VarListPtr empty = std::make_shared<const VarList>();
    return empty;
}

VarListPtr makeVars(std::vector<std::string> names) {
    return std::make_shared<const VarList>(std::move(names));
}

MultiPoly MultiPoly::constant(VarListPtr vars, const Rational& c) {
    MultiPoly p(std::move(vars));
    if (c != 0) p.terms_.emplace(Exponents(p.vars_->size(), 0u), c);
    return p;
}

MultiPoly MultiPoly::variable(VarListPtr vars, const std::string& name) {
    MultiPoly p(std::move(vars));
    Exponents e(p.vars_->size(), 0u);
    e[p.varIndex(name)] = 1u;
    p.terms_.emplace(std::move(e), Rational(1));
    return p;
}

MultiPoly MultiPoly::monomial(VarListPtr vars, Exponents e, const Rational& c) {
    MultiPoly p(std::move(vars));
    if (e.size() != p.vars_->size())
        throw MismatchedVariablesError("monomial exponent length does not match variable list");
    if (c != 0) p.terms_.emplace(std::move(e), c);
    return p;
}

std::size_t MultiPoly::varIndex(const std::string& name) const {
    for (std::size_t i = 0; i < vars_->size(); ++i)
        if ((*vars_)[i] == name) return i;
    throw MismatchedVariablesError("unknown variable '" + name + "'");
}

bool MultiPoly::isConstant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && geoflow::totalDegree(terms_.begin()->first) == 0;
}

Rational MultiPoly::constantValue() const {
    Exponents zero(vars_->size(), 0u);
    auto it = terms_.find(zero);
    return it == terms_.end() ? Rational(0) : it->second;
}

int MultiPoly::totalDegree() const {
    if (terms_.empty()) return -1;
    return static_cast<int>(geoflow::totalDegree(terms_.rbegin()->first));
}

int MultiPoly::degreeIn(std::size_t varIndex) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[varIndex]));
    return terms_.empty() ? -1 : d;
}

const Rational& MultiPoly::leadingCoeff() const {
    if (terms_.empty()) throw std::logic_error("leadingCoeff of zero polynomial");
    return terms_.rbegin()->second;
}

const Exponents& MultiPoly::leadingExponents() const {
    if (terms_.empty()) throw std::logic_error("leadingExponents of zero polynomial");
    return terms_.rbegin()->first;
}

void MultiPoly::addTerm(const Exponents& e, const Rational& c) {
    if (c == 0) return;
    if (e.size() != vars_->size())
        throw MismatchedVariablesError("exponent length does not match variable list");
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

void MultiPoly::requireSameVars(const MultiPoly& o) const {
    if (vars_ == o.vars_) return;
    if (*vars_ != *o.vars_)
        throw MismatchedVariablesError("operands carry different variable lists");
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r(vars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
    MultiPoly r(*this);
    r += o;
    return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
    MultiPoly r(*this);
    r -= o;
    return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
    requireSameVars(o);
    for (const auto& [e, c] : o.terms_) addTerm(e, c);
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
    requireSameVars(o);
    for (const auto& [e, c] : o.terms_) addTerm(e, -c);
    return *this;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
    requireSameVars(o);
    MultiPoly r(vars_);
    const std::size_t n = vars_->size();
    Exponents e(n, 0u);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
            r.addTerm(e, ca * cb);
        }
    }
    return r;
}

bool MultiPoly::operator==(const MultiPoly& o) const {
    if (vars_ != o.vars_ && *vars_ != *o.vars_) return false;
    return terms_ == o.terms_;
}

MultiPoly MultiPoly::scaled(const Rational& c) const {
    MultiPoly r(vars_);
    if (c == 0) return r;
    for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
    return r;
}

MultiPoly MultiPoly::pow(unsigned k) const {
    MultiPoly r = MultiPoly::constant(vars_, Rational(1));
    MultiPoly b(*this);
    while (k) {
        if (k & 1u) r = r * b;
        k >>= 1u;
        if (k) b = b * b;
    }
    return r;
}

MultiPoly MultiPoly::partial(std::size_t varIndex) const {
    MultiPoly r(vars_);
    for (const auto& [e, c] : terms_) {
        if (e[varIndex] == 0) continue;
        Exponents d(e);
        d[varIndex] -= 1;
        r.addTerm(d, c * Rational(e[varIndex]));
    }
    return r;
}

MultiPoly MultiPoly::partial(const std::string& varName) const {
    return partial(varIndex(varName));
}

MultiPoly MultiPoly::extendedTo(const VarListPtr& wider) const {
    std::vector<std::size_t> pos(vars_->size());
    for (std::size_t i = 0; i < vars_->size(); ++i) {
        auto it = std::find(wider->begin(), wider->end(), (*vars_)[i]);
        if (it == wider->end())
            throw MismatchedVariablesError("target variable list misses '" + (*vars_)[i] + "'");
        pos[i] = static_cast<std::size_t>(it - wider->begin());
    }
    MultiPoly r(wider);
    for (const auto& [e, c] : terms_) {
        Exponents w(wider->size(), 0u);
        for (std::size_t i = 0; i < e.size(); ++i) w[pos[i]] = e[i];
        r.terms_.emplace(std::move(w), c);
    }
    return r;
}

MultiPoly MultiPoly::renamedTo(const VarListPtr& target) const {
    if (target->size() != vars_->size())
        throw MismatchedVariablesError("renaming requires variable lists of equal length");
    MultiPoly r(target);
    r.terms_ = terms_;
    return r;
}

double MultiPoly::evalDouble(const std::vector<double>& point) const {
    if (point.size() != vars_->size())
        throw MismatchedVariablesError("evaluation point has wrong dimension");
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
        double t = toDouble(c);
        for (std::size_t i = 0; i < e.size(); ++i)
            for (unsigned k = 0; k < e[i]; ++k) t *= point[i];
        acc += t;
    }
    return acc;
}

Rational MultiPoly::evalRational(const std::vector<Rational>& point) const {
    if (point.size() != vars_->size())
        throw MismatchedVariablesError("evaluation point has wrong dimension");
    Rational acc(0);
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i]) t *= ratPow(point[i], e[i]);
        acc += t;
    }
    return acc;
}

Rational MultiPoly::content() const {
    if (terms_.empty()) return Rational(0);
    Integer num(0), den(1);
    for (const auto& [e, c] : terms_) {
        num = intGcd(num, numerator(c));
        den = intLcm(den, denominator(c));
    }
    return Rational(num, den);
}

MultiPoly MultiPoly::primitivePart() const {
    if (terms_.empty()) return *this;
    Rational c = content();
    if (leadingCoeff() < 0) c = -c;
    MultiPoly r(vars_);
    for (const auto& [e, k] : terms_) r.terms_.emplace(e, k / c);
    return r;
}

bool MultiPoly::hasIntegerCoeffs() const {
    for (const auto& [e, c] : terms_)
        if (denominator(c) != 1) return false;
    return true;
}

std::string MultiPoly::toString() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        Rational a = c;
        if (first) {
            if (a < 0) { out << "-"; a = -a; }
        } else {
            out << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        bool hasVars = geoflow::totalDegree(e) > 0;
        if (!hasVars || a != 1) {
            out << a.str();
            if (hasVars) out << "*";
        }
        bool firstVar = true;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!firstVar) out << "*";
            firstVar = false;
            out << (*vars_)[i];
            if (e[i] > 1) out << "^" << e[i];
        }
    }
    return out.str();
}

// ---- gcd via subresultant polynomial remainder sequences ------------------

namespace {

// Univariate view in a chosen main variable: coefficients are MultiPolys with
// main-variable exponent zero.
std::vector<MultiPoly> coeffsIn(const MultiPoly& p, std::size_t mv) {
    int dm = p.degreeIn(mv);
    std::vector<MultiPoly> cs(static_cast<std::size_t>(dm + 1), MultiPoly(p.varsPtr()));
    for (const auto& [e, c] : p.terms()) {
        Exponents r(e);
        unsigned k = r[mv];
        r[mv] = 0;
        cs[k].addTerm(r, c);
    }
    return cs;
}

MultiPoly shiftMul(const MultiPoly& p, std::size_t mv, unsigned k) {
    MultiPoly r(p.varsPtr());
    for (const auto& [e, c] : p.terms()) {
        Exponents w(e);
        w[mv] += k;
        r.addTerm(w, c);
    }
    return r;
}

MultiPoly leadCoeffIn(const MultiPoly& p, std::size_t mv) {
    auto cs = coeffsIn(p, mv);
    return cs.back();
}

// Pseudo-remainder of a by b in the main variable mv.
MultiPoly prem(MultiPoly a, const MultiPoly& b, std::size_t mv) {
    const int db = b.degreeIn(mv);
    MultiPoly d = leadCoeffIn(b, mv);
    int e = a.degreeIn(mv) - db + 1;
    while (!a.isZero() && a.degreeIn(mv) >= db) {
        MultiPoly la = leadCoeffIn(a, mv);
        unsigned shift = static_cast<unsigned>(a.degreeIn(mv) - db);
        a = a * d - shiftMul(la * b, mv, shift);
        --e;
    }
    for (; e > 0; --e) a = a * d;
    return a;
}

// Content of p with respect to mv: gcd of the mv-coefficients.
MultiPoly contentIn(const MultiPoly& p, std::size_t mv) {
    auto cs = coeffsIn(p, mv);
    MultiPoly g(p.varsPtr());
    for (const auto& c : cs) {
        if (c.isZero()) continue;
        g = polyGcd(g, c);
        if (g.isConstant() && !g.isZero()) break;
    }
    return g;
}

} // namespace

MultiPoly divExact(const MultiPoly& a, const MultiPoly& b) {
    if (b.isZero()) throw std::logic_error("division by zero polynomial");
    MultiPoly q(a.varsPtr());
    MultiPoly r(a);
    const std::size_t n = a.vars().size();
    const Exponents& lb = b.leadingExponents();
    while (!r.isZero()) {
        const Exponents& lr = r.leadingExponents();
        Exponents d(n, 0u);
        for (std::size_t i = 0; i < n; ++i) {
            if (lr[i] < lb[i]) throw std::logic_error("divExact: division is not exact");
            d[i] = lr[i] - lb[i];
        }
        Rational c = r.leadingCoeff() / b.leadingCoeff();
        MultiPoly t = MultiPoly::monomial(a.varsPtr(), d, c);
        q += t;
        r -= t * b;
    }
    return q;
}

MultiPoly polyGcd(const MultiPoly& a, const MultiPoly& b) {
    if (a.isZero()) return b.primitivePart();
    if (b.isZero()) return a.primitivePart();
    MultiPoly A = a.primitivePart();
    MultiPoly B = b.primitivePart();
    if (A.isConstant() || B.isConstant())
        return MultiPoly::constant(a.varsPtr(), Rational(1));

    // Main variable: first variable occurring in either operand.
    std::size_t mv = 0;
    for (; mv < a.vars().size(); ++mv)
        if (A.degreeIn(mv) > 0 || B.degreeIn(mv) > 0) break;

    if (A.degreeIn(mv) == 0 || B.degreeIn(mv) == 0) {
        // One operand is free of mv: gcd divides its mv-content.
        const MultiPoly& flat = A.degreeIn(mv) == 0 ? A : B;
        const MultiPoly& other = A.degreeIn(mv) == 0 ? B : A;
        return polyGcd(flat, contentIn(other, mv));
    }

    MultiPoly cA = contentIn(A, mv), cB = contentIn(B, mv);
    MultiPoly c = polyGcd(cA, cB);
    A = divExact(A, cA);
    B = divExact(B, cB);
    if (A.degreeIn(mv) < B.degreeIn(mv)) std::swap(A, B);

    MultiPoly g = MultiPoly::constant(a.varsPtr(), Rational(1));
    MultiPoly h = g;
    MultiPoly result(a.varsPtr());
    while (true) {
        int delta = A.degreeIn(mv) - B.degreeIn(mv);
        MultiPoly R = prem(A, B, mv);
        if (R.isZero()) {
            result = divExact(B, contentIn(B, mv));
            break;
        }
        if (R.degreeIn(mv) == 0) {
            result = MultiPoly::constant(a.varsPtr(), Rational(1));
            break;
        }
        A = B;
        MultiPoly divisor = g * h.pow(static_cast<unsigned>(delta));
        B = divExact(R, divisor);
        g = leadCoeffIn(A, mv);
        if (delta == 0) {
            // h unchanged
        } else if (delta == 1) {
            h = g;
        } else {
            h = divExact(g.pow(static_cast<unsigned>(delta)), h.pow(static_cast<unsigned>(delta - 1)));
        }
    }
    return (c * result).primitivePart();
}

MultiPoly polyLcm(const MultiPoly& a, const MultiPoly& b) {
    if (a.isZero() || b.isZero()) return MultiPoly(a.varsPtr());
    MultiPoly g = polyGcd(a, b);
    return divExact(a.primitivePart() * b.primitivePart(), g).primitivePart();
}

} // namespace geoflow
