#include <geoflow/rational_function.hpp>

#include <cmath>
#include <sstream>

namespace geoflow {

RationalFunction::RationalFunction(MultiPoly num, MultiPoly den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.isZero()) throw MathDomainError("rational function with zero denominator");
    normalize();
}

RationalFunction::RationalFunction(MultiPoly num)
    : num_(std::move(num)), den_(MultiPoly::constant(num_.varsPtr(), Rational(1))) {}

RationalFunction RationalFunction::zero(VarListPtr vars) {
    return RationalFunction(MultiPoly::zero(std::move(vars)));
}

RationalFunction RationalFunction::constant(VarListPtr vars, const Rational& c) {
    return RationalFunction(MultiPoly::constant(std::move(vars), c));
}

RationalFunction RationalFunction::variable(VarListPtr vars, const std::string& name) {
    return RationalFunction(MultiPoly::variable(std::move(vars), name));
}

Rational RationalFunction::constantValue() const {
    if (!isConstant()) throw std::logic_error("constantValue of non-constant rational function");
    return num_.constantValue() / den_.constantValue();
}

void RationalFunction::normalize() {
    if (num_.isZero()) {
        den_ = MultiPoly::constant(num_.varsPtr(), Rational(1));
        return;
    }
    if (!den_.isConstant()) {
        MultiPoly g = polyGcd(num_, den_);
        if (!g.isConstant()) {
            num_ = divExact(num_, g);
            den_ = divExact(den_, g);
        }
    }
    // Put den into integer-primitive, positive-leading form.
    Rational c = den_.content();
    if (den_.leadingCoeff() < 0) c = -c;
    if (c != 1) {
        den_ = den_.scaled(Rational(1) / c);
        num_ = num_.scaled(Rational(1) / c);
    }
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
    if (isZero()) return o;
    if (o.isZero()) return *this;
    if (den_ == o.den_) return RationalFunction(num_ + o.num_, den_);
    if (isPolynomial() && o.isPolynomial()) {
        RationalFunction r;
        r.num_ = num_.scaled(Rational(1) / den_.constantValue()) +
                 o.num_.scaled(Rational(1) / o.den_.constantValue());
        r.den_ = MultiPoly::constant(num_.varsPtr(), Rational(1));
        return r;
    }
    MultiPoly g = polyGcd(den_, o.den_);
    MultiPoly qa = divExact(o.den_, g);
    MultiPoly qb = divExact(den_, g);
    return RationalFunction(num_ * qa + o.num_ * qb, den_ * qa);
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
    return *this + (-o);
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
    *this = *this + o;
    return *this;
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
    if (isZero() || o.isZero()) return zero(num_.varsPtr());
    if (isPolynomial() && o.isPolynomial()) {
        RationalFunction r;
        r.num_ = (num_ * o.num_).scaled(Rational(1) / (den_.constantValue() * o.den_.constantValue()));
        r.den_ = MultiPoly::constant(num_.varsPtr(), Rational(1));
        return r;
    }
    // Cross-cancel so no final gcd is required.
    MultiPoly g1 = polyGcd(num_, o.den_);
    MultiPoly g2 = polyGcd(o.num_, den_);
    MultiPoly n = divExact(num_, g1) * divExact(o.num_, g2);
    MultiPoly d = divExact(den_, g2) * divExact(o.den_, g1);
    RationalFunction r;
    r.num_ = std::move(n);
    r.den_ = std::move(d);
    Rational c = r.den_.content();
    if (r.den_.leadingCoeff() < 0) c = -c;
    if (c != 1) {
        r.den_ = r.den_.scaled(Rational(1) / c);
        r.num_ = r.num_.scaled(Rational(1) / c);
    }
    return r;
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
    if (o.isZero()) throw MathDomainError("division by zero rational function");
    RationalFunction inv;
    inv.num_ = o.den_;
    inv.den_ = o.num_;
    Rational c = inv.den_.content();
    if (inv.den_.leadingCoeff() < 0) c = -c;
    if (c != 1) {
        inv.den_ = inv.den_.scaled(Rational(1) / c);
        inv.num_ = inv.num_.scaled(Rational(1) / c);
    }
    return *this * inv;
}

RationalFunction RationalFunction::scaled(const Rational& c) const {
    if (c == 0) return zero(num_.varsPtr());
    RationalFunction r;
    r.num_ = num_.scaled(c);
    r.den_ = den_;
    return r;
}

RationalFunction RationalFunction::pow(int k) const {
    if (k == 0) return constant(num_.varsPtr(), Rational(1));
    if (k < 0) return constant(num_.varsPtr(), Rational(1)) / pow(-k);
    RationalFunction r;
    r.num_ = num_.pow(static_cast<unsigned>(k));
    r.den_ = den_.pow(static_cast<unsigned>(k));
    // num/den coprime implies the powers are coprime; only rescale den.
    Rational c = r.den_.content();
    if (r.den_.leadingCoeff() < 0) c = -c;
    if (c != 1) {
        r.den_ = r.den_.scaled(Rational(1) / c);
        r.num_ = r.num_.scaled(Rational(1) / c);
    }
    return r;
}

RationalFunction RationalFunction::partial(std::size_t varIndex) const {
    if (isPolynomial()) {
        RationalFunction r;
        r.num_ = num_.partial(varIndex).scaled(Rational(1) / den_.constantValue());
        r.den_ = MultiPoly::constant(num_.varsPtr(), Rational(1));
        return r;
    }
    MultiPoly dn = num_.partial(varIndex);
    MultiPoly dd = den_.partial(varIndex);
    return RationalFunction(dn * den_ - num_ * dd, den_ * den_);
}

RationalFunction RationalFunction::extendedTo(const VarListPtr& wider) const {
    RationalFunction r;
    r.num_ = num_.extendedTo(wider);
    r.den_ = den_.extendedTo(wider);
    return r;
}

RationalFunction RationalFunction::renamedTo(const VarListPtr& target) const {
    RationalFunction r;
    r.num_ = num_.renamedTo(target);
    r.den_ = den_.renamedTo(target);
    return r;
}

double RationalFunction::evalDouble(const std::vector<double>& point, double poleEps) const {
    double d = den_.evalDouble(point);
    if (std::abs(d) < poleEps) {
        std::ostringstream msg;
        msg << "denominator " << den_.toString() << " evaluates to " << d << " (|.| < " << poleEps << ")";
        throw PoleError(msg.str());
    }
    return num_.evalDouble(point) / d;
}

Rational RationalFunction::evalRational(const std::vector<Rational>& point) const {
    Rational d = den_.evalRational(point);
    if (d == 0) throw PoleError("denominator " + den_.toString() + " vanishes at the evaluation point");
    return num_.evalRational(point) / d;
}

std::string RationalFunction::toString() const {
    if (isPolynomial()) {
        if (den_.constantValue() == 1) return num_.toString();
        return num_.scaled(Rational(1) / den_.constantValue()).toString();
    }
    return "(" + num_.toString() + ")/(" + den_.toString() + ")";
}

} // namespace geoflow
