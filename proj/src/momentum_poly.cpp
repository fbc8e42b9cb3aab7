#include <geoflow/momentum_poly.hpp>

#include <algorithm>
#include <sstream>

namespace geoflow {

MomentumPolynomial MomentumPolynomial::momentum(const ChartPtr& chart, std::size_t i) {
    MomentumPolynomial f(chart);
    Exponents e(chart->dim(), 0u);
    e[i] = 1u;
    f.terms_.emplace(std::move(e), RationalFunction::constant(chart->coordsPtr(), Rational(1)));
    return f;
}

MomentumPolynomial MomentumPolynomial::coefficient(const ChartPtr& chart, RationalFunction c) {
    MomentumPolynomial f(chart);
    if (!c.isZero()) f.terms_.emplace(Exponents(chart->dim(), 0u), std::move(c));
    return f;
}

void MomentumPolynomial::addTerm(const Exponents& momExp, const RationalFunction& coeff) {
    if (coeff.isZero()) return;
    if (momExp.size() != chart_->dim())
        throw ChartMismatchError("momentum exponent length does not match chart dimension");
    auto it = terms_.find(momExp);
    if (it == terms_.end()) {
        terms_.emplace(momExp, coeff);
    } else {
        it->second = it->second + coeff;
        if (it->second.isZero()) terms_.erase(it);
    }
}

RationalFunction MomentumPolynomial::coeff(const Exponents& momExp) const {
    auto it = terms_.find(momExp);
    if (it == terms_.end()) return RationalFunction::zero(chart_->coordsPtr());
    return it->second;
}

void MomentumPolynomial::requireSameChart(const MomentumPolynomial& o) const {
    if (chart_ == o.chart_) return;
    if (!chart_->sameAs(*o.chart_))
        throw ChartMismatchError("momentum polynomials live on different charts");
}

MomentumPolynomial MomentumPolynomial::operator-() const {
    MomentumPolynomial r(chart_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

MomentumPolynomial MomentumPolynomial::operator+(const MomentumPolynomial& o) const {
    requireSameChart(o);
    MomentumPolynomial r(*this);
    for (const auto& [e, c] : o.terms_) r.addTerm(e, c);
    return r;
}

MomentumPolynomial& MomentumPolynomial::operator+=(const MomentumPolynomial& o) {
    requireSameChart(o);
    for (const auto& [e, c] : o.terms_) addTerm(e, c);
    return *this;
}

MomentumPolynomial MomentumPolynomial::operator-(const MomentumPolynomial& o) const {
    return *this + (-o);
}

MomentumPolynomial MomentumPolynomial::operator*(const MomentumPolynomial& o) const {
    requireSameChart(o);
    MomentumPolynomial r(chart_);
    const std::size_t n = chart_->dim();
    Exponents e(n, 0u);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
            r.addTerm(e, ca * cb);
        }
    }
    return r;
}

bool MomentumPolynomial::operator==(const MomentumPolynomial& o) const {
    if (chart_ != o.chart_ && !chart_->sameAs(*o.chart_)) return false;
    return terms_ == o.terms_;
}

MomentumPolynomial MomentumPolynomial::scaled(const Rational& c) const {
    MomentumPolynomial r(chart_);
    if (c == 0) return r;
    for (const auto& [e, k] : terms_) r.terms_.emplace(e, k.scaled(c));
    return r;
}

MomentumPolynomial MomentumPolynomial::scaled(const RationalFunction& c) const {
    MomentumPolynomial r(chart_);
    if (c.isZero()) return r;
    for (const auto& [e, k] : terms_) r.addTerm(e, k * c);
    return r;
}

MomentumPolynomial MomentumPolynomial::partialCoord(std::size_t i) const {
    MomentumPolynomial r(chart_);
    for (const auto& [e, c] : terms_) r.addTerm(e, c.partial(i));
    return r;
}

MomentumPolynomial MomentumPolynomial::partialMomentum(std::size_t i) const {
    MomentumPolynomial r(chart_);
    for (const auto& [e, c] : terms_) {
        if (e[i] == 0) continue;
        Exponents d(e);
        d[i] -= 1;
        r.addTerm(d, c.scaled(Rational(e[i])));
    }
    return r;
}

int MomentumPolynomial::momentumDegree() const {
    if (terms_.empty()) return -1;
    return static_cast<int>(totalDegree(terms_.rbegin()->first));
}

std::optional<int> MomentumPolynomial::homogeneousDegree() const {
    if (terms_.empty()) return std::nullopt;
    unsigned d = totalDegree(terms_.begin()->first);
    if (totalDegree(terms_.rbegin()->first) != d) return std::nullopt;
    return static_cast<int>(d);
}

MomentumPolynomial MomentumPolynomial::homogeneousPart(int degree) const {
    MomentumPolynomial r(chart_);
    for (const auto& [e, c] : terms_)
        if (static_cast<int>(totalDegree(e)) == degree) r.terms_.emplace(e, c);
    return r;
}

MomentumPolynomial MomentumPolynomial::liftedTo(const ChartPtr& target) const {
    std::vector<std::size_t> pos(chart_->dim());
    for (std::size_t i = 0; i < chart_->dim(); ++i) {
        const std::string& name = chart_->coords()[i];
        auto it = std::find(target->coords().begin(), target->coords().end(), name);
        if (it == target->coords().end())
            throw ChartMismatchError("target chart misses coordinate '" + name + "'");
        pos[i] = static_cast<std::size_t>(it - target->coords().begin());
    }
    MomentumPolynomial r(target);
    for (const auto& [e, c] : terms_) {
        Exponents w(target->dim(), 0u);
        for (std::size_t i = 0; i < e.size(); ++i) w[pos[i]] = e[i];
        r.addTerm(w, c.extendedTo(target->coordsPtr()));
    }
    return r;
}

MomentumPolynomial MomentumPolynomial::renamedTo(const ChartPtr& target) const {
    if (target->dim() != chart_->dim())
        throw ChartMismatchError("positional rename requires equal chart dimensions");
    MomentumPolynomial r(target);
    for (const auto& [e, c] : terms_)
        r.addTerm(e, c.renamedTo(target->coordsPtr()));
    return r;
}

double MomentumPolynomial::evalDouble(const std::vector<double>& x,
                                      const std::vector<double>& p, double poleEps) const {
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
        double t = c.evalDouble(x, poleEps);
        for (std::size_t i = 0; i < e.size(); ++i)
            for (unsigned k = 0; k < e[i]; ++k) t *= p[i];
        acc += t;
    }
    return acc;
}

std::string MomentumPolynomial::toString() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        std::string mono;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += chart_->momentumName(i);
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        if (c.isConstant()) {
            Rational a = c.constantValue();
            if (first) {
                if (a < 0) { out << "-"; a = -a; }
            } else {
                out << (a < 0 ? " - " : " + ");
                if (a < 0) a = -a;
            }
            if (mono.empty()) {
                out << a.str();
            } else {
                if (a != 1) out << a.str() << "*";
                out << mono;
            }
        } else {
            if (!first) out << " + ";
            out << "(" << c.toString() << ")";
            if (!mono.empty()) out << "*" << mono;
        }
        first = false;
    }
    return out.str();
}

} // namespace geoflow
