#include <geoflow/spaces.hpp>

#include <algorithm>
#include <functional>

namespace geoflow {

AnsatzSpec AnsatzSpec::make(const ChartPtr& chart, int momentumDegree, int coeffDegree) {
    return make(chart, momentumDegree, coeffDegree,
                MultiPoly::constant(chart->coordsPtr(), Rational(1)));
}

AnsatzSpec AnsatzSpec::make(const ChartPtr& chart, int momentumDegree, int coeffDegree,
                            MultiPoly denominator) {
    if (denominator.isZero()) throw MathDomainError("ansatz denominator must be nonzero");
    if (momentumDegree < 0 || coeffDegree < 0)
        throw std::logic_error("ansatz bounds must be non-negative");
    AnsatzSpec s;
    s.momentumDegree = momentumDegree;
    s.coeffDegree = coeffDegree;
    s.denominator = denominator.varsPtr() == chart->coordsPtr()
                        ? std::move(denominator)
                        : denominator.extendedTo(chart->coordsPtr());
    return s;
}

AnsatzSpec AnsatzSpec::withMomentumDegree(int d) const {
    AnsatzSpec s(*this);
    s.momentumDegree = d;
    return s;
}

std::vector<Exponents> momentumMonomials(std::size_t n, int degree) {
    std::vector<Exponents> out;
    Exponents cur(n, 0u);
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int rem) {
        if (pos + 1 == n) {
            cur[pos] = static_cast<unsigned>(rem);
            out.push_back(cur);
            return;
        }
        for (int k = rem; k >= 0; --k) {
            cur[pos] = static_cast<unsigned>(k);
            rec(pos + 1, rem - k);
        }
    };
    if (n == 0) return out;
    rec(0, degree);
    // descending graded lex (degree fixed, so descending lex)
    std::sort(out.begin(), out.end(), [](const Exponents& a, const Exponents& b) {
        return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
    });
    return out;
}

namespace {

// Coordinate monomials of total degree <= maxDeg over the allowed variables,
// descending graded lex.
std::vector<Exponents> coordMonomials(const ChartPtr& chart, int maxDeg,
                                      const std::optional<std::vector<std::string>>& allowed) {
    std::vector<bool> use(chart->dim(), true);
    if (allowed) {
        use.assign(chart->dim(), false);
        for (const auto& name : *allowed) {
            auto it = std::find(chart->coords().begin(), chart->coords().end(), name);
            if (it == chart->coords().end())
                throw MathDomainError("ansatz variable '" + name + "' is not a chart coordinate");
            use[static_cast<std::size_t>(it - chart->coords().begin())] = true;
        }
    }
    std::vector<Exponents> out;
    Exponents cur(chart->dim(), 0u);
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int rem) {
        if (pos == chart->dim()) {
            out.push_back(cur);
            return;
        }
        int top = use[pos] ? rem : 0;
        for (int k = 0; k <= top; ++k) {
            cur[pos] = static_cast<unsigned>(k);
            rec(pos + 1, rem - k);
        }
        cur[pos] = 0;
    };
    rec(0, maxDeg);
    GradedLexLess less;
    std::sort(out.begin(), out.end(), [&](const Exponents& a, const Exponents& b) {
        return less(b, a);
    });
    return out;
}

} // namespace

std::vector<MomentumPolynomial> ansatzElements(const ChartPtr& chart, const AnsatzSpec& spec) {
    const int numDeg = spec.coeffDegree + std::max(0, spec.denominator.totalDegree());
    const auto moms = momentumMonomials(chart->dim(), spec.momentumDegree);
    const auto coords = coordMonomials(chart, numDeg, spec.coeffVars);
    std::vector<MomentumPolynomial> out;
    out.reserve(moms.size() * coords.size());
    for (const auto& me : moms) {
        for (const auto& ce : coords) {
            RationalFunction c(MultiPoly::monomial(chart->coordsPtr(), ce, Rational(1)),
                               spec.denominator);
            MomentumPolynomial f(chart);
            f.addTerm(me, c);
            out.push_back(std::move(f));
        }
    }
    return out;
}

// ---- linearization ----------------------------------------------------------

PolyLinearizer::PolyLinearizer(ChartPtr chart)
    : chart_(std::move(chart)),
      commonDen_(MultiPoly::constant(chart_->coordsPtr(), Rational(1))) {}

void PolyLinearizer::collect(const MomentumPolynomial& f) {
    for (const auto& [e, c] : f.terms()) {
        if (!c.den().isConstant()) commonDen_ = polyLcm(commonDen_, c.den());
    }
}

SparseRatRow PolyLinearizer::row(const MomentumPolynomial& f) {
    std::map<int, Rational> acc;
    for (const auto& [e, c] : f.terms()) {
        MultiPoly cleared = c.num() * divExact(commonDen_, c.den());
        for (const auto& [ce, v] : cleared.terms()) {
            auto key = std::make_pair(e, ce);
            auto it = keys_.find(key);
            if (it == keys_.end()) it = keys_.emplace(key, nextKey_++).first;
            acc[it->second] += v;
        }
    }
    SparseRatRow row;
    row.reserve(acc.size());
    for (auto& [k, v] : acc)
        if (v != 0) row.emplace_back(k, std::move(v));
    return row;
}

std::optional<std::vector<Rational>> expandOverBasis(
    const MomentumPolynomial& target, const std::vector<MomentumPolynomial>& basis) {
    if (target.isZero()) return std::vector<Rational>(basis.size(), Rational(0));
    PolyLinearizer lin(target.chart());
    lin.collect(target);
    for (const auto& b : basis) lin.collect(b);
    std::vector<SparseRatRow> rows;
    rows.reserve(basis.size());
    for (const auto& b : basis) rows.push_back(lin.row(b));
    SparseRatRow t = lin.row(target);
    return solveCombination(lin.keyCount(), rows, t);
}

int extendSpan(std::vector<MomentumPolynomial>& span,
               const std::vector<MomentumPolynomial>& candidates) {
    if (candidates.empty()) return 0;
    PolyLinearizer lin(candidates.front().chart());
    for (const auto& f : span) lin.collect(f);
    for (const auto& f : candidates) lin.collect(f);
    // Keys are discovered lazily, so feed the existing span first and size the
    // echelon afterwards via a two-pass run.
    std::vector<SparseRatRow> spanRows, candRows;
    for (const auto& f : span) spanRows.push_back(lin.row(f));
    for (const auto& f : candidates) candRows.push_back(lin.row(f));
    FractionFreeEchelon ech(lin.keyCount());
    for (auto& r : spanRows) ech.addRow(r);
    int appended = 0;
    for (std::size_t i = 0; i < candRows.size(); ++i) {
        if (candidates[i].isZero()) continue;
        if (ech.addRow(candRows[i])) {
            span.push_back(candidates[i]);
            ++appended;
        }
    }
    return appended;
}

bool sameSpan(const std::vector<MomentumPolynomial>& a,
              const std::vector<MomentumPolynomial>& b) {
    std::vector<MomentumPolynomial> u(a);
    if (extendSpan(u, b) != 0) return false;
    std::vector<MomentumPolynomial> v(b);
    return extendSpan(v, a) == 0;
}

// ---- solvers ----------------------------------------------------------------

namespace {

LadderBasis solveAnnihilated(const ChartPtr& chart, int d, int k, const AnsatzSpec& spec) {
    AnsatzSpec s = spec.withMomentumDegree(d);
    std::vector<MomentumPolynomial> elems = ansatzElements(chart, s);
    std::vector<MomentumPolynomial> images;
    images.reserve(elems.size());
    for (const auto& m : elems) images.push_back(iterateH(m, k));

    PolyLinearizer lin(chart);
    for (const auto& g : images) lin.collect(g);
    std::vector<SparseRatRow> cols;
    cols.reserve(images.size());
    for (const auto& g : images) cols.push_back(lin.row(g));

    // Equations: one row per key, entries indexed by ansatz element.
    std::map<int, SparseRatRow> eqns;
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (const auto& [key, v] : cols[j])
            eqns[key].emplace_back(static_cast<int>(j), v);

    FractionFreeEchelon ech(static_cast<int>(elems.size()));
    for (auto& [key, row] : eqns) ech.addRow(row);

    LadderBasis out;
    out.chart = chart;
    out.d = d;
    out.k = k;
    for (const auto& vec : ech.nullspaceBasis()) {
        MomentumPolynomial f(chart);
        for (std::size_t j = 0; j < elems.size(); ++j)
            if (!vec[j].is_zero()) f += elems[j].scaled(vec[j]);
        out.basis.push_back(std::move(f));
    }
    return out;
}

} // namespace

LadderBasis solveKilling(const ChartPtr& chart, const AnsatzSpec& spec) {
    return solveAnnihilated(chart, spec.momentumDegree, 1, spec);
}

LadderBasis solveLadder(const ChartPtr& chart, int d, int k, const AnsatzSpec& spec) {
    if (k < 1) throw std::logic_error("ladder index k must be >= 1");
    return solveAnnihilated(chart, d, k, spec);
}

} // namespace geoflow
