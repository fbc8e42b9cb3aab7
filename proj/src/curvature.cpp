#include <geoflow/curvature.hpp>

#include <algorithm>
#include <sstream>

namespace geoflow {

RiemannAtPoint::RiemannAtPoint(const ChartPtr& chart, std::vector<Rational> point)
    : n_(static_cast<int>(chart->dim())) {
    if (point.size() != chart->dim())
        throw std::invalid_argument("point dimension does not match the chart");

    // Metric, Christoffels and their partials, all exact at the point.
    RatMatrix g(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) g(i, j) = chart->metric()(i, j).evalRational(point);
    const ChristoffelSymbols& gamma = chart->christoffel();

    std::vector<Rational> gv(static_cast<std::size_t>(n_ * n_ * n_));
    std::vector<Rational> dgv(static_cast<std::size_t>(n_ * n_ * n_ * n_));
    auto gvAt = [&](int k, int i, int j) -> Rational& {
        return gv[static_cast<std::size_t>((k * n_ + i) * n_ + j)];
    };
    auto dgvAt = [&](int l, int k, int i, int j) -> Rational& {
        return dgv[static_cast<std::size_t>(((l * n_ + k) * n_ + i) * n_ + j)];
    };
    for (int k = 0; k < n_; ++k)
        for (int i = 0; i < n_; ++i)
            for (int j = i; j < n_; ++j) {
                const RationalFunction& G = gamma.get(static_cast<std::size_t>(k),
                                                      static_cast<std::size_t>(i),
                                                      static_cast<std::size_t>(j));
                Rational v = G.isZero() ? Rational(0) : G.evalRational(point);
                gvAt(k, i, j) = v;
                gvAt(k, j, i) = v;
                for (int l = 0; l < n_; ++l) {
                    RationalFunction dG = G.partial(static_cast<std::size_t>(l));
                    Rational dv = dG.isZero() ? Rational(0) : dG.evalRational(point);
                    dgvAt(l, k, i, j) = dv;
                    dgvAt(l, k, j, i) = dv;
                }
            }

    // R^e_{bcd} = d_c Gamma^e_{db} - d_d Gamma^e_{cb}
    //             + Gamma^e_{cm} Gamma^m_{db} - Gamma^e_{dm} Gamma^m_{cb}
    comps_.assign(static_cast<std::size_t>(n_ * n_ * n_ * n_), Rational(0));
    for (int e = 0; e < n_; ++e)
        for (int b = 0; b < n_; ++b)
            for (int c = 0; c < n_; ++c)
                for (int d = c + 1; d < n_; ++d) {
                    Rational v = dgvAt(c, e, d, b) - dgvAt(d, e, c, b);
                    for (int m = 0; m < n_; ++m)
                        v += gvAt(e, c, m) * gvAt(m, d, b) - gvAt(e, d, m) * gvAt(m, c, b);
                    // lower the first index later; store R^e_{bcd} for now
                    comps_[flat(e, b, c, d)] = v;
                    comps_[flat(e, b, d, c)] = -v;
                }

    std::vector<Rational> lowered(comps_.size(), Rational(0));
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
            for (int c = 0; c < n_; ++c)
                for (int d = 0; d < n_; ++d) {
                    Rational v(0);
                    for (int e = 0; e < n_; ++e) {
                        if (g(a, e).is_zero()) continue;
                        const Rational& r = comps_[flat(e, b, c, d)];
                        if (!r.is_zero()) v += g(a, e) * r;
                    }
                    lowered[flat(a, b, c, d)] = std::move(v);
                }
    comps_ = std::move(lowered);
}

std::size_t RiemannAtPoint::flat(int a, int b, int c, int d) const {
    return static_cast<std::size_t>(((a * n_ + b) * n_ + c) * n_ + d);
}

const Rational& RiemannAtPoint::get(int a, int b, int c, int d) const {
    return comps_[flat(a, b, c, d)];
}

Rational RiemannAtPoint::sectionalNumerator(const std::vector<Rational>& x,
                                            const std::vector<Rational>& y) const {
    Rational acc(0);
    for (int a = 0; a < n_; ++a) {
        if (x[static_cast<std::size_t>(a)].is_zero()) continue;
        for (int b = 0; b < n_; ++b) {
            if (y[static_cast<std::size_t>(b)].is_zero()) continue;
            for (int c = 0; c < n_; ++c) {
                if (x[static_cast<std::size_t>(c)].is_zero()) continue;
                for (int d = 0; d < n_; ++d) {
                    const Rational& r = get(a, b, c, d);
                    if (r.is_zero() || y[static_cast<std::size_t>(d)].is_zero()) continue;
                    acc += r * x[static_cast<std::size_t>(a)] * y[static_cast<std::size_t>(b)] *
                           x[static_cast<std::size_t>(c)] * y[static_cast<std::size_t>(d)];
                }
            }
        }
    }
    return acc;
}

RatMatrix RiemannAtPoint::directionForm(const std::vector<Rational>& x) const {
    RatMatrix q(n_, n_);
    for (int b = 0; b < n_; ++b)
        for (int d = 0; d < n_; ++d) {
            Rational acc(0);
            for (int a = 0; a < n_; ++a) {
                if (x[static_cast<std::size_t>(a)].is_zero()) continue;
                for (int c = 0; c < n_; ++c) {
                    if (x[static_cast<std::size_t>(c)].is_zero()) continue;
                    const Rational& r = get(a, b, c, d);
                    if (!r.is_zero())
                        acc += r * x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(c)];
                }
            }
            q(b, d) = std::move(acc);
        }
    return q;
}

bool RiemannAtPoint::planeDiagonal() const {
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
            for (int c = 0; c < n_; ++c)
                for (int d = 0; d < n_; ++d) {
                    if (get(a, b, c, d).is_zero()) continue;
                    int lo1 = std::min(a, b), hi1 = std::max(a, b);
                    int lo2 = std::min(c, d), hi2 = std::max(c, d);
                    if (lo1 != lo2 || hi1 != hi2) return false;
                }
    return true;
}

const Rational& RiemannAtPoint::plane(int i, int j) const { return get(i, j, i, j); }

// ---- strict-positivity feasibility -------------------------------------------

namespace {

// One strict inequality sum(coeff_i * s_i) + constant > 0.
struct Inequality {
    std::vector<Rational> coeff;
    Rational constant;
};

bool isConstant(const Inequality& q) {
    for (const auto& c : q.coeff)
        if (!c.is_zero()) return false;
    return true;
}

} // namespace

std::optional<std::vector<Rational>> positiveKernelSample(const RatMatrix& a) {
    const int t = static_cast<int>(a.cols());
    if (t == 0) return std::nullopt;
    RatMatrix kernel = ratNullspace(a);
    const int s = static_cast<int>(kernel.cols());
    if (s == 0) return std::nullopt;

    // Inequalities (kernel * y)_i > 0 over the free parameters y.
    std::vector<Inequality> system;
    for (int i = 0; i < t; ++i) {
        Inequality q;
        q.constant = 0;
        for (int j = 0; j < s; ++j) q.coeff.push_back(kernel(i, j));
        system.push_back(std::move(q));
    }

    // Fourier-Motzkin elimination of y_{s-1} .. y_0, keeping each stage's
    // bounds for back-substitution.
    struct Stage {
        std::vector<Inequality> lower; // y_v > expr
        std::vector<Inequality> upper; // y_v < expr
    };
    std::vector<Stage> stages;
    for (int v = s - 1; v >= 0; --v) {
        Stage st;
        std::vector<Inequality> rest;
        for (const auto& q : system) {
            const Rational& cv = q.coeff[static_cast<std::size_t>(v)];
            if (cv.is_zero()) {
                rest.push_back(q);
            } else {
                // c*y_v + R > 0  =>  y_v > -R/c (c>0) or y_v < -R/c (c<0)
                Inequality bound;
                bound.coeff.assign(q.coeff.size(), Rational(0));
                for (std::size_t i = 0; i < q.coeff.size(); ++i)
                    if (static_cast<int>(i) != v) bound.coeff[i] = -q.coeff[i] / cv;
                bound.constant = -q.constant / cv;
                if (cv > 0)
                    st.lower.push_back(std::move(bound));
                else
                    st.upper.push_back(std::move(bound));
            }
        }
        // combined constraints: every lower < every upper
        for (const auto& lo : st.lower)
            for (const auto& hi : st.upper) {
                Inequality q;
                q.coeff.resize(lo.coeff.size());
                for (std::size_t i = 0; i < lo.coeff.size(); ++i)
                    q.coeff[i] = hi.coeff[i] - lo.coeff[i];
                q.constant = hi.constant - lo.constant;
                rest.push_back(std::move(q));
            }
        stages.push_back(std::move(st));
        system = std::move(rest);
    }
    for (const auto& q : system) {
        if (!isConstant(q)) throw std::logic_error("Fourier-Motzkin left a non-constant row");
        if (!(q.constant > 0)) return std::nullopt;
    }

    // Back-substitute midpoints.
    std::vector<Rational> y(static_cast<std::size_t>(s), Rational(0));
    for (int v = 0; v < s; ++v) {
        const Stage& st = stages[static_cast<std::size_t>(s - 1 - v)];
        auto evalBound = [&](const Inequality& q) {
            Rational val = q.constant;
            for (std::size_t i = 0; i < q.coeff.size(); ++i)
                if (!q.coeff[i].is_zero()) val += q.coeff[i] * y[i];
            return val;
        };
        std::optional<Rational> lo, hi;
        for (const auto& q : st.lower) {
            Rational b = evalBound(q);
            if (!lo || b > *lo) lo = b;
        }
        for (const auto& q : st.upper) {
            Rational b = evalBound(q);
            if (!hi || b < *hi) hi = b;
        }
        Rational pick;
        if (lo && hi)
            pick = (*lo + *hi) / 2;
        else if (lo)
            pick = *lo + 1;
        else if (hi)
            pick = *hi - 1;
        else
            pick = 1;
        y[static_cast<std::size_t>(v)] = pick;
    }

    std::vector<Rational> sample(static_cast<std::size_t>(t), Rational(0));
    for (int i = 0; i < t; ++i) {
        Rational val(0);
        for (int j = 0; j < s; ++j)
            if (!kernel(i, j).is_zero()) val += kernel(i, j) * y[static_cast<std::size_t>(j)];
        if (!(val > 0)) throw std::logic_error("Fourier-Motzkin sample is not strictly positive");
        sample[static_cast<std::size_t>(i)] = std::move(val);
    }
    return sample;
}

// ---- the degeneracy operation -------------------------------------------------

std::string CurvatureDegeneracy::toString(const VarList& coords) const {
    std::ostringstream out;
    if (empty()) {
        out << "degenerate directions: none\n";
        return out.str();
    }
    if (fullSpace(static_cast<int>(coords.size()))) {
        out << "degenerate directions: every direction (flat point)\n";
        return out.str();
    }
    for (const auto& sup : subspaceSupports) {
        out << "degenerate subspace: span{";
        for (std::size_t i = 0; i < sup.size(); ++i) {
            if (i) out << ", ";
            out << "d/d" << coords[static_cast<std::size_t>(sup[i])];
        }
        out << "}\n";
    }
    for (const auto& cone : cones) {
        out << "degenerate direction sample: ";
        for (std::size_t i = 0; i < cone.support.size(); ++i) {
            if (i) out << ", ";
            out << "X_" << coords[static_cast<std::size_t>(cone.support[i])]
                << "^2 = " << cone.squares[i].str();
        }
        out << "\n";
    }
    if (!complete) {
        out << "analysis incomplete (non plane-diagonal curvature); nullity dimension "
            << nullityBasis.size() << "\n";
    }
    return out.str();
}

CurvatureDegeneracy sectionalCurvatureDegeneracy(const ChartPtr& chart,
                                                 const std::vector<Rational>& point) {
    const int n = static_cast<int>(chart->dim());
    if (n < 2) throw MathDomainError("sectional curvature needs dimension >= 2");
    // Nondegeneracy of the metric at the point.
    RatMatrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = chart->metric()(i, j).evalRational(point);
    {
        FractionFreeEchelon ech(n);
        for (int i = 0; i < n; ++i) {
            SparseRatRow row;
            for (int j = 0; j < n; ++j)
                if (!g(i, j).is_zero()) row.emplace_back(j, g(i, j));
            ech.addRow(row);
        }
        if (ech.rank() < n) throw MathDomainError("metric degenerates at the evaluation point");
    }

    RiemannAtPoint riem(chart, point);
    CurvatureDegeneracy out;
    out.diagonalStructure = riem.planeDiagonal();

    if (!out.diagonalStructure) {
        // Fall back to the curvature nullity {X : R(X,.,.,.) = 0}, which is
        // always contained in the degeneracy set.
        out.complete = false;
        RatMatrix rows(n * n * n, n);
        Eigen::Index r = 0;
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    for (int a = 0; a < n; ++a) rows(r, a) = riem.get(a, b, c, d);
                    ++r;
                }
        RatMatrix null = ratNullspace(rows);
        for (Eigen::Index k = 0; k < null.cols(); ++k) {
            std::vector<Rational> v;
            for (int i = 0; i < n; ++i) v.push_back(null(i, k));
            out.nullityBasis.push_back(std::move(v));
        }
        return out;
    }

    // Support-pattern analysis over the plane components K_ij = R(i,j,i,j).
    std::vector<std::vector<int>> supports;
    for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<int> sup;
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i)) sup.push_back(i);
        supports.push_back(std::move(sup));
    }
    std::sort(supports.begin(), supports.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a < b;
    });

    auto coveredBySubspace = [&](const std::vector<int>& sup) {
        for (const auto& s : out.subspaceSupports)
            if (std::includes(s.begin(), s.end(), sup.begin(), sup.end())) return true;
        return false;
    };

    for (const auto& sup : supports) {
        bool internalFlat = true;
        for (std::size_t i = 0; i < sup.size() && internalFlat; ++i)
            for (std::size_t j = i + 1; j < sup.size(); ++j)
                if (!riem.plane(sup[i], sup[j]).is_zero()) {
                    internalFlat = false;
                    break;
                }
        if (!internalFlat) continue;
        if (coveredBySubspace(sup)) continue;

        // External constraints: for j outside, sum_i K_ij t_i = 0.
        std::vector<int> outside;
        for (int j = 0; j < n; ++j)
            if (std::find(sup.begin(), sup.end(), j) == sup.end()) outside.push_back(j);
        RatMatrix a(static_cast<Eigen::Index>(outside.size()),
                    static_cast<Eigen::Index>(sup.size()));
        bool anyConstraint = false;
        for (std::size_t r = 0; r < outside.size(); ++r)
            for (std::size_t c = 0; c < sup.size(); ++c) {
                a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    riem.plane(sup[c], outside[r]);
                if (!a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)).is_zero())
                    anyConstraint = true;
            }
        if (!anyConstraint) {
            out.subspaceSupports.push_back(sup);
            continue;
        }
        auto sample = positiveKernelSample(a);
        if (sample) {
            DegeneracyCone cone;
            cone.support = sup;
            cone.squares = *sample;
            out.cones.push_back(std::move(cone));
        }
    }
    return out;
}

} // namespace geoflow
