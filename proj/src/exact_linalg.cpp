#include <geoflow/exact_linalg.hpp>

#include <algorithm>

namespace geoflow {

namespace {

void stripContent(SparseIntRow& row) {
    if (row.empty()) return;
    Integer g(0);
    for (const auto& [c, v] : row) {
        g = intGcd(g, v);
        if (g == 1) break;
    }
    if (row.front().second < 0) g = -g;
    if (g != 1) {
        for (auto& [c, v] : row) v /= g;
    }
}

// r := lead * r - coef * pivot, merged by column.
SparseIntRow combine(const SparseIntRow& r, const Integer& lead,
                     const SparseIntRow& pivot, const Integer& coef) {
    SparseIntRow out;
    out.reserve(r.size() + pivot.size());
    std::size_t i = 0, j = 0;
    while (i < r.size() || j < pivot.size()) {
        if (j >= pivot.size() || (i < r.size() && r[i].first < pivot[j].first)) {
            out.emplace_back(r[i].first, lead * r[i].second);
            ++i;
        } else if (i >= r.size() || pivot[j].first < r[i].first) {
            out.emplace_back(pivot[j].first, -coef * pivot[j].second);
            ++j;
        } else {
            Integer v = lead * r[i].second - coef * pivot[j].second;
            if (v != 0) out.emplace_back(r[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    return out;
}

} // namespace

SparseIntRow toIntegerRow(const SparseRatRow& row) {
    Integer den(1);
    for (const auto& [c, v] : row) den = intLcm(den, denominator(v));
    SparseIntRow out;
    out.reserve(row.size());
    for (const auto& [c, v] : row) {
        Integer scaled = numerator(v) * (den / denominator(v));
        if (scaled != 0) out.emplace_back(c, std::move(scaled));
    }
    return out;
}

void FractionFreeEchelon::reduce(SparseIntRow& row) const {
    // Rows are sorted, bookkeeping columns sit past all structural ones, so
    // the front entry is structural iff any structural entry remains.
    while (!row.empty() && row.front().first < cols_) {
        auto it = rows_.find(row.front().first);
        if (it == rows_.end()) return;
        row = combine(row, it->second.front().second, it->second, row.front().second);
        stripContent(row);
    }
}

bool FractionFreeEchelon::addRow(SparseIntRow row) {
    stripContent(row);
    reduce(row);
    last_ = row;
    if (row.empty() || row.front().first >= cols_) return false;
    rows_.emplace(row.front().first, std::move(row));
    return true;
}

bool FractionFreeEchelon::addRow(const SparseRatRow& row) {
    return addRow(toIntegerRow(row));
}

std::vector<std::vector<Rational>> FractionFreeEchelon::nullspaceBasis() const {
    std::vector<bool> isPivot(cols_, false);
    for (const auto& [p, r] : rows_) isPivot[p] = true;
    std::vector<std::vector<Rational>> basis;
    for (int f = 0; f < cols_; ++f) {
        if (isPivot[f]) continue;
        std::vector<Rational> v(cols_, Rational(0));
        v[f] = 1;
        for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
            const int p = it->first;
            if (p > f) continue; // columns beyond f are zero in this vector
            Rational acc(0);
            Integer pivotVal(0);
            for (const auto& [c, val] : it->second) {
                if (c == p) {
                    pivotVal = val;
                } else if (c < cols_ && !v[c].is_zero()) {
                    acc += Rational(val) * v[c];
                }
            }
            v[p] = -acc / Rational(pivotVal);
        }
        // Scale so the first nonzero coordinate is one.
        for (int c = 0; c < cols_; ++c) {
            if (!v[c].is_zero()) {
                Rational s = v[c];
                for (int k = c; k < cols_; ++k)
                    if (!v[k].is_zero()) v[k] /= s;
                break;
            }
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::vector<Rational>> solveCombination(
    int keys, const std::vector<SparseRatRow>& basis, const SparseRatRow& target) {
    FractionFreeEchelon ech(keys);
    const int m = static_cast<int>(basis.size());
    for (int i = 0; i < m; ++i) {
        SparseRatRow aug = basis[i];
        aug.emplace_back(keys + i, Rational(1));
        ech.addRow(aug);
    }
    SparseRatRow aug = target;
    aug.emplace_back(keys + m, Rational(1));
    if (ech.addRow(aug)) return std::nullopt; // independent of the basis
    const SparseIntRow& red = ech.lastReduced();
    for (const auto& [c, v] : red)
        if (c < keys) return std::nullopt;
    Integer alpha(0);
    for (const auto& [c, v] : red)
        if (c == keys + m) alpha = v;
    if (alpha == 0) throw std::logic_error("solveCombination lost the target bookkeeping entry");
    std::vector<Rational> coeffs(m, Rational(0));
    for (const auto& [c, v] : red) {
        if (c >= keys && c < keys + m) coeffs[c - keys] = -Rational(v) / Rational(alpha);
    }
    return coeffs;
}

int ratRank(const RatMatrix& a) {
    FractionFreeEchelon ech(static_cast<int>(a.cols()));
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        SparseRatRow row;
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_zero()) row.emplace_back(static_cast<int>(j), a(i, j));
        ech.addRow(row);
    }
    return ech.rank();
}

RatMatrix ratNullspace(const RatMatrix& a) {
    FractionFreeEchelon ech(static_cast<int>(a.cols()));
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        SparseRatRow row;
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_zero()) row.emplace_back(static_cast<int>(j), a(i, j));
        ech.addRow(row);
    }
    auto basis = ech.nullspaceBasis();
    RatMatrix out(a.cols(), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k)
        for (Eigen::Index i = 0; i < a.cols(); ++i)
            out(i, static_cast<Eigen::Index>(k)) = basis[k][static_cast<std::size_t>(i)];
    return out;
}

RatMatrix ratMul(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols() != b.rows()) throw std::logic_error("ratMul dimension mismatch");
    RatMatrix r(a.rows(), b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            Rational acc(0);
            for (Eigen::Index k = 0; k < a.cols(); ++k)
                if (!a(i, k).is_zero() && !b(k, j).is_zero()) acc += a(i, k) * b(k, j);
            r(i, j) = std::move(acc);
        }
    return r;
}

RatVector ratApply(const RatMatrix& a, const RatVector& v) {
    if (a.cols() != v.size()) throw std::logic_error("ratApply dimension mismatch");
    RatVector r(a.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        Rational acc(0);
        for (Eigen::Index k = 0; k < a.cols(); ++k)
            if (!a(i, k).is_zero() && !v(k).is_zero()) acc += a(i, k) * v(k);
        r(i) = std::move(acc);
    }
    return r;
}

RfMatrix rfInverse(const RfMatrix& a) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n) throw std::logic_error("rfInverse requires a square matrix");
    if (n == 0) return a;
    const VarListPtr vars = a(0, 0).varsPtr();
    RfMatrix work = a;
    RfMatrix inv(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            inv(i, j) = RationalFunction::constant(vars, Rational(i == j ? 1 : 0));
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index pivot = -1;
        for (Eigen::Index r = col; r < n; ++r) {
            if (!work(r, col).isZero()) { pivot = r; break; }
        }
        if (pivot < 0) throw MathDomainError("symbolically singular matrix");
        if (pivot != col) {
            work.row(pivot).swap(work.row(col));
            inv.row(pivot).swap(inv.row(col));
        }
        RationalFunction p = work(col, col);
        for (Eigen::Index j = 0; j < n; ++j) {
            work(col, j) = work(col, j) / p;
            inv(col, j) = inv(col, j) / p;
        }
        for (Eigen::Index r = 0; r < n; ++r) {
            if (r == col || work(r, col).isZero()) continue;
            RationalFunction f = work(r, col);
            for (Eigen::Index j = 0; j < n; ++j) {
                work(r, j) = work(r, j) - f * work(col, j);
                inv(r, j) = inv(r, j) - f * inv(col, j);
            }
        }
    }
    return inv;
}

RationalFunction rfDeterminant(const RfMatrix& a) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n) throw std::logic_error("rfDeterminant requires a square matrix");
    if (n == 0) throw std::logic_error("rfDeterminant of empty matrix");
    const VarListPtr vars = a(0, 0).varsPtr();
    RfMatrix work = a;
    RationalFunction det = RationalFunction::constant(vars, Rational(1));
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index pivot = -1;
        for (Eigen::Index r = col; r < n; ++r) {
            if (!work(r, col).isZero()) { pivot = r; break; }
        }
        if (pivot < 0) return RationalFunction::zero(vars);
        if (pivot != col) {
            work.row(pivot).swap(work.row(col));
            det = -det;
        }
        RationalFunction p = work(col, col);
        det = det * p;
        for (Eigen::Index r = col + 1; r < n; ++r) {
            if (work(r, col).isZero()) continue;
            RationalFunction f = work(r, col) / p;
            for (Eigen::Index j = col; j < n; ++j)
                work(r, j) = work(r, j) - f * work(col, j);
        }
    }
    return det;
}

} // namespace geoflow
