#ifndef GEOFLOW_EXACT_LINALG_HPP
#define GEOFLOW_EXACT_LINALG_HPP

#include <map>
#include <optional>
#include <vector>

#include <geoflow/eigen_support.hpp>

namespace geoflow {

// Sparse rows, sorted by column index, nonzero values only.
using SparseRatRow = std::vector<std::pair<int, Rational>>;
using SparseIntRow = std::vector<std::pair<int, Integer>>;

/*
 * Incremental fraction-free row echelon form (Bareiss-style cross
 * multiplication with per-row content removal). Pivoting is deterministic:
 * the pivot column of a row is its leftmost nonzero structural column, and
 * the first row presented for a column keeps it. Columns >= cols are
 * bookkeeping: they are carried through reductions but never pivoted on,
 * which turns the echelon into an exact linear-combination solver.
 */
class FractionFreeEchelon {
public:
    explicit FractionFreeEchelon(int cols) : cols_(cols) {}

    bool addRow(SparseIntRow row);       // true iff the rank grew
    bool addRow(const SparseRatRow& row);

    int rank() const { return static_cast<int>(rows_.size()); }
    int cols() const { return cols_; }
    const SparseIntRow& lastReduced() const { return last_; }
    const std::map<int, SparseIntRow>& pivotRows() const { return rows_; }

    // Canonical nullspace basis of the structural columns: one vector per
    // free column (ascending), unit at that free column and zero at all other
    // free columns. Requires that no bookkeeping columns were used.
    std::vector<std::vector<Rational>> nullspaceBasis() const;

private:
    void reduce(SparseIntRow& row) const;

    int cols_;
    std::map<int, SparseIntRow> rows_; // pivot column -> row
    SparseIntRow last_;
};

SparseIntRow toIntegerRow(const SparseRatRow& row);

// Coefficients c with target = sum c_i basis_i, or nullopt. Rows are vectors
// over a common index space of dimension keys.
std::optional<std::vector<Rational>> solveCombination(
    int keys, const std::vector<SparseRatRow>& basis, const SparseRatRow& target);

int ratRank(const RatMatrix& a);
// Columns span the kernel of a (a * v = 0), canonical form as above.
RatMatrix ratNullspace(const RatMatrix& a);

// Plain-loop exact products (Eigen expression templates trip over the
// multiprecision scalar's converting constructors).
RatMatrix ratMul(const RatMatrix& a, const RatMatrix& b);
RatVector ratApply(const RatMatrix& a, const RatVector& v);

// Field Gauss-Jordan over rational functions; throws MathDomainError when
// the matrix is symbolically singular.
RfMatrix rfInverse(const RfMatrix& a);
RationalFunction rfDeterminant(const RfMatrix& a);

} // namespace geoflow

#endif
