#ifndef GEOFLOW_GEOMETRY_HPP
#define GEOFLOW_GEOMETRY_HPP

#include <mutex>
#include <optional>

#include <geoflow/exact_linalg.hpp>

namespace geoflow {

class MetricChart;
using ChartPtr = std::shared_ptr<const MetricChart>;
class MomentumPolynomial;
class ChristoffelSymbols;

/*
 * Coordinate chart with an exact symmetric metric. Immutable; derived data
 * (inverse metric, Christoffel symbols, flow data) is memoized behind a
 * mutex, so charts can be shared across threads.
 */
class MetricChart : public std::enable_shared_from_this<MetricChart> {
public:
    // g must be symmetric with det(g) not identically zero.
    static ChartPtr create(std::string name, VarListPtr coords, RfMatrix g,
                           std::string domainNote = "");

    const std::string& name() const { return name_; }
    const VarList& coords() const { return *coords_; }
    const VarListPtr& coordsPtr() const { return coords_; }
    std::size_t dim() const { return coords_->size(); }
    const RfMatrix& metric() const { return g_; }
    const std::string& domainNote() const { return domainNote_; }

    const RfMatrix& inverseMetric() const;
    const ChristoffelSymbols& christoffel() const;

    std::string momentumName(std::size_t i) const { return "p_" + (*coords_)[i]; }

    bool sameAs(const MetricChart& o) const;
    // True when o is this chart with coordinates renamed positionally.
    bool isRenamingOf(const MetricChart& o) const;

    // Opaque per-chart memo slot used by the flow module.
    mutable std::mutex cacheMutex;
    mutable std::shared_ptr<const void> flowCache;

private:
    MetricChart(std::string name, VarListPtr coords, RfMatrix g, std::string domainNote);

    std::string name_;
    VarListPtr coords_;
    RfMatrix g_;
    std::string domainNote_;

    mutable std::optional<RfMatrix> ginv_;
    mutable std::shared_ptr<const ChristoffelSymbols> gamma_;
};

inline RfMatrix inverseMetric(const MetricChart& m) { return m.inverseMetric(); }

// Levi-Civita connection coefficients, symmetric in the lower index pair.
class ChristoffelSymbols {
public:
    ChristoffelSymbols(ChartPtr chart, std::vector<RationalFunction> table);
    static ChristoffelSymbols compute(const ChartPtr& chart);

    const RationalFunction& get(std::size_t upper, std::size_t i, std::size_t j) const;
    const ChartPtr& chart() const { return chart_; }
    std::string toString() const;

private:
    std::size_t slot(std::size_t upper, std::size_t i, std::size_t j) const;

    ChartPtr chart_;
    std::vector<RationalFunction> table_; // upper * n(n+1)/2 entries, i <= j
};

/*
 * Symmetric covariant tensor stored on sorted index tuples.
 */
class SymmetricCotensor {
public:
    using IndexTuple = std::vector<int>; // ascending

    SymmetricCotensor(ChartPtr chart, int rank);

    const ChartPtr& chart() const { return chart_; }
    int rank() const { return rank_; }
    const std::map<IndexTuple, RationalFunction>& components() const { return comps_; }

    RationalFunction get(IndexTuple idx) const; // any index order
    void set(IndexTuple idx, RationalFunction value);
    void add(IndexTuple idx, const RationalFunction& value);

    bool isZero() const { return comps_.empty(); }
    SymmetricCotensor operator+(const SymmetricCotensor& o) const;
    SymmetricCotensor operator-(const SymmetricCotensor& o) const;
    SymmetricCotensor scaled(const Rational& c) const;
    bool operator==(const SymmetricCotensor& o) const;

    std::string toString() const;

private:
    ChartPtr chart_;
    int rank_;
    std::map<IndexTuple, RationalFunction> comps_;
};

// Metric as a rank-2 symmetric cotensor.
SymmetricCotensor metricTensor(const ChartPtr& chart);

// Symmetrized tensor product, projector normalization: the momentum
// polynomial of the product is the product of the momentum polynomials.
SymmetricCotensor symProduct(const SymmetricCotensor& a, const SymmetricCotensor& b);

// Full symmetrization of the covariant derivative (average over all
// permutations). Zero exactly when K is a Killing tensor.
SymmetricCotensor killingOperator(const SymmetricCotensor& k);

// Index raising/lowering correspondence with momentum polynomials.
MomentumPolynomial tensorToPoly(const SymmetricCotensor& k);
SymmetricCotensor polyToTensor(const MomentumPolynomial& f);

// Enumerates ascending index tuples of the given length over {0..n-1}.
std::vector<std::vector<int>> sortedTuples(int n, int length);

} // namespace geoflow

#endif
