#ifndef GEOFLOW_IO_HPP
#define GEOFLOW_IO_HPP

#include <geoflow/product.hpp>

namespace geoflow {

/*
 * On-disk format: JSON with expression strings for all exact data.
 *
 * Single chart:
 *   { "name": "...", "coordinates": ["r","theta","z"], "domain": "r > 0",
 *     "metric_lower": [["1"], ["0","r^2/(1+r^2)"], ["0","0","1/(1+r^2)"]],
 *     "tensors": { "Omega": { "rank": 1, "components": { "r": "r", "z": "..." } } },
 *     "polynomials": { "F": { "terms": [ { "momenta": {"p_r": 1}, "coeff": "r" } ] } },
 *     "ansatz": { "coeff_degree": 2, "denominator": "...", "coeff_vars": ["r","z"] } }
 *
 * Product of two charts:
 *   { "name": "...", "product": { "factor1": { ...chart... }, "factor2": { ... } },
 *     "tensors": ..., "polynomials": ... }   // objects live on the joint chart
 */
struct MetricFile {
    std::string name;
    ChartPtr chart; // the chart, or the joint chart for products
    std::optional<ProductMetric> product;

    std::map<std::string, SymmetricCotensor> tensors;
    std::map<std::string, MomentumPolynomial> polynomials;
    std::optional<AnsatzSpec> ansatz;

    // Factor-level named objects and hints (products only).
    std::map<std::string, SymmetricCotensor> tensors1, tensors2;
    std::map<std::string, MomentumPolynomial> polys1, polys2;
    std::optional<AnsatzSpec> ansatz1, ansatz2;

    bool isProduct() const { return product.has_value(); }

    // Named object as a momentum polynomial: polynomials and tensors (via
    // index raising) from every section, plus "H" for the Hamiltonian.
    MomentumPolynomial lookupPolynomial(const std::string& name) const;
    // Factor-chart object for composition inputs.
    MomentumPolynomial lookupFactorPolynomial(int factor, const std::string& name) const;
};

MetricFile loadMetricFile(const std::string& jsonText);

// Objects-only file ({"tensors": ..., "polynomials": ...}) parsed against an
// existing chart.
void loadObjectsInto(MetricFile& target, const std::string& jsonText);

// Serialized product file for the `product` CLI command: factor tensors are
// carried over (renamed when the coordinates were renamed).
std::string productFileJson(const MetricFile& f1, const MetricFile& f2, bool autoRename);

struct ValidationReport {
    std::string name;
    std::size_t coordinates = 0;
    bool isProduct = false;
    std::size_t tensorCount = 0;
    std::size_t polynomialCount = 0;
    std::string toString() const;
};

// Parses and checks every invariant (symmetry, nondegeneracy, component
// expressions); throws on failure.
ValidationReport validateMetricFile(const std::string& jsonText);

} // namespace geoflow

#endif
