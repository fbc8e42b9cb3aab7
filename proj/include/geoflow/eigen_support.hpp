#ifndef GEOFLOW_EIGEN_SUPPORT_HPP
#define GEOFLOW_EIGEN_SUPPORT_HPP

#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <geoflow/rational_function.hpp>

namespace Eigen {

// Exact rational functions as an Eigen scalar (storage and ring operations;
// no norms or comparisons).
template <>
struct NumTraits<geoflow::RationalFunction> {
    using Real = geoflow::RationalFunction;
    using NonInteger = geoflow::RationalFunction;
    using Nested = geoflow::RationalFunction;
    using Literal = geoflow::RationalFunction;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 8,
        AddCost = 40,
        MulCost = 40
    };
    static int digits10() { return 0; }
};

} // namespace Eigen

namespace geoflow {

using RatMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RatVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using RfMatrix = Eigen::Matrix<RationalFunction, Eigen::Dynamic, Eigen::Dynamic>;

} // namespace geoflow

#endif
