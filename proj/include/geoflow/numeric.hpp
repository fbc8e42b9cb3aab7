#ifndef GEOFLOW_NUMERIC_HPP
#define GEOFLOW_NUMERIC_HPP

#include <random>

#include <geoflow/flow.hpp>

namespace geoflow {

struct FlowState {
    Eigen::VectorXd x;
    Eigen::VectorXd p;
    double s = 0.0;
};

struct Trajectory {
    std::vector<FlowState> states;
    bool truncated = false;      // left the chart domain (pole guard)
    double energyDrift = 0.0;    // relative drift of H along the output
};

struct IntegrateOptions {
    double poleEps = 1e-12;
};

// Fast repeated evaluation of a momentum polynomial at double states.
class CompiledPoly {
public:
    explicit CompiledPoly(const MomentumPolynomial& f, double poleEps = 1e-12);
    double eval(const double* x, const double* p) const;
    bool hasPoleAt(const double* x) const;

private:
    struct Mono {
        double c;
        std::vector<std::pair<int, unsigned>> powers;
    };
    struct Term {
        std::vector<Mono> num, den; // den empty means 1
        std::vector<std::pair<int, unsigned>> momenta;
    };
    static double evalMonos(const std::vector<Mono>& ms, const double* x);

    std::vector<Term> terms_;
    double poleEps_;
};

// Classical fixed-step RK4 for the Hamiltonian system of the chart. The
// trajectory is truncated with a flag if a coefficient pole is approached.
Trajectory integrateGeodesic(const ChartPtr& chart, FlowState init, double sMax, double step,
                             const IntegrateOptions& opts = {});

// Scales the momenta so that H(x, p) = 1/2.
FlowState normalizeEnergy(const ChartPtr& chart, FlowState state);

std::vector<double> evalAlong(const MomentumPolynomial& f, const Trajectory& traj,
                              double poleEps = 1e-12);

// (max - min) / max(1, |mean|) over the samples.
double relativeVariation(const std::vector<double>& values);

struct FitReport {
    int fittedDegree = 0;
    double residualRms = 0.0;
    Eigen::VectorXd coefficients; // ascending powers of s
};

// Least-squares polynomial fits of degree 0..kMax-1; fittedDegree is the
// smallest degree whose RMS residual crosses the tolerance (kMax-1 if none).
FitReport fitPolyInS(const std::vector<double>& values, const std::vector<double>& sGrid,
                     int kMax, double tolerance = 1e-6);

// Deterministic random states inside a coordinate box, unit-energy normalized.
FlowState randomUnitEnergyState(const ChartPtr& chart, std::mt19937_64& rng,
                                const std::vector<std::pair<double, double>>& box);

struct QuantityReport {
    int trajectoryId = 0;
    std::string quantity;
    double min = 0.0;
    double max = 0.0;
    double relDrift = 0.0;
    int fittedDegree = 0;
    double residualRms = 0.0;
};

std::string reportCsv(const std::vector<QuantityReport>& rows);

} // namespace geoflow

#endif
