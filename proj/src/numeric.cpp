#include <geoflow/numeric.hpp>

#include <cmath>
#include <sstream>

namespace geoflow {

// ---- compiled evaluation -----------------------------------------------------

CompiledPoly::CompiledPoly(const MomentumPolynomial& f, double poleEps) : poleEps_(poleEps) {
    auto compileMonos = [](const MultiPoly& p) {
        std::vector<Mono> out;
        for (const auto& [e, c] : p.terms()) {
            Mono m;
            m.c = toDouble(c);
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i]) m.powers.emplace_back(static_cast<int>(i), e[i]);
            out.push_back(std::move(m));
        }
        return out;
    };
    for (const auto& [e, c] : f.terms()) {
        Term t;
        t.num = compileMonos(c.num());
        if (!c.den().isConstant()) t.den = compileMonos(c.den());
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i]) t.momenta.emplace_back(static_cast<int>(i), e[i]);
        terms_.push_back(std::move(t));
    }
}

double CompiledPoly::evalMonos(const std::vector<Mono>& ms, const double* x) {
    double acc = 0.0;
    for (const auto& m : ms) {
        double v = m.c;
        for (const auto& [i, k] : m.powers) {
            double b = x[i];
            for (unsigned r = 0; r < k; ++r) v *= b;
        }
        acc += v;
    }
    return acc;
}

bool CompiledPoly::hasPoleAt(const double* x) const {
    for (const auto& t : terms_) {
        if (t.den.empty()) continue;
        if (std::abs(evalMonos(t.den, x)) < poleEps_) return true;
    }
    return false;
}

double CompiledPoly::eval(const double* x, const double* p) const {
    double acc = 0.0;
    for (const auto& t : terms_) {
        double v = evalMonos(t.num, x);
        if (!t.den.empty()) {
            double d = evalMonos(t.den, x);
            if (std::abs(d) < poleEps_)
                throw PoleError("coefficient pole during numeric evaluation");
            v /= d;
        }
        for (const auto& [i, k] : t.momenta) {
            double b = p[i];
            for (unsigned r = 0; r < k; ++r) v *= b;
        }
        acc += v;
    }
    return acc;
}

// ---- geodesic integration -----------------------------------------------------

namespace {

struct CompiledSystem {
    std::vector<CompiledPoly> dxds; // dH/dp_i
    std::vector<CompiledPoly> dpds; // dH/dx_i (to be negated)
    CompiledPoly h;

    CompiledSystem(const ChartPtr& chart, double poleEps)
        : h(hamiltonian(chart), poleEps) {
        for (std::size_t i = 0; i < chart->dim(); ++i) {
            dxds.emplace_back(hamiltonianMomentumPartial(chart, i), poleEps);
            dpds.emplace_back(hamiltonianCoordPartial(chart, i), poleEps);
        }
    }

    void rhs(const Eigen::VectorXd& x, const Eigen::VectorXd& p, Eigen::VectorXd& dx,
             Eigen::VectorXd& dp) const {
        for (std::size_t i = 0; i < dxds.size(); ++i) {
            dx(static_cast<Eigen::Index>(i)) = dxds[i].eval(x.data(), p.data());
            dp(static_cast<Eigen::Index>(i)) = -dpds[i].eval(x.data(), p.data());
        }
    }
};

} // namespace

Trajectory integrateGeodesic(const ChartPtr& chart, FlowState init, double sMax, double step,
                             const IntegrateOptions& opts) {
    if (step <= 0) throw std::invalid_argument("step must be positive");
    const auto n = static_cast<Eigen::Index>(chart->dim());
    if (init.x.size() != n || init.p.size() != n)
        throw std::invalid_argument("initial state has wrong dimension");

    CompiledSystem sys(chart, opts.poleEps);
    Trajectory traj;
    const auto steps = static_cast<std::size_t>(std::llround(sMax / step));
    traj.states.reserve(steps + 1);
    traj.states.push_back(init);

    Eigen::VectorXd k1x(n), k1p(n), k2x(n), k2p(n), k3x(n), k3p(n), k4x(n), k4p(n);
    Eigen::VectorXd xt(n), pt(n);
    FlowState cur = init;
    const double h0 = sys.h.eval(cur.x.data(), cur.p.data());
    double hMin = h0, hMax = h0;

    for (std::size_t i = 0; i < steps; ++i) {
        try {
            sys.rhs(cur.x, cur.p, k1x, k1p);
            xt = cur.x + 0.5 * step * k1x;
            pt = cur.p + 0.5 * step * k1p;
            sys.rhs(xt, pt, k2x, k2p);
            xt = cur.x + 0.5 * step * k2x;
            pt = cur.p + 0.5 * step * k2p;
            sys.rhs(xt, pt, k3x, k3p);
            xt = cur.x + step * k3x;
            pt = cur.p + step * k3p;
            sys.rhs(xt, pt, k4x, k4p);
        } catch (const PoleError&) {
            traj.truncated = true;
            break;
        }
        cur.x += (step / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        cur.p += (step / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        cur.s += step;
        if (sys.h.hasPoleAt(cur.x.data())) {
            traj.truncated = true;
            break;
        }
        double h = sys.h.eval(cur.x.data(), cur.p.data());
        hMin = std::min(hMin, h);
        hMax = std::max(hMax, h);
        traj.states.push_back(cur);
    }
    traj.energyDrift = (hMax - hMin) / std::max(1.0, std::abs(h0));
    return traj;
}

FlowState normalizeEnergy(const ChartPtr& chart, FlowState state) {
    CompiledPoly h(hamiltonian(chart));
    double e = h.eval(state.x.data(), state.p.data());
    if (e <= 0) throw MathDomainError("cannot normalize a state with non-positive energy");
    state.p *= 1.0 / std::sqrt(2.0 * e);
    return state;
}

std::vector<double> evalAlong(const MomentumPolynomial& f, const Trajectory& traj,
                              double poleEps) {
    CompiledPoly cf(f, poleEps);
    std::vector<double> out;
    out.reserve(traj.states.size());
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        try {
            out.push_back(cf.eval(traj.states[i].x.data(), traj.states[i].p.data()));
        } catch (const PoleError&) {
            throw PoleError("pole at trajectory sample " + std::to_string(i));
        }
    }
    return out;
}

double relativeVariation(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double mn = values.front(), mx = values.front(), sum = 0.0;
    for (double v : values) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
        sum += v;
    }
    double mean = sum / static_cast<double>(values.size());
    return (mx - mn) / std::max(1.0, std::abs(mean));
}

FitReport fitPolyInS(const std::vector<double>& values, const std::vector<double>& sGrid,
                     int kMax, double tolerance) {
    if (values.size() != sGrid.size()) throw std::invalid_argument("values/grid size mismatch");
    if (kMax < 1) throw std::invalid_argument("kMax must be >= 1");
    const auto m = static_cast<Eigen::Index>(values.size());
    if (m < 2) throw std::invalid_argument("degenerate sample grid");
    double span = 0.0;
    for (double s : sGrid) span = std::max(span, std::abs(s));
    if (span == 0.0) throw std::invalid_argument("degenerate sample grid");

    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) y(i) = values[static_cast<std::size_t>(i)];

    FitReport best;
    for (int deg = 0; deg < kMax; ++deg) {
        Eigen::MatrixXd v(m, deg + 1);
        for (Eigen::Index i = 0; i < m; ++i) {
            double t = sGrid[static_cast<std::size_t>(i)] / span; // conditioning
            double pw = 1.0;
            for (int c = 0; c <= deg; ++c) {
                v(i, c) = pw;
                pw *= t;
            }
        }
        Eigen::VectorXd scaled = v.colPivHouseholderQr().solve(y);
        double rms = std::sqrt((v * scaled - y).squaredNorm() / static_cast<double>(m));
        Eigen::VectorXd coeff(deg + 1);
        double pw = 1.0;
        for (int c = 0; c <= deg; ++c) {
            coeff(c) = scaled(c) / pw;
            pw *= span;
        }
        best.fittedDegree = deg;
        best.residualRms = rms;
        best.coefficients = coeff;
        if (rms < tolerance) break;
    }
    return best;
}

FlowState randomUnitEnergyState(const ChartPtr& chart, std::mt19937_64& rng,
                                const std::vector<std::pair<double, double>>& box) {
    const auto n = static_cast<Eigen::Index>(chart->dim());
    if (box.size() != chart->dim()) throw std::invalid_argument("box dimension mismatch");
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    FlowState st;
    st.x.resize(n);
    st.p.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& [lo, hi] = box[static_cast<std::size_t>(i)];
        st.x(i) = lo + (hi - lo) * (0.5 * (unit(rng) + 1.0));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        double v = unit(rng);
        // keep momenta away from zero so conserved quantities are visible
        st.p(i) = v + (v >= 0 ? 0.2 : -0.2);
    }
    return normalizeEnergy(chart, st);
}

std::string reportCsv(const std::vector<QuantityReport>& rows) {
    std::ostringstream out;
    out << "trajectory_id,quantity,min,max,rel_drift,fitted_degree,residual_rms\n";
    out.precision(17);
    for (const auto& r : rows) {
        out << r.trajectoryId << "," << r.quantity << "," << r.min << "," << r.max << ","
            << r.relDrift << "," << r.fittedDegree << "," << r.residualRms << "\n";
    }
    return out.str();
}

} // namespace geoflow
