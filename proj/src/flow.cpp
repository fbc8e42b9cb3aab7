#include <geoflow/flow.hpp>

namespace geoflow {

namespace {

struct FlowData {
    MomentumPolynomial h;
    std::vector<MomentumPolynomial> dhdx;
    std::vector<MomentumPolynomial> dhdp;

    explicit FlowData(const ChartPtr& chart) : h(chart) {
        const std::size_t n = chart->dim();
        const RfMatrix& ginv = chart->inverseMetric();
        const Rational half(1, 2);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                if (ginv(i, j).isZero()) continue;
                Exponents e(n, 0u);
                e[i] += 1;
                e[j] += 1;
                Rational w = (i == j) ? half : Rational(1);
                h.addTerm(e, ginv(i, j).scaled(w));
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            dhdx.push_back(h.partialCoord(i));
            dhdp.push_back(h.partialMomentum(i));
        }
    }
};

const FlowData& flowData(const ChartPtr& chart) {
    {
        std::lock_guard<std::mutex> lock(chart->cacheMutex);
        if (chart->flowCache) return *static_cast<const FlowData*>(chart->flowCache.get());
    }
    // Built outside the lock: the constructor itself takes the cache mutex
    // through inverseMetric().
    auto data = std::make_shared<const FlowData>(chart);
    std::lock_guard<std::mutex> lock(chart->cacheMutex);
    if (!chart->flowCache) chart->flowCache = std::move(data);
    return *static_cast<const FlowData*>(chart->flowCache.get());
}

} // namespace

const MomentumPolynomial& hamiltonian(const ChartPtr& chart) {
    return flowData(chart).h;
}

const MomentumPolynomial& hamiltonianCoordPartial(const ChartPtr& chart, std::size_t i) {
    return flowData(chart).dhdx[i];
}

const MomentumPolynomial& hamiltonianMomentumPartial(const ChartPtr& chart, std::size_t i) {
    return flowData(chart).dhdp[i];
}

MomentumPolynomial poissonBracket(const MomentumPolynomial& f, const MomentumPolynomial& g) {
    f.requireSameChart(g);
    const std::size_t n = f.chart()->dim();
    MomentumPolynomial r(f.chart());
    for (std::size_t i = 0; i < n; ++i) {
        MomentumPolynomial dfp = f.partialMomentum(i);
        if (!dfp.isZero()) {
            MomentumPolynomial dgx = g.partialCoord(i);
            if (!dgx.isZero()) r += dfp * dgx;
        }
        MomentumPolynomial dfx = f.partialCoord(i);
        if (!dfx.isZero()) {
            MomentumPolynomial dgp = g.partialMomentum(i);
            if (!dgp.isZero()) r += (-dfx) * dgp;
        }
    }
    return r;
}

MomentumPolynomial applyH(const MomentumPolynomial& f) {
    const FlowData& fd = flowData(f.chart());
    const std::size_t n = f.chart()->dim();
    MomentumPolynomial r(f.chart());
    for (std::size_t i = 0; i < n; ++i) {
        MomentumPolynomial dfx = f.partialCoord(i);
        if (!dfx.isZero() && !fd.dhdp[i].isZero()) r += fd.dhdp[i] * dfx;
        MomentumPolynomial dfp = f.partialMomentum(i);
        if (!dfp.isZero() && !fd.dhdx[i].isZero()) r += (-fd.dhdx[i]) * dfp;
    }
    return r;
}

MomentumPolynomial iterateH(const MomentumPolynomial& f, int k) {
    if (k < 0) throw std::logic_error("iterateH needs k >= 0");
    MomentumPolynomial r = f;
    for (int i = 0; i < k && !r.isZero(); ++i) r = applyH(r);
    return r;
}

bool isIntegral(const MomentumPolynomial& f) {
    return applyH(f).isZero();
}

std::optional<int> ladderDegree(const MomentumPolynomial& f, int kMax) {
    MomentumPolynomial r = f;
    for (int k = 1; k <= kMax; ++k) {
        r = applyH(r);
        if (r.isZero()) return k;
    }
    return std::nullopt;
}

LadderElement LadderElement::certify(MomentumPolynomial f, int kMax) {
    auto deg = f.homogeneousDegree();
    if (!deg) throw MathDomainError("ladder elements must be momentum-homogeneous and nonzero");
    auto k = ladderDegree(f, kMax);
    if (!k)
        throw MathDomainError("H^k f does not vanish for k <= " + std::to_string(kMax));
    LadderElement e{std::move(f), *k, *deg};
    return e;
}

} // namespace geoflow
