#include <geoflow/momentum_poly.hpp>

#include <algorithm>
#include <functional>
#include <sstream>

namespace geoflow {

MetricChart::MetricChart(std::string name, VarListPtr coords, RfMatrix g, std::string domainNote)
    : name_(std::move(name)), coords_(std::move(coords)), g_(std::move(g)),
      domainNote_(std::move(domainNote)) {}

ChartPtr MetricChart::create(std::string name, VarListPtr coords, RfMatrix g,
                             std::string domainNote) {
    const auto n = static_cast<Eigen::Index>(coords->size());
    if (n < 1) throw MathDomainError("chart needs at least one coordinate");
    if (g.rows() != n || g.cols() != n)
        throw MathDomainError("metric dimension does not match coordinate count");
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (g(i, j) != g(j, i)) throw MathDomainError("metric is not symmetric");
    if (rfDeterminant(g).isZero())
        throw MathDomainError("metric of chart '" + name + "' is symbolically singular");
    return ChartPtr(new MetricChart(std::move(name), std::move(coords), std::move(g),
                                    std::move(domainNote)));
}

const RfMatrix& MetricChart::inverseMetric() const {
    std::lock_guard<std::mutex> lock(cacheMutex);
    if (!ginv_) ginv_ = rfInverse(g_);
    return *ginv_;
}

const ChristoffelSymbols& MetricChart::christoffel() const {
    {
        std::lock_guard<std::mutex> lock(cacheMutex);
        if (gamma_) return *gamma_;
    }
    auto computed = std::make_shared<const ChristoffelSymbols>(
        ChristoffelSymbols::compute(shared_from_this()));
    std::lock_guard<std::mutex> lock(cacheMutex);
    if (!gamma_) gamma_ = std::move(computed);
    return *gamma_;
}

bool MetricChart::sameAs(const MetricChart& o) const {
    if (this == &o) return true;
    if (*coords_ != *o.coords_) return false;
    for (Eigen::Index i = 0; i < g_.rows(); ++i)
        for (Eigen::Index j = 0; j < g_.cols(); ++j)
            if (g_(i, j) != o.g_(i, j)) return false;
    return true;
}

bool MetricChart::isRenamingOf(const MetricChart& o) const {
    if (dim() != o.dim()) return false;
    for (Eigen::Index i = 0; i < g_.rows(); ++i)
        for (Eigen::Index j = 0; j < g_.cols(); ++j)
            if (g_(i, j) != o.g_(i, j).renamedTo(coords_)) return false;
    return true;
}

// ---- Christoffel symbols ---------------------------------------------------

ChristoffelSymbols::ChristoffelSymbols(ChartPtr chart, std::vector<RationalFunction> table)
    : chart_(std::move(chart)), table_(std::move(table)) {}

std::size_t ChristoffelSymbols::slot(std::size_t upper, std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    const std::size_t n = chart_->dim();
    // position of (i, j), i <= j, in row-major upper triangle
    std::size_t tri = i * n - i * (i + 1) / 2 + j;
    return upper * (n * (n + 1) / 2) + tri;
}

const RationalFunction& ChristoffelSymbols::get(std::size_t upper, std::size_t i,
                                                std::size_t j) const {
    return table_[slot(upper, i, j)];
}

ChristoffelSymbols ChristoffelSymbols::compute(const ChartPtr& chart) {
    const std::size_t n = chart->dim();
    const RfMatrix& g = chart->metric();
    const RfMatrix& ginv = chart->inverseMetric();

    // Precompute partials of the metric.
    std::vector<RfMatrix> dg(n);
    for (std::size_t k = 0; k < n; ++k) {
        dg[k].resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                dg[k](i, j) = g(i, j).partial(k);
    }

    std::vector<RationalFunction> table(n * (n * (n + 1) / 2),
                                        RationalFunction::zero(chart->coordsPtr()));
    ChristoffelSymbols cs(chart, std::move(table));
    const Rational half(1, 2);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                RationalFunction acc = RationalFunction::zero(chart->coordsPtr());
                for (std::size_t l = 0; l < n; ++l) {
                    if (ginv(k, l).isZero()) continue;
                    RationalFunction inner = dg[i](j, l) + dg[j](i, l) - dg[l](i, j);
                    if (inner.isZero()) continue;
                    acc = acc + ginv(k, l) * inner;
                }
                cs.table_[cs.slot(k, i, j)] = acc.scaled(half);
            }
        }
    }
    return cs;
}

std::string ChristoffelSymbols::toString() const {
    const std::size_t n = chart_->dim();
    const VarList& x = chart_->coords();
    std::ostringstream out;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                const RationalFunction& v = get(k, i, j);
                if (v.isZero()) continue;
                out << "Gamma[" << x[k] << "][" << x[i] << "," << x[j] << "] = "
                    << v.toString() << "\n";
            }
    std::string s = out.str();
    return s.empty() ? "all coefficients vanish\n" : s;
}

// ---- symmetric cotensors ---------------------------------------------------

SymmetricCotensor::SymmetricCotensor(ChartPtr chart, int rank)
    : chart_(std::move(chart)), rank_(rank) {
    if (rank < 0) throw std::logic_error("negative tensor rank");
}

RationalFunction SymmetricCotensor::get(IndexTuple idx) const {
    std::sort(idx.begin(), idx.end());
    auto it = comps_.find(idx);
    if (it == comps_.end()) return RationalFunction::zero(chart_->coordsPtr());
    return it->second;
}

void SymmetricCotensor::set(IndexTuple idx, RationalFunction value) {
    if (static_cast<int>(idx.size()) != rank_)
        throw std::logic_error("index tuple length does not match tensor rank");
    std::sort(idx.begin(), idx.end());
    if (value.isZero())
        comps_.erase(idx);
    else
        comps_[std::move(idx)] = std::move(value);
}

void SymmetricCotensor::add(IndexTuple idx, const RationalFunction& value) {
    if (value.isZero()) return;
    std::sort(idx.begin(), idx.end());
    auto it = comps_.find(idx);
    if (it == comps_.end()) {
        comps_.emplace(std::move(idx), value);
    } else {
        it->second = it->second + value;
        if (it->second.isZero()) comps_.erase(it);
    }
}

SymmetricCotensor SymmetricCotensor::operator+(const SymmetricCotensor& o) const {
    if (rank_ != o.rank_) throw std::logic_error("tensor rank mismatch");
    SymmetricCotensor r(*this);
    for (const auto& [idx, v] : o.comps_) r.add(idx, v);
    return r;
}

SymmetricCotensor SymmetricCotensor::operator-(const SymmetricCotensor& o) const {
    return *this + o.scaled(Rational(-1));
}

SymmetricCotensor SymmetricCotensor::scaled(const Rational& c) const {
    SymmetricCotensor r(chart_, rank_);
    if (c == 0) return r;
    for (const auto& [idx, v] : comps_) r.comps_.emplace(idx, v.scaled(c));
    return r;
}

bool SymmetricCotensor::operator==(const SymmetricCotensor& o) const {
    return rank_ == o.rank_ && comps_ == o.comps_;
}

std::string SymmetricCotensor::toString() const {
    if (comps_.empty()) return "0\n";
    const VarList& x = chart_->coords();
    std::ostringstream out;
    for (const auto& [idx, v] : comps_) {
        out << "K[";
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (i) out << ",";
            out << x[static_cast<std::size_t>(idx[i])];
        }
        out << "] = " << v.toString() << "\n";
    }
    return out.str();
}

SymmetricCotensor metricTensor(const ChartPtr& chart) {
    SymmetricCotensor t(chart, 2);
    const std::size_t n = chart->dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            t.set({static_cast<int>(i), static_cast<int>(j)}, chart->metric()(i, j));
    return t;
}

std::vector<std::vector<int>> sortedTuples(int n, int length) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(length), 0);
    // counts combinations with repetition
    std::function<void(int, int)> rec = [&](int pos, int minIdx) {
        if (pos == length) {
            out.push_back(cur);
            return;
        }
        for (int i = minIdx; i < n; ++i) {
            cur[static_cast<std::size_t>(pos)] = i;
            rec(pos + 1, i);
        }
    };
    rec(0, 0);
    return out;
}

SymmetricCotensor symProduct(const SymmetricCotensor& a, const SymmetricCotensor& b) {
    if (a.chart() != b.chart() && !a.chart()->sameAs(*b.chart()))
        throw ChartMismatchError("symmetric product across different charts");
    const int ra = a.rank(), rb = b.rank(), d = ra + rb;
    const int n = static_cast<int>(a.chart()->dim());
    SymmetricCotensor r(a.chart(), d);

    // positions 0..d-1 choose ra, precomputed once
    std::vector<std::vector<int>> picks;
    std::vector<int> sel;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(sel.size()) == ra) {
            picks.push_back(sel);
            return;
        }
        for (int i = start; i <= d - (ra - static_cast<int>(sel.size())); ++i) {
            sel.push_back(i);
            rec(i + 1);
            sel.pop_back();
        }
    };
    rec(0);

    const Rational weight(1, static_cast<long>(picks.size()));
    for (const auto& tuple : sortedTuples(n, d)) {
        RationalFunction acc = RationalFunction::zero(a.chart()->coordsPtr());
        for (const auto& pick : picks) {
            std::vector<int> ia, ib;
            ia.reserve(static_cast<std::size_t>(ra));
            ib.reserve(static_cast<std::size_t>(rb));
            std::size_t pi = 0;
            for (int pos = 0; pos < d; ++pos) {
                if (pi < pick.size() && pick[pi] == pos) {
                    ia.push_back(tuple[static_cast<std::size_t>(pos)]);
                    ++pi;
                } else {
                    ib.push_back(tuple[static_cast<std::size_t>(pos)]);
                }
            }
            RationalFunction va = a.get(std::move(ia));
            if (va.isZero()) continue;
            RationalFunction vb = b.get(std::move(ib));
            if (vb.isZero()) continue;
            acc = acc + va * vb;
        }
        if (!acc.isZero()) r.set(tuple, acc.scaled(weight));
    }
    return r;
}

SymmetricCotensor killingOperator(const SymmetricCotensor& k) {
    const ChartPtr& chart = k.chart();
    const ChristoffelSymbols& gamma = chart->christoffel();
    const int n = static_cast<int>(chart->dim());
    const int d = k.rank();
    SymmetricCotensor r(chart, d + 1);
    const Rational weight(1, d + 1);

    for (const auto& tuple : sortedTuples(n, d + 1)) {
        RationalFunction acc = RationalFunction::zero(chart->coordsPtr());
        for (int m = 0; m <= d; ++m) {
            const int j = tuple[static_cast<std::size_t>(m)];
            std::vector<int> rest;
            rest.reserve(static_cast<std::size_t>(d));
            for (int t = 0; t <= d; ++t)
                if (t != m) rest.push_back(tuple[static_cast<std::size_t>(t)]);
            // nabla_j K_rest
            RationalFunction term = k.get(rest).partial(static_cast<std::size_t>(j));
            for (std::size_t t = 0; t < rest.size(); ++t) {
                for (int l = 0; l < n; ++l) {
                    const RationalFunction& G = gamma.get(static_cast<std::size_t>(l),
                                                          static_cast<std::size_t>(j),
                                                          static_cast<std::size_t>(rest[t]));
                    if (G.isZero()) continue;
                    std::vector<int> swapped(rest);
                    swapped[t] = l;
                    RationalFunction kv = k.get(std::move(swapped));
                    if (kv.isZero()) continue;
                    term = term - G * kv;
                }
            }
            acc = acc + term;
        }
        if (!acc.isZero()) r.set(tuple, acc.scaled(weight));
    }
    return r;
}

// ---- tensor <-> momentum polynomial ---------------------------------------

namespace {

// Dense full tensor of rank d over n indices, row-major strides.
struct DenseTensor {
    int n = 0, d = 0;
    std::vector<RationalFunction> data;

    DenseTensor(const ChartPtr& chart, int rank)
        : n(static_cast<int>(chart->dim())), d(rank) {
        std::size_t size = 1;
        for (int i = 0; i < d; ++i) size *= static_cast<std::size_t>(n);
        data.assign(size, RationalFunction::zero(chart->coordsPtr()));
    }

    std::size_t flat(const std::vector<int>& idx) const {
        std::size_t f = 0;
        for (int v : idx) f = f * static_cast<std::size_t>(n) + static_cast<std::size_t>(v);
        return f;
    }
};

void forEachTuple(int n, int d, const std::function<void(std::vector<int>&)>& fn) {
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    while (true) {
        fn(idx);
        int pos = d - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - 1) {
            idx[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
    }
}

// Contract slot `slot` with the matrix m (raising or lowering).
DenseTensor contract(const DenseTensor& t, const RfMatrix& m, int slot, const ChartPtr& chart) {
    DenseTensor r(chart, t.d);
    forEachTuple(t.n, t.d, [&](std::vector<int>& idx) {
        RationalFunction acc = RationalFunction::zero(chart->coordsPtr());
        std::vector<int> src(idx);
        for (int b = 0; b < t.n; ++b) {
            const RationalFunction& w = m(idx[static_cast<std::size_t>(slot)], b);
            if (w.isZero()) continue;
            src[static_cast<std::size_t>(slot)] = b;
            const RationalFunction& v = t.data[t.flat(src)];
            if (v.isZero()) continue;
            acc = acc + w * v;
        }
        r.data[r.flat(idx)] = acc;
    });
    return r;
}

Rational multinomial(int d, const Exponents& e) {
    Integer num(1);
    for (int i = 2; i <= d; ++i) num *= i;
    Integer den(1);
    for (unsigned k : e)
        for (unsigned i = 2; i <= k; ++i) den *= i;
    return Rational(num, den);
}

} // namespace

MomentumPolynomial tensorToPoly(const SymmetricCotensor& k) {
    const ChartPtr& chart = k.chart();
    const int n = static_cast<int>(chart->dim());
    const int d = k.rank();
    if (d == 0) return MomentumPolynomial::coefficient(chart, k.get({}));

    DenseTensor full(chart, d);
    forEachTuple(n, d, [&](std::vector<int>& idx) {
        full.data[full.flat(idx)] = k.get(idx);
    });
    const RfMatrix& ginv = chart->inverseMetric();
    for (int s = 0; s < d; ++s) full = contract(full, ginv, s, chart);

    MomentumPolynomial f(chart);
    forEachTuple(n, d, [&](std::vector<int>& idx) {
        const RationalFunction& v = full.data[full.flat(idx)];
        if (v.isZero()) return;
        Exponents e(static_cast<std::size_t>(n), 0u);
        for (int i : idx) ++e[static_cast<std::size_t>(i)];
        f.addTerm(e, v);
    });
    return f;
}

SymmetricCotensor polyToTensor(const MomentumPolynomial& f) {
    const ChartPtr& chart = f.chart();
    const int n = static_cast<int>(chart->dim());
    auto deg = f.homogeneousDegree();
    if (!f.isZero() && !deg)
        throw MathDomainError("polyToTensor requires a momentum-homogeneous polynomial");
    const int d = f.isZero() ? 0 : *deg;
    if (d == 0) {
        SymmetricCotensor t(chart, 0);
        if (!f.isZero()) t.set({}, f.terms().begin()->second);
        return t;
    }

    DenseTensor up(chart, d);
    for (const auto& [e, c] : f.terms()) {
        std::vector<int> tuple;
        for (int i = 0; i < n; ++i)
            for (unsigned r = 0; r < e[static_cast<std::size_t>(i)]; ++r) tuple.push_back(i);
        RationalFunction v = c.scaled(Rational(1) / multinomial(d, e));
        // fill every arrangement of the multiset
        std::vector<int> perm(tuple);
        std::sort(perm.begin(), perm.end());
        do {
            up.data[up.flat(perm)] = v;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    for (int s = 0; s < d; ++s) up = contract(up, chart->metric(), s, chart);

    SymmetricCotensor t(chart, d);
    for (const auto& tuple : sortedTuples(n, d)) {
        const RationalFunction& v = up.data[up.flat(tuple)];
        if (!v.isZero()) t.set(tuple, v);
    }
    return t;
}

} // namespace geoflow
