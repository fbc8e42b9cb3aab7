#include <geoflow/io.hpp>

#include <geoflow/expression.hpp>

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace geoflow {

using nlohmann::json;

namespace {

ChartPtr chartFromJson(const json& j) {
    if (!j.contains("coordinates") || !j["coordinates"].is_array())
        throw ParseError("metric file needs a 'coordinates' array", 0);
    std::vector<std::string> names;
    for (const auto& c : j["coordinates"]) names.push_back(c.get<std::string>());
    VarListPtr coords = makeVars(names);
    const auto n = static_cast<Eigen::Index>(names.size());

    if (!j.contains("metric_lower") || !j["metric_lower"].is_array() ||
        j["metric_lower"].size() != names.size())
        throw ParseError("'metric_lower' must have one row per coordinate", 0);
    RfMatrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k) g(i, k) = RationalFunction::zero(coords);
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto& row = j["metric_lower"][i];
        if (!row.is_array() || row.size() != i + 1)
            throw ParseError("'metric_lower' row " + std::to_string(i) + " needs " +
                                 std::to_string(i + 1) + " entries",
                             0);
        for (std::size_t k = 0; k <= i; ++k) {
            RationalFunction v = parseRationalFunction(row[k].get<std::string>(), coords);
            g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v;
            g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = v;
        }
    }
    std::string domain = j.value("domain", std::string());
    std::string name = j.value("name", std::string("chart"));
    return MetricChart::create(name, coords, std::move(g), domain);
}

SymmetricCotensor tensorFromJson(const json& j, const ChartPtr& chart) {
    if (!j.contains("rank")) throw ParseError("tensor needs a 'rank'", 0);
    const int rank = j["rank"].get<int>();
    SymmetricCotensor t(chart, rank);
    if (rank == 0) {
        if (j.contains("value"))
            t.set({}, parseRationalFunction(j["value"].get<std::string>(), chart->coordsPtr()));
        return t;
    }
    if (!j.contains("components") || !j["components"].is_object())
        throw ParseError("tensor needs a 'components' object", 0);
    for (const auto& [key, expr] : j["components"].items()) {
        std::vector<int> idx;
        std::stringstream ss(key);
        std::string part;
        while (std::getline(ss, part, ',')) {
            auto it = std::find(chart->coords().begin(), chart->coords().end(), part);
            if (it == chart->coords().end())
                throw ParseError("unknown coordinate '" + part + "' in tensor index", 0);
            idx.push_back(static_cast<int>(it - chart->coords().begin()));
        }
        if (static_cast<int>(idx.size()) != rank)
            throw ParseError("tensor component '" + key + "' has wrong index count", 0);
        t.set(std::move(idx),
              parseRationalFunction(expr.get<std::string>(), chart->coordsPtr()));
    }
    return t;
}

MomentumPolynomial polyFromJson(const json& j, const ChartPtr& chart) {
    MomentumPolynomial f(chart);
    if (!j.contains("terms") || !j["terms"].is_array())
        throw ParseError("polynomial needs a 'terms' array", 0);
    for (const auto& term : j["terms"]) {
        Exponents e(chart->dim(), 0u);
        if (term.contains("momenta")) {
            for (const auto& [pname, exp] : term["momenta"].items()) {
                bool found = false;
                for (std::size_t i = 0; i < chart->dim(); ++i) {
                    if (chart->momentumName(i) == pname) {
                        e[i] = exp.get<unsigned>();
                        found = true;
                        break;
                    }
                }
                if (!found) throw ParseError("unknown momentum '" + pname + "'", 0);
            }
        }
        f.addTerm(e, parseRationalFunction(term["coeff"].get<std::string>(),
                                           chart->coordsPtr()));
    }
    return f;
}

std::optional<AnsatzSpec> ansatzFromJson(const json& j, const ChartPtr& chart) {
    if (!j.contains("ansatz")) return std::nullopt;
    const auto& a = j["ansatz"];
    MultiPoly den = MultiPoly::constant(chart->coordsPtr(), Rational(1));
    if (a.contains("denominator")) {
        RationalFunction d =
            parseRationalFunction(a["denominator"].get<std::string>(), chart->coordsPtr());
        if (!d.isPolynomial())
            throw ParseError("ansatz denominator must be a polynomial", 0);
        den = d.num();
    }
    AnsatzSpec spec = AnsatzSpec::make(chart, 1, a.value("coeff_degree", 2), std::move(den));
    if (a.contains("coeff_vars")) {
        std::vector<std::string> vars;
        for (const auto& v : a["coeff_vars"]) vars.push_back(v.get<std::string>());
        spec.coeffVars = std::move(vars);
    }
    return spec;
}

void objectsFromJson(const json& j, const ChartPtr& chart,
                     std::map<std::string, SymmetricCotensor>& tensors,
                     std::map<std::string, MomentumPolynomial>& polys) {
    if (j.contains("tensors")) {
        for (const auto& [name, tj] : j["tensors"].items())
            tensors.emplace(name, tensorFromJson(tj, chart));
    }
    if (j.contains("polynomials")) {
        for (const auto& [name, pj] : j["polynomials"].items())
            polys.emplace(name, polyFromJson(pj, chart));
    }
}

} // namespace

MetricFile loadMetricFile(const std::string& jsonText) {
    json j;
    try {
        j = json::parse(jsonText);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(),
                         static_cast<std::size_t>(e.byte));
    }
    MetricFile f;
    f.name = j.value("name", std::string("unnamed"));
    if (j.contains("product")) {
        const auto& pj = j["product"];
        if (!pj.contains("factor1") || !pj.contains("factor2"))
            throw ParseError("product file needs 'factor1' and 'factor2'", 0);
        ChartPtr c1 = chartFromJson(pj["factor1"]);
        ChartPtr c2 = chartFromJson(pj["factor2"]);
        f.product = productMetric(c1, c2, false);
        f.chart = f.product->joint;
        objectsFromJson(pj["factor1"], f.product->factor1, f.tensors1, f.polys1);
        objectsFromJson(pj["factor2"], f.product->factor2, f.tensors2, f.polys2);
        f.ansatz1 = ansatzFromJson(pj["factor1"], f.product->factor1);
        f.ansatz2 = ansatzFromJson(pj["factor2"], f.product->factor2);
    } else {
        f.chart = chartFromJson(j);
        f.ansatz = ansatzFromJson(j, f.chart);
    }
    objectsFromJson(j, f.chart, f.tensors, f.polynomials);
    return f;
}

void loadObjectsInto(MetricFile& target, const std::string& jsonText) {
    json j;
    try {
        j = json::parse(jsonText);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(),
                         static_cast<std::size_t>(e.byte));
    }
    objectsFromJson(j, target.chart, target.tensors, target.polynomials);
}

MomentumPolynomial MetricFile::lookupPolynomial(const std::string& name) const {
    if (name == "H" || name == "hamiltonian") return hamiltonian(chart);
    auto pit = polynomials.find(name);
    if (pit != polynomials.end()) return pit->second;
    auto tit = tensors.find(name);
    if (tit != tensors.end()) return tensorToPoly(tit->second);
    if (isProduct()) {
        auto p1 = polys1.find(name);
        if (p1 != polys1.end()) return product->lift1(p1->second);
        auto t1 = tensors1.find(name);
        if (t1 != tensors1.end()) return product->lift1(tensorToPoly(t1->second));
        auto p2 = polys2.find(name);
        if (p2 != polys2.end()) return product->lift2(p2->second);
        auto t2 = tensors2.find(name);
        if (t2 != tensors2.end()) return product->lift2(tensorToPoly(t2->second));
    }
    throw MathDomainError("no tensor or polynomial named '" + name + "' in file '" + this->name +
                          "'");
}

MomentumPolynomial MetricFile::lookupFactorPolynomial(int factor, const std::string& name) const {
    if (!isProduct()) throw MathDomainError("factor objects require a product file");
    const auto& polys = factor == 1 ? polys1 : polys2;
    const auto& tens = factor == 1 ? tensors1 : tensors2;
    const ChartPtr& c = factor == 1 ? product->factor1 : product->factor2;
    if (name == "H" || name == "hamiltonian") return hamiltonian(c);
    auto pit = polys.find(name);
    if (pit != polys.end()) return pit->second;
    auto tit = tens.find(name);
    if (tit != tens.end()) return tensorToPoly(tit->second);
    throw MathDomainError("no factor-" + std::to_string(factor) + " object named '" + name + "'");
}

std::string productFileJson(const MetricFile& f1, const MetricFile& f2, bool autoRename) {
    if (f1.isProduct() || f2.isProduct())
        throw MathDomainError("factors of a product must be single charts");
    ProductMetric pm = productMetric(f1.chart, f2.chart, autoRename);

    auto chartJson = [](const ChartPtr& chart,
                        const std::map<std::string, SymmetricCotensor>& tensors,
                        const std::map<std::string, MomentumPolynomial>& polys,
                        const ChartPtr& original) {
        json cj;
        cj["name"] = chart->name();
        cj["coordinates"] = chart->coords();
        if (!chart->domainNote().empty()) cj["domain"] = chart->domainNote();
        json rows = json::array();
        for (std::size_t i = 0; i < chart->dim(); ++i) {
            json row = json::array();
            for (std::size_t k = 0; k <= i; ++k)
                row.push_back(chart->metric()(static_cast<Eigen::Index>(i),
                                              static_cast<Eigen::Index>(k))
                                  .toString());
            rows.push_back(row);
        }
        cj["metric_lower"] = rows;
        const bool renamed = chart != original;
        if (!tensors.empty()) {
            json tj;
            for (const auto& [name, t] : tensors) {
                json one;
                one["rank"] = t.rank();
                json comps;
                for (const auto& [idx, v] : t.components()) {
                    std::string key;
                    for (std::size_t i = 0; i < idx.size(); ++i) {
                        if (i) key += ",";
                        key += chart->coords()[static_cast<std::size_t>(idx[i])];
                    }
                    comps[key] = (renamed ? v.renamedTo(chart->coordsPtr()) : v).toString();
                }
                one["components"] = comps;
                tj[name] = one;
            }
            cj["tensors"] = tj;
        }
        if (!polys.empty()) {
            json pj;
            for (const auto& [name, p] : polys) {
                json terms = json::array();
                for (const auto& [e, c] : p.terms()) {
                    json term;
                    json momenta;
                    for (std::size_t i = 0; i < e.size(); ++i)
                        if (e[i]) momenta[chart->momentumName(i)] = e[i];
                    if (!momenta.empty()) term["momenta"] = momenta;
                    term["coeff"] =
                        (renamed ? c.renamedTo(chart->coordsPtr()) : c).toString();
                    terms.push_back(term);
                }
                pj[name] = {{"terms", terms}};
            }
            cj["polynomials"] = pj;
        }
        return cj;
    };

    json out;
    out["name"] = pm.joint->name();
    json pj;
    pj["factor1"] = chartJson(pm.factor1, f1.tensors, f1.polynomials, f1.chart);
    pj["factor2"] = chartJson(pm.factor2, f2.tensors, f2.polynomials, f2.chart);
    out["product"] = pj;
    return out.dump(2) + "\n";
}

std::string ValidationReport::toString() const {
    std::ostringstream out;
    out << "OK: " << name << ", " << coordinates << " coordinates, det(g) != 0";
    if (isProduct) out << ", product of two charts";
    out << ", " << tensorCount << " tensors, " << polynomialCount << " polynomials\n";
    return out.str();
}

ValidationReport validateMetricFile(const std::string& jsonText) {
    MetricFile f = loadMetricFile(jsonText);
    ValidationReport r;
    r.name = f.name;
    r.coordinates = f.chart->dim();
    r.isProduct = f.isProduct();
    r.tensorCount = f.tensors.size() + f.tensors1.size() + f.tensors2.size();
    r.polynomialCount = f.polynomials.size() + f.polys1.size() + f.polys2.size();
    // Chart creation already enforced symmetry and nondegeneracy; touch the
    // inverse to surface any latent singularity.
    f.chart->inverseMetric();
    return r;
}

} // namespace geoflow
