#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <geoflow/corpus.hpp>
#include <geoflow/io.hpp>

#include <json.hpp>

#include <array>
#include <cstdio>

#include "test_util.hpp"

using namespace geoflow;

namespace {

struct CliResult {
    int exitCode = -1;
    std::string output;
};

CliResult runCli(const std::string& args) {
    std::string cmd = std::string(GEOFLOW_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    CliResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) res.output.append(buf.data(), n);
    int status = pclose(pipe);
    res.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

void collectExpressions(const nlohmann::json& j, std::vector<std::string>& out,
                        const std::string& key = "") {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) collectExpressions(v, out, k);
    } else if (j.is_array()) {
        for (const auto& v : j) collectExpressions(v, out, key);
    } else if (j.is_string()) {
        if (key == "name" || key == "domain" || key == "coordinates" || key == "coeff_vars")
            return;
        out.push_back(j.get<std::string>());
    }
}

} // namespace

TEST_CASE("every corpus file loads and validates") {
    for (const auto& entry : corpusEntries()) {
        if (entry.kind == "metric") {
            ValidationReport r = validateMetricFile(entry.content);
            CHECK(r.name == entry.name);
            CHECK(r.coordinates >= 1);
            // metric compatibility on every bundled chart
            MetricFile f = loadMetricFile(entry.content);
            CHECK(killingOperator(metricTensor(f.chart)).isZero());
        } else if (entry.kind == "objects") {
            CHECK(!entry.content.empty());
        } else {
            CHECK(corpusFind(entry.aliasMetric).has_value());
        }
    }
    // the loose objects file parses against its product chart
    MetricFile pm = loadMetricFile(corpusFind("product_r1xr1")->content);
    loadObjectsInto(pm, corpusFind("angular_momentum")->content);
    CHECK(pm.polynomials.count("angular_momentum") == 1);
    CHECK(isIntegral(pm.polynomials.at("angular_momentum")));
}

TEST_CASE("corpus expressions are parse-print-parse fixed points") {
    VarList all{"x",  "y",  "r",  "theta",  "z",  "x1", "x2",
                "r1", "theta1", "z1", "r2", "theta2", "z2"};
    int checked = 0;
    for (const auto& entry : corpusEntries()) {
        if (entry.content.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(entry.content);
        std::vector<std::string> exprs;
        collectExpressions(j, exprs);
        for (const auto& s : exprs) {
            ExprPtr e = parseExpression(s, all);
            ExprPtr again = parseExpression(printExpression(e), all);
            CHECK(*again == *e);
            ++checked;
        }
    }
    CHECK(checked > 40);
}

TEST_CASE("corpus K agrees with its construction from the covectors") {
    MetricFile f = loadMetricFile(corpusFind("product_r3xr3")->content);
    REQUIRE(f.isProduct());
    const ProductMetric& pm = *f.product;

    // factor data: nablaOmega_i is the symmetrized covariant derivative
    SymmetricCotensor omega1 = f.tensors1.at("Omega1");
    SymmetricCotensor omega2 = f.tensors2.at("Omega2");
    CHECK(killingOperator(omega1) == f.tensors1.at("nablaOmega1"));
    CHECK(killingOperator(omega2) == f.tensors2.at("nablaOmega2"));

    // lift to the joint chart and form Omega1 . nablaOmega2 - Omega2 . nablaOmega1
    auto liftTensor = [&](const SymmetricCotensor& t, int factor) {
        MomentumPolynomial p = tensorToPoly(t);
        return polyToTensor(factor == 1 ? pm.lift1(p) : pm.lift2(p));
    };
    SymmetricCotensor derived =
        symProduct(liftTensor(omega1, 1), liftTensor(killingOperator(omega2), 2)) -
        symProduct(liftTensor(omega2, 2), liftTensor(killingOperator(omega1), 1));
    CHECK(derived == f.tensors.at("K"));

    // and the polynomial route: F_K = composeIntegral(F_Omega1, F_Omega2, 2)
    LadderElement e1 = LadderElement::certify(tensorToPoly(omega1));
    LadderElement e2 = LadderElement::certify(tensorToPoly(omega2));
    CHECK(tensorToPoly(f.tensors.at("K")) == composeIntegral(pm, e1, e2, 2));
}

TEST_CASE("metric file errors") {
    CHECK_THROWS_AS(loadMetricFile("{not json"), ParseError);
    CHECK_THROWS_AS(loadMetricFile(R"({"coordinates": ["x"], "metric_lower": [["0"]]})"),
                    MathDomainError);
    CHECK_THROWS_AS(loadMetricFile(R"({"coordinates": ["x"], "metric_lower": [["y"]]})"),
                    ParseError);
    CHECK_THROWS_AS(loadMetricFile(R"({"coordinates": ["x"]})"), ParseError);
}

TEST_CASE("cli: validate and corpus") {
    CliResult list = runCli("corpus list");
    CHECK(list.exitCode == 0);
    CHECK(list.output.find("example_r3") != std::string::npos);

    CliResult ok = runCli("validate --metric corpus:example_r3");
    CHECK(ok.exitCode == 0);
    CHECK(ok.output.find("OK: example_r3, 3 coordinates, det(g) != 0") != std::string::npos);
}

TEST_CASE("cli: deterministic golden outputs") {
    const char* cmds[] = {
        "christoffel --metric corpus:example_r3",
        "hamiltonian --metric corpus:product_r3xr3",
        "killing-solve --metric corpus:euclidean2 --degree 2 --coeff-degree 2",
        "decompose --metric corpus:product_r1xr1 --tensor corpus:angular_momentum",
    };
    for (const char* cmd : cmds) {
        CliResult a = runCli(cmd);
        CliResult b = runCli(cmd);
        CHECK(a.exitCode == 0);
        CHECK(a.output == b.output);
    }

    CliResult dec = runCli("decompose --metric corpus:product_r1xr1 --tensor corpus:angular_momentum");
    CHECK(dec.output.find("terms: 1") != std::string::npos);
    CHECK(dec.output.find("k = 2") != std::string::npos);
    CHECK(dec.output.find("residual: 0") != std::string::npos);

    CliResult chr = runCli("christoffel --metric corpus:example_r3");
    CHECK(chr.output.find("Gamma[r][theta,theta] = (-r)/(r^4 + 2*r^2 + 1)") !=
          std::string::npos);
}

TEST_CASE("cli: exit codes") {
    CHECK(runCli("no-such-command").exitCode == 1);
    CHECK(runCli("validate --metric /nonexistent/path.metric").exitCode == 1);

    // parse error in an expression
    std::string bad = "/tmp/geoflow_bad_metric.json";
    {
        std::ofstream out(bad);
        out << R"({"coordinates": ["x"], "metric_lower": [["x +"]]})";
    }
    CHECK(runCli("validate --metric " + bad).exitCode == 2);

    // math-domain error: singular metric
    std::string sing = "/tmp/geoflow_singular_metric.json";
    {
        std::ofstream out(sing);
        out << R"({"coordinates": ["x", "y"], "metric_lower": [["1"], ["1", "1"]]})";
    }
    CHECK(runCli("validate --metric " + sing).exitCode == 3);

    // ansatz too small for the decomposition
    CliResult small = runCli(
        "decompose --metric corpus:product_r1xr1 --tensor corpus:angular_momentum "
        "--coeff-degree 0");
    CHECK(small.exitCode == 4);
    CHECK(small.output.find("ansatz incomplete") != std::string::npos);
}

TEST_CASE("cli: compose then decompose round trip") {
    CliResult composed = runCli(
        "compose --metric corpus:product_r3xr3 --f Omega1 --g Omega2 --ladder 2 --out "
        "/tmp/geoflow_composed.txt");
    CHECK(composed.exitCode == 0);

    CliResult dec = runCli("decompose --tensor corpus:section4_K");
    CHECK(dec.exitCode == 0);
    CHECK(dec.output.find("k = 2") != std::string::npos);
    CHECK(dec.output.find("residual: 0") != std::string::npos);
    CHECK(dec.output.find("classification: irreducible-witnessed") != std::string::npos);
}
