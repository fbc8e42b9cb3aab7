#include <CLI11.hpp>

#include <geoflow/corpus.hpp>
#include <geoflow/curvature.hpp>
#include <geoflow/expression.hpp>
#include <geoflow/io.hpp>
#include <geoflow/numeric.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace geoflow;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitMathDomain = 3;
constexpr int kExitAnsatzIncomplete = 4;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Paths of the form corpus:NAME resolve to bundled content.
std::string readInput(const std::string& pathOrCorpus) {
    const std::string prefix = "corpus:";
    if (pathOrCorpus.rfind(prefix, 0) == 0) {
        std::string name = pathOrCorpus.substr(prefix.size());
        auto entry = corpusFind(name);
        if (!entry) throw std::runtime_error("no corpus entry named '" + name + "'");
        if (entry->kind == "alias") {
            auto target = corpusFind(entry->aliasMetric);
            if (!target) throw std::runtime_error("dangling corpus alias '" + name + "'");
            return target->content;
        }
        return entry->content;
    }
    return slurp(pathOrCorpus);
}

void writeOutput(const std::string& outPath, const std::string& text) {
    if (outPath.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(outPath);
    if (!out) throw std::runtime_error("cannot write '" + outPath + "'");
    out << text;
    std::cout << "wrote " << outPath << "\n";
}

struct LoadedInput {
    MetricFile file;
    std::string defaultObject; // set when --tensor named an object
};

LoadedInput loadWithTensor(std::string metricPath, const std::string& tensorArg) {
    LoadedInput in;
    std::string tensorFile;
    std::string tensorName;
    if (!tensorArg.empty()) {
        const std::string prefix = "corpus:";
        if (tensorArg.rfind(prefix, 0) == 0) {
            auto entry = corpusFind(tensorArg.substr(prefix.size()));
            if (!entry) throw std::runtime_error("no corpus entry '" + tensorArg + "'");
            if (entry->kind == "alias") {
                if (metricPath.empty()) metricPath = "corpus:" + entry->aliasMetric;
                in.defaultObject = entry->aliasObject;
            } else {
                tensorFile = entry->content;
            }
        } else if (std::filesystem::exists(tensorArg)) {
            tensorFile = slurp(tensorArg);
        } else {
            tensorName = tensorArg; // a name inside the metric file
        }
    }
    if (metricPath.empty()) throw std::runtime_error("--metric is required");
    in.file = loadMetricFile(readInput(metricPath));
    if (!tensorFile.empty()) {
        std::map<std::string, SymmetricCotensor> beforeT = in.file.tensors;
        std::map<std::string, MomentumPolynomial> beforeP = in.file.polynomials;
        loadObjectsInto(in.file, tensorFile);
        // a file carrying exactly one new object names the operand implicitly
        std::vector<std::string> added;
        for (const auto& [name, t] : in.file.tensors)
            if (!beforeT.count(name)) added.push_back(name);
        for (const auto& [name, p] : in.file.polynomials)
            if (!beforeP.count(name)) added.push_back(name);
        if (added.size() == 1) in.defaultObject = added.front();
    }
    if (!tensorName.empty()) in.defaultObject = tensorName;
    return in;
}

AnsatzSpec pickSpec(const std::optional<AnsatzSpec>& hint, const ChartPtr& chart,
                    int coeffDegree, const std::string& denominator) {
    AnsatzSpec spec = hint ? *hint : AnsatzSpec::make(chart, 1, 2);
    if (coeffDegree >= 0) spec.coeffDegree = coeffDegree;
    if (!denominator.empty()) {
        RationalFunction d = parseRationalFunction(denominator, chart->coordsPtr());
        if (!d.isPolynomial()) throw MathDomainError("ansatz denominator must be a polynomial");
        spec.denominator = d.num();
        spec.coeffVars.reset();
    }
    return spec;
}

std::string describeTerms(const ReducibleForm& form) {
    std::ostringstream out;
    out << "terms: " << form.terms.size() << "\n";
    for (std::size_t i = 0; i < form.terms.size(); ++i) {
        const LadderTerm& t = form.terms[i];
        out << "term " << i << ": k = " << t.k << ", coefficient = " << t.coefficient.str()
            << "\n";
        out << "  f1 (degree " << t.f1.degree << ", ladder " << t.f1.k
            << ") = " << t.f1.f.toString() << "\n";
        out << "  f2 (degree " << t.f2.degree << ", ladder " << t.f2.k
            << ") = " << t.f2.f.toString() << "\n";
    }
    out << "residual: " << form.residual.toString() << "\n";
    out << "classification: "
        << (form.classification == Reducibility::Reducible ? "reducible"
                                                           : "irreducible-witnessed")
        << "\n";
    return out.str();
}

std::vector<Rational> parsePoint(const std::string& text, std::size_t dim) {
    std::vector<Rational> point;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) point.push_back(parseRational(part));
    if (point.size() != dim)
        throw std::runtime_error("--point needs " + std::to_string(dim) +
                                 " comma-separated rationals");
    return point;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"geoflow: exact first integrals of geodesic flows on product metrics"};
    app.require_subcommand(1);

    std::string metricPath, metric2Path, tensorArg, outPath, fName, gName, denominator,
        denominator2, pointArg, exportDir;
    int degree = 1, ladder = 1, coeffDegree = -1, trajectories = 20;
    double sMax = 10.0, step = 1e-3, tol = 1e-6;
    std::uint64_t seed = 12345;
    bool autoRename = false;

    auto addMetric = [&](CLI::App* cmd) {
        cmd->add_option("--metric", metricPath, "metric file (path or corpus:NAME)");
    };
    auto addTensor = [&](CLI::App* cmd) {
        cmd->add_option("--tensor", tensorArg,
                        "tensor/polynomial: object name, file path or corpus:NAME");
    };
    auto addOut = [&](CLI::App* cmd) { cmd->add_option("--out", outPath, "output path"); };

    CLI::App* corpusCmd = app.add_subcommand("corpus", "list or export the bundled examples");
    CLI::App* corpusList = corpusCmd->add_subcommand("list", "list bundled examples");
    CLI::App* corpusExport = corpusCmd->add_subcommand("export", "write bundled files");
    corpusExport->add_option("--out", exportDir, "target directory")->required();

    CLI::App* validate = app.add_subcommand("validate", "parse a file and check invariants");
    addMetric(validate);

    CLI::App* christoffel = app.add_subcommand("christoffel", "Levi-Civita coefficients");
    addMetric(christoffel);
    addOut(christoffel);

    CLI::App* hamil = app.add_subcommand("hamiltonian", "geodesic-flow Hamiltonian");
    addMetric(hamil);
    addOut(hamil);

    CLI::App* bracket = app.add_subcommand("bracket", "Poisson bracket {f, g}");
    addMetric(bracket);
    addTensor(bracket);
    bracket->add_option("--f", fName, "first operand (object name or 'H')")->required();
    bracket->add_option("--g", gName, "second operand (object name or 'H')")->required();
    addOut(bracket);

    CLI::App* hk = app.add_subcommand("hk", "iterated bracket H^k f");
    addMetric(hk);
    addTensor(hk);
    hk->add_option("--ladder", ladder, "number of iterations")->required();
    addOut(hk);

    CLI::App* killing = app.add_subcommand("killing-solve", "basis of Killing polynomials");
    addMetric(killing);
    killing->add_option("--degree", degree, "momentum degree")->required();
    killing->add_option("--coeff-degree", coeffDegree, "coefficient degree bound");
    killing->add_option("--denominator", denominator, "fixed coefficient denominator");
    addOut(killing);

    CLI::App* ladderSolve = app.add_subcommand("ladder-solve", "basis with H^k f = 0");
    addMetric(ladderSolve);
    ladderSolve->add_option("--degree", degree, "momentum degree")->required();
    ladderSolve->add_option("--ladder", ladder, "ladder index k")->required();
    ladderSolve->add_option("--coeff-degree", coeffDegree, "coefficient degree bound");
    ladderSolve->add_option("--denominator", denominator, "fixed coefficient denominator");
    addOut(ladderSolve);

    CLI::App* productCmd = app.add_subcommand("product", "block product of two metrics");
    addMetric(productCmd);
    productCmd->add_option("--metric2", metric2Path, "second factor")->required();
    productCmd->add_flag("--auto-rename", autoRename, "suffix colliding coordinate names");
    productCmd->add_option("--out", outPath, "output path")->required();

    CLI::App* compose = app.add_subcommand("compose", "ladder composition of factor elements");
    addMetric(compose);
    compose->add_option("--f", fName, "factor-1 object name")->required();
    compose->add_option("--g", gName, "factor-2 object name")->required();
    compose->add_option("--ladder", ladder, "ladder index k")->required();
    addOut(compose);

    CLI::App* decompose = app.add_subcommand("decompose", "ladder decomposition of an integral");
    addMetric(decompose);
    addTensor(decompose);
    decompose->add_option("--coeff-degree", coeffDegree, "coefficient degree bound");
    decompose->add_option("--denominator", denominator, "factor-1 denominator");
    decompose->add_option("--denominator2", denominator2, "factor-2 denominator");
    addOut(decompose);

    CLI::App* classify = app.add_subcommand("classify", "reducible / irreducible-witnessed");
    addMetric(classify);
    addTensor(classify);
    classify->add_option("--coeff-degree", coeffDegree, "coefficient degree bound");
    classify->add_option("--denominator", denominator, "factor-1 denominator");
    classify->add_option("--denominator2", denominator2, "factor-2 denominator");
    addOut(classify);

    CLI::App* verify = app.add_subcommand("verify-numeric", "trajectory-level verification");
    addMetric(verify);
    addTensor(verify);
    verify->add_option("--smax", sMax, "arclength horizon");
    verify->add_option("--step", step, "integrator step");
    verify->add_option("--seed", seed, "random seed");
    verify->add_option("--tol", tol, "fit tolerance");
    verify->add_option("--trajectories", trajectories, "number of trajectories");
    addOut(verify);

    CLI::App* curv = app.add_subcommand("curvature-degeneracy",
                                        "directions with zero sectional curvature");
    addMetric(curv);
    curv->add_option("--point", pointArg, "rational evaluation point, comma-separated")
        ->required();
    addOut(curv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (corpusCmd->parsed()) {
            if (corpusExport->parsed()) {
                std::filesystem::create_directories(exportDir);
                for (const auto& e : corpusEntries()) {
                    if (e.kind == "alias") continue;
                    std::string ext = e.kind == "metric" ? ".metric" : ".json";
                    std::ofstream out(std::filesystem::path(exportDir) / (e.name + ext));
                    out << e.content << "\n";
                }
                std::cout << "exported corpus to " << exportDir << "\n";
            } else {
                (void)corpusList;
                std::cout << corpusListText();
            }
            return 0;
        }

        if (validate->parsed()) {
            std::cout << validateMetricFile(readInput(metricPath)).toString();
            return 0;
        }

        if (christoffel->parsed()) {
            MetricFile f = loadMetricFile(readInput(metricPath));
            writeOutput(outPath, f.chart->christoffel().toString());
            return 0;
        }

        if (hamil->parsed()) {
            MetricFile f = loadMetricFile(readInput(metricPath));
            writeOutput(outPath, "H = " + hamiltonian(f.chart).toString() + "\n");
            return 0;
        }

        if (bracket->parsed()) {
            LoadedInput in = loadWithTensor(metricPath, tensorArg);
            MomentumPolynomial f = in.file.lookupPolynomial(fName);
            MomentumPolynomial g = in.file.lookupPolynomial(gName);
            writeOutput(outPath, "{f, g} = " + poissonBracket(f, g).toString() + "\n");
            return 0;
        }

        if (hk->parsed()) {
            LoadedInput in = loadWithTensor(metricPath, tensorArg);
            if (in.defaultObject.empty())
                throw std::runtime_error("hk needs --tensor naming the object");
            MomentumPolynomial f = in.file.lookupPolynomial(in.defaultObject);
            std::ostringstream out;
            MomentumPolynomial cur = f;
            for (int i = 1; i <= ladder; ++i) {
                cur = applyH(cur);
                out << "H^" << i << " f = " << cur.toString() << "\n";
                if (cur.isZero()) {
                    out << "ladder degree: " << i << "\n";
                    break;
                }
            }
            if (!cur.isZero()) out << "ladder degree: exceeds " << ladder << "\n";
            writeOutput(outPath, out.str());
            return 0;
        }

        if (killing->parsed() || ladderSolve->parsed()) {
            MetricFile f = loadMetricFile(readInput(metricPath));
            AnsatzSpec spec = pickSpec(f.ansatz, f.chart, coeffDegree, denominator);
            int k = killing->parsed() ? 1 : ladder;
            LadderBasis basis = solveLadder(f.chart, degree, k, spec.withMomentumDegree(degree));
            std::ostringstream out;
            out << "space L^" << degree << "_" << k << " within the ansatz (coeff degree "
                << spec.coeffDegree << ", denominator " << spec.denominator.toString()
                << ")\n";
            out << "dimension: " << basis.dimension() << "\n";
            for (std::size_t i = 0; i < basis.basis.size(); ++i)
                out << "basis[" << i << "] = " << basis.basis[i].toString() << "\n";
            writeOutput(outPath, out.str());
            return 0;
        }

        if (productCmd->parsed()) {
            MetricFile f1 = loadMetricFile(readInput(metricPath));
            MetricFile f2 = loadMetricFile(readInput(metric2Path));
            writeOutput(outPath, productFileJson(f1, f2, autoRename));
            return 0;
        }

        if (compose->parsed()) {
            MetricFile f = loadMetricFile(readInput(metricPath));
            if (!f.isProduct()) throw MathDomainError("compose needs a product metric file");
            LadderElement e1 = LadderElement::certify(f.lookupFactorPolynomial(1, fName));
            LadderElement e2 = LadderElement::certify(f.lookupFactorPolynomial(2, gName));
            MomentumPolynomial out = composeIntegral(*f.product, e1, e2, ladder);
            writeOutput(outPath, "f = " + out.toString() + "\n");
            return 0;
        }

        if (decompose->parsed() || classify->parsed()) {
            LoadedInput in = loadWithTensor(metricPath, tensorArg);
            if (!in.file.isProduct())
                throw MathDomainError("decomposition needs a product metric file");
            if (in.defaultObject.empty())
                throw std::runtime_error("--tensor must name the integral to decompose");
            MomentumPolynomial f = in.file.lookupPolynomial(in.defaultObject);
            const ProductMetric& pm = *in.file.product;
            AnsatzSpec spec1 = pickSpec(in.file.ansatz1, pm.factor1, coeffDegree, denominator);
            AnsatzSpec spec2 = pickSpec(in.file.ansatz2, pm.factor2, coeffDegree, denominator2);
            ReducibleForm form = decomposeIntegral(f, pm, spec1, spec2);
            std::ostringstream out;
            if (decompose->parsed()) {
                out << describeTerms(form);
            } else {
                ClassificationResult cls = reducibilityClassify(form);
                if (cls.verdict == Reducibility::Reducible) {
                    out << "reducible\n";
                } else {
                    out << "irreducible-witnessed\n";
                    out << "witness (nonzero bidegree component of {H1, F}): "
                        << cls.witness->toString() << "\n";
                }
            }
            writeOutput(outPath, out.str());
            return 0;
        }

        if (verify->parsed()) {
            LoadedInput in = loadWithTensor(metricPath, tensorArg);
            const ChartPtr& chart = in.file.chart;
            std::vector<std::pair<std::string, MomentumPolynomial>> quantities;
            quantities.emplace_back("H", hamiltonian(chart));
            auto addAll = [&](const std::map<std::string, SymmetricCotensor>& ts,
                              const std::map<std::string, MomentumPolynomial>& ps,
                              auto lift) {
                for (const auto& [name, t] : ts)
                    quantities.emplace_back(name, lift(tensorToPoly(t)));
                for (const auto& [name, p] : ps) quantities.emplace_back(name, lift(p));
            };
            auto idLift = [](const MomentumPolynomial& p) { return p; };
            addAll(in.file.tensors, in.file.polynomials, idLift);
            if (in.file.isProduct()) {
                addAll(in.file.tensors1, in.file.polys1,
                       [&](const MomentumPolynomial& p) { return in.file.product->lift1(p); });
                addAll(in.file.tensors2, in.file.polys2,
                       [&](const MomentumPolynomial& p) { return in.file.product->lift2(p); });
            }

            std::vector<std::pair<double, double>> box;
            for (const auto& c : chart->coords()) {
                bool positive = chart->domainNote().find(c + " > 0") != std::string::npos;
                box.emplace_back(positive ? 0.75 : -1.0, positive ? 1.5 : 1.0);
            }
            std::mt19937_64 rng(seed);
            std::vector<QuantityReport> rows;
            std::ostringstream summary;
            summary << "seed: " << seed << ", trajectories: " << trajectories
                    << ", smax: " << sMax << ", step: " << step << "\n";
            int truncated = 0;
            for (int t = 0; t < trajectories; ++t) {
                FlowState init = randomUnitEnergyState(chart, rng, box);
                Trajectory traj = integrateGeodesic(chart, init, sMax, step);
                if (traj.truncated) {
                    ++truncated;
                    continue;
                }
                std::vector<double> grid;
                for (const auto& st : traj.states) grid.push_back(st.s);
                for (const auto& [name, poly] : quantities) {
                    std::vector<double> values = evalAlong(poly, traj);
                    QuantityReport row;
                    row.trajectoryId = t;
                    row.quantity = name;
                    auto [mn, mx] = std::minmax_element(values.begin(), values.end());
                    row.min = *mn;
                    row.max = *mx;
                    row.relDrift = relativeVariation(values);
                    FitReport fit = fitPolyInS(values, grid, 5, tol);
                    row.fittedDegree = fit.fittedDegree;
                    row.residualRms = fit.residualRms;
                    rows.push_back(std::move(row));
                }
            }
            summary << "truncated trajectories: " << truncated << "\n";
            for (const auto& [name, poly] : quantities) {
                double worst = 0.0;
                for (const auto& r : rows)
                    if (r.quantity == name) worst = std::max(worst, r.relDrift);
                summary << name << ": max relative drift " << worst << "\n";
            }
            std::cout << summary.str();
            if (!outPath.empty()) {
                std::ofstream out(outPath);
                out << reportCsv(rows);
                std::cout << "wrote " << outPath << "\n";
            }
            return 0;
        }

        if (curv->parsed()) {
            MetricFile f = loadMetricFile(readInput(metricPath));
            std::vector<Rational> point = parsePoint(pointArg, f.chart->dim());
            CurvatureDegeneracy res = sectionalCurvatureDegeneracy(f.chart, point);
            writeOutput(outPath, res.toString(f.chart->coords()));
            return 0;
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const AnsatzIncompleteError& e) {
        std::cerr << "ansatz incomplete: " << e.what() << "\n";
        return kExitAnsatzIncomplete;
    } catch (const MathDomainError& e) {
        std::cerr << "math domain error: " << e.what() << "\n";
        return kExitMathDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return 0;
}
