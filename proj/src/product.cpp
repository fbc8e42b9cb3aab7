#include <geoflow/product.hpp>

#include <algorithm>
#include <set>

namespace geoflow {

// ---- product charts ---------------------------------------------------------

ProductMetric productMetric(const ChartPtr& m1, const ChartPtr& m2, bool autoRename) {
    std::set<std::string> names1(m1->coords().begin(), m1->coords().end());
    bool collision = false;
    for (const auto& c : m2->coords())
        if (names1.count(c)) collision = true;

    ChartPtr f1 = m1, f2 = m2;
    if (collision) {
        if (!autoRename)
            throw MathDomainError("factor charts share coordinate names (pass autoRename)");
        auto rename = [](const ChartPtr& m, const std::string& suffix) {
            std::vector<std::string> renamed;
            for (const auto& c : m->coords()) renamed.push_back(c + suffix);
            VarListPtr coords = makeVars(std::move(renamed));
            RfMatrix g(m->dim(), m->dim());
            for (std::size_t i = 0; i < m->dim(); ++i)
                for (std::size_t j = 0; j < m->dim(); ++j)
                    g(i, j) = m->metric()(i, j).renamedTo(coords);
            return MetricChart::create(m->name() + suffix, coords, std::move(g),
                                       m->domainNote());
        };
        f1 = rename(m1, "_1");
        f2 = rename(m2, "_2");
    }

    std::vector<std::string> jointNames(f1->coords());
    jointNames.insert(jointNames.end(), f2->coords().begin(), f2->coords().end());
    VarListPtr coords = makeVars(std::move(jointNames));

    const auto n1 = static_cast<Eigen::Index>(f1->dim());
    const auto n2 = static_cast<Eigen::Index>(f2->dim());
    RfMatrix g(n1 + n2, n1 + n2);
    for (Eigen::Index i = 0; i < n1 + n2; ++i)
        for (Eigen::Index j = 0; j < n1 + n2; ++j)
            g(i, j) = RationalFunction::zero(coords);
    for (Eigen::Index i = 0; i < n1; ++i)
        for (Eigen::Index j = 0; j < n1; ++j)
            g(i, j) = f1->metric()(i, j).extendedTo(coords);
    for (Eigen::Index i = 0; i < n2; ++i)
        for (Eigen::Index j = 0; j < n2; ++j)
            g(n1 + i, n1 + j) = f2->metric()(i, j).extendedTo(coords);

    std::string note = f1->domainNote();
    if (!f2->domainNote().empty()) {
        if (!note.empty()) note += "; ";
        note += f2->domainNote();
    }
    ProductMetric pm;
    pm.factor1 = f1;
    pm.factor2 = f2;
    pm.joint = MetricChart::create(f1->name() + "_x_" + f2->name(), coords, std::move(g), note);
    return pm;
}

int factor1Degree(const ProductMetric& pm, const Exponents& e) {
    int d = 0;
    for (std::size_t i = 0; i < pm.dim1(); ++i) d += static_cast<int>(e[i]);
    return d;
}

// ---- bi-homogeneous split and the chain system ------------------------------

MomentumPolynomial BiHomogeneousSplit::sum() const {
    if (parts.empty()) throw std::logic_error("empty split");
    MomentumPolynomial s = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) s += parts[i];
    return s;
}

BiHomogeneousSplit bihomogeneousSplit(const MomentumPolynomial& f, const ProductMetric& pm) {
    if (!f.chart()->sameAs(*pm.joint))
        throw ChartMismatchError("polynomial does not live on the joint chart");
    auto deg = f.homogeneousDegree();
    if (!f.isZero() && !deg)
        throw MathDomainError("bi-homogeneous split requires a homogeneous polynomial");
    BiHomogeneousSplit split;
    split.degree = f.isZero() ? 0 : *deg;
    split.parts.assign(static_cast<std::size_t>(split.degree) + 1,
                       MomentumPolynomial::zero(f.chart()));
    for (const auto& [e, c] : f.terms())
        split.parts[static_cast<std::size_t>(factor1Degree(pm, e))].addTerm(e, c);
    return split;
}

ChainCheckResult chainCheck(const BiHomogeneousSplit& split, const ProductMetric& pm) {
    const int d = split.degree;
    MomentumPolynomial h1 = pm.h1();
    MomentumPolynomial h2 = pm.h2();
    for (int l = 0; l <= d + 1; ++l) {
        MomentumPolynomial eq = MomentumPolynomial::zero(pm.joint);
        if (l >= 1) eq += poissonBracket(h1, split.parts[static_cast<std::size_t>(l - 1)]);
        if (l <= d) eq += poissonBracket(h2, split.parts[static_cast<std::size_t>(l)]);
        if (!eq.isZero()) {
            ChainCheckResult r(std::move(eq));
            r.ok = false;
            r.failingEquation = l;
            return r;
        }
    }
    return ChainCheckResult(MomentumPolynomial::zero(pm.joint));
}

// ---- ladder composition ------------------------------------------------------

MomentumPolynomial composeIntegral(const ProductMetric& pm, const LadderElement& f1,
                                   const LadderElement& f2, int k) {
    if (k < 1) throw std::logic_error("composition needs k >= 1");
    if (!f1.f.chart()->sameAs(*pm.factor1) || !f2.f.chart()->sameAs(*pm.factor2))
        throw ChartMismatchError("ladder elements must live on the factor charts");
    if (!iterateH(f1.f, k).isZero() || !iterateH(f2.f, k).isZero())
        throw MathDomainError("ladder certificate violated: H^k does not annihilate the input");

    std::vector<MomentumPolynomial> chain1{f1.f}, chain2{f2.f};
    for (int l = 1; l < k; ++l) {
        chain1.push_back(applyH(chain1.back()));
        chain2.push_back(applyH(chain2.back()));
    }
    MomentumPolynomial out = MomentumPolynomial::zero(pm.joint);
    Rational sign(1);
    for (int l = 0; l < k; ++l) {
        const MomentumPolynomial& a = chain1[static_cast<std::size_t>(l)];
        const MomentumPolynomial& b = chain2[static_cast<std::size_t>(k - 1 - l)];
        if (!a.isZero() && !b.isZero())
            out += (pm.lift1(a) * pm.lift2(b)).scaled(sign);
        sign = -sign;
    }
    return out;
}

// ---- graded families ---------------------------------------------------------

std::size_t GradedFamily::dimension() const {
    std::size_t m = 0;
    for (const auto& g : grades) m += g.size();
    return m;
}

GradedFamily GradedFamily::renamedTo(const ChartPtr& target) const {
    GradedFamily out;
    out.chart = target;
    out.degree = degree;
    out.action = action;
    for (const auto& grade : grades) {
        std::vector<MomentumPolynomial> renamed;
        renamed.reserve(grade.size());
        for (const auto& f : grade) renamed.push_back(f.renamedTo(target));
        out.grades.push_back(std::move(renamed));
    }
    return out;
}

GradedFamily buildGradedFamily(const ChartPtr& chart, int d, const AnsatzSpec& spec) {
    GradedFamily fam;
    fam.chart = chart;
    fam.degree = d;
    for (int j = 0; j <= d; ++j)
        fam.grades.push_back(solveLadder(chart, j, d - j + 1, spec).basis);

    // Close under H: images of grade j land in the true ladder space of grade
    // j+1 but may leave the ansatz family; append them so the recorded action
    // is exact.
    for (int j = 0; j < d; ++j) {
        std::vector<MomentumPolynomial> images;
        for (const auto& b : fam.grades[static_cast<std::size_t>(j)]) {
            MomentumPolynomial h = applyH(b);
            if (!h.isZero()) images.push_back(std::move(h));
        }
        extendSpan(fam.grades[static_cast<std::size_t>(j + 1)], images);
    }
    for (const auto& b : fam.grades[static_cast<std::size_t>(d)])
        if (!applyH(b).isZero())
            throw std::logic_error("graded family H-action failed to be nilpotent");

    for (int j = 0; j < d; ++j) {
        const auto& from = fam.grades[static_cast<std::size_t>(j)];
        const auto& to = fam.grades[static_cast<std::size_t>(j + 1)];
        RatMatrix m(static_cast<Eigen::Index>(to.size()), static_cast<Eigen::Index>(from.size()));
        m.setConstant(Rational(0));
        for (std::size_t i = 0; i < from.size(); ++i) {
            MomentumPolynomial h = applyH(from[i]);
            if (h.isZero()) continue;
            auto coeffs = expandOverBasis(h, to);
            if (!coeffs)
                throw AnsatzIncompleteError("H-image of a grade " + std::to_string(j) +
                                            " element escapes the computed grade " +
                                            std::to_string(j + 1) + " space");
            for (std::size_t r = 0; r < to.size(); ++r)
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = (*coeffs)[r];
        }
        fam.action.push_back(std::move(m));
    }
    return fam;
}

// ---- Jordan ladders ----------------------------------------------------------

namespace {

struct FamilyIndex {
    std::vector<std::size_t> offset; // grade -> first global index
    std::size_t total = 0;

    explicit FamilyIndex(const GradedFamily& fam) {
        for (const auto& g : fam.grades) {
            offset.push_back(total);
            total += g.size();
        }
    }
};

RatMatrix fullAction(const GradedFamily& fam, const FamilyIndex& ix) {
    RatMatrix n(static_cast<Eigen::Index>(ix.total), static_cast<Eigen::Index>(ix.total));
    n.setConstant(Rational(0));
    for (std::size_t j = 0; j + 1 < fam.grades.size(); ++j) {
        const RatMatrix& blk = fam.action[j];
        for (Eigen::Index r = 0; r < blk.rows(); ++r)
            for (Eigen::Index c = 0; c < blk.cols(); ++c)
                n(static_cast<Eigen::Index>(ix.offset[j + 1]) + r,
                  static_cast<Eigen::Index>(ix.offset[j]) + c) = blk(r, c);
    }
    return n;
}

MomentumPolynomial materialize(const GradedFamily& fam, const FamilyIndex& ix,
                               const RatVector& v) {
    MomentumPolynomial f = MomentumPolynomial::zero(fam.chart);
    for (std::size_t j = 0; j < fam.grades.size(); ++j)
        for (std::size_t i = 0; i < fam.grades[j].size(); ++i) {
            const Rational& c = v(static_cast<Eigen::Index>(ix.offset[j] + i));
            if (!c.is_zero()) f += fam.grades[j][i].scaled(c);
        }
    return f;
}

} // namespace

std::vector<JordanLadder> jordanLadders(const GradedFamily& fam) {
    FamilyIndex ix(fam);
    const auto m = static_cast<Eigen::Index>(ix.total);
    std::vector<JordanLadder> out;
    if (m == 0) return out;
    RatMatrix n = fullAction(fam, ix);

    // Powers of the action and the kernel filtration.
    std::vector<RatMatrix> powers{RatMatrix::Identity(m, m)};
    int s = 0;
    while (true) {
        powers.push_back(ratMul(n, powers.back()));
        ++s;
        if (ratRank(powers.back()) == 0) break;
        if (s > fam.degree + 1)
            throw std::logic_error("Jordan ladder extraction: action is not nilpotent");
    }

    // Per-grade kernel bases of N^t, ordered by grade then canonical position.
    auto gradeKernel = [&](int t, std::size_t grade) {
        const auto cnt = static_cast<Eigen::Index>(fam.grades[grade].size());
        RatMatrix sub(m, cnt);
        for (Eigen::Index c = 0; c < cnt; ++c)
            sub.col(c) = powers[static_cast<std::size_t>(t)]
                             .col(static_cast<Eigen::Index>(ix.offset[grade]) + c);
        RatMatrix null = ratNullspace(sub);
        std::vector<RatVector> vecs;
        for (Eigen::Index k = 0; k < null.cols(); ++k) {
            RatVector v(m);
            v.setConstant(Rational(0));
            for (Eigen::Index c = 0; c < cnt; ++c)
                v(static_cast<Eigen::Index>(ix.offset[grade]) + c) = null(c, k);
            vecs.push_back(std::move(v));
        }
        return vecs;
    };

    auto addVec = [&](FractionFreeEchelon& ech, const RatVector& v) {
        SparseRatRow row;
        for (Eigen::Index i = 0; i < m; ++i)
            if (!v(i).is_zero()) row.emplace_back(static_cast<int>(i), v(i));
        return ech.addRow(row);
    };

    for (int t = s; t >= 1; --t) {
        FractionFreeEchelon ech(static_cast<int>(m));
        // K_{t-1}
        for (std::size_t g = 0; g < fam.grades.size(); ++g)
            if (t >= 2)
                for (const auto& v : gradeKernel(t - 1, g)) addVec(ech, v);
        // elements of longer chains lying in K_t
        for (const auto& chain : out)
            addVec(ech, chain.coords[chain.coords.size() - static_cast<std::size_t>(t)]);
        // new generators
        for (std::size_t g = 0; g < fam.grades.size(); ++g) {
            for (const auto& v : gradeKernel(t, g)) {
                if (!addVec(ech, v)) continue;
                JordanLadder chain;
                chain.grade = static_cast<int>(g);
                RatVector cur = v;
                for (int l = 0; l < t; ++l) {
                    chain.coords.push_back(cur);
                    chain.chain.push_back(materialize(fam, ix, cur));
                    if (l + 1 < t) cur = ratApply(n, cur);
                }
                out.push_back(std::move(chain));
            }
        }
    }
    return out;
}

// ---- decomposition -----------------------------------------------------------

MomentumPolynomial LadderTerm::expand(const ProductMetric& pm) const {
    return composeIntegral(pm, f1, f2, k).scaled(coefficient);
}

MomentumPolynomial ReducibleForm::expandTerms() const {
    MomentumPolynomial acc = MomentumPolynomial::zero(pm->joint);
    for (const auto& t : terms) acc += t.expand(*pm);
    return acc;
}

namespace {

bool specsMatchUnderRenaming(const AnsatzSpec& s1, const AnsatzSpec& s2, const ChartPtr& c1,
                             const ChartPtr& c2) {
    if (s1.coeffDegree != s2.coeffDegree) return false;
    if (s1.denominator.renamedTo(c2->coordsPtr()) != s2.denominator) return false;
    if (s1.coeffVars.has_value() != s2.coeffVars.has_value()) return false;
    if (s1.coeffVars) {
        if (s1.coeffVars->size() != s2.coeffVars->size()) return false;
        for (std::size_t i = 0; i < s1.coeffVars->size(); ++i) {
            auto it = std::find(c1->coords().begin(), c1->coords().end(), (*s1.coeffVars)[i]);
            auto jt = std::find(c2->coords().begin(), c2->coords().end(), (*s2.coeffVars)[i]);
            if (it == c1->coords().end() || jt == c2->coords().end()) return false;
            if ((it - c1->coords().begin()) != (jt - c2->coords().begin())) return false;
        }
    }
    return true;
}

struct TensorCandidate {
    std::size_t ladder1, pos1;
    std::size_t ladder2, pos2;
    MomentumPolynomial product;
};

} // namespace

ReducibleForm decomposeIntegral(const MomentumPolynomial& f, const ProductMetric& pm,
                                const AnsatzSpec& spec1, const AnsatzSpec& spec2) {
    auto degOpt = f.homogeneousDegree();
    if (!degOpt) throw MathDomainError("decomposition requires a nonzero homogeneous integral");
    const int d = *degOpt;

    BiHomogeneousSplit split = bihomogeneousSplit(f, pm);
    ChainCheckResult chain = chainCheck(split, pm);
    if (!chain.ok)
        throw MathDomainError("input is not an integral of the product metric (chain equation " +
                              std::to_string(chain.failingEquation) + " fails)");

    // Membership certification by iterated brackets applied directly to the
    // split parts.
    MomentumPolynomial h1 = pm.h1(), h2 = pm.h2();
    for (int l = 0; l <= d; ++l) {
        const MomentumPolynomial& part = split.parts[static_cast<std::size_t>(l)];
        if (part.isZero()) continue;
        MomentumPolynomial a = part;
        for (int i = 0; i < d - l + 1; ++i) a = poissonBracket(h1, a);
        MomentumPolynomial b = part;
        for (int i = 0; i < l + 1; ++i) b = poissonBracket(h2, b);
        if (!a.isZero() || !b.isZero())
            throw std::logic_error("membership certification failed for a chain-consistent input");
    }

    GradedFamily fam1 = buildGradedFamily(pm.factor1, d, spec1);
    GradedFamily fam2;
    if (pm.factor2->isRenamingOf(*pm.factor1) &&
        specsMatchUnderRenaming(spec1, spec2, pm.factor1, pm.factor2)) {
        fam2 = fam1.renamedTo(pm.factor2);
    } else {
        fam2 = buildGradedFamily(pm.factor2, d, spec2);
    }
    std::vector<JordanLadder> lad1 = jordanLadders(fam1);
    std::vector<JordanLadder> lad2 = jordanLadders(fam2);

    // Candidate tensor pairs, grouped by the factor-1 degree of the product.
    std::vector<std::vector<TensorCandidate>> byLevel(static_cast<std::size_t>(d) + 1);
    for (std::size_t i = 0; i < lad1.size(); ++i) {
        for (std::size_t a = 0; a < lad1[i].length(); ++a) {
            const int degA = lad1[i].grade + static_cast<int>(a);
            if (degA > d) continue;
            for (std::size_t j = 0; j < lad2.size(); ++j) {
                for (std::size_t b = 0; b < lad2[j].length(); ++b) {
                    const int degB = lad2[j].grade + static_cast<int>(b);
                    if (degA + degB != d) continue;
                    TensorCandidate cand{i, a, j, b,
                                         pm.lift1(lad1[i].chain[a]) * pm.lift2(lad2[j].chain[b])};
                    byLevel[static_cast<std::size_t>(degA)].push_back(std::move(cand));
                }
            }
        }
    }

    // Expand each split part over its level's candidates.
    std::map<std::pair<std::size_t, std::size_t>, std::map<std::size_t, Rational>> blockCoeffs;
    for (int l = 0; l <= d; ++l) {
        const MomentumPolynomial& part = split.parts[static_cast<std::size_t>(l)];
        auto& cands = byLevel[static_cast<std::size_t>(l)];
        if (part.isZero()) continue;
        std::vector<MomentumPolynomial> basis;
        basis.reserve(cands.size());
        for (const auto& c : cands) basis.push_back(c.product);
        auto coeffs = expandOverBasis(part, basis);
        if (!coeffs)
            throw AnsatzIncompleteError(
                "S_" + std::to_string(l) +
                " is not contained in the computed tensor space; enlarge the ansatz");
        for (std::size_t t = 0; t < cands.size(); ++t) {
            if ((*coeffs)[t].is_zero()) continue;
            auto key = std::make_pair(cands[t].ladder1, cands[t].ladder2);
            // Chain positions determine the antidiagonal slot a (= pos1).
            blockCoeffs[key][cands[t].pos1] = (*coeffs)[t];
        }
    }

    ReducibleForm out;
    out.pm = std::make_shared<const ProductMetric>(pm);
    out.input = f;
    out.residual = MomentumPolynomial::zero(pm.joint);

    for (const auto& [key, coeffs] : blockCoeffs) {
        const JordanLadder& L1 = lad1[key.first];
        const JordanLadder& L2 = lad2[key.second];
        const int m1 = static_cast<int>(L1.length());
        const int m2 = static_cast<int>(L2.length());
        const int sigma = d - L1.grade - L2.grade; // common antidiagonal a + b
        const int k = m1 + m2 - 1 - sigma;
        if (k < 1 || k > std::min(m1, m2))
            throw std::logic_error("tensor-block coefficients outside the kernel range");
        const int a0 = m1 - k;
        Rational gamma = coeffs.count(static_cast<std::size_t>(a0))
                             ? coeffs.at(static_cast<std::size_t>(a0))
                             : Rational(0);
        // Kernel pattern: coefficient at a0 + l must be (-1)^l gamma.
        Rational expect = gamma;
        for (int l = 0; l < k; ++l) {
            Rational have = coeffs.count(static_cast<std::size_t>(a0 + l))
                                ? coeffs.at(static_cast<std::size_t>(a0 + l))
                                : Rational(0);
            if (have != expect)
                throw std::logic_error("tensor-block coefficients do not follow the kernel pattern");
            expect = -expect;
        }
        if (gamma.is_zero()) continue;

        LadderTerm term;
        term.k = k;
        term.coefficient = gamma;
        term.f1 = LadderElement{L1.chain[static_cast<std::size_t>(a0)], k,
                                L1.grade + a0};
        term.f2 = LadderElement{L2.chain[static_cast<std::size_t>(m2 - k)], k,
                                L2.grade + (m2 - k)};
        out.terms.push_back(std::move(term));
    }

    MomentumPolynomial expanded = out.expandTerms();
    out.residual = f - expanded;
    out.classification = Reducibility::Reducible;
    for (const auto& t : out.terms)
        if (t.k > 1) out.classification = Reducibility::IrreducibleWitnessed;

    // Killing tails of the factor families (kernel of H): the last element of
    // every Jordan chain.
    for (const auto& c : lad1) out.killing1.push_back(c.chain.back());
    for (const auto& c : lad2) out.killing2.push_back(c.chain.back());
    return out;
}

ClassificationResult reducibilityClassify(const ReducibleForm& rf) {
    if (!rf.residual.isZero())
        throw MathDomainError("cannot classify a decomposition with nonzero residual");
    const ProductMetric& pm = *rf.pm;
    auto degOpt = rf.input.homogeneousDegree();
    const int d = degOpt ? *degOpt : 0;

    std::vector<MomentumPolynomial> candidates;
    for (const auto& t1 : rf.killing1) {
        auto d1 = t1.homogeneousDegree();
        if (!d1) continue;
        for (const auto& t2 : rf.killing2) {
            auto d2 = t2.homogeneousDegree();
            if (!d2) continue;
            if (*d1 + *d2 != d) continue;
            candidates.push_back(pm.lift1(t1) * pm.lift2(t2));
        }
    }
    if (expandOverBasis(rf.input, candidates).has_value())
        return ClassificationResult{Reducibility::Reducible, std::nullopt};

    MomentumPolynomial bracket = poissonBracket(pm.h1(), rf.input);
    if (bracket.isZero())
        throw std::logic_error("infeasible all-k=1 expansion with vanishing factor bracket");
    BiHomogeneousSplit ws = bihomogeneousSplit(bracket, pm);
    for (const auto& part : ws.parts) {
        if (!part.isZero())
            return ClassificationResult{Reducibility::IrreducibleWitnessed, part};
    }
    throw std::logic_error("nonzero bracket with no nonzero bidegree component");
}

} // namespace geoflow
