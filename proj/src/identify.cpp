#include "causalid/identify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace causalid {

std::string to_string(Estimand e) {
    switch (e) {
        case Estimand::ate: return "ate";
        case Estimand::att: return "att";
        case Estimand::hte: return "hte";
    }
    return "ate";
}

Estimand estimand_from_string(const std::string& s) {
    if (s == "ate") return Estimand::ate;
    if (s == "att") return Estimand::att;
    if (s == "hte") return Estimand::hte;
    throw std::invalid_argument("unknown estimand: " + s);
}

namespace {

bool means_equal(const JointPMF& a, const JointPMF& b) {
    return std::fabs(a.mean_outcome() - b.mean_outcome()) <= kPmfTol;
}

bool marginals_equal(const JointPMF& a, const JointPMF& b) {
    const std::size_t nx = a.grid()->num_covariates();
    for (std::size_t i = 0; i < nx; ++i) {
        if (std::fabs(a.x_marginal(i) - b.x_marginal(i)) > kPmfTol) return false;
    }
    return true;
}

bool pmfs_equal(const JointPMF& a, const JointPMF& b) {
    for (std::size_t k = 0; k < a.raw().size(); ++k) {
        if (std::fabs(a.raw()[k] - b.raw()[k]) > kPmfTol) return false;
    }
    return true;
}

// Requirement 3 of the identifiability condition: censored products differ
// somewhere on the support of the first tuple's covariate marginal.
bool products_differ(const PropensityTable& p, const JointPMF& P, const PropensityTable& q,
                     const JointPMF& Q) {
    const std::size_t nx = P.grid()->num_covariates();
    const std::size_t ny = P.grid()->num_outcomes();
    for (std::size_t i = 0; i < nx; ++i) {
        if (P.x_marginal(i) <= 0.0) continue;
        for (std::size_t j = 0; j < ny; ++j) {
            if (std::fabs(p.value(i, j) * P.mass(i, j) - q.value(i, j) * Q.mass(i, j)) >
                kPmfTol) {
                return true;
            }
        }
    }
    return false;
}

std::vector<WitnessTuple> compatible_tuples(const ClassPair& pair) {
    std::vector<WitnessTuple> out;
    for (std::size_t pi = 0; pi < pair.p_class.members.size(); ++pi) {
        for (std::size_t di = 0; di < pair.d_class.members.size(); ++di) {
            if (is_compatible(pair, pi, di)) out.push_back({pi, di});
        }
    }
    return out;
}

ConditionVerdict check_mean_condition(const ClassPair& pair, bool full_pmf_equality) {
    const auto tuples = compatible_tuples(pair);
    for (std::size_t a = 0; a < tuples.size(); ++a) {
        for (std::size_t b = a; b < tuples.size(); ++b) {
            const auto& ta = tuples[a];
            const auto& tb = tuples[b];
            const auto& P = pair.d_class.members[ta.d_index];
            const auto& Q = pair.d_class.members[tb.d_index];
            const bool req1 = full_pmf_equality ? pmfs_equal(P, Q) : means_equal(P, Q);
            if (req1) continue;
            if (!marginals_equal(P, Q)) continue;
            const auto& p = pair.p_class.members[ta.p_index];
            const auto& q = pair.p_class.members[tb.p_index];
            if (products_differ(p, P, q, Q)) continue;
            ConditionVerdict verdict;
            verdict.holds = false;
            verdict.witness = std::make_pair(ta, tb);
            std::ostringstream msg;
            msg << "tuples (p" << ta.p_index << ", d" << ta.d_index << ") and (p" << tb.p_index
                << ", d" << tb.d_index << ") have "
                << (full_pmf_equality ? "different outcome pmfs" : "different outcome means")
                << ", equal covariate marginals, and identical censored products";
            verdict.detail = msg.str();
            return verdict;
        }
    }
    return {};
}

} // namespace

ConditionVerdict check_condition1(const ClassPair& pair) {
    return check_mean_condition(pair, /*full_pmf_equality=*/false);
}

ConditionVerdict check_condition6(const ClassPair& pair) {
    return check_mean_condition(pair, /*full_pmf_equality=*/true);
}

ConditionVerdict check_condition2(const DistributionClass& d_class, double c) {
    if (!(c > 0.0 && c < 0.5)) {
        throw std::invalid_argument("condition 2: c must lie in (0, 1/2)");
    }
    const double lo = c / (1.0 - c);
    const double hi = (1.0 - c) / c;
    const auto& members = d_class.members;
    const std::size_t ny = d_class.grid->num_outcomes();
    for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
            const auto& P = members[a];
            const auto& Q = members[b];
            if (means_equal(P, Q)) continue;
            if (!marginals_equal(P, Q)) continue;
            bool witness_cell = false;
            const std::size_t nx = d_class.grid->num_covariates();
            for (std::size_t i = 0; i < nx && !witness_cell; ++i) {
                if (P.x_marginal(i) <= 0.0) continue;
                for (std::size_t j = 0; j < ny; ++j) {
                    const double pm = P.mass(i, j);
                    const double qm = Q.mass(i, j);
                    if (pm == 0.0 && qm == 0.0) continue;
                    if (qm == 0.0) { // infinite ratio
                        witness_cell = true;
                        break;
                    }
                    const double ratio = pm / qm;
                    if (!(ratio > lo && ratio < hi)) {
                        witness_cell = true;
                        break;
                    }
                }
            }
            if (!witness_cell) {
                ConditionVerdict verdict;
                verdict.holds = false;
                verdict.witness = std::make_pair(WitnessTuple{0, a}, WitnessTuple{0, b});
                std::ostringstream msg;
                msg << "members d" << a << " and d" << b
                    << " have different means, equal covariate marginals, and density"
                       " ratios confined to ("
                    << lo << ", " << hi << ")";
                verdict.detail = msg.str();
                return verdict;
            }
        }
    }
    return {};
}

ConditionVerdict check_condition3(const DistributionClass& d_class, double c) {
    if (!(c > 0.0 && c < 0.5)) {
        throw std::invalid_argument("condition 3: c must lie in (0, 1/2)");
    }
    const auto& members = d_class.members;
    const std::size_t nx = d_class.grid->num_covariates();
    const std::size_t ny = d_class.grid->num_outcomes();
    for (std::size_t k = 0; k < members.size(); ++k) {
        for (std::size_t i = 0; i < nx; ++i) {
            if (members[k].x_marginal(i) <= 0.0) {
                throw PreconditionError("condition 3: member d" + std::to_string(k) +
                                        " lacks full covariate support (x index " +
                                        std::to_string(i) + ")");
            }
        }
    }
    for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
            const auto& P = members[a];
            const auto& Q = members[b];
            if (means_equal(P, Q)) continue;
            if (!marginals_equal(P, Q)) continue;
            std::vector<std::size_t> agreement;
            for (std::size_t i = 0; i < nx; ++i) {
                bool rows_equal = true;
                for (std::size_t j = 0; j < ny; ++j) {
                    if (std::fabs(P.mass(i, j) - Q.mass(i, j)) > kPmfTol) {
                        rows_equal = false;
                        break;
                    }
                }
                if (rows_equal) agreement.push_back(i);
            }
            const double vol = d_class.grid->volume(agreement);
            if (vol >= c) {
                ConditionVerdict verdict;
                verdict.holds = false;
                verdict.witness = std::make_pair(WitnessTuple{0, a}, WitnessTuple{0, b});
                std::ostringstream msg;
                msg << "members d" << a << " and d" << b
                    << " have different means, equal covariate marginals, and agree on a"
                       " covariate region of volume "
                    << vol << " >= " << c;
                verdict.detail = msg.str();
                return verdict;
            }
        }
    }
    return {};
}

namespace {

EffectGap effect_gap(const ObservationalStudy& s1, const ObservationalStudy& s2) {
    EffectGap gap;
    gap.ate = ate(s1) - ate(s2);
    if (pr_treated(s1) > 0.0 && pr_treated(s2) > 0.0) {
        gap.att = att(s1) - att(s2);
    }
    const std::size_t nx = s1.grid()->num_covariates();
    for (std::size_t i = 0; i < nx; ++i) {
        const bool supported = s1.d0.x_marginal(i) > 0.0 && s1.d1.x_marginal(i) > 0.0 &&
                               s2.d0.x_marginal(i) > 0.0 && s2.d1.x_marginal(i) > 0.0;
        if (supported) {
            gap.hte_max = std::max(gap.hte_max, std::fabs(hte(s1, i) - hte(s2, i)));
        }
    }
    return gap;
}

double max_cell_gap(const CensoredPMF& a, const CensoredPMF& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.raw().size(); ++k) {
        m = std::max(m, std::fabs(a.raw()[k] - b.raw()[k]));
    }
    return m;
}

CounterexamplePair assemble_counterexample(ObservationalStudy s1, ObservationalStudy s2,
                                           bool relabeled = false) {
    CensoredPMF shared = censor(s1);
    EffectGap gap = effect_gap(s1, s2);
    return CounterexamplePair{std::move(s1), std::move(s2), std::move(shared), gap, relabeled};
}

} // namespace

void certify_counterexample(const CounterexamplePair& cex, Estimand estimand) {
    if (auto bad = validate_study(cex.study1)) {
        throw PreconditionError("counterexample: study1 invalid: " + *bad);
    }
    if (auto bad = validate_study(cex.study2)) {
        throw PreconditionError("counterexample: study2 invalid: " + *bad);
    }
    const double gap_cells = max_cell_gap(censor(cex.study1), censor(cex.study2));
    if (gap_cells > kCertTol) {
        throw PreconditionError("counterexample: censored laws differ by " +
                                std::to_string(gap_cells) + " per cell");
    }
    double g = 0.0;
    switch (estimand) {
        case Estimand::ate: g = std::fabs(cex.delta.ate); break;
        case Estimand::att: g = cex.delta.att ? std::fabs(*cex.delta.att) : 0.0; break;
        case Estimand::hte: g = cex.delta.hte_max; break;
    }
    if (!(g > 0.0)) {
        throw PreconditionError("counterexample: " + to_string(estimand) + " gap vanishes");
    }
}

CounterexamplePair build_indistinguishable_pair(const ClassPair& pair, const WitnessTuple& a,
                                                const WitnessTuple& b, Estimand estimand) {
    const auto& P = pair.d_class.members[a.d_index];
    const auto& Q = pair.d_class.members[b.d_index];
    const auto& p = pair.p_class.members[a.p_index];
    const auto& q = pair.p_class.members[b.p_index];
    if (estimand == Estimand::hte ? pmfs_equal(P, Q) : means_equal(P, Q)) {
        throw PreconditionError("indistinguishable pair: witness outcome laws do not differ");
    }
    if (!marginals_equal(P, Q)) {
        throw PreconditionError("indistinguishable pair: covariate marginals differ");
    }
    if (products_differ(p, P, q, Q)) {
        throw PreconditionError("indistinguishable pair: censored products differ");
    }
    const auto witness = is_compatible(pair, a.p_index, a.d_index);
    if (!witness) {
        throw PreconditionError("indistinguishable pair: witness not compatible");
    }
    const auto& p_hat = pair.p_class.members[witness->p_index];
    const auto& d_hat = pair.d_class.members[witness->d_index];

    ObservationalStudy s1{P, d_hat, p, p_hat};
    ObservationalStudy s2{Q, d_hat, q, p_hat};
    bool relabeled = false;
    if (pr_treated(s1) <= 0.0) {
        // Swap the arm roles in both studies so the treated group has mass
        // and the treated-effect gap is defined.
        s1 = ObservationalStudy{s1.d1, s1.d0, s1.p1, s1.p0};
        s2 = ObservationalStudy{s2.d1, s2.d0, s2.p1, s2.p0};
        relabeled = true;
    }
    auto cex = assemble_counterexample(std::move(s1), std::move(s2), relabeled);
    certify_counterexample(cex, estimand);
    return cex;
}

CounterexamplePair build_scenario3_counterexample(const JointPMF& p_dist, const JointPMF& q_dist,
                                                  const std::vector<std::size_t>& s, double c) {
    if (!same_grid(p_dist.grid(), q_dist.grid())) {
        throw std::invalid_argument("scenario 3 counterexample: grids differ");
    }
    const auto& grid = p_dist.grid();
    if (!(c > 0.0 && c < 0.5)) {
        throw std::invalid_argument("scenario 3 counterexample: c must lie in (0, 1/2)");
    }
    if (grid->volume(s) < c) {
        throw PreconditionError("scenario 3 counterexample: vol(S) below c");
    }
    if (!marginals_equal(p_dist, q_dist)) {
        throw PreconditionError("scenario 3 counterexample: covariate marginals differ");
    }
    if (means_equal(p_dist, q_dist)) {
        throw PreconditionError("scenario 3 counterexample: outcome means do not differ");
    }
    const std::size_t ny = grid->num_outcomes();
    std::vector<bool> in_s(grid->num_covariates(), false);
    for (std::size_t i : s) in_s[i] = true;
    for (std::size_t i = 0; i < in_s.size(); ++i) {
        if (!in_s[i]) continue;
        for (std::size_t j = 0; j < ny; ++j) {
            if (std::fabs(p_dist.mass(i, j) - q_dist.mass(i, j)) > kCertTol) {
                throw PreconditionError(
                    "scenario 3 counterexample: the two pmfs differ on S at x index " +
                    std::to_string(i));
            }
        }
    }
    std::vector<double> pv(grid->num_cells(), 0.0);
    for (std::size_t i = 0; i < in_s.size(); ++i) {
        if (in_s[i]) {
            for (std::size_t j = 0; j < ny; ++j) pv[i * ny + j] = 0.5;
        }
    }
    PropensityTable p0(grid, std::move(pv));
    PropensityTable p1 = p0.complement();
    ObservationalStudy s1{p_dist, p_dist, p0, p1};
    ObservationalStudy s2{q_dist, p_dist, p0, p1};
    auto cex = assemble_counterexample(std::move(s1), std::move(s2));
    certify_counterexample(cex, Estimand::ate);
    return cex;
}

CounterexamplePair build_overlap_zero_counterexample(const PropensityTable& p, std::size_t x,
                                                     std::size_t y1, std::size_t y2,
                                                     double mass_delta) {
    const auto& grid = p.grid();
    if (y1 == y2) {
        throw std::invalid_argument("overlap-zero counterexample: outcome cells must differ");
    }
    if (p.value(x, y1) != 0.0 || p.value(x, y2) != 0.0) {
        throw PreconditionError(
            "overlap-zero counterexample: propensity positive at a designated cell");
    }
    const std::size_t nx = grid->num_covariates();
    const std::size_t ny = grid->num_outcomes();
    const double base = 1.0 / static_cast<double>(nx * ny);
    if (!(mass_delta > 0.0)) {
        throw PreconditionError("overlap-zero counterexample: zero mass moved (gap 0)");
    }
    if (mass_delta > base) {
        throw PreconditionError("overlap-zero counterexample: mass to move exceeds cell mass");
    }
    std::vector<double> pm(nx * ny, base);
    std::vector<double> qm = pm;
    qm[x * ny + y1] = base + mass_delta;
    qm[x * ny + y2] = base - mass_delta;
    JointPMF P(grid, std::move(pm));
    JointPMF Q(grid, std::move(qm));
    PropensityTable p_hat = p.complement();
    ObservationalStudy s1{P, P, p, p_hat};
    ObservationalStudy s2{Q, P, p, p_hat};
    auto cex = assemble_counterexample(std::move(s1), std::move(s2));
    certify_counterexample(cex, Estimand::ate);
    return cex;
}

BruteForceResult brute_force_identifiable(const ClassPair& pair, Estimand estimand) {
    const auto realizable = enumerate_realizable(pair);
    BruteForceResult result;
    result.num_realizable = realizable.size();
    for (std::size_t i = 0; i < realizable.size(); ++i) {
        const CensoredPMF ci = censor(realizable[i].study);
        for (std::size_t j = i + 1; j < realizable.size(); ++j) {
            const auto& s1 = realizable[i].study;
            const auto& s2 = realizable[j].study;
            if (estimand == Estimand::att &&
                (pr_treated(s1) <= 0.0 || pr_treated(s2) <= 0.0)) {
                continue; // treated-effect undefined; nothing to distinguish
            }
            const CensoredPMF cj = censor(s2);
            if (max_cell_gap(ci, cj) > kCertTol) continue;
            const EffectGap gap = effect_gap(s1, s2);
            double g = 0.0;
            switch (estimand) {
                case Estimand::ate: g = std::fabs(gap.ate); break;
                case Estimand::att: g = gap.att ? std::fabs(*gap.att) : 0.0; break;
                case Estimand::hte: g = gap.hte_max; break;
            }
            if (g > kPmfTol) {
                result.identifiable = false;
                result.counterexample = assemble_counterexample(s1, s2);
                return result;
            }
        }
    }
    return result;
}

} // namespace causalid
