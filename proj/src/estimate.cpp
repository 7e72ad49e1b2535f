#include "causalid/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace causalid {

double ipw_estimate(const SampleVec& samples, const GridPtr& grid,
                    const CovariatePropensity& e) {
    if (samples.empty()) throw PreconditionError("ipw: no samples");
    if (e.size() != grid->num_covariates()) {
        throw std::invalid_argument("ipw: propensity length does not match grid");
    }
    double treated = 0.0, control = 0.0;
    for (const auto& s : samples) {
        const double y = grid->outcome(s.y);
        if (s.t == 1) {
            if (e[s.x] <= 0.0) throw PreconditionError("ipw: zero propensity at treated sample");
            treated += y / e[s.x];
        } else {
            if (e[s.x] >= 1.0) throw PreconditionError("ipw: unit propensity at control sample");
            control += y / (1.0 - e[s.x]);
        }
    }
    const double m = static_cast<double>(samples.size());
    return treated / m - control / m;
}

double ipw_population_value(const ObservationalStudy& study) {
    const auto& grid = study.grid();
    const std::size_t nx = grid->num_covariates();
    const std::size_t ny = grid->num_outcomes();
    double out = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        if (std::max(study.d0.x_marginal(i), study.d1.x_marginal(i)) <= 0.0) continue;
        const double e = true_propensity(study, i);
        for (std::size_t j = 0; j < ny; ++j) {
            const double y = grid->outcome(j);
            if (e > 0.0) out += y * study.p1.value(i, j) * study.d1.mass(i, j) / e;
            if (e < 1.0) out -= y * study.p0.value(i, j) * study.d0.mass(i, j) / (1.0 - e);
        }
    }
    return out;
}

double naive_arm_mean_difference(const ObservationalStudy& study) {
    const auto cpmf = censor(study);
    const auto& grid = study.grid();
    const std::size_t nx = grid->num_covariates();
    const std::size_t ny = grid->num_outcomes();
    double y1 = 0.0, y0 = 0.0, m1 = 0.0, m0 = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const double y = grid->outcome(j);
            y1 += y * cpmf.mass(i, 1, j);
            y0 += y * cpmf.mass(i, 0, j);
            m1 += cpmf.mass(i, 1, j);
            m0 += cpmf.mass(i, 0, j);
        }
    }
    if (m1 <= 0.0 || m0 <= 0.0) {
        throw PreconditionError("naive arm means: an arm carries no mass");
    }
    return y1 / m1 - y0 / m0;
}

EstimateReport estimate_scenario1(const SampleVec& samples, const GridPtr& grid,
                                  const std::vector<CovariatePropensity>& e_class, double c) {
    if (!(c > 0.0 && c < 0.5)) {
        throw std::invalid_argument("scenario 1: c must lie in (0, 1/2)");
    }
    const std::size_t half = samples.size() / 2;
    const SampleVec fit(samples.begin(), samples.begin() + static_cast<long>(half));
    const SampleVec est(samples.begin() + static_cast<long>(half), samples.end());
    if (fit.empty() || est.empty()) {
        throw PreconditionError("scenario 1: not enough samples to split");
    }
    const std::size_t pick = estimate_propensity(fit, e_class, 1);
    const auto& e = e_class[pick];
    for (const auto& s : est) {
        if (!(e[s.x] > c && e[s.x] < 1.0 - c)) {
            throw PreconditionError("scenario 1: fitted propensity violates c-overlap at x index " +
                                    std::to_string(s.x));
        }
    }
    EstimateReport report;
    report.scenario = "1";
    report.n = samples.size();
    report.propensity_pick_treated = pick;
    report.tau_hat = ipw_estimate(est, grid, e);
    return report;
}

EstimateReport estimate_scenario2(const SampleVec& samples, const ClassPair& pair, double c,
                                  double eps, std::optional<double> mass_value) {
    if (!(c > 0.0 && c < 0.5)) {
        throw std::invalid_argument("scenario 2: c must lie in (0, 1/2)");
    }
    for (std::size_t k = 0; k < pair.p_class.members.size(); ++k) {
        if (!member_check(pair.p_class.members[k], PropensityTag::overlap, c)) {
            throw std::invalid_argument("scenario 2: propensity member " + std::to_string(k) +
                                        " violates c-overlap");
        }
    }
    const double mass =
        mass_value ? *mass_value : compute_mass_function(pair.d_class, c, eps / 2.0).value;
    // Oracle accuracy M(eps/2)/2; a vanishing mass leaves the candidate
    // floor at eta and a nominal tournament scale.
    const double oracle_eps = std::max(mass / 2.0, 1e-9);
    const L1OracleResult sel = l1_oracle(pair, samples, oracle_eps, c);

    EstimateReport report;
    report.scenario = "2";
    report.n = samples.size();
    report.treated_pick = sel.treated;
    report.control_pick = sel.control;
    const double mean_treated = pair.d_class.members[sel.treated.d_index].mean_outcome();
    const double mean_control = pair.d_class.members[sel.control.d_index].mean_outcome();
    report.tau_hat = mean_treated - mean_control;
    return report;
}

namespace {

struct ArmPhaseResult {
    std::size_t propensity_pick = 0;
    std::vector<std::size_t> s_hat;
    std::size_t eliminated = 0;
    ArmSelection tournament;
    std::size_t refined = 0;
};

// Phases 2-5 of the weak-overlap estimator for one arm, given the fitted
// (or exact) covariate propensity for that arm.
ArmPhaseResult run_weak_overlap_arm(const ClassPair& pair, const EmpiricalCensored& emp_phase2,
                                    int arm, const CovariatePropensity& e_hat, double c,
                                    double eps) {
    const auto& grid = pair.grid();
    const std::size_t nx = grid->num_covariates();
    const std::size_t ny = grid->num_outcomes();

    ArmPhaseResult result;
    for (std::size_t i = 0; i < nx; ++i) {
        if (e_hat[i] >= c - eps) result.s_hat.push_back(i);
    }
    if (result.s_hat.empty()) {
        throw PreconditionError("weak-overlap estimator: weak-overlap region not found (arm " +
                                std::to_string(arm) + ")");
    }

    const double keep_threshold = c - std::sqrt(eps);
    std::vector<std::size_t> kept;
    for (std::size_t di = 0; di < pair.d_class.members.size(); ++di) {
        if (pair.d_class.members[di].covariate_set_mass(result.s_hat) >= keep_threshold) {
            kept.push_back(di);
        }
    }
    result.eliminated = pair.d_class.members.size() - kept.size();
    if (kept.empty()) {
        throw PreconditionError(
            "weak-overlap estimator: every distribution member eliminated (arm " +
            std::to_string(arm) + ")");
    }

    DistributionClass reduced;
    reduced.grid = pair.d_class.grid;
    reduced.family = pair.d_class.family;
    reduced.degree = pair.d_class.degree;
    for (std::size_t di : kept) reduced.members.push_back(pair.d_class.members[di]);
    const ClassPair reduced_pair{pair.p_class, std::move(reduced)};

    const double floor = 2.0 * c - eps;
    ArmSelection sel =
        select_product_for_arm(reduced_pair, emp_phase2, arm, floor, eps / 8.0);
    sel.d_index = kept[sel.d_index]; // back to original indexing
    result.tournament = sel;

    // Final phase: member closest on the overlap region to the selected
    // product divided by the fitted propensity.
    const auto& p_sel = pair.p_class.members[sel.p_index];
    const auto& d_sel = pair.d_class.members[sel.d_index];
    double best_obj = std::numeric_limits<double>::infinity();
    std::size_t best = kept.front();
    for (std::size_t di : kept) {
        const auto& candidate = pair.d_class.members[di];
        double obj = 0.0;
        for (std::size_t i : result.s_hat) {
            for (std::size_t j = 0; j < ny; ++j) {
                const double target = p_sel.value(i, j) * d_sel.mass(i, j) / e_hat[i];
                obj += std::fabs(candidate.mass(i, j) - target);
            }
        }
        if (obj < best_obj) {
            best_obj = obj;
            best = di;
        }
    }
    result.refined = best;
    return result;
}

EstimateReport weak_overlap_estimate(const SampleVec& samples, const ClassPair& pair, double c,
                                     double eps,
                                     const std::optional<std::array<CovariatePropensity, 2>>&
                                         fixed_propensity) {
    if (!(c > 0.0 && c < 0.5)) {
        throw std::invalid_argument("weak-overlap estimator: c must lie in (0, 1/2)");
    }
    if (!(eps > 0.0 && eps < c)) {
        throw std::invalid_argument("weak-overlap estimator: eps must lie in (0, c)");
    }
    const std::size_t third = samples.size() / 3;
    if (third == 0) {
        throw PreconditionError("weak-overlap estimator: not enough samples to split");
    }
    // The sampled study must keep both arm masses inside (2c, 1-2c); the
    // observed shares are checked against the same eps slack used elsewhere.
    std::size_t treated_count = 0;
    for (const auto& s : samples) treated_count += s.t;
    const double share = static_cast<double>(treated_count) / static_cast<double>(samples.size());
    if (share < 2.0 * c - eps || share > 1.0 - (2.0 * c - eps)) {
        throw PreconditionError(
            "weak-overlap estimator: observed treated share " + std::to_string(share) +
            " leaves (2c - eps, 1 - 2c + eps); the study violates the arm-mass precondition");
    }
    const SampleVec split1(samples.begin(), samples.begin() + static_cast<long>(third));
    const SampleVec split2(samples.begin() + static_cast<long>(third),
                           samples.begin() + static_cast<long>(2 * third));
    const SampleVec split3(samples.begin() + static_cast<long>(2 * third), samples.end());

    std::vector<CovariatePropensity> e_class;
    if (!fixed_propensity) {
        const std::size_t nx = pair.grid()->num_covariates();
        for (const auto& member : pair.p_class.members) {
            CovariatePropensity e(nx);
            for (std::size_t i = 0; i < nx; ++i) e[i] = member.value(i, 0);
            e_class.push_back(std::move(e));
        }
    }

    const auto emp2 = empirical_censored(split2, pair.grid());

    EstimateReport report;
    report.n = samples.size();
    std::array<ArmPhaseResult, 2> arm_results;
    for (int arm = 0; arm <= 1; ++arm) {
        CovariatePropensity e_hat;
        std::optional<std::size_t> pick;
        if (fixed_propensity) {
            e_hat = (*fixed_propensity)[static_cast<std::size_t>(arm)];
        } else {
            pick = estimate_propensity(split1, e_class, arm);
            e_hat = e_class[*pick];
        }
        auto res = run_weak_overlap_arm(pair, emp2, arm, e_hat, c, eps);
        if (pick) res.propensity_pick = *pick;
        if (arm == 1) {
            report.propensity_pick_treated = pick;
            report.s_hat_treated = res.s_hat;
            report.eliminated_treated = res.eliminated;
            report.treated_pick = res.tournament;
            report.refined_treated = res.refined;
        } else {
            report.propensity_pick_control = pick;
            report.s_hat_control = res.s_hat;
            report.eliminated_control = res.eliminated;
            report.control_pick = res.tournament;
            report.refined_control = res.refined;
        }
        arm_results[static_cast<std::size_t>(arm)] = std::move(res);
    }
    (void)split3; // the closest-member phase is exact on finite classes
    const double mean1 = pair.d_class.members[arm_results[1].refined].mean_outcome();
    const double mean0 = pair.d_class.members[arm_results[0].refined].mean_outcome();
    report.tau_hat = mean1 - mean0;
    return report;
}

} // namespace

EstimateReport estimate_scenario3(const SampleVec& samples, const ClassPair& pair, double c,
                                  double eps) {
    for (std::size_t k = 0; k < pair.p_class.members.size(); ++k) {
        if (!member_check(pair.p_class.members[k], PropensityTag::weak_overlap, c)) {
            throw std::invalid_argument("scenario 3: propensity member " + std::to_string(k) +
                                        " violates unconfoundedness with c-weak-overlap");
        }
    }
    EstimateReport report = weak_overlap_estimate(samples, pair, c, eps, std::nullopt);
    report.scenario = "3";
    return report;
}

EstimateReport estimate_rd(const SampleVec& samples, const std::vector<std::size_t>& s,
                           const DistributionClass& d_class, double c, double eps) {
    const auto& grid = d_class.grid;
    std::vector<bool> in_s(grid->num_covariates(), false);
    for (std::size_t i : s) {
        if (i >= in_s.size()) throw std::invalid_argument("rd: covariate index out of range");
        in_s[i] = true;
    }
    for (const auto& sample : samples) {
        const bool treated_region = in_s[sample.x];
        if ((sample.t == 1) != treated_region) {
            throw PreconditionError("not an RD design: sample treatment contradicts the"
                                    " indicator rule");
        }
    }
    PropensityTable p1 = PropensityTable::indicator(grid, s);
    PropensityTable p0 = p1.complement();
    if (!member_check(p1, PropensityTag::rd, c) || !member_check(p0, PropensityTag::rd, c)) {
        throw std::invalid_argument("rd: indicator set or its complement has volume <= c");
    }
    PropensityClass p_class{grid, {p0, p1}, PropensityTag::rd, c};
    const ClassPair pair = make_class_pair(std::move(p_class), d_class);

    const std::size_t nx = grid->num_covariates();
    std::array<CovariatePropensity, 2> exact;
    exact[0].assign(nx, 0.0);
    exact[1].assign(nx, 0.0);
    for (std::size_t i = 0; i < nx; ++i) {
        exact[1][i] = in_s[i] ? 1.0 : 0.0;
        exact[0][i] = 1.0 - exact[1][i];
    }
    EstimateReport report = weak_overlap_estimate(samples, pair, c, eps, exact);
    report.scenario = "rd";
    report.note = "exact indicator propensity; extrapolation off the treated region comes"
                  " from the distribution-class structure";
    return report;
}

MassFunctionResult compute_mass_function(const DistributionClass& d_class, double c,
                                         double eps) {
    if (!(c > 0.0 && c < 0.5)) {
        throw std::invalid_argument("mass function: c must lie in (0, 1/2)");
    }
    const double lo = c / (2.0 * (1.0 - c));
    const double hi = 2.0 * (1.0 - c) / c;
    MassFunctionResult result;
    const auto& members = d_class.members;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
            const auto& P = members[a];
            const auto& Q = members[b];
            if (std::fabs(P.mean_outcome() - Q.mean_outcome()) <= eps) continue;
            result.vacuous = false;
            double mass_p = 0.0, mass_q = 0.0;
            for (std::size_t k = 0; k < P.raw().size(); ++k) {
                const double pm = P.raw()[k];
                const double qm = Q.raw()[k];
                bool outside;
                if (pm == 0.0 && qm == 0.0) {
                    outside = false;
                } else if (qm == 0.0 || pm == 0.0) {
                    outside = true;
                } else {
                    const double ratio = pm / qm;
                    outside = !(ratio > lo && ratio < hi);
                }
                if (outside) {
                    mass_p += pm;
                    mass_q += qm;
                }
            }
            const double pair_mass = std::min(mass_p, mass_q);
            if (pair_mass < worst) {
                worst = pair_mass;
                result.binding_pair = std::make_pair(a, b);
            }
        }
    }
    result.value = result.vacuous ? 1.0 : c * worst;
    return result;
}

namespace {

double truncated_tv(const JointPMF& P, const JointPMF& Q, const std::vector<bool>& in_s) {
    const std::size_t nx = P.grid()->num_covariates();
    const std::size_t ny = P.grid()->num_outcomes();
    double zp = 0.0, zq = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        if (in_s[i]) {
            zp += P.x_marginal(i);
            zq += Q.x_marginal(i);
        }
    }
    if (zp <= 0.0 || zq <= 0.0) return 0.0; // empty truncation; treated as indistinguishable
    double tv = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        if (!in_s[i]) continue;
        for (std::size_t j = 0; j < ny; ++j) {
            tv += std::fabs(P.mass(i, j) / zp - Q.mass(i, j) / zq);
        }
    }
    return 0.5 * tv;
}

} // namespace

ExtrapolationConstant compute_extrapolation_constant(const DistributionClass& d_class, double c,
                                                     std::size_t exhaustive_cap) {
    if (!(c > 0.0 && c < 1.0)) {
        throw std::invalid_argument("extrapolation constant: c must lie in (0, 1)");
    }
    const std::size_t nx = d_class.grid->num_covariates();
    const auto& members = d_class.members;
    ExtrapolationConstant result;
    result.exact = nx <= exhaustive_cap;

    auto consider = [&](std::size_t a, std::size_t b, const std::vector<bool>& in_s,
                        double gap) {
        // Mean gaps below the pmf tolerance count as equal means (ratio 0),
        // so duplicate members reached through different parameterizations
        // do not masquerade as non-extrapolatable.
        if (gap <= kPmfTol) gap = 0.0;
        const double tv = truncated_tv(members[a], members[b], in_s);
        double ratio;
        if (tv > 0.0) {
            ratio = gap / tv;
        } else if (gap > 0.0) {
            ratio = std::numeric_limits<double>::infinity();
        } else {
            ratio = 0.0;
        }
        if (ratio > result.value || (std::isinf(ratio) && result.finite)) {
            result.value = ratio;
            result.finite = !std::isinf(ratio);
            result.binding_pair = std::make_pair(a, b);
            result.binding_set.clear();
            for (std::size_t i = 0; i < in_s.size(); ++i) {
                if (in_s[i]) result.binding_set.push_back(i);
            }
        }
    };

    for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
            const double gap =
                std::fabs(members[a].mean_outcome() - members[b].mean_outcome());
            if (result.exact) {
                const std::size_t limit = std::size_t{1} << nx;
                for (std::size_t mask = 1; mask < limit; ++mask) {
                    std::vector<bool> in_s(nx, false);
                    std::size_t count = 0;
                    for (std::size_t i = 0; i < nx; ++i) {
                        if (mask & (std::size_t{1} << i)) {
                            in_s[i] = true;
                            ++count;
                        }
                    }
                    if (static_cast<double>(count) / static_cast<double>(nx) <= c) continue;
                    consider(a, b, in_s, gap);
                }
            } else {
                // Greedy fallback: order covariates by their per-point
                // discrepancy and scan admissible prefixes of the
                // most-agreeing points.
                std::vector<std::pair<double, std::size_t>> order(nx);
                const std::size_t ny = d_class.grid->num_outcomes();
                for (std::size_t i = 0; i < nx; ++i) {
                    double row = 0.0;
                    for (std::size_t j = 0; j < ny; ++j) {
                        row += std::fabs(members[a].mass(i, j) - members[b].mass(i, j));
                    }
                    order[i] = {row, i};
                }
                std::sort(order.begin(), order.end());
                for (std::size_t size = 1; size <= nx; ++size) {
                    if (static_cast<double>(size) / static_cast<double>(nx) <= c) continue;
                    std::vector<bool> in_s(nx, false);
                    for (std::size_t k = 0; k < size; ++k) in_s[order[k].second] = true;
                    consider(a, b, in_s, gap);
                }
            }
        }
    }
    return result;
}

} // namespace causalid
