#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "causalid/nuisance.hpp"

namespace causalid {

/// Point estimate with enough diagnostics to replay it deterministically.
/// Estimators read censored samples and class specs only; ground truth is
/// filled in by the harness when a generating study is known.
struct EstimateReport {
    double tau_hat = 0.0;
    std::string scenario;
    std::size_t n = 0;
    std::uint64_t seed = 0;

    std::optional<std::size_t> propensity_pick_treated;
    std::optional<std::size_t> propensity_pick_control;
    std::optional<ArmSelection> treated_pick;
    std::optional<ArmSelection> control_pick;
    std::vector<std::size_t> s_hat_treated;
    std::vector<std::size_t> s_hat_control;
    std::size_t eliminated_treated = 0;
    std::size_t eliminated_control = 0;
    std::optional<std::size_t> refined_treated;
    std::optional<std::size_t> refined_control;
    std::string note;

    std::optional<double> ground_truth;
    std::optional<double> error;
};

/// Inverse-propensity-weighted estimate with a fixed covariate propensity:
/// mean of y*t/e(x) minus mean of y*(1-t)/(1-e(x)).
double ipw_estimate(const SampleVec& samples, const GridPtr& grid,
                    const CovariatePropensity& e);

/// Population value of the standard IPW functional under a study, by exact
/// summation. Differs from the ATE when treatment depends on outcomes.
double ipw_population_value(const ObservationalStudy& study);

/// Population difference of observed arm means E[Y|T=1] - E[Y|T=0].
double naive_arm_mean_difference(const ObservationalStudy& study);

/// Fits the propensity on the first half of the samples and applies the
/// weighted estimator on the second half. Every class member must respect
/// c-overlap at each observed covariate.
EstimateReport estimate_scenario1(const SampleVec& samples, const GridPtr& grid,
                                  const std::vector<CovariatePropensity>& e_class, double c);

/// Tournament estimator for overlap without unconfoundedness: selects, per
/// arm, the (propensity, distribution) tuple explaining that arm of the
/// censored law and reports the difference of the selected outcome means.
/// The oracle accuracy is M(eps/2)/2 with M from compute_mass_function
/// unless a mass value is supplied.
EstimateReport estimate_scenario2(const SampleVec& samples, const ClassPair& pair, double c,
                                  double eps, std::optional<double> mass_value = std::nullopt);

/// Estimator for unconfoundedness with weak overlap. Per arm: fit the
/// treatment probability on split 1; form the region where it clears
/// c - eps; drop distribution members putting less than c - sqrt(eps) mass
/// there; run the arm tournament on split 2; then pick the member closest
/// on the region to the selected product divided by the fitted propensity.
/// Requires eps < c and 2c < Pr[T=1] < 1 - 2c in the sampled study.
EstimateReport estimate_scenario3(const SampleVec& samples, const ClassPair& pair, double c,
                                  double eps);

/// Regression-discontinuity specialization: treatment is the indicator of
/// the covariate set s, so the propensity phase is skipped and the exact
/// indicator is used. Samples inconsistent with the indicator are rejected.
EstimateReport estimate_rd(const SampleVec& samples, const std::vector<std::size_t>& s,
                           const DistributionClass& d_class, double c, double eps);

struct MassFunctionResult {
    double value = 1.0;
    bool vacuous = true; // no pair with mean gap above eps
    std::optional<std::pair<std::size_t, std::size_t>> binding_pair;
};

/// Separation mass at scale eps: over member pairs with mean gap above eps,
/// the worst-case mass (scaled by c) of the region where the density ratio
/// leaves (c/2(1-c), 2(1-c)/c). Zero means selection is not statistically
/// detectable at this scale.
MassFunctionResult compute_mass_function(const DistributionClass& d_class, double c,
                                         double eps);

struct ExtrapolationConstant {
    double value = 0.0;
    bool finite = true;
    bool exact = true; // exhaustive subset scan (vs greedy fallback)
    std::optional<std::pair<std::size_t, std::size_t>> binding_pair;
    std::vector<std::size_t> binding_set;
};

/// Worst-case ratio of untruncated mean gap to truncated total variation
/// over covariate regions of volume above c. Exhaustive over subsets when
/// the covariate grid has at most `exhaustive_cap` points, greedy
/// (discrepancy-ordered prefixes) beyond. Infinite when some pair agrees on
/// a large region but differs in mean.
ExtrapolationConstant compute_extrapolation_constant(const DistributionClass& d_class, double c,
                                                     std::size_t exhaustive_cap = 12);

} // namespace causalid
