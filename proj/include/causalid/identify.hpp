#pragma once

#include <optional>
#include <string>
#include <utility>

#include "causalid/classes.hpp"
#include "causalid/errors.hpp"

namespace causalid {

enum class Estimand { ate, att, hte };

std::string to_string(Estimand e);
Estimand estimand_from_string(const std::string& s);

/// A tuple (propensity member, distribution member) by class indices.
struct WitnessTuple {
    std::size_t p_index;
    std::size_t d_index;

    bool operator==(const WitnessTuple&) const = default;
};

/// Outcome of a condition check. When the condition fails, `witness` holds
/// the lexicographically first violating pair of tuples and `detail`
/// records which requirements broke.
struct ConditionVerdict {
    bool holds = true;
    std::optional<std::pair<WitnessTuple, WitnessTuple>> witness;
    std::string detail;
};

/// Effect gaps between the two studies of a counterexample.
struct EffectGap {
    double ate = 0.0;
    std::optional<double> att;  // absent when Pr[T=1] = 0 in either study
    double hte_max = 0.0;       // max over supported covariates
};

/// Two valid studies with identical censored laws (per cell within 1e-12)
/// but different treatment effects.
struct CounterexamplePair {
    ObservationalStudy study1;
    ObservationalStudy study2;
    CensoredPMF shared_censored;
    EffectGap delta;
    bool relabeled = false; // arms swapped to keep Pr[T=1] positive
};

/// Identifiability condition for mean effects: every compatible pair of
/// tuples has equal outcome means, or distinct covariate marginals, or
/// censored products differing somewhere on the support.
ConditionVerdict check_condition1(const ClassPair& pair);

/// Overlap-only scenario condition on the distribution class: pairs with
/// different means and equal covariate marginals must exhibit a density
/// ratio outside (c/(1-c), (1-c)/c) somewhere on the support. A zero
/// denominator against positive mass counts as outside.
ConditionVerdict check_condition2(const DistributionClass& d_class, double c);

/// Weak-overlap scenario condition: for pairs with different means and
/// equal covariate marginals, the covariate region where the two pmfs agree
/// per cell must have volume below c. Members must have full covariate
/// support.
ConditionVerdict check_condition3(const DistributionClass& d_class, double c);

/// Identifiability condition for the conditional effect: as condition 1
/// with mean equality strengthened to full pmf equality.
ConditionVerdict check_condition6(const ClassPair& pair);

/// From a pair of tuples violating condition 1 (or condition 6 when the
/// estimand is the conditional effect), constructs two valid studies
/// sharing one censored law whose effects differ. For mean effects the ATE
/// gap equals the witness mean gap. Requires a compatibility witness for
/// the first tuple in the pair.
CounterexamplePair build_indistinguishable_pair(const ClassPair& pair, const WitnessTuple& a,
                                                const WitnessTuple& b,
                                                Estimand estimand = Estimand::ate);

/// Counterexample for the weak-overlap scenario: both arms use the
/// half-on-S / zero-off-S propensity, so the two outcome laws agreeing on S
/// are indistinguishable after censoring.
CounterexamplePair build_scenario3_counterexample(const JointPMF& p_dist, const JointPMF& q_dist,
                                                  const std::vector<std::size_t>& s, double c);

/// Counterexample exploiting two zero-propensity cells: mass `mass_delta`
/// moved between outcomes y1 and y2 at covariate x is invisible after
/// censoring but shifts the mean.
CounterexamplePair build_overlap_zero_counterexample(const PropensityTable& p, std::size_t x,
                                                     std::size_t y1, std::size_t y2,
                                                     double mass_delta);

struct BruteForceResult {
    bool identifiable = true;
    std::optional<CounterexamplePair> counterexample;
    std::size_t num_realizable = 0;
};

/// Ground-truth identifiability oracle: enumerates every realizable study
/// and reports whether two of them share a censored law (per cell within
/// 1e-12) while their estimand values differ beyond 1e-9.
BruteForceResult brute_force_identifiable(const ClassPair& pair, Estimand estimand);

/// Re-checks the defining properties of a counterexample pair; throws when
/// the censored laws differ beyond 1e-12 per cell or the driving estimand
/// gap vanishes.
void certify_counterexample(const CounterexamplePair& cex, Estimand estimand = Estimand::ate);

} // namespace causalid
