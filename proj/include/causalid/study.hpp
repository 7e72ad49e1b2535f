#pragma once

#include <optional>
#include <string>

#include "causalid/pmf.hpp"
#include "causalid/rng.hpp"

namespace causalid {

/// Structural constraints a propensity table can be tagged with.
///   overlap_unconfounded : outcome-free and bounded inside (c, 1-c)
///   overlap              : bounded inside (c, 1-c)
///   weak_overlap         : outcome-free, and above c on a covariate region
///                          of volume at least c
///   rd                   : deterministic covariate indicator whose on- and
///                          off-regions both have volume above c
enum class PropensityTag { overlap_unconfounded, overlap, weak_overlap, rd, custom };

std::string to_string(PropensityTag tag);
PropensityTag propensity_tag_from_string(const std::string& s);

/// Full (unobservable) model of a study: the joint laws of (X, Y(0)) and
/// (X, Y(1)) together with the treatment probability tables of both arms.
/// d0/d1 share one grid and one covariate marginal; p0/p1 describe
/// Pr[T=0 | X, Y(0)] and Pr[T=1 | X, Y(1)].
struct ObservationalStudy {
    JointPMF d0;
    JointPMF d1;
    PropensityTable p0;
    PropensityTable p1;

    const GridPtr& grid() const { return d0.grid(); }
};

/// Checks the two study invariants: matching covariate marginals, and the
/// two arms inducing one consistent treatment probability at every
/// supported covariate (arm sums equal to one). Returns the violation
/// description, or nullopt when the study is valid.
std::optional<std::string> validate_study(const ObservationalStudy& study);

/// Observable law of (X, T, Y(T)): mass p_t(x,y) * d_t(x,y) at (x, t, y).
/// Rejects invalid studies.
CensoredPMF censor(const ObservationalStudy& study);

/// n i.i.d. draws from the censored law; deterministic given the seed.
SampleVec sample_censored(const CensoredPMF& cpmf, std::size_t n, std::uint64_t seed);

/// Pr[T = 1] under the study.
double pr_treated(const ObservationalStudy& study);

/// Average treatment effect E[Y(1)] - E[Y(0)].
double ate(const ObservationalStudy& study);

/// Average treatment effect on the treated; requires Pr[T=1] > 0.
double att(const ObservationalStudy& study);

/// Conditional treatment effect at covariate index xi.
double hte(const ObservationalStudy& study, std::size_t xi);

/// e(x) = Pr[T=1 | X=x], computed from the treated arm. For valid studies
/// this agrees with one minus the control-arm value.
double true_propensity(const ObservationalStudy& study, std::size_t xi);

/// Generates a valid study whose propensity tables satisfy the tagged
/// scenario's constraints with constant c. The treated arm is drawn freely
/// within the class and the control arm is derived as the arm-sum
/// complement, so validity holds by construction.
ObservationalStudy make_random_study(GridPtr grid, PropensityTag tag, std::uint64_t seed,
                                     double c = 0.25);

} // namespace causalid
