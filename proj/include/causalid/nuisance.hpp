#pragma once

#include <vector>

#include "causalid/classes.hpp"
#include "causalid/errors.hpp"

namespace causalid {

/// Covariate-only treatment probability hypothesis: one value per
/// covariate grid point.
using CovariatePropensity = std::vector<double>;

/// Empirical-risk pick for Pr[T=arm | X=x]: the class member minimizing
/// sum_i (1{t_i = arm} - e(x_i))^2, ties broken by lowest index.
std::size_t estimate_propensity(const SampleVec& samples,
                                const std::vector<CovariatePropensity>& e_class, int arm = 1);

/// Observed counts per (covariate, treatment, outcome) cell.
struct EmpiricalCensored {
    GridPtr grid;
    std::vector<std::size_t> counts; // layout [(xi * 2 + t) * ny + yi]
    std::size_t n = 0;

    std::vector<double> pmf() const;
    std::size_t arm_count(int t) const;
    /// Empirical pmf over (x, y) cells among samples with T = t.
    std::vector<double> arm_conditional(int t) const;
};

EmpiricalCensored empirical_censored(const SampleVec& samples, GridPtr grid);

/// Minimum-distance selection among candidate pmfs on a shared finite
/// space. For each ordered pair the Scheffe set A_ij = {z : f_i(z) > f_j(z)}
/// is formed, and the winner is argmin_j max_i |f_j(A_ij) - empirical(A_ij)|
/// with ties broken by lowest index. zeta is the deviation scale of the
/// selection guarantee (3 min_i L1(f_i, truth) + 4 zeta) and must be
/// positive; it does not enter the selection rule itself.
std::size_t yatracos_select(const std::vector<std::vector<double>>& candidates,
                            const std::vector<double>& empirical, double zeta);

/// One candidate explanation of an arm of the censored law: the product
/// p(x,y) * P(x,y), its normalizer z = sum p*P (the candidate's Pr[T=arm]),
/// and the normalized table.
struct CandidateProduct {
    std::size_t p_index = 0;
    std::size_t d_index = 0;
    int arm = 0;
    double z = 0.0;
    std::vector<double> normalized; // (p*P)/z over (x, y) cells; empty when z = 0
};

std::vector<CandidateProduct> build_candidate_products(const ClassPair& pair, int arm);

/// Unnormalized product table p(x,y) * P(x,y) for a tuple of the pair.
std::vector<double> product_table(const ClassPair& pair, std::size_t p_index,
                                  std::size_t d_index);

struct ArmSelection {
    std::size_t p_index = 0;
    std::size_t d_index = 0;
    double z = 0.0;                  // candidate normalizer
    double empirical_arm_mass = 0.0; // observed share of samples with T = arm
    std::size_t arm_samples = 0;
};

struct L1OracleResult {
    ArmSelection control; // approximates p0 * d0
    ArmSelection treated; // approximates p1 * d1
    double zeta = 0.0;    // tournament deviation scale used (eps / 8)
};

/// Arm tournament against the empirical arm-conditional law with an
/// explicit normalizer floor; the building block behind l1_oracle and the
/// weak-overlap estimator phases.
ArmSelection select_product_for_arm(const ClassPair& pair, const EmpiricalCensored& emp,
                                    int arm, double floor, double zeta);

/// Selects, per arm, the tuple whose normalized product wins the Scheffe
/// tournament against the empirical arm-conditional law. Candidates whose
/// normalizer falls below eta - eps are excluded. Requires eta in (0, 1/2]
/// and a sampled study with Pr[T=1] inside (eta, 1 - eta).
L1OracleResult l1_oracle(const ClassPair& pair, const SampleVec& samples, double eps,
                         double eta);

/// The winner's product rescaled by the empirical arm share: the oracle's
/// approximation of p_arm * d_arm.
std::vector<double> rescaled_product(const ClassPair& pair, const ArmSelection& sel);

} // namespace causalid
