#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "causalid/study.hpp"

namespace causalid {

/// One monomial term: coeff * prod_k x_k^{x_powers[k]} * y^{y_power}.
struct PolyTerm {
    std::vector<unsigned> x_powers;
    unsigned y_power = 0;
    double coeff = 0.0;
};

struct Polynomial {
    std::vector<PolyTerm> terms;

    double eval(const std::vector<double>& x, double y) const;
    unsigned degree() const;
};

/// Monomial basis of total degree <= degree over a d-dimensional covariate
/// (plus the outcome variable when include_outcome is set), in graded
/// lexicographic order. Coefficients are left at zero.
std::vector<PolyTerm> monomial_basis(std::size_t dim, unsigned degree, bool include_outcome);

enum class DistributionFamily { tabular, poly_logdensity, poly_expectation, custom };

std::string to_string(DistributionFamily f);
DistributionFamily distribution_family_from_string(const std::string& s);

/// Finite enumerated class of generalized propensity tables. Tagged classes
/// verify every member against the tag's constraints at construction.
struct PropensityClass {
    GridPtr grid;
    std::vector<PropensityTable> members;
    PropensityTag tag = PropensityTag::custom;
    double c = 0.0;
};

PropensityClass make_propensity_class(GridPtr grid, std::vector<PropensityTable> members,
                                      PropensityTag tag, double c);

/// Finite enumerated class of covariate-outcome pmfs.
struct DistributionClass {
    GridPtr grid;
    std::vector<JointPMF> members;
    DistributionFamily family = DistributionFamily::tabular;
    unsigned degree = 0;
};

/// The concept-class pair the identification and estimation machinery runs
/// over. Both halves share one grid.
struct ClassPair {
    PropensityClass p_class;
    DistributionClass d_class;

    const GridPtr& grid() const { return p_class.grid; }
    std::size_t num_tuples() const {
        return p_class.members.size() * d_class.members.size();
    }
};

ClassPair make_class_pair(PropensityClass p_class, DistributionClass d_class);

/// True iff the table satisfies the tag's defining constraints with
/// constant c. For weak overlap the witness region is
/// {x : min_y p(x, y) > c} and its volume must reach c.
bool member_check(const PropensityTable& p, PropensityTag tag, double c);

struct PolyFamilyBuild {
    DistributionClass cls;
    std::vector<Polynomial> polynomials; // aligned with cls.members
    std::size_t skipped = 0;             // members dropped with a warning
};

/// Family with conditional pmfs proportional to exp(f(x, y)), one member per
/// lattice polynomial whose sup-norm on the grid stays within `bound`.
/// The covariate marginal is uniform unless overridden.
PolyFamilyBuild build_poly_logdensity_family(
    GridPtr grid, unsigned degree, const std::vector<std::vector<double>>& coefficient_lattice,
    double bound, std::optional<std::vector<double>> x_marginal = std::nullopt);

PolyFamilyBuild build_poly_logdensity_members(
    GridPtr grid, const std::vector<Polynomial>& polynomials, double bound,
    std::optional<std::vector<double>> x_marginal = std::nullopt);

/// Family with conditional mean E[y | X=x] equal to f(x) exactly, realized
/// by a symmetric two-point kernel at f(x) +- noise_half_width snapped onto
/// the outcome grid with the mass split chosen to preserve the mean.
/// Members whose mean leaves the representable outcome range are skipped
/// and counted.
PolyFamilyBuild build_poly_expectation_family(
    GridPtr grid, unsigned degree, const std::vector<std::vector<double>>& coefficient_lattice,
    double noise_half_width, std::optional<std::vector<double>> x_marginal = std::nullopt);

PolyFamilyBuild build_poly_expectation_members(
    GridPtr grid, const std::vector<Polynomial>& polynomials, double noise_half_width,
    std::optional<std::vector<double>> x_marginal = std::nullopt);

/// Indices of the partner tuple witnessing compatibility.
struct CompatibilityWitness {
    std::size_t p_index;
    std::size_t d_index;
};

/// Searches the pair, in enumeration order, for a partner tuple that closes
/// tuple (p_index, d_index) into a valid study. Checking one arm assignment
/// suffices: the arm-sum constraint is symmetric under swapping arms.
std::optional<CompatibilityWitness> is_compatible(const ClassPair& pair, std::size_t p_index,
                                                  std::size_t d_index);

struct RealizedStudy {
    ObservationalStudy study;
    std::size_t p0, p1, d0, d1; // member indices forming the study
};

/// Every valid study assembled from quadruples in P x P x D x D,
/// deduplicated by a fingerprint rounded at 1e-10: the censored pmf plus
/// the full effect profile (average, treated-group, and per-covariate
/// conditional effects).
std::vector<RealizedStudy> enumerate_realizable(const ClassPair& pair);

} // namespace causalid
