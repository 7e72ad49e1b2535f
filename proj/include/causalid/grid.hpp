#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

namespace causalid {

/// Absolute per-cell tolerance for pmf comparisons and mass checks.
inline constexpr double kPmfTol = 1e-9;

/// Tolerance for certifying exact constructions (counterexample pairs).
inline constexpr double kCertTol = 1e-12;

/// Finite discrete domain: an ordered list of covariate points (each a
/// vector of dimension d) and an ordered list of real outcome values.
/// Iteration order is the construction order and never changes.
class Grid {
public:
    Grid(std::vector<std::vector<double>> covariate_points,
         std::vector<double> outcome_points);

    std::size_t num_covariates() const { return covariates_.size(); }
    std::size_t num_outcomes() const { return outcomes_.size(); }
    std::size_t dimension() const { return covariates_.front().size(); }
    std::size_t num_cells() const { return covariates_.size() * outcomes_.size(); }

    const std::vector<double>& covariate(std::size_t i) const { return covariates_[i]; }
    double outcome(std::size_t j) const { return outcomes_[j]; }
    const std::vector<std::vector<double>>& covariate_points() const { return covariates_; }
    const std::vector<double>& outcome_points() const { return outcomes_; }

    /// Fraction of covariate points contained in the index set `s`.
    /// This is the discrete stand-in for the volume of a covariate region:
    /// the reference measure is uniform over the covariate grid.
    double volume(const std::vector<std::size_t>& s) const;

    bool operator==(const Grid& other) const;
    bool operator!=(const Grid& other) const { return !(*this == other); }

    /// Uniformly spaced 1-d covariate grid over [lo, hi] with n points.
    static Grid line(std::size_t n, double lo, double hi, std::vector<double> outcomes);

private:
    std::vector<std::vector<double>> covariates_;
    std::vector<double> outcomes_;
};

// Grids are immutable after construction; the shared handle lets many
// tables reference one grid cheaply.
using GridPtr = std::shared_ptr<Grid>;

inline GridPtr make_grid(std::vector<std::vector<double>> covariates,
                         std::vector<double> outcomes) {
    return std::make_shared<Grid>(std::move(covariates), std::move(outcomes));
}

/// True when both tables live on the same grid (shared or content-equal).
inline bool same_grid(const GridPtr& a, const GridPtr& b) {
    return a == b || (a && b && *a == *b);
}

} // namespace causalid
