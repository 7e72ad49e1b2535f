#pragma once

#include <cstdint>
#include <vector>

#include "causalid/grid.hpp"

namespace causalid {

/// Joint probability mass function over (covariate, outcome) cells.
/// Masses are non-negative and sum to one within kPmfTol.
class JointPMF {
public:
    JointPMF(GridPtr grid, std::vector<double> mass);

    const GridPtr& grid() const { return grid_; }
    double mass(std::size_t xi, std::size_t yi) const {
        return mass_[xi * grid_->num_outcomes() + yi];
    }
    const std::vector<double>& raw() const { return mass_; }

    /// Marginal mass of covariate point xi.
    double x_marginal(std::size_t xi) const;
    std::vector<double> x_marginals() const;

    /// Conditional pmf over outcomes given covariate xi. Zero vector when
    /// the covariate carries no mass.
    std::vector<double> conditional(std::size_t xi) const;

    /// E[y] under the joint law.
    double mean_outcome() const;

    /// E[y | X = x_i]; requires positive marginal at xi.
    double conditional_mean(std::size_t xi) const;

    /// Total mass on a set of covariate indices (outcome dimension summed out).
    double covariate_set_mass(const std::vector<std::size_t>& xs) const;

private:
    GridPtr grid_;
    std::vector<double> mass_; // row-major, [xi * num_outcomes + yi]
};

/// Table of treatment probabilities indexed by (covariate, outcome) cell.
/// Entries lie in [0, 1]; no normalization constraint.
class PropensityTable {
public:
    PropensityTable(GridPtr grid, std::vector<double> value);

    const GridPtr& grid() const { return grid_; }
    double value(std::size_t xi, std::size_t yi) const {
        return value_[xi * grid_->num_outcomes() + yi];
    }
    const std::vector<double>& raw() const { return value_; }

    /// True when the table does not depend on the outcome coordinate.
    bool outcome_free(double tol = kPmfTol) const;

    /// Constant table p(x, y) = v.
    static PropensityTable constant(GridPtr grid, double v);

    /// One minus the table, entrywise.
    PropensityTable complement() const;

    /// Covariate-indicator table: 1 on member_xs, 0 elsewhere.
    static PropensityTable indicator(GridPtr grid, const std::vector<std::size_t>& member_xs);

private:
    GridPtr grid_;
    std::vector<double> value_;
};

/// Observable law over (covariate, treatment bit, outcome) cells.
class CensoredPMF {
public:
    CensoredPMF(GridPtr grid, std::vector<double> mass);

    const GridPtr& grid() const { return grid_; }
    double mass(std::size_t xi, int t, std::size_t yi) const {
        return mass_[(xi * 2 + static_cast<std::size_t>(t)) * grid_->num_outcomes() + yi];
    }
    const std::vector<double>& raw() const { return mass_; }

    double treated_mass() const; // Pr[T = 1]

private:
    GridPtr grid_;
    std::vector<double> mass_; // layout [(xi * 2 + t) * num_outcomes + yi]
};

/// One observed record: covariate index, treatment bit, outcome index.
/// Indices refer to the grid the sample set was drawn on.
struct CensoredSample {
    std::uint32_t x;
    std::uint8_t t;
    std::uint32_t y;

    bool operator==(const CensoredSample&) const = default;
};

using SampleVec = std::vector<CensoredSample>;

/// Exact summed absolute difference between two mass tables on one grid.
double l1_distance(const JointPMF& a, const JointPMF& b);
double l1_distance(const CensoredPMF& a, const CensoredPMF& b);
double l1_distance(const std::vector<double>& a, const std::vector<double>& b);

} // namespace causalid
