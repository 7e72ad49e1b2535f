#include "causalid/pmf.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace causalid {

namespace {

void check_table_shape(const GridPtr& grid, const std::vector<double>& v,
                       std::size_t cells, const char* what) {
    if (!grid) throw std::invalid_argument(std::string(what) + ": null grid");
    if (v.size() != cells) {
        throw std::invalid_argument(std::string(what) + ": table size does not match grid");
    }
}

} // namespace

JointPMF::JointPMF(GridPtr grid, std::vector<double> mass)
    : grid_(std::move(grid)), mass_(std::move(mass)) {
    check_table_shape(grid_, mass_, grid_ ? grid_->num_cells() : 0, "joint pmf");
    double total = 0.0;
    for (double m : mass_) {
        if (!(m >= 0.0)) throw std::invalid_argument("joint pmf: negative or NaN mass");
        total += m;
    }
    if (std::fabs(total - 1.0) > kPmfTol) {
        throw std::invalid_argument("joint pmf: total mass differs from 1 beyond tolerance");
    }
}

double JointPMF::x_marginal(std::size_t xi) const {
    const std::size_t ny = grid_->num_outcomes();
    double s = 0.0;
    for (std::size_t j = 0; j < ny; ++j) s += mass_[xi * ny + j];
    return s;
}

std::vector<double> JointPMF::x_marginals() const {
    std::vector<double> out(grid_->num_covariates());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x_marginal(i);
    return out;
}

std::vector<double> JointPMF::conditional(std::size_t xi) const {
    const std::size_t ny = grid_->num_outcomes();
    std::vector<double> out(ny, 0.0);
    const double m = x_marginal(xi);
    if (m <= 0.0) return out;
    for (std::size_t j = 0; j < ny; ++j) out[j] = mass_[xi * ny + j] / m;
    return out;
}

double JointPMF::mean_outcome() const {
    const std::size_t nx = grid_->num_covariates();
    const std::size_t ny = grid_->num_outcomes();
    double s = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            s += grid_->outcome(j) * mass_[i * ny + j];
        }
    }
    return s;
}

double JointPMF::conditional_mean(std::size_t xi) const {
    const double m = x_marginal(xi);
    if (m <= 0.0) {
        throw std::domain_error("joint pmf: conditional mean at covariate with zero mass");
    }
    const std::size_t ny = grid_->num_outcomes();
    double s = 0.0;
    for (std::size_t j = 0; j < ny; ++j) s += grid_->outcome(j) * mass_[xi * ny + j];
    return s / m;
}

double JointPMF::covariate_set_mass(const std::vector<std::size_t>& xs) const {
    std::vector<bool> seen(grid_->num_covariates(), false);
    double s = 0.0;
    for (std::size_t i : xs) {
        if (!seen[i]) {
            seen[i] = true;
            s += x_marginal(i);
        }
    }
    return s;
}

PropensityTable::PropensityTable(GridPtr grid, std::vector<double> value)
    : grid_(std::move(grid)), value_(std::move(value)) {
    check_table_shape(grid_, value_, grid_ ? grid_->num_cells() : 0, "propensity table");
    for (double v : value_) {
        if (!(v >= 0.0) || v > 1.0) {
            throw std::invalid_argument("propensity table: entry outside [0, 1]");
        }
    }
}

bool PropensityTable::outcome_free(double tol) const {
    const std::size_t nx = grid_->num_covariates();
    const std::size_t ny = grid_->num_outcomes();
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 1; j < ny; ++j) {
            if (std::fabs(value_[i * ny + j] - value_[i * ny]) > tol) return false;
        }
    }
    return true;
}

PropensityTable PropensityTable::constant(GridPtr grid, double v) {
    std::vector<double> vals(grid->num_cells(), v);
    return PropensityTable(std::move(grid), std::move(vals));
}

PropensityTable PropensityTable::complement() const {
    std::vector<double> vals(value_.size());
    for (std::size_t i = 0; i < value_.size(); ++i) vals[i] = 1.0 - value_[i];
    return PropensityTable(grid_, std::move(vals));
}

PropensityTable PropensityTable::indicator(GridPtr grid,
                                           const std::vector<std::size_t>& member_xs) {
    std::vector<bool> in(grid->num_covariates(), false);
    for (std::size_t i : member_xs) {
        if (i >= in.size()) throw std::out_of_range("indicator: covariate index out of range");
        in[i] = true;
    }
    const std::size_t ny = grid->num_outcomes();
    std::vector<double> vals(grid->num_cells(), 0.0);
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (in[i]) {
            for (std::size_t j = 0; j < ny; ++j) vals[i * ny + j] = 1.0;
        }
    }
    return PropensityTable(std::move(grid), std::move(vals));
}

CensoredPMF::CensoredPMF(GridPtr grid, std::vector<double> mass)
    : grid_(std::move(grid)), mass_(std::move(mass)) {
    check_table_shape(grid_, mass_, grid_ ? grid_->num_cells() * 2 : 0, "censored pmf");
    double total = 0.0;
    for (double m : mass_) {
        if (!(m >= 0.0)) throw std::invalid_argument("censored pmf: negative or NaN mass");
        total += m;
    }
    if (std::fabs(total - 1.0) > kPmfTol) {
        throw std::invalid_argument("censored pmf: total mass differs from 1 beyond tolerance");
    }
}

double CensoredPMF::treated_mass() const {
    const std::size_t nx = grid_->num_covariates();
    const std::size_t ny = grid_->num_outcomes();
    double s = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) s += mass(i, 1, j);
    }
    return s;
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("l1 distance: mismatched table sizes");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
    return s;
}

double l1_distance(const JointPMF& a, const JointPMF& b) {
    if (!same_grid(a.grid(), b.grid())) {
        throw std::invalid_argument("l1 distance: mismatched grids");
    }
    return l1_distance(a.raw(), b.raw());
}

double l1_distance(const CensoredPMF& a, const CensoredPMF& b) {
    if (!same_grid(a.grid(), b.grid())) {
        throw std::invalid_argument("l1 distance: mismatched grids");
    }
    return l1_distance(a.raw(), b.raw());
}

} // namespace causalid
