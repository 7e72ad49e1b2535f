#include "causalid/grid.hpp"

#include <algorithm>

namespace causalid {

Grid::Grid(std::vector<std::vector<double>> covariate_points,
           std::vector<double> outcome_points)
    : covariates_(std::move(covariate_points)), outcomes_(std::move(outcome_points)) {
    if (covariates_.empty() || outcomes_.empty()) {
        throw std::invalid_argument("grid: covariate and outcome lists must be non-empty");
    }
    const std::size_t d = covariates_.front().size();
    if (d == 0) {
        throw std::invalid_argument("grid: covariate dimension must be positive");
    }
    for (const auto& x : covariates_) {
        if (x.size() != d) {
            throw std::invalid_argument("grid: covariate points must share one dimension");
        }
    }
    for (std::size_t i = 0; i < covariates_.size(); ++i) {
        for (std::size_t j = i + 1; j < covariates_.size(); ++j) {
            if (covariates_[i] == covariates_[j]) {
                throw std::invalid_argument("grid: covariate points must be distinct");
            }
        }
    }
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
        for (std::size_t j = i + 1; j < outcomes_.size(); ++j) {
            if (outcomes_[i] == outcomes_[j]) {
                throw std::invalid_argument("grid: outcome points must be distinct");
            }
        }
    }
}

double Grid::volume(const std::vector<std::size_t>& s) const {
    std::vector<bool> seen(num_covariates(), false);
    std::size_t count = 0;
    for (std::size_t i : s) {
        if (i >= num_covariates()) {
            throw std::out_of_range("grid: covariate index out of range");
        }
        if (!seen[i]) {
            seen[i] = true;
            ++count;
        }
    }
    return static_cast<double>(count) / static_cast<double>(num_covariates());
}

bool Grid::operator==(const Grid& other) const {
    return covariates_ == other.covariates_ && outcomes_ == other.outcomes_;
}

Grid Grid::line(std::size_t n, double lo, double hi, std::vector<double> outcomes) {
    if (n == 0) throw std::invalid_argument("grid: n must be positive");
    std::vector<std::vector<double>> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        pts.push_back({lo + t * (hi - lo)});
    }
    return Grid(std::move(pts), std::move(outcomes));
}

} // namespace causalid
