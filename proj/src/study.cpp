#include "causalid/study.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace causalid {

std::string to_string(PropensityTag tag) {
    switch (tag) {
        case PropensityTag::overlap_unconfounded: return "OU";
        case PropensityTag::overlap: return "O";
        case PropensityTag::weak_overlap: return "U";
        case PropensityTag::rd: return "RD";
        case PropensityTag::custom: return "custom";
    }
    return "custom";
}

PropensityTag propensity_tag_from_string(const std::string& s) {
    if (s == "OU") return PropensityTag::overlap_unconfounded;
    if (s == "O") return PropensityTag::overlap;
    if (s == "U") return PropensityTag::weak_overlap;
    if (s == "RD") return PropensityTag::rd;
    if (s == "custom") return PropensityTag::custom;
    throw std::invalid_argument("unknown propensity tag: " + s);
}

namespace {

// Covariates carrying mass under either arm.
std::vector<std::size_t> support_indices(const ObservationalStudy& study) {
    std::vector<std::size_t> out;
    const std::size_t nx = study.grid()->num_covariates();
    for (std::size_t i = 0; i < nx; ++i) {
        if (std::max(study.d0.x_marginal(i), study.d1.x_marginal(i)) > 0.0) {
            out.push_back(i);
        }
    }
    return out;
}

double arm_sum_at(const ObservationalStudy& study, std::size_t xi) {
    const std::size_t ny = study.grid()->num_outcomes();
    const auto c1 = study.d1.conditional(xi);
    const auto c0 = study.d0.conditional(xi);
    double s = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
        s += study.p1.value(xi, j) * c1[j] + study.p0.value(xi, j) * c0[j];
    }
    return s;
}

} // namespace

std::optional<std::string> validate_study(const ObservationalStudy& study) {
    if (!same_grid(study.d0.grid(), study.d1.grid()) ||
        !same_grid(study.d0.grid(), study.p0.grid()) ||
        !same_grid(study.d0.grid(), study.p1.grid())) {
        return "components live on different grids";
    }
    const std::size_t nx = study.grid()->num_covariates();
    for (std::size_t i = 0; i < nx; ++i) {
        const double m0 = study.d0.x_marginal(i);
        const double m1 = study.d1.x_marginal(i);
        if (std::fabs(m0 - m1) > kPmfTol) {
            return "covariate marginals of the two arms differ at x index " +
                   std::to_string(i);
        }
    }
    for (std::size_t i : support_indices(study)) {
        const double s = arm_sum_at(study, i);
        if (std::fabs(s - 1.0) > kPmfTol) {
            return "arm-sum != 1 at x index " + std::to_string(i) +
                   " (sum = " + std::to_string(s) + ")";
        }
    }
    return std::nullopt;
}

CensoredPMF censor(const ObservationalStudy& study) {
    if (auto bad = validate_study(study)) {
        throw std::invalid_argument("censor: invalid study: " + *bad);
    }
    const std::size_t nx = study.grid()->num_covariates();
    const std::size_t ny = study.grid()->num_outcomes();
    std::vector<double> mass(nx * 2 * ny, 0.0);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            mass[(i * 2 + 0) * ny + j] = study.p0.value(i, j) * study.d0.mass(i, j);
            mass[(i * 2 + 1) * ny + j] = study.p1.value(i, j) * study.d1.mass(i, j);
        }
    }
    return CensoredPMF(study.grid(), std::move(mass));
}

SampleVec sample_censored(const CensoredPMF& cpmf, std::size_t n, std::uint64_t seed) {
    const std::size_t ny = cpmf.grid()->num_outcomes();
    DiscreteSampler sampler(cpmf.raw());
    Rng rng(seed);
    SampleVec out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t flat = sampler.draw(rng);
        const std::size_t xi = flat / (2 * ny);
        const std::size_t t = (flat / ny) % 2;
        const std::size_t yi = flat % ny;
        out.push_back({static_cast<std::uint32_t>(xi), static_cast<std::uint8_t>(t),
                       static_cast<std::uint32_t>(yi)});
    }
    return out;
}

double pr_treated(const ObservationalStudy& study) {
    const std::size_t nx = study.grid()->num_covariates();
    const std::size_t ny = study.grid()->num_outcomes();
    double s = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            s += study.p1.value(i, j) * study.d1.mass(i, j);
        }
    }
    return s;
}

double ate(const ObservationalStudy& study) {
    return study.d1.mean_outcome() - study.d0.mean_outcome();
}

double att(const ObservationalStudy& study) {
    const double pt = pr_treated(study);
    if (pt <= 0.0) throw std::domain_error("ATT undefined: Pr[T=1] = 0");
    const std::size_t nx = study.grid()->num_covariates();
    const std::size_t ny = study.grid()->num_outcomes();
    double treated_mean = 0.0;
    double control_counterfactual = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const double y = study.grid()->outcome(j);
            treated_mean += y * study.d1.mass(i, j) * study.p1.value(i, j);
            control_counterfactual += y * study.d0.mass(i, j) * (1.0 - study.p0.value(i, j));
        }
    }
    return (treated_mean - control_counterfactual) / pt;
}

double hte(const ObservationalStudy& study, std::size_t xi) {
    return study.d1.conditional_mean(xi) - study.d0.conditional_mean(xi);
}

double true_propensity(const ObservationalStudy& study, std::size_t xi) {
    const double m = std::max(study.d0.x_marginal(xi), study.d1.x_marginal(xi));
    if (m <= 0.0) {
        throw std::domain_error("true_propensity: covariate outside support");
    }
    const std::size_t ny = study.grid()->num_outcomes();
    const auto cond = study.d1.conditional(xi);
    double e = 0.0;
    for (std::size_t j = 0; j < ny; ++j) e += study.p1.value(xi, j) * cond[j];
    return e;
}

namespace {

std::vector<double> random_simplex(Rng& rng, std::size_t n, double floor_weight) {
    std::vector<double> w(n);
    double total = 0.0;
    for (double& v : w) {
        v = floor_weight + rng.uniform();
        total += v;
    }
    for (double& v : w) v /= total;
    return w;
}

JointPMF random_joint(Rng& rng, const GridPtr& grid, const std::vector<double>& marginal) {
    const std::size_t nx = grid->num_covariates();
    const std::size_t ny = grid->num_outcomes();
    std::vector<double> mass(nx * ny);
    for (std::size_t i = 0; i < nx; ++i) {
        const auto cond = random_simplex(rng, ny, 0.05);
        for (std::size_t j = 0; j < ny; ++j) mass[i * ny + j] = marginal[i] * cond[j];
    }
    return JointPMF(grid, std::move(mass));
}

// Control-arm table hitting the target row sums exactly while staying
// strictly inside (c, 1-c): mix a random table toward the row constant.
PropensityTable derive_control_overlap(Rng& rng, const GridPtr& grid, const JointPMF& d0,
                                       const std::vector<double>& target, double c) {
    const std::size_t nx = grid->num_covariates();
    const std::size_t ny = grid->num_outcomes();
    const double margin = 0.05 * (1.0 - 2.0 * c);
    std::vector<double> vals(nx * ny);
    for (std::size_t i = 0; i < nx; ++i) {
        const auto cond = d0.conditional(i);
        std::vector<double> base(ny);
        double s = 0.0;
        for (std::size_t j = 0; j < ny; ++j) {
            base[j] = rng.uniform(c + margin, 1.0 - c - margin);
            s += base[j] * cond[j];
        }
        double maxdev = 0.0;
        for (std::size_t j = 0; j < ny; ++j) maxdev = std::max(maxdev, std::fabs(base[j] - s));
        const double room = std::min(target[i] - c, 1.0 - c - target[i]);
        const double lambda = maxdev > 0.0 ? std::min(1.0, 0.9 * room / maxdev) : 0.0;
        for (std::size_t j = 0; j < ny; ++j) {
            vals[i * ny + j] = target[i] + lambda * (base[j] - s);
        }
    }
    return PropensityTable(grid, std::move(vals));
}

} // namespace

ObservationalStudy make_random_study(GridPtr grid, PropensityTag tag, std::uint64_t seed,
                                     double c) {
    if (!(c > 0.0 && c < 0.5)) {
        throw std::invalid_argument("make_random_study: c must lie in (0, 1/2)");
    }
    Rng rng(seed);
    const std::size_t nx = grid->num_covariates();
    const std::size_t ny = grid->num_outcomes();
    const auto marginal = random_simplex(rng, nx, 0.2);
    JointPMF d1 = random_joint(rng, grid, marginal);
    JointPMF d0 = random_joint(rng, grid, marginal);
    const double margin = 0.05 * (1.0 - 2.0 * c);

    switch (tag) {
        case PropensityTag::overlap_unconfounded: {
            std::vector<double> p1v(nx * ny), p0v(nx * ny);
            for (std::size_t i = 0; i < nx; ++i) {
                const double e = rng.uniform(c + margin, 1.0 - c - margin);
                for (std::size_t j = 0; j < ny; ++j) {
                    p1v[i * ny + j] = e;
                    p0v[i * ny + j] = 1.0 - e;
                }
            }
            return {std::move(d0), std::move(d1), PropensityTable(grid, std::move(p0v)),
                    PropensityTable(grid, std::move(p1v))};
        }
        case PropensityTag::overlap: {
            std::vector<double> p1v(nx * ny);
            for (double& v : p1v) v = rng.uniform(c + margin, 1.0 - c - margin);
            PropensityTable p1(grid, std::move(p1v));
            std::vector<double> target(nx);
            for (std::size_t i = 0; i < nx; ++i) {
                const auto cond = d1.conditional(i);
                double e = 0.0;
                for (std::size_t j = 0; j < ny; ++j) e += p1.value(i, j) * cond[j];
                target[i] = 1.0 - e;
            }
            PropensityTable p0 = derive_control_overlap(rng, grid, d0, target, c);
            return {std::move(d0), std::move(d1), std::move(p0), std::move(p1)};
        }
        case PropensityTag::weak_overlap: {
            // Covariates in a shuffled prefix keep two-sided overlap; the
            // rest alternate between fully treated and fully untreated.
            std::vector<std::size_t> order(nx);
            std::iota(order.begin(), order.end(), std::size_t{0});
            for (std::size_t i = nx; i > 1; --i) {
                std::swap(order[i - 1], order[rng.index(i)]);
            }
            const std::size_t overlap_count = (nx + 1) / 2;
            std::vector<double> e(nx);
            bool extreme_treated = true;
            for (std::size_t k = 0; k < nx; ++k) {
                if (k < overlap_count) {
                    e[order[k]] = rng.uniform(c + margin, 1.0 - c - margin);
                } else {
                    e[order[k]] = extreme_treated ? 1.0 : 0.0;
                    extreme_treated = !extreme_treated;
                }
            }
            std::vector<double> p1v(nx * ny), p0v(nx * ny);
            for (std::size_t i = 0; i < nx; ++i) {
                for (std::size_t j = 0; j < ny; ++j) {
                    p1v[i * ny + j] = e[i];
                    p0v[i * ny + j] = 1.0 - e[i];
                }
            }
            return {std::move(d0), std::move(d1), PropensityTable(grid, std::move(p0v)),
                    PropensityTable(grid, std::move(p1v))};
        }
        case PropensityTag::rd: {
            if (nx < 2) {
                throw std::invalid_argument("make_random_study: RD needs >= 2 covariates");
            }
            std::vector<std::size_t> order(nx);
            std::iota(order.begin(), order.end(), std::size_t{0});
            for (std::size_t i = nx; i > 1; --i) {
                std::swap(order[i - 1], order[rng.index(i)]);
            }
            const std::size_t half = (nx + 1) / 2;
            std::vector<std::size_t> treated_set(order.begin(),
                                                 order.begin() + static_cast<long>(half));
            std::vector<std::size_t> control_set(order.begin() + static_cast<long>(half),
                                                 order.end());
            if (grid->volume(treated_set) <= c || grid->volume(control_set) <= c) {
                throw std::invalid_argument(
                    "make_random_study: RD split volumes do not exceed c");
            }
            PropensityTable p1 = PropensityTable::indicator(grid, treated_set);
            PropensityTable p0 = PropensityTable::indicator(grid, control_set);
            return {std::move(d0), std::move(d1), std::move(p0), std::move(p1)};
        }
        case PropensityTag::custom:
            throw std::invalid_argument("make_random_study: custom tag has no generator");
    }
    throw std::logic_error("make_random_study: unreachable");
}

} // namespace causalid
