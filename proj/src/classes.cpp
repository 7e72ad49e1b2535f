#include "causalid/classes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace causalid {

double Polynomial::eval(const std::vector<double>& x, double y) const {
    double out = 0.0;
    for (const auto& term : terms) {
        if (term.x_powers.size() != x.size()) {
            throw std::invalid_argument("polynomial: term dimension mismatch");
        }
        double v = term.coeff;
        for (std::size_t k = 0; k < x.size(); ++k) {
            for (unsigned e = 0; e < term.x_powers[k]; ++e) v *= x[k];
        }
        for (unsigned e = 0; e < term.y_power; ++e) v *= y;
        out += v;
    }
    return out;
}

unsigned Polynomial::degree() const {
    unsigned d = 0;
    for (const auto& term : terms) {
        unsigned t = term.y_power;
        for (unsigned e : term.x_powers) t += e;
        d = std::max(d, t);
    }
    return d;
}

std::vector<PolyTerm> monomial_basis(std::size_t dim, unsigned degree, bool include_outcome) {
    std::vector<PolyTerm> out;
    std::vector<unsigned> powers(dim + (include_outcome ? 1 : 0), 0);
    // Enumerate exponent tuples with total degree <= degree, graded, then
    // lexicographic within a grade.
    for (unsigned total = 0; total <= degree; ++total) {
        std::vector<std::vector<unsigned>> level;
        std::vector<unsigned> current(powers.size(), 0);
        // Recursive enumeration without recursion: odometer over tuples
        // summing to `total`.
        std::vector<unsigned> tup(powers.size(), 0);
        while (true) {
            unsigned s = 0;
            for (unsigned v : tup) s += v;
            if (s == total) level.push_back(tup);
            // advance odometer in base (total+1)
            std::size_t pos = 0;
            while (pos < tup.size()) {
                if (tup[pos] < total) {
                    ++tup[pos];
                    for (std::size_t q = 0; q < pos; ++q) tup[q] = 0;
                    break;
                }
                ++pos;
            }
            if (pos == tup.size()) break;
        }
        std::sort(level.begin(), level.end());
        for (const auto& t : level) {
            PolyTerm term;
            term.x_powers.assign(t.begin(), t.begin() + static_cast<long>(dim));
            term.y_power = include_outcome ? t.back() : 0;
            term.coeff = 0.0;
            out.push_back(std::move(term));
        }
    }
    return out;
}

std::string to_string(DistributionFamily f) {
    switch (f) {
        case DistributionFamily::tabular: return "tabular";
        case DistributionFamily::poly_logdensity: return "poly_logdensity";
        case DistributionFamily::poly_expectation: return "poly_expectation";
        case DistributionFamily::custom: return "custom";
    }
    return "custom";
}

DistributionFamily distribution_family_from_string(const std::string& s) {
    if (s == "tabular") return DistributionFamily::tabular;
    if (s == "poly_logdensity") return DistributionFamily::poly_logdensity;
    if (s == "poly_expectation") return DistributionFamily::poly_expectation;
    if (s == "custom") return DistributionFamily::custom;
    throw std::invalid_argument("unknown distribution family: " + s);
}

bool member_check(const PropensityTable& p, PropensityTag tag, double c) {
    const auto& grid = *p.grid();
    const std::size_t nx = grid.num_covariates();
    const std::size_t ny = grid.num_outcomes();
    switch (tag) {
        case PropensityTag::overlap_unconfounded: {
            if (!p.outcome_free()) return false;
            for (double v : p.raw()) {
                if (!(v > c && v < 1.0 - c)) return false;
            }
            return true;
        }
        case PropensityTag::overlap: {
            for (double v : p.raw()) {
                if (!(v > c && v < 1.0 - c)) return false;
            }
            return true;
        }
        case PropensityTag::weak_overlap: {
            if (!p.outcome_free()) return false;
            std::vector<std::size_t> witness;
            for (std::size_t i = 0; i < nx; ++i) {
                double row_min = 1.0;
                for (std::size_t j = 0; j < ny; ++j) row_min = std::min(row_min, p.value(i, j));
                if (row_min > c) witness.push_back(i);
            }
            return grid.volume(witness) >= c;
        }
        case PropensityTag::rd: {
            if (!p.outcome_free()) return false;
            std::vector<std::size_t> on, off;
            for (std::size_t i = 0; i < nx; ++i) {
                const double v = p.value(i, 0);
                if (v == 1.0) {
                    on.push_back(i);
                } else if (v == 0.0) {
                    off.push_back(i);
                } else {
                    return false;
                }
            }
            return grid.volume(on) > c && grid.volume(off) > c;
        }
        case PropensityTag::custom:
            return true;
    }
    return false;
}

PropensityClass make_propensity_class(GridPtr grid, std::vector<PropensityTable> members,
                                      PropensityTag tag, double c) {
    for (std::size_t k = 0; k < members.size(); ++k) {
        if (!same_grid(members[k].grid(), grid)) {
            throw std::invalid_argument("propensity class: member " + std::to_string(k) +
                                        " is on a different grid");
        }
        if (!member_check(members[k], tag, c)) {
            throw std::invalid_argument("propensity class: member " + std::to_string(k) +
                                        " fails the " + to_string(tag) + "(" +
                                        std::to_string(c) + ") constraints");
        }
    }
    return PropensityClass{std::move(grid), std::move(members), tag, c};
}

ClassPair make_class_pair(PropensityClass p_class, DistributionClass d_class) {
    if (!same_grid(p_class.grid, d_class.grid)) {
        throw std::invalid_argument("class pair: grids differ");
    }
    for (const auto& m : d_class.members) {
        if (!same_grid(m.grid(), d_class.grid)) {
            throw std::invalid_argument("class pair: distribution member on a different grid");
        }
    }
    return ClassPair{std::move(p_class), std::move(d_class)};
}

namespace {

std::vector<double> uniform_marginal(std::size_t nx) {
    return std::vector<double>(nx, 1.0 / static_cast<double>(nx));
}

void check_marginal(const std::vector<double>& m, std::size_t nx) {
    if (m.size() != nx) throw std::invalid_argument("x marginal: wrong length");
    double s = 0.0;
    for (double v : m) {
        if (!(v >= 0.0)) throw std::invalid_argument("x marginal: negative entry");
        s += v;
    }
    if (std::fabs(s - 1.0) > kPmfTol) {
        throw std::invalid_argument("x marginal: does not sum to 1");
    }
}

// Cartesian product over per-term coefficient choices.
std::vector<Polynomial> lattice_polynomials(const std::vector<PolyTerm>& basis,
                                            const std::vector<std::vector<double>>& lattice) {
    if (lattice.size() != basis.size()) {
        throw std::invalid_argument("coefficient lattice: one value list per basis term required");
    }
    for (const auto& vals : lattice) {
        if (vals.empty()) throw std::invalid_argument("coefficient lattice: empty value list");
    }
    std::vector<Polynomial> out;
    std::vector<std::size_t> idx(lattice.size(), 0);
    while (true) {
        Polynomial poly;
        for (std::size_t t = 0; t < basis.size(); ++t) {
            PolyTerm term = basis[t];
            term.coeff = lattice[t][idx[t]];
            if (term.coeff != 0.0) poly.terms.push_back(std::move(term));
        }
        out.push_back(std::move(poly));
        std::size_t pos = lattice.size();
        while (pos > 0) {
            --pos;
            if (++idx[pos] < lattice[pos].size()) break;
            idx[pos] = 0;
            if (pos == 0) return out;
        }
        if (lattice.empty()) return out;
    }
}

} // namespace

PolyFamilyBuild build_poly_logdensity_members(GridPtr grid,
                                              const std::vector<Polynomial>& polynomials,
                                              double bound,
                                              std::optional<std::vector<double>> x_marginal) {
    const std::size_t nx = grid->num_covariates();
    const std::size_t ny = grid->num_outcomes();
    const auto marginal = x_marginal ? *x_marginal : uniform_marginal(nx);
    check_marginal(marginal, nx);

    PolyFamilyBuild build;
    build.cls.grid = grid;
    build.cls.family = DistributionFamily::poly_logdensity;
    std::size_t filtered = 0;
    for (const auto& poly : polynomials) {
        double sup = 0.0;
        std::vector<double> logw(nx * ny);
        for (std::size_t i = 0; i < nx; ++i) {
            for (std::size_t j = 0; j < ny; ++j) {
                const double f = poly.eval(grid->covariate(i), grid->outcome(j));
                logw[i * ny + j] = f;
                sup = std::max(sup, std::fabs(f));
            }
        }
        if (sup > bound) {
            ++filtered;
            continue;
        }
        std::vector<double> mass(nx * ny);
        for (std::size_t i = 0; i < nx; ++i) {
            double z = 0.0;
            for (std::size_t j = 0; j < ny; ++j) z += std::exp(logw[i * ny + j]);
            for (std::size_t j = 0; j < ny; ++j) {
                mass[i * ny + j] = marginal[i] * std::exp(logw[i * ny + j]) / z;
            }
        }
        build.cls.degree = std::max(build.cls.degree, poly.degree());
        build.cls.members.emplace_back(grid, std::move(mass));
        build.polynomials.push_back(poly);
    }
    build.skipped = filtered;
    if (build.cls.members.empty()) {
        throw std::invalid_argument("poly log-density family: empty after the bound filter");
    }
    return build;
}

PolyFamilyBuild build_poly_logdensity_family(GridPtr grid, unsigned degree,
                                             const std::vector<std::vector<double>>& lattice,
                                             double bound,
                                             std::optional<std::vector<double>> x_marginal) {
    const auto basis = monomial_basis(grid->dimension(), degree, /*include_outcome=*/true);
    return build_poly_logdensity_members(std::move(grid), lattice_polynomials(basis, lattice),
                                         bound, std::move(x_marginal));
}

namespace {

// Two-point kernel at mean +- h snapped onto the outcome grid; the split
// between the two atoms is chosen so the conditional mean equals `mean`
// exactly. Returns false when the mean is not representable.
bool two_point_conditional(const Grid& grid, double mean, double h, std::vector<double>& out) {
    const auto& ys = grid.outcome_points();
    const std::size_t ny = ys.size();
    out.assign(ny, 0.0);

    auto nearest = [&](double target) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < ny; ++j) {
            if (std::fabs(ys[j] - target) < std::fabs(ys[best] - target)) best = j;
        }
        return best;
    };

    std::size_t lo = nearest(mean - h);
    std::size_t hi = nearest(mean + h);
    if (lo != hi && std::min(ys[lo], ys[hi]) <= mean && mean <= std::max(ys[lo], ys[hi])) {
        const double w = (ys[hi] - mean) / (ys[hi] - ys[lo]);
        out[lo] = w;
        out[hi] = 1.0 - w;
        return true;
    }
    // Both atoms snapped to one side; fall back to the bracketing pair.
    bool has_lo = false, has_hi = false;
    std::size_t blo = 0, bhi = 0;
    for (std::size_t j = 0; j < ny; ++j) {
        if (ys[j] <= mean && (!has_lo || ys[j] > ys[blo])) {
            blo = j;
            has_lo = true;
        }
        if (ys[j] >= mean && (!has_hi || ys[j] < ys[bhi])) {
            bhi = j;
            has_hi = true;
        }
    }
    if (!has_lo || !has_hi) return false; // mean outside the outcome range
    if (blo == bhi) {
        out[blo] = 1.0;
        return true;
    }
    const double w = (ys[bhi] - mean) / (ys[bhi] - ys[blo]);
    out[blo] = w;
    out[bhi] = 1.0 - w;
    return true;
}

} // namespace

PolyFamilyBuild build_poly_expectation_members(GridPtr grid,
                                               const std::vector<Polynomial>& polynomials,
                                               double noise_half_width,
                                               std::optional<std::vector<double>> x_marginal) {
    if (!(noise_half_width >= 0.0)) {
        throw std::invalid_argument("poly expectation family: negative noise width");
    }
    const std::size_t nx = grid->num_covariates();
    const std::size_t ny = grid->num_outcomes();
    const auto marginal = x_marginal ? *x_marginal : uniform_marginal(nx);
    check_marginal(marginal, nx);

    PolyFamilyBuild build;
    build.cls.grid = grid;
    build.cls.family = DistributionFamily::poly_expectation;
    std::vector<double> cond;
    for (const auto& poly : polynomials) {
        for (const auto& term : poly.terms) {
            if (term.y_power != 0) {
                throw std::invalid_argument(
                    "poly expectation family: polynomial must not involve the outcome");
            }
        }
        std::vector<double> mass(nx * ny, 0.0);
        bool ok = true;
        for (std::size_t i = 0; i < nx && ok; ++i) {
            const double mean = poly.eval(grid->covariate(i), 0.0);
            ok = two_point_conditional(*grid, mean, noise_half_width, cond);
            if (ok) {
                for (std::size_t j = 0; j < ny; ++j) mass[i * ny + j] = marginal[i] * cond[j];
            }
        }
        if (!ok) {
            ++build.skipped;
            continue;
        }
        build.cls.degree = std::max(build.cls.degree, poly.degree());
        build.cls.members.emplace_back(grid, std::move(mass));
        build.polynomials.push_back(poly);
    }
    if (build.cls.members.empty()) {
        throw std::invalid_argument("poly expectation family: no representable member");
    }
    return build;
}

PolyFamilyBuild build_poly_expectation_family(GridPtr grid, unsigned degree,
                                              const std::vector<std::vector<double>>& lattice,
                                              double noise_half_width,
                                              std::optional<std::vector<double>> x_marginal) {
    const auto basis = monomial_basis(grid->dimension(), degree, /*include_outcome=*/false);
    return build_poly_expectation_members(std::move(grid), lattice_polynomials(basis, lattice),
                                          noise_half_width, std::move(x_marginal));
}

std::optional<CompatibilityWitness> is_compatible(const ClassPair& pair, std::size_t p_index,
                                                  std::size_t d_index) {
    const auto& ps = pair.p_class.members;
    const auto& ds = pair.d_class.members;
    for (std::size_t qi = 0; qi < ps.size(); ++qi) {
        for (std::size_t ei = 0; ei < ds.size(); ++ei) {
            ObservationalStudy candidate{ds[d_index], ds[ei], ps[p_index], ps[qi]};
            if (!validate_study(candidate)) {
                return CompatibilityWitness{qi, ei};
            }
        }
    }
    return std::nullopt;
}

std::vector<RealizedStudy> enumerate_realizable(const ClassPair& pair) {
    const auto& ps = pair.p_class.members;
    const auto& ds = pair.d_class.members;
    std::vector<RealizedStudy> out;
    std::map<std::vector<long long>, bool> seen;
    for (std::size_t p0i = 0; p0i < ps.size(); ++p0i) {
        for (std::size_t p1i = 0; p1i < ps.size(); ++p1i) {
            for (std::size_t d0i = 0; d0i < ds.size(); ++d0i) {
                for (std::size_t d1i = 0; d1i < ds.size(); ++d1i) {
                    ObservationalStudy study{ds[d0i], ds[d1i], ps[p0i], ps[p1i]};
                    if (validate_study(study)) continue;
                    const CensoredPMF cpmf = censor(study);
                    std::vector<long long> key;
                    key.reserve(cpmf.raw().size() + 2 + pair.grid()->num_covariates());
                    for (double v : cpmf.raw()) {
                        key.push_back(static_cast<long long>(std::llround(v * 1e10)));
                    }
                    // Fingerprint by censored law plus the full effect
                    // profile: studies equal under censoring can still
                    // differ in conditional or treated-group effects.
                    key.push_back(static_cast<long long>(std::llround(ate(study) * 1e10)));
                    const double pt = pr_treated(study);
                    key.push_back(pt > 0.0
                                      ? static_cast<long long>(std::llround(att(study) * 1e10))
                                      : std::numeric_limits<long long>::min());
                    for (std::size_t xi = 0; xi < pair.grid()->num_covariates(); ++xi) {
                        const bool supported = study.d0.x_marginal(xi) > 0.0 &&
                                               study.d1.x_marginal(xi) > 0.0;
                        key.push_back(supported ? static_cast<long long>(
                                                      std::llround(hte(study, xi) * 1e10))
                                                : std::numeric_limits<long long>::min());
                    }
                    if (!seen.emplace(std::move(key), true).second) continue;
                    out.push_back({std::move(study), p0i, p1i, d0i, d1i});
                }
            }
        }
    }
    return out;
}

} // namespace causalid
