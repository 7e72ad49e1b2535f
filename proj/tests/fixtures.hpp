#pragma once

#include <functional>
#include <vector>

#include "causalid/classes.hpp"
#include "causalid/study.hpp"

namespace fixtures {

using namespace causalid;

inline GridPtr grid_2x2() {
    return make_grid({{0.0}, {1.0}}, {0.0, 1.0});
}

inline GridPtr grid_1x2() {
    return make_grid({{0.0}}, {0.0, 1.0});
}

// Joint pmf from a covariate marginal and per-covariate conditional rows.
inline JointPMF joint_from_conditionals(const GridPtr& grid, const std::vector<double>& marginal,
                                        const std::vector<std::vector<double>>& conditionals) {
    const std::size_t ny = grid->num_outcomes();
    std::vector<double> mass(grid->num_cells());
    for (std::size_t i = 0; i < marginal.size(); ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            mass[i * ny + j] = marginal[i] * conditionals[i][j];
        }
    }
    return JointPMF(grid, std::move(mass));
}

inline PropensityTable table_rows(const GridPtr& grid,
                                  const std::vector<std::vector<double>>& rows) {
    std::vector<double> v;
    for (const auto& row : rows) v.insert(v.end(), row.begin(), row.end());
    return PropensityTable(grid, std::move(v));
}

// Fully randomized trial with constant treatment probability e.
inline ObservationalStudy randomized_study(const GridPtr& grid, const JointPMF& d0,
                                           const JointPMF& d1, double e) {
    return ObservationalStudy{d0, d1, PropensityTable::constant(grid, 1.0 - e),
                              PropensityTable::constant(grid, e)};
}

// The two-cell witness pair: equal covariate marginals, means 0.6 vs 0.4,
// and propensities chosen so both censored products are 0.24 per cell.
struct ProductWitness {
    GridPtr grid = grid_1x2();
    JointPMF P = joint_from_conditionals(grid, {1.0}, {{0.4, 0.6}});
    JointPMF Q = joint_from_conditionals(grid, {1.0}, {{0.6, 0.4}});
    PropensityTable p = table_rows(grid, {{0.6, 0.4}});
    PropensityTable q = table_rows(grid, {{0.4, 0.6}});
};

inline ClassPair product_witness_pair() {
    ProductWitness w;
    PropensityClass p_class{w.grid, {w.p, w.q}, PropensityTag::custom, 0.0};
    DistributionClass d_class;
    d_class.grid = w.grid;
    d_class.members = {w.P, w.Q};
    return ClassPair{std::move(p_class), std::move(d_class)};
}

// Two-covariate randomized-trial fixture for the weighted estimator: the
// true covariate propensity (0.2, 0.8) sits in a nine-member class.
struct Scenario1Instance {
    GridPtr grid = grid_2x2();
    JointPMF d1 = joint_from_conditionals(grid, {0.5, 0.5}, {{0.7, 0.3}, {0.5, 0.5}});
    JointPMF d0 = joint_from_conditionals(grid, {0.5, 0.5}, {{0.9, 0.1}, {0.9, 0.1}});
    ObservationalStudy study{d0, d1, PropensityTable(grid, {0.8, 0.8, 0.2, 0.2}),
                             PropensityTable(grid, {0.2, 0.2, 0.8, 0.8})};
    std::vector<std::vector<double>> e_class = [] {
        std::vector<std::vector<double>> out;
        for (double a : {0.2, 0.5, 0.8}) {
            for (double b : {0.2, 0.5, 0.8}) out.push_back({a, b});
        }
        return out;
    }();
    std::vector<double> true_e{0.2, 0.8};
};

// Confounded single-covariate instance: treatment leans toward high
// outcomes in the treated arm and away from them in the control arm, so the
// outcome-blind weighted estimator is biased while the study stays
// realizable in a small overlap class satisfying the ratio condition.
struct ConfoundedInstance {
    GridPtr grid = grid_1x2();
    JointPMF d1 = joint_from_conditionals(grid, {1.0}, {{0.5, 0.5}});
    JointPMF d0 = joint_from_conditionals(grid, {1.0}, {{0.85, 0.15}});
    PropensityTable p1 = table_rows(grid, {{0.26, 0.74}});
    PropensityTable p0 = table_rows(grid, {{(0.5 - 0.15 * 0.26) / 0.85, 0.26}});
    ObservationalStudy study{d0, d1, p0, p1};

    ClassPair pair(double c = 0.25) const {
        PropensityClass pc = make_propensity_class(
            grid, {p1, p0, p1.complement(), p0.complement()}, PropensityTag::overlap, c);
        DistributionClass dc;
        dc.grid = grid;
        dc.members = {d1, d0, joint_from_conditionals(grid, {1.0}, {{0.03, 0.97}})};
        return ClassPair{std::move(pc), std::move(dc)};
    }
};

// Weak-overlap instance whose true study has full overlap: the estimator
// must reduce to plain tournament selection.
struct WeakOverlapInstance {
    GridPtr grid = grid_2x2();
    JointPMF d1 = joint_from_conditionals(grid, {0.5, 0.5}, {{0.2, 0.8}, {0.4, 0.6}});
    JointPMF d0 = joint_from_conditionals(grid, {0.5, 0.5}, {{0.9, 0.1}, {0.6, 0.4}});
    PropensityTable p1 = PropensityTable::constant(grid, 0.5);
    ObservationalStudy study{d0, d1, p1.complement(), p1};

    ClassPair pair(double c = 0.2) const {
        PropensityClass pc = make_propensity_class(
            grid, {p1, PropensityTable(grid, {0.7, 0.7, 0.3, 0.3})},
            PropensityTag::weak_overlap, c);
        DistributionClass dc;
        dc.grid = grid;
        dc.members = {d1, d0,
                      joint_from_conditionals(grid, {0.5, 0.5}, {{0.5, 0.5}, {0.5, 0.5}})};
        return ClassPair{std::move(pc), std::move(dc)};
    }
};

// Regression-discontinuity instance on a 21-point covariate grid over
// [0, 1]: treated region {x >= 0.5}, quadratic conditional means x^2 and
// x^2 - 1, uniform covariate marginal, effect exactly 1.
struct RdInstance {
    GridPtr grid = make_grid(
        [] {
            std::vector<std::vector<double>> xs;
            for (int k = 0; k <= 20; ++k) xs.push_back({0.05 * k});
            return xs;
        }(),
        [] {
            std::vector<double> ys;
            for (int k = -6; k <= 6; ++k) ys.push_back(0.25 * k);
            return ys;
        }());
    std::vector<std::size_t> treated_region = [] {
        std::vector<std::size_t> s;
        for (std::size_t i = 10; i <= 20; ++i) s.push_back(i);
        return s;
    }();
    PolyFamilyBuild family = build_poly_expectation_family(
        grid, 2, {{-1.0, -0.5, 0.0, 0.5}, {0.0}, {0.0, 1.0}}, 0.5);
    ObservationalStudy study = [&] {
        // members are ordered by the coefficient lattice: (a, 0, c) with the
        // last coordinate fastest, so (a=-1, c=1) is index 1 and
        // (a=0, c=1) is index 5.
        const JointPMF& mu0 = family.cls.members[1]; // x^2 - 1
        const JointPMF& mu1 = family.cls.members[5]; // x^2
        return ObservationalStudy{mu0, mu1,
                                  PropensityTable::indicator(grid, control_region()),
                                  PropensityTable::indicator(grid, treated_region)};
    }();

    std::vector<std::size_t> control_region() const {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < 10; ++i) s.push_back(i);
        return s;
    }
};

// All pmfs over the grid whose masses are multiples of 1/resolution.
inline std::vector<JointPMF> lattice_pmfs(const GridPtr& grid, unsigned resolution) {
    const std::size_t cells = grid->num_cells();
    std::vector<JointPMF> out;
    std::vector<unsigned> units(cells, 0);
    // Enumerate compositions of `resolution` into `cells` parts.
    std::vector<unsigned> stack;
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t pos, unsigned left) {
        if (pos == cells - 1) {
            units[pos] = left;
            std::vector<double> mass(cells);
            for (std::size_t k = 0; k < cells; ++k) {
                mass[k] = static_cast<double>(units[k]) / static_cast<double>(resolution);
            }
            out.emplace_back(grid, std::move(mass));
            return;
        }
        for (unsigned u = 0; u <= left; ++u) {
            units[pos] = u;
            rec(pos + 1, left - u);
        }
    };
    rec(0, resolution);
    return out;
}

} // namespace fixtures
