#include "causalid/nuisance.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace causalid {

std::size_t estimate_propensity(const SampleVec& samples,
                                const std::vector<CovariatePropensity>& e_class, int arm) {
    if (e_class.empty()) {
        throw std::invalid_argument("estimate_propensity: empty hypothesis class");
    }
    if (samples.empty()) {
        throw PreconditionError("estimate_propensity: no samples");
    }
    std::size_t best = 0;
    double best_loss = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < e_class.size(); ++k) {
        const auto& e = e_class[k];
        double loss = 0.0;
        for (const auto& s : samples) {
            if (s.x >= e.size()) {
                throw std::invalid_argument("estimate_propensity: sample covariate out of range");
            }
            const double label = (s.t == arm) ? 1.0 : 0.0;
            const double r = label - e[s.x];
            loss += r * r;
        }
        if (loss < best_loss) {
            best_loss = loss;
            best = k;
        }
    }
    return best;
}

std::vector<double> EmpiricalCensored::pmf() const {
    std::vector<double> out(counts.size(), 0.0);
    if (n == 0) return out;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        out[k] = static_cast<double>(counts[k]) / static_cast<double>(n);
    }
    return out;
}

std::size_t EmpiricalCensored::arm_count(int t) const {
    const std::size_t ny = grid->num_outcomes();
    const std::size_t nx = grid->num_covariates();
    std::size_t c = 0;
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            c += counts[(i * 2 + static_cast<std::size_t>(t)) * ny + j];
        }
    }
    return c;
}

std::vector<double> EmpiricalCensored::arm_conditional(int t) const {
    const std::size_t ny = grid->num_outcomes();
    const std::size_t nx = grid->num_covariates();
    std::vector<double> out(nx * ny, 0.0);
    const std::size_t total = arm_count(t);
    if (total == 0) return out;
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            out[i * ny + j] =
                static_cast<double>(counts[(i * 2 + static_cast<std::size_t>(t)) * ny + j]) /
                static_cast<double>(total);
        }
    }
    return out;
}

EmpiricalCensored empirical_censored(const SampleVec& samples, GridPtr grid) {
    EmpiricalCensored emp;
    emp.grid = std::move(grid);
    emp.counts.assign(emp.grid->num_cells() * 2, 0);
    emp.n = samples.size();
    const std::size_t ny = emp.grid->num_outcomes();
    for (const auto& s : samples) {
        if (s.x >= emp.grid->num_covariates() || s.y >= ny || s.t > 1) {
            throw std::invalid_argument("empirical_censored: sample outside the grid");
        }
        ++emp.counts[(s.x * 2 + s.t) * ny + s.y];
    }
    return emp;
}

std::size_t yatracos_select(const std::vector<std::vector<double>>& candidates,
                            const std::vector<double>& empirical, double zeta) {
    const std::size_t m = candidates.size();
    if (m == 0) throw std::invalid_argument("yatracos_select: no candidates");
    if (!(zeta > 0.0)) throw std::invalid_argument("yatracos_select: zeta must be positive");
    const std::size_t cells = empirical.size();
    for (const auto& f : candidates) {
        if (f.size() != cells) {
            throw std::invalid_argument("yatracos_select: candidate size mismatch");
        }
    }
    std::size_t best = 0;
    double best_stat = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
        double stat = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == j) continue;
            double fj_mass = 0.0, emp_mass = 0.0;
            for (std::size_t z = 0; z < cells; ++z) {
                if (candidates[i][z] > candidates[j][z]) {
                    fj_mass += candidates[j][z];
                    emp_mass += empirical[z];
                }
            }
            stat = std::max(stat, std::fabs(fj_mass - emp_mass));
        }
        if (stat < best_stat) {
            best_stat = stat;
            best = j;
        }
    }
    return best;
}

std::vector<double> product_table(const ClassPair& pair, std::size_t p_index,
                                  std::size_t d_index) {
    const auto& p = pair.p_class.members[p_index];
    const auto& d = pair.d_class.members[d_index];
    std::vector<double> out(d.raw().size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = p.raw()[k] * d.raw()[k];
    return out;
}

std::vector<CandidateProduct> build_candidate_products(const ClassPair& pair, int arm) {
    std::vector<CandidateProduct> out;
    out.reserve(pair.num_tuples());
    for (std::size_t pi = 0; pi < pair.p_class.members.size(); ++pi) {
        for (std::size_t di = 0; di < pair.d_class.members.size(); ++di) {
            CandidateProduct cand;
            cand.p_index = pi;
            cand.d_index = di;
            cand.arm = arm;
            cand.normalized = product_table(pair, pi, di);
            double z = 0.0;
            for (double v : cand.normalized) z += v;
            cand.z = z;
            if (z > 0.0) {
                for (double& v : cand.normalized) v /= z;
            } else {
                cand.normalized.clear();
            }
            out.push_back(std::move(cand));
        }
    }
    return out;
}

ArmSelection select_product_for_arm(const ClassPair& pair, const EmpiricalCensored& emp,
                                    int arm, double floor, double zeta) {
    const std::size_t arm_n = emp.arm_count(arm);
    if (arm_n == 0) {
        throw PreconditionError("l1 oracle: arm " + std::to_string(arm) + " has zero samples");
    }
    auto candidates = build_candidate_products(pair, arm);
    std::vector<std::vector<double>> tables;
    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        if (candidates[k].z >= floor && !candidates[k].normalized.empty()) {
            tables.push_back(candidates[k].normalized);
            kept.push_back(k);
        }
    }
    if (tables.empty()) {
        throw PreconditionError("l1 oracle: arm mass below eta - eps for every candidate");
    }
    const auto winner_local = yatracos_select(tables, emp.arm_conditional(arm), zeta);
    const auto& winner = candidates[kept[winner_local]];
    ArmSelection sel;
    sel.p_index = winner.p_index;
    sel.d_index = winner.d_index;
    sel.z = winner.z;
    sel.arm_samples = arm_n;
    sel.empirical_arm_mass = static_cast<double>(arm_n) / static_cast<double>(emp.n);
    return sel;
}

L1OracleResult l1_oracle(const ClassPair& pair, const SampleVec& samples, double eps,
                         double eta) {
    if (!(eta > 0.0 && eta <= 0.5)) {
        throw std::invalid_argument("l1 oracle: eta must lie in (0, 1/2]");
    }
    if (!(eps > 0.0)) {
        throw std::invalid_argument("l1 oracle: eps must be positive");
    }
    const auto emp = empirical_censored(samples, pair.grid());
    const double floor = eta - eps;
    const double zeta = eps / 8.0;
    L1OracleResult result;
    result.zeta = zeta;
    result.control = select_product_for_arm(pair, emp, 0, floor, zeta);
    result.treated = select_product_for_arm(pair, emp, 1, floor, zeta);
    return result;
}

std::vector<double> rescaled_product(const ClassPair& pair, const ArmSelection& sel) {
    auto out = product_table(pair, sel.p_index, sel.d_index);
    if (sel.z <= 0.0) return out;
    const double scale = sel.empirical_arm_mass / sel.z;
    for (double& v : out) v *= scale;
    return out;
}

} // namespace causalid
