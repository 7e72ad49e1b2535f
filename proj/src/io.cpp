#include "causalid/io.hpp"

#include <cstdio>
#include <fstream>

namespace causalid::io {

json to_json(const Grid& grid) {
    return json{{"covariates", grid.covariate_points()}, {"outcomes", grid.outcome_points()}};
}

GridPtr grid_from_json(const json& j) {
    if (!j.contains("covariates") || !j.contains("outcomes")) {
        throw std::invalid_argument("grid json: missing covariates or outcomes");
    }
    return make_grid(j.at("covariates").get<std::vector<std::vector<double>>>(),
                     j.at("outcomes").get<std::vector<double>>());
}

json table_to_json(const GridPtr& grid, const std::vector<double>& raw) {
    const std::size_t ny = grid->num_outcomes();
    json rows = json::array();
    for (std::size_t i = 0; i < grid->num_covariates(); ++i) {
        json row = json::array();
        for (std::size_t jj = 0; jj < ny; ++jj) row.push_back(raw[i * ny + jj]);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> table_from_json(const GridPtr& grid, const json& j, const char* what) {
    const auto rows = j.get<std::vector<std::vector<double>>>();
    if (rows.size() != grid->num_covariates()) {
        throw std::invalid_argument(std::string(what) + ": row count does not match grid");
    }
    std::vector<double> out;
    out.reserve(grid->num_cells());
    for (const auto& row : rows) {
        if (row.size() != grid->num_outcomes()) {
            throw std::invalid_argument(std::string(what) + ": column count does not match grid");
        }
        out.insert(out.end(), row.begin(), row.end());
    }
    return out;
}

json to_json(const ObservationalStudy& study) {
    const auto& grid = study.grid();
    return json{{"grid", to_json(*grid)},
                {"d0", table_to_json(grid, study.d0.raw())},
                {"d1", table_to_json(grid, study.d1.raw())},
                {"p0", table_to_json(grid, study.p0.raw())},
                {"p1", table_to_json(grid, study.p1.raw())}};
}

ObservationalStudy study_from_json(const json& j) {
    GridPtr grid = grid_from_json(j.at("grid"));
    return ObservationalStudy{
        JointPMF(grid, table_from_json(grid, j.at("d0"), "d0")),
        JointPMF(grid, table_from_json(grid, j.at("d1"), "d1")),
        PropensityTable(grid, table_from_json(grid, j.at("p0"), "p0")),
        PropensityTable(grid, table_from_json(grid, j.at("p1"), "p1"))};
}

json samples_to_json(const GridPtr& grid, const SampleVec& samples) {
    json rows = json::array();
    for (const auto& s : samples) {
        rows.push_back(json::array({s.x, s.t, s.y}));
    }
    return json{{"grid", to_json(*grid)}, {"rows", std::move(rows)}};
}

std::pair<GridPtr, SampleVec> samples_from_json(const json& j) {
    GridPtr grid = grid_from_json(j.at("grid"));
    SampleVec samples;
    for (const auto& row : j.at("rows")) {
        if (!row.is_array() || row.size() != 3) {
            throw std::invalid_argument("samples json: each row must be [x_index, t, y_index]");
        }
        CensoredSample s{row[0].get<std::uint32_t>(), row[1].get<std::uint8_t>(),
                         row[2].get<std::uint32_t>()};
        if (s.x >= grid->num_covariates() || s.y >= grid->num_outcomes() || s.t > 1) {
            throw std::invalid_argument("samples json: row outside the grid");
        }
        samples.push_back(s);
    }
    return {std::move(grid), std::move(samples)};
}

json to_json(const Polynomial& poly) {
    json terms = json::array();
    for (const auto& t : poly.terms) {
        terms.push_back(
            json{{"x_powers", t.x_powers}, {"y_power", t.y_power}, {"coeff", t.coeff}});
    }
    return terms;
}

Polynomial polynomial_from_json(const json& j) {
    Polynomial poly;
    for (const auto& tj : j) {
        PolyTerm term;
        term.x_powers = tj.at("x_powers").get<std::vector<unsigned>>();
        term.y_power = tj.value("y_power", 0u);
        term.coeff = tj.at("coeff").get<double>();
        poly.terms.push_back(std::move(term));
    }
    return poly;
}

json to_json(const ClassPair& pair) {
    const auto& grid = pair.grid();
    json p_members = json::array();
    for (const auto& m : pair.p_class.members) p_members.push_back(table_to_json(grid, m.raw()));
    json d_members = json::array();
    for (const auto& m : pair.d_class.members) d_members.push_back(table_to_json(grid, m.raw()));
    return json{{"grid", to_json(*grid)},
                {"propensity_class",
                 {{"tag", to_string(pair.p_class.tag)},
                  {"c", pair.p_class.c},
                  {"members", std::move(p_members)}}},
                {"distribution_class",
                 {{"family", to_string(pair.d_class.family)},
                  {"degree", pair.d_class.degree},
                  {"members", std::move(d_members)}}}};
}

namespace {

DistributionClass distribution_class_from_json(const GridPtr& grid, const json& dj) {
    const auto family = distribution_family_from_string(dj.value("family", "tabular"));
    std::optional<std::vector<double>> marginal;
    if (dj.contains("x_marginal")) {
        marginal = dj.at("x_marginal").get<std::vector<double>>();
    }
    if (family == DistributionFamily::poly_logdensity ||
        family == DistributionFamily::poly_expectation) {
        if (dj.contains("polynomials")) {
            std::vector<Polynomial> polys;
            for (const auto& pj : dj.at("polynomials")) {
                polys.push_back(polynomial_from_json(pj));
            }
            if (family == DistributionFamily::poly_logdensity) {
                return build_poly_logdensity_members(grid, polys,
                                                     dj.value("bound", 1e300), marginal)
                    .cls;
            }
            return build_poly_expectation_members(grid, polys,
                                                  dj.at("noise_half_width").get<double>(),
                                                  marginal)
                .cls;
        }
        const auto degree = dj.at("degree").get<unsigned>();
        const auto lattice = dj.at("lattice").get<std::vector<std::vector<double>>>();
        if (family == DistributionFamily::poly_logdensity) {
            return build_poly_logdensity_family(grid, degree, lattice,
                                                dj.value("bound", 1e300), marginal)
                .cls;
        }
        return build_poly_expectation_family(grid, degree, lattice,
                                             dj.at("noise_half_width").get<double>(), marginal)
            .cls;
    }
    DistributionClass cls;
    cls.grid = grid;
    cls.family = family;
    for (const auto& mj : dj.at("members")) {
        cls.members.emplace_back(grid, table_from_json(grid, mj, "distribution member"));
    }
    return cls;
}

} // namespace

ClassPair class_pair_from_json(const json& j) {
    GridPtr grid = grid_from_json(j.at("grid"));
    const auto& pj = j.at("propensity_class");
    std::vector<PropensityTable> p_members;
    for (const auto& mj : pj.at("members")) {
        p_members.emplace_back(grid, table_from_json(grid, mj, "propensity member"));
    }
    PropensityClass p_class =
        make_propensity_class(grid, std::move(p_members),
                              propensity_tag_from_string(pj.value("tag", "custom")),
                              pj.value("c", 0.0));
    DistributionClass d_class = distribution_class_from_json(grid, j.at("distribution_class"));
    return make_class_pair(std::move(p_class), std::move(d_class));
}

json to_json(const EstimateReport& report) {
    json j{{"tau_hat", report.tau_hat},
           {"scenario", report.scenario},
           {"n", report.n},
           {"seed", report.seed}};
    auto put_pick = [&](const char* key, const std::optional<ArmSelection>& sel) {
        if (sel) {
            j[key] = json{{"p_index", sel->p_index},
                          {"d_index", sel->d_index},
                          {"normalizer", sel->z},
                          {"empirical_arm_mass", sel->empirical_arm_mass},
                          {"arm_samples", sel->arm_samples}};
        }
    };
    put_pick("treated_pick", report.treated_pick);
    put_pick("control_pick", report.control_pick);
    if (report.propensity_pick_treated) {
        j["propensity_pick_treated"] = *report.propensity_pick_treated;
    }
    if (report.propensity_pick_control) {
        j["propensity_pick_control"] = *report.propensity_pick_control;
    }
    if (!report.s_hat_treated.empty()) j["s_hat_treated"] = report.s_hat_treated;
    if (!report.s_hat_control.empty()) j["s_hat_control"] = report.s_hat_control;
    if (report.eliminated_treated > 0) j["eliminated_treated"] = report.eliminated_treated;
    if (report.eliminated_control > 0) j["eliminated_control"] = report.eliminated_control;
    if (report.refined_treated) j["refined_treated"] = *report.refined_treated;
    if (report.refined_control) j["refined_control"] = *report.refined_control;
    if (!report.note.empty()) j["note"] = report.note;
    if (report.ground_truth) j["ground_truth"] = *report.ground_truth;
    if (report.error) j["error"] = *report.error;
    return j;
}

json to_json(const ConditionVerdict& verdict) {
    json j{{"holds", verdict.holds}};
    if (verdict.witness) {
        j["witness"] = json{{"first", {{"p_index", verdict.witness->first.p_index},
                                       {"d_index", verdict.witness->first.d_index}}},
                            {"second", {{"p_index", verdict.witness->second.p_index},
                                        {"d_index", verdict.witness->second.d_index}}}};
    }
    if (!verdict.detail.empty()) j["detail"] = verdict.detail;
    return j;
}

json censored_to_json(const CensoredPMF& cpmf) {
    const auto& grid = cpmf.grid();
    const std::size_t ny = grid->num_outcomes();
    json arr = json::array();
    for (std::size_t i = 0; i < grid->num_covariates(); ++i) {
        json per_t = json::array();
        for (int t = 0; t <= 1; ++t) {
            json row = json::array();
            for (std::size_t jj = 0; jj < ny; ++jj) row.push_back(cpmf.mass(i, t, jj));
            per_t.push_back(std::move(row));
        }
        arr.push_back(std::move(per_t));
    }
    return json{{"grid", to_json(*grid)}, {"mass", std::move(arr)}};
}

json certificate_to_json(const CounterexamplePair& cex) {
    json delta{{"ate", cex.delta.ate}, {"hte_max", cex.delta.hte_max}};
    if (cex.delta.att) delta["att"] = *cex.delta.att;
    return json{{"shared_censored", censored_to_json(cex.shared_censored)},
                {"delta", std::move(delta)},
                {"relabeled", cex.relabeled}};
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

} // namespace causalid::io
