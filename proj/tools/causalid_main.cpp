#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "causalid/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitNotIdentifiable = 4;

namespace fs = std::filesystem;
using causalid::io::json;

void write_counterexample(const causalid::CounterexamplePair& cex, const std::string& out_dir) {
    fs::create_directories(out_dir);
    causalid::io::save_json_file((fs::path(out_dir) / "study1.json").string(),
                                 causalid::io::to_json(cex.study1));
    causalid::io::save_json_file((fs::path(out_dir) / "study2.json").string(),
                                 causalid::io::to_json(cex.study2));
    causalid::io::save_json_file((fs::path(out_dir) / "certificate.json").string(),
                                 causalid::io::certificate_to_json(cex));
}

int cmd_check_identify(const std::string& classes_file, const std::string& estimand_name,
                       const std::string& out_dir, bool run_oracle) {
    const auto pair =
        causalid::io::class_pair_from_json(causalid::io::load_json_file(classes_file));
    const auto estimand = causalid::estimand_from_string(estimand_name);
    const auto outcome = causalid::run_identify(pair, estimand);
    json report = causalid::io::to_json(outcome.verdict);
    report["estimand"] = estimand_name;
    report["scope"] = "exact for the enumerated finite classes; lattice-generated families"
                      " are checked at lattice resolution";
    if (run_oracle) {
        const auto oracle = causalid::brute_force_identifiable(pair, estimand);
        report["oracle_identifiable"] = oracle.identifiable;
        report["oracle_realizable_studies"] = oracle.num_realizable;
    }
    std::cout << report.dump(2) << "\n";
    if (outcome.verdict.holds) return kExitOk;
    if (outcome.counterexample) {
        write_counterexample(*outcome.counterexample, out_dir);
        std::cerr << "not identifiable; counterexample written to " << out_dir << "\n";
    }
    return kExitNotIdentifiable;
}

int cmd_build_counterexample(const std::string& classes_file, const std::string& kind,
                             const std::string& estimand_name, std::vector<std::size_t> members,
                             std::vector<std::size_t> region, std::size_t p_member,
                             std::size_t x, std::size_t y1, std::size_t y2, double delta,
                             double c, const std::string& out_dir) {
    const auto pair =
        causalid::io::class_pair_from_json(causalid::io::load_json_file(classes_file));
    causalid::CounterexamplePair cex = [&] {
        if (kind == "condition1") {
            const auto outcome =
                causalid::run_identify(pair, causalid::estimand_from_string(estimand_name));
            if (outcome.verdict.holds || !outcome.counterexample) {
                throw causalid::PreconditionError(
                    "condition holds for this pair; nothing to construct");
            }
            return *outcome.counterexample;
        }
        if (kind == "scenario3") {
            if (members.size() != 2) {
                throw std::invalid_argument("scenario3 kind needs --members a,b");
            }
            return causalid::build_scenario3_counterexample(
                pair.d_class.members.at(members[0]), pair.d_class.members.at(members[1]),
                region, c);
        }
        if (kind == "overlap-zero") {
            return causalid::build_overlap_zero_counterexample(
                pair.p_class.members.at(p_member), x, y1, y2, delta);
        }
        throw std::invalid_argument("unknown kind: " + kind);
    }();
    write_counterexample(cex, out_dir);
    json delta_json{{"ate", cex.delta.ate}, {"hte_max", cex.delta.hte_max}};
    if (cex.delta.att) delta_json["att"] = *cex.delta.att;
    std::cout << json{{"written_to", out_dir}, {"delta", delta_json}}.dump(2) << "\n";
    return kExitOk;
}

int cmd_simulate(const std::string& study_file, const std::string& make_study,
                 const std::string& grid_from, std::uint64_t seed, double c, std::size_t n,
                 const std::string& out) {
    if (!make_study.empty()) {
        const auto j = causalid::io::load_json_file(grid_from);
        const auto grid = causalid::io::grid_from_json(j.at("grid"));
        const auto study = causalid::make_random_study(
            grid, causalid::propensity_tag_from_string(make_study), seed, c);
        causalid::io::save_json_file(out, causalid::io::to_json(study));
        std::cout << json{{"written_to", out},
                          {"ate", causalid::ate(study)},
                          {"att", causalid::att(study)},
                          {"pr_treated", causalid::pr_treated(study)}}
                         .dump(2)
                  << "\n";
        return kExitOk;
    }
    const auto study = causalid::io::study_from_json(causalid::io::load_json_file(study_file));
    const auto cpmf = causalid::censor(study);
    const auto samples = causalid::sample_censored(cpmf, n, seed);
    causalid::io::save_json_file(out, causalid::io::samples_to_json(study.grid(), samples));
    std::cout << json{{"written_to", out}, {"n", n}, {"seed", seed}}.dump(2) << "\n";
    return kExitOk;
}

int cmd_estimate(const std::string& scenario, const std::string& classes_file,
                 const std::string& samples_file, const std::string& simulate_study,
                 std::size_t n, std::uint64_t seed, double eps, double c,
                 std::vector<std::size_t> rd_set, const std::string& out) {
    const auto pair =
        causalid::io::class_pair_from_json(causalid::io::load_json_file(classes_file));
    causalid::SampleVec samples;
    std::optional<double> truth;
    if (!simulate_study.empty()) {
        const auto study =
            causalid::io::study_from_json(causalid::io::load_json_file(simulate_study));
        truth = causalid::ate(study);
        samples = causalid::sample_censored(causalid::censor(study), n, seed);
    } else {
        auto loaded = causalid::io::samples_from_json(causalid::io::load_json_file(samples_file));
        if (!causalid::same_grid(loaded.first, pair.grid())) {
            throw std::invalid_argument("samples grid does not match classes grid");
        }
        samples = std::move(loaded.second);
    }

    causalid::EstimateReport report;
    if (scenario == "1") {
        std::vector<causalid::CovariatePropensity> e_class;
        const std::size_t nx = pair.grid()->num_covariates();
        for (const auto& member : pair.p_class.members) {
            if (!member.outcome_free()) {
                throw std::invalid_argument("scenario 1 needs outcome-free propensity members");
            }
            causalid::CovariatePropensity e(nx);
            for (std::size_t i = 0; i < nx; ++i) e[i] = member.value(i, 0);
            e_class.push_back(std::move(e));
        }
        report = causalid::estimate_scenario1(samples, pair.grid(), e_class, c);
    } else if (scenario == "2") {
        report = causalid::estimate_scenario2(samples, pair, c, eps);
    } else if (scenario == "3") {
        report = causalid::estimate_scenario3(samples, pair, c, eps);
    } else if (scenario == "rd") {
        report = causalid::estimate_rd(samples, rd_set, pair.d_class, c, eps);
    } else {
        throw std::invalid_argument("scenario must be 1, 2, 3, or rd");
    }
    report.seed = seed;
    if (truth) {
        report.ground_truth = truth;
        report.error = report.tau_hat - *truth;
    }
    const json j = causalid::io::to_json(report);
    if (!out.empty()) {
        causalid::io::save_json_file(out, j);
    }
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_sweep(const std::string& config_file) {
    const auto cfg = causalid::config_from_json(causalid::io::load_json_file(config_file));
    const auto summary = causalid::run_experiment(cfg);
    std::cout << causalid::summary_to_json(summary, cfg).dump(2) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"identifiability checks and censored-sample estimation of treatment effects"
                 " on finite discrete studies"};
    app.require_subcommand(1);

    // check-identify
    auto* check = app.add_subcommand("check-identify",
                                     "decide identifiability over a class-pair file");
    std::string classes_file, estimand = "ate", out_dir = "counterexample";
    bool with_oracle = false;
    check->add_option("--classes", classes_file, "class-pair json file")->required();
    check->add_option("--estimand", estimand, "ate | att | hte");
    check->add_option("--out", out_dir, "directory for counterexample output");
    check->add_flag("--oracle", with_oracle, "also run the brute-force oracle");

    // build-counterexample
    auto* build = app.add_subcommand("build-counterexample",
                                     "construct an indistinguishable study pair");
    std::string b_classes, b_kind = "condition1", b_estimand = "ate", b_out = "counterexample";
    std::vector<std::size_t> b_members, b_region;
    std::size_t b_p = 0, b_x = 0, b_y1 = 0, b_y2 = 1;
    double b_delta = 0.0, b_c = 0.25;
    build->add_option("--classes", b_classes, "class-pair json file")->required();
    build->add_option("--kind", b_kind, "condition1 | scenario3 | overlap-zero");
    build->add_option("--estimand", b_estimand, "estimand for condition1 kind");
    build->add_option("--members", b_members, "two distribution member indices (scenario3)");
    build->add_option("--set", b_region, "covariate indices of the overlap region (scenario3)");
    build->add_option("--p-member", b_p, "propensity member index (overlap-zero)");
    build->add_option("--x", b_x, "covariate index (overlap-zero)");
    build->add_option("--y1", b_y1, "first outcome index (overlap-zero)");
    build->add_option("--y2", b_y2, "second outcome index (overlap-zero)");
    build->add_option("--delta", b_delta, "mass moved between the two cells (overlap-zero)");
    build->add_option("--c", b_c, "volume constant (scenario3)");
    build->add_option("--out", b_out, "output directory");

    // simulate
    auto* sim = app.add_subcommand("simulate", "sample a censored study or generate one");
    std::string s_study, s_make, s_grid_from, s_out = "samples.json";
    std::uint64_t s_seed = 0;
    std::size_t s_n = 1000;
    double s_c = 0.25;
    sim->add_option("--study", s_study, "study json file to sample from");
    sim->add_option("--make-study", s_make, "generate a study: OU | O | U | RD");
    sim->add_option("--grid-from", s_grid_from, "json file providing the grid for --make-study");
    sim->add_option("--n", s_n, "number of samples");
    sim->add_option("--seed", s_seed, "sampling seed");
    sim->add_option("--c", s_c, "class constant for --make-study");
    sim->add_option("--out", s_out, "output file");

    // estimate
    auto* est = app.add_subcommand("estimate", "estimate the average effect from samples");
    std::string e_scenario, e_classes, e_samples, e_sim_study, e_out;
    std::size_t e_n = 10000;
    std::uint64_t e_seed = 0;
    double e_eps = 0.1, e_c = 0.25;
    std::vector<std::size_t> e_rd_set;
    est->add_option("--scenario", e_scenario, "1 | 2 | 3 | rd")->required();
    est->add_option("--classes", e_classes, "class-pair json file")->required();
    est->add_option("--samples", e_samples, "samples json file");
    est->add_option("--simulate", e_sim_study, "study json file to sample instead");
    est->add_option("--n", e_n, "samples to draw with --simulate");
    est->add_option("--seed", e_seed, "sampling seed");
    est->add_option("--eps", e_eps, "target accuracy");
    est->add_option("--c", e_c, "class constant");
    est->add_option("--rd-set", e_rd_set, "treated covariate indices for scenario rd");
    est->add_option("--out", e_out, "write the report to this file");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run a Monte-Carlo experiment from a config");
    std::string w_config;
    sweep->add_option("--config", w_config, "experiment config json")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) {
            return cmd_check_identify(classes_file, estimand, out_dir, with_oracle);
        }
        if (build->parsed()) {
            return cmd_build_counterexample(b_classes, b_kind, b_estimand, b_members, b_region,
                                            b_p, b_x, b_y1, b_y2, b_delta, b_c, b_out);
        }
        if (sim->parsed()) {
            return cmd_simulate(s_study, s_make, s_grid_from, s_seed, s_c, s_n, s_out);
        }
        if (est->parsed()) {
            return cmd_estimate(e_scenario, e_classes, e_samples, e_sim_study, e_n, e_seed,
                                e_eps, e_c, e_rd_set, e_out);
        }
        if (sweep->parsed()) {
            return cmd_sweep(w_config);
        }
    } catch (const causalid::PreconditionError& e) {
        std::cerr << "precondition failed: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
