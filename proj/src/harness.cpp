#include "causalid/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace causalid {

ExperimentConfig config_from_json(const io::json& j) {
    ExperimentConfig cfg;
    cfg.scenario = j.at("scenario").get<std::string>();
    if (cfg.scenario != "1" && cfg.scenario != "2" && cfg.scenario != "3" &&
        cfg.scenario != "rd") {
        throw std::invalid_argument("config: scenario must be 1, 2, 3, or rd");
    }
    cfg.classes_file = j.at("classes_file").get<std::string>();
    if (j.contains("study_file")) cfg.study_file = j.at("study_file").get<std::string>();
    if (j.contains("generator")) {
        const auto& g = j.at("generator");
        ExperimentConfig::Generator gen;
        gen.tag = propensity_tag_from_string(g.at("tag").get<std::string>());
        gen.seed = g.value("seed", 0ull);
        gen.c = g.value("c", 0.25);
        cfg.generator = gen;
    }
    if (cfg.study_file.has_value() == cfg.generator.has_value()) {
        throw std::invalid_argument("config: exactly one of study_file or generator required");
    }
    if (j.contains("rd_set")) cfg.rd_set = j.at("rd_set").get<std::vector<std::size_t>>();
    cfg.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
    cfg.replicas = j.at("replicas").get<std::size_t>();
    cfg.seed = j.value("seed", 0ull);
    cfg.eps = j.value("eps", 0.1);
    cfg.delta = j.value("delta", 0.1);
    cfg.c = j.value("c", 0.25);
    if (j.contains("eta")) cfg.eta = j.at("eta").get<double>();
    cfg.out_dir = j.value("out_dir", "");
    if (cfg.scenario == "rd" && cfg.rd_set.empty()) {
        throw std::invalid_argument("config: scenario rd requires rd_set");
    }
    return cfg;
}

namespace {

std::vector<CovariatePropensity> covariate_class(const PropensityClass& p_class) {
    std::vector<CovariatePropensity> out;
    const std::size_t nx = p_class.grid->num_covariates();
    for (std::size_t k = 0; k < p_class.members.size(); ++k) {
        const auto& member = p_class.members[k];
        if (!member.outcome_free()) {
            throw std::invalid_argument(
                "scenario 1 requires outcome-free propensity members (member " +
                std::to_string(k) + " varies with the outcome)");
        }
        CovariatePropensity e(nx);
        for (std::size_t i = 0; i < nx; ++i) e[i] = member.value(i, 0);
        out.push_back(std::move(e));
    }
    return out;
}

std::optional<double> median(std::vector<double> v) {
    if (v.empty()) return std::nullopt;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    if (v.size() % 2 == 1) return v[m];
    return 0.5 * (v[m - 1] + v[m]);
}

std::string sanitize_status(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

} // namespace

RunSummary run_experiment(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const ClassPair pair = io::class_pair_from_json(io::load_json_file(config.classes_file));

    ObservationalStudy study = [&] {
        if (config.study_file) {
            return io::study_from_json(io::load_json_file(*config.study_file));
        }
        return make_random_study(pair.grid(), config.generator->tag, config.generator->seed,
                                 config.generator->c);
    }();
    if (auto bad = validate_study(study)) {
        throw std::invalid_argument("experiment: invalid study: " + *bad);
    }
    const double truth = ate(study);
    const CensoredPMF cpmf = censor(study);

    RunSummary summary;
    std::size_t counter = 0;
    for (std::size_t n : config.n_grid) {
        for (std::size_t r = 0; r < config.replicas; ++r, ++counter) {
            ReplicaRow row;
            row.n = n;
            row.replica = r;
            row.seed = derive_seed(config.seed, counter);
            row.truth = truth;
            try {
                const SampleVec samples = sample_censored(cpmf, n, row.seed);
                EstimateReport report;
                if (config.scenario == "1") {
                    report = estimate_scenario1(samples, pair.grid(),
                                                covariate_class(pair.p_class), config.c);
                } else if (config.scenario == "2") {
                    report = estimate_scenario2(samples, pair, config.c, config.eps);
                } else if (config.scenario == "3") {
                    report = estimate_scenario3(samples, pair, config.c, config.eps);
                } else {
                    report = estimate_rd(samples, config.rd_set, pair.d_class, config.c,
                                         config.eps);
                }
                row.status = "ok";
                row.tau_hat = report.tau_hat;
                row.abs_error = std::fabs(report.tau_hat - truth);
            } catch (const PreconditionError& e) {
                row.status = sanitize_status(e.what());
            }
            summary.rows.push_back(std::move(row));
        }
    }

    for (std::size_t n : config.n_grid) {
        Aggregate agg;
        agg.n = n;
        std::vector<double> errors;
        std::size_t hits = 0;
        for (const auto& row : summary.rows) {
            if (row.n != n) continue;
            if (row.status == "ok") {
                ++agg.ok;
                if (row.abs_error) {
                    errors.push_back(*row.abs_error);
                    if (*row.abs_error <= config.eps) ++hits;
                }
            } else {
                ++agg.failed;
            }
        }
        agg.median_abs_error = median(std::move(errors));
        if (agg.ok > 0) {
            agg.success_rate = static_cast<double>(hits) / static_cast<double>(agg.ok);
        }
        summary.aggregates.push_back(std::move(agg));
    }

    summary.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        const auto csv_path = std::filesystem::path(config.out_dir) / "replicas.csv";
        std::ofstream csv(csv_path);
        if (!csv) throw std::invalid_argument("cannot write " + csv_path.string());
        csv << rows_to_csv(summary.rows);
        io::save_json_file((std::filesystem::path(config.out_dir) / "summary.json").string(),
                           summary_to_json(summary, config));
    }
    return summary;
}

std::string rows_to_csv(const std::vector<ReplicaRow>& rows) {
    std::ostringstream out;
    out << "n,replica,seed,status,tau_hat,truth,abs_error\n";
    for (const auto& row : rows) {
        out << row.n << ',' << row.replica << ',' << row.seed << ',' << row.status << ',';
        if (row.tau_hat) out << io::format_number(*row.tau_hat);
        out << ',';
        if (row.truth) out << io::format_number(*row.truth);
        out << ',';
        if (row.abs_error) out << io::format_number(*row.abs_error);
        out << '\n';
    }
    return out.str();
}

io::json summary_to_json(const RunSummary& summary, const ExperimentConfig& config) {
    io::json aggs = io::json::array();
    for (const auto& a : summary.aggregates) {
        io::json j{{"n", a.n}, {"ok", a.ok}, {"failed", a.failed}};
        j["median_abs_error"] =
            a.median_abs_error ? io::json(*a.median_abs_error) : io::json(nullptr);
        j["success_rate"] = a.success_rate ? io::json(*a.success_rate) : io::json(nullptr);
        aggs.push_back(std::move(j));
    }
    return io::json{{"scenario", config.scenario},
                    {"replicas", config.replicas},
                    {"seed", config.seed},
                    {"eps", config.eps},
                    {"c", config.c},
                    {"aggregates", std::move(aggs)},
                    {"elapsed_seconds", summary.elapsed_seconds}};
}

IdentifyOutcome run_identify(const ClassPair& pair, Estimand estimand) {
    IdentifyOutcome outcome;
    outcome.verdict =
        estimand == Estimand::hte ? check_condition6(pair) : check_condition1(pair);
    if (!outcome.verdict.holds && outcome.verdict.witness) {
        outcome.counterexample = build_indistinguishable_pair(
            pair, outcome.verdict.witness->first, outcome.verdict.witness->second, estimand);
    }
    return outcome;
}

} // namespace causalid
