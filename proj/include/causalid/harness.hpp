#pragma once

#include <optional>
#include <string>
#include <vector>

#include "causalid/io.hpp"

namespace causalid {

/// Declarative description of a Monte-Carlo run: the data-generating study
/// (a file or a tagged generator), the class pair, the scenario, the sample
/// size grid, and the replica/seed plan. Fully determines a reproducible
/// run.
struct ExperimentConfig {
    struct Generator {
        PropensityTag tag = PropensityTag::overlap_unconfounded;
        std::uint64_t seed = 0;
        double c = 0.25;
    };

    std::string scenario; // "1", "2", "3", or "rd"
    std::string classes_file;
    std::optional<std::string> study_file;
    std::optional<Generator> generator;
    std::vector<std::size_t> rd_set;
    std::vector<std::size_t> n_grid;
    std::size_t replicas = 0;
    std::uint64_t seed = 0;
    double eps = 0.1;
    double delta = 0.1;
    double c = 0.25;
    std::optional<double> eta;
    std::string out_dir;
};

ExperimentConfig config_from_json(const io::json& j);

struct ReplicaRow {
    std::size_t n = 0;
    std::size_t replica = 0;
    std::uint64_t seed = 0;
    std::string status; // "ok" or the recorded error
    std::optional<double> tau_hat;
    std::optional<double> truth;
    std::optional<double> abs_error;
};

struct Aggregate {
    std::size_t n = 0;
    std::size_t ok = 0;
    std::size_t failed = 0;
    std::optional<double> median_abs_error;   // absent without ok rows or truth
    std::optional<double> success_rate;       // fraction with |error| <= eps
};

struct RunSummary {
    std::vector<ReplicaRow> rows;
    std::vector<Aggregate> aggregates;
    double elapsed_seconds = 0.0;
};

/// Runs the configured sweep: for each n and replica, sample the censored
/// law with a seed derived from the master seed by counter (row-major over
/// the n-grid and replicas), estimate, and record. Estimator errors are
/// recorded per replica without aborting. Writes replicas.csv and
/// summary.json under out_dir when set.
RunSummary run_experiment(const ExperimentConfig& config);

std::string rows_to_csv(const std::vector<ReplicaRow>& rows);
io::json summary_to_json(const RunSummary& summary, const ExperimentConfig& config);

struct IdentifyOutcome {
    ConditionVerdict verdict;
    std::optional<CounterexamplePair> counterexample;
};

/// Condition check for the estimand (condition 1 for mean effects,
/// condition 6 for the conditional effect); on failure the witness is
/// turned into a certified counterexample pair.
IdentifyOutcome run_identify(const ClassPair& pair, Estimand estimand);

} // namespace causalid
