#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "causalid/harness.hpp"
#include "fixtures.hpp"

using namespace causalid;
using namespace fixtures;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("causalid_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

// Scenario-1-ready class pair on the 2x2 grid with the true propensity in
// a nine-member unconfounded class.
void write_scenario1_inputs(const fs::path& dir) {
    auto grid = grid_2x2();
    const auto d1 = joint_from_conditionals(grid, {0.5, 0.5}, {{0.7, 0.3}, {0.5, 0.5}});
    const auto d0 = joint_from_conditionals(grid, {0.5, 0.5}, {{0.9, 0.1}, {0.9, 0.1}});
    ObservationalStudy study{d0, d1, PropensityTable(grid, {0.8, 0.8, 0.2, 0.2}),
                             PropensityTable(grid, {0.2, 0.2, 0.8, 0.8})};
    io::save_json_file((dir / "study.json").string(), io::to_json(study));

    std::vector<PropensityTable> members;
    for (double a : {0.2, 0.5, 0.8}) {
        for (double b : {0.2, 0.5, 0.8}) {
            members.push_back(
                PropensityTable(grid, {a, a, b, b}));
        }
    }
    PropensityClass pc =
        make_propensity_class(grid, std::move(members), PropensityTag::overlap_unconfounded, 0.15);
    DistributionClass dc;
    dc.grid = grid;
    dc.members = {d0, d1};
    io::save_json_file((dir / "classes.json").string(),
                       io::to_json(ClassPair{std::move(pc), std::move(dc)}));
}

} // namespace

TEST_CASE("study and samples round-trip through json") {
    auto grid = grid_2x2();
    const auto study = make_random_study(grid, PropensityTag::overlap, 13, 0.2);
    const auto j = io::to_json(study);
    const auto back = io::study_from_json(j);
    CHECK(back.d0.raw() == study.d0.raw());
    CHECK(back.d1.raw() == study.d1.raw());
    CHECK(back.p0.raw() == study.p0.raw());
    CHECK(back.p1.raw() == study.p1.raw());

    const auto samples = sample_censored(censor(study), 300, 1);
    const auto sj = io::samples_to_json(grid, samples);
    const auto [g2, back_samples] = io::samples_from_json(sj);
    CHECK(back_samples == samples);
    CHECK(*g2 == *grid);
}

TEST_CASE("class pair files support tables and polynomial families") {
    const auto dir = temp_dir("classfiles");
    SUBCASE("tabular round-trip") {
        const auto pair = product_witness_pair();
        const auto path = (dir / "pair.json").string();
        io::save_json_file(path, io::to_json(pair));
        const auto back = io::class_pair_from_json(io::load_json_file(path));
        CHECK(back.p_class.members.size() == 2);
        CHECK(back.d_class.members.size() == 2);
        CHECK(back.d_class.members[0].raw() == pair.d_class.members[0].raw());
    }
    SUBCASE("polynomial expectation family from explicit polynomials") {
        io::json j{
            {"grid", {{"covariates", {{0.0}, {1.0}}}, {"outcomes", {-1.0, 0.0, 1.0, 2.0}}}},
            {"propensity_class",
             {{"tag", "RD"}, {"c", 0.25},
              {"members", {{{1.0, 1.0, 1.0, 1.0}, {0.0, 0.0, 0.0, 0.0}},
                           {{0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}}}}}},
            {"distribution_class",
             {{"family", "poly_expectation"},
              {"noise_half_width", 0.5},
              {"polynomials",
               {{{{"x_powers", {1}}, {"y_power", 0}, {"coeff", 1.0}}},
                {{{"x_powers", {0}}, {"y_power", 0}, {"coeff", 0.5}}}}}}}};
        const auto pair = io::class_pair_from_json(j);
        CHECK(pair.p_class.tag == PropensityTag::rd);
        REQUIRE(pair.d_class.members.size() == 2);
        CHECK(pair.d_class.members[0].conditional_mean(1) == doctest::Approx(1.0));
        CHECK(pair.d_class.members[1].conditional_mean(0) == doctest::Approx(0.5));
    }
    SUBCASE("tagged members are verified on load") {
        io::json j{{"grid", {{"covariates", {{0.0}}}, {"outcomes", {0.0, 1.0}}}},
                   {"propensity_class",
                    {{"tag", "O"}, {"c", 0.25}, {"members", {{{0.9, 0.9}}}}}},
                   {"distribution_class",
                    {{"family", "tabular"}, {"members", {{{0.5, 0.5}}}}}}};
        CHECK_THROWS_AS(io::class_pair_from_json(j), std::invalid_argument);
    }
}

TEST_CASE("csv rendering uses 12 significant digits") {
    ReplicaRow row;
    row.n = 100;
    row.replica = 0;
    row.seed = 7;
    row.status = "ok";
    row.tau_hat = 1.0 / 3.0;
    row.truth = 0.25;
    row.abs_error = 1.0 / 3.0 - 0.25;
    const auto csv = rows_to_csv({row});
    CHECK(csv.find("0.333333333333") != std::string::npos);
    CHECK(csv.find("n,replica,seed,status,tau_hat,truth,abs_error") == 0);
}

TEST_CASE("config parsing") {
    io::json j{{"scenario", "1"},      {"classes_file", "c.json"},
               {"study_file", "s.json"}, {"n_grid", {100, 1000}},
               {"replicas", 3},        {"seed", 9}};
    const auto cfg = config_from_json(j);
    CHECK(cfg.scenario == "1");
    CHECK(cfg.n_grid == std::vector<std::size_t>{100, 1000});

    SUBCASE("study source is exactly one of file or generator") {
        io::json bad = j;
        bad["generator"] = {{"tag", "OU"}, {"seed", 1}};
        CHECK_THROWS_AS(config_from_json(bad), std::invalid_argument);
        bad.erase("study_file");
        CHECK_NOTHROW(config_from_json(bad));
    }
    SUBCASE("rd needs its covariate set") {
        io::json bad = j;
        bad["scenario"] = "rd";
        CHECK_THROWS_AS(config_from_json(bad), std::invalid_argument);
    }
    SUBCASE("unknown scenario is rejected") {
        io::json bad = j;
        bad["scenario"] = "5";
        CHECK_THROWS_AS(config_from_json(bad), std::invalid_argument);
    }
}

TEST_CASE("experiments are deterministic and replayable") {
    const auto dir = temp_dir("sweep");
    write_scenario1_inputs(dir);
    io::json cfg_json{{"scenario", "1"},
                      {"classes_file", (dir / "classes.json").string()},
                      {"study_file", (dir / "study.json").string()},
                      {"n_grid", {400, 900}},
                      {"replicas", 5},
                      {"seed", 2024},
                      {"eps", 0.1},
                      {"c", 0.15},
                      {"out_dir", (dir / "run1").string()}};
    auto cfg = config_from_json(cfg_json);
    const auto first = run_experiment(cfg);
    cfg.out_dir = (dir / "run2").string();
    run_experiment(cfg);

    SUBCASE("byte-identical replica rows across runs") {
        CHECK(read_file(dir / "run1" / "replicas.csv") ==
              read_file(dir / "run2" / "replicas.csv"));
    }
    SUBCASE("rows carry derived seeds and truth") {
        REQUIRE(first.rows.size() == 10);
        CHECK(first.rows[0].seed == derive_seed(2024, 0));
        CHECK(first.rows[7].seed == derive_seed(2024, 7));
        for (const auto& row : first.rows) {
            CHECK(row.status == "ok");
            REQUIRE(row.truth);
            CHECK(*row.truth == doctest::Approx(0.3).epsilon(1e-9));
        }
    }
    SUBCASE("aggregates are recomputable from the rows") {
        for (const auto& agg : first.aggregates) {
            std::size_t ok = 0;
            for (const auto& row : first.rows) {
                if (row.n == agg.n && row.status == "ok") ++ok;
            }
            CHECK(agg.ok == ok);
        }
    }
    SUBCASE("zero replicas flag undefined aggregates") {
        auto empty_cfg = cfg;
        empty_cfg.replicas = 0;
        empty_cfg.out_dir.clear();
        const auto summary = run_experiment(empty_cfg);
        CHECK(summary.rows.empty());
        REQUIRE(summary.aggregates.size() == 2);
        CHECK_FALSE(summary.aggregates[0].median_abs_error);
        CHECK_FALSE(summary.aggregates[0].success_rate);
        const auto sj = summary_to_json(summary, empty_cfg);
        CHECK(sj["aggregates"][0]["median_abs_error"].is_null());
    }
    SUBCASE("estimator errors are recorded without aborting") {
        auto gen_cfg = cfg;
        gen_cfg.out_dir.clear();
        gen_cfg.n_grid = {1}; // too small to split: every replica errors
        const auto summary = run_experiment(gen_cfg);
        REQUIRE(summary.rows.size() == 5);
        for (const auto& row : summary.rows) {
            CHECK(row.status != "ok");
            CHECK_FALSE(row.tau_hat);
        }
        CHECK(summary.aggregates[0].failed == 5);
    }
}

TEST_CASE("identify driver") {
    SUBCASE("holds: no counterexample") {
        auto grid = grid_1x2();
        PropensityClass pc{grid, {PropensityTable::constant(grid, 0.5)},
                           PropensityTag::custom, 0.0};
        DistributionClass dc;
        dc.grid = grid;
        dc.members = {joint_from_conditionals(grid, {1.0}, {{0.25, 0.75}})};
        const auto outcome = run_identify(ClassPair{pc, dc}, Estimand::ate);
        CHECK(outcome.verdict.holds);
        CHECK_FALSE(outcome.counterexample);
    }
    SUBCASE("fails: counterexample is certified and serializable") {
        const auto outcome = run_identify(product_witness_pair(), Estimand::ate);
        REQUIRE_FALSE(outcome.verdict.holds);
        REQUIRE(outcome.counterexample);
        CHECK_NOTHROW(certify_counterexample(*outcome.counterexample));
        const auto cert = io::certificate_to_json(*outcome.counterexample);
        CHECK(cert.contains("shared_censored"));
        CHECK(std::fabs(cert["delta"]["ate"].get<double>()) > 0.05);
    }
}

TEST_CASE("seed derivation is a stable counter scheme") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(123, 45) == derive_seed(123, 45));
}
