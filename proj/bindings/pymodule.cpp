#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "causalid/harness.hpp"

namespace py = pybind11;
using namespace causalid;

namespace {

SampleVec samples_from_tuples(const std::vector<std::tuple<std::size_t, int, std::size_t>>& rows) {
    SampleVec out;
    out.reserve(rows.size());
    for (const auto& [x, t, y] : rows) {
        out.push_back({static_cast<std::uint32_t>(x), static_cast<std::uint8_t>(t),
                       static_cast<std::uint32_t>(y)});
    }
    return out;
}

std::vector<std::tuple<std::size_t, int, std::size_t>> samples_to_tuples(const SampleVec& s) {
    std::vector<std::tuple<std::size_t, int, std::size_t>> out;
    out.reserve(s.size());
    for (const auto& r : s) out.emplace_back(r.x, r.t, r.y);
    return out;
}

py::dict report_to_dict(const EstimateReport& report) {
    py::dict d;
    d["tau_hat"] = report.tau_hat;
    d["scenario"] = report.scenario;
    d["n"] = report.n;
    if (report.treated_pick) {
        d["treated_pick"] = py::make_tuple(report.treated_pick->p_index,
                                           report.treated_pick->d_index);
    }
    if (report.control_pick) {
        d["control_pick"] = py::make_tuple(report.control_pick->p_index,
                                           report.control_pick->d_index);
    }
    if (report.propensity_pick_treated) {
        d["propensity_pick_treated"] = *report.propensity_pick_treated;
    }
    if (report.refined_treated) d["refined_treated"] = *report.refined_treated;
    if (report.refined_control) d["refined_control"] = *report.refined_control;
    if (!report.s_hat_treated.empty()) d["s_hat_treated"] = report.s_hat_treated;
    if (!report.s_hat_control.empty()) d["s_hat_control"] = report.s_hat_control;
    if (!report.note.empty()) d["note"] = report.note;
    return d;
}

} // namespace

PYBIND11_MODULE(_causalid, m) {
    m.doc() = "treatment-effect identifiability and censored-sample estimation on finite"
              " discrete studies";

    py::register_exception<PreconditionError>(m, "PreconditionError");

    py::class_<Grid, GridPtr>(m, "Grid")
        .def(py::init([](std::vector<std::vector<double>> covariates,
                         std::vector<double> outcomes) {
                 return std::make_shared<Grid>(std::move(covariates), std::move(outcomes));
             }),
             py::arg("covariates"), py::arg("outcomes"))
        .def_property_readonly("num_covariates", &Grid::num_covariates)
        .def_property_readonly("num_outcomes", &Grid::num_outcomes)
        .def_property_readonly("dimension", &Grid::dimension)
        .def("covariate", &Grid::covariate)
        .def("outcome", &Grid::outcome)
        .def("volume", &Grid::volume)
        .def_static("line", [](std::size_t n, double lo, double hi,
                               std::vector<double> outcomes) {
            return std::make_shared<Grid>(Grid::line(n, lo, hi, std::move(outcomes)));
        });

    py::class_<JointPMF>(m, "JointPMF")
        .def(py::init<GridPtr, std::vector<double>>(), py::arg("grid"), py::arg("mass"))
        .def_property_readonly("grid", &JointPMF::grid)
        .def("mass", &JointPMF::mass)
        .def("x_marginal", &JointPMF::x_marginal)
        .def("conditional", &JointPMF::conditional)
        .def("mean_outcome", &JointPMF::mean_outcome)
        .def("conditional_mean", &JointPMF::conditional_mean)
        .def_property_readonly("raw", &JointPMF::raw);

    py::class_<PropensityTable>(m, "PropensityTable")
        .def(py::init<GridPtr, std::vector<double>>(), py::arg("grid"), py::arg("value"))
        .def_property_readonly("grid", &PropensityTable::grid)
        .def("value", &PropensityTable::value)
        .def("outcome_free", &PropensityTable::outcome_free, py::arg("tol") = kPmfTol)
        .def("complement", &PropensityTable::complement)
        .def_static("constant", &PropensityTable::constant)
        .def_static("indicator", &PropensityTable::indicator)
        .def_property_readonly("raw", &PropensityTable::raw);

    py::class_<CensoredPMF>(m, "CensoredPMF")
        .def_property_readonly("grid", &CensoredPMF::grid)
        .def("mass", &CensoredPMF::mass)
        .def("treated_mass", &CensoredPMF::treated_mass)
        .def_property_readonly("raw", &CensoredPMF::raw);

    py::class_<ObservationalStudy>(m, "ObservationalStudy")
        .def(py::init<JointPMF, JointPMF, PropensityTable, PropensityTable>(), py::arg("d0"),
             py::arg("d1"), py::arg("p0"), py::arg("p1"))
        .def_readonly("d0", &ObservationalStudy::d0)
        .def_readonly("d1", &ObservationalStudy::d1)
        .def_readonly("p0", &ObservationalStudy::p0)
        .def_readonly("p1", &ObservationalStudy::p1);

    py::enum_<PropensityTag>(m, "PropensityTag")
        .value("OU", PropensityTag::overlap_unconfounded)
        .value("O", PropensityTag::overlap)
        .value("U", PropensityTag::weak_overlap)
        .value("RD", PropensityTag::rd)
        .value("CUSTOM", PropensityTag::custom);

    py::enum_<Estimand>(m, "Estimand")
        .value("ATE", Estimand::ate)
        .value("ATT", Estimand::att)
        .value("HTE", Estimand::hte);

    m.def("validate_study", [](const ObservationalStudy& study) -> py::object {
        const auto bad = validate_study(study);
        return bad ? py::cast(*bad) : py::none();
    });
    m.def("censor", &censor);
    m.def("sample_censored", [](const CensoredPMF& cpmf, std::size_t n, std::uint64_t seed) {
        return samples_to_tuples(sample_censored(cpmf, n, seed));
    });
    m.def("pr_treated", &pr_treated);
    m.def("ate", &ate);
    m.def("att", &att);
    m.def("hte", &hte);
    m.def("true_propensity", &true_propensity);
    m.def("make_random_study", &make_random_study, py::arg("grid"), py::arg("tag"),
          py::arg("seed"), py::arg("c") = 0.25);
    m.def("derive_seed", &derive_seed);

    py::class_<PropensityClass>(m, "PropensityClass")
        .def_readonly("members", &PropensityClass::members)
        .def_readonly("tag", &PropensityClass::tag)
        .def_readonly("c", &PropensityClass::c);
    py::class_<DistributionClass>(m, "DistributionClass")
        .def(py::init([](GridPtr grid, std::vector<JointPMF> members) {
                 DistributionClass cls;
                 cls.grid = std::move(grid);
                 cls.members = std::move(members);
                 return cls;
             }),
             py::arg("grid"), py::arg("members"))
        .def_readonly("members", &DistributionClass::members);
    py::class_<ClassPair>(m, "ClassPair")
        .def_readonly("p_class", &ClassPair::p_class)
        .def_readonly("d_class", &ClassPair::d_class);

    m.def("make_propensity_class", &make_propensity_class, py::arg("grid"), py::arg("members"),
          py::arg("tag"), py::arg("c"));
    m.def("make_class_pair", &make_class_pair);
    m.def("member_check", &member_check);
    m.def(
        "is_compatible",
        [](const ClassPair& pair, std::size_t pi, std::size_t di) -> py::object {
            const auto w = is_compatible(pair, pi, di);
            return w ? py::cast(std::make_pair(w->p_index, w->d_index)) : py::none();
        },
        py::arg("pair"), py::arg("p_index"), py::arg("d_index"));
    m.def("enumerate_realizable", [](const ClassPair& pair) {
        std::vector<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>> out;
        for (const auto& r : enumerate_realizable(pair)) {
            out.emplace_back(r.p0, r.p1, r.d0, r.d1);
        }
        return out;
    });

    py::class_<ConditionVerdict>(m, "ConditionVerdict")
        .def_readonly("holds", &ConditionVerdict::holds)
        .def_readonly("detail", &ConditionVerdict::detail)
        .def_property_readonly("witness", [](const ConditionVerdict& v) -> py::object {
            if (!v.witness) return py::none();
            return py::make_tuple(
                py::make_tuple(v.witness->first.p_index, v.witness->first.d_index),
                py::make_tuple(v.witness->second.p_index, v.witness->second.d_index));
        });

    py::class_<EffectGap>(m, "EffectGap")
        .def_readonly("ate", &EffectGap::ate)
        .def_readonly("att", &EffectGap::att)
        .def_readonly("hte_max", &EffectGap::hte_max);

    py::class_<CounterexamplePair>(m, "CounterexamplePair")
        .def_readonly("study1", &CounterexamplePair::study1)
        .def_readonly("study2", &CounterexamplePair::study2)
        .def_readonly("shared_censored", &CounterexamplePair::shared_censored)
        .def_readonly("delta", &CounterexamplePair::delta)
        .def_readonly("relabeled", &CounterexamplePair::relabeled);

    m.def("check_condition1", &check_condition1);
    m.def("check_condition2", &check_condition2);
    m.def("check_condition3", &check_condition3);
    m.def("check_condition6", &check_condition6);
    m.def("build_indistinguishable_pair",
          [](const ClassPair& pair, std::pair<std::size_t, std::size_t> a,
             std::pair<std::size_t, std::size_t> b, Estimand estimand) {
              return build_indistinguishable_pair(pair, {a.first, a.second},
                                                  {b.first, b.second}, estimand);
          },
          py::arg("pair"), py::arg("a"), py::arg("b"), py::arg("estimand") = Estimand::ate);
    m.def("build_scenario3_counterexample", &build_scenario3_counterexample);
    m.def("build_overlap_zero_counterexample", &build_overlap_zero_counterexample);
    m.def("brute_force_identifiable", [](const ClassPair& pair, Estimand estimand) {
        const auto r = brute_force_identifiable(pair, estimand);
        py::dict d;
        d["identifiable"] = r.identifiable;
        d["num_realizable"] = r.num_realizable;
        if (r.counterexample) d["counterexample"] = *r.counterexample;
        return d;
    });
    m.def("certify_counterexample", &certify_counterexample, py::arg("cex"),
          py::arg("estimand") = Estimand::ate);

    m.def("estimate_propensity",
          [](const std::vector<std::tuple<std::size_t, int, std::size_t>>& rows,
             const std::vector<CovariatePropensity>& e_class, int arm) {
              return estimate_propensity(samples_from_tuples(rows), e_class, arm);
          },
          py::arg("samples"), py::arg("e_class"), py::arg("arm") = 1);
    m.def("yatracos_select", &yatracos_select, py::arg("candidates"), py::arg("empirical"),
          py::arg("zeta"));
    m.def("l1_distance",
          py::overload_cast<const std::vector<double>&, const std::vector<double>&>(&l1_distance));

    m.def("estimate_scenario1",
          [](const std::vector<std::tuple<std::size_t, int, std::size_t>>& rows,
             const GridPtr& grid, const std::vector<CovariatePropensity>& e_class, double c) {
              return report_to_dict(estimate_scenario1(samples_from_tuples(rows), grid, e_class, c));
          });
    m.def("estimate_scenario2",
          [](const std::vector<std::tuple<std::size_t, int, std::size_t>>& rows,
             const ClassPair& pair, double c, double eps) {
              return report_to_dict(estimate_scenario2(samples_from_tuples(rows), pair, c, eps));
          });
    m.def("estimate_scenario3",
          [](const std::vector<std::tuple<std::size_t, int, std::size_t>>& rows,
             const ClassPair& pair, double c, double eps) {
              return report_to_dict(estimate_scenario3(samples_from_tuples(rows), pair, c, eps));
          });
    m.def("estimate_rd",
          [](const std::vector<std::tuple<std::size_t, int, std::size_t>>& rows,
             const std::vector<std::size_t>& s, const DistributionClass& d_class, double c,
             double eps) {
              return report_to_dict(estimate_rd(samples_from_tuples(rows), s, d_class, c, eps));
          });
    m.def("ipw_estimate",
          [](const std::vector<std::tuple<std::size_t, int, std::size_t>>& rows,
             const GridPtr& grid, const CovariatePropensity& e) {
              return ipw_estimate(samples_from_tuples(rows), grid, e);
          });
    m.def("ipw_population_value", &ipw_population_value);
    m.def("naive_arm_mean_difference", &naive_arm_mean_difference);
    m.def("compute_mass_function", [](const DistributionClass& d_class, double c, double eps) {
        const auto r = compute_mass_function(d_class, c, eps);
        py::dict d;
        d["value"] = r.value;
        d["vacuous"] = r.vacuous;
        return d;
    });
    m.def("compute_extrapolation_constant",
          [](const DistributionClass& d_class, double c, std::size_t cap) {
              const auto r = compute_extrapolation_constant(d_class, c, cap);
              py::dict d;
              d["value"] = r.value;
              d["finite"] = r.finite;
              d["exact"] = r.exact;
              return d;
          },
          py::arg("d_class"), py::arg("c"), py::arg("exhaustive_cap") = 12);

    m.def("build_poly_expectation_members",
          [](GridPtr grid, const std::vector<Polynomial>& polys, double h) {
              return build_poly_expectation_members(std::move(grid), polys, h).cls;
          });
    py::class_<PolyTerm>(m, "PolyTerm")
        .def(py::init([](std::vector<unsigned> x_powers, unsigned y_power, double coeff) {
                 return PolyTerm{std::move(x_powers), y_power, coeff};
             }),
             py::arg("x_powers"), py::arg("y_power"), py::arg("coeff"));
    py::class_<Polynomial>(m, "Polynomial")
        .def(py::init([](std::vector<PolyTerm> terms) { return Polynomial{std::move(terms)}; }))
        .def("eval", &Polynomial::eval);

    m.def("load_class_pair", [](const std::string& path) {
        return io::class_pair_from_json(io::load_json_file(path));
    });
    m.def("load_study", [](const std::string& path) {
        return io::study_from_json(io::load_json_file(path));
    });
    m.def("save_study", [](const std::string& path, const ObservationalStudy& study) {
        io::save_json_file(path, io::to_json(study));
    });
}
