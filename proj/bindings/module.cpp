#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "minigp/acquisition.hpp"
#include "minigp/baselines.hpp"
#include "minigp/environment.hpp"
#include "minigp/harness.hpp"
#include "minigp/kernel.hpp"
#include "minigp/metrics.hpp"
#include "minigp/mini_meta.hpp"
#include "minigp/posterior.hpp"
#include "minigp/svg_plot.hpp"

namespace py = pybind11;
using namespace minigp;

PYBIND11_MODULE(_minigp, m) {
    m.doc() = "GP optimization with a unique-candidate posterior and a "
              "low-switching epoch loop";

    m.attr("KAPPA_SQ") = kKappaSq;

    py::class_<KernelSpec>(m, "KernelSpec")
        .def(py::init([](double bandwidth) {
                 return KernelSpec{KernelFamily::Gaussian, bandwidth};
             }),
             py::arg("bandwidth"))
        .def_readonly("bandwidth", &KernelSpec::bandwidth);
    m.def("kernel_eval", &kernel_eval, py::arg("spec"), py::arg("x"), py::arg("y"));
    m.def("kernel_matrix", &kernel_matrix, py::arg("spec"), py::arg("X"), py::arg("Y"));

    py::class_<Candidate>(m, "Candidate")
        .def(py::init([](Eigen::Index index, Eigen::VectorXd coords) {
                 return Candidate{index, std::move(coords)};
             }),
             py::arg("grid_index"), py::arg("coords"))
        .def_readonly("grid_index", &Candidate::grid_index)
        .def_readonly("coords", &Candidate::coords);

    py::class_<UniqueHistory>(m, "UniqueHistory")
        .def(py::init<>())
        .def("add",
             [](UniqueHistory& h, const Candidate& c, const std::vector<double>& feedbacks) {
                 return h.add(c, feedbacks);
             },
             py::arg("candidate"), py::arg("feedbacks"))
        .def_property_readonly("size", &UniqueHistory::size)
        .def_property_readonly("total_steps", &UniqueHistory::total_steps)
        .def_property_readonly("unique_points", &UniqueHistory::unique_points)
        .def_property_readonly("counts", &UniqueHistory::counts)
        .def_property_readonly("feedback_sum", &UniqueHistory::feedback_sum)
        .def("row_of", &UniqueHistory::row_of, py::arg("grid_index"))
        .def("expanded", &UniqueHistory::expanded);

    py::class_<PosteriorModel>(m, "PosteriorModel")
        .def_static("fit", &PosteriorModel::fit, py::arg("kernel"), py::arg("history"),
                    py::arg("lambda_"))
        .def("mean", &PosteriorModel::mean, py::arg("x"))
        .def("variance", &PosteriorModel::variance, py::arg("x"))
        .def("log_det_weighted", &PosteriorModel::log_det_weighted)
        .def_property_readonly("size", &PosteriorModel::size)
        .def_property_readonly("lambda_", &PosteriorModel::lambda)
        .def_property_readonly("chol_lower", &PosteriorModel::chol_lower);
    m.def("naive_posterior", &naive_posterior, py::arg("full_points"),
          py::arg("full_feedback"), py::arg("lambda_"), py::arg("x"), py::arg("kernel"));

    py::class_<BetaSchedule> schedule(m, "BetaSchedule");
    schedule.def_static("frequentist_ucb", &BetaSchedule::frequentist_ucb,
                        py::arg("norm_bound"), py::arg("delta"), py::arg("scale") = 1.0)
        .def_static("bayesian_ucb", &BetaSchedule::bayesian_ucb, py::arg("card"),
                    py::arg("delta"))
        .def_static("frequentist_ei", &BetaSchedule::frequentist_ei, py::arg("delta"),
                    py::arg("scale") = 1.0);
    m.def("beta_value", &beta_value, py::arg("schedule"), py::arg("logdet"), py::arg("t"));
    m.def("ucb_score", &ucb_score, py::arg("mean"), py::arg("std"), py::arg("beta"));
    m.def("ei_score", &ei_score, py::arg("mean"), py::arg("std"), py::arg("beta"),
          py::arg("incumbent_mean"));
    m.def("normal_cdf", &normal_cdf);
    m.def("normal_pdf", &normal_pdf);

    py::class_<CandidateGrid>(m, "CandidateGrid")
        .def_property_readonly("size", &CandidateGrid::size)
        .def_property_readonly("dim", &CandidateGrid::dim)
        .def_property_readonly("coordinates", &CandidateGrid::coordinates)
        .def("point", &CandidateGrid::point, py::arg("index"))
        .def("candidate", &CandidateGrid::candidate, py::arg("index"))
        .def("multi_index", &CandidateGrid::multi_index, py::arg("flat"))
        .def("flat_index", &CandidateGrid::flat_index, py::arg("multi"));
    m.def("build_grid", &build_grid, py::arg("dim"), py::arg("points_per_dim"),
          py::arg("lower"), py::arg("upper"), py::arg("max_points") = 1000000);

    py::class_<Objective>(m, "Objective")
        .def(py::init([](const std::string& family, double noise_std) {
                 return Objective{objective_from_name(family), noise_std};
             }),
             py::arg("family"), py::arg("noise_std") = 0.0)
        .def_property_readonly("family",
                               [](const Objective& o) { return objective_name(o.family); })
        .def_readonly("noise_std", &Objective::noise_std);
    m.def("raw_value", &raw_value, py::arg("objective"), py::arg("x"));
    m.def("true_optimum", &true_optimum, py::arg("objective"), py::arg("grid"));
    m.def("default_noise_std",
          [](const std::string& family, const CandidateGrid& grid) {
              return default_noise_std(objective_from_name(family), grid);
          },
          py::arg("family"), py::arg("grid"));

    py::class_<Environment>(m, "Environment")
        .def_property_readonly("grid", [](const Environment& e) { return e.grid; })
        .def_property_readonly("objective", [](const Environment& e) { return e.objective; })
        .def_property_readonly("scaled_noise_std", &Environment::scaled_noise_std);
    m.def("make_environment",
          [](const std::string& family, const CandidateGrid& grid, double noise_std,
             bool scale_rewards) {
              return make_environment(objective_from_name(family), grid, noise_std,
                                      scale_rewards);
          },
          py::arg("family"), py::arg("grid"), py::arg("noise_std"),
          py::arg("scale_rewards") = true);

    py::class_<EpochTrace>(m, "EpochTrace")
        .def_readonly("epoch_index", &EpochTrace::epoch_index)
        .def_readonly("candidate_index", &EpochTrace::candidate_index)
        .def_readonly("batch_length", &EpochTrace::batch_length)
        .def_readonly("start_step", &EpochTrace::start_step)
        .def_readonly("variance_at_selection", &EpochTrace::variance_at_selection)
        .def_readonly("beta_used", &EpochTrace::beta_used)
        .def_readonly("logdet_at_fit", &EpochTrace::logdet_at_fit)
        .def_readonly("clamped", &EpochTrace::clamped);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("chosen_index", &RunResult::chosen_index)
        .def_readonly("reward", &RunResult::reward)
        .def_readonly("epochs", &RunResult::epochs)
        .def_readonly("unique_count", &RunResult::unique_count)
        .def_readonly("segment_count", &RunResult::segment_count)
        .def_readonly("elapsed_seconds", &RunResult::elapsed_seconds)
        .def_readonly("final_history", &RunResult::final_history)
        .def_property_readonly("total_steps", &RunResult::total_steps);

    m.def("batch_length", &batch_length, py::arg("variance"), py::arg("C"),
          py::arg("remaining_budget"));
    m.def("run_mini", &run_mini, py::arg("env"), py::arg("kernel"), py::arg("schedule"),
          py::arg("lambda_"), py::arg("C"), py::arg("T"), py::arg("seed"),
          py::call_guard<py::gil_scoped_release>());
    m.def("run_gp_ucb", &run_gp_ucb, py::arg("env"), py::arg("kernel"), py::arg("schedule"),
          py::arg("lambda_"), py::arg("T"), py::arg("seed"),
          py::call_guard<py::gil_scoped_release>());
    m.def("run_epsilon_greedy",
          [](const Environment& env, double a, double b, long T, std::uint64_t seed) {
              return run_epsilon_greedy(env, EpsilonSchedule{a, b}, T, seed);
          },
          py::arg("env"), py::arg("a"), py::arg("b"), py::arg("T"), py::arg("seed"),
          py::call_guard<py::gil_scoped_release>());
    m.def("run_uniform", &run_uniform, py::arg("env"), py::arg("T"), py::arg("seed"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<RegretTrace>(m, "RegretTrace")
        .def_readonly("instantaneous", &RegretTrace::instantaneous)
        .def_readonly("cumulative", &RegretTrace::cumulative)
        .def_readonly("average", &RegretTrace::average);
    m.def("compute_regret", &compute_regret, py::arg("result"), py::arg("objective"),
          py::arg("grid"));
    m.def("info_gain", &info_gain, py::arg("kernel"), py::arg("history"), py::arg("xi"));
    m.def("oracle_lambda", &oracle_lambda, py::arg("objective"), py::arg("grid"),
          py::arg("xi"));

    py::class_<SwitchBoundCheck>(m, "SwitchBoundCheck")
        .def_readonly("switches", &SwitchBoundCheck::switches)
        .def_readonly("gamma", &SwitchBoundCheck::gamma)
        .def_readonly("bound", &SwitchBoundCheck::bound)
        .def_readonly("ok", &SwitchBoundCheck::ok);
    m.def("check_switch_bound", &check_switch_bound, py::arg("result"), py::arg("kernel"),
          py::arg("C"), py::arg("lambda_"), py::arg("xi"));

    m.def("run_experiment_config",
          [](const std::string& config_json, int workers) {
              const ExperimentConfig config = parse_config_json(config_json);
              const Manifest manifest = run_experiment(config, workers);
              py::dict out;
              out["report"] = manifest.report_path.string();
              out["manifest"] = manifest.manifest_path.string();
              out["best_combination"] = manifest.best_combination;
              return out;
          },
          py::arg("config_json"), py::arg("workers") = 1);
    m.def("default_config_json", &default_config_json);
}
