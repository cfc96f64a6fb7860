// Python bindings for the simulator core: problem construction and
// generation, local updates, heterogeneity metrics, training loops, and the
// closed forms they are checked against. Orchestration (recipes, plots)
// stays with the command-line tool.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "fedsim/algorithms.hpp"
#include "fedsim/errors.hpp"
#include "fedsim/localupdate.hpp"
#include "fedsim/metrics.hpp"
#include "fedsim/objective.hpp"
#include "fedsim/parallel.hpp"
#include "fedsim/problem_io.hpp"
#include "fedsim/synthgen.hpp"
#include "fedsim/theory.hpp"

namespace py = pybind11;

using namespace fedsim;

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "federated-averaging simulator: synthetic problems, local-update "
      "runs, heterogeneity metrics, and convergence-bound checks";
  m.attr("__version__") = "0.1.0";

  // translators run newest-first, so the subclasses must come after the base
  auto numerical =
      py::register_exception<NumericalError>(m, "NumericalError");
  py::register_exception<SingularMatrixError>(m, "SingularMatrixError",
                                              numerical.ptr());
  py::register_exception<DivergenceError>(m, "DivergenceError",
                                          numerical.ptr());

  m.def("set_num_threads", &set_num_threads, py::arg("n"),
        "Worker threads used by parallel loops (results are identical)");
  m.def("num_threads", &num_threads);

  py::enum_<UpdateMode>(m, "UpdateMode")
      .value("DETERMINISTIC", UpdateMode::kDeterministic)
      .value("STOCHASTIC", UpdateMode::kStochastic);

  py::enum_<NoiseModel::Kind>(m, "NoiseKind")
      .value("NONE", NoiseModel::Kind::kNone)
      .value("ADDITIVE_GAUSSIAN", NoiseModel::Kind::kAdditiveGaussian)
      .value("MINIBATCH", NoiseModel::Kind::kMinibatch);

  py::class_<NoiseModel>(m, "NoiseModel")
      .def(py::init<>())
      .def_readwrite("kind", &NoiseModel::kind)
      .def_readwrite("sigma_sq", &NoiseModel::sigma_sq)
      .def_readwrite("batch_size", &NoiseModel::batch_size)
      .def_static("none", &NoiseModel::none)
      .def_static("additive_gaussian", &NoiseModel::additive_gaussian,
                  py::arg("sigma_sq"))
      .def_static("minibatch", &NoiseModel::minibatch, py::arg("batch_size"));

  py::class_<ClientObjective>(m, "ClientObjective")
      .def(py::init<Matrix, Vector, Vector, double>(), py::arg("curvature"),
           py::arg("shift"), py::arg("reference_point"), py::arg("weight"))
      .def_property_readonly("dim", &ClientObjective::dim)
      .def_property_readonly("curvature", &ClientObjective::curvature,
                             py::return_value_policy::copy)
      .def_property_readonly("shift", &ClientObjective::shift,
                             py::return_value_policy::copy)
      .def_property_readonly("reference_point",
                             &ClientObjective::reference_point,
                             py::return_value_policy::copy)
      .def_property_readonly("weight", &ClientObjective::weight)
      .def_property_readonly("eigen_min", &ClientObjective::eigen_min)
      .def_property_readonly("eigen_max", &ClientObjective::eigen_max)
      .def_property_readonly("local_minimizer",
                             &ClientObjective::local_minimizer,
                             py::return_value_policy::copy)
      .def("loss", &ClientObjective::loss, py::arg("w"))
      .def("gradient", &ClientObjective::gradient, py::arg("w"))
      .def("attach_samples", &ClientObjective::attach_samples,
           py::arg("inputs"), py::arg("labels"))
      .def_property_readonly("has_samples", &ClientObjective::has_samples)
      .def_property_readonly("sample_inputs", &ClientObjective::sample_inputs,
                             py::return_value_policy::copy)
      .def_property_readonly("sample_labels", &ClientObjective::sample_labels,
                             py::return_value_policy::copy);

  py::class_<FederatedProblem>(m, "FederatedProblem")
      .def(py::init<std::vector<ClientObjective>>(), py::arg("clients"))
      .def_property_readonly("dim", &FederatedProblem::dim)
      .def_property_readonly("num_clients", &FederatedProblem::num_clients)
      .def("client", &FederatedProblem::client, py::arg("c"),
           py::return_value_policy::reference_internal)
      .def_property_readonly("strong_convexity",
                             &FederatedProblem::strong_convexity)
      .def_property_readonly("smoothness", &FederatedProblem::smoothness)
      .def_property_readonly("condition_number",
                             &FederatedProblem::condition_number)
      .def_property_readonly("average_curvature",
                             &FederatedProblem::average_curvature,
                             py::return_value_policy::copy)
      .def_property_readonly("optimum", &FederatedProblem::optimum,
                             py::return_value_policy::copy)
      .def("local_loss", &FederatedProblem::local_loss, py::arg("c"),
           py::arg("w"))
      .def("local_gradient", &FederatedProblem::local_gradient, py::arg("c"),
           py::arg("w"))
      .def("global_loss", &FederatedProblem::global_loss, py::arg("w"))
      .def("global_gradient", &FederatedProblem::global_gradient, py::arg("w"))
      .def("global_loss_gap", &FederatedProblem::global_loss_gap,
           py::arg("w"));

  m.def("smoothness_constants", &smoothness_constants, py::arg("clients"),
        "(min client eigenvalue, max client eigenvalue): the global mu, L");
  m.def("solve_global_minimizer", &solve_global_minimizer,
        py::arg("clients"));

  py::class_<SynthConfig>(m, "SynthConfig")
      .def(py::init<>())
      .def_readwrite("dim", &SynthConfig::dim)
      .def_readwrite("num_clients", &SynthConfig::num_clients)
      .def_readwrite("samples_per_client", &SynthConfig::samples_per_client)
      .def_readwrite("nu_max", &SynthConfig::nu_max)
      .def_readwrite("eps_var", &SynthConfig::eps_var)
      .def_readwrite("seed", &SynthConfig::seed)
      .def_readwrite("attach_samples", &SynthConfig::attach_samples)
      .def("validate", &SynthConfig::validate);

  m.def("generate", &generate, py::arg("config"),
        "Synthetic federated least-squares problem; bit-reproducible in the "
        "seed regardless of thread count");

  m.def("save_problem", &save_problem, py::arg("problem"), py::arg("path"));
  m.def("load_problem", &load_problem, py::arg("path"));

  py::class_<LocalTrajectory>(m, "LocalTrajectory")
      .def_readonly("start", &LocalTrajectory::start)
      .def_readonly("iterates", &LocalTrajectory::iterates)
      .def_readonly("eta", &LocalTrajectory::eta)
      .def_readonly("local_steps", &LocalTrajectory::local_steps)
      .def_readonly("mode", &LocalTrajectory::mode)
      .def_property_readonly("endpoint", &LocalTrajectory::endpoint,
                             py::return_value_policy::copy);

  m.def("run_local_gd", &run_local_gd, py::arg("problem"), py::arg("c"),
        py::arg("start"), py::arg("eta"), py::arg("local_steps"));
  m.def("local_gd_endpoint", &local_gd_endpoint, py::arg("problem"),
        py::arg("c"), py::arg("start"), py::arg("eta"),
        py::arg("local_steps"));
  m.def("pseudo_gradient",
        py::overload_cast<const Vector&, const Vector&, double, int>(
            &pseudo_gradient),
        py::arg("start"), py::arg("endpoint"), py::arg("eta"),
        py::arg("local_steps"),
        "(start - endpoint) / (eta * local_steps)");
  m.def("pseudo_gradient",
        py::overload_cast<const LocalTrajectory&>(&pseudo_gradient),
        py::arg("trajectory"));
  m.def("gradient_bias", &gradient_bias, py::arg("problem"), py::arg("c"),
        py::arg("start"), py::arg("eta"), py::arg("local_steps"),
        "exact gradient at the start minus the deterministic "
        "pseudo-gradient");

  py::class_<IterateBiasEstimate>(m, "IterateBiasEstimate")
      .def_readonly("value", &IterateBiasEstimate::value)
      .def_readonly("standard_error", &IterateBiasEstimate::standard_error);

  m.def("iterate_bias", &iterate_bias, py::arg("problem"), py::arg("c"),
        py::arg("start"), py::arg("eta"), py::arg("local_steps"),
        py::arg("noise"), py::arg("replicates"), py::arg("seed"),
        "Monte Carlo gap between the deterministic endpoint and the mean "
        "stochastic endpoint, in gradient units");

  py::class_<HeterogeneityReport>(m, "HeterogeneityReport")
      .def_readonly("H_values", &HeterogeneityReport::H_values)
      .def_readonly("eta", &HeterogeneityReport::eta)
      .def_readonly("grad_dissimilarity",
                    &HeterogeneityReport::grad_dissimilarity)
      .def_readonly("squared_mean_bias",
                    &HeterogeneityReport::squared_mean_bias)
      .def_readonly("mean_square_bias", &HeterogeneityReport::mean_square_bias)
      .def_readonly("drift_at_optimum", &HeterogeneityReport::drift_at_optimum)
      .def_readonly("quadratic_bound", &HeterogeneityReport::quadratic_bound)
      .def_readonly("eval_point", &HeterogeneityReport::eval_point);

  m.def("gradient_dissimilarity", &gradient_dissimilarity, py::arg("problem"),
        py::arg("w"));
  m.def("drift_at_optimum", &drift_at_optimum, py::arg("problem"),
        py::arg("eta"), py::arg("local_steps"));
  m.def("drift_at_optimum_closed_form", &drift_at_optimum_closed_form,
        py::arg("problem"), py::arg("eta"), py::arg("local_steps"));
  m.def("dissimilarity_bound_curve", &dissimilarity_bound_curve, py::arg("L"),
        py::arg("eta"), py::arg("local_steps"), py::arg("zeta_sq"),
        py::arg("grad_norm_sq"), py::arg("beta"), py::arg("gamma"));
  m.def("bias_curves", &bias_curves, py::arg("problem"), py::arg("w"),
        py::arg("eta"), py::arg("H_values"), py::arg("beta") = 0.5,
        py::arg("gamma") = 1.0);

  py::class_<DriftScalingRow>(m, "DriftScalingRow")
      .def_readonly("samples_per_client", &DriftScalingRow::samples_per_client)
      .def_readonly("num_clients", &DriftScalingRow::num_clients)
      .def_readonly("mean_drift", &DriftScalingRow::mean_drift)
      .def_readonly("mean_dissimilarity", &DriftScalingRow::mean_dissimilarity)
      .def_readonly("drift_by_seed", &DriftScalingRow::drift_by_seed)
      .def_readonly("dissimilarity_by_seed",
                    &DriftScalingRow::dissimilarity_by_seed);

  py::class_<DriftScalingTable>(m, "DriftScalingTable")
      .def_readonly("rows", &DriftScalingTable::rows)
      .def_readonly("drift_slope", &DriftScalingTable::drift_slope)
      .def_readonly("dissimilarity_slope",
                    &DriftScalingTable::dissimilarity_slope);

  m.def("drift_scaling_experiment", &drift_scaling_experiment,
        py::arg("grid_n_m"), py::arg("seeds"), py::arg("base"), py::arg("eta"),
        py::arg("local_steps"));

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("alpha", &RunConfig::alpha)
      .def_readwrite("eta", &RunConfig::eta)
      .def_readwrite("local_steps", &RunConfig::local_steps)
      .def_readwrite("rounds", &RunConfig::rounds)
      .def_readwrite("mode", &RunConfig::mode)
      .def_readwrite("sample_size", &RunConfig::sample_size)
      .def_readwrite("noise", &RunConfig::noise)
      .def_readwrite("seed", &RunConfig::seed)
      .def("validate", &RunConfig::validate, py::arg("num_clients"));

  py::class_<RunRecord>(m, "RunRecord")
      .def_readonly("models", &RunRecord::models)
      .def_readonly("dist_sq", &RunRecord::dist_sq)
      .def_readonly("loss_gap", &RunRecord::loss_gap)
      .def_readonly("pseudo_grad_norm", &RunRecord::pseudo_grad_norm)
      .def_property_readonly("rounds", &RunRecord::rounds);

  m.def("fedavg_run", &fedavg_run, py::arg("problem"), py::arg("config"),
        py::arg("w0"));
  m.def("gd_run", &gd_run, py::arg("problem"), py::arg("lr"),
        py::arg("rounds"), py::arg("w0"));
  m.def("minibatch_sgd_run", &minibatch_sgd_run, py::arg("problem"),
        py::arg("lr"), py::arg("rounds"), py::arg("w0"), py::arg("noise"),
        py::arg("draws_per_client"), py::arg("seed"));

  m.def("closed_form_local_gd", &closed_form_local_gd, py::arg("problem"),
        py::arg("eta"), py::arg("local_steps"), py::arg("rounds"),
        py::arg("w0"),
        "Exact iterates of full-participation local GD with server step 1; "
        "the oracle simulated runs are checked against");

  py::class_<EffectiveConstants>(m, "EffectiveConstants")
      .def_readonly("strong_convexity", &EffectiveConstants::strong_convexity)
      .def_readonly("smoothness", &EffectiveConstants::smoothness);

  m.def("pseudo_gradient_constants", &pseudo_gradient_constants,
        py::arg("eta"), py::arg("mu"), py::arg("local_steps"));
  m.def("biased_descent_loss_bound", &biased_descent_loss_bound,
        py::arg("alpha"), py::arg("eta"), py::arg("local_steps"),
        py::arg("mu"), py::arg("rounds"), py::arg("initial_gap"),
        py::arg("bias_sq_history"));

  py::class_<BoundTrace>(m, "BoundTrace")
      .def_readonly("bound", &BoundTrace::bound)
      .def_readonly("contraction", &BoundTrace::contraction)
      .def_readonly("initial_dist_sq", &BoundTrace::initial_dist_sq)
      .def_readonly("variance_term", &BoundTrace::variance_term)
      .def_readonly("iterate_bias_term", &BoundTrace::iterate_bias_term)
      .def_readonly("drift_term", &BoundTrace::drift_term);

  m.def("stochastic_distance_bound", &stochastic_distance_bound,
        py::arg("alpha"), py::arg("eta"), py::arg("local_steps"),
        py::arg("mu"), py::arg("L"), py::arg("rounds"),
        py::arg("initial_dist_sq"), py::arg("var_max"),
        py::arg("delta_sq_max"), py::arg("rho"));
  m.def("pseudo_gradient_variance_bound", &pseudo_gradient_variance_bound,
        py::arg("sigma_sq"), py::arg("num_clients"), py::arg("local_steps"));
  m.def("iterate_bias_sq_bound", &iterate_bias_sq_bound, py::arg("eta"),
        py::arg("L"), py::arg("sigma_sq"), py::arg("local_steps"));
  m.def("fedavg_rate", &fedavg_rate, py::arg("mode"), py::arg("kappa"),
        py::arg("local_steps"), py::arg("rounds"), py::arg("rho"),
        py::arg("sigma_sq") = 0.0, py::arg("num_clients") = 1);
  m.def("fedavg_rate_quadratic", &fedavg_rate_quadratic, py::arg("kappa"),
        py::arg("local_steps"), py::arg("rounds"), py::arg("num_clients"),
        py::arg("sigma_sq"), py::arg("rho"));
  m.def("lr_schedule_log_factor", &lr_schedule_log_factor, py::arg("r0"),
        py::arg("mu"), py::arg("L"), py::arg("sigma_sq"),
        py::arg("num_clients"), py::arg("local_steps"), py::arg("rounds"));
  m.def("rounds_to_accuracy", &rounds_to_accuracy, py::arg("method"),
        py::arg("kappa"), py::arg("local_steps"), py::arg("epsilon"));
}
