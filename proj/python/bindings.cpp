// pybind11 surface over the core: basis construction, sampling, evolution,
// and the ensemble statistics.  States cross the boundary as complex numpy
// vectors (coefficients of e_1..e_N).

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "gibbswave/config.hpp"
#include "gibbswave/dynamics.hpp"
#include "gibbswave/experiments.hpp"
#include "gibbswave/norms.hpp"
#include "gibbswave/sampling.hpp"
#include "gibbswave/statistics.hpp"
#include "gibbswave/version.hpp"

namespace py = pybind11;
using namespace gibbswave;

namespace {

using Coeffs = std::vector<std::complex<double>>;

SpectralState to_state(const Coeffs& c) {
  SpectralState u;
  u.coeffs = c;
  return u;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "spectral sampler and flow for the radial nonlinear wave equation on "
      "the unit ball";
  m.attr("__version__") = kVersion;

  py::class_<RadialQuadrature, std::shared_ptr<RadialQuadrature>>(
      m, "RadialQuadrature")
      .def_readonly("n_max", &RadialQuadrature::n_max)
      .def_readonly("nodes", &RadialQuadrature::nodes)
      .def_readonly("weights", &RadialQuadrature::weights)
      .def_property_readonly("n_quad", &RadialQuadrature::n_quad)
      .def("eigenvalue", &RadialQuadrature::eigenvalue, py::arg("n"));

  m.def("build_basis", &build_basis, py::arg("n_max"), py::arg("n_quad") = 0,
        py::arg("gram_tol") = 1e-8,
        "Gauss-Legendre radial quadrature with tabulated eigenfunctions; "
        "throws if the basis fails its orthonormality check");
  m.def("eigenfunction", &eigenfunction, py::arg("n"), py::arg("r"),
        "e_n(r) = sin(n pi r) / (r sqrt(2 pi))");

  py::class_<GibbsSpec>(m, "GibbsSpec")
      .def(py::init<double, int, std::shared_ptr<const RadialQuadrature>>(),
           py::arg("alpha"), py::arg("n_modes"), py::arg("quad"))
      .def_readonly("alpha", &GibbsSpec::alpha)
      .def_readonly("n_modes", &GibbsSpec::n_modes);

  py::class_<GaussianStream>(m, "GaussianStream")
      .def(py::init([](std::uint64_t seed, std::uint64_t stream_id) {
             return GaussianStream({seed, stream_id});
           }),
           py::arg("seed"), py::arg("stream_id") = 0)
      .def("gaussian", &GaussianStream::next_gaussian)
      .def("uniform", &GaussianStream::next_uniform);

  m.def(
      "sample_gaussian",
      [](const GibbsSpec& spec, GaussianStream& g) {
        return sample_gaussian(spec, g).coeffs;
      },
      py::arg("spec"), py::arg("stream"));
  m.def(
      "sample_gibbs",
      [](const GibbsSpec& spec, GaussianStream& g, std::uint64_t max_attempts) {
        GibbsSample s = sample_gibbs(spec, g, max_attempts);
        return py::make_tuple(s.state.coeffs, s.attempts);
      },
      py::arg("spec"), py::arg("stream"), py::arg("max_attempts") = 1000000,
      "returns (coefficients, attempts)");
  m.def(
      "gibbs_weight",
      [](const Coeffs& c, const GibbsSpec& spec) {
        return gibbs_weight(to_state(c), spec);
      },
      py::arg("coeffs"), py::arg("spec"));
  m.def(
      "partition_estimate",
      [](const GibbsSpec& spec, int n_samples, std::uint64_t seed,
         std::uint64_t stream_id) {
        PartitionEstimate e =
            partition_estimate(spec, n_samples, {seed, stream_id});
        return py::make_tuple(e.mean, e.std_err, e.n_samples);
      },
      py::arg("spec"), py::arg("n_samples"), py::arg("seed"),
      py::arg("stream_id") = 0, "returns (mean, std_err, n_samples)");

  m.def(
      "sobolev_norm",
      [](const Coeffs& c, double s) { return sobolev_norm(to_state(c), s); },
      py::arg("coeffs"), py::arg("s"));
  m.def(
      "free_evolve",
      [](const Coeffs& c, double t) { return free_evolve(to_state(c), t).coeffs; },
      py::arg("coeffs"), py::arg("t"),
      "coefficients of S(t)u: c_n -> exp(-i pi n t) c_n");
  m.def(
      "lp_norm_ball",
      [](const Coeffs& c, const RadialQuadrature& quad, double p) {
        return lp_norm_ball(to_state(c), quad, p);
      },
      py::arg("coeffs"), py::arg("quad"), py::arg("p"));
  m.def(
      "spacetime_lp_norm",
      [](const Coeffs& c, const RadialQuadrature& quad, double p, int t_nodes) {
        return spacetime_lp_norm(to_state(c), quad, p, t_nodes);
      },
      py::arg("coeffs"), py::arg("quad"), py::arg("p"),
      py::arg("t_nodes") = 64);

  m.def("make_sim_params", &make_sim_params, py::arg("alpha"),
        py::arg("n_modes"), py::arg("dt"), py::arg("t_final"),
        py::arg("record_every"), py::arg("quad"));
  py::class_<SimParams>(m, "SimParams")
      .def_readwrite("dt", &SimParams::dt)
      .def_readwrite("t_final", &SimParams::t_final)
      .def_readwrite("record_every", &SimParams::record_every)
      .def_readwrite("nonlinear", &SimParams::nonlinear)
      .def_readonly("alpha", &SimParams::alpha)
      .def_readonly("n_modes", &SimParams::n_modes);

  m.def(
      "hamiltonian",
      [](const Coeffs& c, const GibbsSpec& spec, bool truncated) {
        return hamiltonian(to_state(c), spec, truncated);
      },
      py::arg("coeffs"), py::arg("spec"), py::arg("truncated") = true);
  m.def(
      "flow_step",
      [](const Coeffs& c, const SimParams& p) {
        return flow_step(to_state(c), p).coeffs;
      },
      py::arg("coeffs"), py::arg("params"));
  m.def(
      "evolve",
      [](const Coeffs& c, const SimParams& p) {
        TrajectoryRecord r = evolve(to_state(c), p, {});
        return py::make_tuple(r.final_state.coeffs, r.steps);
      },
      py::arg("coeffs"), py::arg("params"),
      "returns (final coefficients, steps)");
  m.def(
      "picard_duhamel",
      [](const Coeffs& c, const GibbsSpec& spec, double T, double tol,
         int max_iter, bool truncated) {
        return picard_duhamel(to_state(c), spec, T, tol, max_iter, truncated)
            .coeffs;
      },
      py::arg("coeffs"), py::arg("spec"), py::arg("T"), py::arg("tol") = 1e-10,
      py::arg("max_iter") = 200, py::arg("truncated") = true);

  m.def("tail_fit", &tail_fit, py::arg("samples"), py::arg("min_count") = 30,
        py::arg("p_start") = 0.02, py::arg("n_bins") = 16);
  py::class_<TailFit>(m, "TailFit")
      .def_readonly("lambdas", &TailFit::lambdas)
      .def_readonly("log_counts", &TailFit::log_counts)
      .def_readonly("slope", &TailFit::slope)
      .def_readonly("intercept", &TailFit::intercept)
      .def_readonly("r_squared", &TailFit::r_squared)
      .def_readonly("n_samples", &TailFit::n_samples)
      .def_readonly("conclusive", &TailFit::conclusive);

  m.def("ks_two_sample", &ks_two_sample, py::arg("a"), py::arg("b"));
  py::class_<KSResult>(m, "KSResult")
      .def_readonly("statistic", &KSResult::statistic)
      .def_readonly("p_value", &KSResult::p_value)
      .def_readonly("n1", &KSResult::n1)
      .def_readonly("n2", &KSResult::n2);

  m.def(
      "moment_growth",
      [](const Coeffs& c, const std::vector<int>& q_list, int n_samples,
         std::uint64_t seed, std::uint64_t stream_id) {
        GaussianStream g({seed, stream_id});
        return moment_growth(c, q_list, n_samples, g);
      },
      py::arg("coeffs"), py::arg("q_list"), py::arg("n_samples"),
      py::arg("seed"), py::arg("stream_id") = 0,
      "returns [(q, M_q^{1/q}/sqrt(q))]");

  m.def(
      "strichartz_ratio",
      [](int n_trials, int n_modes, double p, std::uint64_t seed,
         std::uint64_t stream_id, int t_nodes) {
        return strichartz_ratio(n_trials, n_modes, p, {seed, stream_id},
                                nullptr, t_nodes);
      },
      py::arg("n_trials"), py::arg("n_modes"), py::arg("p"), py::arg("seed"),
      py::arg("stream_id") = 0, py::arg("t_nodes") = 64);

  py::register_exception<config_error>(m, "ConfigError");
  py::register_exception<numerical_error>(m, "NumericalError");

  py::class_<Config>(m, "Config")
      .def(py::init<>())
      .def_static("parse_file", &Config::parse_file, py::arg("path"))
      .def_static("parse_string", &Config::parse_string, py::arg("text"))
      .def("validate", &Config::validate)
      .def("sigma", &Config::sigma)
      .def("snapshot", &Config::snapshot)
      .def_readwrite("alpha", &Config::alpha)
      .def_readwrite("p", &Config::p)
      .def_readwrite("s", &Config::s)
      .def_readwrite("n_modes", &Config::n_modes)
      .def_readwrite("dt", &Config::dt)
      .def_readwrite("t_final", &Config::t_final)
      .def_readwrite("n_ensemble", &Config::n_ensemble)
      .def_readwrite("n_samples", &Config::n_samples)
      .def_readwrite("measure", &Config::measure);

  m.def(
      "run_command",
      [](const std::string& command, const Config& cfg, std::uint64_t seed,
         const std::string& out_dir, int workers) {
        return run_command(command, cfg, seed, out_dir, workers);
      },
      py::arg("command"), py::arg("config"), py::arg("seed"),
      py::arg("out_dir"), py::arg("workers") = 0,
      "runs one named experiment; returns the CLI exit code");
}
