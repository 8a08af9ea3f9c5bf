#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "latentrd/bounds.hpp"
#include "latentrd/errors.hpp"
#include "latentrd/oracles.hpp"
#include "latentrd/report_io.hpp"
#include "latentrd/rgg.hpp"
#include "latentrd/sampling.hpp"
#include "latentrd/specfun.hpp"
#include "latentrd/verify.hpp"

namespace py = pybind11;
using namespace latentrd;

namespace {

py::dict report_dict(const bounds::BoundReport& r) {
  py::dict terms, aux, validity, inputs;
  for (const auto& [k, v] : r.inputs) inputs[py::str(k)] = v;
  for (const auto& t : r.terms) terms[py::str(t.label)] = t.value_nats;
  for (const auto& t : r.aux) aux[py::str(t.label)] = t.value_nats;
  for (const auto& v : r.validity) validity[py::str(v.name)] = v.pass;
  py::dict d;
  d["bound"] = r.bound_name;
  d["regime"] = std::string(bounds::to_string(r.regime));
  d["inputs"] = inputs;
  d["value_nats"] = r.value_nats;
  d["usable"] = r.usable();
  d["terms"] = terms;
  d["aux"] = aux;
  d["validity"] = validity;
  return d;
}

py::dict point_dict(const oracles::RDCurvePoint& p) {
  py::dict d;
  d["slope"] = p.slope;
  d["rate"] = p.rate;
  d["rate_lower_bound"] = p.rate_lower_bound;
  d["distortion"] = p.distortion;
  d["iterations"] = p.iterations;
  d["converged"] = p.converged;
  d["duality_gap_bound"] = p.duality_gap_bound;
  return d;
}

bounds::BoundConstants constants(double c_star, double C0, double c1, double K, double c) {
  bounds::BoundConstants k{c_star, C0, c1, K, c};
  k.validate();
  return k;
}

#define LATENTRD_CONSTANT_ARGS                                                                          \
  py::arg("c_star") = 0.01, py::arg("C0") = 16.0, py::arg("c1") = 0.5, py::arg("K") = 1.5, \
      py::arg("c") = 0.125

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rate-distortion bounds and oracles for Gram matrices of latent vectors";
  m.attr("__version__") = LATENTRD_VERSION;

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<NotPsdError>(m, "NotPsdError", PyExc_ValueError);
  py::register_exception<DegenerateInputError>(m, "DegenerateInputError", PyExc_ArithmeticError);
  py::register_exception<LookupError>(m, "LookupError", PyExc_KeyError);

  m.def("log_gamma", &specfun::log_gamma, py::arg("x"));
  m.def("digamma", &specfun::digamma, py::arg("x"));
  m.def("binary_entropy", &specfun::binary_entropy, py::arg("p"));
  m.def("multivariate_log_gamma", &specfun::multivariate_log_gamma, py::arg("n"), py::arg("a"));
  m.def("multivariate_digamma", &specfun::multivariate_digamma, py::arg("n"), py::arg("a"));

  m.def("gram_loss", py::overload_cast<const Eigen::MatrixXd&, const Eigen::MatrixXd&, double>(&gram_loss),
        py::arg("x"), py::arg("y"), py::arg("d"));
  m.def(
      "procrustes_loss",
      [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
        auto r = procrustes_loss(a, b);
        return py::make_tuple(r.loss, r.rotation);
      },
      py::arg("a"), py::arg("b"), "Returns (loss, rotation).");
  m.def(
      "psd_sqrt", [](const Eigen::MatrixXd& x) { return psd_sqrt(x); }, py::arg("m"));
  m.def("nuclear_norm", &nuclear_norm, py::arg("m"));

  m.def(
      "sample_latents",
      [](int n, int d, const std::string& prior, std::uint64_t seed) {
        return sample_latents({n, d, parse_prior(prior), seed}).entries();
      },
      py::arg("n"), py::arg("d"), py::arg("prior") = "gaussian", py::arg("seed") = 0);

  m.def(
      "gaussian_matrix_rd", [](int n, int d, double D) { return bounds::gaussian_matrix_rd(n, d, D).value_nats; },
      py::arg("n"), py::arg("d"), py::arg("D"));
  m.def("wishart_differential_entropy", &bounds::wishart_differential_entropy, py::arg("n"), py::arg("d"));
  m.def("entropy_count_graph", &bounds::entropy_count_graph, py::arg("n"), py::arg("p"));
  m.def("entropy_count_completion", &bounds::entropy_count_completion, py::arg("n"), py::arg("p"));
  m.def(
      "impossibility_threshold",
      [](int n, double p, double c, const std::string& model) {
        if (model != "graph" && model != "completion") throw DomainError("model must be 'graph' or 'completion'");
        return bounds::impossibility_threshold(
            n, p, c, model == "graph" ? bounds::ObservationModel::Graph : bounds::ObservationModel::Completion);
      },
      py::arg("n"), py::arg("p"), py::arg("c") = 0.125, py::arg("model") = "graph");
  m.def(
      "applicable_bounds",
      [](int n, int d, double D, bool spherical, double p, double c_star, double C0, double c1, double K, double c) {
        py::list out;
        for (const auto& r : bounds::applicable_bounds(n, d, D, spherical, p, constants(c_star, C0, c1, K, c)))
          out.append(report_dict(r));
        return out;
      },
      py::arg("n"), py::arg("d"), py::arg("D"), py::arg("spherical") = false, py::arg("p") = -1.0,
      LATENTRD_CONSTANT_ARGS);
  m.def(
      "tightest_lower_bound",
      [](int n, int d, double D, bool spherical, double c_star, double C0, double c1, double K, double c) {
        return bounds::tightest_lower_bound(
            bounds::applicable_bounds(n, d, D, spherical, -1.0, constants(c_star, C0, c1, K, c)));
      },
      py::arg("n"), py::arg("d"), py::arg("D"), py::arg("spherical") = false, LATENTRD_CONSTANT_ARGS);

  m.def(
      "blahut_arimoto_binary",
      [](double p, double D) {
        return point_dict(oracles::blahut_arimoto_at_distortion(oracles::binary_hamming_problem(p, D)));
      },
      py::arg("p"), py::arg("D"));
  m.def(
      "blahut_arimoto_gaussian",
      [](double D, int points, double sigma, double clip) {
        return point_dict(
            oracles::blahut_arimoto_at_distortion(oracles::discretized_gaussian_problem(points, sigma, clip, D)));
      },
      py::arg("D"), py::arg("points") = 401, py::arg("sigma") = 1.0, py::arg("clip") = 5.0);
  m.def(
      "mc_wishart_entropy",
      [](int n, int d, long samples, std::uint64_t seed, unsigned threads) {
        const auto e = oracles::mc_differential_entropy_wishart(n, d, samples, seed, threads);
        return py::make_tuple(e.estimate, e.std_error);
      },
      py::arg("n"), py::arg("d"), py::arg("samples"), py::arg("seed") = 0, py::arg("threads") = 0,
      "Returns (estimate, std_error) in nats.");

  m.def(
      "verify_suite",
      [](const std::string& name, long trials, std::uint64_t seed) {
        const auto r = verify::verify_inequality_suite(name, trials, seed);
        py::dict checks, stats;
        for (const auto& c : r.checks) checks[py::str(c.name)] = py::make_tuple(c.violations, c.worst_slack);
        for (const auto& [k, v] : r.stats) stats[py::str(k)] = v;
        py::dict d;
        d["suite"] = r.suite;
        d["passed"] = r.passed();
        d["checks"] = checks;
        d["stats"] = stats;
        return d;
      },
      py::arg("name"), py::arg("trials"), py::arg("seed") = 0);
  m.def("suite_names", &verify::suite_names);

  m.def(
      "calibrate_threshold",
      [](int d, double p, const std::string& prior, long samples, std::uint64_t seed) {
        return rgg::calibrate_threshold(d, p, parse_prior(prior), samples, seed);
      },
      py::arg("d"), py::arg("p"), py::arg("prior") = "gaussian", py::arg("samples") = 1000000,
      py::arg("seed") = 0);
  m.def(
      "phase_sweep",
      [](const std::vector<std::tuple<int, int, double>>& points, int trials, std::uint64_t seed,
         const std::string& prior, long calibration_samples) {
        std::vector<rgg::GridPoint> grid;
        for (const auto& [n, d, p] : points) grid.push_back({n, d, p});
        rgg::SweepOptions opts;
        opts.trials = trials;
        opts.seed = seed;
        opts.prior = parse_prior(prior);
        opts.calibration_samples = calibration_samples;
        py::list out;
        for (const auto& s : rgg::phase_sweep(grid, opts).summary) {
          py::dict d;
          d["n"] = s.point.n;
          d["d"] = s.point.d;
          d["p"] = s.point.p;
          d["abscissa"] = s.abscissa;
          d["tau"] = s.tau;
          d["spectral_mean"] = s.spectral_mean;
          d["spectral_stderr"] = s.spectral_stderr;
          d["trivial_mean"] = s.trivial_mean;
          d["trivial_stderr"] = s.trivial_stderr;
          out.append(d);
        }
        return out;
      },
      py::arg("grid"), py::arg("trials") = 20, py::arg("seed") = 0, py::arg("prior") = "gaussian",
      py::arg("calibration_samples") = 1000000);
}
