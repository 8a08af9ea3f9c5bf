// latentrd command-line driver.
//
//   latentrd bounds        --n 100 --d 1000 --D 1e-4
//   latentrd verify        --suite lemma31 --trials 10000 --seed 7
//   latentrd oracle        --kind ba-binary --p 0.5 --D 0.1
//   latentrd phase-diagram --trials 20 --output runs.csv
//
// Exit codes: 0 success, 1 verification failures, 2 usage or validation,
// 3 I/O, 4 internal error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "latentrd/bounds.hpp"
#include "latentrd/errors.hpp"
#include "latentrd/oracles.hpp"
#include "latentrd/report_io.hpp"
#include "latentrd/rgg.hpp"
#include "latentrd/specfun.hpp"
#include "latentrd/verify.hpp"

namespace {

using namespace latentrd;

enum ExitCode { kOk = 0, kViolations = 1, kUsage = 2, kIo = 3, kInternal = 4 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  int n = 0;
  int d = 0;
  double D = 0.0;
  double p = -1.0;
  bounds::BoundConstants k;
  std::string prior = "gaussian";
  std::uint64_t seed = 0;
  long trials = -1;
  unsigned threads = 0;
  std::string format = "csv";
  std::string output;
  std::string summary;
  std::string grid;
  std::string suite = "all";
  std::string kind;
  double eta = 0.05;
  long samples = 100000;
  double delta = 0.3;
  int points = 401;
  double clip = 5.0;
  bool timing = false;
};

std::string fmt(double v) { return io::format_double(v); }

void usage_check(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

std::vector<std::pair<std::string, std::string>> constant_params(const Options& o) {
  return {{"c_star", fmt(o.k.c_star)}, {"C0", fmt(o.k.C0)}, {"c1", fmt(o.k.c1)},
          {"K", fmt(o.k.K)},           {"c", fmt(o.k.c)}};
}

// Output sink: a file when --output is set, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw IoError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  // Human-readable notes go to stdout only when data goes to a file.
  std::ostream& notes() { return file_ ? std::cout : std::cerr; }
  void close() {
    if (file_) {
      file_->close();
      if (!*file_) throw IoError("write failed");
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void write(Sink& sink, const io::Provenance& prov, const io::Table& table, io::Format format) {
  try {
    io::write_table(sink.stream(), prov, table, format);
  } catch (const std::ios_base::failure& e) {
    throw IoError(e.what());
  }
}

// Grid files are CSV with a header row naming the columns; '#' lines are skipped.
std::vector<std::vector<std::pair<std::string, double>>> read_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open grid file '" + path + "'");
  std::vector<std::string> header;
  std::vector<std::vector<std::pair<std::string, double>>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (header.empty()) {
      header = cells;
      continue;
    }
    usage_check(cells.size() == header.size(), "grid row has wrong width: '" + line + "'");
    std::vector<std::pair<std::string, double>> row;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cells[j], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      usage_check(used == cells[j].size() && used > 0, "grid cell '" + cells[j] + "' is not a number");
      row.emplace_back(header[j], v);
    }
    rows.push_back(std::move(row));
  }
  usage_check(!rows.empty(), "grid file '" + path + "' has no rows");
  return rows;
}

double grid_value(const std::vector<std::pair<std::string, double>>& row, const std::string& key, double fallback,
                  bool required) {
  for (const auto& [k, v] : row)
    if (k == key) return v;
  usage_check(!required, "grid file lacks column '" + key + "'");
  return fallback;
}

int as_int(double v, const char* name) {
  usage_check(v == std::floor(v) && std::abs(v) < 1e9, std::string(name) + " must be an integer");
  return static_cast<int>(v);
}

int cmd_bounds(const Options& o) {
  o.k.validate();
  const bool spherical = parse_prior(o.prior) == Prior::SphereUniform;
  const auto format = io::parse_format(o.format);
  io::Provenance prov{"bounds", {}, o.seed};
  Sink sink(o.output);

  if (!o.grid.empty()) {
    const auto rows = read_grid(o.grid);
    prov.params = {{"grid", o.grid}, {"prior", o.prior}, {"p", fmt(o.p)}};
    for (auto& kv : constant_params(o)) prov.params.push_back(kv);
    io::Table t;
    t.columns = {"n", "d", "D", "p", "tightest_bound", "tightest_value_nats", "applicable"};
    for (const auto& row : rows) {
      const int n = as_int(grid_value(row, "n", 0, true), "n");
      const int d = as_int(grid_value(row, "d", 0, true), "d");
      const double D = grid_value(row, "D", 0, true);
      const double p = grid_value(row, "p", o.p, false);
      const auto reports = bounds::applicable_bounds(n, d, D, spherical, p, o.k);
      const double best = bounds::tightest_lower_bound(reports);
      std::string best_name = "none", names;
      for (const auto& r : reports) {
        if (r.regime != bounds::Regime::EntropyCount && r.usable() && r.usable_value() == best && best > 0.0 &&
            best_name == "none")
          best_name = r.bound_name;
        names += (names.empty() ? "" : ";") + r.bound_name;
      }
      t.add_row({static_cast<long long>(n), static_cast<long long>(d), D, p, best_name, best, names});
    }
    write(sink, prov, t, format);
    sink.close();
    sink.notes() << "bounds: " << rows.size() << " grid rows evaluated\n";
    return kOk;
  }

  usage_check(o.n > 0 && o.d > 0 && o.D > 0.0, "bounds needs --n, --d and --D (or --grid)");
  prov.params = {{"n", std::to_string(o.n)}, {"d", std::to_string(o.d)}, {"D", fmt(o.D)},
                 {"p", fmt(o.p)},            {"prior", o.prior}};
  for (auto& kv : constant_params(o)) prov.params.push_back(kv);
  const auto reports = bounds::applicable_bounds(o.n, o.d, o.D, spherical, o.p, o.k);
  write(sink, prov, io::bound_reports_table(reports), format);
  sink.close();
  const double best = bounds::tightest_lower_bound(reports);
  std::string best_name = "none";
  for (const auto& r : reports)
    if (r.regime != bounds::Regime::EntropyCount && r.usable() && best > 0.0 && r.usable_value() == best) {
      best_name = r.bound_name;
      break;
    }
  sink.notes() << "tightest lower bound: " << best_name << " = " << fmt(best) << " nats\n";
  return kOk;
}

int cmd_verify(const Options& o) {
  const long trials = o.trials < 0 ? 10000 : o.trials;
  usage_check(trials >= 1, "--trials must be >= 1");
  const auto format = io::parse_format(o.format);
  verify::SuiteOptions so;
  so.delta = o.delta;
  if (o.d > 0) so.d = o.d;
  so.threads = o.threads;
  std::vector<verify::SuiteReport> reports;
  if (o.suite == "all") {
    reports = verify::verify_all(trials, o.seed, so);
  } else {
    try {
      reports.push_back(verify::verify_inequality_suite(o.suite, trials, o.seed, so));
    } catch (const LookupError& e) {
      throw DomainError(e.what());
    }
  }
  io::Provenance prov{"verify",
                      {{"suite", o.suite},
                       {"trials", std::to_string(trials)},
                       {"delta", fmt(so.delta)},
                       {"d", std::to_string(so.d)}},
                      o.seed};
  Sink sink(o.output);
  write(sink, prov, io::suite_table(reports), format);
  sink.close();
  long violations = 0;
  for (const auto& r : reports) {
    violations += r.violations();
    for (const auto& c : r.checks)
      if (!c.passed())
        sink.notes() << r.suite << "/" << c.name << ": " << c.violations << " violations, worst slack "
                     << fmt(c.worst_slack) << "\n";
  }
  sink.notes() << "verify: " << reports.size() << " suite(s), " << violations << " violations\n";
  return violations == 0 ? kOk : kViolations;
}

int cmd_oracle(const Options& o) {
  const auto format = io::parse_format(o.format);
  io::Provenance prov{"oracle", {{"kind", o.kind}}, o.seed};
  io::Table table;
  if (o.kind == "ba-binary" || o.kind == "ba-gaussian") {
    usage_check(o.D > 0.0, "--D must be > 0");
    oracles::DiscreteRDProblem problem;
    double closed_form = 0.0;
    if (o.kind == "ba-binary") {
      const double p = o.p < 0.0 ? 0.5 : o.p;
      problem = oracles::binary_hamming_problem(p, o.D);
      closed_form = o.D >= std::min(p, 1.0 - p) ? 0.0 : specfun::binary_entropy(p) - specfun::binary_entropy(o.D);
      prov.params.emplace_back("p", fmt(p));
    } else {
      problem = oracles::discretized_gaussian_problem(o.points, 1.0, o.clip, o.D);
      closed_form = std::max(0.0, 0.5 * std::log(1.0 / o.D));
      prov.params.emplace_back("points", std::to_string(o.points));
      prov.params.emplace_back("clip", fmt(o.clip));
      prov.params.emplace_back("sigma", "1");
    }
    prov.params.emplace_back("D", fmt(o.D));
    const auto point = oracles::blahut_arimoto_at_distortion(problem);
    table = io::rd_curve_table({point});
    table.columns.push_back("closed_form_nats");
    table.rows[0].push_back(closed_form);
  } else if (o.kind == "quantize") {
    usage_check(o.n > 0 && o.d > 0, "quantize needs --n and --d");
    usage_check(o.eta > 0.0, "--eta must be > 0");
    const int trials = static_cast<int>(o.trials < 0 ? 200 : o.trials);
    usage_check(trials >= 1, "--trials must be >= 1");
    const LatentConfig cfg{o.n, o.d, parse_prior(o.prior), o.seed};
    const auto q = oracles::quantization_upper_bound(cfg, o.eta, trials, o.threads);
    const auto reports = bounds::applicable_bounds(o.n, o.d, q.point.distortion,
                                                   cfg.prior == Prior::SphereUniform, -1.0, o.k);
    prov.params = {{"kind", o.kind},          {"n", std::to_string(o.n)},     {"d", std::to_string(o.d)},
                   {"eta", fmt(o.eta)},       {"trials", std::to_string(trials)}, {"prior", o.prior}};
    for (auto& kv : constant_params(o)) prov.params.push_back(kv);
    table.columns = {"rate_nats", "distortion", "distortion_stderr", "levels", "grid_step", "clip",
                     "trials", "tightest_lower_bound_nats"};
    table.add_row({q.point.rate, q.point.distortion, q.distortion_stderr, static_cast<long long>(q.levels),
                   q.grid_step, q.clip, static_cast<long long>(q.trials), bounds::tightest_lower_bound(reports)});
  } else if (o.kind == "wishart-entropy") {
    usage_check(o.n > 0 && o.d > 0, "wishart-entropy needs --n and --d");
    const auto e = oracles::mc_differential_entropy_wishart(o.n, o.d, o.samples, o.seed, o.threads);
    prov.params = {{"kind", o.kind},
                   {"n", std::to_string(o.n)},
                   {"d", std::to_string(o.d)},
                   {"samples", std::to_string(o.samples)}};
    table.columns = {"estimate_nats", "std_error", "samples", "rejected", "closed_form_nats"};
    table.add_row({e.estimate, e.std_error, static_cast<long long>(e.samples), static_cast<long long>(e.rejected),
                   bounds::wishart_differential_entropy(o.n, o.d)});
  } else {
    throw DomainError("unknown oracle kind '" + o.kind +
                      "' (expected ba-binary, ba-gaussian, quantize, wishart-entropy)");
  }
  Sink sink(o.output);
  write(sink, prov, table, format);
  sink.close();
  return kOk;
}

int cmd_phase_diagram(const Options& o) {
  const auto format = io::parse_format(o.format);
  rgg::SweepOptions so;
  so.trials = static_cast<int>(o.trials < 0 ? 20 : o.trials);
  usage_check(o.trials != 0 && so.trials >= 1, "--trials must be >= 1");
  so.seed = o.seed;
  so.prior = parse_prior(o.prior);
  so.threads = o.threads;
  so.timing = o.timing;
  if (o.samples != Options{}.samples) so.calibration_samples = o.samples;

  std::vector<rgg::GridPoint> grid;
  if (o.grid.empty()) {
    grid = rgg::default_grid();
  } else {
    for (const auto& row : read_grid(o.grid))
      grid.push_back({as_int(grid_value(row, "n", 0, true), "n"), as_int(grid_value(row, "d", 0, true), "d"),
                      grid_value(row, "p", 0, true)});
  }
  const auto result = rgg::phase_sweep(grid, so);

  io::Provenance prov{"phase-diagram",
                      {{"grid", o.grid.empty() ? "default" : o.grid},
                       {"trials", std::to_string(so.trials)},
                       {"prior", o.prior},
                       {"calibration_samples", std::to_string(so.calibration_samples)},
                       {"calibration_runs", std::to_string(so.calibration_runs)},
                       {"timing", so.timing ? "true" : "false"}},
                      o.seed};
  io::Table records;
  records.columns = {"n", "d", "p", "tau", "seed", "estimator", "loss_L", "runtime_s"};
  for (const auto& r : result.records)
    records.add_row({static_cast<long long>(r.n), static_cast<long long>(r.d), r.p, r.tau,
                     std::to_string(r.seed), r.estimator, r.loss, r.runtime_s});
  io::Table summary;
  summary.columns = {"abscissa", "n", "d", "p", "tau", "rank", "trials", "mean_density", "spectral_mean_loss",
                     "spectral_stderr", "trivial_mean_loss", "trivial_stderr"};
  for (const auto& s : result.summary)
    summary.add_row({s.abscissa, static_cast<long long>(s.point.n), static_cast<long long>(s.point.d), s.point.p,
                     s.tau, static_cast<long long>(s.rank), static_cast<long long>(s.trials), s.mean_density,
                     s.spectral_mean, s.spectral_stderr, s.trivial_mean, s.trivial_stderr});

  Sink sink(o.output);
  write(sink, prov, records, format);
  sink.close();
  std::string summary_path = o.summary;
  if (summary_path.empty() && !o.output.empty()) summary_path = o.output + ".summary.json";
  Sink summary_sink(summary_path);
  std::ostream& dest = summary_path.empty() ? std::cerr : summary_sink.stream();
  try {
    io::write_table(dest, prov, summary, io::Format::Json);
  } catch (const std::ios_base::failure& e) {
    throw IoError(e.what());
  }
  summary_sink.close();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate-distortion bounds, oracles and graph-recovery experiments for Gram matrices"};
  app.set_version_flag("--version", std::string(io::build_id()));
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Flat key=value file; command-line flags take precedence");

  Options o;
  app.add_option("--n", o.n, "Number of latent vectors")->check(CLI::PositiveNumber);
  app.add_option("--d", o.d, "Latent dimension")->check(CLI::PositiveNumber);
  app.add_option("--D", o.D, "Target distortion");
  app.add_option("--p", o.p, "Edge density or Bernoulli parameter");
  app.add_option("--c-star", o.k.c_star, "Small-d regime constant")->capture_default_str();
  app.add_option("--C0", o.k.C0, "Covering constant")->capture_default_str();
  app.add_option("--c1", o.k.c1, "Spectral-norm constant")->capture_default_str();
  app.add_option("--K", o.k.K, "Large-d quadratic slack")->capture_default_str();
  app.add_option("--c", o.k.c, "Leading constant of the impossibility threshold")->capture_default_str();
  app.add_option("--prior", o.prior, "gaussian or sphere")->capture_default_str();
  app.add_option("--seed", o.seed, "Random seed")->capture_default_str();
  app.add_option("--trials", o.trials, "Monte Carlo trials");
  app.add_option("--threads", o.threads, "Worker threads (0: hardware)")->capture_default_str();
  app.add_option("--format", o.format, "csv or json")->capture_default_str();
  app.add_option("--output", o.output, "Output path (default stdout)");
  app.add_option("--summary", o.summary, "phase-diagram summary path");
  app.add_option("--grid", o.grid, "Grid CSV with a header row");
  app.add_option("--suite", o.suite, "Verification suite or 'all'")->capture_default_str();
  app.add_option("--kind", o.kind, "Oracle: ba-binary, ba-gaussian, quantize, wishart-entropy");
  app.add_option("--eta", o.eta, "Quantizer grid step")->capture_default_str();
  app.add_option("--samples", o.samples, "Monte Carlo samples")->capture_default_str();
  app.add_option("--delta", o.delta, "Norm perturbation for moments_spherical")->capture_default_str();
  app.add_option("--points", o.points, "Grid points for ba-gaussian")->capture_default_str();
  app.add_option("--clip", o.clip, "Clip range in sigmas for ba-gaussian")->capture_default_str();
  app.add_flag("--timing", o.timing, "Record wall-clock runtimes (output no longer byte-stable)");

  auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate every applicable lower bound");
  auto* verify_cmd = app.add_subcommand("verify", "Run randomized inequality suites");
  auto* oracle_cmd = app.add_subcommand("oracle", "Run a numerical oracle");
  auto* phase_cmd = app.add_subcommand("phase-diagram", "Graph-recovery loss sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (bounds_cmd->parsed()) return cmd_bounds(o);
    if (verify_cmd->parsed()) return cmd_verify(o);
    if (oracle_cmd->parsed()) return cmd_oracle(o);
    if (phase_cmd->parsed()) return cmd_phase_diagram(o);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
