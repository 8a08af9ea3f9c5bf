#include "latentrd/rgg.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>

#include "latentrd/errors.hpp"
#include "latentrd/parallel.hpp"
#include "latentrd/specfun.hpp"

namespace latentrd::rgg {
namespace {

constexpr int kMaxVertices = 4096;
constexpr long kQuantileBlock = 65536;

// Stream tags keep the derived generators of different sweep stages apart.
constexpr std::uint64_t kTagTau = 0x746175ULL;
constexpr std::uint64_t kTagCalibration = 0x63616cULL;
constexpr std::uint64_t kTagTrial = 0x747269616cULL;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64_mix(seed ^ splitmix64_mix(tag ^ splitmix64_mix(a ^ splitmix64_mix(b))));
}

void require_density(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError(std::string(what) + ": p must lie in (0, 1)");
}

Eigen::MatrixXd correlation(const Eigen::MatrixXd& g) {
  const Eigen::Index n = g.rows();
  Eigen::VectorXd inv(n);
  for (Eigen::Index i = 0; i < n; ++i) inv(i) = g(i, i) > 0.0 ? 1.0 / std::sqrt(g(i, i)) : 0.0;
  Eigen::MatrixXd c = inv.asDiagonal() * g * inv.asDiagonal();
  c.diagonal().setOnes();
  return c;
}

// Weighted Gram matrix sum_k w_k e_k e_k^T of the embedding columns.
Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& e, const std::vector<double>& w) {
  Eigen::MatrixXd scaled = e;
  for (Eigen::Index k = 0; k < e.cols(); ++k) scaled.col(k) *= std::sqrt(w[static_cast<std::size_t>(k)]);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(e.rows(), e.rows());
  g.selfadjointView<Eigen::Lower>().rankUpdate(scaled);
  return g.selfadjointView<Eigen::Lower>();
}

Eigen::MatrixXd apply_calibration(const Eigen::MatrixXd& e, const SpectralCalibration& cal) {
  Eigen::MatrixXd x = weighted_gram(e, cal.weights);
  if (cal.prior == Prior::SphereUniform) {
    x = cal.blend * correlation(x);
    x.diagonal().setOnes();
  } else {
    x.diagonal().array() += cal.shift;
  }
  return x;
}

// Off-diagonal least-squares coefficient of t on f: sum f t / sum f^2 over i != j.
struct OffDiagonalFit {
  double ft = 0.0;
  double ff = 0.0;
  void add(const Eigen::MatrixXd& f, const Eigen::MatrixXd& t) {
    ft += (f.cwiseProduct(t)).sum() - f.diagonal().dot(t.diagonal());
    ff += f.squaredNorm() - f.diagonal().squaredNorm();
  }
  [[nodiscard]] double coefficient() const { return ff > 0.0 ? ft / ff : 0.0; }
};

}  // namespace

Adjacency::Adjacency(int n) : n_(n) {
  if (n < 1 || n > kMaxVertices)
    throw DomainError("Adjacency: n must lie in [1, " + std::to_string(kMaxVertices) + "]");
  words_ = (static_cast<std::size_t>(n) + 63) / 64;
  bits_.assign(words_ * static_cast<std::size_t>(n), 0);
}

void Adjacency::set(int i, int j, bool value) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw DimensionError("Adjacency::set: index out of range");
  if (i == j) throw DomainError("Adjacency::set: self-loops are not allowed");
  auto flip = [&](int r, int c) {
    auto& w = bits_[static_cast<std::size_t>(r) * words_ + (c >> 6)];
    const std::uint64_t mask = std::uint64_t{1} << (c & 63);
    w = value ? (w | mask) : (w & ~mask);
  };
  flip(i, j);
  flip(j, i);
}

long long Adjacency::edge_count() const noexcept {
  long long total = 0;
  for (auto w : bits_) total += std::popcount(w);
  return total / 2;
}

Eigen::MatrixXd Adjacency::dense() const {
  Eigen::MatrixXd m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j) ? 1.0 : 0.0;
  return m;
}

double calibrate_threshold(int d, double p, Prior prior, long samples, std::uint64_t seed,
                           unsigned threads) {
  require_density(p, "calibrate_threshold");
  if (d < 1) throw DomainError("calibrate_threshold: d must be >= 1");
  if (samples < 1) throw DomainError("calibrate_threshold: samples must be >= 1");
  std::vector<double> values(static_cast<std::size_t>(samples));
  const auto blocks = static_cast<std::size_t>((samples + kQuantileBlock - 1) / kQuantileBlock);
  for_each_block(blocks, threads, [&](std::size_t b) {
    Rng rng(seed, b);
    const long begin = static_cast<long>(b) * kQuantileBlock;
    const long end = std::min(samples, begin + kQuantileBlock);
    for (long i = begin; i < end; ++i) values[static_cast<std::size_t>(i)] = sample_pair_inner_product(d, prior, rng);
  });
  const auto k = std::min<std::size_t>(values.size() - 1,
                                       static_cast<std::size_t>(std::floor((1.0 - p) * samples)));
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end());
  return values[k];
}

GraphSample generate_graph(const LatentConfig& cfg, double tau, double target_density) {
  cfg.validate();
  if (cfg.n > kMaxVertices) throw DomainError("generate_graph: n exceeds 4096");
  GraphSample g{Adjacency(cfg.n), sample_latents(cfg), tau, target_density, 0.0};
  const Eigen::MatrixXd& z = g.latents.entries();
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(cfg.n, cfg.n);
  x.selfadjointView<Eigen::Lower>().rankUpdate(z);
  for (int j = 0; j < cfg.n; ++j)
    for (int i = j + 1; i < cfg.n; ++i)
      if (x(i, j) >= tau) g.adjacency.set(i, j);
  const double pairs = 0.5 * cfg.n * (cfg.n - 1.0);
  g.realized_density = pairs > 0 ? static_cast<double>(g.adjacency.edge_count()) / pairs : 0.0;
  return g;
}

Eigen::MatrixXd spectral_embedding(const Adjacency& a, int rank, double p) {
  const int n = a.n();
  if (rank < 1 || rank > n) throw DomainError("spectral_embedding: rank must lie in [1, n]");
  Eigen::MatrixXd m = a.dense();
  const Eigen::VectorXd scale = (m.rowwise().sum().array() + 1.0).rsqrt();
  m.array() -= p;
  m.diagonal().setZero();
  m = scale.asDiagonal() * m * scale.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw DegenerateInputError("spectral_embedding: eigensolver failed");
  // Eigenvalues are ascending; column k of the result is the (k+1)-th largest.
  const Eigen::VectorXd lambda = es.eigenvalues().tail(rank).reverse().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors().rightCols(rank).rowwise().reverse() * lambda.asDiagonal();
}

SpectralCalibration calibrate_spectral(const LatentConfig& cfg, double p, double tau, int rank,
                                       int runs) {
  cfg.validate();
  require_density(p, "calibrate_spectral");
  if (runs < 1) throw DomainError("calibrate_spectral: runs must be >= 1");
  if (rank < 1 || rank > cfg.n) throw DomainError("calibrate_spectral: rank must lie in [1, n]");
  struct Run {
    Eigen::MatrixXd embedding;
    Eigen::MatrixXd x;
  };
  std::vector<Run> sims;
  for (int r = 0; r < runs; ++r) {
    LatentConfig run_cfg = cfg;
    run_cfg.seed = derive_seed(cfg.seed, kTagCalibration, static_cast<std::uint64_t>(r));
    const GraphSample graph = generate_graph(run_cfg, tau, p);
    const Eigen::MatrixXd& z = graph.latents.entries();
    sims.push_back({spectral_embedding(graph.adjacency, rank, p), z * z.transpose()});
  }

  SpectralCalibration cal;
  cal.prior = cfg.prior;
  cal.rank = rank;
  cal.runs = runs;
  cal.weights.assign(static_cast<std::size_t>(rank), 0.0);
  // Eigenvectors are orthonormal, so the per-component fits decouple up to
  // the excluded diagonal.
  for (int k = 0; k < rank; ++k) {
    double ft = 0.0, ff = 0.0;
    for (const auto& s : sims) {
      const Eigen::VectorXd e = s.embedding.col(k);
      const Eigen::VectorXd e2 = e.cwiseAbs2();
      ft += e.dot(s.x * e) - e2.dot(s.x.diagonal());
      ff += std::pow(e.squaredNorm(), 2) - e2.squaredNorm();
    }
    cal.weights[static_cast<std::size_t>(k)] = ff > 0.0 ? std::max(0.0, ft / ff) : 0.0;
  }

  if (cfg.prior == Prior::SphereUniform) {
    OffDiagonalFit fit;
    for (const auto& s : sims) fit.add(correlation(weighted_gram(s.embedding, cal.weights)), s.x);
    cal.blend = std::clamp(fit.coefficient(), 0.0, 1.0);
  } else {
    double resid = 0.0;
    long count = 0;
    for (const auto& s : sims) {
      resid += (s.x.diagonal() - weighted_gram(s.embedding, cal.weights).diagonal()).sum();
      count += s.x.rows();
    }
    cal.shift = std::max(0.0, resid / static_cast<double>(count));
  }
  return cal;
}

GramMatrix spectral_estimate(const GraphSample& graph, int d, double p,
                             const SpectralCalibration& calibration) {
  const int n = graph.adjacency.n();
  if (d < 1 || d > n) throw DomainError("spectral_estimate: need 1 <= d <= n");
  require_density(p, "spectral_estimate");
  if (calibration.rank < 1 || calibration.rank > n ||
      calibration.weights.size() != static_cast<std::size_t>(calibration.rank))
    throw DomainError("spectral_estimate: calibration does not match the graph");
  GramMatrix x(apply_calibration(spectral_embedding(graph.adjacency, calibration.rank, p), calibration));
  const double floor = -1e-10 * std::max(1.0, x.entries().cwiseAbs().maxCoeff());
  if (x.min_eigenvalue() < floor) throw NotPsdError("spectral_estimate: estimate is not PSD");
  return x;
}

double bernoulli_code_length_bits(const Adjacency& a, double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("bernoulli_code_length_bits: q must lie in (0, 1)");
  const double one = -std::log2(q);
  const double zero = -std::log2(1.0 - q);
  double bits = 0.0;
  for (int i = 0; i < a.n(); ++i)
    for (int j = i + 1; j < a.n(); ++j) bits += a(i, j) ? one : zero;
  return bits + 2.0;
}

std::vector<GridPoint> make_grid(const std::vector<int>& ns, const std::vector<int>& ds,
                                 const std::vector<double>& ps) {
  std::vector<GridPoint> grid;
  for (int n : ns)
    for (int d : ds)
      for (double p : ps) grid.push_back({n, d, p});
  return grid;
}

std::vector<GridPoint> default_grid() { return make_grid({400}, {5, 20, 80, 320, 1280}, {0.05, 0.5}); }

SweepResult phase_sweep(const std::vector<GridPoint>& grid, const SweepOptions& opts) {
  if (grid.empty()) throw DomainError("phase_sweep: grid is empty");
  if (opts.trials < 1) throw DomainError("phase_sweep: trials must be >= 1");
  for (const auto& g : grid) {
    if (g.n < 2 || g.n > kMaxVertices || g.d < 1) throw DomainError("phase_sweep: need 2 <= n <= 4096, d >= 1");
    require_density(g.p, "phase_sweep");
  }

  struct Prepared {
    double tau = 0.0;
    SpectralCalibration cal;
  };
  std::vector<Prepared> prep(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto& g = grid[k];
    prep[k].tau = calibrate_threshold(g.d, g.p, opts.prior, opts.calibration_samples,
                                      derive_seed(opts.seed, kTagTau, k), opts.threads);
  }
  for_each_block(grid.size(), opts.threads, [&](std::size_t k) {
    const auto& g = grid[k];
    const LatentConfig cfg{g.n, g.d, opts.prior, derive_seed(opts.seed, kTagCalibration, k)};
    prep[k].cal = calibrate_spectral(cfg, g.p, prep[k].tau, std::min(g.d + 1, g.n), opts.calibration_runs);
  });

  const auto trials = static_cast<std::size_t>(opts.trials);
  std::vector<ExperimentRecord> records(grid.size() * trials * 2);
  std::vector<double> densities(grid.size() * trials);
  for_each_block(grid.size() * trials, opts.threads, [&](std::size_t task) {
    const std::size_t k = task / trials;
    const std::size_t t = task % trials;
    const auto& g = grid[k];
    const std::uint64_t seed = derive_seed(opts.seed, kTagTrial, k, t);
    const auto start = std::chrono::steady_clock::now();
    const GraphSample graph = generate_graph({g.n, g.d, opts.prior, seed}, prep[k].tau, g.p);
    const Eigen::MatrixXd& z = graph.latents.entries();
    const Eigen::MatrixXd x = z * z.transpose();
    const GramMatrix xhat = spectral_estimate(graph, std::min(g.d, g.n), g.p, prep[k].cal);
    const double spectral_loss = gram_loss(x, xhat.entries(), g.d);
    const auto mid = std::chrono::steady_clock::now();
    const double trivial_loss = gram_loss(x, Eigen::MatrixXd::Identity(g.n, g.n), g.d);
    const auto end = std::chrono::steady_clock::now();
    auto secs = [&](auto a, auto b) {
      return opts.timing ? std::chrono::duration<double>(b - a).count() : 0.0;
    };
    records[2 * task] = {g.n, g.d, g.p, prep[k].tau, seed, "spectral", spectral_loss, secs(start, mid)};
    records[2 * task + 1] = {g.n, g.d, g.p, prep[k].tau, seed, "trivial", trivial_loss, secs(mid, end)};
    densities[task] = graph.realized_density;
  });

  SweepResult result;
  result.records = std::move(records);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto& g = grid[k];
    SweepSummary s;
    s.point = g;
    s.abscissa = g.d / (g.n * specfun::binary_entropy(g.p));
    s.tau = prep[k].tau;
    s.rank = prep[k].cal.rank;
    s.trials = opts.trials;
    auto moments = [&](std::size_t offset, double& mean, double& se) {
      double sum = 0.0, sq = 0.0;
      for (std::size_t t = 0; t < trials; ++t) {
        const double v = result.records[2 * (k * trials + t) + offset].loss;
        sum += v;
        sq += v * v;
      }
      const double m = static_cast<double>(trials);
      mean = sum / m;
      se = trials > 1 ? std::sqrt(std::max(0.0, (sq - m * mean * mean) / (m - 1.0)) / m) : 0.0;
    };
    moments(0, s.spectral_mean, s.spectral_stderr);
    moments(1, s.trivial_mean, s.trivial_stderr);
    s.mean_density = std::accumulate(densities.begin() + static_cast<std::ptrdiff_t>(k * trials),
                                     densities.begin() + static_cast<std::ptrdiff_t>((k + 1) * trials), 0.0) /
                     static_cast<double>(trials);
    result.summary.push_back(s);
  }
  return result;
}

}  // namespace latentrd::rgg
