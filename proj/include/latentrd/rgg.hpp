#pragma once

// Random geometric graphs under the step kernel A_ij = 1{<z_i, z_j> >= tau},
// a spectral Gram-matrix estimator, and sweeps of its loss against
// d / (n h(p)).

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "latentrd/linalg.hpp"
#include "latentrd/sampling.hpp"

namespace latentrd::rgg {

/// Symmetric 0/1 matrix with zero diagonal, one bit per entry.
class Adjacency {
 public:
  Adjacency() = default;
  /// Empty graph on n vertices; n must lie in [1, 4096].
  explicit Adjacency(int n);

  [[nodiscard]] int n() const noexcept { return n_; }
  [[nodiscard]] bool operator()(int i, int j) const noexcept {
    return (bits_[static_cast<std::size_t>(i) * words_ + (j >> 6)] >> (j & 63)) & 1U;
  }
  /// Sets or clears the edge {i, j}; self-loops are rejected.
  void set(int i, int j, bool value = true);

  [[nodiscard]] long long edge_count() const noexcept;
  [[nodiscard]] Eigen::MatrixXd dense() const;

 private:
  int n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

struct GraphSample {
  Adjacency adjacency;
  LatentMatrix latents;
  double tau = 0.0;
  double target_density = 0.0;
  double realized_density = 0.0;  ///< edge count / C(n, 2); 0 when n = 1
};

/// Empirical (1 - p)-quantile of <z_i, z_j> over `samples` independent pairs.
/// Throws DomainError unless p is in (0, 1) and samples >= 1.
double calibrate_threshold(int d, double p, Prior prior, long samples, std::uint64_t seed,
                           unsigned threads = 0);

/// Draws latents from cfg and thresholds every pair at tau.
GraphSample generate_graph(const LatentConfig& cfg, double tau, double target_density = 0.0);

/// Rows V_r diag(sqrt(lambda_+)) for the top-`rank` eigenpairs of
/// S (A - p (J - I)) S with S = diag(deg + 1)^{-1/2}; negative eigenvalues
/// are clipped to zero. Columns are ordered by decreasing eigenvalue.
Eigen::MatrixXd spectral_embedding(const Adjacency& a, int rank, double p);

/// Maps the embedding columns e_k to an estimate G = sum_k w_k e_k e_k^T.
/// Gaussian prior: Xhat = G + shift I. Spherical prior: Xhat = blend C +
/// (1 - blend) I with C the correlation matrix of G, so the diagonal is one.
/// Nonnegative weights keep Xhat PSD.
struct SpectralCalibration {
  Prior prior = Prior::GaussianIsotropic;
  int rank = 1;
  std::vector<double> weights;  ///< one per eigen-index, largest eigenvalue first
  double shift = 0.0;
  double blend = 0.0;
  int runs = 0;
};

/// Fits the weights by off-diagonal least squares of <z_i, z_j> on each
/// component, then shift (diagonal residual) or blend, over `runs`
/// simulated graphs with the same (n, d, p, tau).
SpectralCalibration calibrate_spectral(const LatentConfig& cfg, double p, double tau, int rank,
                                       int runs = 2);

/// Symmetric PSD estimate of Z Z^T from the graph, using calibration.rank
/// eigenpairs. Throws DomainError if d > n and NotPsdError if the result is
/// not PSD.
GramMatrix spectral_estimate(const GraphSample& graph, int d, double p,
                             const SpectralCalibration& calibration);

/// Length in bits of an arithmetic code for the upper triangle of `a`
/// under an i.i.d. Bernoulli(q) model, including the 2-bit termination.
double bernoulli_code_length_bits(const Adjacency& a, double q);

struct ExperimentRecord {
  int n = 0;
  int d = 0;
  double p = 0.0;
  double tau = 0.0;
  std::uint64_t seed = 0;
  std::string estimator;
  double loss = 0.0;
  double runtime_s = 0.0;
};

struct GridPoint {
  int n = 0;
  int d = 0;
  double p = 0.0;
};

/// Cartesian product n x d x p in that nesting order.
std::vector<GridPoint> make_grid(const std::vector<int>& ns, const std::vector<int>& ds,
                                 const std::vector<double>& ps);
/// n = 400, d in {5, 20, 80, 320, 1280}, p in {0.05, 0.5}.
std::vector<GridPoint> default_grid();

struct SweepOptions {
  int trials = 20;
  std::uint64_t seed = 0;
  Prior prior = Prior::GaussianIsotropic;
  long calibration_samples = 1000000;
  int calibration_runs = 2;
  unsigned threads = 0;
  bool timing = false;  ///< record wall time; off keeps output byte-stable
};

struct SweepSummary {
  GridPoint point;
  double abscissa = 0.0;  ///< d / (n h(p))
  double tau = 0.0;
  int rank = 0;
  int trials = 0;
  double mean_density = 0.0;
  double spectral_mean = 0.0;
  double spectral_stderr = 0.0;
  double trivial_mean = 0.0;
  double trivial_stderr = 0.0;
};

struct SweepResult {
  std::vector<ExperimentRecord> records;  ///< grid-major, then trial, spectral before trivial
  std::vector<SweepSummary> summary;      ///< one per grid point
};

/// Uses min(n, d + 1) eigenpairs per graph: the leading one mostly tracks
/// vertex degree, the next d carry direction. Throws DomainError for an
/// empty grid or trials < 1.
SweepResult phase_sweep(const std::vector<GridPoint>& grid, const SweepOptions& opts);

}  // namespace latentrd::rgg
