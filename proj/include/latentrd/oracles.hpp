#pragma once

// Independent numerical oracles that bracket the closed-form bounds:
// a Blahut-Arimoto rate-distortion solver for discrete sources, a uniform
// quantizer that realizes achievable (rate, distortion) points for Gram
// matrices, and a density-based Monte Carlo estimate of the Wishart entropy.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "latentrd/sampling.hpp"

namespace latentrd::oracles {

struct DiscreteRDProblem {
  Eigen::VectorXd source_pmf;       ///< length M, sums to 1
  Eigen::MatrixXd distortion;       ///< M x K, finite and >= 0
  double target_distortion = 0.0;   ///< used by the D-targeting driver

  void validate() const;
  /// min_y sum_x p(x) d(x, y): the smallest distortion reachable at rate 0.
  [[nodiscard]] double zero_rate_distortion() const;
};

struct RDCurvePoint {
  double slope = 0.0;
  double rate = 0.0;               ///< nats, I(p, Q) of the final channel
  double rate_lower_bound = 0.0;   ///< dual value, <= R(distortion)
  double distortion = 0.0;
  int iterations = 0;
  bool converged = false;
  double duality_gap_bound = 0.0;  ///< max_y log c(y) - sum_y q(y) c(y) log c(y)
};

/// tol bounds the duality gap in nats. The gap closes roughly like 1/t on
/// fine grids even when the rate has settled, so tighter values get expensive.
struct BAOptions {
  double tol = 1e-4;
  int max_iter = 200000;
  bool record_lagrangian = false;
};

struct BAResult {
  RDCurvePoint point;
  Eigen::VectorXd output_pmf;
  /// sum_x p(x) log lambda(x) = min_Q [I - s D] for the current output pmf,
  /// one entry per iteration when requested; never increases.
  std::vector<double> lagrangian_trace;
};

/// Alternating minimization at a fixed Lagrange slope s < 0. Iterates until
/// the Blahut gap is below tol or max_iter is hit (converged = false).
BAResult blahut_arimoto(const DiscreteRDProblem& problem, double slope, const BAOptions& opts = {},
                        const Eigen::VectorXd* warm_start = nullptr);

/// Point on the curve at problem.target_distortion, found by a bracketed search on
/// the slope. Targets at or above zero_rate_distortion() return rate 0.
RDCurvePoint blahut_arimoto_at_distortion(const DiscreteRDProblem& problem,
                                          const BAOptions& opts = {});

/// Bernoulli(p) source with Hamming distortion.
DiscreteRDProblem binary_hamming_problem(double p, double target_distortion);

/// N(0, sigma^2) discretized on `points` uniform nodes over +-clip*sigma;
/// probabilities are density times cell width, renormalized. The
/// reproduction alphabet is the same grid and the distortion squared error.
DiscreteRDProblem discretized_gaussian_problem(int points, double sigma, double clip,
                                               double target_distortion);

struct QuantizerResult {
  RDCurvePoint point;          ///< rate = n d log(levels), distortion = mean L(X, Xhat)
  double distortion_stderr = 0.0;
  int levels = 0;
  double grid_step = 0.0;
  double clip = 0.0;
  int trials = 0;
};

/// Rounds each latent entry to the grid eta * k, |eta k| <= 6 / sqrt(d), sets
/// Xhat = Zhat Zhat^T and averages L(X, Xhat) over `trials` draws. The rate is
/// the fixed-rate codebook size, so (rate, distortion) upper-bounds R(D).
QuantizerResult quantization_upper_bound(const LatentConfig& cfg, double eta, int trials,
                                         unsigned threads = 0);

struct EntropyEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  long samples = 0;
  long rejected = 0;  ///< draws whose Cholesky factorization failed
};

/// log density of Wishart_n(d, I/d) at a positive-definite X.
double wishart_log_density(const Eigen::MatrixXd& x, int d);

/// Sample mean and standard error of -log f(X) for X = Z Z^T with Gaussian
/// rows. Samples are split into fixed blocks with their own RNG streams, so
/// the result does not depend on the thread count.
EntropyEstimate mc_differential_entropy_wishart(int n, int d, long samples, std::uint64_t seed,
                                                unsigned threads = 0);

}  // namespace latentrd::oracles
