#pragma once

#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

#include "latentrd/linalg.hpp"
#include "latentrd/rng.hpp"

namespace latentrd {

enum class Prior { GaussianIsotropic, SphereUniform };

std::string_view to_string(Prior prior) noexcept;
/// Accepts "gaussian" or "sphere" (and the enum spellings).
Prior parse_prior(std::string_view text);

struct LatentConfig {
  int n = 1;
  int d = 1;
  Prior prior = Prior::GaussianIsotropic;
  std::uint64_t seed = 0;

  /// Throws DomainError unless n >= 1 and d >= 1.
  void validate() const;
};

/// Rows i.i.d. N(0, I_d / d) or uniform on S^{d-1} (normalized Gaussian).
/// Deterministic in (cfg.seed, stream).
LatentMatrix sample_latents(const LatentConfig& cfg, std::uint64_t stream = 0);
/// Same distribution, drawing from a caller-owned generator.
LatentMatrix sample_latents(int n, int d, Prior prior, Rng& rng);

/// X = Z Z^T for Z = sample_latents(cfg, stream).
GramMatrix sample_gram(const LatentConfig& cfg, std::uint64_t stream = 0);

/// Gaussian rows w_i split into norms beta_i = ||w_i|| and unit directions,
/// with perturbed norms beta_hat_i = beta_i + g_i, g_i ~ N(0, delta^2).
struct BetaDecomposition {
  Eigen::VectorXd norms;
  LatentMatrix directions;
  double noise_scale = 0.0;
  Eigen::VectorXd perturbed_norms;

  /// diag(beta) * directions, which reproduces the Gaussian latents.
  [[nodiscard]] Eigen::MatrixXd reconstruct_latents() const;
  /// diag(beta) X diag(beta) with X the Gram matrix of the directions.
  [[nodiscard]] Eigen::MatrixXd rescaled_gram() const;
};

/// Throws DegenerateInputError on a zero-norm row and DomainError if delta < 0.
BetaDecomposition beta_decompose(const LatentMatrix& z_gauss, double delta, std::uint64_t seed);

/// The noise scale delta = sqrt(D / d) paired with a target distortion D.
double default_beta_noise(double distortion, int d);

/// Var(||w||) for w ~ N(0, I_d / d): (d - 2 Gamma((d+1)/2)^2 / Gamma(d/2)^2) / d.
double chi_norm_variance(int d);

/// One draw of <z, z'> for independent rows under the prior, using rotation
/// invariance: the product is ||z|| times a scaled coordinate of z'.
double sample_pair_inner_product(int d, Prior prior, Rng& rng);

}  // namespace latentrd
