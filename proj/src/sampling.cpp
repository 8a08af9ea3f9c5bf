#include "latentrd/sampling.hpp"

#include <cmath>
#include <random>
#include <string>

#include "latentrd/errors.hpp"
#include "latentrd/specfun.hpp"

namespace latentrd {

std::string_view to_string(Prior prior) noexcept {
  return prior == Prior::GaussianIsotropic ? "gaussian" : "sphere";
}

Prior parse_prior(std::string_view text) {
  if (text == "gaussian" || text == "GaussianIsotropic") return Prior::GaussianIsotropic;
  if (text == "sphere" || text == "SphereUniform") return Prior::SphereUniform;
  throw DomainError("unknown prior '" + std::string(text) + "' (expected gaussian or sphere)");
}

void LatentConfig::validate() const {
  if (n < 1 || d < 1)
    throw DomainError("LatentConfig: n and d must be >= 1, got n=" + std::to_string(n) +
                      " d=" + std::to_string(d));
}

LatentMatrix sample_latents(int n, int d, Prior prior, Rng& rng) {
  LatentConfig{n, d, prior, 0}.validate();
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd z(n, d);
  // Row-major fill order keeps draws per row contiguous in the stream.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) z(i, j) = normal(rng);
  if (prior == Prior::GaussianIsotropic) {
    z /= std::sqrt(static_cast<double>(d));
  } else {
    for (int i = 0; i < n; ++i) {
      double norm = z.row(i).norm();
      while (norm == 0.0) {
        for (int j = 0; j < d; ++j) z(i, j) = normal(rng);
        norm = z.row(i).norm();
      }
      z.row(i) /= norm;
    }
  }
  return LatentMatrix(std::move(z));
}

LatentMatrix sample_latents(const LatentConfig& cfg, std::uint64_t stream) {
  cfg.validate();
  Rng rng(cfg.seed, stream);
  return sample_latents(cfg.n, cfg.d, cfg.prior, rng);
}

GramMatrix sample_gram(const LatentConfig& cfg, std::uint64_t stream) {
  return GramMatrix::from_latents(sample_latents(cfg, stream));
}

Eigen::MatrixXd BetaDecomposition::reconstruct_latents() const {
  return norms.asDiagonal() * directions.entries();
}

Eigen::MatrixXd BetaDecomposition::rescaled_gram() const {
  const Eigen::MatrixXd& u = directions.entries();
  const Eigen::MatrixXd x = u * u.transpose();
  return norms.asDiagonal() * x * norms.asDiagonal();
}

BetaDecomposition beta_decompose(const LatentMatrix& z_gauss, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw DomainError("beta_decompose: delta must be finite and >= 0");
  const Eigen::MatrixXd& w = z_gauss.entries();
  const Eigen::VectorXd norms = w.rowwise().norm();
  for (Eigen::Index i = 0; i < norms.size(); ++i)
    if (!(norms(i) > 0.0))
      throw DegenerateInputError("beta_decompose: row " + std::to_string(i) + " has zero norm");

  Eigen::MatrixXd dirs = norms.cwiseInverse().asDiagonal() * w;
  Rng rng(seed, 0x62657461ULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd perturbed = norms;
  if (delta > 0.0)
    for (Eigen::Index i = 0; i < perturbed.size(); ++i) perturbed(i) += delta * normal(rng);

  return {norms, LatentMatrix(std::move(dirs)), delta, std::move(perturbed)};
}

double default_beta_noise(double distortion, int d) {
  if (!(distortion > 0.0) || d < 1) throw DomainError("default_beta_noise: need D > 0, d >= 1");
  return std::sqrt(distortion / d);
}

double chi_norm_variance(int d) {
  if (d < 1) throw DomainError("chi_norm_variance: d must be >= 1");
  const double log_ratio = specfun::log_gamma(0.5 * (d + 1)) - specfun::log_gamma(0.5 * d);
  return (d - 2.0 * std::exp(2.0 * log_ratio)) / d;
}

double sample_pair_inner_product(int d, Prior prior, Rng& rng) {
  if (d < 1) throw DomainError("sample_pair_inner_product: d must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  const double g = normal(rng);
  if (prior == Prior::GaussianIsotropic) {
    // <z, z'> = ||z|| * <z/||z||, z'> and the second factor is N(0, 1/d).
    const double chi2 =
        d == 1 ? std::pow(normal(rng), 2) : std::gamma_distribution<double>(0.5 * d, 2.0)(rng);
    return std::sqrt(chi2 / d) * g / std::sqrt(static_cast<double>(d));
  }
  // For the sphere, <z, z'> is distributed as the first coordinate of a
  // uniform unit vector: g1 / sqrt(g1^2 + chi2_{d-1}).
  if (d == 1) return g >= 0.0 ? 1.0 : -1.0;
  const double rest =
      d == 2 ? std::pow(normal(rng), 2) : std::gamma_distribution<double>(0.5 * (d - 1), 2.0)(rng);
  return g / std::sqrt(g * g + rest);
}

}  // namespace latentrd
