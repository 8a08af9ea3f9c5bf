#include "latentrd/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "latentrd/errors.hpp"
#include "latentrd/linalg.hpp"
#include "latentrd/parallel.hpp"
#include "latentrd/specfun.hpp"

namespace latentrd::oracles {
namespace {

constexpr long kEntropyBlock = 8192;

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  long count = 0;
  long rejected = 0;
};

}  // namespace

QuantizerResult quantization_upper_bound(const LatentConfig& cfg, double eta, int trials,
                                         unsigned threads) {
  cfg.validate();
  if (!(eta > 0.0) || !std::isfinite(eta)) throw DomainError("quantization_upper_bound: eta must be > 0");
  if (trials < 1) throw DomainError("quantization_upper_bound: trials must be >= 1");

  QuantizerResult out;
  out.grid_step = eta;
  out.clip = 6.0 / std::sqrt(static_cast<double>(cfg.d));
  const double half_levels = std::floor(out.clip / eta);
  out.levels = static_cast<int>(2.0 * half_levels + 1.0);
  out.trials = trials;

  std::vector<double> losses(static_cast<std::size_t>(trials));
  for_each_block(losses.size(), threads, [&](std::size_t t) {
    const Eigen::MatrixXd z = sample_latents(cfg, t).entries();
    const Eigen::MatrixXd zq =
        z.unaryExpr([&](double v) { return eta * std::clamp(std::round(v / eta), -half_levels, half_levels); });
    losses[t] = gram_loss(z * z.transpose(), zq * zq.transpose(), cfg.d);
  });

  double sum = 0.0, sum_sq = 0.0;
  for (double v : losses) {
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / trials;
  const double var = trials > 1 ? std::max(0.0, (sum_sq - trials * mean * mean) / (trials - 1)) : 0.0;

  out.point.rate = static_cast<double>(cfg.n) * cfg.d * std::log(static_cast<double>(out.levels));
  out.point.rate_lower_bound = 0.0;
  out.point.distortion = mean;
  out.point.iterations = trials;
  out.point.converged = true;
  out.distortion_stderr = std::sqrt(var / trials);
  return out;
}

double wishart_log_density(const Eigen::MatrixXd& x, int d) {
  const int n = static_cast<int>(x.rows());
  if (x.cols() != n) throw DimensionError("wishart_log_density: X must be square");
  if (d < n) throw DomainError("wishart_log_density: requires d >= n");
  Eigen::LLT<Eigen::MatrixXd> llt(x);
  if (llt.info() != Eigen::Success) throw NotPsdError("wishart_log_density: X is not positive definite");
  const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return 0.5 * (d - n - 1.0) * log_det - 0.5 * d * x.trace() +
         0.5 * n * d * std::log(0.5 * d) - specfun::multivariate_log_gamma(n, 0.5 * d);
}

EntropyEstimate mc_differential_entropy_wishart(int n, int d, long samples, std::uint64_t seed,
                                                unsigned threads) {
  if (n < 1 || d < n) throw DomainError("mc_differential_entropy_wishart: requires d >= n >= 1");
  if (samples < 2) throw DomainError("mc_differential_entropy_wishart: samples must be >= 2");

  const double norm_const = 0.5 * n * d * std::log(0.5 * d) - specfun::multivariate_log_gamma(n, 0.5 * d);
  const std::size_t blocks = static_cast<std::size_t>((samples + kEntropyBlock - 1) / kEntropyBlock);
  std::vector<Moments> partial(blocks);

  for_each_block(blocks, threads, [&](std::size_t b) {
    const long begin = static_cast<long>(b) * kEntropyBlock;
    const long count = std::min(kEntropyBlock, samples - begin);
    Rng rng(seed, b);
    Moments m;
    while (m.count < count) {
      const Eigen::MatrixXd z = sample_latents(n, d, Prior::GaussianIsotropic, rng).entries();
      const Eigen::MatrixXd x = z * z.transpose();
      Eigen::LLT<Eigen::MatrixXd> llt(x);
      if (llt.info() != Eigen::Success) {
        ++m.rejected;
        continue;
      }
      const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
      if (!std::isfinite(log_det)) {
        ++m.rejected;
        continue;
      }
      const double neg_log_f = -(0.5 * (d - n - 1.0) * log_det - 0.5 * d * x.trace() + norm_const);
      m.sum += neg_log_f;
      m.sum_sq += neg_log_f * neg_log_f;
      ++m.count;
    }
    partial[b] = m;
  });

  Moments total;
  for (const auto& m : partial) {
    total.sum += m.sum;
    total.sum_sq += m.sum_sq;
    total.count += m.count;
    total.rejected += m.rejected;
  }
  const double mean = total.sum / total.count;
  const double var = std::max(0.0, (total.sum_sq - total.count * mean * mean) / (total.count - 1));
  return {mean, std::sqrt(var / total.count), total.count, total.rejected};
}

}  // namespace latentrd::oracles
