#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "latentrd/errors.hpp"
#include "latentrd/oracles.hpp"

namespace latentrd::oracles {

void DiscreteRDProblem::validate() const {
  const Eigen::Index m = source_pmf.size();
  if (m == 0 || distortion.rows() != m || distortion.cols() == 0)
    throw DimensionError("DiscreteRDProblem: distortion must be M x K with M = pmf length");
  if ((source_pmf.array() < 0.0).any() || std::abs(source_pmf.sum() - 1.0) > 1e-12)
    throw DomainError("DiscreteRDProblem: source pmf must be nonnegative and sum to 1");
  if (!distortion.allFinite() || (distortion.array() < 0.0).any())
    throw DomainError("DiscreteRDProblem: distortion entries must be finite and >= 0");
}

double DiscreteRDProblem::zero_rate_distortion() const {
  return (source_pmf.transpose() * distortion).minCoeff();
}

BAResult blahut_arimoto(const DiscreteRDProblem& problem, double slope, const BAOptions& opts,
                        const Eigen::VectorXd* warm_start) {
  problem.validate();
  if (!(slope < 0.0) || !std::isfinite(slope))
    throw DomainError("blahut_arimoto: slope must be finite and < 0");
  if (!(opts.tol > 0.0)) throw DomainError("blahut_arimoto: tol must be > 0");

  const Eigen::VectorXd& p = problem.source_pmf;
  const Eigen::MatrixXd kernel = (slope * problem.distortion.array()).exp().matrix();
  const Eigen::MatrixXd weighted = problem.distortion.cwiseProduct(kernel);
  const Eigen::Index k = kernel.cols();

  Eigen::VectorXd q = (warm_start != nullptr && warm_start->size() == k)
                          ? *warm_start
                          : Eigen::VectorXd::Constant(k, 1.0 / k);
  BAResult result;
  RDCurvePoint& pt = result.point;
  pt.slope = slope;

  Eigen::VectorXd denom, weight, c;
  for (int it = 1; it <= opts.max_iter; ++it) {
    denom = kernel * q;  // 1 / lambda(x)
    if ((denom.array() <= 0.0).any())
      throw DomainError("blahut_arimoto: kernel underflow; slope too steep for this alphabet");
    weight = p.cwiseQuotient(denom);
    c = kernel.transpose() * weight;

    const double lagrangian = -(p.array() * denom.array().log()).sum();
    if (opts.record_lagrangian) result.lagrangian_trace.push_back(lagrangian);

    // Distortion of Q(y|x) = q(y) e^{s d(x,y)} lambda(x).
    const double dist = q.dot(weighted.transpose() * weight);

    double max_log_c = -std::numeric_limits<double>::infinity();
    double mean_log_c = 0.0;
    for (Eigen::Index y = 0; y < k; ++y) {
      if (q(y) <= 0.0) continue;
      const double lc = std::log(c(y));
      max_log_c = std::max(max_log_c, lc);
      mean_log_c += q(y) * c(y) * lc;
    }
    // A y with q(y) = 0 can still carry the maximum of c.
    max_log_c = std::max(max_log_c, std::log(c.maxCoeff()));

    pt.iterations = it;
    pt.distortion = dist;
    pt.rate = std::max(0.0, slope * dist + lagrangian - mean_log_c);
    pt.rate_lower_bound = slope * dist + lagrangian - max_log_c;
    pt.duality_gap_bound = std::max(0.0, max_log_c - mean_log_c);

    if (pt.duality_gap_bound < opts.tol) {
      pt.converged = true;
      break;
    }
    q = q.cwiseProduct(c);
    q /= q.sum();
    // Masses this small never recover and would otherwise turn denormal.
    q = (q.array() < 1e-250).select(0.0, q);
  }
  result.output_pmf = std::move(q);
  return result;
}

RDCurvePoint blahut_arimoto_at_distortion(const DiscreteRDProblem& problem, const BAOptions& opts) {
  problem.validate();
  const double target = problem.target_distortion;
  if (!(target > 0.0)) throw DomainError("blahut_arimoto_at_distortion: target D must be > 0");
  const double d_max = problem.zero_rate_distortion();
  if (target >= d_max) {
    RDCurvePoint pt;
    pt.distortion = d_max;
    pt.converged = true;
    return pt;
  }

  // D(s) increases with s; bracket in log|s|.
  BAOptions coarse = opts;
  coarse.tol = std::max(opts.tol, 1e-6);
  coarse.max_iter = std::min(opts.max_iter, 3000);
  coarse.record_lagrangian = false;
  Eigen::VectorXd warm;
  auto run = [&](double s, const BAOptions& o) {
    auto r = blahut_arimoto(problem, s, o, warm.size() ? &warm : nullptr);
    warm = r.output_pmf;
    return r.point;
  };

  double lo = -1.0, hi = -1.0;  // D(lo) <= target < D(hi)
  RDCurvePoint at = run(-1.0, coarse);
  RDCurvePoint at_lo = at, at_hi = at;
  if (at.distortion > target) {
    for (lo = -2.0;; lo *= 2.0) {
      at = run(lo, coarse);
      if (at.distortion <= target || lo < -1e12) break;
      hi = lo;
      at_hi = at;
    }
    at_lo = at;
  } else {
    for (hi = -0.5;; hi *= 0.5) {
      at = run(hi, coarse);
      if (at.distortion > target || hi > -1e-12) break;
      lo = hi;
      at_lo = at;
    }
    at_hi = at;
  }
  // Illinois false position on log D against log|s|, where D(s) is close to
  // a power law; the bracket always survives.
  auto f = [&](const RDCurvePoint& p) { return std::log(std::max(p.distortion, 1e-300) / target); };
  double f_lo = f(at_lo), f_hi = f(at_hi);
  int side = 0;
  for (int step = 0; step < 200; ++step) {
    const double u_lo = std::log(-lo), u_hi = std::log(-hi);
    double u = u_lo - f_lo * (u_hi - u_lo) / (f_hi - f_lo);
    if (!(u > std::min(u_lo, u_hi) && u < std::max(u_lo, u_hi)) || !std::isfinite(u)) u = 0.5 * (u_lo + u_hi);
    const double mid = -std::exp(u);
    at = run(mid, coarse);
    const double fm = f(at);
    if (fm > 0.0) {
      hi = mid;
      f_hi = fm;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    } else {
      lo = mid;
      f_lo = fm;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    }
    if (std::abs(at.distortion - target) <= 1e-7 * target || hi / lo > 1.0 - 1e-12) break;
  }
  const double s = std::abs(at.distortion - target) <= 1e-7 * target ? at.slope : -std::sqrt(lo * hi);
  return run(s, opts);
}

DiscreteRDProblem binary_hamming_problem(double p, double target_distortion) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binary_hamming_problem: p must lie in [0, 1]");
  DiscreteRDProblem prob;
  prob.source_pmf = Eigen::Vector2d(1.0 - p, p);
  prob.distortion = Eigen::Matrix2d{{0.0, 1.0}, {1.0, 0.0}};
  prob.target_distortion = target_distortion;
  return prob;
}

DiscreteRDProblem discretized_gaussian_problem(int points, double sigma, double clip,
                                               double target_distortion) {
  if (points < 2 || !(sigma > 0.0) || !(clip > 0.0))
    throw DomainError("discretized_gaussian_problem: need points >= 2, sigma > 0, clip > 0");
  const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(points, -clip * sigma, clip * sigma);
  DiscreteRDProblem prob;
  prob.source_pmf = (-0.5 * (grid.array() / sigma).square()).exp().matrix();
  prob.source_pmf /= prob.source_pmf.sum();
  prob.distortion.resize(points, points);
  for (int i = 0; i < points; ++i)
    for (int j = 0; j < points; ++j) prob.distortion(i, j) = std::pow(grid(i) - grid(j), 2);
  prob.target_distortion = target_distortion;
  return prob;
}

}  // namespace latentrd::oracles
