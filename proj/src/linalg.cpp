#include "latentrd/linalg.hpp"

#include <cmath>
#include <string>

#include "latentrd/errors.hpp"

namespace latentrd {
namespace {

std::string shape(const Eigen::MatrixXd& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) throw DomainError(std::string(what) + ": non-finite entries");
}

void require_same_shape(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError(std::string(what) + ": shape mismatch " + shape(a) + " vs " + shape(b));
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

LatentMatrix::LatentMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.cols() < 1)
    throw DimensionError("LatentMatrix: n and d must be positive");
  require_finite(entries_, "LatentMatrix");
}

double LatentMatrix::max_row_norm_deviation() const {
  return (entries_.rowwise().norm().array() - 1.0).abs().maxCoeff();
}

GramMatrix::GramMatrix(Eigen::MatrixXd entries) : GramMatrix(std::move(entries), -1) {}

GramMatrix::GramMatrix(Eigen::MatrixXd entries, Eigen::Index rank_bound) {
  if (entries.rows() != entries.cols() || entries.rows() < 1)
    throw DimensionError("GramMatrix: expected a nonempty square matrix, got " + shape(entries));
  require_finite(entries, "GramMatrix");
  const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
  if ((entries - entries.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError("GramMatrix: matrix is not symmetric");
  entries_ = symmetrized(entries);
  rank_bound_ = rank_bound < 0 ? entries_.rows() : rank_bound;
}

GramMatrix GramMatrix::from_latents(const LatentMatrix& z) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(z.n(), z.n());
  x.selfadjointView<Eigen::Lower>().rankUpdate(z.entries());
  x.triangularView<Eigen::StrictlyUpper>() = x.transpose();
  return GramMatrix(std::move(x), std::min(z.n(), z.d()));
}

double GramMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(entries_, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double gram_loss(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double d) {
  if (x.rows() != x.cols()) throw DimensionError("gram_loss: X must be square, got " + shape(x));
  require_same_shape(x, y, "gram_loss");
  if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("gram_loss: d must be > 0");
  const double n = static_cast<double>(x.rows());
  return d / (n * (n + 1.0)) * (x - y).squaredNorm();
}

double gram_loss(const GramMatrix& x, const GramMatrix& y, double d) {
  return gram_loss(x.entries(), y.entries(), d);
}

ProcrustesResult procrustes_loss(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  require_same_shape(a, b, "procrustes_loss");
  require_finite(a, "procrustes_loss");
  require_finite(b, "procrustes_loss");
  const Eigen::MatrixXd cross = b.transpose() * a;  // d x d
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double n = static_cast<double>(a.rows());
  const double raw =
      (a.squaredNorm() + b.squaredNorm() - 2.0 * svd.singularValues().sum()) / n;
  return {std::max(0.0, raw), svd.matrixU() * svd.matrixV().transpose()};
}

ProcrustesResult procrustes_loss(const LatentMatrix& a, const LatentMatrix& b) {
  return procrustes_loss(a.entries(), b.entries());
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m, double tolerance) {
  if (m.rows() != m.cols()) throw DimensionError("psd_sqrt: expected square matrix, got " + shape(m));
  require_finite(m, "psd_sqrt");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(m));
  const Eigen::VectorXd& ev = es.eigenvalues();
  if (ev.size() > 0 && ev(0) < -tolerance)
    throw NotPsdError("psd_sqrt: eigenvalue " + std::to_string(ev(0)) + " below -" +
                      std::to_string(tolerance));
  const Eigen::VectorXd root = ev.cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd& v = es.eigenvectors();
  return symmetrized(v * root.asDiagonal() * v.transpose());
}

GramMatrix psd_sqrt(const GramMatrix& m, double tolerance) {
  return GramMatrix(psd_sqrt(m.entries(), tolerance), m.rank_bound());
}

double nuclear_norm(const Eigen::MatrixXd& m) {
  require_finite(m, "nuclear_norm");
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().sum();
}

PolarDecomposition polar_decompose(const Eigen::MatrixXd& a) {
  require_finite(a, "polar_decompose");
  // Thin SVD A = W S V^T, so P = W S W^T and U = W V^T.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::MatrixXd& w = svd.matrixU();
  PolarDecomposition out;
  out.psd = symmetrized(w * svd.singularValues().asDiagonal() * w.transpose());
  out.isometry = w * svd.matrixV().transpose();
  return out;
}

Eigen::MatrixXd best_psd_factor(const Eigen::MatrixXd& y, Eigen::Index k) {
  if (y.rows() != y.cols()) throw DimensionError("best_psd_factor: expected square matrix");
  if (k < 1) throw DomainError("best_psd_factor: rank must be >= 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(y));
  const Eigen::Index n = y.rows();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, k);
  // Eigenvalues are ascending; keep the top min(k, n) clipped at zero.
  for (Eigen::Index j = 0; j < std::min(k, n); ++j) {
    const Eigen::Index idx = n - 1 - j;
    const double lambda = std::max(0.0, es.eigenvalues()(idx));
    w.col(j) = std::sqrt(lambda) * es.eigenvectors().col(idx);
  }
  return w;
}

double principal_minor_loss(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, Eigen::Index k) {
  require_same_shape(x, y, "principal_minor_loss");
  if (k < 1 || k > x.rows()) throw DomainError("principal_minor_loss: k must lie in [1, n]");
  return gram_loss(x.topLeftCorner(k, k), y.topLeftCorner(k, k), static_cast<double>(k));
}

}  // namespace latentrd
