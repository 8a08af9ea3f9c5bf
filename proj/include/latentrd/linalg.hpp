#pragma once

#include <Eigen/Dense>

namespace latentrd {

/// n x d matrix whose rows are latent vectors z_i.
class LatentMatrix {
 public:
  LatentMatrix() = default;
  /// Throws DomainError on non-finite entries or an empty shape.
  explicit LatentMatrix(Eigen::MatrixXd entries);

  [[nodiscard]] const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  [[nodiscard]] Eigen::Index n() const noexcept { return entries_.rows(); }
  [[nodiscard]] Eigen::Index d() const noexcept { return entries_.cols(); }

  /// Largest deviation of a row norm from 1.
  [[nodiscard]] double max_row_norm_deviation() const;

 private:
  Eigen::MatrixXd entries_;
};

/// Symmetric n x n Gram matrix X = Z Z^T. rank_bound is min(n, d) when
/// built from latents and n otherwise.
class GramMatrix {
 public:
  GramMatrix() = default;
  /// Checks squareness, finiteness and symmetry within 1e-12 (relative to
  /// the largest entry); the stored matrix is exactly symmetrized.
  explicit GramMatrix(Eigen::MatrixXd entries);
  GramMatrix(Eigen::MatrixXd entries, Eigen::Index rank_bound);

  static GramMatrix from_latents(const LatentMatrix& z);

  [[nodiscard]] const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  [[nodiscard]] Eigen::Index n() const noexcept { return entries_.rows(); }
  [[nodiscard]] Eigen::Index rank_bound() const noexcept { return rank_bound_; }

  /// Smallest eigenvalue.
  [[nodiscard]] double min_eigenvalue() const;

 private:
  Eigen::MatrixXd entries_;
  Eigen::Index rank_bound_ = 0;
};

inline constexpr double kPsdTolerance = 1e-10;

/// L(X, Y) = d / (n (n+1)) * ||X - Y||_F^2.
double gram_loss(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double d);
double gram_loss(const GramMatrix& x, const GramMatrix& y, double d);

struct ProcrustesResult {
  double loss = 0.0;          ///< (1/n) min_O ||A - B O||_F^2
  Eigen::MatrixXd rotation;   ///< a minimizing O in O(d)
};

/// Orthogonal Procrustes loss ell(A, B), solved in closed form from the SVD
/// of B^T A: with B^T A = U S V^T the optimum is O = U V^T and the loss is
/// (||A||^2 + ||B||^2 - 2 tr S) / n.
ProcrustesResult procrustes_loss(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
ProcrustesResult procrustes_loss(const LatentMatrix& a, const LatentMatrix& b);

/// Symmetric PSD square root via eigendecomposition. Eigenvalues in
/// [-tolerance, 0) are clipped to zero; anything lower throws NotPsdError.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m, double tolerance = kPsdTolerance);
GramMatrix psd_sqrt(const GramMatrix& m, double tolerance = kPsdTolerance);

/// Sum of singular values.
double nuclear_norm(const Eigen::MatrixXd& m);

struct PolarDecomposition {
  Eigen::MatrixXd psd;        ///< P = (A A^T)^{1/2}, n x n
  Eigen::MatrixXd isometry;   ///< U, n x d with orthonormal rows (n <= d) or columns (n > d)
};

/// Left polar decomposition A = P U.
PolarDecomposition polar_decompose(const Eigen::MatrixXd& a);

/// Projection of a symmetric matrix onto the PSD cone with rank <= k, returned
/// as a factor W (n x k) with W W^T the best approximation in Frobenius norm.
Eigen::MatrixXd best_psd_factor(const Eigen::MatrixXd& y, Eigen::Index k);

/// Loss of the top-left k x k principal minors, L_k(X_k, Y_k) with the
/// dimension parameter equal to k.
double principal_minor_loss(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, Eigen::Index k);

}  // namespace latentrd
