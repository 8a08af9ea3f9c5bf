#pragma once

// Closed-form rate-distortion lower bounds for Wishart and spherical Gram
// matrices, and the entropy counts used by the recovery impossibility
// results. Every report itemizes its terms so each step of a chain can be
// checked on its own. Units are nats throughout.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace latentrd::bounds {

enum class Regime { SmallD, LargeD, MiddleD, Spherical, EntropyCount };

std::string_view to_string(Regime regime) noexcept;

/// Absolute constants that the theory only proves to exist. Reports print
/// the values used so every number is reproducible.
struct BoundConstants {
  double c_star = 0.01;  ///< small-d regime threshold, d <= c_star * n
  double C0 = 16.0;      ///< covering constant of O(d): N <= (sqrt(C0 d)/eps)^{d^2}
  double c1 = 0.5;       ///< eps >= c1 sqrt(d D) from spectral-norm concentration
  double K = 1.5;        ///< quadratic slack in the large-d bound, value - K n^2
  double c = 0.125;      ///< leading constant c in c n min(n,d) log(1/D)

  /// Lemma constant C = C0 / c1^2.
  [[nodiscard]] double C() const noexcept { return C0 / (c1 * c1); }
  /// Throws DomainError unless every constant is finite and positive, C0 >= 1.
  void validate() const;
};

struct Term {
  std::string label;
  double value_nats = 0.0;
};

struct ValidityCheck {
  std::string name;
  bool pass = false;
};

struct BoundReport {
  std::string bound_name;
  Regime regime = Regime::LargeD;
  std::vector<std::pair<std::string, double>> inputs;
  double value_nats = 0.0;
  /// Signed terms whose sum is value_nats.
  std::vector<Term> terms;
  /// Intermediate or alternative quantities that are not part of the sum.
  std::vector<Term> aux;
  std::vector<ValidityCheck> validity;

  [[nodiscard]] bool usable() const noexcept;
  /// max(value_nats, 0); negative raw values mean the bound is vacuous.
  [[nodiscard]] double usable_value() const noexcept;
  [[nodiscard]] double terms_sum() const noexcept;
  /// Throws LookupError if no term or aux entry carries the label.
  [[nodiscard]] double find(std::string_view label) const;
};

struct ClampedValue {
  double value_nats = 0.0;
  bool clamped = false;  ///< D >= n: rate is zero
};

/// (nd/2) log(n/D), the rate-distortion function of an n x d matrix with
/// i.i.d. N(0, 1/d) entries under squared Frobenius distortion.
ClampedValue gaussian_matrix_rd(int n, int d, double distortion);

/// Shannon lower bound h - (N/2) log(2 pi e D / N) for a density on R^N
/// under total squared error D.
double shannon_lower_bound(double differential_entropy, double dims, double distortion);

/// Differential entropy (nats) of X ~ Wishart_n(d, I/d) on the n(n+1)/2
/// free coordinates. Requires d >= n >= 1.
double wishart_differential_entropy(int n, int d);

/// h(X) - (n(n+1)/4) log(4 pi e D / d) for the loss L.
BoundReport shannon_lower_bound_gram(int n, int d, double distortion);

/// The same quantity rearranged as
/// nd/2 + (n(n+1)/4) log(1/(pi e D d)) + log Gamma_n(d/2) - ((d-n-1)/2) psi_n(d/2).
BoundReport slb_expanded(int n, int d, double distortion);

/// d^2 log(sqrt(C0 d) / eps), log of the covering bound of O(d) in Frobenius
/// norm. Valid for 0 < eps <= sqrt(d), C0 >= 1.
double orthogonal_group_covering_log(int d, double eps, double C0);

/// Upper bound ((sqrt n + sqrt d)^2 + 1) / d on E ||Z||^2 (spectral norm) for
/// Z with i.i.d. N(0, 1/d) entries.
double expected_spectral_norm_sq_bound(int n, int d);

/// Bound modulo rotations: (nd/2) log(1/(4D)) - (d^2/2) log(C/D) for Z under ell.
BoundReport lemma33_bound(int n, int d, double distortion, const BoundConstants& k = {});

/// Small-d regime. value = lemma33 at sqrt(8D) (the chain); the simplified
/// (nd/8) log(1/D) is reported in aux.
BoundReport theorem2_smalld_bound(int n, int d, double distortion, const BoundConstants& k = {});

/// Large-d regime. value = (n(n+1)/4) log(1/D) - K n^2. aux carries the exact
/// intermediate (n(n+1)/4) log(1/(D d)) + sum_i ((n+1-i)/2) log((d+1-i)/2) - K' n
/// with K' n the itemized Stirling and digamma remainders.
BoundReport theorem2_larged_bound(int n, int d, double distortion, const BoundConstants& k = {});

/// Quadratic slack K needed at (n, d) for the final large-d form to sit below
/// the exact intermediate; sup over n >= 1, d >= n equals 3/2, attained at n = d = 1.
double larged_required_K(int n, int d);

/// Middle regime c* n < d < n via the top-left d x d minor: the large-d bound
/// at (d, d, D / c*^2).
BoundReport theorem2_middled_bound(int n, int d, double distortion, const BoundConstants& k = {});

/// Spherical latents: c n min(n,d) log(1/(28 D)) - (n/2) log(1 + 1/(2 d delta^2))
/// with delta^2 = D / d.
BoundReport spherical_bound(int n, int d, double distortion, const BoundConstants& k = {});

/// C(n,2) h(p): entropy bound on a graph with average edge density p.
double entropy_count_graph(int n, double p);

/// n^2 (h(p) + p log 2): entropy bound for one-bit observations revealed with
/// average probability p.
double entropy_count_completion(int n, double p);

enum class ObservationModel { Graph, Completion };

std::string_view to_string(ObservationModel model) noexcept;

/// d* = c n h(p) (Graph) or c n (h(p) + p) (Completion).
double impossibility_threshold(int n, double p, double c, ObservationModel model);

/// The entropy-counting chain c n min(n,d) log(1/D) <= R(D) <= H(A): value is
/// the H(A) bound; aux holds the rate lower bound and the margin. Validity
/// "recovery_impossible_at_D" passes when the rate bound exceeds H(A).
BoundReport entropy_chain(int n, int d, double p, double distortion, ObservationModel model,
                          const BoundConstants& k = {});

/// Every report that applies to (n, d, D) under the Gaussian prior
/// (sphere adds the spherical bound). Empty p (< 0) skips the entropy chain.
std::vector<BoundReport> applicable_bounds(int n, int d, double distortion, bool spherical,
                                           double p, const BoundConstants& k = {});

/// Largest usable lower bound among the reports; 0 if none is usable.
double tightest_lower_bound(const std::vector<BoundReport>& reports);

}  // namespace latentrd::bounds
