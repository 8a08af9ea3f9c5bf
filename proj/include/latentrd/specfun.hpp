#pragma once

// Scalar and multivariate gamma-family functions plus the binary entropy.
// All entropic quantities are in nats.

namespace latentrd::specfun {

/// A value together with a bound on its absolute error.
struct SpecFunResult {
  double value = 0.0;
  double abs_error_bound = 0.0;
};

/// log Gamma(x) for x > 0. Small arguments are shifted up by the recurrence
/// until x >= 10, then the Stirling series with seven Bernoulli terms is used.
/// Throws DomainError for x <= 0 or non-finite x.
SpecFunResult log_gamma_result(double x);
double log_gamma(double x);

/// Digamma psi(x) for x > 0, by recurrence shift and the asymptotic series.
SpecFunResult digamma_result(double x);
double digamma(double x);

/// h(p) = -p log p - (1-p) log(1-p), with h(0) = h(1) = 0.
double binary_entropy(double p);

/// log Gamma_n(a) = n(n-1)/4 log(pi) + sum_{i=1..n} log Gamma(a + (1-i)/2).
/// Requires a > (n-1)/2.
SpecFunResult multivariate_log_gamma_result(int n, double a);
double multivariate_log_gamma(int n, double a);

/// psi_n(a) = sum_{i=1..n} psi(a + (1-i)/2). Requires a > (n-1)/2.
SpecFunResult multivariate_digamma_result(int n, double a);
double multivariate_digamma(int n, double a);

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kLogPi = 1.14472988584940017414342735135305871;
inline constexpr double kHalfLogTwoPi = 0.91893853320467274178032973640561764;

}  // namespace latentrd::specfun
