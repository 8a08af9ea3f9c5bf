#include "latentrd/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "latentrd/errors.hpp"

namespace latentrd::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kShiftTarget = 10.0;

// B_{2k} / (2k (2k-1)) for k = 1..7, the Stirling series coefficients.
constexpr std::array<double, 7> kStirling = {
    1.0 / 12.0,         -1.0 / 360.0,       1.0 / 1260.0, -1.0 / 1680.0,
    1.0 / 1188.0,       -691.0 / 360360.0,  1.0 / 156.0,
};
// |B_16| / (16 * 15): first omitted Stirling coefficient.
constexpr double kStirlingNext = 3617.0 / 122400.0;

// B_{2k} / (2k) for k = 1..7, the digamma asymptotic coefficients.
constexpr std::array<double, 7> kDigamma = {
    1.0 / 12.0,  -1.0 / 120.0,      1.0 / 252.0, -1.0 / 240.0,
    1.0 / 132.0, -691.0 / 32760.0,  1.0 / 12.0,
};
constexpr double kDigammaNext = 3617.0 / 8160.0;

void require_positive(double x, const char* name) {
  if (!std::isfinite(x) || x <= 0.0)
    throw DomainError(std::string(name) + ": argument must be finite and > 0, got " +
                      std::to_string(x));
}

void require_multivariate(int n, double a, const char* name) {
  if (n < 1) throw DomainError(std::string(name) + ": n must be >= 1");
  if (!std::isfinite(a) || a <= 0.5 * (n - 1))
    throw DomainError(std::string(name) + ": requires a > (n-1)/2 (pole), got n=" +
                      std::to_string(n) + " a=" + std::to_string(a));
}

}  // namespace

SpecFunResult log_gamma_result(double x) {
  require_positive(x, "log_gamma");
  // Exact zeros of log Gamma.
  if (x == 1.0 || x == 2.0) return {0.0, 0.0};

  double shift_log = 0.0;
  double shift_err = 0.0;
  double y = x;
  if (y < kShiftTarget) {
    // log Gamma(x) = log Gamma(x+k) - log(x (x+1) ... (x+k-1))
    double prod = 1.0;
    while (y < kShiftTarget) {
      prod *= y;
      y += 1.0;
      shift_err += kEps;
    }
    shift_log = std::log(prod);
    shift_err = (shift_err + kEps) * (1.0 + std::abs(shift_log));
  }

  const double inv = 1.0 / y;
  const double inv2 = inv * inv;
  double series = 0.0;
  double power = inv;
  for (double c : kStirling) {
    series += c * power;
    power *= inv2;
  }
  const double log_y = std::log(y);
  const double head = (y - 0.5) * log_y - y + kHalfLogTwoPi;
  const double value = head + series - shift_log;
  const double rounding = 4.0 * kEps * (std::abs((y - 0.5) * log_y) + y + std::abs(value));
  return {value, kStirlingNext * power + rounding + shift_err};
}

double log_gamma(double x) { return log_gamma_result(x).value; }

SpecFunResult digamma_result(double x) {
  require_positive(x, "digamma");
  double acc = 0.0;
  double acc_err = 0.0;
  double y = x;
  while (y < kShiftTarget) {
    acc -= 1.0 / y;
    acc_err += kEps / y;
    y += 1.0;
  }
  const double inv2 = 1.0 / (y * y);
  double series = 0.0;
  double power = inv2;
  for (double c : kDigamma) {
    series += c * power;
    power *= inv2;
  }
  const double value = std::log(y) - 0.5 / y - series + acc;
  const double rounding = 4.0 * kEps * (std::abs(std::log(y)) + std::abs(acc) + std::abs(value));
  return {value, kDigammaNext * power + rounding + 2.0 * acc_err};
}

double digamma(double x) { return digamma_result(x).value; }

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw DomainError("binary_entropy: p must lie in [0, 1], got " + std::to_string(p));
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

SpecFunResult multivariate_log_gamma_result(int n, double a) {
  require_multivariate(n, a, "multivariate_log_gamma");
  SpecFunResult out{0.25 * n * (n - 1) * kLogPi, 0.0};
  out.abs_error_bound = kEps * std::abs(out.value);
  for (int i = 1; i <= n; ++i) {
    const auto term = log_gamma_result(a + 0.5 * (1 - i));
    out.value += term.value;
    out.abs_error_bound += term.abs_error_bound + kEps * std::abs(out.value);
  }
  return out;
}

double multivariate_log_gamma(int n, double a) { return multivariate_log_gamma_result(n, a).value; }

SpecFunResult multivariate_digamma_result(int n, double a) {
  require_multivariate(n, a, "multivariate_digamma");
  SpecFunResult out;
  for (int i = 1; i <= n; ++i) {
    const auto term = digamma_result(a + 0.5 * (1 - i));
    out.value += term.value;
    out.abs_error_bound += term.abs_error_bound + kEps * std::abs(out.value);
  }
  return out;
}

double multivariate_digamma(int n, double a) { return multivariate_digamma_result(n, a).value; }

}  // namespace latentrd::specfun
