#include "latentrd/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "latentrd/errors.hpp"
#include "latentrd/specfun.hpp"

namespace latentrd::bounds {
namespace {

using std::numbers::e;
using std::numbers::pi;

void require_dims(int n, int d, const char* what) {
  if (n < 1 || d < 1)
    throw DomainError(std::string(what) + ": n and d must be >= 1, got n=" + std::to_string(n) +
                      " d=" + std::to_string(d));
}

void require_distortion(double distortion, const char* what) {
  if (!(distortion > 0.0) || !std::isfinite(distortion))
    throw DomainError(std::string(what) + ": distortion D must be finite and > 0");
}

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw DomainError(std::string(what) + ": p must lie in [0, 1]");
}

double sum_terms(const std::vector<Term>& terms) {
  double s = 0.0;
  for (const auto& t : terms) s += t.value_nats;
  return s;
}

void finish(BoundReport& r) { r.value_nats = sum_terms(r.terms); }

void add_constants(BoundReport& r, const BoundConstants& k) {
  r.inputs.emplace_back("c_star", k.c_star);
  r.inputs.emplace_back("C0", k.C0);
  r.inputs.emplace_back("c1", k.c1);
  r.inputs.emplace_back("C", k.C());
  r.inputs.emplace_back("K", k.K);
  r.inputs.emplace_back("c", k.c);
}

// n(n+1)/4, the half-dimension of the symmetric-matrix coordinates over two.
double quarter_sym_dim(int n) { return 0.25 * n * (n + 1.0); }

// sum_{i=1..n} ((n+1-i)/2) log((d+1-i)/2)
double rxl_sum(int n, int d) {
  double s = 0.0;
  for (int i = 1; i <= n; ++i) s += 0.5 * (n + 1 - i) * std::log(0.5 * (d + 1 - i));
  return s;
}

// sum_{i=1..n} ((n+1-i)/2) log((d+1-i)/(2d)); always <= 0 and increasing in d.
double dimension_term(int n, int d) {
  double s = 0.0;
  for (int i = 1; i <= n; ++i)
    s += 0.5 * (n + 1 - i) * std::log((d + 1.0 - i) / (2.0 * d));
  return s;
}

// Slack lost by the Stirling inequality log Gamma(x+1/2) >= x log(x+1/2) - x - 1/2 + log(2 pi)/2
// summed over the n factors of Gamma_n, after the pi e terms cancel: n (1 - log 2) / 2.
double stirling_remainder(int n) { return 0.5 * n * (1.0 - std::numbers::ln2); }

// psi(x) > log x - 1/x is only needed when the coefficient (d-n-1)/2 is
// negative, i.e. d = n; the loss is sum_i 1/(d+1-i) = H_n.
double digamma_remainder(int n, int d) {
  if (d - n - 1 >= 0) return 0.0;
  double h = 0.0;
  for (int i = 1; i <= n; ++i) h += 1.0 / (d + 1 - i);
  return h;
}

}  // namespace

std::string_view to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::SmallD: return "SmallD";
    case Regime::LargeD: return "LargeD";
    case Regime::MiddleD: return "MiddleD";
    case Regime::Spherical: return "Spherical";
    case Regime::EntropyCount: return "EntropyCount";
  }
  return "?";
}

std::string_view to_string(ObservationModel model) noexcept {
  return model == ObservationModel::Graph ? "graph" : "completion";
}

void BoundConstants::validate() const {
  for (double v : {c_star, C0, c1, K, c})
    if (!(v > 0.0) || !std::isfinite(v))
      throw DomainError("BoundConstants: constants must be finite and > 0");
  if (C0 < 1.0) throw DomainError("BoundConstants: C0 must be >= 1");
}

bool BoundReport::usable() const noexcept {
  return std::all_of(validity.begin(), validity.end(), [](const auto& v) { return v.pass; });
}

double BoundReport::usable_value() const noexcept { return std::max(0.0, value_nats); }

double BoundReport::terms_sum() const noexcept { return sum_terms(terms); }

double BoundReport::find(std::string_view label) const {
  for (const auto* list : {&terms, &aux})
    for (const auto& t : *list)
      if (t.label == label) return t.value_nats;
  throw LookupError("BoundReport '" + bound_name + "' has no entry '" + std::string(label) + "'");
}

ClampedValue gaussian_matrix_rd(int n, int d, double distortion) {
  require_dims(n, d, "gaussian_matrix_rd");
  require_distortion(distortion, "gaussian_matrix_rd");
  if (distortion >= n) return {0.0, true};
  return {0.5 * n * d * std::log(n / distortion), false};
}

double shannon_lower_bound(double differential_entropy, double dims, double distortion) {
  require_distortion(distortion, "shannon_lower_bound");
  if (!(dims > 0.0)) throw DomainError("shannon_lower_bound: dims must be > 0");
  return differential_entropy - 0.5 * dims * std::log(2.0 * pi * e * distortion / dims);
}

double wishart_differential_entropy(int n, int d) {
  require_dims(n, d, "wishart_differential_entropy");
  if (d < n) throw DomainError("wishart_differential_entropy: requires d >= n (no density)");
  const double a = 0.5 * d;
  return 0.5 * n * (n + 1.0) * std::log(2.0 / d) + specfun::multivariate_log_gamma(n, a) -
         0.5 * (d - n - 1.0) * specfun::multivariate_digamma(n, a) + 0.5 * n * d;
}

BoundReport shannon_lower_bound_gram(int n, int d, double distortion) {
  require_dims(n, d, "shannon_lower_bound_gram");
  require_distortion(distortion, "shannon_lower_bound_gram");
  BoundReport r;
  r.bound_name = "shannon_lower_bound_gram";
  r.regime = Regime::LargeD;
  r.inputs = {{"n", n}, {"d", d}, {"D", distortion}};
  const double h = wishart_differential_entropy(n, d);
  r.terms = {{"wishart_entropy", h},
             {"noise_ball", -quarter_sym_dim(n) * std::log(4.0 * pi * e * distortion / d)}};
  r.aux = {{"zero_crossing_D", d / (4.0 * pi * e) * std::exp(h / quarter_sym_dim(n))}};
  r.validity = {{"d_ge_n", d >= n}};
  finish(r);
  return r;
}

BoundReport slb_expanded(int n, int d, double distortion) {
  require_dims(n, d, "slb_expanded");
  require_distortion(distortion, "slb_expanded");
  if (d < n) throw DomainError("slb_expanded: requires d >= n");
  BoundReport r;
  r.bound_name = "slb_expanded";
  r.regime = Regime::LargeD;
  r.inputs = {{"n", n}, {"d", d}, {"D", distortion}};
  const double a = 0.5 * d;
  r.terms = {
      {"half_nd", 0.5 * n * d},
      {"log_inverse_pi_e_D_d", quarter_sym_dim(n) * std::log(1.0 / (pi * e * distortion * d))},
      {"log_multivariate_gamma", specfun::multivariate_log_gamma(n, a)},
      {"multivariate_digamma", -0.5 * (d - n - 1.0) * specfun::multivariate_digamma(n, a)},
  };
  r.validity = {{"d_ge_n", true}};
  finish(r);
  return r;
}

double orthogonal_group_covering_log(int d, double eps, double C0) {
  if (d < 1) throw DomainError("orthogonal_group_covering_log: d must be >= 1");
  if (!(C0 >= 1.0)) throw DomainError("orthogonal_group_covering_log: C0 must be >= 1");
  if (!(eps > 0.0) || eps > std::sqrt(static_cast<double>(d)))
    throw DomainError("orthogonal_group_covering_log: eps must lie in (0, sqrt(d)]");
  return static_cast<double>(d) * d * std::log(std::sqrt(C0 * d) / eps);
}

double expected_spectral_norm_sq_bound(int n, int d) {
  require_dims(n, d, "expected_spectral_norm_sq_bound");
  const double s = std::sqrt(static_cast<double>(n)) + std::sqrt(static_cast<double>(d));
  // E||G|| <= sqrt n + sqrt d and Var ||G|| <= 1 for a standard Gaussian G.
  return (s * s + 1.0) / d;
}

BoundReport lemma33_bound(int n, int d, double distortion, const BoundConstants& k) {
  require_dims(n, d, "lemma33_bound");
  require_distortion(distortion, "lemma33_bound");
  k.validate();
  BoundReport r;
  r.bound_name = "lemma33_bound";
  r.regime = Regime::SmallD;
  r.inputs = {{"n", n}, {"d", d}, {"D", distortion}};
  add_constants(r, k);
  const double nd = static_cast<double>(n) * d;
  const double dd = static_cast<double>(d) * d;
  r.terms = {{"gaussian_rd", 0.5 * nd * std::log(1.0 / (4.0 * distortion))},
             {"net_entropy", -0.5 * dd * std::log(k.C() / distortion)}};

  const double eps_sq =
      std::min(n * distortion / expected_spectral_norm_sq_bound(n, d), static_cast<double>(d));
  const double net_exact = orthogonal_group_covering_log(d, std::sqrt(eps_sq), k.C0);
  r.aux = {{"eps_sq", eps_sq},
           {"net_entropy_at_eps", net_exact},
           {"net_entropy_bound", 0.5 * dd * std::log(k.C() / distortion)}};
  r.validity = {{"D_in_(0,1/4)", distortion < 0.25},
                {"d_le_n", d <= n},
                {"net_entropy_covered", net_exact <= 0.5 * dd * std::log(k.C() / distortion)}};
  finish(r);
  return r;
}

BoundReport theorem2_smalld_bound(int n, int d, double distortion, const BoundConstants& k) {
  require_dims(n, d, "theorem2_smalld_bound");
  require_distortion(distortion, "theorem2_smalld_bound");
  k.validate();
  BoundReport r;
  r.bound_name = "theorem2_smalld_bound";
  r.regime = Regime::SmallD;
  r.inputs = {{"n", n}, {"d", d}, {"D", distortion}};
  add_constants(r, k);
  const double nd = static_cast<double>(n) * d;
  const double dd = static_cast<double>(d) * d;
  const double root = std::sqrt(8.0 * distortion);
  r.terms = {{"gaussian_rd_at_sqrt8D", 0.5 * nd * std::log(1.0 / (4.0 * root))},
             {"net_entropy_at_sqrt8D", -0.5 * dd * std::log(k.C() / root)}};
  finish(r);
  const double simplified = nd / 8.0 * std::log(1.0 / distortion);
  r.aux = {{"sqrt8D", root},
           {"simplified", simplified},
           {"chain_minus_simplified", r.value_nats - simplified}};
  r.validity = {{"d_le_cstar_n", d <= k.c_star * n},
                {"D_in_(0,c_star)", distortion < k.c_star},
                {"sqrt8D_lt_1/4", root < 0.25}};
  return r;
}

double larged_required_K(int n, int d) {
  require_dims(n, d, "larged_required_K");
  if (d < n) throw DomainError("larged_required_K: requires d >= n");
  const double slack = -dimension_term(n, d) + stirling_remainder(n) + digamma_remainder(n, d);
  return slack / (static_cast<double>(n) * n);
}

BoundReport theorem2_larged_bound(int n, int d, double distortion, const BoundConstants& k) {
  require_dims(n, d, "theorem2_larged_bound");
  require_distortion(distortion, "theorem2_larged_bound");
  if (d < n) throw DomainError("theorem2_larged_bound: regime error, requires d >= n");
  k.validate();
  BoundReport r;
  r.bound_name = "theorem2_larged_bound";
  r.regime = Regime::LargeD;
  r.inputs = {{"n", n}, {"d", d}, {"D", distortion}};
  add_constants(r, k);
  const double nn = static_cast<double>(n) * n;
  r.terms = {{"leading", quarter_sym_dim(n) * std::log(1.0 / distortion)},
             {"quadratic_slack", -k.K * nn}};
  finish(r);

  const double log_term = quarter_sym_dim(n) * std::log(1.0 / (distortion * d));
  const double sum_term = rxl_sum(n, d);
  const double stirling = stirling_remainder(n);
  const double digamma = digamma_remainder(n, d);
  const double dim_term = dimension_term(n, d);
  const double case_bound = d >= 2 * n
                                ? quarter_sym_dim(n) * std::log((d + 1.0 - n) / (2.0 * d))
                                : dimension_term(n, n);
  const double required = larged_required_K(n, d);
  r.aux = {{"slb", shannon_lower_bound_gram(n, d, distortion).value_nats},
           {"rxl_log_term", log_term},
           {"rxl_sum_term", sum_term},
           {"stirling_remainder", -stirling},
           {"digamma_remainder", -digamma},
           {"rxl_lower_step", log_term + sum_term - stirling - digamma},
           {"dimension_term", dim_term},
           {"case_bound", case_bound},
           {"required_K", required}};
  r.validity = {{"d_ge_n", true}, {"K_covers_remainders", k.K >= required}};
  return r;
}

BoundReport theorem2_middled_bound(int n, int d, double distortion, const BoundConstants& k) {
  require_dims(n, d, "theorem2_middled_bound");
  require_distortion(distortion, "theorem2_middled_bound");
  k.validate();
  if (d > n) throw DomainError("theorem2_middled_bound: requires d <= n for the principal minor");
  const double factor = 1.0 / (k.c_star * k.c_star);
  const BoundReport minor = theorem2_larged_bound(d, d, distortion * factor, k);

  BoundReport r;
  r.bound_name = "theorem2_middled_bound";
  r.regime = Regime::MiddleD;
  r.inputs = {{"n", n}, {"d", d}, {"D", distortion}};
  add_constants(r, k);
  for (const auto& t : minor.terms) r.terms.push_back({"minor_" + t.label, t.value_nats});
  finish(r);
  const double nd = static_cast<double>(n) * d;
  r.aux = {{"reduction_factor", factor},
           {"minor_distortion", distortion * factor},
           {"weakened_form", k.c_star * nd / 4.0 * std::log(k.c_star * k.c_star / distortion) -
                                 k.K * nd}};
  for (const auto& t : minor.aux) r.aux.push_back({"minor_" + t.label, t.value_nats});
  r.validity = {{"cstar_n_lt_d", k.c_star * n < d},
                {"d_lt_n", d < n},
                {"D_lt_cstar_sq", distortion < k.c_star * k.c_star}};
  return r;
}

BoundReport spherical_bound(int n, int d, double distortion, const BoundConstants& k) {
  require_dims(n, d, "spherical_bound");
  require_distortion(distortion, "spherical_bound");
  k.validate();
  BoundReport r;
  r.bound_name = "spherical_bound";
  r.regime = Regime::Spherical;
  r.inputs = {{"n", n}, {"d", d}, {"D", distortion}};
  add_constants(r, k);
  const double m = std::min(n, d);
  const double delta_sq = distortion / d;
  r.terms = {{"gaussian_invocation_at_28D", k.c * n * m * std::log(1.0 / (28.0 * distortion))},
             {"saddle_point_penalty", -0.5 * n * std::log1p(1.0 / (2.0 * d * delta_sq))}};
  finish(r);
  r.aux = {{"delta_sq", delta_sq}, {"inflated_distortion", 28.0 * distortion}};
  r.validity = {{"D_in_(0,c)", distortion < k.c},
                {"inflated_D_in_(0,c)", 28.0 * distortion < k.c},
                {"delta_sq_lt_1", delta_sq < 1.0}};
  return r;
}

double entropy_count_graph(int n, double p) {
  if (n < 2) throw DomainError("entropy_count_graph: n must be >= 2");
  require_probability(p, "entropy_count_graph");
  return 0.5 * n * (n - 1.0) * specfun::binary_entropy(p);
}

double entropy_count_completion(int n, double p) {
  if (n < 1) throw DomainError("entropy_count_completion: n must be >= 1");
  require_probability(p, "entropy_count_completion");
  return static_cast<double>(n) * n * (specfun::binary_entropy(p) + p * std::numbers::ln2);
}

double impossibility_threshold(int n, double p, double c, ObservationModel model) {
  if (n < 1) throw DomainError("impossibility_threshold: n must be >= 1");
  require_probability(p, "impossibility_threshold");
  if (!(c > 0.0)) throw DomainError("impossibility_threshold: c must be > 0");
  const double h = specfun::binary_entropy(p);
  return model == ObservationModel::Graph ? c * n * h : c * n * (h + p);
}

BoundReport entropy_chain(int n, int d, double p, double distortion, ObservationModel model,
                          const BoundConstants& k) {
  require_dims(n, d, "entropy_chain");
  require_distortion(distortion, "entropy_chain");
  k.validate();
  BoundReport r;
  r.bound_name = model == ObservationModel::Graph ? "entropy_count_graph" : "entropy_count_completion";
  r.regime = Regime::EntropyCount;
  r.inputs = {{"n", n}, {"d", d}, {"D", distortion}, {"p", p}};
  add_constants(r, k);
  const double entropy =
      model == ObservationModel::Graph ? entropy_count_graph(n, p) : entropy_count_completion(n, p);
  r.terms = {{"observation_entropy", entropy}};
  finish(r);
  const double rate = k.c * n * std::min(n, d) * std::log(1.0 / distortion);
  r.aux = {{"rate_lower_bound", rate},
           {"margin", rate - entropy},
           {"threshold_d", impossibility_threshold(n, p, k.c, model)}};
  r.validity = {{"recovery_impossible_at_D", rate > entropy}};
  return r;
}

std::vector<BoundReport> applicable_bounds(int n, int d, double distortion, bool spherical,
                                           double p, const BoundConstants& k) {
  std::vector<BoundReport> out;
  if (spherical) {
    out.push_back(spherical_bound(n, d, distortion, k));
  } else if (d >= n) {
    out.push_back(theorem2_larged_bound(n, d, distortion, k));
    out.push_back(shannon_lower_bound_gram(n, d, distortion));
  } else if (d <= k.c_star * n) {
    out.push_back(theorem2_smalld_bound(n, d, distortion, k));
  } else {
    out.push_back(theorem2_middled_bound(n, d, distortion, k));
  }
  if (p >= 0.0 && n >= 2) out.push_back(entropy_chain(n, d, p, distortion, ObservationModel::Graph, k));
  return out;
}

double tightest_lower_bound(const std::vector<BoundReport>& reports) {
  double best = 0.0;
  for (const auto& r : reports)
    if (r.regime != Regime::EntropyCount && r.usable()) best = std::max(best, r.usable_value());
  return best;
}

}  // namespace latentrd::bounds
