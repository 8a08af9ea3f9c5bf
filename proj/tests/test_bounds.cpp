#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "latentrd/bounds.hpp"
#include "latentrd/errors.hpp"
#include "latentrd/specfun.hpp"
#include "oracle_util.hpp"

namespace {

using namespace latentrd;
using namespace latentrd::bounds;
using latentrd::testing::Big;
using latentrd::testing::to_double;

// Constants with C = C0 / c1^2 equal to `target` (C0 = 1).
BoundConstants with_C(double target) {
  BoundConstants k;
  k.C0 = 1.0;
  k.c1 = std::sqrt(1.0 / target);
  return k;
}

TEST(GaussianMatrixRd, Examples) {
  EXPECT_NEAR(gaussian_matrix_rd(4, 2, 1.0).value_nats, 4.0 * std::log(4.0), 1e-12);
  EXPECT_NEAR(gaussian_matrix_rd(4, 2, 1.0).value_nats, 5.5452, 1e-4);
  const auto at_n = gaussian_matrix_rd(4, 2, 4.0);
  EXPECT_EQ(at_n.value_nats, 0.0);
  EXPECT_TRUE(at_n.clamped);
  EXPECT_NEAR(gaussian_matrix_rd(1, 1, 0.1).value_nats, 0.5 * std::log(10.0), 1e-14);
  EXPECT_THROW(gaussian_matrix_rd(1, 1, 0.0), DomainError);
}

TEST(GaussianMatrixRd, EqualsGaussianShannonBound) {
  for (int n : {1, 3, 10})
    for (int d : {1, 4, 20})
      for (double D : {1e-3, 0.1, 0.5}) {
        const double h = 0.5 * n * d * std::log(2.0 * std::numbers::pi * std::numbers::e / d);
        EXPECT_NEAR(gaussian_matrix_rd(n, d, D).value_nats, shannon_lower_bound(h, n * d, D), 1e-9);
      }
}

TEST(WishartEntropy, ClosedFormAgainstHighPrecision) {
  EXPECT_EQ(wishart_differential_entropy(1, 2), 1.0);
  for (auto [n, d] : {std::pair{1, 4}, {2, 5}, {3, 8}, {5, 5}, {10, 40}}) {
    const double want = to_double(latentrd::testing::big_wishart_entropy(n, d));
    EXPECT_NEAR(wishart_differential_entropy(n, d), want, 1e-10 * std::max(1.0, std::abs(want)));
  }
  EXPECT_THROW(wishart_differential_entropy(3, 2), DomainError);
}

TEST(ShannonLowerBoundGram, TermsZeroCrossingMonotone) {
  const auto r = shannon_lower_bound_gram(2, 4, 0.01);
  EXPECT_NEAR(r.value_nats, r.terms_sum(), 1e-12);
  const auto r1 = shannon_lower_bound_gram(1, 2, 0.1);
  const double dz = r1.find("zero_crossing_D");
  EXPECT_NEAR(dz, 2.0 / (4.0 * std::numbers::pi * std::numbers::e) * std::exp(4.0 * 1.0 / 2.0), 1e-12);
  EXPECT_NEAR(shannon_lower_bound_gram(1, 2, dz).value_nats, 0.0, 1e-12);
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 40; ++i) {
    const double D = std::pow(10.0, -8.0 + 7.0 * i / 40.0);
    const double v = shannon_lower_bound_gram(5, 9, D).value_nats;
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(SlbExpanded, IdentityAndHighPrecision) {
  for (int n = 1; n <= 5; ++n)
    for (int d : {n, n + 1, 2 * n + 3})
      for (double D : {1e-6, 1e-2, 0.3})
        EXPECT_NEAR(slb_expanded(n, d, D).value_nats, shannon_lower_bound_gram(n, d, D).value_nats, 1e-9);

  using boost::multiprecision::log;
  const Big D("0.01");
  const Big pi = latentrd::testing::big_pi();
  const Big e = boost::multiprecision::exp(Big(1));
  const Big want = Big(4) + Big(6) / 4 * log(1 / (pi * e * D * 4)) + latentrd::testing::big_mv_lgamma(2, Big(2)) -
                   Big(1) / 2 * latentrd::testing::big_mv_digamma(2, Big(2));
  EXPECT_NEAR(slb_expanded(2, 4, 0.01).value_nats, to_double(want), 1e-12);

  const auto edge = slb_expanded(3, 3, 0.001);
  EXPECT_TRUE(std::isfinite(edge.value_nats));
  EXPECT_EQ(edge.terms.size(), 4u);
  EXPECT_THROW(slb_expanded(4, 3, 0.1), DomainError);
}

TEST(SmallD, Examples) {
  const BoundConstants k;
  const auto r = theorem2_smalld_bound(1000, 10, 0.01, k);
  EXPECT_NEAR(r.find("simplified"), 1250.0 * std::log(100.0), 1e-9);
  EXPECT_NEAR(r.find("simplified"), 5756.5, 0.05);

  // D just below c* with d = c* n.
  const auto edge = theorem2_smalld_bound(1000, 10, 0.0099, k);
  EXPECT_GT(edge.find("simplified"), 0.0);
  EXPECT_TRUE(edge.validity[0].pass);
}

TEST(SmallD, ChainVersusSimplifiedCrossover) {
  // With C = sqrt(8D) the d^2 term vanishes; chain >= simplified iff D <= 1/16384.
  auto at = [](double D) { return theorem2_smalld_bound(100, 1, D, with_C(std::sqrt(8.0 * D))); };
  const auto r4 = at(1e-4);
  EXPECT_NEAR(r4.find("net_entropy_at_sqrt8D"), 0.0, 1e-12);
  EXPECT_NEAR(r4.value_nats, 50.0 * std::log(1.0 / (4.0 * std::sqrt(8e-4))), 1e-9);
  EXPECT_NEAR(r4.value_nats, 108.958, 1e-3);
  EXPECT_NEAR(r4.find("simplified"), 115.129, 1e-3);
  EXPECT_LT(r4.find("chain_minus_simplified"), 0.0);
  EXPECT_NEAR(at(1.0 / 16384.0).find("chain_minus_simplified"), 0.0, 1e-9);
  for (double D : {1e-5, 1e-7, 1e-10}) EXPECT_GT(at(D).find("chain_minus_simplified"), 0.0);
}

TEST(SmallD, ChainEqualsLemmaAtSqrt8D) {
  const BoundConstants k;
  for (int n : {100, 500, 2000})
    for (int d = 1; d <= k.c_star * n; ++d)
      for (double D : {1e-8, 1e-5, 1e-3}) {
        const double chain = theorem2_smalld_bound(n, d, D, k).value_nats;
        EXPECT_NEAR(chain, lemma33_bound(n, d, std::sqrt(8.0 * D), k).value_nats, 1e-9 * std::max(1.0, chain));
      }
}

TEST(Lemma33, Examples) {
  const auto r = lemma33_bound(10, 1, 0.1, with_C(1.0));
  EXPECT_NEAR(r.value_nats, 5.0 * std::log(2.5) - 0.5 * std::log(10.0), 1e-12);
  EXPECT_FALSE(lemma33_bound(10, 1, 0.3).usable());
  double prev = -std::numeric_limits<double>::infinity();
  for (int n = 5; n <= 200; n += 5) {
    const double v = lemma33_bound(n, 5, 0.01).value_nats;
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_TRUE(lemma33_bound(100, 3, 0.01).usable());
}

TEST(Covering, Examples) {
  EXPECT_NEAR(orthogonal_group_covering_log(2, 0.5, 4.0), 4.0 * std::log(2.0 * std::sqrt(2.0) / 0.5), 1e-12);
  EXPECT_NEAR(orthogonal_group_covering_log(5, std::sqrt(5.0), 1.0), 0.0, 1e-12);
  for (int d : {1, 2, 7})
    for (double eps : {1e-3, 0.1, 0.9})
      for (double C0 : {1.0, 4.0, 16.0})
        if (eps <= std::sqrt(static_cast<double>(d))) EXPECT_GE(orthogonal_group_covering_log(d, eps, C0), 0.0);
  EXPECT_THROW(orthogonal_group_covering_log(2, 1.5, 4.0), DomainError);
  EXPECT_THROW(orthogonal_group_covering_log(2, 0.5, 0.5), DomainError);
}

TEST(LargeD, Examples) {
  const auto r = theorem2_larged_bound(2, 4, 0.1);
  EXPECT_NEAR(r.find("rxl_sum_term"), std::log(2.0) + 0.5 * std::log(1.5), 1e-14);
  EXPECT_TRUE(theorem2_larged_bound(7, 7, 0.01).usable());
  const auto big = theorem2_larged_bound(50, 50, 1e-6);
  EXPECT_NEAR(big.find("leading"), 50.0 * 51.0 / 4.0 * std::log(1e6), 1e-9);
  EXPECT_NEAR(big.find("leading"), 8807.388, 1e-3);
  EXPECT_THROW(theorem2_larged_bound(5, 4, 0.1), DomainError);
}

TEST(LargeD, RemaindersCoverChain) {
  EXPECT_NEAR(larged_required_K(1, 1), 1.5, 1e-15);
  const BoundConstants k;
  for (int n = 2; n <= 50; ++n)
    for (int d = n; d <= 4 * n; ++d) {
      EXPECT_LE(larged_required_K(n, d), k.K);
      for (double D : {1e-6, 1e-2}) {
        const auto r = theorem2_larged_bound(n, d, D, k);
        EXPECT_GE(r.find("rxl_lower_step"), r.value_nats - 1e-9 * std::abs(r.value_nats));
        EXPECT_GE(r.find("slb"), r.find("rxl_lower_step") - 1e-9 * std::abs(r.find("slb")));
        EXPECT_LE(r.find("dimension_term"), 0.0);
        EXPECT_TRUE(r.usable());
      }
    }
}

TEST(MiddleD, Examples) {
  BoundConstants k;
  k.c_star = 0.5;
  const auto r = theorem2_middled_bound(100, 80, 1e-4, k);
  EXPECT_TRUE(std::isfinite(r.value_nats));
  EXPECT_GT(r.value_nats, 0.0);
  EXPECT_TRUE(r.usable());
  EXPECT_NEAR(r.find("reduction_factor"), 4.0, 1e-15);

  k.c_star = 1.0;
  EXPECT_NEAR(theorem2_middled_bound(10, 10, 1e-3, k).value_nats, theorem2_larged_bound(10, 10, 1e-3, k).value_nats,
              1e-12);
  EXPECT_THROW(theorem2_middled_bound(10, 11, 1e-3, k), DomainError);
}

TEST(Spherical, Examples) {
  const BoundConstants k;
  const auto a = spherical_bound(100, 50, 0.001, k);
  const auto b = spherical_bound(100, 7, 0.001, k);
  EXPECT_NEAR(a.find("saddle_point_penalty"), -50.0 * std::log(1.0 + 1.0 / 0.002), 1e-9);
  EXPECT_NEAR(a.find("saddle_point_penalty"), b.find("saddle_point_penalty"), 1e-12);
  EXPECT_NEAR(a.find("gaussian_invocation_at_28D"), k.c * 100 * 50 * std::log(1.0 / 0.028), 1e-9);
  EXPECT_NEAR(spherical_bound(10, 3, 1e12, k).find("saddle_point_penalty"), 0.0, 1e-10);
  EXPECT_FALSE(spherical_bound(10, 3, 0.2, k).usable());
}

TEST(AllBounds, NonIncreasingInD) {
  const BoundConstants k;
  auto check = [](auto eval) {
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 60; ++i) {
      const double D = std::pow(10.0, -8.0 + 7.0 * i / 60.0);
      const double v = eval(D);
      EXPECT_LE(v, prev + 1e-9 * std::abs(prev)) << "D=" << D;
      prev = v;
    }
  };
  check([&](double D) { return lemma33_bound(200, 2, D, k).value_nats; });
  check([&](double D) { return theorem2_smalld_bound(200, 2, D, k).value_nats; });
  check([&](double D) { return theorem2_larged_bound(6, 9, D, k).value_nats; });
  check([&](double D) { return theorem2_middled_bound(30, 10, D, k).value_nats; });
  check([&](double D) { return shannon_lower_bound_gram(6, 9, D).value_nats; });
  // The raw spherical value is monotone once c min(n,d) >= 1/2; below that it
  // is negative throughout and only its usable value is meaningful.
  check([&](double D) { return spherical_bound(40, 4, D, k).value_nats; });
  check([&](double D) { return spherical_bound(40, 1, D, k).usable_value(); });
  check([&](double D) { return entropy_chain(40, 4, 0.3, D, ObservationModel::Graph, k).find("rate_lower_bound"); });
}

TEST(EntropyCount, Examples) {
  EXPECT_NEAR(entropy_count_graph(3, 0.5), 3.0 * std::log(2.0), 1e-15);
  EXPECT_EQ(entropy_count_graph(10, 0.0), 0.0);
  EXPECT_NEAR(entropy_count_graph(1000, 0.1), 499500.0 * specfun::binary_entropy(0.1), 1e-6);
  EXPECT_EQ(entropy_count_completion(5, 0.0), 0.0);
  EXPECT_NEAR(entropy_count_completion(7, 1.0), 49.0 * std::log(2.0), 1e-13);
  EXPECT_NEAR(entropy_count_completion(100, 0.3), 1e4 * (specfun::binary_entropy(0.3) + 0.3 * std::log(2.0)), 1e-9);
  EXPECT_THROW(entropy_count_graph(1, 0.5), DomainError);
  EXPECT_THROW(entropy_count_graph(5, 1.5), DomainError);
}

TEST(Threshold, Examples) {
  EXPECT_NEAR(impossibility_threshold(1000, 0.5, 1.0, ObservationModel::Graph), 1000.0 * std::log(2.0), 1e-10);
  EXPECT_NEAR(impossibility_threshold(1000, 0.5, 1.0, ObservationModel::Graph), 693.1, 0.05);
  EXPECT_EQ(impossibility_threshold(50, 0.0, 0.3, ObservationModel::Graph), 0.0);
  EXPECT_EQ(impossibility_threshold(50, 0.0, 0.3, ObservationModel::Completion), 0.0);
  for (double p : {0.01, 0.2, 0.7})
    EXPECT_GE(impossibility_threshold(80, p, 0.2, ObservationModel::Completion),
              impossibility_threshold(80, p, 0.2, ObservationModel::Graph));
}

TEST(EntropyChain, ImpossibleAboveThreshold) {
  BoundConstants k;
  const int n = 200;
  const double p = 0.1;
  const double dstar = impossibility_threshold(n, p, k.c, ObservationModel::Graph);
  // With d above the threshold and D small enough, the rate bound exceeds H(A).
  const auto r = entropy_chain(n, static_cast<int>(std::ceil(2 * dstar)), p, std::exp(-1.0) * 0.1,
                               ObservationModel::Graph, k);
  EXPECT_NEAR(r.find("threshold_d"), dstar, 1e-12);
  EXPECT_NEAR(r.value_nats, entropy_count_graph(n, p), 1e-9);
  EXPECT_EQ(r.find("margin") > 0.0, r.usable());
}

TEST(Applicable, RegimeDispatch) {
  const BoundConstants k;
  auto names = [&](int n, int d, bool sph) {
    std::vector<std::string> out;
    for (const auto& r : applicable_bounds(n, d, 1e-4, sph, -1.0, k)) out.push_back(r.bound_name);
    return out;
  };
  EXPECT_EQ(names(100, 1000, false), (std::vector<std::string>{"theorem2_larged_bound", "shannon_lower_bound_gram"}));
  EXPECT_EQ(names(1000, 5, false), (std::vector<std::string>{"theorem2_smalld_bound"}));
  EXPECT_EQ(names(100, 50, false), (std::vector<std::string>{"theorem2_middled_bound"}));
  EXPECT_EQ(names(100, 50, true), (std::vector<std::string>{"spherical_bound"}));
  const auto with_p = applicable_bounds(100, 1000, 1e-4, false, 0.2, k);
  EXPECT_EQ(with_p.back().regime, Regime::EntropyCount);
  EXPECT_GT(tightest_lower_bound(with_p), 0.0);
}

TEST(Constants, Validation) {
  BoundConstants k;
  EXPECT_NEAR(k.C(), 64.0, 1e-15);
  k.C0 = 0.5;
  EXPECT_THROW(k.validate(), DomainError);
  k = {};
  k.K = -1.0;
  EXPECT_THROW(theorem2_larged_bound(3, 3, 0.1, k), DomainError);
}

}  // namespace
