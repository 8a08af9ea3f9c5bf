#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "latentrd/errors.hpp"
#include "latentrd/sampling.hpp"
#include "oracle_util.hpp"
#include "stat_util.hpp"

namespace {

using namespace latentrd;
using latentrd::testing::ks_two_sample_p;
using latentrd::testing::mean_se;

TEST(SampleLatents, SphereRowsAreUnit) {
  const auto z = sample_latents({50, 7, Prior::SphereUniform, 3});
  EXPECT_LT(z.max_row_norm_deviation(), 1e-12);
  const auto g = sample_gram({50, 7, Prior::SphereUniform, 3});
  for (int i = 0; i < 50; ++i) EXPECT_NEAR(g.entries()(i, i), 1.0, 1e-12);
}

TEST(SampleLatents, GaussianNormMean) {
  const int n = 2000, d = 50;
  const auto z = sample_latents({n, d, Prior::GaussianIsotropic, 4});
  const double mean = z.entries().rowwise().squaredNorm().mean();
  EXPECT_NEAR(mean, 1.0, 3.0 * std::sqrt(2.0 / d) / std::sqrt(static_cast<double>(n)));
}

TEST(SampleLatents, Deterministic) {
  const LatentConfig cfg{30, 4, Prior::GaussianIsotropic, 99};
  EXPECT_EQ(sample_latents(cfg).entries(), sample_latents(cfg).entries());
  EXPECT_NE(sample_latents(cfg, 0).entries(), sample_latents(cfg, 1).entries());
  LatentConfig other = cfg;
  other.seed = 100;
  EXPECT_NE(sample_latents(cfg).entries(), sample_latents(other).entries());
}

TEST(SampleLatents, Validation) {
  EXPECT_THROW(sample_latents({0, 3, Prior::GaussianIsotropic, 0}), DomainError);
  EXPECT_THROW(sample_latents({3, 0, Prior::SphereUniform, 0}), DomainError);
  EXPECT_EQ(parse_prior("sphere"), Prior::SphereUniform);
  EXPECT_EQ(parse_prior("gaussian"), Prior::GaussianIsotropic);
  EXPECT_THROW(parse_prior("cauchy"), DomainError);
}

TEST(SampleGram, FootnoteMoments) {
  const int d = 6;
  std::vector<double> off, diag;
  for (int s = 0; s < 4000; ++s) {
    const auto x = sample_gram({4, d, Prior::GaussianIsotropic, 7}, static_cast<std::uint64_t>(s)).entries();
    off.push_back(x(0, 1) * x(0, 1));
    off.push_back(x(2, 3) * x(2, 3));
    diag.push_back(std::pow(x(0, 0) - 1.0, 2));
    diag.push_back(std::pow(x(3, 3) - 1.0, 2));
  }
  const auto a = mean_se(off), b = mean_se(diag);
  EXPECT_NEAR(a.mean, 1.0 / d, 5.0 * a.se);
  EXPECT_NEAR(b.mean, 2.0 / d, 5.0 * b.se);
}

TEST(SampleGram, ColumnSumConsistency) {
  const auto z = sample_latents({9, 5, Prior::GaussianIsotropic, 8});
  const auto x = GramMatrix::from_latents(z).entries();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(9, 9);
  for (int k = 0; k < 5; ++k) s += z.entries().col(k) * z.entries().col(k).transpose();
  EXPECT_LT((x - s).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SampleLatents, OrthogonalInvariance) {
  const int n = 4000, d = 5;
  const auto z1 = sample_latents({n, d, Prior::GaussianIsotropic, 10}).entries();
  const auto z2 = sample_latents({n, d, Prior::GaussianIsotropic, 11}).entries();
  Rng rng(12);
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = g(rng);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ();
  const Eigen::MatrixXd z2q = z2 * q;
  std::vector<double> na, nb, ia, ib;
  for (int i = 0; i + 1 < n; i += 2) {
    na.push_back(z1.row(i).norm());
    nb.push_back(z2q.row(i).norm());
    ia.push_back(z1.row(i).dot(z1.row(i + 1)));
    ib.push_back(z2q.row(i).dot(z2q.row(i + 1)));
  }
  // Coordinates pick up any failure of isotropy.
  std::vector<double> ca, cb;
  for (int i = 0; i < n; ++i) {
    ca.push_back(z1(i, 0));
    cb.push_back(z2q(i, 0));
  }
  EXPECT_GT(ks_two_sample_p(na, nb), 0.001);
  EXPECT_GT(ks_two_sample_p(ia, ib), 0.001);
  EXPECT_GT(ks_two_sample_p(ca, cb), 0.001);
}

TEST(PairInnerProduct, MatchesDirectSampling) {
  for (auto prior : {Prior::GaussianIsotropic, Prior::SphereUniform})
    for (int d : {1, 2, 3, 10}) {
      Rng rng(20 + d);
      std::vector<double> fast, direct;
      for (int s = 0; s < 20000; ++s) fast.push_back(sample_pair_inner_product(d, prior, rng));
      const auto z = sample_latents({40000, d, prior, static_cast<std::uint64_t>(30 + d)}).entries();
      for (int i = 0; i < 40000; i += 2) direct.push_back(z.row(i).dot(z.row(i + 1)));
      EXPECT_GT(ks_two_sample_p(fast, direct), 0.001) << "d=" << d;
    }
}

TEST(BetaDecompose, ReconstructionAndNoise) {
  const auto z = sample_latents({25, 6, Prior::GaussianIsotropic, 40});
  const auto b0 = beta_decompose(z, 0.0, 1);
  EXPECT_EQ(b0.perturbed_norms, b0.norms);
  EXPECT_LT(b0.directions.max_row_norm_deviation(), 1e-12);
  EXPECT_LT((b0.reconstruct_latents() - z.entries()).cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::MatrixXd x = z.entries() * z.entries().transpose();
  EXPECT_LT((b0.rescaled_gram() - x).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(beta_decompose(z, -0.1, 1), DomainError);
  Eigen::MatrixXd zero = z.entries();
  zero.row(3).setZero();
  EXPECT_THROW(beta_decompose(LatentMatrix(zero), 0.1, 1), DegenerateInputError);
}

TEST(BetaDecompose, PerturbedNormMoment) {
  const double delta = 0.3;
  std::vector<double> v;
  for (int s = 0; s < 2000; ++s) {
    const auto z = sample_latents({20, 8, Prior::GaussianIsotropic, 50}, static_cast<std::uint64_t>(s));
    const auto b = beta_decompose(z, delta, static_cast<std::uint64_t>(s));
    for (int i = 0; i < 20; ++i) v.push_back(b.perturbed_norms(i) * b.perturbed_norms(i));
  }
  const auto m = mean_se(v);
  EXPECT_NEAR(m.mean, 1.0 + delta * delta, 5.0 * m.se);
}

TEST(BetaDecompose, ChiVarianceBound) {
  using latentrd::testing::Big;
  for (int d : {1, 2, 10, 50, 1000}) {
    const Big two_ratio = 2 * boost::multiprecision::exp(2 * (latentrd::testing::big_lgamma(Big(d + 1) / 2) -
                                                            latentrd::testing::big_lgamma(Big(d) / 2)));
    const double want = latentrd::testing::to_double((Big(d) - two_ratio) / d);
    EXPECT_NEAR(chi_norm_variance(d), want, 1e-12);
    EXPECT_LE(chi_norm_variance(d), 0.5 / d);
  }
  // Monte Carlo estimate at d = 10.
  std::vector<double> norms;
  const auto z = sample_latents({200000, 10, Prior::GaussianIsotropic, 60}).entries();
  for (int i = 0; i < z.rows(); ++i) norms.push_back(z.row(i).norm());
  const auto m = mean_se(norms);
  const double var = m.se * m.se * norms.size();
  EXPECT_LE(var, 0.05);
  EXPECT_NEAR(var, chi_norm_variance(10), 0.002);
  EXPECT_DOUBLE_EQ(default_beta_noise(0.04, 4), 0.1);
}

}  // namespace
