#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "latentrd/errors.hpp"
#include "latentrd/rgg.hpp"
#include "latentrd/specfun.hpp"

namespace {

using namespace latentrd;
using namespace latentrd::rgg;

TEST(Adjacency, Basics) {
  Adjacency a(70);
  a.set(3, 65);
  EXPECT_TRUE(a(3, 65));
  EXPECT_TRUE(a(65, 3));
  EXPECT_EQ(a.edge_count(), 1);
  a.set(65, 3, false);
  EXPECT_EQ(a.edge_count(), 0);
  EXPECT_THROW(a.set(4, 4), DomainError);
  EXPECT_THROW(Adjacency(0), DomainError);
  EXPECT_THROW(Adjacency(5000), DomainError);
}

TEST(Threshold, KnownQuantiles) {
  // Symmetric law: the median inner product is 0.
  EXPECT_NEAR(calibrate_threshold(5, 0.5, Prior::GaussianIsotropic, 1000000, 1), 0.0, 4e-3);
  // On S^2 the inner product is uniform on [-1, 1].
  EXPECT_NEAR(calibrate_threshold(3, 0.25, Prior::SphereUniform, 1000000, 2), 0.5, 4e-3);
  EXPECT_EQ(calibrate_threshold(4, 0.1, Prior::SphereUniform, 100000, 3, 1),
            calibrate_threshold(4, 0.1, Prior::SphereUniform, 100000, 3, 4));
  EXPECT_THROW(calibrate_threshold(3, 0.0, Prior::SphereUniform, 10, 1), DomainError);
  EXPECT_THROW(calibrate_threshold(3, 1.2, Prior::SphereUniform, 10, 1), DomainError);
}

TEST(Graph, ExtremeThresholds) {
  const LatentConfig cfg{30, 4, Prior::GaussianIsotropic, 1};
  const auto full = generate_graph(cfg, -std::numeric_limits<double>::infinity());
  const auto empty = generate_graph(cfg, std::numeric_limits<double>::infinity());
  EXPECT_EQ(full.adjacency.edge_count(), 30 * 29 / 2);
  EXPECT_EQ(empty.adjacency.edge_count(), 0);
  const auto m = full.adjacency.dense();
  EXPECT_EQ(m, m.transpose());
  EXPECT_EQ(m.diagonal().sum(), 0.0);
  EXPECT_EQ(generate_graph({1, 3, Prior::SphereUniform, 1}, 0.0).realized_density, 0.0);
}

TEST(Graph, DensityNearTarget) {
  const int n = 400;
  for (double p : {0.05, 0.5}) {
    const double tau = calibrate_threshold(10, p, Prior::GaussianIsotropic, 1000000, 5);
    const auto g = generate_graph({n, 10, Prior::GaussianIsotropic, 6}, tau, p);
    const double pairs = n * (n - 1) / 2.0;
    // Edges share vertices, so allow a generous multiple of the Bernoulli spread.
    EXPECT_NEAR(g.realized_density, p, 6.0 * std::sqrt(p * (1 - p) / pairs) + 0.01);
    EXPECT_DOUBLE_EQ(g.realized_density, g.adjacency.edge_count() / pairs);
  }
}

TEST(CodeLength, MatchesEntropyCount) {
  const int n = 300;
  const double tau = calibrate_threshold(8, 0.2, Prior::GaussianIsotropic, 200000, 7);
  const auto g = generate_graph({n, 8, Prior::GaussianIsotropic, 8}, tau, 0.2);
  const double pairs = n * (n - 1) / 2.0;
  const double phat = g.adjacency.edge_count() / pairs;
  const double want = pairs * specfun::binary_entropy(phat) / std::log(2.0);
  EXPECT_NEAR(bernoulli_code_length_bits(g.adjacency, phat), want, 0.01 * want);
  EXPECT_GE(bernoulli_code_length_bits(g.adjacency, 0.5), bernoulli_code_length_bits(g.adjacency, phat));
}

struct Fixture {
  LatentConfig cfg;
  double p, tau;
  SpectralCalibration cal;
  GraphSample graph;
};

Fixture make(int n, int d, double p, Prior prior) {
  Fixture f{{n, d, prior, 21}, p, calibrate_threshold(d, p, prior, 200000, 22), {}, {}};
  f.cal = calibrate_spectral(f.cfg, p, f.tau, std::min(d + 1, n));
  LatentConfig fresh = f.cfg;
  fresh.seed = 23;
  f.graph = generate_graph(fresh, f.tau, p);
  return f;
}

TEST(Spectral, PsdSymmetricAndBeatsTrivial) {
  for (auto prior : {Prior::GaussianIsotropic, Prior::SphereUniform}) {
    const auto f = make(200, 3, 0.5, prior);
    const auto xhat = spectral_estimate(f.graph, 3, 0.5, f.cal);
    const auto& e = xhat.entries();
    EXPECT_LT((e - e.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GE(xhat.min_eigenvalue(), -1e-9);
    const Eigen::MatrixXd x = f.graph.latents.entries() * f.graph.latents.entries().transpose();
    const double spectral = gram_loss(x, e, 3);
    const double trivial = gram_loss(x, Eigen::MatrixXd::Identity(200, 200), 3);
    EXPECT_LT(spectral, 0.7 * trivial);
    if (prior == Prior::SphereUniform) EXPECT_LT((e.diagonal().array() - 1.0).abs().maxCoeff(), 1e-12);
  }
}

TEST(Spectral, PermutationInvariantLoss) {
  const auto f = make(120, 4, 0.3, Prior::GaussianIsotropic);
  const auto xhat = spectral_estimate(f.graph, 4, 0.3, f.cal).entries();
  const Eigen::MatrixXd x = f.graph.latents.entries() * f.graph.latents.entries().transpose();

  std::vector<int> perm(120);
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  std::swap(perm[3], perm[77]);
  GraphSample pg = f.graph;
  pg.adjacency = Adjacency(120);
  Eigen::MatrixXd pz(120, 4);
  for (int i = 0; i < 120; ++i) {
    pz.row(i) = f.graph.latents.entries().row(perm[i]);
    for (int j = 0; j < i; ++j)
      if (f.graph.adjacency(perm[i], perm[j])) pg.adjacency.set(i, j);
  }
  pg.latents = LatentMatrix(pz);
  const auto pxhat = spectral_estimate(pg, 4, 0.3, f.cal).entries();
  const Eigen::MatrixXd px = pz * pz.transpose();
  EXPECT_NEAR(gram_loss(px, pxhat, 4), gram_loss(x, xhat, 4), 1e-9);
}

TEST(Spectral, Errors) {
  const auto f = make(20, 3, 0.5, Prior::GaussianIsotropic);
  EXPECT_THROW(spectral_estimate(f.graph, 21, 0.5, f.cal), DomainError);
}

TEST(Sweep, DeterministicTrivialNearOne) {
  SweepOptions opts;
  opts.trials = 6;
  opts.seed = 9;
  opts.calibration_samples = 100000;
  const auto grid = make_grid({60}, {2, 30}, {0.3});
  const auto a = phase_sweep(grid, opts);
  opts.threads = 3;
  const auto b = phase_sweep(grid, opts);
  ASSERT_EQ(a.records.size(), 2u * 2u * 6u);
  ASSERT_EQ(a.summary.size(), 2u);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].loss, b.records[i].loss);
    EXPECT_EQ(a.records[i].runtime_s, 0.0);
    EXPECT_EQ(a.records[i].estimator, i % 2 == 0 ? "spectral" : "trivial");
  }
  for (const auto& s : a.summary) {
    EXPECT_NEAR(s.trivial_mean, 1.0, 5.0 * s.trivial_stderr + 0.05);
    EXPECT_NEAR(s.abscissa, s.point.d / (60.0 * specfun::binary_entropy(0.3)), 1e-12);
  }
  EXPECT_EQ(default_grid().size(), 10u);
  EXPECT_THROW(phase_sweep({}, opts), DomainError);
  opts.trials = 0;
  EXPECT_THROW(phase_sweep(grid, opts), DomainError);
}

}  // namespace
