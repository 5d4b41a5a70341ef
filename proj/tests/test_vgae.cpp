#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "godsplit/error.hpp"
#include "godsplit/semvec.hpp"
#include "godsplit/vgae.hpp"
#include "vgae_oracle.hpp"

using namespace godsplit;

namespace {

Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double lo = -1, double hi = 1) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(lo, hi);
  return m;
}

Eigen::MatrixXd random_graph(Rng& rng, Eigen::Index n, double p) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (rng.uniform() < p) a(i, j) = a(j, i) = 1;
  return a;
}

Eigen::MatrixXd permutation_matrix(const std::vector<int>& perm) {
  // (P M)[perm[i]] = M[i]
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(perm.size(), perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) p(perm[i], i) = 1;
  return p;
}

VgaeConfig small_config() {
  VgaeConfig c;
  c.hidden_dim = 5;
  c.latent_dim = 3;
  return c;
}

}  // namespace

TEST(NormalizeAdjacency, Examples) {
  EXPECT_TRUE(normalize_adjacency(Eigen::MatrixXd::Zero(3, 3)).isIdentity(0));
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, 1, 0;
  EXPECT_TRUE(normalize_adjacency(a).isApprox(Eigen::MatrixXd::Constant(2, 2, 0.5), 1e-15));
  Rng rng(1);
  const Eigen::MatrixXd n = normalize_adjacency(random_graph(rng, 7, 0.4));
  EXPECT_TRUE(n.isApprox(n.transpose(), 0));
}

TEST(NormalizeAdjacency, MatchesDefinition) {
  Rng rng(2);
  const Eigen::MatrixXd a = random_graph(rng, 9, 0.3);
  const Eigen::MatrixXd n = normalize_adjacency(a);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) {
      const double di = 1 + a.row(i).sum(), dj = 1 + a.row(j).sum();
      const double entry = (i == j ? 1.0 : a(i, j)) / std::sqrt(di * dj);
      EXPECT_NEAR(n(i, j), entry, 1e-15);
    }
}

TEST(Encode, ZeroFeaturesGiveZeroOutputs) {
  Rng rng(3);
  const auto weights = VgaeWeights::xavier(4, small_config(), rng);
  const Encoding e = encode(Eigen::MatrixXd::Identity(5, 5), Eigen::MatrixXd::Zero(5, 4), weights);
  EXPECT_TRUE(e.mu.isZero(0));
  EXPECT_TRUE(e.logvar.isZero(0));
  EXPECT_EQ(e.mu.rows(), 5);
  EXPECT_EQ(e.mu.cols(), 3);
}

TEST(Encode, HandComputedTwoNodes) {
  VgaeWeights w;
  w.w0 = Eigen::MatrixXd::Ones(1, 2);
  w.w0(0, 1) = -1;
  w.w_mu = Eigen::MatrixXd::Identity(2, 2);
  w.w_logvar = 2 * Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd x(2, 1);
  x << 3, -2;
  const Encoding e = encode(Eigen::MatrixXd::Identity(2, 2), x, w);
  // H = relu([[3, -3], [-2, 2]]) = [[3, 0], [0, 2]]
  Eigen::MatrixXd h(2, 2);
  h << 3, 0, 0, 2;
  EXPECT_EQ(e.mu, h);
  EXPECT_EQ(e.logvar, 2 * h);
}

TEST(Encode, DimensionMismatch) {
  Rng rng(4);
  const auto weights = VgaeWeights::xavier(4, small_config(), rng);
  EXPECT_THROW(encode(Eigen::MatrixXd::Identity(5, 5), Eigen::MatrixXd::Zero(4, 4), weights), DimensionMismatch);
  EXPECT_THROW(encode(Eigen::MatrixXd::Identity(5, 5), Eigen::MatrixXd::Zero(5, 3), weights), DimensionMismatch);
}

TEST(Xavier, BoundsAndScale) {
  VgaeConfig c = small_config();
  Rng rng(5);
  const auto w = VgaeWeights::xavier(7, c, rng);
  EXPECT_LE(w.w0.cwiseAbs().maxCoeff(), std::sqrt(6.0 / 12));
  EXPECT_LE(w.w_mu.cwiseAbs().maxCoeff(), std::sqrt(6.0 / 8));
  c.weight_init_scale = 0.1;
  Rng again(5);
  const auto scaled = VgaeWeights::xavier(7, c, again);
  EXPECT_TRUE(scaled.w0.isApprox(0.1 * w.w0, 1e-14));
}

TEST(Reparameterize, ZeroVarianceLimit) {
  Rng rng(6);
  const Eigen::MatrixXd mu = random_matrix(rng, 4, 3);
  const Eigen::MatrixXd z = reparameterize(mu, Eigen::MatrixXd::Constant(4, 3, -50), rng);
  EXPECT_LT((z - mu).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Reparameterize, ReproducibleFromSeed) {
  Rng a(7), b(7);
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 2);
  EXPECT_EQ(reparameterize(zero, zero, a), reparameterize(zero, zero, b));
}

TEST(Reparameterize, MonteCarloMean) {
  Rng rng(8);
  Eigen::MatrixXd mu(1, 2), logvar(1, 2);
  mu << 0.7, -1.2;
  logvar << 0.0, std::log(4.0);
  const int draws = 100000;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(1, 2);
  for (int k = 0; k < draws; ++k) sum += reparameterize(mu, logvar, rng);
  const Eigen::MatrixXd mean = sum / draws;
  EXPECT_LT(std::abs(mean(0, 0) - 0.7), 3 * 1.0 / std::sqrt(draws));
  EXPECT_LT(std::abs(mean(0, 1) + 1.2), 3 * 2.0 / std::sqrt(draws));
}

TEST(Decode, Examples) {
  EXPECT_TRUE(decode(Eigen::MatrixXd::Zero(3, 2)).isApprox(Eigen::MatrixXd::Constant(3, 3, 0.5), 0));
  Eigen::MatrixXd z(2, 1);
  z << std::sqrt(std::log(3.0)), std::sqrt(std::log(3.0));
  EXPECT_NEAR(decode(z)(0, 1), 0.75, 1e-15);
  Rng rng(9);
  const Eigen::MatrixXd r = decode(random_matrix(rng, 6, 4, -3, 3));
  EXPECT_TRUE(r.isApprox(r.transpose(), 0));
  EXPECT_GT(r.minCoeff(), 0.0);
  EXPECT_LT(r.maxCoeff(), 1.0);
}

TEST(Loss, KlZeroAtStandardNormal) {
  Rng rng(10);
  const Eigen::MatrixXd a = random_graph(rng, 5, 0.5);
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(5, 3);
  EXPECT_EQ(loss(a, decode(zero), zero, zero).kl, 0.0);
}

TEST(Loss, PerfectReconstructionLimit) {
  Eigen::MatrixXd a(3, 3);
  a << 0, 1, 0, 1, 0, 0, 0, 0, 0;
  Eigen::MatrixXd recon = a;
  recon.diagonal().setConstant(1e-300);
  recon = recon.cwiseMax(1e-300).cwiseMin(1 - 1e-16);
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 2);
  EXPECT_LT(loss(a, recon, zero, zero).reconstruction, 1e-14);
}

TEST(Loss, MatchesScalarOracle) {
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, 1, 0;
  Eigen::MatrixXd z(2, 2), mu(2, 2), logvar(2, 2);
  z << 0.3, -0.2, 0.5, 0.1;
  mu << 0.2, -0.1, 0.4, 0.0;
  logvar << -0.3, 0.2, 0.1, -0.5;
  EXPECT_NEAR(loss(a, decode(z), mu, logvar).total, oracle::scalar_loss(a, z, mu, logvar), 1e-12);

  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = 2 + rng.below(7);
    const Eigen::MatrixXd g = random_graph(rng, n, 0.4);
    const Eigen::MatrixXd zz = random_matrix(rng, n, 3), mm = random_matrix(rng, n, 3), lv = random_matrix(rng, n, 3);
    const LossTerms terms = loss(g, decode(zz), mm, lv);
    ASSERT_NEAR(terms.total, oracle::scalar_loss(g, zz, mm, lv), 1e-10);
    ASSERT_EQ(terms.degenerate_graph, g.sum() == 0);
  }
}

TEST(Loss, EvaluateAgreesWithLoss) {
  Rng rng(12);
  const Eigen::MatrixXd a = random_graph(rng, 6, 0.5);
  const Eigen::MatrixXd x = random_matrix(rng, 6, 4);
  const auto w = VgaeWeights::xavier(4, small_config(), rng);
  const Eigen::MatrixXd eps = random_matrix(rng, 6, 3);
  const Eigen::MatrixXd a_norm = normalize_adjacency(a);
  const Evaluation e = evaluate(a, a_norm, x, w, eps);
  const Encoding enc = encode(a_norm, x, w);
  const Eigen::MatrixXd z = enc.mu + (0.5 * enc.logvar.array()).exp().matrix().cwiseProduct(eps);
  EXPECT_NEAR(e.loss.total, loss(a, decode(z), enc.mu, enc.logvar).total, 1e-12);
  EXPECT_EQ(e.mu, enc.mu);
}

TEST(Loss, EdgelessGraphIsDegenerate) {
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 2);
  const LossTerms terms = loss(Eigen::MatrixXd::Zero(3, 3), decode(zero), zero, zero);
  EXPECT_TRUE(terms.degenerate_graph);
  EXPECT_NEAR(terms.reconstruction, 0.5 * std::log(2.0), 1e-15);
}

TEST(Gradients, MatchFiniteDifferences) {
  Rng rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXd a = random_graph(rng, 6, 0.4);
    const Eigen::MatrixXd x = random_matrix(rng, 6, 4);
    const auto w = VgaeWeights::xavier(4, small_config(), rng);
    const Eigen::MatrixXd eps = random_matrix(rng, 6, 3);
    const auto check = oracle::check_gradients(a, x, w, eps);
    EXPECT_EQ(check.checked, 4u * 5 + 5 * 3 + 5 * 3);
    EXPECT_LE(check.max_relative_error, 1e-4) << "trial " << trial;
  }
}

TEST(Gradients, EdgelessGraph) {
  Rng rng(14);
  const Eigen::MatrixXd x = random_matrix(rng, 5, 3);
  const auto w = VgaeWeights::xavier(3, small_config(), rng);
  EXPECT_LE(oracle::check_gradients(Eigen::MatrixXd::Zero(5, 5), x, w, random_matrix(rng, 5, 3)).max_relative_error,
            1e-4);
}

TEST(Train, RecoversTwoCliques) {
  const Eigen::MatrixXd a = oracle::two_cliques_with_bridge();
  const TrainResult r = train(a, Eigen::MatrixXd::Identity(8, 8));
  ASSERT_EQ(r.model.training_trace.size(), 200u);
  EXPECT_GT(oracle::mean_cosine(r.latent.z, true), oracle::mean_cosine(r.latent.z, false));
  EXPECT_LT(r.model.training_trace.back().loss, r.model.training_trace.front().loss);
  for (const auto& e : r.model.training_trace) {
    EXPECT_GE(e.kl, 0.0);
    EXPECT_TRUE(std::isfinite(e.loss));
  }
  EXPECT_EQ(r.latent.z.rows(), 8);
  EXPECT_EQ(r.latent.z.cols(), 16);
}

TEST(Train, SameSeedSameLatents) {
  Rng rng(15);
  const Eigen::MatrixXd a = random_graph(rng, 7, 0.4);
  const Eigen::MatrixXd x = random_matrix(rng, 7, 5);
  VgaeConfig c;
  c.epochs = 30;
  EXPECT_EQ(train(a, x, c).latent.z, train(a, x, c).latent.z);
  VgaeConfig other = c;
  other.seed = 43;
  EXPECT_NE(train(a, x, other).latent.z, train(a, x, c).latent.z);
}

TEST(Train, MatchesReferenceLoop) {
  Rng data(16);
  const Eigen::MatrixXd a = random_graph(data, 6, 0.5);
  const Eigen::MatrixXd x = random_matrix(data, 6, 4);
  VgaeConfig c = small_config();
  c.epochs = 25;
  c.center_features = false;
  Rng rng(c.seed);
  const auto w = VgaeWeights::xavier(4, c, rng);
  const Eigen::MatrixXd z = oracle::reference_train(a, l2_normalize_rows(x), w, c, [&](int) {
    Eigen::MatrixXd eps(6, c.latent_dim);
    for (int i = 0; i < 6; ++i)
      for (int k = 0; k < c.latent_dim; ++k) eps(i, k) = rng.normal();
    return eps;
  });
  EXPECT_LT((train(a, x, c).latent.z - z).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Train, PermutationEquivariance) {
  Rng data(17);
  const int n = 7;
  const Eigen::MatrixXd a = random_graph(data, n, 0.4);
  const Eigen::MatrixXd x = l2_normalize_rows(random_matrix(data, n, 4));
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n; i > 1; --i) std::swap(perm[i - 1], perm[data.below(i)]);
  const Eigen::MatrixXd p = permutation_matrix(perm);

  VgaeConfig c = small_config();
  c.epochs = 60;
  Rng init(3);
  const auto w = VgaeWeights::xavier(4, c, init);
  std::vector<Eigen::MatrixXd> noise;
  Rng rng(4);
  for (int e = 0; e < c.epochs; ++e) noise.push_back(random_matrix(rng, n, c.latent_dim));

  const Eigen::MatrixXd z = oracle::reference_train(a, x, w, c, [&](int e) { return noise[e - 1]; });
  const Eigen::MatrixXd zp = oracle::reference_train(p * a * p.transpose(), p * x, w, c,
                                                     [&](int e) { return Eigen::MatrixXd(p * noise[e - 1]); });
  const Eigen::MatrixXd s = cosine_matrix(z, SimilarityKind::Latent).values;
  const Eigen::MatrixXd sp = cosine_matrix(zp, SimilarityKind::Latent).values;
  EXPECT_LT((p * s * p.transpose() - sp).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Train, Errors) {
  VgaeConfig c;
  c.epochs = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(train(Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Identity(3, 3), c), ConfigError);
  c = VgaeConfig{};
  c.latent_dim = 1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = VgaeConfig{};
  c.hidden_dim = 8;
  c.latent_dim = 16;
  EXPECT_THROW(c.validate(), ConfigError);
  c = VgaeConfig{};
  c.learning_rate = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(train(Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Identity(1, 1)), DataError);
  EXPECT_THROW(train(Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Identity(4, 4)), DimensionMismatch);
}

TEST(Train, NonFiniteLossReportsEpoch) {
  VgaeConfig c = small_config();
  c.learning_rate = 1e300;
  c.epochs = 50;
  try {
    train(oracle::two_cliques_with_bridge(), Eigen::MatrixXd::Identity(8, 8), c);
    FAIL() << "expected NonFiniteLoss";
  } catch (const NonFiniteLoss& e) {
    EXPECT_GE(e.epoch(), 1);
    EXPECT_LE(e.epoch(), 50);
  }
}

TEST(Features, CenterAndNormalize) {
  Eigen::MatrixXd x(3, 2);
  x << 1, 2, 3, 4, 0, 0;
  const Eigen::MatrixXd c = center_columns(x);
  EXPECT_TRUE(c.colwise().sum().isZero(1e-15));
  const Eigen::MatrixXd n = l2_normalize_rows(x);
  EXPECT_NEAR(n.row(0).norm(), 1.0, 1e-15);
  EXPECT_TRUE(n.row(2).isZero(0));
}

TEST(Trace, Csv) {
  VgaeModel m;
  m.training_trace = {{1, 2.5, 0.1}, {2, 1.25, 0.2}};
  std::ostringstream out;
  write_trace_csv(m, out);
  EXPECT_EQ(out.str(), "epoch,loss\n1,2.5\n2,1.25\n");
}
