#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "godsplit/error.hpp"
#include "godsplit/structsim.hpp"
#include "oracles.hpp"

using namespace godsplit;

namespace {

ClassFacts with_vars(std::vector<std::set<std::string>> vars) {
  ClassFacts f;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    MethodFacts m;
    m.id = i;
    m.name = "m" + std::to_string(i);
    m.accessed_vars = vars[i];
    f.instance_vars.insert(vars[i].begin(), vars[i].end());
    f.methods.push_back(m);
  }
  return f;
}

ClassFacts with_calls(std::size_t n, std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> calls) {
  ClassFacts f = with_vars(std::vector<std::set<std::string>>(n));
  for (const auto& [from, to, count] : calls) f.methods[from].internal_calls[to] = count;
  return f;
}

// Same class with method i renamed to perm[i].
ClassFacts permuted(const ClassFacts& f, const std::vector<std::size_t>& perm) {
  ClassFacts out = f;
  for (std::size_t i = 0; i < f.size(); ++i) {
    MethodFacts m = f.methods[i];
    m.id = perm[i];
    m.internal_calls.clear();
    for (const auto& [callee, count] : f.methods[i].internal_calls) m.internal_calls[perm[callee]] = count;
    out.methods[perm[i]] = m;
  }
  return out;
}

}  // namespace

TEST(Ssm, Examples) {
  const ClassFacts f = with_vars({{}, {}, {"a", "b"}, {"b", "c"}, {"a", "b"}});
  EXPECT_EQ(ssm(f, 0, 1), 0.0);
  EXPECT_DOUBLE_EQ(ssm(f, 2, 3), 1.0 / 3.0);
  EXPECT_EQ(ssm(f, 2, 4), 1.0);
  EXPECT_EQ(ssm(f, 0, 2), 0.0);
}

TEST(Ssm, IndexError) {
  const ClassFacts f = with_vars({{}, {}});
  EXPECT_THROW(ssm(f, 0, 2), IndexError);
  EXPECT_THROW(cdm(f, 5, 0), IndexError);
}

TEST(Cdm, Examples) {
  EXPECT_EQ(cdm(with_calls(2, {}), 0, 1), 0.0);
  // calls(0,1)=2, calls_in(1)=4 via a third caller, calls(1,0)=0
  EXPECT_DOUBLE_EQ(cdm(with_calls(3, {{0, 1, 2}, {2, 1, 2}}), 0, 1), 0.5);
  // calls(0,1)=1, calls_in(1)=1; calls(1,0)=1, calls_in(0)=2
  const ClassFacts both = with_calls(3, {{0, 1, 1}, {1, 0, 1}, {2, 0, 1}});
  EXPECT_DOUBLE_EQ(cdm(both, 0, 1), 1.0);
  EXPECT_DOUBLE_EQ(cdm(both, 1, 0), 1.0);
}

TEST(Cdm, SelfCallsCountAsIncoming) {
  const ClassFacts f = with_calls(2, {{0, 1, 1}, {1, 1, 3}});
  EXPECT_DOUBLE_EQ(cdm(f, 0, 1), 0.25);
}

TEST(Structural, Examples) {
  // ssm(0,1)=1, cdm=0
  ClassFacts f = with_vars({{"x"}, {"x"}});
  EXPECT_DOUBLE_EQ(structural_matrix(f)(0, 1), 0.5);
  EXPECT_TRUE(structural_matrix(with_vars({{}, {}, {}})).values.isZero());
  // ssm=1/3, cdm=0.5 -> 5/12
  f = with_vars({{"a", "b"}, {"b", "c"}, {}});
  f.methods[0].internal_calls[1] = 1;
  f.methods[2].internal_calls[1] = 1;
  EXPECT_DOUBLE_EQ(structural_matrix(f)(0, 1), 5.0 / 12.0);
  EXPECT_EQ(structural_matrix(f).kind, SimilarityKind::Combined);
}

TEST(Structural, WeightError) {
  const ClassFacts f = with_vars({{}, {}});
  EXPECT_THROW(structural_matrix(f, 0.6, 0.6), WeightError);
  EXPECT_THROW(structural_matrix(f, -0.5, 1.5), WeightError);
  EXPECT_NO_THROW(structural_matrix(f, 1.0, 0.0));
}

TEST(Structural, MatchesOracleOnRandomFacts) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const ClassFacts f = oracle::random_facts(rng);
    const auto s = ssm_matrix(f);
    const auto c = cdm_matrix(f);
    const auto combined = structural_matrix(f);
    const auto n = static_cast<Eigen::Index>(f.size());
    ASSERT_EQ(s.size(), n);
    for (Eigen::Index i = 0; i < n; ++i) {
      EXPECT_EQ(s(i, i), 0.0);
      EXPECT_EQ(c(i, i), 0.0);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        const auto expected_s = oracle::ssm(f, i, j);
        const auto expected_c = oracle::cdm(f, i, j);
        ASSERT_NEAR(s(i, j), expected_s.value(), 1e-12);
        ASSERT_NEAR(c(i, j), expected_c.value(), 1e-12);
        ASSERT_EQ(s(i, j), s(j, i));
        ASSERT_EQ(c(i, j), c(j, i));
        ASSERT_GE(c(i, j), 0.0);
        ASSERT_LE(c(i, j), 1.0);
        ASSERT_NEAR(combined(i, j), 0.5 * expected_s.value() + 0.5 * expected_c.value(), 1e-12);
      }
    }
  }
}

TEST(Adjacency, Examples) {
  SimilarityMatrix m{SimilarityKind::Combined, Eigen::MatrixXd::Zero(3, 3)};
  EXPECT_TRUE(build_adjacency(m).isZero());
  m.values(0, 1) = m.values(1, 0) = 0.4;
  Adjacency a = build_adjacency(m);
  EXPECT_EQ(a(0, 1), 1.0);
  EXPECT_EQ(a(1, 0), 1.0);
  EXPECT_EQ(a.sum(), 2.0);
  EXPECT_TRUE(build_adjacency(m, 0.5).isZero());
  EXPECT_TRUE(build_adjacency(m, 0.4).isZero());  // strict
}

TEST(Adjacency, EdgeIffSsmOrCdmPositive) {
  Rng rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    const ClassFacts f = oracle::random_facts(rng);
    const Adjacency a = build_adjacency(structural_matrix(f));
    for (std::size_t i = 0; i < f.size(); ++i) {
      ASSERT_EQ(a(i, i), 0.0);
      for (std::size_t j = 0; j < f.size(); ++j) {
        if (i == j) continue;
        const bool edge = oracle::ssm(f, i, j).num > 0 || oracle::cdm(f, i, j).num > 0;
        ASSERT_EQ(a(i, j), edge ? 1.0 : 0.0);
      }
    }
  }
}

TEST(Structural, RelabelingEquivariance) {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const ClassFacts f = oracle::random_facts(rng);
    std::vector<std::size_t> perm(f.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    const ClassFacts g = permuted(f, perm);
    const auto a = structural_matrix(f, 0.3, 0.7);
    const auto b = structural_matrix(g, 0.3, 0.7);
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j) ASSERT_EQ(a(i, j), b(perm[i], perm[j]));
  }
}

TEST(ClassGraphTest, Build) {
  ClassFacts f = with_vars({{"x"}, {"x"}, {"y"}});
  Eigen::MatrixXd features = Eigen::MatrixXd::Identity(3, 2);
  const ClassGraph g = build_class_graph(f, features);
  EXPECT_EQ(g.adjacency.sum(), 2.0);
  EXPECT_EQ(g.features, features);
  EXPECT_DOUBLE_EQ(g.edge_weights(0, 1), 0.5);
  EXPECT_THROW(build_class_graph(f, Eigen::MatrixXd::Zero(2, 2)), DimensionMismatch);
}

TEST(MatrixCsv, Layout) {
  ClassFacts f = with_vars({{"x"}, {"x", "y"}});
  std::ostringstream out;
  write_matrix_csv(ssm_matrix(f), f, out);
  EXPECT_EQ(out.str(), "method,0,1\nm0,0,0.5\nm1,0.5,0\n");
}

TEST(Kinds, Names) {
  EXPECT_EQ(to_string(SimilarityKind::SSM), "SSM");
  EXPECT_EQ(to_string(SimilarityKind::Latent), "LATENT");
}
