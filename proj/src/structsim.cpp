#include "godsplit/structsim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "godsplit/error.hpp"
#include "godsplit/numfmt.hpp"

namespace godsplit {

namespace {

void check_ids(const ClassFacts& facts, MethodId i, MethodId j) {
  if (i >= facts.size() || j >= facts.size())
    throw IndexError("method id out of range (" + std::to_string(std::max(i, j)) + " >= " +
                     std::to_string(facts.size()) + ")");
}

double directed_cdm(const ClassFacts& facts, MethodId from, MethodId to) {
  const std::size_t incoming = facts.calls_in(to);
  if (incoming == 0) return 0.0;
  return static_cast<double>(facts.calls(from, to)) / static_cast<double>(incoming);
}

template <typename Score>
SimilarityMatrix pairwise(const ClassFacts& facts, SimilarityKind kind, Score score) {
  const auto n = static_cast<Eigen::Index>(facts.size());
  SimilarityMatrix out{kind, Eigen::MatrixXd::Zero(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double s = score(static_cast<MethodId>(i), static_cast<MethodId>(j));
      out.values(i, j) = s;
      out.values(j, i) = s;
    }
  }
  return out;
}

}  // namespace

std::string to_string(SimilarityKind kind) {
  switch (kind) {
    case SimilarityKind::SSM: return "SSM";
    case SimilarityKind::CDM: return "CDM";
    case SimilarityKind::CSM: return "CSM";
    case SimilarityKind::Combined: return "COMBINED";
    case SimilarityKind::Latent: return "LATENT";
  }
  return "?";
}

double ssm(const ClassFacts& facts, MethodId i, MethodId j) {
  check_ids(facts, i, j);
  const auto& a = facts.methods[i].accessed_vars;
  const auto& b = facts.methods[j].accessed_vars;
  std::size_t shared = 0;
  for (const auto& v : a) shared += b.count(v);
  const std::size_t united = a.size() + b.size() - shared;
  if (united == 0) return 0.0;
  return static_cast<double>(shared) / static_cast<double>(united);
}

double cdm(const ClassFacts& facts, MethodId i, MethodId j) {
  check_ids(facts, i, j);
  return std::max(directed_cdm(facts, i, j), directed_cdm(facts, j, i));
}

SimilarityMatrix ssm_matrix(const ClassFacts& facts) {
  return pairwise(facts, SimilarityKind::SSM, [&](MethodId i, MethodId j) { return ssm(facts, i, j); });
}

SimilarityMatrix cdm_matrix(const ClassFacts& facts) {
  return pairwise(facts, SimilarityKind::CDM, [&](MethodId i, MethodId j) { return cdm(facts, i, j); });
}

SimilarityMatrix structural_matrix(const ClassFacts& facts, double w_ssm, double w_cdm) {
  if (!(w_ssm >= 0.0 && w_cdm >= 0.0) || std::abs(w_ssm + w_cdm - 1.0) > 1e-9)
    throw WeightError("structural weights must be non-negative and sum to 1 (got " + format_double(w_ssm) +
                      ", " + format_double(w_cdm) + ")");
  SimilarityMatrix out{SimilarityKind::Combined,
                       w_ssm * ssm_matrix(facts).values + w_cdm * cdm_matrix(facts).values};
  out.values.diagonal().setZero();
  return out;
}

Adjacency build_adjacency(const SimilarityMatrix& combined, double threshold) {
  const auto n = combined.size();
  Adjacency a = Adjacency::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (combined(i, j) > threshold) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
      }
    }
  }
  return a;
}

ClassGraph build_class_graph(const ClassFacts& facts, const Eigen::MatrixXd& features, double w_ssm,
                             double w_cdm, double threshold) {
  if (features.rows() != static_cast<Eigen::Index>(facts.size()))
    throw DimensionMismatch("feature matrix has " + std::to_string(features.rows()) + " rows for " +
                            std::to_string(facts.size()) + " methods");
  auto combined = structural_matrix(facts, w_ssm, w_cdm);
  ClassGraph g;
  g.adjacency = build_adjacency(combined, threshold);
  g.features = features;
  g.edge_weights = std::move(combined.values);
  return g;
}

void write_matrix_csv(const SimilarityMatrix& matrix, const ClassFacts& facts, std::ostream& out) {
  const auto n = matrix.size();
  out << "method";
  for (Eigen::Index j = 0; j < n; ++j) out << ',' << j;
  out << '\n';
  for (Eigen::Index i = 0; i < n; ++i) {
    out << (static_cast<std::size_t>(i) < facts.size() ? facts.methods[i].name : std::to_string(i));
    for (Eigen::Index j = 0; j < n; ++j) out << ',' << format_double(matrix(i, j));
    out << '\n';
  }
}

}  // namespace godsplit
