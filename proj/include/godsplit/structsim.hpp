#pragma once

#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "godsplit/class_facts.hpp"

namespace godsplit {

enum class SimilarityKind { SSM, CDM, CSM, Combined, Latent };

std::string to_string(SimilarityKind kind);

// Symmetric method-by-method score matrix. The diagonal is 1 for CSM and
// Latent and 0 (unused) for SSM, CDM and Combined.
struct SimilarityMatrix {
  SimilarityKind kind = SimilarityKind::Combined;
  Eigen::MatrixXd values;

  Eigen::Index size() const { return values.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return values(i, j); }
};

using Adjacency = Eigen::MatrixXd;  // 0/1 entries, symmetric, zero diagonal

struct ClassGraph {
  Adjacency adjacency;
  Eigen::MatrixXd features;      // n x d initial node features
  Eigen::MatrixXd edge_weights;  // combined structural scores
};

// Jaccard overlap of accessed instance variables; 0 when both sets are empty.
double ssm(const ClassFacts& facts, MethodId i, MethodId j);

// max(calls(i,j)/calls_in(j), calls(j,i)/calls_in(i)); a direction with no
// incoming calls contributes 0.
double cdm(const ClassFacts& facts, MethodId i, MethodId j);

SimilarityMatrix ssm_matrix(const ClassFacts& facts);
SimilarityMatrix cdm_matrix(const ClassFacts& facts);

// w_ssm * SSM + w_cdm * CDM off the diagonal. Throws WeightError unless both
// weights are non-negative and sum to 1.
SimilarityMatrix structural_matrix(const ClassFacts& facts, double w_ssm = 0.5, double w_cdm = 0.5);

// Edge (i,j) iff combined(i,j) > threshold.
Adjacency build_adjacency(const SimilarityMatrix& combined, double threshold = 0.0);

ClassGraph build_class_graph(const ClassFacts& facts, const Eigen::MatrixXd& features,
                             double w_ssm = 0.5, double w_cdm = 0.5, double threshold = 0.0);

// Header row of method ids, then one row per method (first cell = method name).
void write_matrix_csv(const SimilarityMatrix& matrix, const ClassFacts& facts, std::ostream& out);

}  // namespace godsplit
