#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "godsplit/class_facts.hpp"
#include "godsplit/rng.hpp"
#include "godsplit/structsim.hpp"
#include "godsplit/textprep.hpp"

namespace godsplit {

enum class FeatureSource { LSI, LDA, BERT, CodeBERT, External };

std::string to_string(FeatureSource source);

// One row per method. LDA rows are probability distributions.
struct FeatureMatrix {
  FeatureSource source = FeatureSource::External;
  Eigen::MatrixXd rows;

  Eigen::Index size() const { return rows.rows(); }
  Eigen::Index dim() const { return rows.cols(); }
};

struct TermDocumentMatrix {
  std::vector<std::string> vocabulary;  // sorted
  Eigen::MatrixXd weights;              // methods x vocabulary
};

// tf * ln(n / df) with raw counts. Throws EmptyCorpus when every bag is empty
// (or there are no bags).
TermDocumentMatrix tfidf(const std::vector<BagOfWords>& bags);

struct TruncatedSvd {
  Eigen::MatrixXd u;                // rows x rank
  Eigen::VectorXd singular_values;  // descending, non-negative
  Eigen::MatrixXd v;                // cols x rank

  Eigen::MatrixXd reconstruct() const { return u * singular_values.asDiagonal() * v.transpose(); }
};

// Rank-`rank` truncation of a full SVD. Column signs are canonical: the
// largest-magnitude entry of every left singular vector is positive.
TruncatedSvd truncated_svd(const Eigen::MatrixXd& matrix, Eigen::Index rank);

// Method coordinates U*Sigma at rank min(k, n-1, |V|) (at least 1).
FeatureMatrix lsi_embed(const TermDocumentMatrix& tfidf, int k = 32);

struct LdaConfig {
  int topics = 10;
  int iterations = 1000;
  double alpha = 5.0;  // 50 / topics
  double beta = 0.01;
  std::uint64_t seed = 1;

  static LdaConfig with_topics(int topics) {
    LdaConfig c;
    c.topics = topics;
    c.alpha = 50.0 / topics;
    return c;
  }
};

// Collapsed Gibbs sampler treating each method as a document.
class LdaSampler {
 public:
  LdaSampler(const std::vector<BagOfWords>& bags, const LdaConfig& config);

  void sweep();
  int sweeps_done() const { return sweeps_; }

  // (count(d,t) + alpha) / (len(d) + T * alpha)
  Eigen::MatrixXd document_topics() const;

  const std::vector<std::vector<int>>& doc_topic_counts() const { return doc_topic_; }
  const std::vector<std::vector<int>>& word_topic_counts() const { return word_topic_; }
  const std::vector<int>& topic_totals() const { return topic_total_; }
  std::size_t token_count() const;
  std::size_t vocabulary_size() const { return word_topic_.size(); }

 private:
  LdaConfig config_;
  std::vector<std::vector<int>> words_;   // per document, word ids
  std::vector<std::vector<int>> topics_;  // per document, topic of each token
  std::vector<std::vector<int>> doc_topic_;
  std::vector<std::vector<int>> word_topic_;
  std::vector<int> topic_total_;
  std::vector<double> weights_;
  Rng rng_;
  int sweeps_ = 0;
};

FeatureMatrix lda_embed(const std::vector<BagOfWords>& bags, const LdaConfig& config = {});

// Vector file: {"model": str, "dim": int, "vectors": {"<methodId>": [floats]}}.
// Throws SchemaError, MissingMethod or DimensionMismatch.
FeatureMatrix load_external_vectors(const std::string& json_text, const ClassFacts& facts);
FeatureMatrix load_external_vectors_file(const std::string& path, const ClassFacts& facts);

// Cosine similarity of rows; zero rows have similarity 0 to everything else
// and the diagonal is 1.
SimilarityMatrix cosine_matrix(const FeatureMatrix& features, SimilarityKind kind = SimilarityKind::CSM);
SimilarityMatrix cosine_matrix(const Eigen::MatrixXd& rows, SimilarityKind kind);

}  // namespace godsplit
