#include "godsplit/semvec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "godsplit/error.hpp"

namespace godsplit {

std::string to_string(FeatureSource source) {
  switch (source) {
    case FeatureSource::LSI: return "LSI";
    case FeatureSource::LDA: return "LDA";
    case FeatureSource::BERT: return "BERT";
    case FeatureSource::CodeBERT: return "CODEBERT";
    case FeatureSource::External: return "EXTERNAL";
  }
  return "?";
}

TermDocumentMatrix tfidf(const std::vector<BagOfWords>& bags) {
  std::map<std::string, std::size_t> document_frequency;
  for (const auto& bag : bags)
    for (const auto& [word, count] : bag.counts) ++document_frequency[word];
  if (document_frequency.empty()) throw EmptyCorpus();

  TermDocumentMatrix out;
  std::map<std::string, Eigen::Index> column;
  for (const auto& [word, df] : document_frequency) {
    column[word] = static_cast<Eigen::Index>(out.vocabulary.size());
    out.vocabulary.push_back(word);
  }
  const auto n = static_cast<double>(bags.size());
  out.weights = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(bags.size()),
                                      static_cast<Eigen::Index>(out.vocabulary.size()));
  for (std::size_t d = 0; d < bags.size(); ++d) {
    for (const auto& [word, count] : bags[d].counts) {
      const double idf = std::log(n / static_cast<double>(document_frequency[word]));
      out.weights(static_cast<Eigen::Index>(d), column[word]) = static_cast<double>(count) * idf;
    }
  }
  return out;
}

TruncatedSvd truncated_svd(const Eigen::MatrixXd& matrix, Eigen::Index rank) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::Index r = std::clamp<Eigen::Index>(rank, 0, svd.singularValues().size());
  TruncatedSvd out{svd.matrixU().leftCols(r), svd.singularValues().head(r), svd.matrixV().leftCols(r)};
  for (Eigen::Index c = 0; c < r; ++c) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < out.u.rows(); ++i) {
      // first index wins ties, with a little slack for rounding
      if (std::abs(out.u(i, c)) > best + 1e-12) {
        best = std::abs(out.u(i, c));
        pivot = i;
      }
    }
    if (out.u(pivot, c) < 0.0) {
      out.u.col(c) *= -1.0;
      out.v.col(c) *= -1.0;
    }
  }
  return out;
}

FeatureMatrix lsi_embed(const TermDocumentMatrix& tfidf, int k) {
  if (k < 1) throw ConfigError("LSI rank must be at least 1");
  if (tfidf.vocabulary.empty()) throw EmptyCorpus();
  const Eigen::Index n = tfidf.weights.rows();
  const Eigen::Index vocab = tfidf.weights.cols();
  const Eigen::Index r = std::max<Eigen::Index>(1, std::min({static_cast<Eigen::Index>(k), n - 1, vocab}));
  const auto svd = truncated_svd(tfidf.weights, r);
  FeatureMatrix out;
  out.source = FeatureSource::LSI;
  out.rows = svd.u * svd.singular_values.asDiagonal();
  return out;
}

LdaSampler::LdaSampler(const std::vector<BagOfWords>& bags, const LdaConfig& config)
    : config_(config), rng_(config.seed) {
  if (config.topics < 2) throw ConfigError("LDA needs at least 2 topics");
  if (config.iterations < 1) throw ConfigError("LDA needs at least 1 iteration");
  if (!(config.alpha > 0.0) || !(config.beta > 0.0)) throw ConfigError("LDA priors must be positive");

  std::map<std::string, int> vocabulary;
  for (const auto& bag : bags)
    for (const auto& [word, count] : bag.counts) vocabulary.emplace(word, 0);
  if (vocabulary.empty()) throw EmptyCorpus();
  int next = 0;
  for (auto& [word, id] : vocabulary) id = next++;

  const auto topics = static_cast<std::size_t>(config.topics);
  doc_topic_.assign(bags.size(), std::vector<int>(topics, 0));
  word_topic_.assign(vocabulary.size(), std::vector<int>(topics, 0));
  topic_total_.assign(topics, 0);
  weights_.resize(topics);
  words_.resize(bags.size());
  topics_.resize(bags.size());
  for (std::size_t d = 0; d < bags.size(); ++d) {
    for (const auto& [word, count] : bags[d].counts)
      words_[d].insert(words_[d].end(), count, vocabulary[word]);
    for (int w : words_[d]) {
      const auto t = static_cast<int>(rng_.below(topics));
      topics_[d].push_back(t);
      ++doc_topic_[d][t];
      ++word_topic_[w][t];
      ++topic_total_[t];
    }
  }
}

void LdaSampler::sweep() {
  const auto topics = static_cast<std::size_t>(config_.topics);
  const double vocab_beta = static_cast<double>(word_topic_.size()) * config_.beta;
  for (std::size_t d = 0; d < words_.size(); ++d) {
    auto& doc_counts = doc_topic_[d];
    for (std::size_t k = 0; k < words_[d].size(); ++k) {
      const int w = words_[d][k];
      int t = topics_[d][k];
      --doc_counts[t];
      --word_topic_[w][t];
      --topic_total_[t];
      double total = 0.0;
      for (std::size_t j = 0; j < topics; ++j) {
        total += (doc_counts[j] + config_.alpha) * (word_topic_[w][j] + config_.beta) /
                 (topic_total_[j] + vocab_beta);
        weights_[j] = total;
      }
      const double u = rng_.uniform() * total;
      t = static_cast<int>(std::upper_bound(weights_.begin(), weights_.end(), u) - weights_.begin());
      if (t >= config_.topics) t = config_.topics - 1;
      topics_[d][k] = t;
      ++doc_counts[t];
      ++word_topic_[w][t];
      ++topic_total_[t];
    }
  }
  ++sweeps_;
}

Eigen::MatrixXd LdaSampler::document_topics() const {
  const auto n = static_cast<Eigen::Index>(doc_topic_.size());
  const Eigen::Index topics = config_.topics;
  Eigen::MatrixXd theta(n, topics);
  for (Eigen::Index d = 0; d < n; ++d) {
    const double denom = static_cast<double>(words_[d].size()) + topics * config_.alpha;
    for (Eigen::Index t = 0; t < topics; ++t) theta(d, t) = (doc_topic_[d][t] + config_.alpha) / denom;
  }
  return theta;
}

std::size_t LdaSampler::token_count() const {
  std::size_t total = 0;
  for (const auto& doc : words_) total += doc.size();
  return total;
}

FeatureMatrix lda_embed(const std::vector<BagOfWords>& bags, const LdaConfig& config) {
  LdaSampler sampler(bags, config);
  for (int i = 0; i < config.iterations; ++i) sampler.sweep();
  return {FeatureSource::LDA, sampler.document_topics()};
}

FeatureMatrix load_external_vectors(const std::string& json_text, const ClassFacts& facts) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", e.what());
  }
  if (!j.is_object()) throw SchemaError("$", "expected object");
  if (!j.contains("model") || !j["model"].is_string()) throw SchemaError("model", "expected string");
  if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<long long>() < 1)
    throw SchemaError("dim", "expected positive integer");
  if (!j.contains("vectors") || !j["vectors"].is_object()) throw SchemaError("vectors", "expected object");

  const auto dim = j["dim"].get<Eigen::Index>();
  const auto n = static_cast<Eigen::Index>(facts.size());
  std::map<std::size_t, const json*> rows;
  for (const auto& [key, value] : j["vectors"].items()) {
    const std::string path = "vectors." + key;
    std::size_t consumed = 0;
    unsigned long long id = 0;
    try {
      id = std::stoull(key, &consumed);
    } catch (const std::exception&) {
      consumed = 0;
    }
    if (key.empty() || consumed != key.size()) throw SchemaError(path, "key must be a method id");
    if (id >= facts.size()) throw SchemaError(path, "no such method");
    if (!value.is_array()) throw SchemaError(path, "expected array of numbers");
    rows[static_cast<std::size_t>(id)] = &value;
  }
  for (std::size_t id = 0; id < facts.size(); ++id)
    if (!rows.contains(id)) throw MissingMethod(id);

  std::size_t first_dim = rows.empty() ? 0 : rows.begin()->second->size();
  for (const auto& [id, row] : rows) {
    if (row->size() != first_dim)
      throw DimensionMismatch("vector for method " + std::to_string(id) + " has " + std::to_string(row->size()) +
                              " entries, method " + std::to_string(rows.begin()->first) + " has " +
                              std::to_string(first_dim));
  }
  if (!rows.empty() && static_cast<Eigen::Index>(first_dim) != dim)
    throw DimensionMismatch("declared dim " + std::to_string(dim) + " but vectors have " +
                            std::to_string(first_dim) + " entries");

  FeatureMatrix out;
  const std::string model = j["model"].get<std::string>();
  std::string lower = model;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  out.source = lower.find("codebert") != std::string::npos ? FeatureSource::CodeBERT
               : lower.find("bert") != std::string::npos   ? FeatureSource::BERT
                                                           : FeatureSource::External;
  out.rows.resize(n, dim);
  for (const auto& [id, row] : rows) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      const auto& v = (*row)[static_cast<std::size_t>(c)];
      if (!v.is_number())
        throw SchemaError("vectors." + std::to_string(id) + "[" + std::to_string(c) + "]", "expected number");
      const double x = v.get<double>();
      if (!std::isfinite(x))
        throw SchemaError("vectors." + std::to_string(id) + "[" + std::to_string(c) + "]", "non-finite value");
      out.rows(static_cast<Eigen::Index>(id), c) = x;
    }
  }
  return out;
}

FeatureMatrix load_external_vectors_file(const std::string& path, const ClassFacts& facts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open vector file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_external_vectors(buffer.str(), facts);
}

SimilarityMatrix cosine_matrix(const Eigen::MatrixXd& rows, SimilarityKind kind) {
  const Eigen::Index n = rows.rows();
  SimilarityMatrix out{kind, Eigen::MatrixXd::Identity(n, n)};
  const Eigen::VectorXd norms = rows.rowwise().norm();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double s = 0.0;
      if (norms(i) > 0.0 && norms(j) > 0.0)
        s = std::clamp(rows.row(i).dot(rows.row(j)) / (norms(i) * norms(j)), -1.0, 1.0);
      out.values(i, j) = s;
      out.values(j, i) = s;
    }
  }
  return out;
}

SimilarityMatrix cosine_matrix(const FeatureMatrix& features, SimilarityKind kind) {
  return cosine_matrix(features.rows, kind);
}

}  // namespace godsplit
