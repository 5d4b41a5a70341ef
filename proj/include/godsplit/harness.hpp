#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "godsplit/class_facts.hpp"
#include "godsplit/cluster.hpp"
#include "godsplit/metrics.hpp"
#include "godsplit/semvec.hpp"
#include "godsplit/structsim.hpp"
#include "godsplit/toml.hpp"
#include "godsplit/vgae.hpp"

namespace godsplit {

enum class Combiner { WC, VGAE };
enum class Embedding { LSI, LDA, BERT, CODEBERT };

std::string to_string(Combiner combiner);
std::string to_string(Embedding embedding);

struct WcWeights {
  double ssm = 1.0 / 3.0;
  double cdm = 1.0 / 3.0;
  double csm = 1.0 / 3.0;
};

struct SemanticConfig {
  int lsi_rank = 32;
  LdaConfig lda;
};

struct ModelSpec {
  Combiner combiner = Combiner::VGAE;
  Embedding embedding = Embedding::LSI;
  WcWeights weights;
  double edge_threshold = 0.0;  // class-graph edge iff structural score is above this
  VgaeConfig vgae;
  ClusterConfig cluster;
  SemanticConfig semantic;
  std::optional<std::string> external_vector_path;

  // "WC+LSI", "VGAE+CODEBERT", ...
  std::string name() const;
  // Throws WeightError or ConfigError.
  void validate() const;
};

// Parses "VGAE+LSI" (case-insensitive) into combiner and embedding.
ModelSpec parse_model_name(const std::string& name);

// Weighted sum of the three matrices with a unit diagonal. Throws
// DimensionMismatch or WeightError.
SimilarityMatrix wc_similarity(const SimilarityMatrix& ssm, const SimilarityMatrix& cdm, const SimilarityMatrix& csm,
                               const WcWeights& weights = {});

FeatureMatrix method_features(const ClassFacts& facts, const ModelSpec& spec);

struct ModelRun {
  SimilarityMatrix similarity;
  Partition partition;
  MetricsReport report;
  std::vector<TraceEntry> training_trace;  // empty for WC
};

// WC: SSM, CDM and CSM combined. VGAE: class graph + features -> latent
// cosine. Both then cluster and evaluate.
ModelRun run_model(const ClassFacts& facts, const ModelSpec& spec);

// Partition file: {"k": int, "labels": [...], "noise_assigned": [...], "warnings": [...]}.
std::string partition_to_json(const Partition& partition);
Partition partition_from_json(const std::string& json_text);

struct CorpusClass {
  ClassFacts facts;
  std::string system;      // optional grouping column for the before/after table
  std::string load_error;  // set when the source could not be read; every cell of the row fails with it
};

struct Cell {
  std::optional<MetricsReport> report;
  std::vector<std::string> warnings;
  std::string error;  // set when the cell failed
};

struct Comparison {
  std::vector<std::string> class_names;
  std::vector<std::string> systems;
  std::vector<std::string> spec_names;
  std::vector<std::vector<Cell>> cells;  // [class][spec]
  std::optional<std::size_t> before_after_spec;
};

// Runs every (class, spec) cell. A failing cell records its error and leaves
// the rest untouched.
Comparison compare(const std::vector<CorpusClass>& corpus, const std::vector<ModelSpec>& specs,
                   std::optional<std::size_t> before_after_spec = std::nullopt);

enum class Metric { LCOM, MPC };

// class,<spec...>,best ; cells hold the mean metric over sub-classes, empty when
// the cell failed; best lists the lowest specs joined by ';'.
void write_comparison_csv(const Comparison& comparison, Metric metric, std::ostream& out);
// Same table in markdown with the best cell of each row in bold.
void write_comparison_markdown(const Comparison& comparison, Metric metric, std::ostream& out);
// System | Class | LCOM | MPC | #splits | LCOM after | MPC after, for the designated spec.
void write_before_after_markdown(const Comparison& comparison, std::ostream& out);
void write_before_after_csv(const Comparison& comparison, std::ostream& out);
// One line per failed cell: class,spec,error
void write_failures_csv(const Comparison& comparison, std::ostream& out);

struct HarnessConfig {
  std::vector<ModelSpec> models;
  std::optional<std::size_t> before_after_model;
};

// Sections: [compare] models, before_after; [weights] ssm cdm csm;
// [model.vgae] hidden_dim latent_dim learning_rate epochs seed
// weight_init_scale center_features edge_threshold; [cluster] min_methods xi min_step
// max_link_distance; [semantic] lsi_rank lda_topics lda_iterations lda_alpha
// lda_beta lda_seed; [vectors] bert codebert (paths, "{class}" is replaced by
// the class name). Unknown sections or keys are ConfigErrors.
HarnessConfig load_config(const TomlDocument& doc);
HarnessConfig load_config_file(const std::string& path);

// Model spec for one class; vector path patterns are resolved here.
ModelSpec resolve_for_class(ModelSpec spec, const std::string& class_name);

// Loads every *.java (parsed) and *.facts.json file in `dir`, sorted by file
// name. A file that fails to parse becomes an entry with load_error set.
std::vector<CorpusClass> load_corpus_dir(const std::string& dir);

}  // namespace godsplit
