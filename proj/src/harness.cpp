#include "godsplit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "godsplit/error.hpp"
#include "godsplit/java_parser.hpp"
#include "godsplit/numfmt.hpp"
#include "godsplit/textprep.hpp"

namespace godsplit {

namespace fs = std::filesystem;

std::string to_string(Combiner combiner) { return combiner == Combiner::WC ? "WC" : "VGAE"; }

std::string to_string(Embedding embedding) {
  switch (embedding) {
    case Embedding::LSI: return "LSI";
    case Embedding::LDA: return "LDA";
    case Embedding::BERT: return "BERT";
    case Embedding::CODEBERT: return "CODEBERT";
  }
  return "?";
}

std::string ModelSpec::name() const { return to_string(combiner) + "+" + to_string(embedding); }

void ModelSpec::validate() const {
  if (combiner == Combiner::WC) {
    if (weights.ssm < 0 || weights.cdm < 0 || weights.csm < 0)
      throw WeightError("WC weights must be non-negative");
    if (std::abs(weights.ssm + weights.cdm + weights.csm - 1.0) > 1e-9)
      throw WeightError("WC weights must sum to 1");
  }
  if ((embedding == Embedding::BERT || embedding == Embedding::CODEBERT) &&
      (!external_vector_path || external_vector_path->empty()))
    throw ConfigError(name() + " needs a vector file");
  if (semantic.lsi_rank < 1) throw ConfigError("lsi_rank must be at least 1");
  if (combiner == Combiner::VGAE) vgae.validate();
  cluster.validate();
}

ModelSpec parse_model_name(const std::string& name) {
  std::string upper = name;
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  const auto plus = upper.find('+');
  if (plus == std::string::npos) throw ConfigError("model '" + name + "' is not of the form COMBINER+EMBEDDING");
  ModelSpec spec;
  const std::string combiner = upper.substr(0, plus);
  const std::string embedding = upper.substr(plus + 1);
  if (combiner == "WC") spec.combiner = Combiner::WC;
  else if (combiner == "VGAE") spec.combiner = Combiner::VGAE;
  else throw ConfigError("unknown combiner '" + combiner + "' (expected WC or VGAE)");
  if (embedding == "LSI") spec.embedding = Embedding::LSI;
  else if (embedding == "LDA") spec.embedding = Embedding::LDA;
  else if (embedding == "BERT") spec.embedding = Embedding::BERT;
  else if (embedding == "CODEBERT") spec.embedding = Embedding::CODEBERT;
  else throw ConfigError("unknown embedding '" + embedding + "' (expected LSI, LDA, BERT or CODEBERT)");
  return spec;
}

SimilarityMatrix wc_similarity(const SimilarityMatrix& ssm, const SimilarityMatrix& cdm, const SimilarityMatrix& csm,
                               const WcWeights& weights) {
  const Eigen::Index n = ssm.size();
  for (const auto* m : {&ssm, &cdm, &csm})
    if (m->values.rows() != n || m->values.cols() != n)
      throw DimensionMismatch("similarity matrices differ in size");
  if (weights.ssm < 0 || weights.cdm < 0 || weights.csm < 0) throw WeightError("WC weights must be non-negative");
  if (std::abs(weights.ssm + weights.cdm + weights.csm - 1.0) > 1e-9) throw WeightError("WC weights must sum to 1");
  SimilarityMatrix out{SimilarityKind::Combined,
                       weights.ssm * ssm.values + weights.cdm * cdm.values + weights.csm * csm.values};
  out.values.diagonal().setOnes();
  return out;
}

FeatureMatrix method_features(const ClassFacts& facts, const ModelSpec& spec) {
  switch (spec.embedding) {
    case Embedding::LSI: return lsi_embed(tfidf(bags_of_words(facts)), spec.semantic.lsi_rank);
    case Embedding::LDA: return lda_embed(bags_of_words(facts), spec.semantic.lda);
    case Embedding::BERT:
    case Embedding::CODEBERT:
      if (!spec.external_vector_path) throw ConfigError(spec.name() + " needs a vector file");
      return load_external_vectors_file(*spec.external_vector_path, facts);
  }
  throw Error("unknown embedding");
}

ModelRun run_model(const ClassFacts& facts, const ModelSpec& spec) {
  spec.validate();
  facts.validate();
  if (facts.size() == 0) throw DataError("class '" + facts.class_name + "' has no methods");
  const FeatureMatrix features = method_features(facts, spec);
  ModelRun run;
  if (spec.combiner == Combiner::WC) {
    run.similarity = wc_similarity(ssm_matrix(facts), cdm_matrix(facts), cosine_matrix(features), spec.weights);
  } else if (facts.size() < 2) {
    run.similarity = {SimilarityKind::Latent, Eigen::MatrixXd::Ones(1, 1)};
  } else {
    const ClassGraph graph = build_class_graph(facts, features.rows, 0.5, 0.5, spec.edge_threshold);
    const TrainResult trained = train(graph.adjacency, graph.features, spec.vgae);
    run.training_trace = trained.model.training_trace;
    run.similarity = cosine_matrix(trained.latent.z, SimilarityKind::Latent);
  }
  run.partition = refactor(run.similarity, spec.cluster);
  run.report = evaluate(facts, run.partition);
  return run;
}

std::string partition_to_json(const Partition& partition) {
  nlohmann::ordered_json j;
  j["k"] = partition.k;
  j["labels"] = partition.labels;
  j["noise_assigned"] = std::vector<std::size_t>(partition.noise_assigned.begin(), partition.noise_assigned.end());
  j["warnings"] = partition.warnings;
  return j.dump(2) + "\n";
}

Partition partition_from_json(const std::string& json_text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", e.what());
  }
  if (!j.is_object()) throw SchemaError("$", "expected object");
  Partition p;
  if (!j.contains("k") || !j["k"].is_number_integer() || j["k"].get<long long>() < 1)
    throw SchemaError("k", "expected positive integer");
  p.k = j["k"].get<int>();
  if (!j.contains("labels") || !j["labels"].is_array()) throw SchemaError("labels", "expected array");
  for (std::size_t i = 0; i < j["labels"].size(); ++i) {
    const auto& v = j["labels"][i];
    const std::string path = "labels[" + std::to_string(i) + "]";
    if (!v.is_number_integer()) throw SchemaError(path, "expected integer");
    const auto label = v.get<long long>();
    if (label < 0 || label >= p.k) throw SchemaError(path, "label outside 0..k-1");
    p.labels.push_back(static_cast<int>(label));
  }
  if (j.contains("noise_assigned")) {
    if (!j["noise_assigned"].is_array()) throw SchemaError("noise_assigned", "expected array");
    for (std::size_t i = 0; i < j["noise_assigned"].size(); ++i) {
      const auto& v = j["noise_assigned"][i];
      if (!v.is_number_unsigned() || v.get<std::size_t>() >= p.labels.size())
        throw SchemaError("noise_assigned[" + std::to_string(i) + "]", "expected a method id");
      p.noise_assigned.insert(v.get<std::size_t>());
    }
  }
  if (j.contains("warnings")) {
    if (!j["warnings"].is_array()) throw SchemaError("warnings", "expected array");
    for (std::size_t i = 0; i < j["warnings"].size(); ++i) {
      if (!j["warnings"][i].is_string()) throw SchemaError("warnings[" + std::to_string(i) + "]", "expected string");
      p.warnings.push_back(j["warnings"][i].get<std::string>());
    }
  }
  return p;
}

Comparison compare(const std::vector<CorpusClass>& corpus, const std::vector<ModelSpec>& specs,
                   std::optional<std::size_t> before_after_spec) {
  if (before_after_spec && *before_after_spec >= specs.size())
    throw ConfigError("before/after model index out of range");
  Comparison out;
  out.before_after_spec = before_after_spec;
  for (const auto& spec : specs) out.spec_names.push_back(spec.name());
  for (const auto& entry : corpus) {
    out.class_names.push_back(entry.facts.class_name);
    out.systems.push_back(entry.system);
    auto& row = out.cells.emplace_back();
    for (const auto& spec : specs) {
      Cell cell;
      if (!entry.load_error.empty()) {
        cell.error = entry.load_error;
        row.push_back(std::move(cell));
        continue;
      }
      try {
        auto run = run_model(entry.facts, resolve_for_class(spec, entry.facts.class_name));
        cell.report = std::move(run.report);
        cell.warnings = std::move(run.partition.warnings);
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
      row.push_back(std::move(cell));
    }
  }
  return out;
}

namespace {

double metric_of(const MetricsReport& r, Metric metric) { return metric == Metric::LCOM ? r.mean_lcom : r.mean_mpc; }

// Indices of the lowest cells in a row (ties all count).
std::vector<std::size_t> best_cells(const std::vector<Cell>& row, Metric metric) {
  std::vector<std::size_t> best;
  double lowest = 0.0;
  for (std::size_t s = 0; s < row.size(); ++s) {
    if (!row[s].report) continue;
    const double v = metric_of(*row[s].report, metric);
    if (best.empty() || v < lowest) {
      best = {s};
      lowest = v;
    } else if (v == lowest) {
      best.push_back(s);
    }
  }
  return best;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

template <typename T>
std::string join(const std::vector<T>& values, const std::string& sep) {
  std::ostringstream out;
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? sep : "") << values[i];
  return out.str();
}

}  // namespace

void write_comparison_csv(const Comparison& c, Metric metric, std::ostream& out) {
  out << "class";
  for (const auto& name : c.spec_names) out << ',' << csv_field(name);
  out << ",best\n";
  for (std::size_t i = 0; i < c.class_names.size(); ++i) {
    out << csv_field(c.class_names[i]);
    for (const auto& cell : c.cells[i]) {
      out << ',';
      if (cell.report) out << format_double(metric_of(*cell.report, metric));
    }
    std::vector<std::string> names;
    for (auto s : best_cells(c.cells[i], metric)) names.push_back(c.spec_names[s]);
    out << ',' << csv_field(join(names, ";")) << '\n';
  }
}

void write_comparison_markdown(const Comparison& c, Metric metric, std::ostream& out) {
  out << "| Class |";
  for (const auto& name : c.spec_names) out << ' ' << name << " |";
  out << "\n|---|";
  for (std::size_t s = 0; s < c.spec_names.size(); ++s) out << "---:|";
  out << '\n';
  for (std::size_t i = 0; i < c.class_names.size(); ++i) {
    const auto best = best_cells(c.cells[i], metric);
    out << "| " << c.class_names[i] << " |";
    for (std::size_t s = 0; s < c.cells[i].size(); ++s) {
      const auto& cell = c.cells[i][s];
      if (!cell.report) {
        out << " n/a |";
        continue;
      }
      const std::string v = format_fixed(metric_of(*cell.report, metric), 2);
      const bool is_best = std::find(best.begin(), best.end(), s) != best.end();
      out << ' ' << (is_best ? "**" + v + "**" : v) << " |";
    }
    out << '\n';
  }
}

void write_before_after_markdown(const Comparison& c, std::ostream& out) {
  if (!c.before_after_spec) return;
  const std::size_t s = *c.before_after_spec;
  out << "Before/after refactoring with " << c.spec_names[s] << "\n\n"
      << "| System | Class | LCOM | MPC | #splits | LCOM after | MPC after |\n"
      << "|---|---|---:|---:|---:|---|---|\n";
  for (std::size_t i = 0; i < c.class_names.size(); ++i) {
    const auto& cell = c.cells[i][s];
    out << "| " << c.systems[i] << " | " << c.class_names[i] << " | ";
    if (!cell.report) {
      out << "n/a | n/a | n/a | n/a | n/a |\n";
      continue;
    }
    std::vector<std::size_t> lcoms, mpcs;
    for (const auto& sub : cell.report->per_class) {
      lcoms.push_back(sub.lcom);
      mpcs.push_back(sub.mpc);
    }
    out << cell.report->original_lcom << " | " << cell.report->original_mpc << " | " << cell.report->per_class.size()
        << " | " << join(lcoms, ", ") << " | " << join(mpcs, ", ") << " |\n";
  }
}

void write_before_after_csv(const Comparison& c, std::ostream& out) {
  if (!c.before_after_spec) return;
  const std::size_t s = *c.before_after_spec;
  out << "system,class,lcom,mpc,splits,lcom_after,mpc_after\n";
  for (std::size_t i = 0; i < c.class_names.size(); ++i) {
    const auto& cell = c.cells[i][s];
    out << csv_field(c.systems[i]) << ',' << csv_field(c.class_names[i]) << ',';
    if (!cell.report) {
      out << ",,,,\n";
      continue;
    }
    std::vector<std::size_t> lcoms, mpcs;
    for (const auto& sub : cell.report->per_class) {
      lcoms.push_back(sub.lcom);
      mpcs.push_back(sub.mpc);
    }
    out << cell.report->original_lcom << ',' << cell.report->original_mpc << ',' << cell.report->per_class.size()
        << ',' << join(lcoms, ";") << ',' << join(mpcs, ";") << '\n';
  }
}

void write_failures_csv(const Comparison& c, std::ostream& out) {
  out << "class,model,error\n";
  for (std::size_t i = 0; i < c.class_names.size(); ++i)
    for (std::size_t s = 0; s < c.spec_names.size(); ++s)
      if (!c.cells[i][s].report)
        out << csv_field(c.class_names[i]) << ',' << csv_field(c.spec_names[s]) << ','
            << csv_field(c.cells[i][s].error) << '\n';
}

HarnessConfig load_config(const TomlDocument& doc) {
  static const std::vector<std::string> known_sections{"",        "compare", "weights", "model.vgae",
                                                       "cluster", "semantic", "vectors"};
  for (const auto& [name, values] : doc)
    if (std::find(known_sections.begin(), known_sections.end(), name) == known_sections.end())
      throw ConfigError("unknown section [" + name + "]");
  section(doc, "").expect_only({});

  ModelSpec base;
  const auto weights = section(doc, "weights");
  weights.expect_only({"ssm", "cdm", "csm"});
  base.weights.ssm = weights.get_number("ssm", base.weights.ssm);
  base.weights.cdm = weights.get_number("cdm", base.weights.cdm);
  base.weights.csm = weights.get_number("csm", base.weights.csm);

  const auto vgae = section(doc, "model.vgae");
  vgae.expect_only({"hidden_dim", "latent_dim", "learning_rate", "epochs", "seed", "weight_init_scale",
                    "center_features", "edge_threshold"});
  base.vgae.hidden_dim = static_cast<int>(vgae.get_integer("hidden_dim", base.vgae.hidden_dim));
  base.vgae.latent_dim = static_cast<int>(vgae.get_integer("latent_dim", base.vgae.latent_dim));
  base.vgae.learning_rate = vgae.get_number("learning_rate", base.vgae.learning_rate);
  base.vgae.epochs = static_cast<int>(vgae.get_integer("epochs", base.vgae.epochs));
  base.vgae.seed = static_cast<std::uint64_t>(vgae.get_integer("seed", static_cast<long long>(base.vgae.seed)));
  base.vgae.weight_init_scale = vgae.get_number("weight_init_scale", base.vgae.weight_init_scale);
  base.vgae.center_features = vgae.get_bool("center_features", base.vgae.center_features);
  base.edge_threshold = vgae.get_number("edge_threshold", base.edge_threshold);

  const auto cluster = section(doc, "cluster");
  cluster.expect_only({"min_methods", "xi", "min_step", "max_link_distance"});
  const long long min_methods = cluster.get_integer("min_methods", static_cast<long long>(base.cluster.min_methods));
  if (min_methods < 2) throw ConfigError("cluster.min_methods must be at least 2");
  base.cluster.min_methods = static_cast<std::size_t>(min_methods);
  base.cluster.xi = cluster.get_number("xi", base.cluster.xi);
  base.cluster.min_step = cluster.get_number("min_step", base.cluster.min_step);
  base.cluster.max_link_distance = cluster.get_number("max_link_distance", base.cluster.max_link_distance);

  const auto semantic = section(doc, "semantic");
  semantic.expect_only({"lsi_rank", "lda_topics", "lda_iterations", "lda_alpha", "lda_beta", "lda_seed"});
  base.semantic.lsi_rank = static_cast<int>(semantic.get_integer("lsi_rank", base.semantic.lsi_rank));
  const int topics = static_cast<int>(semantic.get_integer("lda_topics", base.semantic.lda.topics));
  base.semantic.lda = LdaConfig::with_topics(topics);
  base.semantic.lda.iterations = static_cast<int>(semantic.get_integer("lda_iterations", base.semantic.lda.iterations));
  base.semantic.lda.alpha = semantic.get_number("lda_alpha", base.semantic.lda.alpha);
  base.semantic.lda.beta = semantic.get_number("lda_beta", base.semantic.lda.beta);
  base.semantic.lda.seed = static_cast<std::uint64_t>(
      semantic.get_integer("lda_seed", static_cast<long long>(base.semantic.lda.seed)));

  const auto vectors = section(doc, "vectors");
  vectors.expect_only({"bert", "codebert"});

  const auto cmp = section(doc, "compare");
  cmp.expect_only({"models", "before_after"});
  HarnessConfig out;
  for (const auto& name : cmp.get_strings("models", {"WC+LSI", "WC+LDA", "VGAE+LSI", "VGAE+LDA"})) {
    const ModelSpec parsed = parse_model_name(name);
    ModelSpec spec = base;
    spec.combiner = parsed.combiner;
    spec.embedding = parsed.embedding;
    if (spec.embedding == Embedding::BERT && vectors.has("bert"))
      spec.external_vector_path = vectors.get_string("bert", "");
    if (spec.embedding == Embedding::CODEBERT && vectors.has("codebert"))
      spec.external_vector_path = vectors.get_string("codebert", "");
    spec.validate();
    for (const auto& other : out.models)
      if (other.name() == spec.name()) throw ConfigError("model " + spec.name() + " listed twice");
    out.models.push_back(spec);
  }
  if (out.models.empty()) throw ConfigError("compare.models is empty");
  if (cmp.has("before_after")) {
    const std::string wanted = parse_model_name(cmp.get_string("before_after", "")).name();
    for (std::size_t i = 0; i < out.models.size(); ++i)
      if (out.models[i].name() == wanted) out.before_after_model = i;
    if (!out.before_after_model) throw ConfigError("before_after model " + wanted + " is not in compare.models");
  } else {
    // default: the first VGAE model, else the first model
    for (std::size_t i = 0; i < out.models.size() && !out.before_after_model; ++i)
      if (out.models[i].combiner == Combiner::VGAE) out.before_after_model = i;
    if (!out.before_after_model) out.before_after_model = 0;
  }
  return out;
}

HarnessConfig load_config_file(const std::string& path) {
  HarnessConfig config = load_config(parse_toml_file(path));
  const fs::path base = fs::path(path).parent_path();
  for (auto& spec : config.models)
    if (spec.external_vector_path && fs::path(*spec.external_vector_path).is_relative())
      spec.external_vector_path = (base / *spec.external_vector_path).string();
  return config;
}

ModelSpec resolve_for_class(ModelSpec spec, const std::string& class_name) {
  if (spec.external_vector_path) {
    std::string& path = *spec.external_vector_path;
    for (auto pos = path.find("{class}"); pos != std::string::npos; pos = path.find("{class}", pos))
      path.replace(pos, 7, class_name);
  }
  return spec;
}

std::vector<CorpusClass> load_corpus_dir(const std::string& dir) {
  if (!fs::is_directory(dir)) throw DataError("corpus directory '" + dir + "' does not exist");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.ends_with(".java") || name.ends_with(".facts.json")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<CorpusClass> corpus;
  for (const auto& file : files) {
    CorpusClass entry;
    try {
      if (file.extension() == ".java") {
        std::ifstream in(file, std::ios::binary);
        std::stringstream buffer;
        buffer << in.rdbuf();
        entry.facts = parse_class(buffer.str(), file.filename().string());
      } else {
        entry.facts = load_facts_file(file.string());
      }
    } catch (const DataError& e) {
      std::string stem = file.filename().string();
      stem = stem.substr(0, stem.find('.'));
      entry.facts = ClassFacts{};
      entry.facts.class_name = stem;
      entry.facts.source_id = file.filename().string();
      entry.load_error = e.what();
    }
    corpus.push_back(std::move(entry));
  }
  return corpus;
}

}  // namespace godsplit
