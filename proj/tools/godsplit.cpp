#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "godsplit/class_facts.hpp"
#include "godsplit/corpus.hpp"
#include "godsplit/error.hpp"
#include "godsplit/harness.hpp"
#include "godsplit/java_parser.hpp"
#include "godsplit/metrics.hpp"
#include "godsplit/synthetic.hpp"

namespace fs = std::filesystem;
using namespace godsplit;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

template <typename F>
std::string render(F&& f) {
  std::ostringstream out;
  f(out);
  return out.str();
}

void warn(const std::string& what) { std::cerr << "warning: " << what << '\n'; }

struct ExtractArgs {
  std::string input;
  std::string output;
  bool exclude_accessors = false;
};

void run_extract(const ExtractArgs& a) {
  ParseOptions options;
  options.exclude_accessors = a.exclude_accessors;
  const auto result = parse_class_with_report(read_file(a.input), fs::path(a.input).filename().string(), options);
  for (const auto& w : result.report.warnings) warn(w);
  const std::string json = save_facts(result.facts);
  if (a.output.empty() || a.output == "-")
    std::cout << json;
  else
    write_file(a.output, json);
}

struct RefactorArgs {
  std::string facts;
  std::string model = "vgae";
  std::string embedding = "lsi";
  std::string vectors;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string trace;
};

void run_refactor(const RefactorArgs& a) {
  const ClassFacts facts = load_facts_file(a.facts);
  ModelSpec spec;
  if (!a.config.empty()) {
    const HarnessConfig config = load_config_file(a.config);
    spec = config.models.front();
  }
  const ModelSpec named = parse_model_name(a.model + "+" + a.embedding);
  spec.combiner = named.combiner;
  spec.embedding = named.embedding;
  if (!a.vectors.empty()) spec.external_vector_path = a.vectors;
  if (spec.embedding != Embedding::BERT && spec.embedding != Embedding::CODEBERT) spec.external_vector_path.reset();
  if (a.seed) {
    spec.vgae.seed = *a.seed;
    spec.semantic.lda.seed = *a.seed;
  }
  const ModelRun run = run_model(facts, resolve_for_class(spec, facts.class_name));
  for (const auto& w : run.partition.warnings) warn(w);
  const std::string json = partition_to_json(run.partition);
  if (a.output.empty() || a.output == "-")
    std::cout << json;
  else
    write_file(a.output, json);
  if (!a.trace.empty()) {
    if (spec.combiner != Combiner::VGAE) throw ConfigError("--trace needs the vgae model");
    VgaeModel model;
    model.training_trace = run.training_trace;
    write_file(a.trace, render([&](std::ostream& out) { write_trace_csv(model, out); }));
  }
}

struct EvaluateArgs {
  std::string facts;
  std::string partition;
  std::string format = "csv";
};

void run_evaluate(const EvaluateArgs& a) {
  const ClassFacts facts = load_facts_file(a.facts);
  const Partition partition = partition_from_json(read_file(a.partition));
  const MetricsReport report = evaluate(facts, partition);
  if (a.format == "markdown")
    write_report_markdown(report, facts.class_name, std::cout);
  else
    write_report_csv(report, std::cout);
}

struct CompareArgs {
  std::string config;
  std::string corpus;
  std::string output;
};

void run_compare(const CompareArgs& a) {
  HarnessConfig config;
  if (a.config.empty())
    config = load_config(TomlDocument{});
  else
    config = load_config_file(a.config);
  const auto corpus = load_corpus_dir(a.corpus);
  if (corpus.empty()) throw DataError("no *.java or *.facts.json files in '" + a.corpus + "'");
  for (const auto& c : corpus)
    if (!c.load_error.empty()) warn(c.facts.source_id + ": " + c.load_error);
  const Comparison cmp = compare(corpus, config.models, config.before_after_model);
  const fs::path out = a.output;
  fs::create_directories(out);
  write_file(out / "lcom.csv", render([&](std::ostream& o) { write_comparison_csv(cmp, Metric::LCOM, o); }));
  write_file(out / "mpc.csv", render([&](std::ostream& o) { write_comparison_csv(cmp, Metric::MPC, o); }));
  write_file(out / "lcom.md", render([&](std::ostream& o) { write_comparison_markdown(cmp, Metric::LCOM, o); }));
  write_file(out / "mpc.md", render([&](std::ostream& o) { write_comparison_markdown(cmp, Metric::MPC, o); }));
  write_file(out / "before_after.csv", render([&](std::ostream& o) { write_before_after_csv(cmp, o); }));
  write_file(out / "before_after.md", render([&](std::ostream& o) { write_before_after_markdown(cmp, o); }));
  write_file(out / "failures.csv", render([&](std::ostream& o) { write_failures_csv(cmp, o); }));
  std::size_t failed = 0;
  for (const auto& row : cmp.cells)
    for (const auto& cell : row) failed += !cell.error.empty();
  std::cout << cmp.class_names.size() << " classes x " << cmp.spec_names.size() << " models, " << failed
            << " failed cells; reports in " << out.string() << '\n';
}

struct FetchArgs {
  std::string manifest;
  std::string output = "corpus";
};

void run_fetch(const FetchArgs& a) {
  const CorpusManifest manifest = load_manifest_file(a.manifest);
  const auto fetched = fetch_corpus(manifest, a.output);
  for (const auto& f : fetched) {
    std::cout << f.entry.class_name << ": " << (f.facts ? std::to_string(f.facts->size()) : std::string("?"))
              << " methods (expected " << f.entry.expected_methods << ") -> " << f.path << '\n';
    for (const auto& w : f.warnings) warn(f.entry.class_name + ": " + w);
  }
}

struct SyntheticArgs {
  int classes = 10;
  std::uint64_t seed = 1;
  std::string output;
};

void run_gen_synthetic(const SyntheticArgs& a) {
  if (a.classes < 1) throw ConfigError("--classes must be at least 1");
  const fs::path out = a.output;
  fs::create_directories(out);
  for (const auto& spec : synthetic_corpus(a.classes, a.seed)) {
    const SyntheticClass c = generate_god_class(spec);
    write_file(out / (c.class_name + ".java"), c.source);
    write_file(out / (c.class_name + ".truth.json"), planted_to_json(c));
  }
  std::cout << a.classes << " synthetic classes written to " << out.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Split god classes into cohesive sub-classes"};
  app.require_subcommand(1);

  ExtractArgs extract;
  auto* cmd_extract = app.add_subcommand("extract", "Parse a Java class into a facts file");
  cmd_extract->add_option("java-file", extract.input)->required()->check(CLI::ExistingFile);
  cmd_extract->add_option("-o,--output", extract.output, "Facts file (stdout when omitted)");
  cmd_extract->add_flag("--exclude-accessors", extract.exclude_accessors, "Drop trivial getters and setters");

  RefactorArgs refactor;
  auto* cmd_refactor = app.add_subcommand("refactor", "Partition the methods of a class");
  cmd_refactor->add_option("facts", refactor.facts)->required()->check(CLI::ExistingFile);
  cmd_refactor->add_option("--model", refactor.model)->check(CLI::IsMember({"wc", "vgae"}, CLI::ignore_case));
  cmd_refactor->add_option("--embedding", refactor.embedding)
      ->check(CLI::IsMember({"lsi", "lda", "bert", "codebert"}, CLI::ignore_case));
  cmd_refactor->add_option("--vectors", refactor.vectors, "Vector file for bert/codebert");
  cmd_refactor->add_option("--config", refactor.config, "TOML config with model settings");
  cmd_refactor->add_option("--seed", refactor.seed, "Seed for VGAE and LDA");
  cmd_refactor->add_option("-o,--output", refactor.output, "Partition file (stdout when omitted)");
  cmd_refactor->add_option("--trace", refactor.trace, "Write the VGAE training trace as CSV");

  EvaluateArgs evaluate_args;
  auto* cmd_evaluate = app.add_subcommand("evaluate", "LCOM and MPC of a partition");
  cmd_evaluate->add_option("facts", evaluate_args.facts)->required()->check(CLI::ExistingFile);
  cmd_evaluate->add_option("partition", evaluate_args.partition)->required()->check(CLI::ExistingFile);
  cmd_evaluate->add_option("--format", evaluate_args.format)->check(CLI::IsMember({"csv", "markdown"}));

  CompareArgs compare_args;
  auto* cmd_compare = app.add_subcommand("compare", "Run every model on every class of a corpus");
  cmd_compare->add_option("--config", compare_args.config)->check(CLI::ExistingFile);
  cmd_compare->add_option("--corpus", compare_args.corpus)->required();
  cmd_compare->add_option("-o,--output", compare_args.output)->required();

  FetchArgs fetch;
  auto* cmd_fetch = app.add_subcommand("fetch-corpus", "Download the classes listed in a manifest");
  cmd_fetch->add_option("manifest", fetch.manifest)->required()->check(CLI::ExistingFile);
  cmd_fetch->add_option("-o,--output", fetch.output, "Target directory")->capture_default_str();

  SyntheticArgs synthetic;
  auto* cmd_synthetic = app.add_subcommand("gen-synthetic", "Write god classes with planted responsibilities");
  cmd_synthetic->add_option("--classes", synthetic.classes)->capture_default_str();
  cmd_synthetic->add_option("--seed", synthetic.seed)->capture_default_str();
  cmd_synthetic->add_option("-o,--output", synthetic.output)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (cmd_extract->parsed()) run_extract(extract);
    else if (cmd_refactor->parsed()) run_refactor(refactor);
    else if (cmd_evaluate->parsed()) run_evaluate(evaluate_args);
    else if (cmd_compare->parsed()) run_compare(compare_args);
    else if (cmd_fetch->parsed()) run_fetch(fetch);
    else if (cmd_synthetic->parsed()) run_gen_synthetic(synthetic);
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
