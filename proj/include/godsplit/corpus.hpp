#pragma once

#include <optional>
#include <string>
#include <vector>

#include "godsplit/class_facts.hpp"
#include "godsplit/toml.hpp"

namespace godsplit {

struct ManifestEntry {
  std::string class_name;
  std::string system;
  std::string url;
  std::string revision;
  std::string sha256;  // lowercase hex; empty when not pinned
  std::size_t expected_methods = 0;
  std::optional<std::size_t> reference_lcom;  // published before-refactoring values, if any
  std::optional<std::size_t> reference_mpc;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;
};

// One [class.<Name>] section per entry with keys system, url, revision,
// sha256, methods, and optionally lcom and mpc. Throws ConfigError.
CorpusManifest load_manifest(const TomlDocument& doc);
CorpusManifest load_manifest_file(const std::string& path);

// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(const std::string& data);

// Body of `url` (http, https or file). Throws NetworkError naming `what`.
std::string download(const std::string& url, const std::string& what);

struct FetchedClass {
  ManifestEntry entry;
  std::string path;  // where the source was written
  std::optional<ClassFacts> facts;
  std::string sha256;
  std::vector<std::string> warnings;
};

// Downloads each entry into out_dir/<class>.java, checks the pinned checksum
// and parses the class. A method count differing from the manifest, a parse
// failure or a missing checksum pin are warnings. Throws NetworkError or
// ChecksumMismatch.
std::vector<FetchedClass> fetch_corpus(const CorpusManifest& manifest, const std::string& out_dir);

}  // namespace godsplit
