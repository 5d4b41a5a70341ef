#include "godsplit/corpus.hpp"

#include <filesystem>
#include <fstream>

#include <curl/curl.h>
#include <openssl/evp.h>

#include "godsplit/error.hpp"
#include "godsplit/java_parser.hpp"

namespace godsplit {

namespace fs = std::filesystem;

CorpusManifest load_manifest(const TomlDocument& doc) {
  CorpusManifest manifest;
  for (const auto& [name, values] : doc) {
    if (name.empty()) {
      section(doc, "").expect_only({});
      continue;
    }
    if (!name.starts_with("class.") || name.size() == 6)
      throw ConfigError("unexpected manifest section [" + name + "]; entries are [class.<Name>]");
    const auto s = section(doc, name);
    s.expect_only({"system", "url", "revision", "sha256", "methods", "lcom", "mpc"});
    ManifestEntry e;
    e.class_name = name.substr(6);
    e.system = s.get_string("system", "");
    e.url = s.get_string("url", "");
    e.revision = s.get_string("revision", "");
    e.sha256 = s.get_string("sha256", "");
    if (e.url.empty()) throw ConfigError(name + ".url is required");
    const long long methods = s.get_integer("methods", 0);
    if (methods <= 0) throw ConfigError(name + ".methods must be a positive integer");
    e.expected_methods = static_cast<std::size_t>(methods);
    if (s.has("lcom")) e.reference_lcom = static_cast<std::size_t>(std::max(0LL, s.get_integer("lcom", 0)));
    if (s.has("mpc")) e.reference_mpc = static_cast<std::size_t>(std::max(0LL, s.get_integer("mpc", 0)));
    for (char& c : e.sha256) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

CorpusManifest load_manifest_file(const std::string& path) { return load_manifest(parse_toml_file(path)); }

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 computation failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

namespace {

std::size_t append_body(char* data, std::size_t size, std::size_t count, void* user) {
  static_cast<std::string*>(user)->append(data, size * count);
  return size * count;
}

struct CurlGlobal {
  CurlGlobal() { curl_global_init(CURL_GLOBAL_DEFAULT); }
  ~CurlGlobal() { curl_global_cleanup(); }
};

}  // namespace

std::string download(const std::string& url, const std::string& what) {
  static CurlGlobal global;
  CURL* curl = curl_easy_init();
  if (!curl) throw NetworkError(what + ": cannot initialise libcurl");
  std::string body;
  char error[CURL_ERROR_SIZE] = {0};
  curl_easy_setopt(curl, CURLOPT_URL, url.c_str());
  curl_easy_setopt(curl, CURLOPT_WRITEFUNCTION, append_body);
  curl_easy_setopt(curl, CURLOPT_WRITEDATA, &body);
  curl_easy_setopt(curl, CURLOPT_ERRORBUFFER, error);
  curl_easy_setopt(curl, CURLOPT_FOLLOWLOCATION, 1L);
  curl_easy_setopt(curl, CURLOPT_FAILONERROR, 1L);
  curl_easy_setopt(curl, CURLOPT_CONNECTTIMEOUT, 15L);
  curl_easy_setopt(curl, CURLOPT_TIMEOUT, 120L);
  curl_easy_setopt(curl, CURLOPT_PROTOCOLS, static_cast<long>(CURLPROTO_HTTP | CURLPROTO_HTTPS | CURLPROTO_FILE));
  const CURLcode rc = curl_easy_perform(curl);
  curl_easy_cleanup(curl);
  if (rc != CURLE_OK)
    throw NetworkError(what + ": cannot download " + url + ": " + (error[0] ? error : curl_easy_strerror(rc)));
  return body;
}

std::vector<FetchedClass> fetch_corpus(const CorpusManifest& manifest, const std::string& out_dir) {
  std::vector<FetchedClass> out;
  if (manifest.entries.empty()) return out;
  fs::create_directories(out_dir);
  for (const auto& entry : manifest.entries) {
    FetchedClass fetched;
    fetched.entry = entry;
    const std::string body = download(entry.url, entry.class_name);
    fetched.sha256 = sha256_hex(body);
    if (entry.sha256.empty())
      fetched.warnings.push_back("no checksum pinned; downloaded sha256 " + fetched.sha256);
    else if (entry.sha256 != fetched.sha256)
      throw ChecksumMismatch(entry.class_name + ": expected sha256 " + entry.sha256 + ", got " + fetched.sha256);
    fetched.path = (fs::path(out_dir) / (entry.class_name + ".java")).string();
    std::ofstream(fetched.path, std::ios::binary) << body;
    try {
      auto result = parse_class_with_report(body, entry.class_name + ".java");
      for (const auto& w : result.report.warnings) fetched.warnings.push_back(w);
      if (result.facts.size() != entry.expected_methods)
        fetched.warnings.push_back("parsed " + std::to_string(result.facts.size()) + " methods, manifest expects " +
                                   std::to_string(entry.expected_methods));
      fetched.facts = std::move(result.facts);
    } catch (const DataError& e) {
      fetched.warnings.push_back(std::string("parse failed: ") + e.what());
    }
    out.push_back(std::move(fetched));
  }
  return out;
}

}  // namespace godsplit
