#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace godsplit {

// Base of every error the library raises. The CLI maps DataError subclasses
// to exit code 2 and anything else to 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Problems with the user's input data (source files, facts, vectors, configs).
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : DataError(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UnsupportedConstruct : public DataError {
 public:
  using DataError::DataError;
};

// Malformed JSON document; path() names the offending field ("methods[3].arity").
class SchemaError : public DataError {
 public:
  explicit SchemaError(std::string path, const std::string& detail = {})
      : DataError("schema error at '" + path + "'" + (detail.empty() ? "" : ": " + detail)),
        path_(std::move(path)) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class IndexError : public DataError {
 public:
  using DataError::DataError;
};

class WeightError : public DataError {
 public:
  using DataError::DataError;
};

class DimensionMismatch : public DataError {
 public:
  using DataError::DataError;
};

class EmptyCorpus : public DataError {
 public:
  EmptyCorpus() : DataError("corpus is empty: every bag of words is empty") {}
};

class MissingMethod : public DataError {
 public:
  explicit MissingMethod(std::size_t id)
      : DataError("vector file has no entry for method " + std::to_string(id)), id_(id) {}

  std::size_t id() const { return id_; }

 private:
  std::size_t id_;
};

class ConfigError : public DataError {
 public:
  using DataError::DataError;
};

class TooFewMethods : public DataError {
 public:
  TooFewMethods(std::size_t n, std::size_t min_methods)
      : DataError("OPTICS needs at least " + std::to_string(min_methods) + " methods, got " +
                  std::to_string(n)) {}
};

class NoClusters : public DataError {
 public:
  NoClusters() : DataError("every method is noise; no cluster was extracted") {}
};

class NonFiniteLoss : public Error {
 public:
  explicit NonFiniteLoss(int epoch)
      : Error("VGAE loss became non-finite at epoch " + std::to_string(epoch)), epoch_(epoch) {}

  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

class NetworkError : public DataError {
 public:
  using DataError::DataError;
};

class ChecksumMismatch : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace godsplit
