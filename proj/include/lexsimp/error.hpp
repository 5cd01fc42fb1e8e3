#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace lexsimp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input data: malformed files, invalid instances, degenerate inputs.
/// The CLI maps this family to exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Model backend failure. The CLI maps this family to exit code 3.
class ProviderFailure : public Error {
 public:
  using Error::Error;
};

class SequenceTooLong : public ProviderFailure {
 public:
  using ProviderFailure::ProviderFailure;
};

class TargetNotFound : public DataError {
 public:
  using DataError::DataError;
};

class EmptyCandidateSet : public DataError {
 public:
  using DataError::DataError;
};

class MissingFeature : public DataError {
 public:
  using DataError::DataError;
};

class DegenerateRanking : public DataError {
 public:
  using DataError::DataError;
};

class DegenerateColumn : public DataError {
 public:
  using DataError::DataError;
};

class EncodingError : public DataError {
 public:
  using DataError::DataError;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : DataError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public DataError {
 public:
  ConfigError(std::string key, const std::string& what)
      : DataError("config key '" + key + "': " + what), key_(std::move(key)) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace lexsimp
