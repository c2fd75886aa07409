#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pairprod {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidPresetError : public Error {
 public:
  using Error::Error;
};

/// Grid too coarse to resolve the nuclei layout.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Matching system at x = -L is singular to working precision.
class DegenerateMatchingError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration; key_path() names the offending key (empty when the
/// problem concerns the document as a whole).
class ConfigError : public Error {
 public:
  ConfigError(std::string key_path, const std::string& message)
      : Error(key_path.empty() ? message : key_path + ": " + message), key_path_(std::move(key_path)) {}

  const std::string& key_path() const { return key_path_; }

 private:
  std::string key_path_;
};

}  // namespace pairprod
