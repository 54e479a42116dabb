#pragma once

#include <stdexcept>
#include <string>

namespace panoclust {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid algorithm parameter or argument size mismatch.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed binary scan or label file.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Malformed class config, scene file or settings file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Ground truth and prediction cannot be compared.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

}  // namespace panoclust
