#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vinsta {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied parameter is outside its documented range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Segmentation cannot place the requested number of boundaries.
class InfeasiblePartitionError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Input data violates a precondition (empty track, shape mismatch, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}
  explicit FormatError(const std::string& what) : Error(what) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_ = 0;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class TemplateError : public Error {
 public:
  using Error::Error;
};

}  // namespace vinsta
