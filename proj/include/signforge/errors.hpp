// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace signforge {

/// Root of every domain error raised by the toolkit. Contract violations
/// (caller bugs) use the standard std::invalid_argument / std::out_of_range.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document. `offset()` is the byte position reported by the
/// parser, or npos when the format has no meaningful offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset = std::string::npos)
      : Error(what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Cross-reference failure, e.g. an annotation naming an unknown image id.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace signforge
