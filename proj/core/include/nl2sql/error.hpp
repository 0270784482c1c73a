#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace nl2sql {

/// Base class for every error raised by the toolkit. `kind()` is a stable,
/// machine-parseable identifier used by the command line front end.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message);

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::string token, const std::string& message);

  std::size_t position() const noexcept { return position_; }
  const std::string& token() const noexcept { return token_; }

 private:
  std::size_t position_;
  std::string token_;
};

class UnsupportedStatement : public Error {
 public:
  explicit UnsupportedStatement(std::string keyword);

  const std::string& keyword() const noexcept { return keyword_; }

 private:
  std::string keyword_;
};

class FormatError : public Error {
 public:
  FormatError(std::string source, std::ptrdiff_t index, const std::string& message);

  /// Entry index inside the source, or -1 when the error is file-level.
  std::ptrdiff_t index() const noexcept { return index_; }

 private:
  std::ptrdiff_t index_;
};

class MissingField : public Error {
 public:
  MissingField(std::string field, std::ptrdiff_t index);

  const std::string& field() const noexcept { return field_; }
  std::ptrdiff_t index() const noexcept { return index_; }

 private:
  std::string field_;
  std::ptrdiff_t index_;
};

class IoError : public Error {
 public:
  IoError(std::string path, const std::string& message);

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class DatabaseUnreadable : public Error {
 public:
  DatabaseUnreadable(std::string path, const std::string& message);

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class InsufficientBucket : public Error {
 public:
  InsufficientBucket(std::string bucket, std::size_t available, std::size_t required);

  const std::string& bucket() const noexcept { return bucket_; }
  std::size_t available() const noexcept { return available_; }
  std::size_t required() const noexcept { return required_; }

 private:
  std::string bucket_;
  std::size_t available_;
  std::size_t required_;
};

/// Generic precondition failure carrying its own kind (SizeMismatch,
/// SchemaMismatch, EmptyQuestion, AuthMissing, IncompletePredictions,
/// MissingDatabase, MissingReport, ConfigError, ...).
class InvalidArgument : public Error {
 public:
  InvalidArgument(std::string kind, const std::string& message) : Error(std::move(kind), message) {}
};

}  // namespace nl2sql
