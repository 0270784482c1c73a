#include "nl2sql/error.hpp"

#include <utility>

namespace nl2sql {

Error::Error(std::string kind, const std::string& message)
    : std::runtime_error(message), kind_(std::move(kind)) {}

SyntaxError::SyntaxError(std::size_t position, std::string token, const std::string& message)
    : Error("SyntaxError", message + " at offset " + std::to_string(position) +
                               (token.empty() ? std::string(" (end of input)") : " near \"" + token + "\"")),
      position_(position),
      token_(std::move(token)) {}

UnsupportedStatement::UnsupportedStatement(std::string keyword)
    : Error("UnsupportedStatement", "only SELECT statements are supported, got " + keyword),
      keyword_(std::move(keyword)) {}

FormatError::FormatError(std::string source, std::ptrdiff_t index, const std::string& message)
    : Error("FormatError",
            source + (index >= 0 ? " entry " + std::to_string(index) : std::string()) + ": " + message),
      index_(index) {}

MissingField::MissingField(std::string field, std::ptrdiff_t index)
    : Error("MissingField", "entry " + std::to_string(index) + " is missing field \"" + field + "\""),
      field_(std::move(field)),
      index_(index) {}

IoError::IoError(std::string path, const std::string& message)
    : Error("IoError", path + ": " + message), path_(std::move(path)) {}

DatabaseUnreadable::DatabaseUnreadable(std::string path, const std::string& message)
    : Error("DatabaseUnreadable", path + ": " + message), path_(std::move(path)) {}

InsufficientBucket::InsufficientBucket(std::string bucket, std::size_t available, std::size_t required)
    : Error("InsufficientBucket", "bucket " + bucket + " has " + std::to_string(available) +
                                      " examples, " + std::to_string(required) + " required"),
      bucket_(std::move(bucket)),
      available_(available),
      required_(required) {}

}  // namespace nl2sql
