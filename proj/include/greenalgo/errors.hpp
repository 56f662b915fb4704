#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace greenalgo {

/// Base of every error raised by the library. `code()` is a stable,
/// machine-readable identifier (snake_case) suitable for API responses.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// An input value is missing, malformed or outside its allowed range.
/// `field()` names the offending input.
class ValidationError : public Error {
 public:
  ValidationError(std::string code, std::string field, const std::string& message)
      : Error(std::move(code), message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A data file (catalog, job export, scaling curve) failed to load.
/// `line()` is 1-based; 0 when the problem is not tied to a line.
class DataError : public Error {
 public:
  DataError(std::string code, std::size_t line, std::string subject, const std::string& message)
      : Error(std::move(code), message), line_(line), subject_(std::move(subject)) {}

  std::size_t line() const noexcept { return line_; }
  /// Entry name, field or file the error refers to (may be empty).
  const std::string& subject() const noexcept { return subject_; }

 private:
  std::size_t line_;
  std::string subject_;
};

/// Catalog lookup miss. Carries the closest known names.
class NotFound : public Error {
 public:
  NotFound(std::string name, std::vector<std::string> suggestions, const std::string& what_kind,
           std::string field = {})
      : Error("not_found", make_message(name, suggestions, what_kind)),
        name_(std::move(name)),
        suggestions_(std::move(suggestions)),
        field_(std::move(field)) {}

  const std::string& name() const noexcept { return name_; }
  /// Request field that carried the name, when known.
  const std::string& field() const noexcept { return field_; }
  const std::vector<std::string>& suggestions() const noexcept { return suggestions_; }

 private:
  static std::string make_message(const std::string& name, const std::vector<std::string>& suggestions,
                                  const std::string& what_kind) {
    std::string msg = "unknown " + what_kind + " '" + name + "'";
    if (!suggestions.empty()) {
      msg += "; did you mean ";
      for (std::size_t i = 0; i < suggestions.size(); ++i) {
        if (i) msg += ", ";
        msg += "'" + suggestions[i] + "'";
      }
      msg += "?";
    }
    return msg;
  }

  std::string name_;
  std::vector<std::string> suggestions_;
  std::string field_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("io_error", message) {}
};

}  // namespace greenalgo
