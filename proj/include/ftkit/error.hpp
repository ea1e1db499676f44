#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ftkit {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document. Carries the byte offset where parsing failed.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : Error("parse error at byte " + std::to_string(offset) + ": " + msg),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

enum class Severity { kWarning, kError };

struct Diagnostic {
  Severity severity = Severity::kError;
  std::string location;  ///< Id of the offending gate or event.
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Structurally valid document that violates a fault-tree invariant.
class ValidityError : public Error {
 public:
  explicit ValidityError(std::vector<Diagnostic> diagnostics)
      : Error(Summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

  const std::vector<Diagnostic>& diagnostics() const noexcept {
    return diagnostics_;
  }

 private:
  static std::string Summarize(const std::vector<Diagnostic>& diags) {
    std::string text = "invalid fault tree";
    for (const auto& d : diags) {
      if (d.severity != Severity::kError) continue;
      text += "\n  " + d.location + ": " + d.message;
    }
    return text;
  }

  std::vector<Diagnostic> diagnostics_;
};

/// Arguments outside the mathematical domain of an operation
/// (negative rates, missing probabilities, degenerate divisions).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A resource cap (BDD node budget, exhaustive-check event limit) was hit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace ftkit
