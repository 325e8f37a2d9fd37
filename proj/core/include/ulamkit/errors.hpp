#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ulamkit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Stable machine-readable identifier, e.g. "SyntaxError".
  [[nodiscard]] virtual const char* kind() const noexcept { return "Error"; }
};

#define ULAMKIT_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                        \
   public:                                                           \
    using Error::Error;                                              \
    [[nodiscard]] const char* kind() const noexcept override {       \
      return #Name;                                                  \
    }                                                                \
  };

ULAMKIT_DEFINE_ERROR(UnknownFunction)
ULAMKIT_DEFINE_ERROR(DomainError)
ULAMKIT_DEFINE_ERROR(UnboundParameter)
ULAMKIT_DEFINE_ERROR(NotDifferentiable)
ULAMKIT_DEFINE_ERROR(MaxDepthExceeded)
ULAMKIT_DEFINE_ERROR(CoverageExceeded)
ULAMKIT_DEFINE_ERROR(RealityViolated)
ULAMKIT_DEFINE_ERROR(DegenerateLeadingCoefficient)
ULAMKIT_DEFINE_ERROR(InvalidInput)

#undef ULAMKIT_DEFINE_ERROR

class SyntaxError : public Error {
 public:
  SyntaxError(std::string message, std::size_t offset,
              std::vector<std::string> expected)
      : Error(std::move(message)),
        offset_(offset),
        expected_(std::move(expected)) {}

  [[nodiscard]] const char* kind() const noexcept override {
    return "SyntaxError";
  }
  /// Byte offset into the source text where parsing failed.
  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }
  [[nodiscard]] const std::vector<std::string>& expected() const noexcept {
    return expected_;
  }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// An improper integral whose partial estimates grow without bound.
class Divergent : public Error {
 public:
  Divergent(std::string message, std::vector<std::pair<double, double>> trace)
      : Error(std::move(message)), trace_(std::move(trace)) {}
  [[nodiscard]] const char* kind() const noexcept override {
    return "Divergent";
  }
  /// (truncation, partial value) pairs observed while refining.
  [[nodiscard]] const std::vector<std::pair<double, double>>& trace()
      const noexcept {
    return trace_;
  }

 private:
  std::vector<std::pair<double, double>> trace_;
};

class HypothesisFailed : public Error {
 public:
  HypothesisFailed(std::string message, int which)
      : Error(std::move(message)), which_(which) {}
  [[nodiscard]] const char* kind() const noexcept override {
    return "HypothesisFailed";
  }
  /// Index 1..4 of the boundedness function whose supremum is not finite.
  [[nodiscard]] int which() const noexcept { return which_; }

 private:
  int which_;
};

class RatioExceedsConstant : public Error {
 public:
  RatioExceedsConstant(std::string message, double ratio, double bound)
      : Error(std::move(message)), ratio_(ratio), bound_(bound) {}
  [[nodiscard]] const char* kind() const noexcept override {
    return "RatioExceedsConstant";
  }
  [[nodiscard]] double ratio() const noexcept { return ratio_; }
  [[nodiscard]] double bound() const noexcept { return bound_; }

 private:
  double ratio_;
  double bound_;
};

}  // namespace ulamkit
