#pragma once

#include <stdexcept>
#include <string>

namespace bem {

// Broad failure category; the CLI maps each one onto a stable exit code.
enum class ErrorCategory {
  Config,     // bad parameters, invalid meshes, violated preconditions
  InputData,  // malformed or inconsistent files
  Numerical,  // singular systems, quadrature that does not converge
  Domain,     // evaluation requested outside the region of validity
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

struct InvalidMeshError : Error {
  explicit InvalidMeshError(const std::string& w) : Error(ErrorCategory::Config, w) {}
};

struct GeometryError : Error {
  explicit GeometryError(const std::string& w) : Error(ErrorCategory::Config, w) {}
};

struct PreconditionError : Error {
  explicit PreconditionError(const std::string& w) : Error(ErrorCategory::Config, w) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorCategory::Config, w) {}
};

struct FormatError : Error {
  explicit FormatError(const std::string& w) : Error(ErrorCategory::InputData, w) {}
};

struct AlignmentError : Error {
  AlignmentError(const std::string& w, std::size_t element, double distance)
      : Error(ErrorCategory::InputData, w), element(element), distance(distance) {}
  std::size_t element;  // 1-based element index of the worst offender
  double distance;
};

struct DataError : Error {
  explicit DataError(const std::string& w) : Error(ErrorCategory::InputData, w) {}
};

struct ParseError : Error {
  ParseError(const std::string& w, std::size_t byte_offset)
      : Error(ErrorCategory::InputData, w), byte_offset(byte_offset) {}
  std::size_t byte_offset;
};

struct VersionError : Error {
  explicit VersionError(const std::string& w) : Error(ErrorCategory::InputData, w) {}
};

struct SolverError : Error {
  SolverError(const std::string& w, double condition_estimate)
      : Error(ErrorCategory::Numerical, w), condition_estimate(condition_estimate) {}
  double condition_estimate;
};

struct ConvergenceError : Error {
  ConvergenceError(const std::string& w, double achieved_error)
      : Error(ErrorCategory::Numerical, w), achieved_error(achieved_error) {}
  double achieved_error;
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorCategory::Domain, w) {}
};

struct ScenarioError : Error {
  explicit ScenarioError(const std::string& w) : Error(ErrorCategory::Domain, w) {}
};

}  // namespace bem
