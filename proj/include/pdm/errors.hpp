#ifndef PDM_ERRORS_HPP
#define PDM_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace pdm {

/// Failure categories shared by every module. The CLI serializes the kind
/// into its machine-readable error record.
enum class ErrorKind {
  domain,            // non-finite or otherwise inadmissible argument
  range,             // argument beyond an overflow guard
  invalid_parameter, // parameter combination rejected at construction
  complex_index,     // alpha^2 < 0
  scaling,           // eps <= 0, chi = eps^(1/4) rho undefined
  series_divergence,
  branch,            // square-root argument negative
  degenerate,        // zero denominator in a closed form
  approximation_domain,
  integration,
  evanescent_origin, // non-real indicial exponent
  argument,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::range: return "range";
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::complex_index: return "complex-index";
    case ErrorKind::scaling: return "scaling";
    case ErrorKind::series_divergence: return "series-divergence";
    case ErrorKind::branch: return "branch";
    case ErrorKind::degenerate: return "degenerate-parameter";
    case ErrorKind::approximation_domain: return "approximation-domain";
    case ErrorKind::integration: return "integration";
    case ErrorKind::evanescent_origin: return "evanescent-origin";
    case ErrorKind::argument: return "argument";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pdm

#endif  // PDM_ERRORS_HPP
