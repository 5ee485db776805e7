#ifndef ONSAGER_ERRORS_HPP
#define ONSAGER_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace onsager {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A log (or other barrier term) was evaluated outside its domain,
/// or a state violates a model invariant (positivity, simplex).
class DomainViolation : public Error {
public:
  using Error::Error;
};

/// Right-hand side of a periodic Poisson solve has nonzero mean.
class NonNeutralSource : public Error {
public:
  using Error::Error;
};

/// An iterative solve did not reach its tolerance within the iteration cap.
class NoConvergence : public Error {
public:
  NoConvergence(const std::string& what, double residual, int iterations)
      : Error(what), residual(residual), iterations(iterations) {}
  double residual = 0.0;
  int iterations = 0;
};

/// AEPG encountered L(theta) + c <= 0, so sqrt(L + c) is undefined.
class ShiftViolation : public Error {
public:
  using Error::Error;
};

/// A linear (saddle) system could not be solved even after regularization.
class SingularSystem : public Error {
public:
  using Error::Error;
};

/// Request for an initial-condition profile that does not exist.
class UnknownProfile : public Error {
public:
  using Error::Error;
};

/// Structural config error: malformed JSON, wrong type, or unknown key.
/// `path` is the dotted location of the offending key.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::string path)
      : Error(what), path(std::move(path)) {}
  std::string path;
};

/// Semantic config error; `violations` lists every violated invariant.
class ValidationError : public Error {
public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(join(violations)), violations(std::move(violations)) {}
  std::vector<std::string> violations;

private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "config validation failed:";
    for (const auto& item : v) s += "\n  - " + item;
    return s;
  }
};

/// Filesystem failure while writing or reading run outputs.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace onsager

#endif
