#ifndef FG_COMMON_HPP
#define FG_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fg {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
// (2*pi)^3, the torus volume factor appearing in every interaction coefficient
inline constexpr double kTwoPiCubed = 248.05021344239853;

// Base error for everything raised by the core.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad run configuration / precondition violation (CLI exit code 2).
struct ConfigError : Error {
  using Error::Error;
};

// Attractive mode fails the positivity condition (CLI exit code 3).
struct AdmissibilityError : Error {
  double margin;
  AdmissibilityError(const std::string& msg, double m) : Error(msg), margin(m) {}
};

// A Fock-space operation needs a mode outside the universe.
struct ClosureError : Error {
  using Error::Error;
};

// Improper integral failed to reach the requested tolerance.
struct QuadratureError : Error {
  double achieved;
  QuadratureError(const std::string& msg, double a) : Error(msg), achieved(a) {}
};

}  // namespace fg

#endif
