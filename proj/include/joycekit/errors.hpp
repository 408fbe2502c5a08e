#pragma once

#include <stdexcept>
#include <string>

namespace joycekit {

// Base class for every failure the kit raises on purpose.  Anything else
// escaping a kit function is a bug.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed user input (expression text, matrices, cycle files, CLI values).
// Carries a position when one is known; line/col are 1-based, 0 = unknown.
struct ParseError : Error {
  int line = 0;
  int col = 0;
  ParseError(const std::string& msg, int l, int c)
      : Error(msg + " (line " + std::to_string(l) + ", col " + std::to_string(c) + ")"),
        line(l), col(c) {}
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

struct NonInvertible : Error { using Error::Error; };
struct NotSkew : Error { using Error::Error; };
struct DegenerateFrame : Error { using Error::Error; };
struct FrameMismatch : Error { using Error::Error; };

// Evaluation came within the declared margin of a pole or branch point.
struct PoleHit : Error { using Error::Error; };
struct PoleAtZeroSection : Error { using Error::Error; };

struct Overflow : Error { using Error::Error; };

struct NearZeroEpsilon : Error { using Error::Error; };
struct StepFailure : Error { using Error::Error; };

struct StokesAngle : Error { using Error::Error; };
struct DegenerateEigenvalues : Error { using Error::Error; };

struct ConeViolation : Error { using Error::Error; };
struct TruncationTooSmall : Error { using Error::Error; };
struct IncompatibleTruncation : Error { using Error::Error; };

struct RepeatedRoot : Error { using Error::Error; };
struct TooClose : Error { using Error::Error; };
struct ToleranceUnreachable : Error { using Error::Error; };
struct NonTransverse : Error { using Error::Error; };
struct RootCollision : Error { using Error::Error; };

}  // namespace joycekit
