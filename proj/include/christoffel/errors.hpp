#pragma once

#include <stdexcept>
#include <string>

namespace christoffel {

// Base of every numeric or domain failure raised by the library. Invalid
// caller input (bad sizes, thresholds, specs) uses std::invalid_argument.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// geometry
class PointOutsideDomain : public Error { using Error::Error; };
class NoExteriorFound : public Error { using Error::Error; };
class AnchorOutsideDomain : public Error { using Error::Error; };
class DeltaTooLarge : public Error { using Error::Error; };
class DegenerateProfile : public Error { using Error::Error; };
class SingularTransform : public Error { using Error::Error; };

// alpha_ball
class OutOfRange : public Error { using Error::Error; };
class NonNegativeCurvature : public Error { using Error::Error; };
class BracketFailure : public Error { using Error::Error; };
class ConvergenceFailure : public Error { using Error::Error; };
class TooCloseToBoundary : public Error { using Error::Error; };

// moments / christoffel
class InsufficientMoments : public Error { using Error::Error; };
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved_error() const { return achieved_; }

 private:
  double achieved_;
};
class FactorizationFailure : public Error { using Error::Error; };

// domain specification
class InvalidDomainSpec : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace christoffel
