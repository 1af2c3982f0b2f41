#pragma once

#include <stdexcept>
#include <string>

namespace wavefront {

/// Base class for every failure raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// numerics
class NonConvergence : public Error { using Error::Error; };
class InvalidEnvelope : public Error { using Error::Error; };
class NoSignChange : public Error { using Error::Error; };
class MaxIterations : public Error { using Error::Error; };
class SingularJacobian : public Error { using Error::Error; };

// parameters and domains
class InvalidParameter : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };

// kernel
class DegenerateKernel : public Error { using Error::Error; };
class TangentialZero : public Error { using Error::Error; };

// wave speed
class NoRoot : public Error { using Error::Error; };
class MultipleRoots : public Error { using Error::Error; };

// evans
class NonPositive : public Error { using Error::Error; };
class ContourTooCoarse : public Error { using Error::Error; };

// k2 atlas
class NoPositiveRoot : public Error { using Error::Error; };

// pulse
class ComplexEigenvalues : public Error { using Error::Error; };
class SlowBranchOnly : public Error { using Error::Error; };
class NoBackLevel : public Error { using Error::Error; };

}  // namespace wavefront
