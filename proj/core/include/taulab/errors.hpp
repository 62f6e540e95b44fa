#pragma once

#include <stdexcept>
#include <string>

namespace taulab {

// Base for every domain failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define TAULAB_DECLARE_ERROR(Name) \
  class Name : public Error {      \
   public:                         \
    using Error::Error;            \
  }

TAULAB_DECLARE_ERROR(SpectrumCollision);
TAULAB_DECLARE_ERROR(SingularResolvent);
TAULAB_DECLARE_ERROR(TailTooFat);
TAULAB_DECLARE_ERROR(NotAContraction);
TAULAB_DECLARE_ERROR(SpectralPole);
TAULAB_DECLARE_ERROR(PoleHit);
TAULAB_DECLARE_ERROR(ZeroMinor);
TAULAB_DECLARE_ERROR(RankDeficient);
TAULAB_DECLARE_ERROR(BlowUp);
TAULAB_DECLARE_ERROR(LatticePoint);
TAULAB_DECLARE_ERROR(HypothesisFailed);
TAULAB_DECLARE_ERROR(ConstraintViolated);
TAULAB_DECLARE_ERROR(CollisionDetected);
TAULAB_DECLARE_ERROR(InvalidArgument);

#undef TAULAB_DECLARE_ERROR

}  // namespace taulab
