#pragma once

#include <stdexcept>
#include <string>

namespace stereo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define STEREO_ERROR(name)            \
  class name : public Error {         \
   public:                            \
    using Error::Error;               \
  }

STEREO_ERROR(InvalidArgument);
STEREO_ERROR(StripViolation);
STEREO_ERROR(QuadratureFailure);
STEREO_ERROR(ContourOutsideStrip);
STEREO_ERROR(NotIntegrableOnLine);
STEREO_ERROR(NonRealInverse);
STEREO_ERROR(InvalidShapeParameters);
STEREO_ERROR(EmptyHistogram);
STEREO_ERROR(NegativeCount);
STEREO_ERROR(SupportExceedsKernel);
STEREO_ERROR(NonIntegrableQuotient);
STEREO_ERROR(ZeroMellinImage);
STEREO_ERROR(NonSmoothInput);
STEREO_ERROR(NonNormalizableH);
STEREO_ERROR(WeightingDiverges);
STEREO_ERROR(IoError);

#undef STEREO_ERROR

enum class Condition { strip, h_star_integrable, quotient_integrable };

inline const char* to_string(Condition c) {
  switch (c) {
    case Condition::strip: return "strip";
    case Condition::h_star_integrable: return "h_star_integrable";
    case Condition::quotient_integrable: return "quotient_integrable";
  }
  return "unknown";
}

class PreconditionFailed : public Error {
 public:
  PreconditionFailed(Condition c, const std::string& what)
      : Error(std::string(to_string(c)) + ": " + what), condition_(c) {}
  Condition condition() const { return condition_; }

 private:
  Condition condition_;
};

}  // namespace stereo
