#ifndef CHRONOSCOPE_ERRORS_HPP
#define CHRONOSCOPE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace chronoscope {

// Base class for every throw in the library. `kind()` is a stable machine-readable
// tag (the CLI puts it in its error object); what() carries the human explanation.
class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

  private:
    std::string kind_;
};

#define CHRONOSCOPE_DEFINE_ERROR(Name)                                          \
    class Name : public Error {                                                 \
      public:                                                                   \
        explicit Name(const std::string& message) : Error(#Name, message) {}    \
    }

// grid / envelope construction and measurement
CHRONOSCOPE_DEFINE_ERROR(InvalidGrid);
CHRONOSCOPE_DEFINE_ERROR(WindowTooSmall);
CHRONOSCOPE_DEFINE_ERROR(AliasingRisk);
CHRONOSCOPE_DEFINE_ERROR(ZeroEnergy);
CHRONOSCOPE_DEFINE_ERROR(PhaseUnwrapFailure);

// elements
CHRONOSCOPE_DEFINE_ERROR(InvalidLens);
CHRONOSCOPE_DEFINE_ERROR(FocalDegeneracy);
CHRONOSCOPE_DEFINE_ERROR(ZeroInputGDD);

// telescope design
CHRONOSCOPE_DEFINE_ERROR(DegenerateMagnification);
CHRONOSCOPE_DEFINE_ERROR(InfeasibleBandwidth);

// spdc
CHRONOSCOPE_DEFINE_ERROR(OutOfRangeWavelength);
CHRONOSCOPE_DEFINE_ERROR(NoPhaseMatching);
CHRONOSCOPE_DEFINE_ERROR(GridTooNarrow);

// hom quadrature
CHRONOSCOPE_DEFINE_ERROR(GridTooCoarse);
CHRONOSCOPE_DEFINE_ERROR(NonHermitianResult);

// cli
CHRONOSCOPE_DEFINE_ERROR(ConfigParseError);

#undef CHRONOSCOPE_DEFINE_ERROR

}  // namespace chronoscope

#endif
