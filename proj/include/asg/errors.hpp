#pragma once

#include <stdexcept>
#include <string>

namespace asg {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define ASG_DEFINE_ERROR(NAME)                                \
    struct NAME : Error {                                     \
        NAME() : Error(#NAME) {}                              \
        explicit NAME(const std::string& msg)                 \
            : Error(std::string(#NAME) + ": " + msg) {}       \
    }

// neutral geometry
ASG_DEFINE_ERROR(DependentSpan);
ASG_DEFINE_ERROR(DegeneratePlane);
ASG_DEFINE_ERROR(NotSkew);
ASG_DEFINE_ERROR(CollinearPoints);

// conics
ASG_DEFINE_ERROR(ZeroRadius);
ASG_DEFINE_ERROR(RadiusSignMismatch);

// conformal group
ASG_DEFINE_ERROR(FrameCompletionFailure);

// line space
ASG_DEFINE_ERROR(OutOfChart);
ASG_DEFINE_ERROR(OutOfDomain);
ASG_DEFINE_ERROR(EvaluationDomain);
ASG_DEFINE_ERROR(HorizontalLine);
ASG_DEFINE_ERROR(CoincidentPoints);
ASG_DEFINE_ERROR(SingularConjugate);

// solutions / quadrature
ASG_DEFINE_ERROR(NonConvergent);
ASG_DEFINE_ERROR(NonIntegrable);
ASG_DEFINE_ERROR(OverlappingBalls);
ASG_DEFINE_ERROR(PoleOnCurve);

// cli
ASG_DEFINE_ERROR(ConfigError);
ASG_DEFINE_ERROR(IoError);

#undef ASG_DEFINE_ERROR

// A conformal-factor evaluation hit a pole; `stage` is the index of the
// generator that absorbed the running point.
struct PoleAt : Error {
    explicit PoleAt(int stage_index)
        : Error("PoleAt: generator stage " + std::to_string(stage_index)),
          stage(stage_index) {}
    int stage;
};

}  // namespace asg
