#pragma once

#include <variant>
#include <vector>

#include "asg/conics.hpp"
#include "asg/neutral.hpp"

namespace asg {

// Either a point of R^{2,2} or the symbol for the cone at infinity. Infinity
// carries no coordinates; it is tracked through generator bookkeeping only.
struct ExtendedPoint {
    bool infinite = false;
    Vec4 p = Vec4::Zero();

    ExtendedPoint() = default;
    ExtendedPoint(const Vec4& q) : p(q) {}  // NOLINT: implicit by design
    static ExtendedPoint infinity() {
        ExtendedPoint e;
        e.infinite = true;
        return e;
    }
};

struct Translation {
    Vec4 offset;
};
struct Dilation {
    double factor;  // nonzero
};
struct PseudoOrthogonal {
    Eigen::Matrix4d m;  // M^T J M = J entrywise to 1e-10
};
struct AntiOrthogonalSwap {};  // (a,b,c,d) -> (c,d,a,b)
struct Inversion {
    Vec4 center;
    double k;  // x -> center + k (x - center) / Q(x - center)
};

using ConformalGenerator =
    std::variant<Translation, Dilation, PseudoOrthogonal, AntiOrthogonalSwap, Inversion>;

struct ConformalMap {
    std::vector<ConformalGenerator> generators;  // applied left to right

    static ConformalMap identity() { return {}; }
    ConformalMap then(const ConformalMap& next) const;
    ConformalMap inverse() const;
};

const char* generator_name(const ConformalGenerator& g);

// Applies generators in order. Inversion sends its isotropic cone to
// Infinity and Infinity to its center; every other generator fixes Infinity.
ExtendedPoint apply(const ConformalMap& f, const ExtendedPoint& p);

// Product of per-stage factors at the running image point: Translation,
// PseudoOrthogonal and the swap contribute 1; Dilation contributes
// |factor|; Inversion contributes |k| / |Q(x - center)|. Throws PoleAt when
// a stage absorbs the running point.
double conformal_factor(const ConformalMap& f, const Vec4& p);

// Completes a non-null vector to a basis with Gram matrix diag(1,1,-1,-1).
// The normalized input sits in column 0 when Q > 0 and column 2 when Q < 0.
// Throws FrameCompletionFailure on numerically degenerate input.
Eigen::Matrix4d pseudo_orthonormal_completion(const Vec4& w);

// Constructive transitivity on skew triples: the returned map sends
// q -> 0, q1 -> Infinity, q2 -> e1 (translate; invert about the hypersphere
// centered at the image of q1 through 0; dilate to |Q| = 1; rotate by the
// inverse of a completed pseudo-orthonormal basis; append the
// anti-orthogonal swap when Q(q2 image) = -1).
ConformalMap map_triple_to_standard(const Vec4& q, const Vec4& q1, const Vec4& q2);

// Map with f(source.S) = target.S and f(source.Sperp) = target.Sperp,
// composed from triple transits through the standard configuration.
ConformalMap map_pair_to_pair(const ConjugateConicPair& source,
                              const ConjugateConicPair& target);

}  // namespace asg
