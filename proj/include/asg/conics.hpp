#pragma once

#include <vector>

#include "asg/neutral.hpp"

namespace asg {

enum class Branch { Plus, Minus };
enum class ConicSide { S, Sperp };

struct ConicPoint {
    double parameter;
    Branch branch;
    Vec4 point;
};

// A pseudo-circle S of square-radius c^2 in the plane pi together with the
// pseudo-circle Sperp of square-radius -c^2 in the orthogonal plane through
// the same center. Frames are <,>-normalized: definite planes carry two
// directions of Q = +-1 with equal sign; hyperbolic planes carry plane.u
// with Q = +1 and plane.v with Q = -1.
struct ConjugateConicPair {
    Vec4 center;
    double square_radius;  // c^2 of S; Sperp carries -c^2
    PlaneKind kind;        // kind of pi
    PlaneKind cokind;      // kind of pi-perp
    PlaneFrame plane;      // pi (origin = center)
    PlaneFrame coplane;    // pi-perp (origin = center)

    bool hyperbolic() const { return kind == PlaneKind::Hyperbolic; }
    double radius() const;                 // |c|
    double side_square_radius(ConicSide side) const;

    // Circle: O + |c|(cos(t) e1 + sin(t) e2).
    // Hyperbola, square-radius > 0: O + |c|(+-cosh(t) e+ + sinh(t) e-);
    // square-radius < 0: O + |c|(sinh(t) e+ +- cosh(t) e-).
    Vec4 point(ConicSide side, double t, Branch branch = Branch::Plus) const;
    Vec4 velocity(ConicSide side, double t, Branch branch = Branch::Plus) const;

    std::vector<ConicPoint> sample(ConicSide side, int count, double range) const;
};

// Normalizes a non-degenerate plane by pseudo-Gram-Schmidt: the pivot is the
// direction of largest |Q| relative to Euclidean size (falling back to u+-v
// when both candidates are null), scaled to Q = +-1; the second direction is
// the <,>-orthogonal remainder. Hyperbolic output is ordered (+1, -1).
PlaneFrame normalized_frame(const PlaneFrame& plane);

// Throws DegeneratePlane, ZeroRadius, RadiusSignMismatch (definite plane
// whose sign cannot carry the requested square-radius).
ConjugateConicPair build_pair(const Vec4& center, const PlaneFrame& plane, double c2);

// center_of_three followed by build_pair.
ConjugateConicPair pair_from_three_points(const Vec4& q, const Vec4& q1, const Vec4& q2);

// max_i |Q(p - q_i)| / max(1, |p|^2 + |q_i|^2); p lies on the nullity locus
// of the triple iff the residual vanishes.
double nullity_residual(const Vec4& p, const Vec4& q, const Vec4& q1, const Vec4& q2);

// dl = |c| dt for every stored parametrization.
double line_element_factor(const ConjugateConicPair& pair);

}  // namespace asg
