#pragma once

#include <Eigen/Dense>

#include "asg/errors.hpp"

namespace asg {

// Points and vectors of R^{2,2}.
using Vec4 = Eigen::Vector4d;

// Scale-aware threshold below which a quadratic-form value counts as null.
inline constexpr double kNullEps = 1e-10;

// diag(1, 1, -1, -1)
inline const Eigen::Matrix4d& signature_matrix() {
    static const Eigen::Matrix4d m =
        Eigen::Vector4d(1.0, 1.0, -1.0, -1.0).asDiagonal();
    return m;
}

// Q(x) = x1^2 + x2^2 - x3^2 - x4^2
template <typename Derived>
double quadratic_form(const Eigen::MatrixBase<Derived>& x) {
    return x(0) * x(0) + x(1) * x(1) - x(2) * x(2) - x(3) * x(3);
}

// <x,y> = x1 y1 + x2 y2 - x3 y3 - x4 y4
template <typename A, typename B>
double inner(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y) {
    return x(0) * y(0) + x(1) * y(1) - x(2) * y(2) - x(3) * y(3);
}

enum class PlaneKind {
    PositiveDefinite,
    NegativeDefinite,
    Hyperbolic,
    PositiveParabolic,
    NegativeParabolic,
    TotallyNull,
};

const char* to_string(PlaneKind kind);

inline bool nondegenerate(PlaneKind kind) {
    return kind == PlaneKind::PositiveDefinite ||
           kind == PlaneKind::NegativeDefinite ||
           kind == PlaneKind::Hyperbolic;
}

// Affine plane origin + span{u, v}.
struct PlaneFrame {
    Vec4 origin;
    Vec4 u;
    Vec4 v;
};

// 2x2 Gram matrix of <,> restricted to {u, v}.
Eigen::Matrix2d restricted_gram(const PlaneFrame& plane);

// Classification by the eigenvalue signs of the restricted Gram matrix.
// Throws DependentSpan when u, v fail to span a plane.
PlaneKind classify_plane(const PlaneFrame& plane);

// Frame for origin + orthogonal complement of span{u, v}.
// Throws DegeneratePlane for parabolic or totally null planes.
PlaneFrame orthocomplement_plane(const PlaneFrame& plane);

// True iff Q(q - p) is non-null under the scale-aware tolerance.
bool are_skew(const Vec4& p, const Vec4& q);

// Threshold used by are_skew and pole detection:
// kNullEps * max(1, |p|^2 + |q|^2) with Euclidean norms.
double null_tolerance(const Vec4& p, const Vec4& q);

struct CenterResult {
    Vec4 origin;
    double square_radius;
    PlaneFrame plane;
};

// The unique point of the affine plane through q, q1, q2 that is
// Q-equidistant from all three, found by solving the 2x2 bisector system
// in plane coordinates. Throws NotSkew, CollinearPoints, DegeneratePlane.
CenterResult center_of_three(const Vec4& q, const Vec4& q1, const Vec4& q2);

}  // namespace asg
