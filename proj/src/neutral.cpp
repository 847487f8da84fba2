#include "asg/neutral.hpp"

#include <cmath>

namespace asg {

const char* to_string(PlaneKind kind) {
    switch (kind) {
        case PlaneKind::PositiveDefinite: return "positive-definite";
        case PlaneKind::NegativeDefinite: return "negative-definite";
        case PlaneKind::Hyperbolic: return "hyperbolic";
        case PlaneKind::PositiveParabolic: return "positive-parabolic";
        case PlaneKind::NegativeParabolic: return "negative-parabolic";
        case PlaneKind::TotallyNull: return "totally-null";
    }
    return "?";
}

Eigen::Matrix2d restricted_gram(const PlaneFrame& plane) {
    Eigen::Matrix2d g;
    g(0, 0) = inner(plane.u, plane.u);
    g(0, 1) = inner(plane.u, plane.v);
    g(1, 0) = g(0, 1);
    g(1, 1) = inner(plane.v, plane.v);
    return g;
}

namespace {

double frame_scale(const PlaneFrame& plane) {
    return std::max(1.0, plane.u.squaredNorm() + plane.v.squaredNorm());
}

void require_independent(const PlaneFrame& plane) {
    // Euclidean Gram determinant of the spanning pair.
    const double uu = plane.u.squaredNorm();
    const double vv = plane.v.squaredNorm();
    const double uv = plane.u.dot(plane.v);
    if (uu * vv - uv * uv <= kNullEps * frame_scale(plane) * frame_scale(plane)) {
        throw DependentSpan();
    }
}

}  // namespace

PlaneKind classify_plane(const PlaneFrame& plane) {
    require_independent(plane);
    const Eigen::Matrix2d g = restricted_gram(plane);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(g);
    const double tol = kNullEps * frame_scale(plane);
    int pos = 0, neg = 0;
    for (int i = 0; i < 2; ++i) {
        const double ev = es.eigenvalues()(i);
        if (ev > tol) ++pos;
        else if (ev < -tol) ++neg;
    }
    if (pos == 2) return PlaneKind::PositiveDefinite;
    if (neg == 2) return PlaneKind::NegativeDefinite;
    if (pos == 1 && neg == 1) return PlaneKind::Hyperbolic;
    if (pos == 1) return PlaneKind::PositiveParabolic;
    if (neg == 1) return PlaneKind::NegativeParabolic;
    return PlaneKind::TotallyNull;
}

PlaneFrame orthocomplement_plane(const PlaneFrame& plane) {
    if (!nondegenerate(classify_plane(plane))) {
        throw DegeneratePlane("complement meets the plane");
    }
    // <w, u> = 0 is the Euclidean condition (J u) . w = 0, so the complement
    // is the kernel of the 2x4 matrix with rows (J u)^T, (J v)^T.
    Eigen::Matrix<double, 2, 4> rows;
    rows.row(0) = (signature_matrix() * plane.u).transpose();
    rows.row(1) = (signature_matrix() * plane.v).transpose();
    Eigen::FullPivLU<Eigen::Matrix<double, 2, 4>> lu(rows);
    lu.setThreshold(1e-12);
    const auto kernel = lu.kernel();
    if (kernel.cols() != 2) throw DegeneratePlane("kernel rank unexpected");
    PlaneFrame out;
    out.origin = plane.origin;
    out.u = kernel.col(0);
    out.v = kernel.col(1);
    return out;
}

double null_tolerance(const Vec4& p, const Vec4& q) {
    return kNullEps * std::max(1.0, p.squaredNorm() + q.squaredNorm());
}

bool are_skew(const Vec4& p, const Vec4& q) {
    return std::abs(quadratic_form(q - p)) > null_tolerance(p, q);
}

CenterResult center_of_three(const Vec4& q, const Vec4& q1, const Vec4& q2) {
    if (!are_skew(q, q1) || !are_skew(q, q2) || !are_skew(q1, q2)) {
        throw NotSkew();
    }
    const Vec4 d1 = q1 - q;
    const Vec4 d2 = q2 - q;
    PlaneFrame span{q, d1, d2};
    try {
        require_independent(span);
    } catch (const DependentSpan&) {
        throw CollinearPoints();
    }
    // O = q + s d1 + t d2 with 2<O-q, d_i> = Q(d_i).
    const Eigen::Matrix2d g = restricted_gram(span);
    const double scale = frame_scale(span);
    if (std::abs(g.determinant()) <= kNullEps * scale * scale) {
        throw DegeneratePlane("restricted form is singular");
    }
    const Eigen::Vector2d rhs(0.5 * quadratic_form(d1), 0.5 * quadratic_form(d2));
    const Eigen::Vector2d st = g.inverse() * rhs;
    CenterResult res;
    res.origin = q + st(0) * d1 + st(1) * d2;
    res.square_radius = quadratic_form(Vec4(q - res.origin));
    res.plane = PlaneFrame{res.origin, d1, d2};
    return res;
}

}  // namespace asg
