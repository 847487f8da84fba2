#include "asg/conics.hpp"

#include <cmath>

namespace asg {

namespace {

struct Normalized {
    Vec4 e1, e2;
    int s1, s2;  // Q(e1), Q(e2) in {-1, +1}
};

Normalized pseudo_gram_schmidt(const PlaneFrame& plane) {
    const double scale = std::max(1.0, plane.u.squaredNorm() + plane.v.squaredNorm());
    auto ratio = [](const Vec4& w) {
        const double n = w.squaredNorm();
        return n > 0 ? std::abs(quadratic_form(w)) / n : 0.0;
    };
    Vec4 cands[4] = {plane.u, plane.v, plane.u + plane.v, plane.u - plane.v};
    int best = 0;
    for (int i = 1; i < 4; ++i)
        if (ratio(cands[i]) > ratio(cands[best])) best = i;
    Vec4 first = cands[best];
    double q1 = quadratic_form(first);
    if (std::abs(q1) <= kNullEps * scale) throw DegeneratePlane("no non-null direction");
    Normalized out;
    out.s1 = q1 > 0 ? 1 : -1;
    out.e1 = first / std::sqrt(std::abs(q1));
    // remove the e1 component from whichever input is not (numerically) e1
    const Vec4& other = best == 0 ? plane.v : plane.u;
    Vec4 rem = other - out.s1 * inner(other, out.e1) * out.e1;
    double q2 = quadratic_form(rem);
    if (std::abs(q2) <= kNullEps * scale) throw DegeneratePlane("remainder is null");
    out.s2 = q2 > 0 ? 1 : -1;
    out.e2 = rem / std::sqrt(std::abs(q2));
    if (out.s1 < out.s2) {  // hyperbolic: order (+1, -1)
        std::swap(out.e1, out.e2);
        std::swap(out.s1, out.s2);
    }
    return out;
}

}  // namespace

PlaneFrame normalized_frame(const PlaneFrame& plane) {
    const Normalized n = pseudo_gram_schmidt(plane);
    return PlaneFrame{plane.origin, n.e1, n.e2};
}

ConjugateConicPair build_pair(const Vec4& center, const PlaneFrame& plane, double c2) {
    if (c2 == 0.0) throw ZeroRadius();
    PlaneFrame centered{center, plane.u, plane.v};
    const PlaneKind kind = classify_plane(centered);
    if (!nondegenerate(kind)) throw DegeneratePlane(to_string(kind));
    if (kind == PlaneKind::PositiveDefinite && c2 < 0)
        throw RadiusSignMismatch("positive-definite plane needs c2 > 0");
    if (kind == PlaneKind::NegativeDefinite && c2 > 0)
        throw RadiusSignMismatch("negative-definite plane needs c2 < 0");

    ConjugateConicPair pair;
    pair.center = center;
    pair.square_radius = c2;
    pair.kind = kind;
    pair.plane = normalized_frame(centered);
    const PlaneFrame co = orthocomplement_plane(centered);
    pair.cokind = classify_plane(co);
    pair.coplane = normalized_frame(co);
    return pair;
}

ConjugateConicPair pair_from_three_points(const Vec4& q, const Vec4& q1, const Vec4& q2) {
    const CenterResult c = center_of_three(q, q1, q2);
    return build_pair(c.origin, c.plane, c.square_radius);
}

double ConjugateConicPair::radius() const { return std::sqrt(std::abs(square_radius)); }

double ConjugateConicPair::side_square_radius(ConicSide side) const {
    return side == ConicSide::S ? square_radius : -square_radius;
}

Vec4 ConjugateConicPair::point(ConicSide side, double t, Branch branch) const {
    const PlaneFrame& f = side == ConicSide::S ? plane : coplane;
    const double s2 = side_square_radius(side);
    const double r = radius();
    const double b = branch == Branch::Plus ? 1.0 : -1.0;
    if (!hyperbolic()) {
        return center + r * (std::cos(t) * f.u + std::sin(t) * f.v);
    }
    if (s2 > 0) return center + r * (b * std::cosh(t) * f.u + std::sinh(t) * f.v);
    return center + r * (std::sinh(t) * f.u + b * std::cosh(t) * f.v);
}

Vec4 ConjugateConicPair::velocity(ConicSide side, double t, Branch branch) const {
    const PlaneFrame& f = side == ConicSide::S ? plane : coplane;
    const double s2 = side_square_radius(side);
    const double r = radius();
    const double b = branch == Branch::Plus ? 1.0 : -1.0;
    if (!hyperbolic()) {
        return r * (-std::sin(t) * f.u + std::cos(t) * f.v);
    }
    if (s2 > 0) return r * (b * std::sinh(t) * f.u + std::cosh(t) * f.v);
    return r * (std::cosh(t) * f.u + b * std::sinh(t) * f.v);
}

std::vector<ConicPoint> ConjugateConicPair::sample(ConicSide side, int count,
                                                   double range) const {
    std::vector<ConicPoint> out;
    out.reserve(static_cast<size_t>(count) * (hyperbolic() ? 2 : 1));
    if (!hyperbolic()) {
        for (int i = 0; i < count; ++i) {
            const double t = 2.0 * M_PI * i / count;
            out.push_back({t, Branch::Plus, point(side, t)});
        }
        return out;
    }
    for (int i = 0; i < count; ++i) {
        const double t = count > 1 ? -range + 2.0 * range * i / (count - 1) : 0.0;
        out.push_back({t, Branch::Plus, point(side, t, Branch::Plus)});
        out.push_back({t, Branch::Minus, point(side, t, Branch::Minus)});
    }
    return out;
}

double nullity_residual(const Vec4& p, const Vec4& q, const Vec4& q1, const Vec4& q2) {
    double worst = 0.0;
    for (const Vec4* qi : {&q, &q1, &q2}) {
        const double val = std::abs(quadratic_form(Vec4(p - *qi))) /
                           std::max(1.0, p.squaredNorm() + qi->squaredNorm());
        worst = std::max(worst, val);
    }
    return worst;
}

double line_element_factor(const ConjugateConicPair& pair) { return pair.radius(); }

}  // namespace asg
