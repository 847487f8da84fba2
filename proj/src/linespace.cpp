#include "asg/linespace.hpp"

#include <cmath>

namespace asg {

namespace {

double sq(double x) { return x * x; }

void require_in_chart(const OrientedLine& l) {
    if (!in_chart(l)) throw OutOfChart();
}

}  // namespace

bool in_chart(const OrientedLine& l) { return std::abs(l.xi) < 1.0 - kChartMargin; }

Vec4 FlatCoords::to_vec4() const { return Vec4(Z1.real(), Z1.imag(), Z2.real(), Z2.imag()); }

FlatCoords FlatCoords::from_vec4(const Vec4& x) {
    return FlatCoords{Complex(x(0), x(1)), Complex(x(2), x(3))};
}

FlatCoords line_to_flat(const OrientedLine& l) {
    require_in_chart(l);
    const double r = std::norm(l.xi);
    const Complex common = l.eta + l.xi * l.xi * std::conj(l.eta);
    const Complex twist = Complex(0, 1) * (1.0 + r) * l.xi;
    const double den = 1.0 - r * r;
    return FlatCoords{2.0 * (common - twist) / den, 2.0 * (common + twist) / den};
}

Vec4 line_to_flat_vec(const OrientedLine& l) { return line_to_flat(l).to_vec4(); }

OrientedLine flat_to_line(const FlatCoords& z) {
    const Complex diff = z.Z1 - z.Z2;
    const double den = 2.0 + std::sqrt(4.0 + std::norm(diff));
    OrientedLine l;
    l.xi = Complex(0, 1) * diff / den;
    l.eta = (z.Z1 + z.Z2) / den +
            diff * (std::norm(z.Z1) - std::norm(z.Z2)) / (2.0 * den * den);
    require_in_chart(l);
    return l;
}

OrientedLine flat_to_line(const Vec4& x) { return flat_to_line(FlatCoords::from_vec4(x)); }

PluckerLine plucker_from_points(const Eigen::Vector3d& s, const Eigen::Vector3d& t) {
    if ((s - t).norm() <= 1e-14 * std::max(1.0, s.norm() + t.norm())) {
        throw CoincidentPoints();
    }
    return PluckerLine{s.cross(t), s - t};
}

Vec4 plucker_to_flat(const PluckerLine& pl) {
    if (pl.q.norm() == 0.0 || std::abs(pl.q(2)) <= kChartMargin * pl.q.norm()) {
        throw HorizontalLine();
    }
    const double q3 = pl.q(2);
    return Vec4((pl.p(1) + pl.q(1)) / q3, (-pl.p(0) - pl.q(0)) / q3,
                (pl.p(1) - pl.q(1)) / q3, (-pl.p(0) + pl.q(0)) / q3);
}

OrientedLine line_through_points(const Eigen::Vector3d& s, const Eigen::Vector3d& t) {
    Eigen::Vector3d d = s - t;
    const double n = d.norm();
    if (n <= 1e-14 * std::max(1.0, s.norm() + t.norm())) throw CoincidentPoints();
    d /= n;
    if (d(2) < 0) d = -d;  // chart covers upward directions
    if (d(2) <= kChartMargin) throw HorizontalLine();
    OrientedLine l;
    l.xi = Complex(d(0), d(1)) / (1.0 + d(2));
    const Complex z(s(0), s(1));
    l.eta = 0.5 * (z - 2.0 * s(2) * l.xi - std::conj(z) * l.xi * l.xi);
    return l;
}

Eigen::Matrix4d metric_G(const OrientedLine& l) {
    require_in_chart(l);
    const double r = std::norm(l.xi);
    const double imc = (2.0 * std::conj(l.xi) * l.eta / (1.0 + r)).imag();
    const double pref = 4.0 / sq(1.0 + r);
    Eigen::Matrix4d g;
    // coordinates (Re xi, Im xi, Re eta, Im eta);
    // Im(d(conj eta) d xi) = d(Re eta) d(Im xi) - d(Im eta) d(Re xi)
    g << imc, 0.0, 0.0, -0.5,
         0.0, imc, 0.5, 0.0,
         0.0, 0.5, 0.0, 0.0,
         -0.5, 0.0, 0.0, 0.0;
    return pref * g;
}

double metric_G(const OrientedLine& l, const Eigen::Vector4d& v, const Eigen::Vector4d& w) {
    return v.dot(metric_G(l) * w);
}

double conformal_factor_omega(const OrientedLine& l) {
    require_in_chart(l);
    const double r = std::norm(l.xi);
    return (1.0 + r) / (1.0 - r);
}

double omega_flat(const Vec4& x) {
    return std::sqrt(1.0 + 0.25 * (sq(x(0) - x(2)) + sq(x(1) - x(3))));
}

double chart_pullback_factor(const OrientedLine& l) {
    return sq(2.0 * conformal_factor_omega(l));
}

double uhe_residual_flat(const std::function<double(const Vec4&)>& u, const Vec4& p,
                         double h) {
    static const double sign[4] = {1.0, 1.0, -1.0, -1.0};
    const double center = u(p);
    double total = 0.0;
    for (int k = 0; k < 4; ++k) {
        Vec4 fwd = p, bwd = p;
        fwd(k) += h;
        bwd(k) -= h;
        total += sign[k] * (u(fwd) - 2.0 * center + u(bwd)) / (h * h);
    }
    return total;
}

double uhe_residual_flat_normalized(const std::function<double(const Vec4&)>& u,
                                    const Vec4& p, double h) {
    static const double sign[4] = {1.0, 1.0, -1.0, -1.0};
    const double center = u(p);
    double total = 0.0, scale = 0.0;
    for (int k = 0; k < 4; ++k) {
        const double hk = h * std::max(1.0, std::abs(p(k)));
        Vec4 fwd = p, bwd = p;
        fwd(k) += hk;
        bwd(k) -= hk;
        const double d = (u(fwd) - 2.0 * center + u(bwd)) / (hk * hk);
        total += sign[k] * d;
        scale += std::abs(d);
    }
    return std::abs(total) / std::max(1.0, scale);
}

namespace {

// mixed second partial d^2 v / (da db) of a chart field, coordinates indexed
// 0..3 = (Re xi, Im xi, Re eta, Im eta)
double chart_coord(const OrientedLine& l, int k) {
    switch (k) {
        case 0: return l.xi.real();
        case 1: return l.xi.imag();
        case 2: return l.eta.real();
        default: return l.eta.imag();
    }
}

OrientedLine chart_shift(const OrientedLine& l, int k, double d) {
    OrientedLine out = l;
    switch (k) {
        case 0: out.xi += Complex(d, 0); break;
        case 1: out.xi += Complex(0, d); break;
        case 2: out.eta += Complex(d, 0); break;
        default: out.eta += Complex(0, d); break;
    }
    return out;
}

double mixed2(const std::function<double(const OrientedLine&)>& v, const OrientedLine& l,
              int a, int b, double ha, double hb) {
    if (a == b) {
        return (v(chart_shift(l, a, ha)) - 2.0 * v(l) + v(chart_shift(l, a, -ha))) /
               (ha * ha);
    }
    const double pp = v(chart_shift(chart_shift(l, a, ha), b, hb));
    const double pm = v(chart_shift(chart_shift(l, a, ha), b, -hb));
    const double mp = v(chart_shift(chart_shift(l, a, -ha), b, hb));
    const double mm = v(chart_shift(chart_shift(l, a, -ha), b, -hb));
    return (pp - pm - mp + mm) / (4.0 * ha * hb);
}

}  // namespace

double laplacian_G(const std::function<double(const OrientedLine&)>& v,
                   const OrientedLine& l, double h) {
    require_in_chart(l);
    double step[4];
    for (int k = 0; k < 4; ++k) step[k] = h * std::max(1.0, std::abs(chart_coord(l, k)));
    // i (d^2/(dxi dconj eta) - d^2/(dconj xi deta)) = (v_yu - v_xw) / 2
    // with (x, y, u, w) = (Re xi, Im xi, Re eta, Im eta)
    const double v_yu = mixed2(v, l, 1, 2, step[1], step[2]);
    const double v_xw = mixed2(v, l, 0, 3, step[0], step[3]);
    const double v_uu = mixed2(v, l, 2, 2, step[2], step[2]);
    const double v_ww = mixed2(v, l, 3, 3, step[3], step[3]);
    const double r = std::norm(l.xi);
    const double im = (l.xi * std::conj(l.eta)).imag();
    return sq(1.0 + r) * (0.5 * (v_yu - v_xw) + im / (1.0 + r) * (v_uu + v_ww));
}

double laplacian_G_flat_chart(const std::function<double(const OrientedLine&)>& v,
                              const OrientedLine& l, double h) {
    const Vec4 x0 = line_to_flat_vec(l);
    auto scaled = [&](const Vec4& x) {
        const double s = 1.0 + 0.25 * (sq(x(0) - x(2)) + sq(x(1) - x(3)));
        return v(flat_to_line(x)) / std::sqrt(s);
    };
    // (d^2/dZ1 dconjZ1 - d^2/dZ2 dconjZ2) = (1/4)(d11 + d22 - d33 - d44)
    double op = 0.0;
    static const double sign[4] = {1.0, 1.0, -1.0, -1.0};
    const double center = scaled(x0);
    for (int k = 0; k < 4; ++k) {
        const double hk = h * std::max(1.0, std::abs(x0(k)));
        Vec4 fwd = x0, bwd = x0;
        fwd(k) += hk;
        bwd(k) -= hk;
        op += sign[k] * (scaled(fwd) - 2.0 * center + scaled(bwd)) / (hk * hk);
    }
    const double s0 = 1.0 + 0.25 * (sq(x0(0) - x0(2)) + sq(x0(1) - x0(3)));
    return kTwoChartScale * std::pow(s0, 1.5) * 0.25 * op;
}

Eigen::Vector3d phi_map(const OrientedLine& l, double r) {
    const double rr = std::norm(l.xi);
    const double den = sq(1.0 + rr);
    const Complex z =
        2.0 * (l.eta - l.xi * l.xi * std::conj(l.eta)) / den + 2.0 * r * l.xi / (1.0 + rr);
    const double x3 = -2.0 * (std::conj(l.xi) * l.eta + l.xi * std::conj(l.eta)).real() / den +
                      r * (1.0 - rr) / (1.0 + rr);
    return Eigen::Vector3d(z.real(), z.imag(), x3);
}

GraphicalPlane graphical_from_linear(Complex a1, Complex b1, Complex a2, Complex b2) {
    const double den = -std::norm(a1 + a2) + std::norm(b1 + b2);
    if (std::abs(den) <= kNullEps) throw DegeneratePlane("plane is not graphical");
    const Complex alpha = Complex(0, 1) *
                          (-(a1 - a2) * std::conj(a1 + a2) +
                           (b1 + b2) * (std::conj(b1) - std::conj(b2))) /
                          den;
    const Complex beta =
        Complex(0, -2) * (std::conj(a1) * b2 - std::conj(a2) * b1) / den;
    return GraphicalPlane{alpha, beta};
}

OrientedLine graphical_section(const GraphicalPlane& pl, Complex xi) {
    const double r = std::norm(xi);
    if (std::sqrt(r) >= 1.0 - kChartMargin) throw OutOfChart();
    const Complex eta = (pl.alpha * xi + pl.beta * std::conj(xi) -
                         std::conj(pl.alpha) * xi * xi * std::conj(xi) -
                         std::conj(pl.beta) * xi * xi * xi) /
                        (1.0 - r);
    return OrientedLine{xi, eta};
}

OrientedLine nongraphical_point(const NonGraphicalPlane& pl, double u, double v) {
    if (u < 0.0 || u >= 1.0 - kChartMargin) throw OutOfChart();
    const Complex xi = u * Complex(0, 1) * std::exp(Complex(0, 0.5 * (pl.theta + pl.phi)));
    const Complex eta = 2.0 * pl.H * Complex(0, 1) * v *
                        (1.0 - u * u * std::exp(Complex(0, 2.0 * pl.theta))) /
                        (1.0 - std::pow(u, 4)) *
                        std::exp(Complex(0, -0.5 * (pl.theta - pl.phi)));
    return OrientedLine{xi, eta};
}

GraphicalPlane conjugate_graphical(const GraphicalPlane& pl) {
    return GraphicalPlane{std::conj(pl.alpha), -pl.beta};
}

NonGraphicalPlane conjugate_nongraphical(const NonGraphicalPlane& pl) {
    const double den = 1.0 - 2.0 * pl.H * std::cos(pl.theta);
    if (std::abs(den) <= kNullEps * std::max(1.0, std::abs(pl.H))) {
        throw SingularConjugate();
    }
    return NonGraphicalPlane{-pl.theta, pl.phi, -pl.H / den};
}

double plane_metric_determinant(const GraphicalPlane& pl, Complex xi) {
    const double r = std::norm(xi);
    if (std::sqrt(r) >= 1.0 - kChartMargin) throw OutOfChart();
    const double base = 4.0 * sq(pl.alpha.imag()) - 4.0 * std::norm(pl.beta);
    return base * sq(1.0 + r) / sq(1.0 - r);
}

double plane_metric_determinant(const NonGraphicalPlane& pl, double u) {
    if (u < 0.0 || u >= 1.0 - kChartMargin) throw OutOfChart();
    return -64.0 * sq(pl.H) * sq(std::sin(pl.theta)) /
           (sq(1.0 + u * u) * sq(1.0 - std::pow(u, 4)));
}

double graphical_q_distance_coefficient(const GraphicalPlane& pl, double theta) {
    return -pl.alpha.imag() +
           (std::conj(pl.beta) * std::exp(Complex(0, 2.0 * theta))).imag();
}

double graphical_unit_radius(const GraphicalPlane& pl, double theta) {
    const double a = std::abs(graphical_q_distance_coefficient(pl, theta));
    if (a <= kNullEps) throw OutOfDomain("no pseudo-circle in this direction");
    return -std::sqrt(4.0 * a) + std::sqrt(4.0 * a + 1.0);
}

double nongraphical_unit_v(const NonGraphicalPlane& pl, double u, int sign) {
    const double den = 32.0 * pl.H * u * std::sin(pl.theta);
    if (std::abs(den) <= kNullEps) throw OutOfDomain("degenerate pseudo-circle");
    return sign * (1.0 + u * u) * sq(1.0 - u * u) / den;
}

double ruled_surface_residual(const RuledSurface& surface, const Eigen::Vector3d& X) {
    const double lhs = std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Hyperboloid>) {
                return sq(X(2)) - 4.0 * s.a * sq(X(0)) - 4.0 * s.a * sq(X(1)) -
                       8.0 * s.b * X(0) * X(1) + sq(s.a) - sq(s.b);
            } else {
                return std::sin(s.theta) * X(2) +
                       2.0 * (std::cos(s.theta) + std::cos(s.phi)) * sq(X(0)) +
                       4.0 * std::sin(s.phi) * X(0) * X(1) +
                       2.0 * (std::cos(s.theta) - std::cos(s.phi)) * sq(X(1));
            }
        },
        surface);
    return lhs / sq(std::max(1.0, X.squaredNorm()));
}

}  // namespace asg
