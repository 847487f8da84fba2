#pragma once

#include <complex>
#include <functional>
#include <variant>

#include "asg/neutral.hpp"

namespace asg {

using Complex = std::complex<double>;

// Oriented line of R^3 in the (xi, eta) chart over the upper hemisphere:
// xi is the stereographic direction coordinate (|xi| < 1), eta the moment.
struct OrientedLine {
    Complex xi;
    Complex eta;
};

// Chart margin on |xi|; the chart and its conformal factor blow up at |xi|=1.
inline constexpr double kChartMargin = 1e-6;

bool in_chart(const OrientedLine& l);

// Z1 = x1 + i x2, Z2 = x3 + i x4.
struct FlatCoords {
    Complex Z1;
    Complex Z2;

    Vec4 to_vec4() const;
    static FlatCoords from_vec4(const Vec4& x);
};

// Chart -> flat conformal coordinates. Throws OutOfChart.
FlatCoords line_to_flat(const OrientedLine& l);
Vec4 line_to_flat_vec(const OrientedLine& l);

// Inverse chart. The square-root branch uses denominator 2 + sqrt(4 + |Z1-Z2|^2):
// substituting the forward map gives Z1 - Z2 = -4 i xi / (1 - |xi|^2) and
// sqrt(4 + |Z1-Z2|^2) = 2 (1 + |xi|^2) / (1 - |xi|^2), so this branch returns
// xi itself while the "2 -" branch returns the antipode -1/conj(xi). The eta
// term uses the same denominator; round-trip tests pin the choice.
OrientedLine flat_to_line(const FlatCoords& z);
OrientedLine flat_to_line(const Vec4& x);

// Pluecker sextet (p, q) = (s x t, s - t) of the line through s and t.
struct PluckerLine {
    Eigen::Vector3d p;
    Eigen::Vector3d q;
};

PluckerLine plucker_from_points(const Eigen::Vector3d& s, const Eigen::Vector3d& t);

// x1 = (p2+q2)/q3, x2 = (-p1-q1)/q3, x3 = (p2-q2)/q3, x4 = (-p1+q1)/q3.
// Scale-invariant in (p, q). Throws HorizontalLine when |q3| <= margin |q|.
Vec4 plucker_to_flat(const PluckerLine& pl);

// Chart point of the line through two points of R^3 (oriented upward).
// Throws CoincidentPoints, HorizontalLine.
OrientedLine line_through_points(const Eigen::Vector3d& s, const Eigen::Vector3d& t);

// Neutral metric in real chart coordinates (Re xi, Im xi, Re eta, Im eta):
// ds^2 = 4 (1+|xi|^2)^{-2} Im( d(conj eta) d xi + 2 conj(xi) eta / (1+|xi|^2) dxi dconj(xi) ).
Eigen::Matrix4d metric_G(const OrientedLine& l);
double metric_G(const OrientedLine& l, const Eigen::Vector4d& v, const Eigen::Vector4d& w);

// (1 + |xi|^2) / (1 - |xi|^2), equal to sqrt(1 + |Z1 - Z2|^2 / 4).
double conformal_factor_omega(const OrientedLine& l);
// Same function on the flat side: sqrt(1 + ((x1-x3)^2 + (x2-x4)^2) / 4).
double omega_flat(const Vec4& x);

// The pullback of the flat metric along line_to_flat equals
// (2 Omega)^2 metric_G; this is the squared length scale of the chart map.
double chart_pullback_factor(const OrientedLine& l);

// Central-difference value of u_11 + u_22 - u_33 - u_44 at p (raw, not
// normalized). Throws EvaluationDomain if the field reports a domain miss.
double uhe_residual_flat(const std::function<double(const Vec4&)>& u, const Vec4& p,
                         double h);

// |raw residual| / max(1, sum of |second-difference| terms), with the step
// per coordinate h * max(1, |coordinate|).
double uhe_residual_flat_normalized(const std::function<double(const Vec4&)>& u,
                                    const Vec4& p, double h);

// Finite-difference evaluation of the chart Laplacian
//   i (1+|xi|^2)^2 ( d^2/(dxi dconj eta) - d^2/(dconj xi deta)
//                    - 2 (xi conj eta - conj xi eta)/(1+|xi|^2) d^2/(deta dconj eta) )
// with Wirtinger operators expanded into real partials. Step per coordinate
// is h * max(1, |coordinate|).
double laplacian_G(const std::function<double(const OrientedLine&)>& v,
                   const OrientedLine& l, double h);

// The same operator written through the flat chart:
//   kTwoChartScale * s^{3/2} (d^2/dZ1 dconjZ1 - d^2/dZ2 dconjZ2)( w / sqrt(s) )
// evaluated at x = line_to_flat(l), where w = v o flat_to_line and
// s = 1 + |Z1-Z2|^2/4. The two expressions agree after the fixed scale below.
double laplacian_G_flat_chart(const std::function<double(const OrientedLine&)>& v,
                              const OrientedLine& l, double h);

// laplacian_G == kTwoChartScale * (flat-chart expression without the scale).
inline constexpr double kTwoChartScale = 8.0;

// Point of R^3 on line l at signed arc length r from the foot point:
//   X1 + i X2 = 2 (eta - xi^2 conj eta)/(1+|xi|^2)^2 + 2 r xi/(1+|xi|^2)
//   X3 = -2 (conj(xi) eta + xi conj(eta))/(1+|xi|^2)^2 + r (1-|xi|^2)/(1+|xi|^2).
// The direction term carries the factor 2 that makes r unit-speed and makes
// Phi consistent with the incidence sections eta = (z - 2 t xi - conj(z) xi^2)/2.
Eigen::Vector3d phi_map(const OrientedLine& l, double r);

// Conformal plane in graphical coordinates:
// eta = (alpha xi + beta conj xi - conj(alpha) xi^2 conj(xi) - conj(beta) xi^3) / (1 - |xi|^2).
struct GraphicalPlane {
    Complex alpha;
    Complex beta;
};

// Conformal plane without full-rank direction projection, parametrized by
// xi = u i e^{i(theta+phi)/2},
// eta = 2 H i v (1 - u^2 e^{2 i theta}) e^{-i(theta-phi)/2} / (1 - u^4).
// H is a parametrization scale (negative values arise for conjugates).
struct NonGraphicalPlane {
    double theta;
    double phi;
    double H;
};

// Coefficients of the graphical section for the plane
// a1 Z1 + b1 conj(Z1) + a2 Z2 + b2 conj(Z2) = 0.
GraphicalPlane graphical_from_linear(Complex a1, Complex b1, Complex a2, Complex b2);

OrientedLine graphical_section(const GraphicalPlane& pl, Complex xi);
OrientedLine nongraphical_point(const NonGraphicalPlane& pl, double u, double v);

// (conj(alpha), -beta); involutive.
GraphicalPlane conjugate_graphical(const GraphicalPlane& pl);
// (-theta, phi, -H / (1 - 2 H cos theta)). Throws SingularConjugate.
NonGraphicalPlane conjugate_nongraphical(const NonGraphicalPlane& pl);

// Closed-form determinant of the induced metric; the sign classifies the
// plane (definite > 0, indefinite < 0, degenerate = 0).
double plane_metric_determinant(const GraphicalPlane& pl, Complex xi);
double plane_metric_determinant(const NonGraphicalPlane& pl, double u);

// For xi = R e^{i theta} on the graphical section,
// Q = |Z1|^2 - |Z2|^2 = 16 R^2 A(theta) / (1 - R^2)^2 with
// A = -Im(alpha) + Im(conj(beta) e^{2 i theta}).
double graphical_q_distance_coefficient(const GraphicalPlane& pl, double theta);

// Radius R(theta) with |Q| = 1: R = -sqrt(4|A|) + sqrt(4|A| + 1).
// Throws OutOfDomain where A vanishes (no pseudo-circle direction).
double graphical_unit_radius(const GraphicalPlane& pl, double theta);

// Q = 32 H u v sin(theta) / ((1+u^2)(1-u^2)^2); the parameter v putting the
// point on |Q| = 1, with sign = +-1 selecting the branch.
double nongraphical_unit_v(const NonGraphicalPlane& pl, double u, int sign);

struct Hyperboloid {
    double a;
    double b;
};  // X3^2 - 4a X1^2 - 4a X2^2 - 8b X1 X2 + a^2 - b^2 = 0
struct HyperbolicParaboloid {
    double theta;
    double phi;
};  // sin(th) X3 + 2(cos th + cos ph) X1^2 + 4 sin(ph) X1 X2 + 2(cos th - cos ph) X2^2 = 0

using RuledSurface = std::variant<Hyperboloid, HyperbolicParaboloid>;

// Quadric left-hand side at X, normalized by max(1, |X|^2)^2.
double ruled_surface_residual(const RuledSurface& surface, const Eigen::Vector3d& X);

}  // namespace asg
