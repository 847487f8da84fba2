#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "asg/linespace.hpp"
#include "asg/neutral.hpp"

namespace asg {

// Scalar field with evaluators on either side of the chart. Fields that come
// from line integrals of compactly supported densities vanish at infinity,
// which lets curve integrals treat poles as zero-weight points.
struct UheSolution {
    std::string name;
    std::function<double(const Vec4&)> flat;            // may be empty
    std::function<double(const OrientedLine&)> line;    // may be empty
    std::function<bool(const Vec4&)> interior;          // residual-test admissibility
    bool vanishes_at_infinity = false;
};

struct Ball {
    Eigen::Vector3d center;
    double radius;
    double density;
};

struct Density3 {
    std::function<double(const Eigen::Vector3d&)> rho;
    double suggested_truncation;
};

Density3 slab_density(double d0);
Density3 ball_density(double r0);
Density3 kball_density(const std::vector<Ball>& balls);  // throws OverlappingBalls

// Adaptive Simpson integral of t -> rho(phi_map(l, t)) over [-T, T] to
// absolute tolerance tol. Interval halving with the three-point error
// estimate, worst interval first; the budget is tol split over the active
// intervals. Throws NonConvergent if refinement stalls.
double xray_numeric(const Density3& f, const OrientedLine& l, double truncation,
                    double tol);

// Chord length of the slab |x3| <= d0: 2 d0 (1+|xi|^2)/(1-|xi|^2). The
// paper_normalization flag reproduces the published form (half of it).
double slab_solution(double d0, const OrientedLine& l, bool paper_normalization = false);

// 2 sqrt(r0^2 - 4 |eta|^2 / (1+|xi|^2)^2), zero once 2|eta| > (1+|xi|^2) r0.
double ball_solution(double r0, const OrientedLine& l);

// Section of lines through a point: eta = (z - 2 t xi - conj(z) xi^2)/2.
Complex ball_section_eta(const Eigen::Vector3d& center, Complex xi);

// Sum over balls of density * chord; disjointness required. The indicator of
// each term is the positivity of its radicand (squared radius in the bound).
// paper_normalization drops the leading 2 per chord.
double kball_solution(const std::vector<Ball>& balls, const OrientedLine& l,
                      bool paper_normalization = false);

// sqrt(10^6 p - 4 (x1+x3)^2 - 4 (x2+x4)^2 - Q(x)^2) / p with
// p = 4 + (x1-x3)^2 + (x2-x4)^2. Throws OutOfDomain when the radicand is
// not positive.
double appendix_a_value(const Vec4& x);

struct PolyTerm {
    std::array<int, 4> powers;
    double coeff;
};

// Catalog entries. Fields with a line evaluator get the flat partner
// v / sqrt(4 + (x1-x3)^2 + (x2-x4)^2), which is the member of the family
// that the flat wave operator annihilates.
UheSolution appendix_a_solution();
UheSolution slab_field(double d0);
UheSolution ball_field(double r0);
UheSolution kball_field(const std::vector<Ball>& balls);
UheSolution polynomial_field(const std::vector<PolyTerm>& terms, std::string name = "polynomial");

}  // namespace asg
