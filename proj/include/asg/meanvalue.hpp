#pragma once

#include "asg/conformal.hpp"
#include "asg/conics.hpp"
#include "asg/solutions.hpp"

namespace asg {

enum class BranchPolicy { SingleBranchPlus, SingleBranchMinus, BothBranches };

// Flat: integrate the flat-side field against dl = |c| dt.
// LineSpace: integrate the chart-side field against the line element that
// the canonical metric induces along the image of the flat curve, which is
// dl / sqrt(4 + (x1-x3)^2 + (x2-x4)^2).
enum class IntegrandSpace { Flat, LineSpace };

struct QuadratureSettings {
    int nodes = 2048;
    double truncation = 12.0;
    BranchPolicy branch = BranchPolicy::BothBranches;
    IntegrandSpace space = IntegrandSpace::Flat;
};

inline constexpr double kGapFloor = 1e-30;

struct MeanValueReport {
    double integral_S = 0.0;
    double integral_Sperp = 0.0;
    double absolute_gap = 0.0;
    double relative_gap = 0.0;
    double tail_bound = 0.0;   // hyperbolic truncation estimate, both sides
    double route_gap = 0.0;    // conformal-invariance runs only
    QuadratureSettings quadrature;
};

// Periodic composite trapezoid with n uniform nodes; spectral for smooth
// integrands. Throws EvaluationDomain if the field cannot be evaluated.
double integrate_circle(const UheSolution& u, const ConjugateConicPair& pair,
                        ConicSide side, int n,
                        IntegrandSpace space = IntegrandSpace::Flat);

struct HyperbolaIntegral {
    double value;
    double tail_bound;
};

// Composite trapezoid over [-T, T] per branch, summed per policy. The tail
// bound extrapolates the outermost decile geometrically. Throws
// NonIntegrable when the sampled tails fail to decay.
HyperbolaIntegral integrate_hyperbola(const UheSolution& u, const ConjugateConicPair& pair,
                                      ConicSide side, BranchPolicy policy, double T, int n,
                                      IntegrandSpace space = IntegrandSpace::Flat);

MeanValueReport verify_pair(const UheSolution& u, const ConjugateConicPair& pair,
                            const QuadratureSettings& settings);

// Integrals of u over f(S0) and f(S0perp), each computed two ways: pulled
// back (conformal factor times u o f against dl on the standard circles) and
// directly on the image curve with a finite-difference line element. The two
// routes must agree; their worst relative discrepancy is route_gap. Points
// mapped to infinity contribute zero when the field vanishes at infinity and
// raise PoleOnCurve otherwise.
MeanValueReport verify_conformal_invariance(const UheSolution& u, const ConformalMap& f,
                                            const QuadratureSettings& settings);

ConjugateConicPair standard_pair();  // S0 in span{e1,e2}, unit radius

}  // namespace asg
