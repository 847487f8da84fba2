#include "asg/meanvalue.hpp"

#include <cmath>
#include <vector>

namespace asg {

namespace {

double sq(double x) { return x * x; }

// Neumaier compensated sum, fixed left-to-right order.
struct Accumulator {
    double sum = 0.0, comp = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) comp += (sum - t) + v;
        else comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

double flat_weight(const Vec4& x) {
    return 1.0 / std::sqrt(4.0 + sq(x(0) - x(2)) + sq(x(1) - x(3)));
}

double evaluate(const UheSolution& u, const Vec4& x, IntegrandSpace space) {
    if (space == IntegrandSpace::Flat) {
        if (u.flat) return u.flat(x);
        throw EvaluationDomain("solution has no flat evaluator");
    }
    if (u.line) return u.line(flat_to_line(x)) * flat_weight(x);
    if (u.flat) return u.flat(x);  // the chart partner reduces to this
    throw EvaluationDomain("solution has no evaluator");
}

}  // namespace

double integrate_circle(const UheSolution& u, const ConjugateConicPair& pair,
                        ConicSide side, int n, IntegrandSpace space) {
    if (pair.hyperbolic()) throw EvaluationDomain("circle integrator on hyperbolic pair");
    Accumulator acc;
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * M_PI * i / n;
        acc.add(evaluate(u, pair.point(side, t), space));
    }
    return acc.value() * (2.0 * M_PI / n) * line_element_factor(pair);
}

namespace {

struct BranchScan {
    double integral;
    double tail;
};

BranchScan scan_branch(const UheSolution& u, const ConjugateConicPair& pair,
                       ConicSide side, Branch branch, double T, int n,
                       IntegrandSpace space) {
    const double h = 2.0 * T / n;
    std::vector<double> vals(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        vals[i] = evaluate(u, pair.point(side, -T + h * i, branch), space);
    }
    Accumulator acc;
    for (int i = 0; i <= n; ++i) {
        acc.add((i == 0 || i == n) ? 0.5 * vals[i] : vals[i]);
    }
    const double integral = acc.value() * h * line_element_factor(pair);

    // decay check and geometric tail extrapolation on the outer deciles
    const int seg = std::max(n / 10, 2);
    auto mean_abs = [&](int from, int to) {
        double m = 0.0;
        for (int i = from; i < to; ++i) m += std::abs(vals[i]);
        return m / std::max(1, to - from);
    };
    const double scale = mean_abs(0, n + 1) + 1e-300;
    double tail = 0.0;
    const struct { double last, prev; } ends[2] = {
        {mean_abs(0, seg), mean_abs(seg, 2 * seg)},
        {mean_abs(n + 1 - seg, n + 1), mean_abs(n + 1 - 2 * seg, n + 1 - seg)},
    };
    for (const auto& e : ends) {
        if (e.last <= 1e-12 * scale) continue;  // dead tail
        if (e.last > e.prev * (1.0 + 1e-9) + 1e-12 * scale) {
            throw NonIntegrable("integrand does not decay at the truncation edge");
        }
        const double rho = std::min(e.last / std::max(e.prev, 1e-300), 1.0 - 1e-9);
        tail += e.last * (seg * h) * rho / (1.0 - rho);
    }
    return BranchScan{integral, tail * line_element_factor(pair)};
}

}  // namespace

HyperbolaIntegral integrate_hyperbola(const UheSolution& u, const ConjugateConicPair& pair,
                                      ConicSide side, BranchPolicy policy, double T, int n,
                                      IntegrandSpace space) {
    if (!pair.hyperbolic()) throw EvaluationDomain("hyperbola integrator on definite pair");
    HyperbolaIntegral out{0.0, 0.0};
    if (policy != BranchPolicy::SingleBranchMinus) {
        const BranchScan s = scan_branch(u, pair, side, Branch::Plus, T, n, space);
        out.value += s.integral;
        out.tail_bound += s.tail;
    }
    if (policy != BranchPolicy::SingleBranchPlus) {
        const BranchScan s = scan_branch(u, pair, side, Branch::Minus, T, n, space);
        out.value += s.integral;
        out.tail_bound += s.tail;
    }
    return out;
}

namespace {

MeanValueReport assemble(double s, double sp, double tail, const QuadratureSettings& q) {
    MeanValueReport r;
    r.integral_S = s;
    r.integral_Sperp = sp;
    r.absolute_gap = std::abs(s - sp);
    r.relative_gap = r.absolute_gap / std::max({std::abs(s), std::abs(sp), kGapFloor});
    r.tail_bound = tail;
    r.quadrature = q;
    return r;
}

}  // namespace

MeanValueReport verify_pair(const UheSolution& u, const ConjugateConicPair& pair,
                            const QuadratureSettings& settings) {
    if (!pair.hyperbolic()) {
        const double s = integrate_circle(u, pair, ConicSide::S, settings.nodes, settings.space);
        const double sp =
            integrate_circle(u, pair, ConicSide::Sperp, settings.nodes, settings.space);
        return assemble(s, sp, 0.0, settings);
    }
    const HyperbolaIntegral s =
        integrate_hyperbola(u, pair, ConicSide::S, settings.branch, settings.truncation,
                            settings.nodes, settings.space);
    const HyperbolaIntegral sp =
        integrate_hyperbola(u, pair, ConicSide::Sperp, settings.branch, settings.truncation,
                            settings.nodes, settings.space);
    return assemble(s.value, sp.value, s.tail_bound + sp.tail_bound, settings);
}

ConjugateConicPair standard_pair() {
    return build_pair(Vec4::Zero(), PlaneFrame{Vec4::Zero(), Vec4::Unit(0), Vec4::Unit(1)},
                      1.0);
}

namespace {

struct ImageIntegrals {
    double pullback;
    double direct;
};

ImageIntegrals integrate_image(const UheSolution& u, const ConformalMap& f,
                               const ConjugateConicPair& pair, ConicSide side, int n) {
    if (!u.flat) throw EvaluationDomain("conformal invariance needs a flat evaluator");
    Accumulator pullback, direct;
    const double dt = 2.0 * M_PI / n;
    const double fd_h = 1e-6;
    for (int i = 0; i < n; ++i) {
        const double t = dt * i;
        const Vec4 x = pair.point(side, t);
        const ExtendedPoint img = apply(f, ExtendedPoint(x));
        double uval = 0.0;
        if (img.infinite) {
            if (!u.vanishes_at_infinity) throw PoleOnCurve();
        } else {
            uval = u.flat(img.p);
        }
        if (uval != 0.0) {
            double factor = 0.0;
            try {
                factor = conformal_factor(f, x);
            } catch (const PoleAt&) {
                throw PoleOnCurve();  // intermediate stage absorbed the node
            }
            pullback.add(uval * factor);
            const ExtendedPoint fwd = apply(f, ExtendedPoint(pair.point(side, t + fd_h)));
            const ExtendedPoint bwd = apply(f, ExtendedPoint(pair.point(side, t - fd_h)));
            if (fwd.infinite || bwd.infinite) throw PoleOnCurve();
            const Vec4 tangent = (fwd.p - bwd.p) / (2.0 * fd_h);
            direct.add(uval * std::sqrt(std::abs(quadratic_form(tangent))));
        } else {
            pullback.add(0.0);
            direct.add(0.0);
        }
    }
    // the standard curves are unit circles: |gamma'| = 1, dl = dt
    return ImageIntegrals{pullback.value() * dt, direct.value() * dt};
}

}  // namespace

MeanValueReport verify_conformal_invariance(const UheSolution& u, const ConformalMap& f,
                                            const QuadratureSettings& settings) {
    const ConjugateConicPair pair = standard_pair();
    const ImageIntegrals s = integrate_image(u, f, pair, ConicSide::S, settings.nodes);
    const ImageIntegrals sp = integrate_image(u, f, pair, ConicSide::Sperp, settings.nodes);
    MeanValueReport r = assemble(s.pullback, sp.pullback, 0.0, settings);
    auto rel = [](double a, double b) {
        return std::abs(a - b) / std::max({std::abs(a), std::abs(b), kGapFloor});
    };
    r.route_gap = std::max(rel(s.pullback, s.direct), rel(sp.pullback, sp.direct));
    return r;
}

}  // namespace asg
