#include "asg/solutions.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <utility>

namespace asg {

namespace {

double sq(double x) { return x * x; }

double p_of(const Vec4& x) { return 4.0 + sq(x(0) - x(2)) + sq(x(1) - x(3)); }

double radicand_a(const Vec4& x) {
    return 1e6 * p_of(x) - 4.0 * sq(x(0) + x(2)) - 4.0 * sq(x(1) + x(3)) -
           sq(quadratic_form(x));
}

}  // namespace

Density3 slab_density(double d0) {
    return Density3{[d0](const Eigen::Vector3d& p) {
                        return std::abs(p(2)) <= d0 ? 1.0 : 0.0;
                    },
                    50.0 * std::max(1.0, d0)};
}

Density3 ball_density(double r0) {
    return Density3{[r0](const Eigen::Vector3d& p) {
                        return p.squaredNorm() <= r0 * r0 ? 1.0 : 0.0;
                    },
                    2.0 * r0 + 2.0};
}

Density3 kball_density(const std::vector<Ball>& balls) {
    for (size_t i = 0; i < balls.size(); ++i) {
        for (size_t j = i + 1; j < balls.size(); ++j) {
            if ((balls[i].center - balls[j].center).norm() <
                balls[i].radius + balls[j].radius) {
                throw OverlappingBalls();
            }
        }
    }
    double reach = 2.0;
    for (const Ball& b : balls) reach = std::max(reach, b.center.norm() + b.radius + 2.0);
    return Density3{[balls](const Eigen::Vector3d& p) {
                        for (const Ball& b : balls) {
                            if ((p - b.center).squaredNorm() <= b.radius * b.radius)
                                return b.density;
                        }
                        return 0.0;
                    },
                    reach};
}

namespace {

struct Panel {
    double a, b;
    double fa, fm, fb;
    double simpson;
    double error;  // estimate from the half-panel refinement
};

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

}  // namespace

double xray_numeric(const Density3& f, const OrientedLine& l, double truncation,
                    double tol) {
    if (!in_chart(l)) throw OutOfChart();
    auto g = [&](double t) { return f.rho(phi_map(l, t)); };

    // seed with enough panels that compact support cannot hide between nodes
    constexpr int kInitialPanels = 64;
    constexpr int kMaxPanels = 200000;
    std::deque<Panel> active;
    const double width = 2.0 * truncation / kInitialPanels;
    for (int i = 0; i < kInitialPanels; ++i) {
        Panel p;
        p.a = -truncation + i * width;
        p.b = p.a + width;
        p.fa = g(p.a);
        p.fm = g(0.5 * (p.a + p.b));
        p.fb = g(p.b);
        p.simpson = simpson(p.a, p.b, p.fa, p.fm, p.fb);
        p.error = std::numeric_limits<double>::infinity();
        active.push_back(p);
    }

    auto refine = [&](const Panel& p) -> std::pair<Panel, Panel> {
        const double m = 0.5 * (p.a + p.b);
        Panel left{p.a, m, p.fa, g(0.5 * (p.a + m)), p.fm, 0.0, 0.0};
        Panel right{m, p.b, p.fm, g(0.5 * (m + p.b)), p.fb, 0.0, 0.0};
        left.simpson = simpson(left.a, left.b, left.fa, left.fm, left.fb);
        right.simpson = simpson(right.a, right.b, right.fa, right.fm, right.fb);
        const double err = std::abs(left.simpson + right.simpson - p.simpson) / 15.0;
        left.error = right.error = 0.5 * err;
        return {left, right};
    };

    // first refinement pass gives every panel a real error estimate
    {
        std::deque<Panel> seeded;
        for (const Panel& p : active) {
            auto [lp, rp] = refine(p);
            seeded.push_back(lp);
            seeded.push_back(rp);
        }
        active = std::move(seeded);
    }

    while (true) {
        double total_error = 0.0;
        size_t worst = 0;
        for (size_t i = 0; i < active.size(); ++i) {
            total_error += active[i].error;
            if (active[i].error > active[worst].error) worst = i;
        }
        if (total_error <= tol) break;
        if (active.size() >= kMaxPanels ||
            active[worst].error <= tol / (8.0 * active.size())) {
            throw NonConvergent("adaptive refinement stalled");
        }
        auto [lp, rp] = refine(active[worst]);
        active[worst] = lp;
        active.insert(active.begin() + worst + 1, rp);
    }

    // compensated left-to-right accumulation
    double sum = 0.0, comp = 0.0;
    for (const Panel& p : active) {
        const double y = p.simpson - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double slab_solution(double d0, const OrientedLine& l, bool paper_normalization) {
    if (!in_chart(l)) throw OutOfChart();
    const double value = d0 * conformal_factor_omega(l);
    return paper_normalization ? value : 2.0 * value;
}

double ball_solution(double r0, const OrientedLine& l) {
    if (!in_chart(l)) throw OutOfChart();
    const double r = std::norm(l.xi);
    const double m = r0 * r0 - 4.0 * std::norm(l.eta) / sq(1.0 + r);
    return m > 0.0 ? 2.0 * std::sqrt(m) : 0.0;
}

Complex ball_section_eta(const Eigen::Vector3d& center, Complex xi) {
    const Complex z(center(0), center(1));
    return 0.5 * (z - 2.0 * center(2) * xi - std::conj(z) * xi * xi);
}

double kball_solution(const std::vector<Ball>& balls, const OrientedLine& l,
                      bool paper_normalization) {
    if (!in_chart(l)) throw OutOfChart();
    for (size_t i = 0; i < balls.size(); ++i) {
        for (size_t j = i + 1; j < balls.size(); ++j) {
            if ((balls[i].center - balls[j].center).norm() <
                balls[i].radius + balls[j].radius) {
                throw OverlappingBalls();
            }
        }
    }
    const double r = std::norm(l.xi);
    const double lead = paper_normalization ? 1.0 : 2.0;
    double sum = 0.0;
    for (const Ball& b : balls) {
        const Complex etaj = ball_section_eta(b.center, l.xi);
        const double m =
            b.radius * b.radius - 4.0 * std::norm(l.eta - etaj) / sq(1.0 + r);
        if (m > 0.0) sum += b.density * lead * std::sqrt(m);
    }
    return sum;
}

double appendix_a_value(const Vec4& x) {
    const double rad = radicand_a(x);
    if (rad <= 0.0) throw OutOfDomain("radicand not positive");
    return std::sqrt(rad) / p_of(x);
}

UheSolution appendix_a_solution() {
    UheSolution s;
    s.name = "appendix-a";
    // continuous extension by zero across the support boundary; this is the
    // chord of the radius-500 ball divided by sqrt(p), so the zero extension
    // is the value of the underlying line integral
    s.flat = [](const Vec4& x) {
        const double rad = radicand_a(x);
        return rad > 0.0 ? std::sqrt(rad) / p_of(x) : 0.0;
    };
    s.line = [](const OrientedLine& l) {
        const Vec4 x = line_to_flat_vec(l);
        const double rad = radicand_a(x);
        return rad > 0.0 ? std::sqrt(rad) * 2.0 * omega_flat(x) / p_of(x) : 0.0;
    };
    s.interior = [](const Vec4& x) { return radicand_a(x) >= 0.05e6 * p_of(x); };
    s.vanishes_at_infinity = true;
    return s;
}

UheSolution slab_field(double d0) {
    UheSolution s;
    s.name = "slab";
    s.line = [d0](const OrientedLine& l) { return slab_solution(d0, l); };
    s.flat = [d0](const Vec4& x) {
        return slab_solution(d0, flat_to_line(x)) / std::sqrt(p_of(x));
    };
    s.interior = [](const Vec4&) { return true; };
    s.vanishes_at_infinity = false;  // slab support is not compact
    return s;
}

UheSolution ball_field(double r0) {
    UheSolution s;
    s.name = "ball";
    s.line = [r0](const OrientedLine& l) { return ball_solution(r0, l); };
    s.flat = [r0](const Vec4& x) {
        return ball_solution(r0, flat_to_line(x)) / std::sqrt(p_of(x));
    };
    s.interior = [r0](const Vec4& x) {
        const OrientedLine l = flat_to_line(x);
        if (std::abs(l.xi) > 0.95) return false;
        const double m =
            r0 * r0 - 4.0 * std::norm(l.eta) / sq(1.0 + std::norm(l.xi));
        return m >= 0.1 * r0 * r0;
    };
    s.vanishes_at_infinity = true;
    return s;
}

UheSolution kball_field(const std::vector<Ball>& balls) {
    UheSolution s;
    s.name = "kballs";
    s.line = [balls](const OrientedLine& l) { return kball_solution(balls, l); };
    s.flat = [balls](const Vec4& x) {
        return kball_solution(balls, flat_to_line(x)) / std::sqrt(p_of(x));
    };
    s.interior = [balls](const Vec4& x) {
        const OrientedLine l = flat_to_line(x);
        if (std::abs(l.xi) > 0.95) return false;
        const double r = std::norm(l.xi);
        // stay well inside exactly one chord and away from the others
        int inside = 0;
        for (const Ball& b : balls) {
            const Complex etaj = ball_section_eta(b.center, l.xi);
            const double m =
                b.radius * b.radius - 4.0 * std::norm(l.eta - etaj) / sq(1.0 + r);
            if (m >= 0.1 * b.radius * b.radius) ++inside;
            else if (m > -0.1 * b.radius * b.radius) return false;  // near a boundary
        }
        return inside >= 1;
    };
    s.vanishes_at_infinity = true;
    return s;
}

UheSolution polynomial_field(const std::vector<PolyTerm>& terms, std::string name) {
    UheSolution s;
    s.name = std::move(name);
    s.flat = [terms](const Vec4& x) {
        double total = 0.0;
        for (const PolyTerm& t : terms) {
            double v = t.coeff;
            for (int k = 0; k < 4; ++k) {
                for (int e = 0; e < t.powers[k]; ++e) v *= x(k);
            }
            total += v;
        }
        return total;
    };
    s.interior = [](const Vec4&) { return true; };
    return s;
}

}  // namespace asg
