// Acceptance suite: end-to-end checks of the mean-value identities, the
// chart machinery, and the quadrature oracles at their contract tolerances.
// Prints one line per criterion and exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "asg/experiment.hpp"
#include "asg/meanvalue.hpp"
#include "support.hpp"

using namespace asg;
using asgtest::Rng;

namespace {

int g_failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %s  (%s)\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

const Vec4 kA1[3] = {Vec4(8, 0, 0, 0), Vec4(7, 1, 0, 0), Vec4(6, 0, 0, 0)};
const Vec4 kA2[3] = {Vec4(8, 0, 0, 0), Vec4(6, 0, 0, 0), Vec4(9, 0, std::sqrt(3.0), 0)};

void criterion_1_definite_case() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto pair = pair_from_three_points(kA1[0], kA1[1], kA1[2]);
    const double center_err = (pair.center - Vec4(7, 0, 0, 0)).norm();
    const double radius_err = std::abs(pair.square_radius - 1.0);
    QuadratureSettings qs;
    qs.nodes = 2048;
    const MeanValueReport r = verify_pair(appendix_a_solution(), pair, qs);
    const double elapsed = seconds_since(t0);
    report("1  definite case: center/radius recovered",
           center_err <= 1e-12 && radius_err <= 1e-12,
           fmt("|O-(7,0,0,0)|=%.2e |c2-1|=%.2e", center_err, radius_err));
    report("1  definite case: mean-value gap <= 1e-6 at n=2048, under 1 s",
           r.relative_gap <= 1e-6 && elapsed < 1.0,
           fmt("gap=%.3e time=%.3fs", r.relative_gap, elapsed));
}

void criterion_2_hyperbolic_case() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto pair = pair_from_three_points(kA2[0], kA2[1], kA2[2]);
    const double center_err = (pair.center - Vec4(7, 0, 0, 0)).norm();
    const double radius_err = std::abs(pair.square_radius - 1.0);
    report("2  hyperbolic case: center/radius recovered",
           center_err <= 1e-12 && radius_err <= 1e-12,
           fmt("|O-(7,0,0,0)|=%.2e |c2-1|=%.2e", center_err, radius_err));

    const UheSolution u = appendix_a_solution();
    QuadratureSettings qs;
    qs.nodes = 8192;
    qs.truncation = 12.0;

    qs.branch = BranchPolicy::SingleBranchPlus;
    const MeanValueReport single = verify_pair(u, pair, qs);
    // The one-branch integrals do not balance: the identity holds for the
    // full conics. Asserted at the contract tolerance and reported honestly.
    report("2  hyperbolic case: single-branch gap <= 1e-4",
           single.relative_gap <= 1e-4,
           fmt("gap=%.3e; the identity holds for full conics, not per branch",
               single.relative_gap));

    qs.branch = BranchPolicy::BothBranches;
    const MeanValueReport both = verify_pair(u, pair, qs);
    report("2  hyperbolic case: two-branch gap <= 1e-4 at T=12, n=8192",
           both.relative_gap <= 1e-4, fmt("gap=%.3e", both.relative_gap));

    QuadratureSettings qs2 = qs;
    qs2.truncation = 24.0;
    qs2.nodes = 16384;
    const MeanValueReport wide = verify_pair(u, pair, qs2);
    const double change = std::max(std::abs(wide.integral_S - both.integral_S),
                                   std::abs(wide.integral_Sperp - both.integral_Sperp));
    const double allowance = 1.25 * both.tail_bound + 1e-9;
    const double elapsed = seconds_since(t0);
    report("2  hyperbolic case: tail bound consistent under T -> 2T, under 5 s",
           change <= allowance && elapsed < 5.0,
           fmt("change=%.3e tail=%.3e time=%.3fs", change, both.tail_bound, elapsed));
}

void criterion_3_uhe_residuals() {
    Rng rng(301);
    const UheSolution ua = appendix_a_solution();
    double worst_a = 0.0;
    for (int i = 0; i < 100; ++i) {
        Vec4 p;
        do {
            p = asgtest::random_vec4(rng, 10.0);
        } while (!ua.interior(p));
        worst_a = std::max(worst_a, uhe_residual_flat_normalized(ua.flat, p, 1e-3));
    }

    const UheSolution ball = ball_field(1.0);
    double worst_b = 0.0;
    int done = 0;
    while (done < 100) {
        OrientedLine l;
        l.xi = Complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
        l.eta = Complex(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3));
        if (std::abs(l.xi) > 0.6) continue;
        const Vec4 p = line_to_flat_vec(l);
        if (!ball.interior(p)) continue;
        worst_b = std::max(worst_b, uhe_residual_flat_normalized(ball.flat, p, 1e-3));
        ++done;
    }

    const std::vector<Ball> balls = {{Eigen::Vector3d(0, 0, 0), 1.0, 1.0},
                                     {Eigen::Vector3d(3.5, 0, 0.5), 1.2, 2.0}};
    const UheSolution kb = kball_field(balls);
    double worst_k = 0.0;
    done = 0;
    while (done < 100) {
        OrientedLine l;
        l.xi = Complex(rng.uniform(-0.45, 0.45), rng.uniform(-0.45, 0.45));
        l.eta = Complex(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3));
        if (done % 2) l.eta += ball_section_eta(balls[1].center, l.xi);
        const Vec4 p = line_to_flat_vec(l);
        if (!kb.interior(p)) continue;
        worst_k = std::max(worst_k, uhe_residual_flat_normalized(kb.flat, p, 1e-3));
        ++done;
    }

    report("3  wave-operator residuals <= 1e-4 at 100 interior points each",
           worst_a <= 1e-4 && worst_b <= 1e-4 && worst_k <= 1e-4,
           fmt("named=%.2e ball=%.2e kball=%.2e", worst_a, worst_b, worst_k));
}

void criterion_4_chart_roundtrip() {
    Rng rng(302);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        OrientedLine l;
        do {
            l.xi = Complex(rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9));
        } while (std::abs(l.xi) > 0.9);
        l.eta = Complex(rng.uniform(-10, 10), rng.uniform(-10, 10));
        const OrientedLine back = flat_to_line(line_to_flat(l));
        worst = std::max({worst, std::abs(back.xi - l.xi), std::abs(back.eta - l.eta)});
    }
    report("4  chart round-trip <= 1e-10 over 10^4 lines", worst <= 1e-10,
           fmt("max=%.3e", worst));
}

void criterion_5_laplacians() {
    auto omega = [](const OrientedLine& l) { return conformal_factor_omega(l); };
    auto field = [](const OrientedLine& l) {
        const double x = l.xi.real(), y = l.xi.imag();
        const double u = l.eta.real(), w = l.eta.imag();
        return std::sin(0.7 * x + 0.3 * u) + x * w + 0.5 * y * y * u +
               std::cos(0.4 * y - 0.6 * w) + 0.2 * u * w * x;
    };
    double worst_omega = 0.0, worst_equiv = 0.0;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            OrientedLine l;
            l.xi = Complex(-0.45 + 0.9 * i / 9, -0.45 + 0.9 * j / 9) * 0.999;
            l.eta = Complex(0.3 - 0.6 * i / 9, -0.4 + 0.8 * j / 9);
            worst_omega = std::max(worst_omega, std::abs(laplacian_G(omega, l, 1e-4)));
            const double a = laplacian_G(field, l, 1e-4);
            const double b = laplacian_G_flat_chart(field, l, 1e-4);
            worst_equiv = std::max(worst_equiv,
                                   std::abs(a - b) / std::max({1e-2, std::abs(a), std::abs(b)}));
        }
    }
    report("5  conformal factor is harmonic, residual <= 1e-5", worst_omega <= 1e-5,
           fmt("max=%.3e", worst_omega));
    report("5  two-chart Laplacian agreement <= 1e-4", worst_equiv <= 1e-4,
           fmt("max rel=%.3e", worst_equiv));
}

void criterion_6_duality() {
    Rng rng(303);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto pair = asgtest::random_pair(rng, trial % 2 == 1);
        const auto s3 = pair.sample(ConicSide::S, 3, 1.2);
        const auto p3 = pair.sample(ConicSide::Sperp, 3, 0.8);
        for (const auto& p : pair.sample(ConicSide::Sperp, 7, 1.6)) {
            worst = std::max(worst, nullity_residual(p.point, s3[0].point, s3[1].point,
                                                     s3[2].point));
        }
        for (const auto& s : pair.sample(ConicSide::S, 7, 1.6)) {
            worst = std::max(worst, nullity_residual(s.point, p3[0].point, p3[1].point,
                                                     p3[2].point));
        }
    }
    report("6  duality on 20 random pairs, nullity residual <= 1e-9", worst <= 1e-9,
           fmt("max=%.3e", worst));
}

void criterion_7_transitivity() {
    Rng rng(304);
    double worst = 0.0;
    bool bookkeeping = true;
    for (int i = 0; i < 100; ++i) {
        const auto t = asgtest::random_skew_triple(rng, 10.0);
        const ConformalMap f = map_triple_to_standard(t[0], t[1], t[2]);
        const ExtendedPoint i0 = apply(f, ExtendedPoint(t[0]));
        const ExtendedPoint i1 = apply(f, ExtendedPoint(t[1]));
        const ExtendedPoint i2 = apply(f, ExtendedPoint(t[2]));
        bookkeeping = bookkeeping && i1.infinite && !i0.infinite && !i2.infinite;
        if (!i0.infinite) worst = std::max(worst, i0.p.norm());
        if (!i2.infinite) worst = std::max(worst, (i2.p - Vec4::Unit(0)).norm());
    }
    report("7  triple transitivity on 100 random skew triples, residual <= 1e-7",
           worst <= 1e-7 && bookkeeping, fmt("max=%.3e", worst));
}

void criterion_8_ruled_surfaces() {
    const double a = 1.0, b = 0.3;
    const GraphicalPlane g{Complex(0, -a), Complex(b, 0)};
    const Hyperboloid hyp{a, b};
    auto scan_graphical = [&](const GraphicalPlane& pl) {
        double worst = 0.0;
        for (int i = 0; i < 64; ++i) {
            const double th = 2 * M_PI * i / 64;
            const double R = graphical_unit_radius(pl, th);
            const OrientedLine l = graphical_section(pl, R * std::exp(Complex(0, th)));
            for (int k = 0; k < 16; ++k) {
                const double r = -2.0 + 4.0 * k / 15;
                worst = std::max(worst, std::abs(ruled_surface_residual(hyp, phi_map(l, r))));
            }
        }
        return worst;
    };
    const double wg = scan_graphical(g);
    const double wgc = scan_graphical(conjugate_graphical(g));

    const NonGraphicalPlane ng{M_PI / 3, M_PI / 5, 0.7};
    const HyperbolicParaboloid par{ng.theta, ng.phi};
    auto scan_ng = [&](const NonGraphicalPlane& pl, int sign) {
        double worst = 0.0;
        for (int i = 0; i < 64; ++i) {
            const double u = 0.15 + (0.8 - 0.15) * i / 63;
            const OrientedLine l = nongraphical_point(pl, u, nongraphical_unit_v(pl, u, sign));
            for (int k = 0; k < 16; ++k) {
                const double r = -2.0 + 4.0 * k / 15;
                worst = std::max(worst, std::abs(ruled_surface_residual(par, phi_map(l, r))));
            }
        }
        return worst;
    };
    const double wn = scan_ng(ng, +1);
    const double wnc = scan_ng(conjugate_nongraphical(ng), -1);
    report("8  ruled-surface quadrics <= 1e-7 on 64x16 grids, both conjugate sides",
           wg <= 1e-7 && wgc <= 1e-7 && wn <= 1e-7 && wnc <= 1e-7,
           fmt("hyperboloid=%.1e/%.1e paraboloid-style=%.1e", std::max(wg, wgc), wn, wnc));
}

void criterion_9_xray_oracle() {
    Rng rng(305);
    auto random_line = [&](double moment) {
        OrientedLine l;
        do {
            l.xi = Complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6));
        } while (std::abs(l.xi) > 0.65);
        l.eta = Complex(rng.uniform(-moment, moment), rng.uniform(-moment, moment));
        return l;
    };
    const Density3 fb = ball_density(1.0);
    double worst_ball = 0.0;
    for (int i = 0; i < 100; ++i) {
        const OrientedLine l = random_line(0.8);
        worst_ball = std::max(worst_ball, std::abs(ball_solution(1.0, l) -
                                                   xray_numeric(fb, l, 4.0, 1e-10)));
    }
    const std::vector<Ball> balls = {{Eigen::Vector3d(0, 0, 0), 0.8, 1.0},
                                     {Eigen::Vector3d(2.5, 0.5, -0.5), 0.9, 1.5}};
    const Density3 fk = kball_density(balls);
    double worst_k = 0.0;
    for (int i = 0; i < 100; ++i) {
        const OrientedLine l = random_line(2.5);
        worst_k = std::max(worst_k, std::abs(kball_solution(balls, l) -
                                             xray_numeric(fk, l, fk.suggested_truncation,
                                                          1e-10)));
    }
    report("9  ball/k-ball closed forms match quadrature <= 1e-8 on 200 lines",
           worst_ball <= 1e-8 && worst_k <= 1e-8,
           fmt("ball=%.2e kball=%.2e", worst_ball, worst_k));

    const Density3 fs = slab_density(0.8);
    double worst_ratio = 0.0;
    for (int i = 0; i < 10; ++i) {
        const OrientedLine l = random_line(1.5);
        const double ratio =
            xray_numeric(fs, l, 60.0, 1e-9) / slab_solution(0.8, l, true);
        worst_ratio = std::max(worst_ratio, std::abs(ratio - 2.0));
    }
    report("9  slab integral is exactly twice the published value", worst_ratio <= 1e-6,
           fmt("max |ratio-2|=%.2e", worst_ratio));
}

void criterion_10_discrimination() {
    const UheSolution control = polynomial_field({{{2, 0, 0, 0}, 1.0}}, "x1^2");
    const MeanValueReport r = verify_pair(control, standard_pair(), QuadratureSettings{});
    report("10 non-harmonic control fails with gap >= 1e-2", r.relative_gap >= 1e-2,
           fmt("gap=%.3e", r.relative_gap));
}

}  // namespace

int main() {
    const std::vector<std::function<void()>> criteria = {
        criterion_1_definite_case, criterion_2_hyperbolic_case, criterion_3_uhe_residuals,
        criterion_4_chart_roundtrip, criterion_5_laplacians, criterion_6_duality,
        criterion_7_transitivity, criterion_8_ruled_surfaces, criterion_9_xray_oracle,
        criterion_10_discrimination,
    };
    for (const auto& c : criteria) {
        try {
            c();
        } catch (const std::exception& e) {
            report("criterion aborted", false, e.what());
        }
    }
    if (g_failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d check(s) failed\n", g_failures);
    return 1;
}
