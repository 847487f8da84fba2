#include "asg/experiment.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace asg {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// uniform doubles built from raw 64-bit draws so results do not depend on
// the standard library's distribution implementation
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double unit() { return (gen() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * unit(); }
};

Vec4 parse_vec4(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 4) {
        throw ConfigError(where + ": expected an array of 4 numbers");
    }
    Vec4 v;
    for (int i = 0; i < 4; ++i) {
        if (!j[i].is_number()) throw ConfigError(where + ": component is not a number");
        v(i) = j[i].get<double>();
    }
    return v;
}

Eigen::Vector3d parse_vec3(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) {
        throw ConfigError(where + ": expected an array of 3 numbers");
    }
    return Eigen::Vector3d(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

double get_number(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigError(std::string(key) + ": expected a number");
    return j[key].get<double>();
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
    ExperimentConfig cfg;
    if (!j.is_object()) throw ConfigError("top level: expected an object");
    if (!j.contains("experiment") || !j["experiment"].is_string()) {
        throw ConfigError("experiment: required string field");
    }
    cfg.experiment = j["experiment"].get<std::string>();
    static const char* kKnown[] = {"asgeirsson-circle", "asgeirsson-hyperbola",
                                   "uhe-residual",      "xray-compare",
                                   "ruled-surface",     "map-triple",
                                   "chart-roundtrip"};
    bool known = false;
    for (const char* k : kKnown) known = known || cfg.experiment == k;
    if (!known) throw ConfigError("experiment: unknown kind '" + cfg.experiment + "'");

    if (j.contains("solution")) {
        const json& s = j["solution"];
        if (!s.is_object() || !s.contains("kind") || !s["kind"].is_string()) {
            throw ConfigError("solution.kind: required string field");
        }
        cfg.solution.kind = s["kind"].get<std::string>();
        cfg.solution.d0 = get_number(s, "d0", 1.0);
        cfg.solution.r0 = get_number(s, "r0", 1.0);
        if (s.contains("balls")) {
            for (size_t i = 0; i < s["balls"].size(); ++i) {
                const json& b = s["balls"][i];
                const std::string where = "solution.balls[" + std::to_string(i) + "]";
                Ball ball;
                ball.center = parse_vec3(b.at("center"), where + ".center");
                ball.radius = b.at("radius").get<double>();
                ball.density = b.contains("density") ? b["density"].get<double>() : 1.0;
                if (ball.radius <= 0) throw ConfigError(where + ".radius: must be positive");
                cfg.solution.balls.push_back(ball);
            }
        }
        if (s.contains("terms")) {
            for (size_t i = 0; i < s["terms"].size(); ++i) {
                const json& t = s["terms"][i];
                const std::string where = "solution.terms[" + std::to_string(i) + "]";
                PolyTerm term;
                const json& pw = t.at("powers");
                if (!pw.is_array() || pw.size() != 4) {
                    throw ConfigError(where + ".powers: expected 4 integers");
                }
                for (int k = 0; k < 4; ++k) term.powers[k] = pw[k].get<int>();
                term.coeff = t.at("coeff").get<double>();
                cfg.solution.terms.push_back(term);
            }
        }
    }

    if (j.contains("conic")) {
        const json& c = j["conic"];
        if (c.contains("points")) {
            if (!c["points"].is_array() || c["points"].size() != 3) {
                throw ConfigError("conic.points: expected 3 points");
            }
            cfg.conic.from_points = true;
            for (int i = 0; i < 3; ++i) {
                cfg.conic.points[i] =
                    parse_vec4(c["points"][i], "conic.points[" + std::to_string(i) + "]");
            }
        } else {
            cfg.conic.center = parse_vec4(c.at("center"), "conic.center");
            cfg.conic.plane_u = parse_vec4(c.at("plane").at("u"), "conic.plane.u");
            cfg.conic.plane_v = parse_vec4(c.at("plane").at("v"), "conic.plane.v");
            cfg.conic.square_radius = get_number(c, "square_radius", 1.0);
        }
    }

    if (j.contains("quadrature")) {
        const json& q = j["quadrature"];
        cfg.quadrature.nodes = static_cast<int>(get_number(q, "nodes", 2048));
        if (cfg.quadrature.nodes < 8) throw ConfigError("quadrature.nodes: too small");
        cfg.quadrature.truncation = get_number(q, "truncation", 12.0);
        if (cfg.quadrature.truncation <= 0) {
            throw ConfigError("quadrature.truncation: must be positive");
        }
        cfg.quadrature.tolerance = get_number(q, "tolerance", 1e-8);
        cfg.quadrature.gap_tolerance = get_number(q, "gap_tolerance", 1e-6);
        if (cfg.quadrature.tolerance <= 0 || cfg.quadrature.gap_tolerance <= 0) {
            throw ConfigError("quadrature tolerances must be positive");
        }
        if (q.contains("branch")) {
            cfg.quadrature.branch = q["branch"].get<std::string>();
            if (cfg.quadrature.branch != "both" && cfg.quadrature.branch != "single-plus" &&
                cfg.quadrature.branch != "single-minus" && cfg.quadrature.branch != "all") {
                throw ConfigError("quadrature.branch: both|single-plus|single-minus|all");
            }
        }
    }

    if (j.contains("surfaces")) {
        const json& s = j["surfaces"];
        if (s.contains("graphical")) {
            cfg.surfaces.a = get_number(s["graphical"], "a", cfg.surfaces.a);
            cfg.surfaces.b = get_number(s["graphical"], "b", cfg.surfaces.b);
        }
        if (s.contains("nongraphical")) {
            cfg.surfaces.theta = get_number(s["nongraphical"], "theta", cfg.surfaces.theta);
            cfg.surfaces.phi = get_number(s["nongraphical"], "phi", cfg.surfaces.phi);
            cfg.surfaces.H = get_number(s["nongraphical"], "H", cfg.surfaces.H);
        }
    }

    if (j.contains("expected")) {
        const json& e = j["expected"];
        if (e.contains("center")) {
            cfg.expected_center = parse_vec4(e["center"], "expected.center");
        }
        if (e.contains("square_radius")) {
            cfg.expected_square_radius = e["square_radius"].get<double>();
        }
    }

    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("samples")) {
        cfg.samples = j["samples"].get<int>();
        if (cfg.samples < 1) throw ConfigError("samples: must be at least 1");
    }
    if (j.contains("dump_samples")) cfg.dump_samples = j["dump_samples"].get<bool>();
    if (j.contains("format")) cfg.format = j["format"].get<std::string>();
    if (j.contains("out")) cfg.out = j["out"].get<std::string>();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse: ") + e.what());
    }
    return parse_config(j);
}

UheSolution solution_from_config(const SolutionConfig& cfg) {
    if (cfg.kind == "appendix-a") return appendix_a_solution();
    if (cfg.kind == "slab") return slab_field(cfg.d0);
    if (cfg.kind == "ball") return ball_field(cfg.r0);
    if (cfg.kind == "kballs") return kball_field(cfg.balls);
    if (cfg.kind == "polynomial") return polynomial_field(cfg.terms);
    throw ConfigError("solution.kind: unknown '" + cfg.kind + "'");
}

ConjugateConicPair conic_from_config(const ConicConfig& cfg) {
    if (cfg.from_points) {
        return pair_from_three_points(cfg.points[0], cfg.points[1], cfg.points[2]);
    }
    return build_pair(cfg.center, PlaneFrame{cfg.center, cfg.plane_u, cfg.plane_v},
                      cfg.square_radius);
}

bool RunReport::all_pass() const {
    for (const CheckResult& c : checks) {
        if (c.status != "pass") return false;
    }
    return true;
}

namespace {

ordered_json echo_config(const ExperimentConfig& cfg) {
    ordered_json e;
    e["experiment"] = cfg.experiment;
    if (!cfg.solution.kind.empty()) {
        ordered_json s;
        s["kind"] = cfg.solution.kind;
        if (cfg.solution.kind == "slab") s["d0"] = cfg.solution.d0;
        if (cfg.solution.kind == "ball") s["r0"] = cfg.solution.r0;
        if (cfg.solution.kind == "kballs") {
            ordered_json balls = ordered_json::array();
            for (const Ball& b : cfg.solution.balls) {
                balls.push_back({{"center", {b.center(0), b.center(1), b.center(2)}},
                                 {"radius", b.radius},
                                 {"density", b.density}});
            }
            s["balls"] = balls;
        }
        if (cfg.solution.kind == "polynomial") {
            ordered_json terms = ordered_json::array();
            for (const PolyTerm& t : cfg.solution.terms) {
                terms.push_back({{"powers", t.powers}, {"coeff", t.coeff}});
            }
            s["terms"] = terms;
        }
        e["solution"] = s;
    }
    if (cfg.experiment.rfind("asgeirsson", 0) == 0 || cfg.experiment == "map-triple") {
        ordered_json c;
        if (cfg.conic.from_points) {
            ordered_json pts = ordered_json::array();
            for (const Vec4& p : cfg.conic.points) pts.push_back({p(0), p(1), p(2), p(3)});
            c["points"] = pts;
        } else {
            c["center"] = {cfg.conic.center(0), cfg.conic.center(1), cfg.conic.center(2),
                           cfg.conic.center(3)};
            c["plane"] = {{"u",
                           {cfg.conic.plane_u(0), cfg.conic.plane_u(1), cfg.conic.plane_u(2),
                            cfg.conic.plane_u(3)}},
                          {"v",
                           {cfg.conic.plane_v(0), cfg.conic.plane_v(1), cfg.conic.plane_v(2),
                            cfg.conic.plane_v(3)}}};
            c["square_radius"] = cfg.conic.square_radius;
        }
        e["conic"] = c;
    }
    e["quadrature"] = {{"nodes", cfg.quadrature.nodes},
                       {"truncation", cfg.quadrature.truncation},
                       {"branch", cfg.quadrature.branch},
                       {"tolerance", cfg.quadrature.tolerance},
                       {"gap_tolerance", cfg.quadrature.gap_tolerance}};
    e["seed"] = cfg.seed;
    e["samples"] = cfg.samples;
    return e;
}

CheckResult make_error(const std::string& name, const std::string& what) {
    CheckResult c;
    c.name = name;
    c.status = "error";
    c.detail = what;
    return c;
}

CheckResult gap_check(const std::string& name, const MeanValueReport& r, double tol) {
    CheckResult c;
    c.name = name;
    c.value_S = r.integral_S;
    c.value_Sperp = r.integral_Sperp;
    c.gap = r.relative_gap;
    c.tolerance = tol;
    c.status = r.relative_gap <= tol ? "pass" : "fail";
    std::ostringstream d;
    d << "tail_bound=" << r.tail_bound;
    c.detail = d.str();
    return c;
}

CheckResult bound_check(const std::string& name, double measured, double tol,
                        const std::string& detail = "") {
    CheckResult c;
    c.name = name;
    c.value_S = measured;
    c.gap = measured;
    c.tolerance = tol;
    c.status = measured <= tol ? "pass" : "fail";
    c.detail = detail;
    return c;
}

void run_conic_build(const ExperimentConfig& cfg, const ConjugateConicPair& pair,
                     RunReport& rep) {
    CheckResult c;
    c.name = "conic-build";
    c.value_S = pair.square_radius;
    std::ostringstream d;
    d << "kind=" << to_string(pair.kind) << " center=(" << pair.center(0) << ","
      << pair.center(1) << "," << pair.center(2) << "," << pair.center(3) << ")";
    c.detail = d.str();
    c.status = "pass";
    if (cfg.expected_center) {
        const double err = (pair.center - *cfg.expected_center).norm();
        c.gap = err;
        c.tolerance = 1e-9;
        if (err > 1e-9) c.status = "fail";
    }
    if (cfg.expected_square_radius) {
        const double err = std::abs(pair.square_radius - *cfg.expected_square_radius);
        c.gap = std::max(c.gap.value_or(0.0), err);
        c.tolerance = 1e-9;
        if (err > 1e-9) c.status = "fail";
    }
    rep.checks.push_back(c);
}

void dump_curve(const UheSolution& u, const ConjugateConicPair& pair, RunReport& rep) {
    ordered_json sides = ordered_json::array();
    for (ConicSide side : {ConicSide::S, ConicSide::Sperp}) {
        ordered_json rows = ordered_json::array();
        const int n = 128;
        for (int i = 0; i < n; ++i) {
            const double t = pair.hyperbolic() ? -4.0 + 8.0 * i / (n - 1)
                                               : 2.0 * M_PI * i / n;
            const Vec4 p = pair.point(side, t);
            double val = std::numeric_limits<double>::quiet_NaN();
            if (u.flat) val = u.flat(p);
            ordered_json row;
            row["t"] = t;
            row["point"] = {p(0), p(1), p(2), p(3)};
            if (std::isfinite(val)) row["integrand"] = val;
            rows.push_back(row);
        }
        sides.push_back({{"side", side == ConicSide::S ? "S" : "Sperp"}, {"rows", rows}});
    }
    rep.samples = sides;
}

void run_asgeirsson(const ExperimentConfig& cfg, RunReport& rep) {
    ConjugateConicPair pair = conic_from_config(cfg.conic);
    run_conic_build(cfg, pair, rep);
    const UheSolution u = solution_from_config(cfg.solution);
    const bool hyperbolic = pair.hyperbolic();
    if (cfg.experiment == "asgeirsson-circle" && hyperbolic) {
        rep.checks.push_back(make_error("mean-value-gap", "conic is hyperbolic"));
        return;
    }
    if (cfg.experiment == "asgeirsson-hyperbola" && !hyperbolic) {
        rep.checks.push_back(make_error("mean-value-gap", "conic is definite"));
        return;
    }
    QuadratureSettings qs;
    qs.nodes = cfg.quadrature.nodes;
    qs.truncation = cfg.quadrature.truncation;

    if (!hyperbolic) {
        try {
            const MeanValueReport r = verify_pair(u, pair, qs);
            rep.checks.push_back(gap_check("mean-value-gap", r, cfg.quadrature.gap_tolerance));
        } catch (const Error& e) {
            rep.checks.push_back(make_error("mean-value-gap", e.what()));
        }
        if (cfg.dump_samples) dump_curve(u, pair, rep);
        return;
    }

    std::vector<std::pair<std::string, BranchPolicy>> policies;
    if (cfg.quadrature.branch == "both" || cfg.quadrature.branch == "all") {
        policies.emplace_back("mean-value-gap-both", BranchPolicy::BothBranches);
    }
    if (cfg.quadrature.branch == "single-plus" || cfg.quadrature.branch == "all") {
        policies.emplace_back("mean-value-gap-single-plus", BranchPolicy::SingleBranchPlus);
    }
    if (cfg.quadrature.branch == "single-minus" || cfg.quadrature.branch == "all") {
        policies.emplace_back("mean-value-gap-single-minus", BranchPolicy::SingleBranchMinus);
    }
    MeanValueReport base;
    bool have_base = false;
    for (const auto& [name, policy] : policies) {
        try {
            qs.branch = policy;
            const MeanValueReport r = verify_pair(u, pair, qs);
            if (policy == BranchPolicy::BothBranches || !have_base) {
                base = r;
                have_base = true;
            }
            rep.checks.push_back(gap_check(name, r, cfg.quadrature.gap_tolerance));
        } catch (const Error& e) {
            rep.checks.push_back(make_error(name, e.what()));
        }
    }
    // truncation self-consistency: doubling T moves the integrals by no more
    // than the reported tail bound (estimator slack 1.25 plus a small floor)
    if (have_base) {
        try {
            QuadratureSettings qs2 = qs;
            qs2.branch = BranchPolicy::BothBranches;
            QuadratureSettings qs1 = qs2;
            const MeanValueReport r1 = verify_pair(u, pair, qs1);
            qs2.truncation *= 2.0;
            qs2.nodes *= 2;
            const MeanValueReport r2 = verify_pair(u, pair, qs2);
            const double change = std::max(std::abs(r2.integral_S - r1.integral_S),
                                           std::abs(r2.integral_Sperp - r1.integral_Sperp));
            const double allowance =
                1.25 * r1.tail_bound +
                1e-9 * std::max(std::abs(r1.integral_S), std::abs(r1.integral_Sperp));
            CheckResult c;
            c.name = "tail-consistency";
            c.value_S = change;
            c.value_Sperp = r1.tail_bound;
            c.gap = change;
            c.tolerance = allowance;
            c.status = change <= allowance ? "pass" : "fail";
            c.detail = "integral change under T -> 2T vs reported tail bound";
            rep.checks.push_back(c);
        } catch (const Error& e) {
            rep.checks.push_back(make_error("tail-consistency", e.what()));
        }
    }
    if (cfg.dump_samples) dump_curve(u, pair, rep);
}

void run_uhe_residual(const ExperimentConfig& cfg, RunReport& rep) {
    const UheSolution u = solution_from_config(cfg.solution);
    if (!u.flat) {
        rep.checks.push_back(make_error("uhe-residual", "solution has no flat evaluator"));
        return;
    }
    Rng rng(cfg.seed);
    double worst = 0.0;
    int used = 0, tried = 0;
    const bool box_sampling = cfg.solution.kind == "appendix-a" ||
                              cfg.solution.kind == "polynomial" ||
                              cfg.solution.kind == "slab";
    while (used < cfg.samples && tried < cfg.samples * 1000) {
        ++tried;
        Vec4 p;
        if (box_sampling) {
            for (int k = 0; k < 4; ++k) p(k) = rng.uniform(-10.0, 10.0);
        } else {
            // sample a chart line near the support and convert
            const double rad = cfg.solution.kind == "ball"
                                   ? cfg.solution.r0
                                   : (cfg.solution.balls.empty()
                                          ? 1.0
                                          : cfg.solution.balls.front().radius +
                                                cfg.solution.balls.front().center.norm());
            OrientedLine l;
            l.xi = Complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6));
            l.eta = Complex(rng.uniform(-rad, rad), rng.uniform(-rad, rad));
            if (std::abs(l.xi) > 0.8) continue;
            p = line_to_flat_vec(l);
        }
        if (u.interior && !u.interior(p)) continue;
        worst = std::max(worst, uhe_residual_flat_normalized(u.flat, p, 1e-3));
        ++used;
    }
    if (used < cfg.samples) {
        rep.checks.push_back(
            make_error("uhe-residual", "could not sample enough interior points"));
        return;
    }
    std::ostringstream d;
    d << "max normalized wave-operator residual over " << used << " interior points";
    rep.checks.push_back(bound_check("uhe-residual", worst,
                                     std::max(cfg.quadrature.tolerance, 1e-4), d.str()));
}

void run_xray_compare(const ExperimentConfig& cfg, RunReport& rep) {
    Rng rng(cfg.seed);
    const std::string& kind = cfg.solution.kind;
    auto random_line = [&](double moment) {
        OrientedLine l;
        do {
            l.xi = Complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6));
        } while (std::abs(l.xi) > 0.7);
        l.eta = Complex(rng.uniform(-moment, moment), rng.uniform(-moment, moment));
        return l;
    };
    try {
        if (kind == "ball") {
            const Density3 f = ball_density(cfg.solution.r0);
            double worst = 0.0;
            for (int i = 0; i < cfg.samples; ++i) {
                const OrientedLine l = random_line(1.2 * cfg.solution.r0);
                const double closed = ball_solution(cfg.solution.r0, l);
                const double numeric =
                    xray_numeric(f, l, f.suggested_truncation, cfg.quadrature.tolerance * 0.1);
                worst = std::max(worst, std::abs(closed - numeric));
            }
            rep.checks.push_back(bound_check("ball-vs-quadrature", worst,
                                             cfg.quadrature.tolerance,
                                             "closed chord vs adaptive line integral"));
        } else if (kind == "kballs") {
            const Density3 f = kball_density(cfg.solution.balls);
            double reach = 1.0;
            for (const Ball& b : cfg.solution.balls) {
                reach = std::max(reach, b.center.norm() + b.radius);
            }
            double worst = 0.0;
            for (int i = 0; i < cfg.samples; ++i) {
                const OrientedLine l = random_line(1.2 * reach);
                const double closed = kball_solution(cfg.solution.balls, l);
                const double numeric =
                    xray_numeric(f, l, f.suggested_truncation, cfg.quadrature.tolerance * 0.1);
                worst = std::max(worst, std::abs(closed - numeric));
            }
            rep.checks.push_back(bound_check("kball-vs-quadrature", worst,
                                             cfg.quadrature.tolerance,
                                             "superposed chords vs adaptive line integral"));
        } else if (kind == "slab") {
            const Density3 f = slab_density(cfg.solution.d0);
            double worst_ratio_err = 0.0;
            for (int i = 0; i < std::min(cfg.samples, 20); ++i) {
                const OrientedLine l = random_line(2.0);
                const double printed = slab_solution(cfg.solution.d0, l, true);
                const double numeric = xray_numeric(f, l, 80.0 * cfg.solution.d0, 1e-9);
                worst_ratio_err = std::max(worst_ratio_err, std::abs(numeric / printed - 2.0));
            }
            CheckResult c = bound_check(
                "slab-factor-two", worst_ratio_err, 1e-6,
                "line integral over published closed form; the ratio is exactly 2");
            rep.checks.push_back(c);
        } else {
            rep.checks.push_back(
                make_error("xray-compare", "solution kind has no quadrature oracle"));
        }
    } catch (const Error& e) {
        rep.checks.push_back(make_error("xray-compare", e.what()));
    }
}

void run_ruled_surface(const ExperimentConfig& cfg, RunReport& rep) {
    const int n_theta = 64, n_r = 16;
    const double tol = 1e-7;
    try {
        const GraphicalPlane g{Complex(0.0, -cfg.surfaces.a), Complex(cfg.surfaces.b, 0.0)};
        const Hyperboloid quad{cfg.surfaces.a, cfg.surfaces.b};
        auto scan_graphical = [&](const GraphicalPlane& pl) {
            double worst = 0.0;
            for (int i = 0; i < n_theta; ++i) {
                const double th = 2.0 * M_PI * i / n_theta;
                const double R = graphical_unit_radius(pl, th);
                const OrientedLine l = graphical_section(pl, R * std::exp(Complex(0, th)));
                for (int k = 0; k < n_r; ++k) {
                    const double r = -2.0 + 4.0 * k / (n_r - 1);
                    worst = std::max(worst,
                                     std::abs(ruled_surface_residual(quad, phi_map(l, r))));
                }
            }
            return worst;
        };
        rep.checks.push_back(bound_check("graphical-quadric", scan_graphical(g), tol,
                                         "unit pseudo-circle rules the hyperboloid"));
        rep.checks.push_back(bound_check("graphical-conjugate-quadric",
                                         scan_graphical(conjugate_graphical(g)), tol,
                                         "conjugate ruling lands on the same quadric"));
    } catch (const Error& e) {
        rep.checks.push_back(make_error("graphical-quadric", e.what()));
    }
    try {
        const NonGraphicalPlane ng{cfg.surfaces.theta, cfg.surfaces.phi, cfg.surfaces.H};
        const HyperbolicParaboloid quad{cfg.surfaces.theta, cfg.surfaces.phi};
        auto scan_nongraphical = [&](const NonGraphicalPlane& pl, int sign) {
            double worst = 0.0;
            for (int i = 0; i < n_theta; ++i) {
                const double uu = 0.15 + (0.8 - 0.15) * i / (n_theta - 1);
                const OrientedLine l =
                    nongraphical_point(pl, uu, nongraphical_unit_v(pl, uu, sign));
                for (int k = 0; k < n_r; ++k) {
                    const double r = -2.0 + 4.0 * k / (n_r - 1);
                    worst = std::max(worst,
                                     std::abs(ruled_surface_residual(quad, phi_map(l, r))));
                }
            }
            return worst;
        };
        rep.checks.push_back(bound_check("nongraphical-quadric", scan_nongraphical(ng, +1),
                                         tol, "unit pseudo-circle rules the paraboloid"));
        rep.checks.push_back(bound_check("nongraphical-conjugate-quadric",
                                         scan_nongraphical(conjugate_nongraphical(ng), -1),
                                         tol, "conjugate ruling lands on the same quadric"));
    } catch (const Error& e) {
        rep.checks.push_back(make_error("nongraphical-quadric", e.what()));
    }
}

void run_map_triple(const ExperimentConfig& cfg, RunReport& rep) {
    if (!cfg.conic.from_points) {
        rep.checks.push_back(make_error("map-triple", "conic.points required"));
        return;
    }
    try {
        const auto& pts = cfg.conic.points;
        const ConformalMap f = map_triple_to_standard(pts[0], pts[1], pts[2]);
        std::ostringstream gens;
        for (size_t i = 0; i < f.generators.size(); ++i) {
            if (i) gens << " -> ";
            gens << generator_name(f.generators[i]);
        }
        const ExtendedPoint i0 = apply(f, ExtendedPoint(pts[0]));
        const ExtendedPoint i1 = apply(f, ExtendedPoint(pts[1]));
        const ExtendedPoint i2 = apply(f, ExtendedPoint(pts[2]));
        double resid = std::numeric_limits<double>::infinity();
        if (!i0.infinite && !i2.infinite) {
            resid = std::max(i0.p.norm(), (i2.p - Vec4::Unit(0)).norm());
        }
        CheckResult c = bound_check("image-residual", resid, 1e-7, gens.str());
        rep.checks.push_back(c);
        CheckResult inf;
        inf.name = "infinity-bookkeeping";
        inf.status = i1.infinite && !i0.infinite && !i2.infinite ? "pass" : "fail";
        inf.detail = "second point maps to the cone at infinity";
        rep.checks.push_back(inf);
    } catch (const Error& e) {
        rep.checks.push_back(make_error("map-triple", e.what()));
    }
}

void run_chart_roundtrip(const ExperimentConfig& cfg, RunReport& rep) {
    Rng rng(cfg.seed);
    double worst = 0.0;
    int n = std::max(cfg.samples, 10000);
    for (int i = 0; i < n; ++i) {
        OrientedLine l;
        do {
            l.xi = Complex(rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9));
        } while (std::abs(l.xi) > 0.9);
        l.eta = Complex(rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0));
        const OrientedLine back = flat_to_line(line_to_flat(l));
        worst = std::max(worst,
                         std::max(std::abs(back.xi - l.xi), std::abs(back.eta - l.eta)));
    }
    std::ostringstream d;
    d << "max round-trip error over " << n << " lines with |xi| <= 0.9, |eta| <= 10";
    rep.checks.push_back(bound_check("chart-roundtrip", worst, 1e-10, d.str()));
}

}  // namespace

RunReport run(const ExperimentConfig& cfg) {
    RunReport rep;
    rep.experiment = cfg.experiment;
    rep.config_echo = echo_config(cfg);
    if (cfg.experiment == "asgeirsson-circle" || cfg.experiment == "asgeirsson-hyperbola") {
        try {
            run_asgeirsson(cfg, rep);
        } catch (const Error& e) {
            rep.checks.push_back(make_error("conic-build", e.what()));
        }
    } else if (cfg.experiment == "uhe-residual") {
        run_uhe_residual(cfg, rep);
    } else if (cfg.experiment == "xray-compare") {
        run_xray_compare(cfg, rep);
    } else if (cfg.experiment == "ruled-surface") {
        run_ruled_surface(cfg, rep);
    } else if (cfg.experiment == "map-triple") {
        run_map_triple(cfg, rep);
    } else if (cfg.experiment == "chart-roundtrip") {
        run_chart_roundtrip(cfg, rep);
    } else {
        throw ConfigError("experiment: unknown kind '" + cfg.experiment + "'");
    }
    return rep;
}

namespace {

ordered_json check_to_json(const CheckResult& c) {
    ordered_json j;
    j["name"] = c.name;
    auto put = [&](const char* key, const std::optional<double>& v) {
        if (v && std::isfinite(*v)) j[key] = *v;
        else j[key] = nullptr;
    };
    put("value_S", c.value_S);
    put("value_Sperp", c.value_Sperp);
    put("gap", c.gap);
    put("tolerance", c.tolerance);
    j["status"] = c.status;
    j["detail"] = c.detail;
    if (c.value_S && !std::isfinite(*c.value_S)) j["detail"] = c.detail + " [non-finite value]";
    return j;
}

std::string csv_field(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) return "";
    std::ostringstream os;
    os.precision(17);
    os << *v;
    return os.str();
}

}  // namespace

std::string emit(const RunReport& report, const std::string& format) {
    if (format == "json") {
        ordered_json j;
        j["schema"] = kReportSchema;
        j["experiment"] = report.experiment;
        j["config"] = report.config_echo;
        j["status"] = report.all_pass() ? "pass" : "fail";
        ordered_json checks = ordered_json::array();
        for (const CheckResult& c : report.checks) checks.push_back(check_to_json(c));
        j["checks"] = checks;
        if (!report.samples.is_null()) j["samples"] = report.samples;
        return j.dump(2) + "\n";
    }
    if (format == "csv") {
        std::ostringstream os;
        os << "experiment,check,value_S,value_Sperp,gap,tolerance,status\n";
        for (const CheckResult& c : report.checks) {
            os << report.experiment << ',' << c.name << ',' << csv_field(c.value_S) << ','
               << csv_field(c.value_Sperp) << ',' << csv_field(c.gap) << ','
               << csv_field(c.tolerance) << ',' << c.status << '\n';
        }
        return os.str();
    }
    throw ConfigError("format: expected json or csv, got '" + format + "'");
}

std::vector<std::string> validate_report(const json& report) {
    std::vector<std::string> problems;
    auto need = [&](const json& j, const char* key, const char* type) {
        if (!j.contains(key)) {
            problems.push_back(std::string("missing field: ") + key);
            return false;
        }
        const json& v = j[key];
        const std::string t = type;
        const bool ok = (t == "string" && v.is_string()) || (t == "object" && v.is_object()) ||
                        (t == "array" && v.is_array()) ||
                        (t == "number?" && (v.is_number() || v.is_null()));
        if (!ok) problems.push_back(std::string("wrong type for field: ") + key);
        return ok;
    };
    if (!report.is_object()) {
        problems.push_back("report is not an object");
        return problems;
    }
    need(report, "schema", "string");
    if (report.contains("schema") && report["schema"] != kReportSchema) {
        problems.push_back("unknown schema tag");
    }
    need(report, "experiment", "string");
    need(report, "config", "object");
    need(report, "status", "string");
    if (need(report, "checks", "array")) {
        for (const json& c : report["checks"]) {
            for (const char* key : {"value_S", "value_Sperp", "gap", "tolerance"}) {
                need(c, key, "number?");
            }
            need(c, "name", "string");
            need(c, "status", "string");
            if (c.contains("status") && c["status"] != "pass" && c["status"] != "fail" &&
                c["status"] != "error") {
                problems.push_back("check status out of range");
            }
        }
    }
    return problems;
}

}  // namespace asg
