#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "asg/meanvalue.hpp"

namespace asg {

inline constexpr const char* kReportSchema = "asgeirsson-report/1";

struct SolutionConfig {
    std::string kind;  // appendix-a | slab | ball | kballs | polynomial
    double d0 = 1.0;
    double r0 = 1.0;
    std::vector<Ball> balls;
    std::vector<PolyTerm> terms;
};

struct ConicConfig {
    bool from_points = false;
    std::array<Vec4, 3> points{};
    Vec4 center = Vec4::Zero();
    Vec4 plane_u = Vec4::Unit(0);
    Vec4 plane_v = Vec4::Unit(1);
    double square_radius = 1.0;
};

struct QuadratureConfig {
    int nodes = 2048;
    double truncation = 12.0;
    std::string branch = "both";  // both | single-plus | single-minus | all
    double tolerance = 1e-8;      // quadrature / comparison tolerance
    double gap_tolerance = 1e-6;  // mean-value verdict threshold
};

struct SurfaceConfig {
    double a = 1.0, b = 0.3;                      // graphical
    double theta = 1.0471975511965976;            // pi/3
    double phi = 0.6283185307179586;              // pi/5
    double H = 0.7;
};

struct ExperimentConfig {
    std::string experiment;
    SolutionConfig solution;
    ConicConfig conic;
    QuadratureConfig quadrature;
    SurfaceConfig surfaces;
    std::optional<Vec4> expected_center;
    std::optional<double> expected_square_radius;
    std::uint64_t seed = 0x5eed5eed;
    int samples = 100;
    bool dump_samples = false;
    std::string format = "json";
    std::string out = "-";
};

// Throws ConfigError with field-level diagnostics.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

struct CheckResult {
    std::string name;
    std::optional<double> value_S;
    std::optional<double> value_Sperp;
    std::optional<double> gap;
    std::optional<double> tolerance;
    std::string status;  // pass | fail | error
    std::string detail;
};

struct RunReport {
    std::string experiment;
    nlohmann::ordered_json config_echo;
    std::vector<CheckResult> checks;
    nlohmann::ordered_json samples;  // optional curve dumps
    bool all_pass() const;
};

UheSolution solution_from_config(const SolutionConfig& cfg);
ConjugateConicPair conic_from_config(const ConicConfig& cfg);

// Runs the configured experiment deterministically; per-check failures are
// embedded, never aborting sibling checks.
RunReport run(const ExperimentConfig& cfg);

// format: "json" or "csv"; anything else throws ConfigError.
std::string emit(const RunReport& report, const std::string& format);

// Returns schema violations (empty = valid) for an emitted JSON report.
std::vector<std::string> validate_report(const nlohmann::json& report);

}  // namespace asg
