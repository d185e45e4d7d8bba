#pragma once

#include "spinflip/compare_report.hpp"
#include "spinflip/kinematics.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace spinflip::cli
{

enum ExitCode : int
{
    kPass = 0,
    kPhysicsFail = 1,
    kConfigError = 2,
    kIoError = 3,
};

enum class OrientationKind
{
    x,
    y,
    z,
    momentum,
    custom,
};

enum class OutputFormat
{
    csv,
    json,
    table,
};

struct RunConfig
{
    double beta{0.0};
    double alpha_deg{0.0};
    double coupling_S{1e-3};
    int sign{1}; // zeta for eigenstates, epsilon for orientations
    OrientationKind orientation{OrientationKind::y};
    double theta_deg{90.0};
    double phi_deg{0.0};
    double periods{10.0};
    int samples_per_period{1000};
    int steps_per_period{1000};
    double omega_scale{1.0};
    Tolerances tolerances;
    double audit_tolerance{1e-12};
    bool physical{false};
    double mu{0.0};
    double field{0.0};
};

/// One axis of a parameter sweep: `count` points linearly spaced on [start, stop].
struct SweepAxis
{
    std::string name;
    double start{0};
    double stop{0};
    int count{1};

    std::vector<double> values() const;
};

/// Parses "beta=0:0.95:20,alpha=0:90:10". Throws InvalidArgument.
std::vector<SweepAxis> parse_sweep(const std::string& text);

/// Reads `key = value` lines ('#' comments) and turns them into `--key=value`
/// arguments. Throws InvalidArgument on a malformed line.
std::vector<std::string> config_file_args(const std::string& path);

/// One compare run on the shared grid.
ComparisonReport run_comparison(const RunConfig& cfg);

const char* orientation_name(OrientationKind o);

/// Entry point used by the executable. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace spinflip::cli
