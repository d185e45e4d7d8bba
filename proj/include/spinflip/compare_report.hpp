#pragma once

#include "spinflip/bmt_classical.hpp"
#include "spinflip/kinematics.hpp"
#include "spinflip/superposition.hpp"

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinflip
{

/// Quantum and classical series were sampled on different grids.
class GridMismatch : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/**
 * Angular frequency of a single-tone series from the zero crossings of the
 * mean-subtracted signal: period = 2 x mean half-period gap, using an even
 * number of gaps. Requires a uniform grid.
 *
 * Returns std::nullopt ("no oscillation") for a series whose peak-to-peak
 * spread is below 1e-9 of its scale. Throws InvalidArgument if the series
 * oscillates but has fewer than three crossings.
 */
std::optional<double> extract_frequency(std::span<const double> t, std::span<const double> series);

struct Tolerances
{
    double deviation{1e-8};
    double invariant{1e-10};
    double frequency_rel{1e-6};

    bool operator==(const Tolerances&) const = default;
};

/// Echo of the run configuration carried in every report.
struct RunParams
{
    double beta{0};
    double alpha{0};
    double coupling_S{0};
    int zeta{1};
    int epsilon{1};
    std::string orientation;
    double periods{0};
    int samples_per_period{0};
    std::size_t samples{0};

    bool operator==(const RunParams&) const = default;
};

struct ComparisonReport
{
    /// Max |quantum - classical| for pi_x, pi_y, pi_z, beta_pi.
    std::array<double, 4> max_abs_deviation{};
    /// Frequency extracted from the classical series; nullopt if constant.
    std::optional<double> extracted_frequency;
    /// Frequency extracted from the quantum series; nullopt if constant.
    std::optional<double> quantum_frequency;
    double frequency_formula{0};
    std::optional<double> frequency_rel_error;
    double invariant_max_error{0};
    bool pass{false};
    std::vector<std::string> failures;
    RunParams params;
    Tolerances tolerances;

    double max_deviation() const;
    bool no_oscillation() const { return !extracted_frequency.has_value(); }
    bool operator==(const ComparisonReport&) const = default;
};

inline constexpr std::array<const char*, 4> kComponentNames{"pi_x", "pi_y", "pi_z", "beta_pi"};

/// Compares two histories sampled on identical grids. frequency_formula is
/// the expected precession frequency (its sign is ignored).
ComparisonReport compare(const PolarizationHistory& quantum, const PolarizationHistory& classical,
                         double frequency_formula, const Tolerances& tol = {},
                         RunParams params = {});

ComparisonReport compare(const PolarizationHistory& quantum,
                         const PrecessionTrajectory& classical, const Kinematics& kin,
                         const Tolerances& tol = {}, RunParams params = {});

std::string to_json(const ComparisonReport& report, int indent = 2);
/// Throws InvalidArgument on malformed input.
ComparisonReport report_from_json(const std::string& text);

/// Fixed-width human-readable summary.
std::string to_table(const ComparisonReport& report);

} // namespace spinflip
