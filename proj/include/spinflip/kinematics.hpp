#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace spinflip
{

/// Raised for inputs outside the physical domain (superluminal speed,
/// negative coupling, non-unit axes, malformed ±1 signs).
class InvalidArgument : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// A ±1 quantum number: spin projection ζ or initial-orientation sign ε.
enum class Sign : int
{
    minus = -1,
    plus = +1,
};

constexpr double value(Sign s) noexcept { return static_cast<int>(s); }
constexpr Sign flip(Sign s) noexcept { return s == Sign::plus ? Sign::minus : Sign::plus; }

/// Accepts -1 or +1; anything else throws InvalidArgument.
Sign make_sign(int v);

/**
 * Dimensionless kinematic state of a particle moving with speed beta (in
 * units of c) at angle alpha to the field. The field points along +z and the
 * velocity lies in the xz plane: beta_vec = beta (sin alpha, 0, cos alpha).
 *
 * q = gamma sqrt(1 - beta^2 cos^2 alpha) = sqrt(1 + gamma^2 beta_perp^2) is the
 * magnitude of the field-projected spin eigenvalue.
 */
struct Kinematics
{
    double beta{0};
    double alpha{0};
    double gamma{1};
    double beta_perp{0};
    double beta_z{0};
    double q{1};

    /// sqrt(1 - beta^2 cos^2 alpha), i.e. q / gamma.
    double transverse_factor() const noexcept { return q / gamma; }
};

Kinematics make_kinematics(double beta, double alpha);

/// Field coupling S = |mu| H / (m0 c^2) together with a spin branch zeta.
struct FieldCoupling
{
    double S{0};
    Sign zeta{Sign::plus};
};

inline constexpr double kDefaultCouplingWarnThreshold = 1e-2;

FieldCoupling make_coupling(double S, Sign zeta);

/// Returns a warning message when S leaves the first-order regime.
std::optional<std::string> coupling_warning(const FieldCoupling& coupling,
                                            double threshold = kDefaultCouplingWarnThreshold);

/// O(S) part of the energy: zeta S q / gamma (units m0 c^2).
double level_shift(const Kinematics& kin, const FieldCoupling& coupling);

/// gamma_zeta = gamma (1 + zeta S q / gamma^2), first order in S.
double energy_level(const Kinematics& kin, const FieldCoupling& coupling);

/// Precession frequency in units of 2|mu|H/hbar: zeta sqrt(1 - beta^2 cos^2 alpha).
double precession_frequency(const Kinematics& kin, Sign zeta);
double precession_frequency(const Kinematics& kin, const FieldCoupling& coupling);

/// Synchrotron-radiation scale estimates for a charged particle of the same
/// Lorentz factor. omega0 is in whatever units the caller supplies.
struct SRScales
{
    double omega0{0};
    double omega_max{0};
    double rho{0};
    double time_ratio{0};
};

SRScales sr_scales(double gamma, double omega0, double c_over_rho_scale = 1.0);

} // namespace spinflip
