#include "spinflip/kinematics.hpp"

#include <cmath>
#include <numbers>

namespace spinflip
{
namespace
{

/// The double within a few ulp of target/factor whose product with factor
/// rounds back to target, so the scale identities hold bit-for-bit.
double exact_quotient(double target, double factor)
{
    const double q = target / factor;
    double lo = q, hi = q;
    for (int i = 0; i < 8; ++i) {
        if (lo * factor == target) return lo;
        if (hi * factor == target) return hi;
        lo = std::nextafter(lo, -HUGE_VAL);
        hi = std::nextafter(hi, HUGE_VAL);
    }
    return q;
}

/// The double within a few ulp of base*factor whose quotient by base
/// rounds back to factor.
double exact_product(double base, double factor)
{
    const double p = base * factor;
    double lo = p, hi = p;
    for (int i = 0; i < 8; ++i) {
        if (lo / base == factor) return lo;
        if (hi / base == factor) return hi;
        lo = std::nextafter(lo, -HUGE_VAL);
        hi = std::nextafter(hi, HUGE_VAL);
    }
    return p;
}

} // namespace

Sign make_sign(int v)
{
    if (v == 1) return Sign::plus;
    if (v == -1) return Sign::minus;
    throw InvalidArgument("sign must be +1 or -1, got " + std::to_string(v));
}

Kinematics make_kinematics(double beta, double alpha)
{
    if (!std::isfinite(beta) || beta < 0.0) throw InvalidArgument("beta must be >= 0");
    if (beta >= 1.0) throw InvalidArgument("beta must be < 1");
    if (!std::isfinite(alpha)) throw InvalidArgument("alpha must be finite");

    Kinematics k;
    k.beta = beta;
    k.alpha = alpha;
    // 1 - beta^2 as (1-beta)(1+beta) keeps precision near beta -> 1
    k.gamma = 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta));
    k.beta_perp = beta * std::sin(alpha);
    k.beta_z = beta * std::cos(alpha);
    k.q = std::sqrt(1.0 + k.gamma * k.gamma * k.beta_perp * k.beta_perp);
    return k;
}

FieldCoupling make_coupling(double S, Sign zeta)
{
    if (!std::isfinite(S) || S < 0.0) throw InvalidArgument("coupling S must be >= 0");
    return {S, zeta};
}

std::optional<std::string> coupling_warning(const FieldCoupling& coupling, double threshold)
{
    if (coupling.S <= threshold) return std::nullopt;
    return "coupling S = " + std::to_string(coupling.S) + " exceeds " + std::to_string(threshold) +
           "; results are first order in S";
}

double level_shift(const Kinematics& kin, const FieldCoupling& coupling)
{
    return value(coupling.zeta) * coupling.S * kin.q / kin.gamma;
}

double energy_level(const Kinematics& kin, const FieldCoupling& coupling)
{
    return kin.gamma + level_shift(kin, coupling);
}

double precession_frequency(const Kinematics& kin, Sign zeta)
{
    return value(zeta) * kin.transverse_factor();
}

double precession_frequency(const Kinematics& kin, const FieldCoupling& coupling)
{
    return precession_frequency(kin, coupling.zeta);
}

SRScales sr_scales(double gamma, double omega0, double c_over_rho_scale)
{
    if (!(gamma >= 1.0)) throw InvalidArgument("gamma must be >= 1");
    if (!(omega0 > 0.0)) throw InvalidArgument("omega0 must be > 0");
    const double g2 = gamma * gamma;
    SRScales s;
    s.omega0 = omega0;
    s.omega_max = exact_product(omega0, g2 * gamma);
    s.rho = c_over_rho_scale / omega0;
    s.time_ratio = exact_quotient(2.0 * std::numbers::pi, g2 * g2);
    return s;
}

} // namespace spinflip
