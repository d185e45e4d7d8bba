#include "spinflip/bmt_classical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace spinflip
{
namespace
{

Vec3 beta_vector(const Kinematics& kin) { return {kin.beta_perp, 0.0, kin.beta_z}; }

/// Unit direction of motion, or zero at rest.
Vec3 motion_direction(const Kinematics& kin)
{
    if (kin.beta == 0.0) return Vec3::Zero();
    return {std::sin(kin.alpha), 0.0, std::cos(kin.alpha)};
}

void require_grid(std::span<const double> t_grid)
{
    if (t_grid.empty()) throw InvalidArgument("time grid is empty");
    if (!std::is_sorted(t_grid.begin(), t_grid.end()))
        throw InvalidArgument("time grid must be ascending");
}

void append_sample(PrecessionTrajectory& traj, double t, const Vec3& s, const Kinematics& kin)
{
    const MappedPi m = map_rest_to_pi(RestSpin{s}, kin);
    traj.t.push_back(t);
    traj.s.push_back(s);
    traj.pi.push_back(m.pi);
    traj.beta_pi.push_back(m.beta_pi);
}

Vec3 rk4_step(const Vec3& s, const Vec3& w, double h)
{
    const Vec3 k1 = w.cross(s);
    const Vec3 k2 = w.cross(s + 0.5 * h * k1);
    const Vec3 k3 = w.cross(s + 0.5 * h * k2);
    const Vec3 k4 = w.cross(s + h * k3);
    return s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace

double PrecessionVector::period() const { return 2.0 * std::numbers::pi / magnitude(); }

PrecessionVector omega_vector(const Kinematics& kin)
{
    const Vec3 field = Vec3::UnitZ();
    const Vec3 beta = beta_vector(kin);
    const double k = kin.gamma / (kin.gamma + 1.0);
    return {field - k * beta.dot(field) * beta};
}

RestSpin rotate_exact(const RestSpin& s0, const PrecessionVector& omega, double t)
{
    const double w = omega.magnitude();
    if (w == 0.0) return s0;
    const Vec3 axis = omega.omega / w;
    const double angle = w * t;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const Vec3& v = s0.s;
    // Rodrigues
    return {c * v + s * axis.cross(v) + (1.0 - c) * axis.dot(v) * axis};
}

PrecessionTrajectory integrate(const RestSpin& s0, const PrecessionVector& omega,
                               const Kinematics& kin, std::span<const double> t_grid,
                               const IntegratorOptions& opts)
{
    require_grid(t_grid);
    if (opts.steps_per_period < 200) throw InvalidArgument("steps_per_period must be >= 200");

    PrecessionTrajectory traj;
    traj.t.reserve(t_grid.size());
    const double w = omega.magnitude();
    if (w == 0.0) {
        for (double t : t_grid) append_sample(traj, t, s0.s, kin);
        return traj;
    }

    const double period = omega.period();
    const double span_periods = (t_grid.back() - t_grid.front()) / period;
    if (span_periods > opts.max_periods)
        throw StepLimitExceeded("integration span of " + std::to_string(span_periods) +
                                " periods exceeds the limit");
    const double h_max = period / opts.steps_per_period;

    // the state at the first grid point is s0
    Vec3 s = s0.s;
    append_sample(traj, t_grid.front(), s, kin);
    for (std::size_t k = 1; k < t_grid.size(); ++k) {
        const double dt = t_grid[k] - t_grid[k - 1];
        if (dt > 0.0) {
            const auto steps = static_cast<long>(std::ceil(dt / h_max));
            const double h = dt / static_cast<double>(steps);
            for (long i = 0; i < steps; ++i) s = rk4_step(s, omega.omega, h);
        }
        append_sample(traj, t_grid[k], s, kin);
    }
    return traj;
}

PrecessionTrajectory rotate_trajectory(const RestSpin& s0, const PrecessionVector& omega,
                                       const Kinematics& kin, std::span<const double> t_grid)
{
    require_grid(t_grid);
    PrecessionTrajectory traj;
    traj.t.reserve(t_grid.size());
    for (double t : t_grid)
        append_sample(traj, t, rotate_exact(s0, omega, t - t_grid.front()).s, kin);
    return traj;
}

MappedPi map_rest_to_pi(const RestSpin& s, const Kinematics& kin)
{
    const Vec3 u = motion_direction(kin);
    const double along = s.s.dot(u);
    return {kin.gamma * s.s - (kin.gamma - 1.0) * along * u, kin.beta * along};
}

RestSpin map_pi_to_rest(const Vec3& pi, const Kinematics& kin)
{
    const Vec3 u = motion_direction(kin);
    return {(pi + (kin.gamma - 1.0) * pi.dot(u) * u) / kin.gamma};
}

PolarizationHistory to_history(const PrecessionTrajectory& traj, const Kinematics& kin)
{
    PolarizationHistory h;
    h.t = traj.t;
    h.beta_pi = traj.beta_pi;
    const std::size_t n = traj.size();
    h.pi_x.resize(n);
    h.pi_y.resize(n);
    h.pi_z.resize(n);
    h.invariant.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        h.pi_x[k] = traj.pi[k].x();
        h.pi_y[k] = traj.pi[k].y();
        h.pi_z[k] = traj.pi[k].z();
        h.invariant[k] = spin_invariant(traj.pi[k], traj.beta_pi[k], kin.gamma);
    }
    return h;
}

} // namespace spinflip
