#pragma once

#include "spinflip/dirac_pauli.hpp"
#include "spinflip/kinematics.hpp"
#include "spinflip/superposition.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace spinflip
{

/// Classical precession vector, units 2|mu|H/hbar. The field is along +z.
struct PrecessionVector
{
    Vec3 omega{Vec3::UnitZ()};

    double magnitude() const { return omega.norm(); }
    /// Time for one full turn, units hbar/(2|mu|H).
    double period() const;
};

/// Rest-frame spin direction.
struct RestSpin
{
    Vec3 s{Vec3::UnitZ()};
};

struct PrecessionTrajectory
{
    std::vector<double> t;
    std::vector<Vec3> s;
    std::vector<Vec3> pi;
    std::vector<double> beta_pi;

    std::size_t size() const { return t.size(); }
};

/// The integrator was asked to cover more precession periods than the
/// configured guard allows.
class StepLimitExceeded : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Omega = B - gamma/(gamma+1) (beta.B) beta with B = z_hat.
PrecessionVector omega_vector(const Kinematics& kin);

/// Right-handed rotation of s0 about Omega by |Omega| t (solves ds/dt = Omega x s).
RestSpin rotate_exact(const RestSpin& s0, const PrecessionVector& omega, double t);

struct IntegratorOptions
{
    /// Lower bound on RK4 steps per precession period; each grid interval
    /// takes at least one step.
    int steps_per_period{1000};
    double max_periods{1e6};
};

/// Fixed-step classical RK4 integration of ds/dt = Omega x s, sampled on t_grid.
PrecessionTrajectory integrate(const RestSpin& s0, const PrecessionVector& omega,
                               const Kinematics& kin, std::span<const double> t_grid,
                               const IntegratorOptions& opts = {});

/// Same sampling as integrate() but using the exact rotation.
PrecessionTrajectory rotate_trajectory(const RestSpin& s0, const PrecessionVector& omega,
                                       const Kinematics& kin, std::span<const double> t_grid);

struct MappedPi
{
    Vec3 pi;
    double beta_pi{0};
};

/// pi = gamma s - (gamma - 1)(s.u) u, beta_pi = beta (s.u), u = beta_hat.
MappedPi map_rest_to_pi(const RestSpin& s, const Kinematics& kin);

/// Inverse of map_rest_to_pi: s = (pi + (gamma - 1)(pi.u) u) / gamma.
RestSpin map_pi_to_rest(const Vec3& pi, const Kinematics& kin);

/// Repackages a trajectory in the quantum history layout.
PolarizationHistory to_history(const PrecessionTrajectory& traj, const Kinematics& kin);

} // namespace spinflip
