#pragma once

#include "spinflip/dirac_pauli.hpp"
#include "spinflip/kinematics.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinflip
{

/// The two doublet eigenvalues of (Pi . n) coincide; no orientation sign
/// can be selected.
class DegenerateOrientation : public std::runtime_error
{
  public:
    DegenerateOrientation(const std::string& what, Kinematics kin)
        : std::runtime_error(what), kin_(kin)
    {
    }
    const Kinematics& kinematics() const noexcept { return kin_; }

  private:
    Kinematics kin_;
};

enum class Axis
{
    x,
    y,
    z,
};

/**
 * A |+> + B |->: the nonstationary spin state prepared as an eigenstate of
 * (Pi . n) with eigenvalue Lambda. epsilon is the sign of Lambda.
 */
struct SpinSuperposition
{
    Complex A{1.0};
    Complex B{0.0};
    double Lambda{1.0};
    Sign epsilon{Sign::plus};
    SpinAxis n{SpinAxis::z()};
};

/// Time series of the polarization expectation values. Time is in units
/// hbar / (2 |mu| H).
struct PolarizationHistory
{
    std::vector<double> t;
    std::vector<double> pi_x, pi_y, pi_z;
    std::vector<double> beta_pi;
    std::vector<double> invariant;

    std::size_t size() const { return t.size(); }
    Vec3 pi(std::size_t k) const { return {pi_x[k], pi_y[k], pi_z[k]}; }
    const std::vector<double>& component(int k) const;
};

/// Closed-form amplitudes for an initial spin along a coordinate axis. For
/// Axis::z, epsilon plays the role of zeta: (A, B) = (1, 0) or (0, 1).
SpinSuperposition initial_amplitudes_closed(Axis axis, Sign epsilon, const Kinematics& kin);

/// Diagonalizes (Pi . n) on the {|+>, |->} doublet and returns the eigenvector
/// whose eigenvalue has sign epsilon. The global phase makes the first
/// nonzero amplitude real and positive.
SpinSuperposition initial_amplitudes_general(const SpinAxis& n, Sign epsilon,
                                             const Kinematics& kin);

/// <Pi> at a single time.
Vec3 expectation_at(const SpinSuperposition& sup, const Kinematics& kin, double t);

PolarizationHistory evolve_expectations(const SpinSuperposition& sup, const Kinematics& kin,
                                        const FieldCoupling& coupling,
                                        std::span<const double> t_grid);

/// (1/gamma^2) |pi|^2 + beta_pi^2
double spin_invariant(const Vec3& pi, double beta_pi, double gamma);

/// beta . <Pi>_t on the grid.
std::vector<double> longitudinal_polarization(const SpinSuperposition& sup,
                                              const Kinematics& kin,
                                              const FieldCoupling& coupling,
                                              std::span<const double> t_grid);

/// Uniform grid t_k = k * T / samples_per_period covering `periods` periods
/// of angular frequency |omega|, endpoint included.
std::vector<double> make_time_grid(double omega, double periods, int samples_per_period);

} // namespace spinflip
