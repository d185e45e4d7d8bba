#pragma once

#include "spinflip/kinematics.hpp"

#include <Eigen/Dense>

#include <complex>

namespace spinflip
{

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;

/// Four spin coefficients c1..c4 of a stationary state (azimuth phase = 0).
struct Spinor4
{
    Eigen::Vector4cd c{Eigen::Vector4cd::Zero()};

    double norm_squared() const { return c.squaredNorm(); }
};

/// Spin operator component as a 4x4 matrix in the Dirac representation.
struct PiMatrix
{
    Eigen::Matrix4cd m{Eigen::Matrix4cd::Zero()};
};

/// Unit 3-vector selecting a spin-operator component.
class SpinAxis
{
  public:
    SpinAxis() = default;

    /// Throws InvalidArgument when |v| differs from 1 by more than tol.
    static SpinAxis from_unit(const Vec3& v, double tol = 1e-12);
    /// Normalizes v; throws for a (near) zero vector.
    static SpinAxis normalized(const Vec3& v);
    /// (sin theta cos phi, sin theta sin phi, cos theta).
    static SpinAxis from_angles(double theta, double phi);

    static SpinAxis x() { return SpinAxis(Vec3::UnitX()); }
    static SpinAxis y() { return SpinAxis(Vec3::UnitY()); }
    static SpinAxis z() { return SpinAxis(Vec3::UnitZ()); }
    /// Direction of motion; defined from alpha even when beta = 0.
    static SpinAxis along_motion(const Kinematics& kin);

    const Vec3& vector() const { return n_; }

  private:
    explicit SpinAxis(const Vec3& n) : n_(n) {}
    Vec3 n_{Vec3::UnitZ()};
};

/// Stationary spin state |zeta> for motion in the xz plane.
Spinor4 spin_coefficients(Sign zeta, const Kinematics& kin);

/**
 * Component of the spin operator along n:
 *   n.sigma + rho2 n.(sigma x b),   b = gamma beta (sin alpha, 0, cos alpha),
 * with sigma = diag(sigma, sigma) and rho2 the off-diagonal block matrix
 * [[0, -i], [i, 0]] (each entry times the 2x2 identity).
 */
PiMatrix pi_component_matrix(const SpinAxis& n, const Kinematics& kin);

/// <bra| m |ket>
Complex matrix_element(const Spinor4& bra, const PiMatrix& m, const Spinor4& ket);

/// Diagonal <zeta|Pi_k|zeta> and off-diagonal <-zeta|Pi_k|zeta> elements.
struct MatrixElementTable
{
    Complex diag_x, cross_x;
    Complex diag_y, cross_y;
    Complex diag_z, cross_z;

    Complex diag(int k) const;
    Complex cross(int k) const;
};

/// Analytic values of the six matrix elements.
MatrixElementTable closed_form_matrix_elements(const Kinematics& kin, Sign zeta);

/// Same table evaluated by explicit 4x4 products of the stationary spinors.
MatrixElementTable numeric_matrix_elements(const Kinematics& kin, Sign zeta);

} // namespace spinflip
