#include "spinflip/dirac_pauli.hpp"

#include <array>
#include <cmath>

namespace spinflip
{
namespace
{

constexpr Complex kI{0.0, 1.0};

using Mat2 = Eigen::Matrix2cd;

std::array<Mat2, 3> pauli()
{
    Mat2 sx, sy, sz;
    sx << 0, 1, 1, 0;
    sy << 0, -kI, kI, 0;
    sz << 1, 0, 0, -1;
    return {sx, sy, sz};
}

/// diag(s, s)
Eigen::Matrix4cd block_diag(const Mat2& s)
{
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m.topLeftCorner<2, 2>() = s;
    m.bottomRightCorner<2, 2>() = s;
    return m;
}

/// rho2 * diag(s, s) = [[0, -i s], [i s, 0]]
Eigen::Matrix4cd rho2_times(const Mat2& s)
{
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m.topRightCorner<2, 2>() = -kI * s;
    m.bottomLeftCorner<2, 2>() = kI * s;
    return m;
}

} // namespace

SpinAxis SpinAxis::from_unit(const Vec3& v, double tol)
{
    if (!v.allFinite() || std::abs(v.norm() - 1.0) > tol)
        throw InvalidArgument("spin axis must be a unit vector");
    return SpinAxis(v);
}

SpinAxis SpinAxis::normalized(const Vec3& v)
{
    const double len = v.norm();
    if (!std::isfinite(len) || len < 1e-300) throw InvalidArgument("spin axis has zero length");
    return SpinAxis(v / len);
}

SpinAxis SpinAxis::from_angles(double theta, double phi)
{
    return SpinAxis(Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                         std::cos(theta)));
}

SpinAxis SpinAxis::along_motion(const Kinematics& kin)
{
    return SpinAxis(Vec3(std::sin(kin.alpha), 0.0, std::cos(kin.alpha)));
}

Spinor4 spin_coefficients(Sign zeta, const Kinematics& kin)
{
    const double z = value(zeta);
    const double plus = std::sqrt(1.0 + kin.beta_z);
    const double minus = std::sqrt(1.0 - kin.beta_z);
    // 1 - 1/q = (q - 1)/q with q - 1 = gamma^2 beta_perp^2 / (q + 1); avoids
    // cancellation for nearly collinear motion
    const double gb = kin.gamma * kin.beta_perp;
    const double small = gb * gb / (kin.q + 1.0) / kin.q;
    const double large = 1.0 + 1.0 / kin.q;
    const double up = std::sqrt(0.5 * (z > 0 ? large : small));
    const double down = std::sqrt(0.5 * (z > 0 ? small : large));

    Spinor4 s;
    s.c << 0.5 * z * up * (plus + z * minus),
        -0.5 * down * (plus - z * minus),
        0.5 * z * up * (plus - z * minus),
        0.5 * down * (plus + z * minus);
    return s;
}

PiMatrix pi_component_matrix(const SpinAxis& axis, const Kinematics& kin)
{
    static const auto sigma = pauli();
    const Vec3& n = axis.vector();
    const Vec3 b = kin.gamma * Vec3(kin.beta_perp, 0.0, kin.beta_z);
    // n.(sigma x b) = sigma.(b x n)
    const Vec3 bn = b.cross(n);

    Mat2 spin = Mat2::Zero();
    Mat2 moment = Mat2::Zero();
    for (int k = 0; k < 3; ++k) {
        spin += n[k] * sigma[k];
        moment += bn[k] * sigma[k];
    }
    return {block_diag(spin) + rho2_times(moment)};
}

Complex matrix_element(const Spinor4& bra, const PiMatrix& m, const Spinor4& ket)
{
    return bra.c.dot(m.m * ket.c); // dot() conjugates the left operand
}

Complex MatrixElementTable::diag(int k) const
{
    switch (k) {
    case 0: return diag_x;
    case 1: return diag_y;
    default: return diag_z;
    }
}

Complex MatrixElementTable::cross(int k) const
{
    switch (k) {
    case 0: return cross_x;
    case 1: return cross_y;
    default: return cross_z;
    }
}

MatrixElementTable closed_form_matrix_elements(const Kinematics& kin, Sign zeta)
{
    const double z = value(zeta);
    const double r = kin.transverse_factor();
    const double sc = std::sin(kin.alpha) * std::cos(kin.alpha);

    MatrixElementTable t;
    t.diag_x = -z * kin.gamma * kin.beta * kin.beta * sc / r;
    t.cross_x = -1.0 / r;
    t.diag_y = 0.0;
    t.cross_y = Complex(0.0, -z * kin.gamma);
    t.diag_z = z * kin.gamma * r;
    t.cross_z = 0.0;
    return t;
}

MatrixElementTable numeric_matrix_elements(const Kinematics& kin, Sign zeta)
{
    const Spinor4 ket = spin_coefficients(zeta, kin);
    const Spinor4 other = spin_coefficients(flip(zeta), kin);
    const PiMatrix px = pi_component_matrix(SpinAxis::x(), kin);
    const PiMatrix py = pi_component_matrix(SpinAxis::y(), kin);
    const PiMatrix pz = pi_component_matrix(SpinAxis::z(), kin);

    MatrixElementTable t;
    t.diag_x = matrix_element(ket, px, ket);
    t.cross_x = matrix_element(other, px, ket);
    t.diag_y = matrix_element(ket, py, ket);
    t.cross_y = matrix_element(other, py, ket);
    t.diag_z = matrix_element(ket, pz, ket);
    t.cross_z = matrix_element(other, pz, ket);
    return t;
}

} // namespace spinflip
