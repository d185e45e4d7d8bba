#include "oracle.hpp"

#include "spinflip/dirac_pauli.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>

using namespace spinflip;
using std::numbers::pi;

namespace
{

constexpr double kUlp = std::numeric_limits<double>::epsilon();

double max_abs_diff(const MatrixElementTable& a, const MatrixElementTable& b)
{
    double d = 0.0;
    for (int k = 0; k < 3; ++k) {
        d = std::max(d, std::abs(a.diag(k) - b.diag(k)));
        d = std::max(d, std::abs(a.cross(k) - b.cross(k)));
    }
    return d;
}

} // namespace

TEST_CASE("spin_coefficients: rest frame")
{
    const Kinematics rest = make_kinematics(0.0, 0.7);
    const Spinor4 up = spin_coefficients(Sign::plus, rest);
    const Spinor4 down = spin_coefficients(Sign::minus, rest);
    CHECK((up.c - Eigen::Vector4cd(1, 0, 0, 0)).norm() == 0.0);
    CHECK((down.c - Eigen::Vector4cd(0, -1, 0, 0)).norm() == 0.0);
}

TEST_CASE("spin_coefficients: motion along the field")
{
    const double beta = 0.6;
    const Spinor4 s = spin_coefficients(Sign::plus, make_kinematics(beta, 0.0));
    const double p = std::sqrt(1 + beta), m = std::sqrt(1 - beta);
    const Eigen::Vector4cd expected(0.5 * (p + m), 0, 0.5 * (p - m), 0);
    CHECK((s.c - expected).norm() < 1e-15);
}

TEST_CASE("spin_coefficients are real, normalized, and match the typed-in column")
{
    oracle::KinematicsGen gen(21);
    for (int i = 0; i < 2000; ++i) {
        const Kinematics k = gen();
        for (Sign z : {Sign::plus, Sign::minus}) {
            const Spinor4 s = spin_coefficients(z, k);
            REQUIRE(s.c.imag().norm() == 0.0);
            REQUIRE(std::abs(s.norm_squared() - 1.0) <= 8 * kUlp);
            REQUIRE((s.c - oracle::spinor(static_cast<int>(z), k)).norm() < 1e-13);
        }
    }
}

TEST_CASE("pi_component_matrix agrees with the Kronecker-product construction")
{
    oracle::KinematicsGen gen(22);
    for (int i = 0; i < 500; ++i) {
        const Kinematics k = gen();
        const Eigen::Vector3d n = oracle::random_unit(gen.rng());
        const PiMatrix m = pi_component_matrix(SpinAxis::from_unit(n), k);
        REQUIRE((m.m - oracle::spin_operator(n, k)).norm() < 1e-13 * (1 + k.gamma));
        // Hermitian
        REQUIRE((m.m - m.m.adjoint()).cwiseAbs().maxCoeff() <= 8 * kUlp * m.m.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("pi_component_matrix: eigenvalues")
{
    SUBCASE("rest frame z component is diag(sigma_z, sigma_z)")
    {
        const PiMatrix m = pi_component_matrix(SpinAxis::z(), make_kinematics(0.0, 0.0));
        Eigen::Matrix4cd expected = Eigen::Matrix4cd::Zero();
        expected.diagonal() << 1, -1, 1, -1;
        CHECK((m.m - expected).norm() == 0.0);
    }
    SUBCASE("beta 0.6 across the field: +-1.25, each twice")
    {
        const PiMatrix m = pi_component_matrix(SpinAxis::z(), make_kinematics(0.6, pi / 2));
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m.m);
        const Eigen::Vector4d ev = es.eigenvalues();
        CHECK(ev[0] == doctest::Approx(-1.25).epsilon(1e-14));
        CHECK(ev[1] == doctest::Approx(-1.25).epsilon(1e-14));
        CHECK(ev[2] == doctest::Approx(1.25).epsilon(1e-14));
        CHECK(ev[3] == doctest::Approx(1.25).epsilon(1e-14));
    }
}

TEST_CASE("SpinAxis validation")
{
    CHECK_THROWS_AS(SpinAxis::from_unit(Eigen::Vector3d(1, 1, 0)), InvalidArgument);
    CHECK_THROWS_AS(SpinAxis::from_unit(Eigen::Vector3d(1 + 1e-9, 0, 0)), InvalidArgument);
    CHECK_NOTHROW(SpinAxis::from_unit(Eigen::Vector3d(1 + 1e-14, 0, 0)));
    CHECK_THROWS_AS(SpinAxis::normalized(Eigen::Vector3d::Zero()), InvalidArgument);
    CHECK(SpinAxis::normalized(Eigen::Vector3d(0, 3, 4)).vector().isApprox(Eigen::Vector3d(0, 0.6, 0.8)));
    const SpinAxis a = SpinAxis::from_angles(pi / 2, pi / 2);
    CHECK((a.vector() - Eigen::Vector3d::UnitY()).norm() < 1e-15);
}

TEST_CASE("property: stationary states are orthonormal eigenvectors of Pi_z with eigenvalue zeta q")
{
    oracle::KinematicsGen gen(23);
    for (int i = 0; i < 10000; ++i) {
        const Kinematics k = gen();
        const Eigen::Matrix4cd pz = oracle::spin_operator(Eigen::Vector3d::UnitZ(), k);
        for (Sign z : {Sign::plus, Sign::minus}) {
            const Spinor4 s = spin_coefficients(z, k);
            REQUIRE((pz * s.c - value(z) * k.q * s.c).norm() < 1e-12);
            REQUIRE(std::abs(s.c.dot(spin_coefficients(flip(z), k).c)) < 1e-12);
        }
    }
}

TEST_CASE("matrix_element: printed relations")
{
    const Kinematics k = make_kinematics(0.6, pi / 4);
    const PiMatrix py = pi_component_matrix(SpinAxis::y(), k);
    const PiMatrix pz = pi_component_matrix(SpinAxis::z(), k);
    for (Sign z : {Sign::plus, Sign::minus}) {
        const Spinor4 s = spin_coefficients(z, k), o = spin_coefficients(flip(z), k);
        CHECK(std::abs(matrix_element(s, py, s)) < 1e-15);
        CHECK(std::abs(matrix_element(o, py, s) - Complex(0, -value(z) * k.gamma)) < 1e-14);
        CHECK(std::abs(matrix_element(s, pz, s) - value(z) * k.gamma * k.transverse_factor()) < 1e-14);
        // conjugate symmetry for Hermitian operators
        CHECK(std::abs(matrix_element(o, py, s) - std::conj(matrix_element(s, py, o))) < 1e-15);
    }
}

TEST_CASE("closed_form_matrix_elements: special cases")
{
    SUBCASE("rest frame")
    {
        for (Sign z : {Sign::plus, Sign::minus}) {
            const MatrixElementTable t = closed_form_matrix_elements(make_kinematics(0.0, 0.4), z);
            CHECK(t.diag_x == Complex(0.0));
            CHECK(t.cross_x == Complex(-1.0));
            CHECK(t.diag_y == Complex(0.0));
            CHECK(t.cross_y == Complex(0, -value(z)));
            CHECK(t.diag_z == Complex(value(z)));
            CHECK(t.cross_z == Complex(0.0));
        }
    }
    SUBCASE("perpendicular motion kills <z|Pi_x|z>")
    {
        CHECK(std::abs(closed_form_matrix_elements(make_kinematics(0.9, pi / 2), Sign::plus).diag_x) < 1e-15);
    }
    SUBCASE("beta 0.6, alpha pi/4 against the brute-force 4x4 products")
    {
        const Kinematics k = make_kinematics(0.6, pi / 4);
        for (Sign z : {Sign::plus, Sign::minus}) {
            const MatrixElementTable t = closed_form_matrix_elements(k, z);
            const oracle::V4 s = oracle::spinor(static_cast<int>(z), k), o = oracle::spinor(-static_cast<int>(z), k);
            for (int c = 0; c < 3; ++c) {
                const auto op = oracle::spin_operator(Eigen::Vector3d::Unit(c), k);
                CHECK(std::abs(t.diag(c) - oracle::element(s, op, s)) < 1e-12);
                CHECK(std::abs(t.cross(c) - oracle::element(o, op, s)) < 1e-12);
            }
        }
    }
}

TEST_CASE("property: closed-form table equals the numeric table")
{
    oracle::KinematicsGen gen(24);
    for (int i = 0; i < 10000; ++i) {
        const Kinematics k = gen();
        for (Sign z : {Sign::plus, Sign::minus})
            REQUIRE(max_abs_diff(closed_form_matrix_elements(k, z), numeric_matrix_elements(k, z)) < 1e-12);
    }
}

TEST_CASE("property: doublet eigenvalues of Pi.n for the coordinate axes")
{
    oracle::KinematicsGen gen(25);
    for (int i = 0; i < 2000; ++i) {
        const Kinematics k = gen();
        const Eigen::Vector2d ex = oracle::doublet_eigenvalues(Eigen::Vector3d::UnitX(), k);
        const Eigen::Vector2d ey = oracle::doublet_eigenvalues(Eigen::Vector3d::UnitY(), k);
        const Eigen::Vector2d ez = oracle::doublet_eigenvalues(Eigen::Vector3d::UnitZ(), k);
        const double lx = std::sqrt(1 + k.gamma * k.gamma * k.beta_z * k.beta_z);
        REQUIRE(std::abs(ex[1] - lx) < 1e-12);
        REQUIRE(std::abs(ex[0] + lx) < 1e-12);
        REQUIRE(std::abs(ey[1] - k.gamma) < 1e-12);
        REQUIRE(std::abs(ey[0] + k.gamma) < 1e-12);
        REQUIRE(std::abs(ez[1] - k.q) < 1e-12);
        REQUIRE(std::abs(ez[0] + k.q) < 1e-12);
    }
}
