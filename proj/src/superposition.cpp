#include "spinflip/superposition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace spinflip
{
namespace
{

constexpr double kDegenerateTol = 1e-10;
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

void require_grid(std::span<const double> t_grid)
{
    if (t_grid.empty()) throw InvalidArgument("time grid is empty");
    if (!std::is_sorted(t_grid.begin(), t_grid.end()))
        throw InvalidArgument("time grid must be ascending");
}

/// Matrix elements of Pi_k between the doublet states.
struct Doublet
{
    double plus_plus[3];
    double minus_minus[3];
    Complex plus_minus[3];
};

Doublet doublet_elements(const Kinematics& kin)
{
    const MatrixElementTable up = closed_form_matrix_elements(kin, Sign::plus);
    const MatrixElementTable down = closed_form_matrix_elements(kin, Sign::minus);
    Doublet d;
    for (int k = 0; k < 3; ++k) {
        d.plus_plus[k] = up.diag(k).real();
        d.minus_minus[k] = down.diag(k).real();
        d.plus_minus[k] = down.cross(k); // <+|Pi_k|->
    }
    return d;
}

Vec3 expectation(const SpinSuperposition& sup, const Doublet& d, double omega, double t)
{
    const double pa = std::norm(sup.A);
    const double pb = std::norm(sup.B);
    // cross term carries exp(+i (E+ - E-) t)
    const Complex coherence = std::conj(sup.A) * sup.B * std::polar(1.0, omega * t);
    Vec3 out;
    for (int k = 0; k < 3; ++k)
        out[k] = pa * d.plus_plus[k] + pb * d.minus_minus[k] +
                 2.0 * (coherence * d.plus_minus[k]).real();
    return out;
}

Vec3 beta_vector(const Kinematics& kin) { return {kin.beta_perp, 0.0, kin.beta_z}; }

} // namespace

const std::vector<double>& PolarizationHistory::component(int k) const
{
    switch (k) {
    case 0: return pi_x;
    case 1: return pi_y;
    default: return pi_z;
    }
}

SpinSuperposition initial_amplitudes_closed(Axis axis, Sign epsilon, const Kinematics& kin)
{
    const double eps = value(epsilon);
    SpinSuperposition sup;
    sup.epsilon = epsilon;

    switch (axis) {
    case Axis::y:
        sup.A = eps * kInvSqrt2;
        sup.B = Complex(0.0, -kInvSqrt2);
        sup.Lambda = eps * kin.gamma;
        sup.n = SpinAxis::y();
        break;
    case Axis::x: {
        const double b2sc = kin.beta * kin.beta * std::sin(kin.alpha) * std::cos(kin.alpha);
        const double root = std::sqrt(1.0 + kin.gamma * kin.gamma * b2sc * b2sc);
        const double x = kin.gamma * b2sc / root;
        // 1 - y written as (1 - x^2)/(1 + y) when y > 0, y = +-x
        const double one_minus_x2 = 1.0 / (root * root);
        auto one_minus = [&](double y) { return y > 0 ? one_minus_x2 / (1.0 + y) : 1.0 - y; };
        sup.A = -eps * kInvSqrt2 * std::sqrt(one_minus(eps * x));
        sup.B = kInvSqrt2 * std::sqrt(one_minus(-eps * x));
        sup.Lambda = eps * std::sqrt(1.0 + kin.gamma * kin.gamma * kin.beta_z * kin.beta_z);
        sup.n = SpinAxis::x();
        break;
    }
    case Axis::z: {
        const double g2b2s2 = kin.gamma * kin.gamma * kin.beta_perp * kin.beta_perp;
        sup.A = epsilon == Sign::plus ? 1.0 : 0.0;
        sup.B = epsilon == Sign::plus ? 0.0 : 1.0;
        sup.Lambda = eps * (1.0 + g2b2s2) / (kin.gamma * kin.transverse_factor());
        sup.n = SpinAxis::z();
        break;
    }
    }
    return sup;
}

SpinSuperposition initial_amplitudes_general(const SpinAxis& n, Sign epsilon,
                                             const Kinematics& kin)
{
    const Spinor4 up = spin_coefficients(Sign::plus, kin);
    const Spinor4 down = spin_coefficients(Sign::minus, kin);
    const PiMatrix op = pi_component_matrix(n, kin);

    // Hermitian 2x2 [[a, b], [conj(b), d]]
    const double a = matrix_element(up, op, up).real();
    const double d = matrix_element(down, op, down).real();
    const Complex b = matrix_element(up, op, down);

    const double mean = 0.5 * (a + d);
    const double half = 0.5 * (a - d);
    const double radius = std::hypot(half, std::abs(b));
    if (radius < kDegenerateTol) {
        throw DegenerateOrientation("degenerate spin doublet for beta=" + std::to_string(kin.beta) +
                                        " alpha=" + std::to_string(kin.alpha),
                                    kin);
    }
    const double lambda = mean + value(epsilon) * radius;

    // Two candidate eigenvectors, (b, lambda - a) and (lambda - d, conj b);
    // pick the larger one to avoid cancellation.
    Complex first, second;
    const double gap_a = lambda - a;
    const double gap_d = lambda - d;
    if (std::abs(gap_a) >= std::abs(gap_d)) {
        first = b;
        second = gap_a;
    } else {
        first = gap_d;
        second = std::conj(b);
    }
    const double len = std::sqrt(std::norm(first) + std::norm(second));
    first /= len;
    second /= len;

    // global phase: first nonzero amplitude real positive
    const bool lead_is_first = std::abs(first) > 1e-15;
    const Complex lead = lead_is_first ? first : second;
    const Complex phase = std::conj(lead) / std::abs(lead);

    SpinSuperposition sup;
    sup.A = lead_is_first ? Complex(std::abs(first)) : first * phase;
    sup.B = lead_is_first ? second * phase : Complex(std::abs(second));
    sup.Lambda = lambda;
    sup.epsilon = epsilon;
    sup.n = n;
    return sup;
}

Vec3 expectation_at(const SpinSuperposition& sup, const Kinematics& kin, double t)
{
    return expectation(sup, doublet_elements(kin), precession_frequency(kin, Sign::plus), t);
}

PolarizationHistory evolve_expectations(const SpinSuperposition& sup, const Kinematics& kin,
                                        const FieldCoupling& /*coupling*/,
                                        std::span<const double> t_grid)
{
    require_grid(t_grid);
    const Doublet d = doublet_elements(kin);
    const double omega = precession_frequency(kin, Sign::plus);
    const Vec3 beta = beta_vector(kin);

    PolarizationHistory h;
    const std::size_t n = t_grid.size();
    h.t.assign(t_grid.begin(), t_grid.end());
    h.pi_x.resize(n);
    h.pi_y.resize(n);
    h.pi_z.resize(n);
    h.beta_pi.resize(n);
    h.invariant.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Vec3 pi = expectation(sup, d, omega, t_grid[k]);
        h.pi_x[k] = pi.x();
        h.pi_y[k] = pi.y();
        h.pi_z[k] = pi.z();
        h.beta_pi[k] = beta.dot(pi);
        h.invariant[k] = spin_invariant(pi, h.beta_pi[k], kin.gamma);
    }
    return h;
}

double spin_invariant(const Vec3& pi, double beta_pi, double gamma)
{
    return pi.squaredNorm() / (gamma * gamma) + beta_pi * beta_pi;
}

std::vector<double> longitudinal_polarization(const SpinSuperposition& sup,
                                              const Kinematics& kin,
                                              const FieldCoupling& coupling,
                                              std::span<const double> t_grid)
{
    return evolve_expectations(sup, kin, coupling, t_grid).beta_pi;
}

std::vector<double> make_time_grid(double omega, double periods, int samples_per_period)
{
    if (!(std::abs(omega) > 0.0)) throw InvalidArgument("frequency must be nonzero");
    if (!(periods > 0.0)) throw InvalidArgument("periods must be > 0");
    if (samples_per_period < 1) throw InvalidArgument("samples_per_period must be >= 1");
    const double period = 2.0 * std::numbers::pi / std::abs(omega);
    const double dt = period / samples_per_period;
    const auto steps = static_cast<std::size_t>(std::llround(periods * samples_per_period));
    std::vector<double> t(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) t[k] = static_cast<double>(k) * dt;
    return t;
}

} // namespace spinflip
