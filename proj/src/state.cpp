#include "csge/state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>

#include "csge/error.hpp"
#include "csge/quadrature.hpp"

namespace csge {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
const double kSqrt2 = std::sqrt(2.0);

// Real centre of |exp(-(u + c)^2 / (4a))|^2 for a = 1 + iT.
double density_center(cplx c, double T) { return -(c.real() + T * c.imag()); }

int branch_index(int sign) { return sign > 0 ? 0 : 1; }

}  // namespace

BranchGeometry BranchGeometry::from(const DimensionlessParams& p, Z0PhaseExponent exponent) {
    p.validate();
    const double T = p.total_time();
    BranchGeometry g;
    g.width = cplx(1.0, T);
    const double kx3 = p.k2 * p.k2 * p.k2;
    const double kz3 = p.k3 * p.k3 * p.k3;
    g.x_center = kSqrt2 * kx3 * p.tau2 * p.tau2 + 2.0 * kI * kSqrt2 * kx3 * p.tau2 * cplx(1.0, p.tau2);
    g.z_center = kSqrt2 * kz3 * p.tau3 * p.tau3 + 2.0 * kI * kSqrt2 * kz3 * p.tau3 * g.width;
    g.x_phase = kSqrt2 * kx3 * p.tau2 * p.x0;
    const double kz_phase = exponent == Z0PhaseExponent::cubed ? kz3 : p.k3 * p.k3;
    g.z_phase = kSqrt2 * kz_phase * p.tau3 * p.z0;
    return g;
}

double BranchGeometry::domain_half_width() const {
    const double T = width.imag();
    const double spread = std::sqrt(1.0 + T * T);
    const double shift = std::max(std::abs(density_center(x_center, T)), std::abs(density_center(z_center, T)));
    return std::max(20.0, shift + 10.0 * spread);
}

double BranchGeometry::wavenumber_bound(double half_width) const {
    const double T = width.imag();
    const double D = 1.0 + T * T;
    const double re = std::max(std::abs(x_center.real()), std::abs(z_center.real()));
    const double im = std::max(std::abs(x_center.imag()), std::abs(z_center.imag()));
    return (T * (half_width + re) + im) / (2.0 * D);
}

cplx scaled_gaussian(double u, cplx c, cplx a) {
    const cplx shifted = u + c;
    return std::exp(-shifted * shifted / (4.0 * a) - 0.25 * c.imag() * c.imag());
}

struct SpinorState::Cache {
    std::once_flag once;
    std::array<std::array<cplx, 2>, 2> z{};
    std::array<std::array<cplx, 2>, 2> x{};
    double norm = 0.0;
};

SpinorState::SpinorState(const DimensionlessParams& params, NormMode mode, Z0PhaseExponent exponent)
    : params_(params),
      mode_(mode),
      exponent_(exponent),
      geometry_(BranchGeometry::from(params, exponent)),
      cache_(std::make_shared<Cache>()) {}

cplx SpinorState::z_factor(int sign, double Z) const {
    const double s = sign > 0 ? 1.0 : -1.0;
    return std::exp(-kI * s * geometry_.z_phase) * scaled_gaussian(Z, s * geometry_.z_center, geometry_.width);
}

cplx SpinorState::x_factor(int sign, double X) const {
    const double s = sign > 0 ? 1.0 : -1.0;
    const cplx a = std::exp(-kI * geometry_.x_phase) * scaled_gaussian(X, geometry_.x_center, geometry_.width);
    const cplx b = std::exp(kI * geometry_.x_phase) * scaled_gaussian(X, -geometry_.x_center, geometry_.width);
    return a + s * b;
}

Spinor SpinorState::raw(double X, double Z) const {
    return {z_factor(+1, Z) * x_factor(+1, X), z_factor(-1, Z) * x_factor(-1, X)};
}

double SpinorState::analytic_norm_squared() const {
    const double T = params_.total_time();
    return 8.0 * kPi * (1.0 + T * T);
}

int SpinorState::quadrature_points() const {
    const double L = domain_half_width();
    const double K = geometry_.wavenumber_bound(L);
    const double h = K > 0.0 ? std::min(0.1, kPi / (4.0 * K)) : 0.1;
    return static_cast<int>(std::ceil(2.0 * L / h)) + 1;
}

double SpinorState::numeric_norm_squared() const {
    std::call_once(cache_->once, [this] {
        const double L = domain_half_width();
        const int n = quadrature_points();
        for (int s : {+1, -1}) {
            for (int t : {+1, -1}) {
                cache_->z[branch_index(s)][branch_index(t)] = trapezoid(
                    [&](double u) { return std::conj(z_factor(s, u)) * z_factor(t, u); }, -L, L, n);
                cache_->x[branch_index(s)][branch_index(t)] = trapezoid(
                    [&](double u) { return std::conj(x_factor(s, u)) * x_factor(t, u); }, -L, L, n);
            }
        }
        double norm = 0.0;
        for (int s : {0, 1}) norm += (cache_->z[s][s] * cache_->x[s][s]).real();
        cache_->norm = norm;
    });
    return cache_->norm;
}

cplx SpinorState::z_overlap(int s, int t) const {
    numeric_norm_squared();
    return cache_->z[branch_index(s)][branch_index(t)];
}

cplx SpinorState::x_overlap(int s, int t) const {
    numeric_norm_squared();
    return cache_->x[branch_index(s)][branch_index(t)];
}

double SpinorState::norm_squared() const {
    return mode_ == NormMode::analytic_M ? analytic_norm_squared() : numeric_norm_squared();
}

Spinor psi_pm(double X, double Z, const SpinorState& s) {
    const double scale = 1.0 / std::sqrt(s.norm_squared());
    const Spinor r = s.raw(X, Z);
    return {r.up * scale, r.down * scale};
}

double probability_density(double X, double Z, const SpinorState& s) {
    const Spinor v = psi_pm(X, Z, s);
    return std::norm(v.up) + std::norm(v.down);
}

Spinor intermediate_state(double x, double y, double z, const PhysicalParams& p) {
    p.validate();
    const double t = p.t2;
    const cplx s = p.sigma0 * p.sigma0 + kI * p.hbar * t / (2.0 * p.m);
    const double force = p.mu_c * p.b2;
    const double shift = t * t * force / (2.0 * p.m);
    const cplx kappa = kI * t * t * t * force * force / (p.m * p.hbar);
    const cplx y_shifted = y - 2.0 * kI * p.k_y * p.sigma0 * p.sigma0;

    const cplx prefactor = std::exp(-kappa / 6.0) / kSqrt2 * std::pow(2.0 * kPi, -0.75) * std::pow(p.sigma0, 1.5) *
                           std::pow(s, -1.5) * std::exp(-p.k_y * p.k_y * p.sigma0 * p.sigma0) *
                           std::exp(-(y_shifted * y_shifted + z * z) / (4.0 * s));
    const double larmor = t * p.mu_c * (p.B2 + p.b2 * x) / p.hbar;
    const cplx up = std::exp(-kI * larmor) * std::exp(-(x + shift) * (x + shift) / (4.0 * s));
    const cplx down = std::exp(kI * larmor) * std::exp(-(x - shift) * (x - shift) / (4.0 * s));
    return {prefactor * up, prefactor * down};
}

cplx spectator_y_factor(double y, const PhysicalParams& p) {
    p.validate();
    const cplx s = p.sigma0 * p.sigma0 + kI * p.hbar * (p.t2 + p.t3) / (2.0 * p.m);
    const cplx y_shifted = y - 2.0 * kI * p.k_y * p.sigma0 * p.sigma0;
    return std::exp(-p.k_y * p.k_y * p.sigma0 * p.sigma0) * std::exp(-y_shifted * y_shifted / (4.0 * s));
}

CollapseOutcome collapse(const SpinorState& s, SpinBasis basis, SpinOutcome outcome) {
    const double norm = s.norm_squared();
    auto overlap = [&](int a, int b) { return s.z_overlap(a, b) * s.x_overlap(a, b); };

    double weight = 0.0;
    // Raw spatial amplitude of the selected branch (unnormalized).
    std::function<cplx(double, double)> branch;
    if (basis == SpinBasis::sigma_z) {
        const int sign = outcome == SpinOutcome::up ? +1 : -1;
        weight = overlap(sign, sign).real();
        branch = [s, sign](double X, double Z) {
            const Spinor r = s.raw(X, Z);
            return sign > 0 ? r.up : r.down;
        };
    } else {
        const double sign = outcome == SpinOutcome::up ? 1.0 : -1.0;
        weight = 0.5 * (overlap(+1, +1).real() + overlap(-1, -1).real() + 2.0 * sign * overlap(+1, -1).real());
        branch = [s, sign](double X, double Z) {
            const Spinor r = s.raw(X, Z);
            return (r.up + sign * r.down) / kSqrt2;
        };
    }

    const double probability = weight / norm;
    if (!(probability >= 1e-14)) throw NullBranchError("outcome probability below 1e-14");
    const double scale = 1.0 / std::sqrt(weight);
    return {basis, outcome, [branch, scale](double X, double Z) { return branch(X, Z) * scale; },
            std::clamp(probability, 0.0, 1.0)};
}

}  // namespace csge
