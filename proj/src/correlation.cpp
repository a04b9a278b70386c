#include "csge/correlation.hpp"

#include <cmath>
#include <numbers>

namespace csge {
namespace {

const double kSqrt2 = std::sqrt(2.0);

double pow6(double k) {
    const double k3 = k * k * k;
    return k3 * k3;
}

// Quadratic phase-space form shared by w'_x and w'_z.
double phase_space_quadratic(double q, double p, double T) {
    return -2.0 * (1.0 + T * T) * p * p - 0.5 * q * q + 2.0 * T * q * p;
}

CorrelationComponents derived_components(const PhaseSpacePoint& pt, const DimensionlessParams& prm,
                                         Z0PhaseExponent z0_phase) {
    const double t2 = prm.tau2, t3 = prm.tau3, T = prm.total_time();
    const double k2c = prm.k2 * prm.k2 * prm.k2, k3c = prm.k3 * prm.k3 * prm.k3;
    const double k2s = pow6(prm.k2), k3s = pow6(prm.k3);
    const double k3_phase = z0_phase == Z0PhaseExponent::cubed ? k3c : prm.k3 * prm.k3;

    CorrelationComponents c;
    c.w_x = -0.5 * k2s * t2 * t2 * (t2 * t2 + 4.0);
    c.w_z = -0.5 * k3s * t3 * t3 * (4.0 * t2 * t2 + 4.0 * t2 * t3 + t3 * t3 + 4.0);
    c.w_prime_x = phase_space_quadratic(pt.X, pt.P_x, T) + c.w_x;
    c.w_prime_z = phase_space_quadratic(pt.Z, pt.P_z, T) + c.w_z;
    c.d_x = kSqrt2 * k2c * t2 * t2 * pt.X - kSqrt2 * k2c * t2 * (2.0 * t2 * t2 + 2.0 * t2 * t3 + 4.0) * pt.P_x;
    c.d_z = kSqrt2 * k3c * t3 * (2.0 * t2 + t3) * pt.Z -
            kSqrt2 * k3c * t3 * (4.0 * t2 * t2 + 6.0 * t2 * t3 + 2.0 * t3 * t3 + 4.0) * pt.P_z;
    c.delta_x = 2.0 * kSqrt2 * k2c * t2 * pt.X - kSqrt2 * k2c * t2 * (2.0 * t2 + 4.0 * t3) * pt.P_x +
                2.0 * kSqrt2 * k2c * t2 * prm.x0;
    c.delta_z = 2.0 * kSqrt2 * k3c * t3 * pt.Z - 2.0 * kSqrt2 * k3c * t3 * t3 * pt.P_z +
                2.0 * kSqrt2 * k3_phase * t3 * prm.z0;
    return c;
}

CorrelationComponents printed_components(const PhaseSpacePoint& pt, const DimensionlessParams& prm,
                                         const CorrelationOptions& opt) {
    const double t2 = prm.tau2, t3 = prm.tau3, T = prm.total_time();
    const double T2 = T * T;
    const double D = 1.0 + T2;
    const double X = pt.X, Z = pt.Z, Px = pt.P_x, Pz = pt.P_z;
    const double k2c = prm.k2 * prm.k2 * prm.k2, k3c = prm.k3 * prm.k3 * prm.k3;
    const double k2s = pow6(prm.k2), k3s = pow6(prm.k3);
    const double k3_phase = opt.z0_phase == Z0PhaseExponent::cubed ? k3c : prm.k3 * prm.k3;
    const double join = opt.wpx_join == WpxJoin::plus ? 1.0 : -1.0;
    const double inv4D = 1.0 / (4.0 * D);

    CorrelationComponents c;
    c.w_prime_z = inv4D * (-T2 * (Z * Z + 2.0 * k3s * std::pow(t3, 4))) - 2.0 * k3s * t3 * t3 * D +
                  2.0 * k3s * std::pow(t3, 3) * T - 2.0 * D * Pz * Pz - 0.25 * Z * Z + 2.0 * Pz * Z * T -
                  inv4D * (Z * Z + 2.0 * k3s * std::pow(t3, 4)) - 4.0 * k3s * t3 * t3;

    c.w_prime_x =
        inv4D * (-T2 * (X * X + 2.0 * k2s * std::pow(t2, 4)) -
                 8.0 * k2s * t2 * t2 *
                     (4.0 * std::pow(1.0 + t2 * t2, 2) - 2.0 * t3 * t3 * (1.0 - t2 * t2) + 4.0 * t2 * t3 * (1.0 + t2 * t2)) +
                 8.0 * k2s * std::pow(t2, 3) * (4.0 * T - 2.0 * t2 * (1.0 - T2))) -
        2.0 * D * Px * Px - 0.25 * X * X + 2.0 * X * Px * T -
        inv4D * (X * X + 2.0 * k2s * std::pow(t2, 4) - 8.0 * k2s * t2 * t2 * (2.0 * (1.0 + t2 * t2) + 4.0 * t2 * t3) +
                 join * 16.0 * k2c * std::pow(t2, 3) * t3);

    c.w_z = -0.5 * k3s * std::pow(t3, 4) - 2.0 * k3s * t3 * t3 * D + 2.0 * T * k3s * std::pow(t3, 3);
    c.w_x = -0.5 * k2s * std::pow(t2, 4) - 2.0 * k2s * t2 * t2;

    c.d_z = inv4D * (-2.0 * kSqrt2 * k3c * t3 * t3 * T2 * Z) + kSqrt2 * k3c * t3 * T * Z -
            k3c * t3 * t3 * Z / kSqrt2 + kSqrt2 * k3c * t3 * T * Z - inv4D * (2.0 * kSqrt2 * k3c * t3 * t3 * Z) +
            Pz * (-4.0 * kSqrt2 * k3c * t3 + T * (2.0 * kSqrt2 * k3c * t3 * t3 - 4.0 * kSqrt2 * k3c * t3 * T));

    c.d_x = inv4D * (-2.0 * kSqrt2 * k2c * t2 * t2 * T2 * X +
                     2.0 * kSqrt2 * k2c * t2 * X * (4.0 * T - 2.0 * t2 * (1.0 - T2))) -
            k2c * t2 * t2 * X / kSqrt2 +
            Px * (2.0 * kSqrt2 * k2c * t2 * t2 * T - 4.0 * kSqrt2 * k2c * t2 * (1.0 + t2 * t2 + t2 * t3)) -
            inv4D * (2.0 * kSqrt2 * k2c * t2 * t2 * X + 8.0 * kSqrt2 * k2c * t2 * t3 * X);

    c.delta_z = -Pz * 2.0 * kSqrt2 * k3c * t3 * t3 + 2.0 * kSqrt2 * k3c * t3 * Z + 2.0 * kSqrt2 * k3_phase * t3 * prm.z0;

    c.delta_x = inv4D * (2.0 * kSqrt2 * k2c * t2 * X * (2.0 - 2.0 * T2 + 4.0 * t2 * T)) + kSqrt2 * k2c * t2 * X -
                Px * (2.0 * kSqrt2 * k2c * t2 * t2 + 4.0 * kSqrt2 * k2c * t2 * t3) -
                inv4D * (-4.0 * kSqrt2 * k2c * t2 * X * (2.0 + 2.0 * t2 * T)) + 2.0 * kSqrt2 * k2c * t2 * prm.x0;
    return c;
}

}  // namespace

PhaseSpacePoint PhaseSpacePoint::canonical() const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    PhaseSpacePoint p = *this;
    p.theta = std::fmod(theta, two_pi);
    if (p.theta < 0.0) p.theta += two_pi;
    if (p.theta >= two_pi) p.theta = 0.0;
    return p;
}

CorrelationComponents components(const PhaseSpacePoint& pt, const DimensionlessParams& params,
                                 const CorrelationOptions& options) {
    params.validate();
    return options.source == ComponentSource::derived ? derived_components(pt, params, options.z0_phase)
                                                      : printed_components(pt, params, options);
}

// Every product exp(a) cosh(d) ... is expanded into single exponentials so
// that large |d| cannot overflow before the Gaussian envelope suppresses it.
double assemble(const CorrelationComponents& c, double theta) {
    const double base = c.w_prime_z + c.w_prime_x;
    const double ez = base + c.w_z;
    const double oz = base - c.w_z;

    // exp(e + w_x) cosh(d_x) sinh(d_z)
    const double a = ez + c.w_x;
    const double cosh_sinh = 0.25 * (std::exp(a + c.d_x + c.d_z) - std::exp(a + c.d_x - c.d_z) +
                                     std::exp(a - c.d_x + c.d_z) - std::exp(a - c.d_x - c.d_z));
    // exp(e - w_x) cos(delta_x) cosh(d_z)
    const double b = ez - c.w_x;
    const double cos_cosh = 0.5 * std::cos(c.delta_x) * (std::exp(b + c.d_z) + std::exp(b - c.d_z));
    // exp(o + w_x) sinh(d_x) cos(delta_z)
    const double a2 = oz + c.w_x;
    const double sinh_cos = 0.5 * std::cos(c.delta_z) * (std::exp(a2 + c.d_x) - std::exp(a2 - c.d_x));
    // exp(o - w_x) sin(delta_x) sin(delta_z)
    const double sin_sin = std::exp(oz - c.w_x) * std::sin(c.delta_x) * std::sin(c.delta_z);

    return 4.0 * std::cos(theta) * (cosh_sinh + cos_cosh) + 4.0 * std::sin(theta) * (sinh_cos + sin_sin);
}

double correlation(const PhaseSpacePoint& pt, const DimensionlessParams& params, const CorrelationOptions& options) {
    return kCorrelationNormalization * assemble(components(pt, params, options), pt.theta);
}

}  // namespace csge
