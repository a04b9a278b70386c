#include "csge/params.hpp"

#include <cmath>
#include <string>

#include "csge/error.hpp"

namespace csge {
namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

bool finite_all(std::initializer_list<double> xs) {
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

double reduced_gradient(const PhysicalParams& p, double b) {
    return std::sqrt(2.0) * p.sigma0 * std::cbrt(p.m * p.mu_c * b / (2.0 * p.hbar * p.hbar));
}

double reduced_offset(const PhysicalParams& p, double B, double b, const char* name) {
    if (b == 0.0) {
        if (B != 0.0) throw OffsetUndefinedError(std::string(name) + " has zero gradient but nonzero homogeneous field");
        return 0.0;
    }
    return B / (p.sigma0 * b);
}

}  // namespace

void PhysicalParams::validate() const {
    require(finite_all({sigma0, m, mu_c, B2, B3, b2, b3, t2, t3, k_y, hbar}), "physical parameters must be finite");
    require(sigma0 > 0.0, "sigma0 must be positive");
    require(m > 0.0, "m must be positive");
    require(hbar > 0.0, "hbar must be positive");
    require(t2 >= 0.0 && t3 >= 0.0, "interaction times must be non-negative");
    require(b2 >= 0.0 && b3 >= 0.0, "field gradients must be non-negative");
    require(mu_c >= 0.0, "mu_c must be non-negative");
    if (g && e) {
        const double expected = *g * *e * hbar / (4.0 * m);
        const double rel = std::abs(mu_c - expected) / std::max(std::abs(expected), 1e-300);
        require(rel < 1e-12, "mu_c inconsistent with g e hbar / 4m");
    }
}

void DimensionlessParams::validate() const {
    require(finite_all({tau2, tau3, k2, k3, x0, z0}), "dimensionless parameters must be finite");
    require(tau2 >= 0.0 && tau3 >= 0.0, "tau2, tau3 must be non-negative");
    require(k2 >= 0.0 && k3 >= 0.0, "k2, k3 must be non-negative");
}

DimensionlessParams dimensionless_from_physical(const PhysicalParams& p) {
    p.validate();
    DimensionlessParams d;
    const double time_unit = 2.0 * p.m * p.sigma0 * p.sigma0 / p.hbar;
    d.tau2 = p.t2 / time_unit;
    d.tau3 = p.t3 / time_unit;
    d.k2 = reduced_gradient(p, p.b2);
    d.k3 = reduced_gradient(p, p.b3);
    d.x0 = reduced_offset(p, p.B2, p.b2, "B2");
    d.z0 = reduced_offset(p, p.B3, p.b3, "B3");
    return d;
}

PhysicalParams physical_from_dimensionless(const DimensionlessParams& d, double sigma0, double m, double hbar,
                                           double mu_c) {
    d.validate();
    if (!(sigma0 > 0.0 && m > 0.0 && hbar > 0.0 && mu_c > 0.0))
        throw ConfigError("sigma0, m, hbar, mu_c must be positive for the inverse map");
    PhysicalParams p;
    p.sigma0 = sigma0;
    p.m = m;
    p.hbar = hbar;
    p.mu_c = mu_c;
    const double time_unit = 2.0 * m * sigma0 * sigma0 / hbar;
    p.t2 = d.tau2 * time_unit;
    p.t3 = d.tau3 * time_unit;
    // k = sqrt2 sigma0 (m mu b / 2 hbar^2)^(1/3)  =>  b = 2 hbar^2 (k / (sqrt2 sigma0))^3 / (m mu)
    auto gradient = [&](double k) {
        const double r = k / (std::sqrt(2.0) * sigma0);
        return 2.0 * hbar * hbar * r * r * r / (m * mu_c);
    };
    p.b2 = gradient(d.k2);
    p.b3 = gradient(d.k3);
    p.B2 = d.x0 * sigma0 * p.b2;
    p.B3 = d.z0 * sigma0 * p.b3;
    return p;
}

}  // namespace csge
