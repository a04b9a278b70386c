#pragma once

#include <optional>

namespace csge {

/// Physical description of the two consecutive Stern-Gerlach stages.
///
/// Stage 2 has field (B2 + b2 x) along x and acts for t2; stage 3 has
/// (B3 + b3 z) along z and acts for t3. Units are arbitrary but consistent.
struct PhysicalParams {
    double sigma0 = 1.0;  // initial packet width
    double m = 1.0;
    double mu_c = 1.0;  // g e hbar / 4m
    double B2 = 0.0, B3 = 0.0;
    double b2 = 0.0, b3 = 0.0;
    double t2 = 0.0, t3 = 0.0;
    double k_y = 0.0;
    double hbar = 1.0;
    std::optional<double> g;  // when both g and e are given, mu_c is cross-checked
    std::optional<double> e;

    // Throws ConfigError on a violated invariant.
    void validate() const;
};

/// The six reduced parameters that fully determine the final state.
struct DimensionlessParams {
    double tau2 = 0.0, tau3 = 0.0;
    double k2 = 0.0, k3 = 0.0;
    double x0 = 0.0, z0 = 0.0;

    double total_time() const { return tau2 + tau3; }
    void validate() const;

    friend bool operator==(const DimensionlessParams&, const DimensionlessParams&) = default;
};

DimensionlessParams dimensionless_from_physical(const PhysicalParams& p);

/// Inverse map for chosen sigma0, m, hbar, mu_c. Produces b >= 0 and B = x0 sigma0 b.
PhysicalParams physical_from_dimensionless(const DimensionlessParams& d, double sigma0 = 1.0,
                                           double m = 1.0, double hbar = 1.0, double mu_c = 1.0);

}  // namespace csge
