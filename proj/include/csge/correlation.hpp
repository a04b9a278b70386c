#pragma once

#include "csge/params.hpp"
#include "csge/state.hpp"

namespace csge {

/// Arguments of the hybrid correlation function. Momenta are reduced,
/// P = p sigma0 / hbar.
struct PhaseSpacePoint {
    double X = 0.0;
    double P_x = 0.0;
    double Z = 0.0;
    double P_z = 0.0;
    double theta = 0.0;

    // Same point with theta reduced to [0, 2 pi).
    PhaseSpacePoint canonical() const;
};

/// The eight real functions in the exponential/hyperbolic/trigonometric
/// assembly of the correlation. w_z and w_x depend on the parameters only.
struct CorrelationComponents {
    double w_prime_z = 0.0;
    double w_prime_x = 0.0;
    double w_z = 0.0;
    double w_x = 0.0;
    double d_z = 0.0;
    double d_x = 0.0;
    double delta_z = 0.0;
    double delta_x = 0.0;
};

// derived: components obtained from the Gaussian displaced-parity integrals
// of the final state; they reproduce the brute-force parity expectation.
// printed: the alternative closed-form auxiliary functions, term by term. d_x and delta_x
// differ from the derived ones in their X coefficients, so this set is a
// diagnostic and does not give a parity expectation.
enum class ComponentSource { derived, printed };

// Sign of the point-independent "16 k2^3 tau2^3 tau3" term in the printed w'_x.
enum class WpxJoin { plus, minus };

struct CorrelationOptions {
    ComponentSource source = ComponentSource::derived;
    WpxJoin wpx_join = WpxJoin::plus;
    Z0PhaseExponent z0_phase = default_z0_phase_exponent();
};

CorrelationComponents components(const PhaseSpacePoint& pt, const DimensionlessParams& params,
                                 const CorrelationOptions& options = {});

/// The un-normalized assembly, including its overall factor 4.
double assemble(const CorrelationComponents& c, double theta);

/// <Pi_x(X, P_x) Pi_z(Z, P_z) sigma(theta)> on the normalized final state,
/// where Pi are displaced parity operators and
/// sigma(theta) = cos(theta) sigma_z + sin(theta) sigma_x. Bounded by 1 in
/// magnitude for the derived components.
double correlation(const PhaseSpacePoint& pt, const DimensionlessParams& params,
                   const CorrelationOptions& options = {});

// Ratio between correlation() and assemble(): the generalized Wigner
// operator of each continuous degree of freedom is twice a displaced parity.
inline constexpr double kCorrelationNormalization = 0.25;

}  // namespace csge
