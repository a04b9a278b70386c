#pragma once

#include <complex>
#include <functional>
#include <memory>

#include "csge/params.hpp"

namespace csge {

using cplx = std::complex<double>;

enum class NormMode { analytic_M, numeric_renorm };

// Exponent of k3 in the z0 phase exp(-/+ i sqrt2 k3^n tau3 z0). The cubed
// form is the one consistent with the reduced variables; the squared form is
// kept for comparison.
enum class Z0PhaseExponent { cubed, squared };

constexpr Z0PhaseExponent default_z0_phase_exponent() {
#ifdef CSGE_Z0_PHASE_K3_SQUARED
    return Z0PhaseExponent::squared;
#else
    return Z0PhaseExponent::cubed;
#endif
}

// Coefficients of |up> and |down> in some spin basis.
struct Spinor {
    cplx up;
    cplx down;
};

/// Complex Gaussian geometry of the final state.
///
/// Every spatial factor is exp(-(u + c)^2 / (4a)) with a = 1 + i(tau2 + tau3)
/// and a complex centre c. The x branches use c = +/- x_center, the z branches
/// c = +/- z_center; x_phase and z_phase are the Larmor phases from the
/// homogeneous fields.
struct BranchGeometry {
    cplx width;
    cplx x_center;
    cplx z_center;
    double x_phase = 0.0;
    double z_phase = 0.0;

    static BranchGeometry from(const DimensionlessParams& p, Z0PhaseExponent exponent);

    // Half-width of a square domain outside which every branch density is
    // below ~1e-20 of its peak.
    double domain_half_width() const;
    // Upper bound on |d phase / du| of any branch over [-half_width, half_width].
    double wavenumber_bound(double half_width) const;
};

// exp(-(u + c)^2 / (4a) - Im(c)^2 / 4): the Gaussian factor rescaled so that
// its squared L2 norm is sqrt(2 pi |a|^2) for every centre.
cplx scaled_gaussian(double u, cplx c, cplx a);

/// The final CSGE state psi_+ |up_z> + psi_- |down_z> on the (X, Z) plane.
///
/// The spectator y factor is integrated out. Raw amplitudes follow the closed
/// form up to a constant; normalization is either the analytic (X, Z)
/// constant or a lazily computed numeric quadrature.
class SpinorState {
public:
    explicit SpinorState(const DimensionlessParams& params, NormMode mode = NormMode::numeric_renorm,
                         Z0PhaseExponent exponent = default_z0_phase_exponent());

    const DimensionlessParams& params() const { return params_; }
    NormMode norm_mode() const { return mode_; }
    Z0PhaseExponent z0_phase_exponent() const { return exponent_; }
    const BranchGeometry& geometry() const { return geometry_; }

    // exp(-/+ i phi_z) G(Z +/- c_z) for sign = +1 / -1.
    cplx z_factor(int sign, double Z) const;
    // exp(-i phi_x) G(X + c_x) +/- exp(i phi_x) G(X - c_x).
    cplx x_factor(int sign, double X) const;

    Spinor raw(double X, double Z) const;

    // Squared norm of the raw amplitudes under the active NormMode.
    double norm_squared() const;
    double analytic_norm_squared() const;
    // Computed once; safe to call concurrently.
    double numeric_norm_squared() const;

    // Points and extent used for the 1-D quadratures behind the numeric norm.
    double domain_half_width() const { return geometry_.domain_half_width(); }
    int quadrature_points() const;

    // <f_s | f_t> and <g_s | g_t> for the raw branch factors.
    cplx z_overlap(int s, int t) const;
    cplx x_overlap(int s, int t) const;

private:
    struct Cache;

    DimensionlessParams params_;
    NormMode mode_;
    Z0PhaseExponent exponent_;
    BranchGeometry geometry_;
    std::shared_ptr<Cache> cache_;
};

/// Normalized (psi_+, psi_-) at (X, Z).
Spinor psi_pm(double X, double Z, const SpinorState& s);

double probability_density(double X, double Z, const SpinorState& s);

/// State after the first apparatus only, at physical (x, y, z), as
/// coefficients of |up_x> and |down_x>.
Spinor intermediate_state(double x, double y, double z, const PhysicalParams& p);

/// Spectator y factor of the final state (physical units).
cplx spectator_y_factor(double y, const PhysicalParams& p);

enum class SpinBasis { sigma_z, sigma_x };
enum class SpinOutcome { up, down };

struct CollapseOutcome {
    SpinBasis basis;
    SpinOutcome outcome;
    // Renormalized post-measurement spatial amplitude over (X, Z).
    std::function<cplx(double, double)> amplitude;
    double probability;
};

CollapseOutcome collapse(const SpinorState& s, SpinBasis basis, SpinOutcome outcome);

}  // namespace csge
