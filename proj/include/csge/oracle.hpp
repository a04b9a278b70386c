#pragma once

#include <array>
#include <vector>

#include "csge/correlation.hpp"
#include "csge/params.hpp"
#include "csge/state.hpp"

namespace csge {

/// Periodic grid over [x_min, x_max) x [z_min, z_max) in reduced units.
/// Point counts are powers of two; point (i, j) sits at (x_min + i dx, z_min + j dz).
struct Grid2D {
    double x_min = -20.0, x_max = 20.0;
    double z_min = -20.0, z_max = 20.0;
    int n_x = 256, n_z = 256;

    static Grid2D square(double half_width, int n);

    double dx() const { return (x_max - x_min) / n_x; }
    double dz() const { return (z_max - z_min) / n_z; }
    double x(int i) const { return x_min + i * dx(); }
    double z(int j) const { return z_min + j * dz(); }
    std::size_t size() const { return static_cast<std::size_t>(n_x) * static_cast<std::size_t>(n_z); }
    bool symmetric() const;

    // Throws ConfigError for non-power-of-two counts or empty ranges.
    void validate() const;
};

/// Spin-up and spin-down (sigma_z) amplitudes on a grid, stored row-major
/// with the z index contiguous.
struct SampledSpinor {
    Grid2D grid;
    std::vector<cplx> plus;
    std::vector<cplx> minus;
    // Discrete norm of the amplitudes before the last normalize().
    double norm = 1.0;

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * grid.n_z + j; }
    // Riemann sum of |plus|^2 + |minus|^2.
    double discrete_norm() const;
    void normalize();
    // Largest |amplitude| on the outermost rows and columns relative to the peak.
    double boundary_leak() const;
};

// Smallest power-of-two square grid that holds the final state with a
// boundary leak below 1e-8 and the momentum content below Nyquist.
Grid2D suggest_grid(const DimensionlessParams& params, Z0PhaseExponent exponent = default_z0_phase_exponent());

/// Samples the closed-form final state and renormalizes on the grid.
/// Throws GridTooSmallError when the grid cuts the state or undersamples it.
SampledSpinor sample_state(const DimensionlessParams& params, const Grid2D& grid,
                           Z0PhaseExponent exponent = default_z0_phase_exponent());

/// exp(-(X^2 + Z^2)/4) |up_z>, normalized on the grid.
SampledSpinor initial_state(const Grid2D& grid);

/// The closed-form state after the first apparatus, sampled at
/// (x, z) = sigma0 (X, Z), y = 0, rotated to the sigma_z basis and normalized.
SampledSpinor sample_intermediate_state(const PhysicalParams& p, const Grid2D& grid);

enum class Stage { H2, H3 };

/// Strang-split propagation under the stage Hamiltonian for its interaction
/// time. Kinetic steps are exact in Fourier space; the potential half steps
/// are exact spin rotations. Throws UnstableStepError on norm drift > 1e-6.
SampledSpinor split_operator_evolve(const SampledSpinor& initial, Stage stage, const PhysicalParams& p, int steps);

// |<a|b>|^2 / (<a|a><b|b>); both on the same grid.
double fidelity(const SampledSpinor& a, const SampledSpinor& b);

/// Displaced-parity correlation by direct quadrature on a sampled state.
///
/// The reflected amplitudes are transformed once; each point then costs one
/// spectral shift per spin component. Needs a grid symmetric about the origin.
class ParityQuadrature {
public:
    explicit ParityQuadrature(const SampledSpinor& state);
    ParityQuadrature(const ParityQuadrature&) = delete;
    ParityQuadrature& operator=(const ParityQuadrature&) = delete;

    // Throws GridTooSmallError when the reflected state would wrap into
    // the support of the original.
    double operator()(const PhaseSpacePoint& pt) const;

    // Half extents of the region holding amplitudes above 1e-8 of the peak.
    double support_x() const { return support_x_; }
    double support_z() const { return support_z_; }

private:
    SampledSpinor state_;
    std::array<std::vector<cplx>, 2> reflected_spectrum_;
    std::vector<double> kx_, kz_;
    double support_x_ = 0.0;
    double support_z_ = 0.0;
};

double parity_correlation_numeric(const PhaseSpacePoint& pt, const SampledSpinor& s);

/// Von Neumann entropy (base 2) of the spin of a single apparatus after
/// reduced time tau with reduced gradient k.
double entanglement_entropy(double tau, double k);

/// Same measure for the final two-apparatus state, built from the psi_+/psi_- Gram matrix.
double entanglement_entropy_csge(const DimensionlessParams& params,
                                 Z0PhaseExponent exponent = default_z0_phase_exponent());

// Entropy of rho = G / tr G for a 2x2 Gram matrix.
double entropy_from_gram(const std::array<std::array<cplx, 2>, 2>& gram);

}  // namespace csge
