#include "csge/oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "csge/error.hpp"
#include "csge/quadrature.hpp"

namespace csge {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
const double kSqrt2 = std::sqrt(2.0);

// Planner calls are not thread safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class Fft2 {
public:
    Fft2(int n_x, int n_z) {
        std::vector<cplx> scratch(static_cast<std::size_t>(n_x) * n_z);
        auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
        std::lock_guard lock(planner_mutex());
        forward_ = fftw_plan_dft_2d(n_x, n_z, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        backward_ = fftw_plan_dft_2d(n_x, n_z, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    ~Fft2() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }
    Fft2(const Fft2&) = delete;
    Fft2& operator=(const Fft2&) = delete;

    void forward(std::vector<cplx>& v) const { run(forward_, v); }
    // Unnormalized: the caller divides by the point count.
    void backward(std::vector<cplx>& v) const { run(backward_, v); }

private:
    static void run(fftw_plan plan, std::vector<cplx>& v) {
        auto* p = reinterpret_cast<fftw_complex*>(v.data());
        fftw_execute_dft(plan, p, p);
    }

    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

// Angular wavenumbers in FFT order.
std::vector<double> wavenumbers(int n, double h) {
    std::vector<double> k(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) k[static_cast<std::size_t>(i)] = 2.0 * kPi * (i < n / 2 ? i : i - n) / (n * h);
    return k;
}

int next_pow2(double v) { return static_cast<int>(std::bit_ceil(static_cast<unsigned>(std::max(2.0, std::ceil(v))))); }

// Bandwidth needed by the final state: momentum kick plus ~6 for the
// Gaussian spectral tail (|k - k0| of 6 puts the amplitude near 1e-16).
double required_wavenumber(const BranchGeometry& g) {
    return 0.5 * std::max(std::abs(g.x_center.imag()), std::abs(g.z_center.imag())) + 6.0;
}

void same_grid(const SampledSpinor& a, const SampledSpinor& b) {
    const Grid2D& g = a.grid;
    const Grid2D& h = b.grid;
    if (g.n_x != h.n_x || g.n_z != h.n_z || g.x_min != h.x_min || g.x_max != h.x_max || g.z_min != h.z_min ||
        g.z_max != h.z_max)
        throw ConfigError("states live on different grids");
}

}  // namespace

Grid2D Grid2D::square(double half_width, int n) { return {-half_width, half_width, -half_width, half_width, n, n}; }

bool Grid2D::symmetric() const {
    const double tol = 1e-12;
    return std::abs(x_min + x_max) <= tol * std::abs(x_max) && std::abs(z_min + z_max) <= tol * std::abs(z_max);
}

void Grid2D::validate() const {
    if (!(x_max > x_min) || !(z_max > z_min) || !std::isfinite(x_max - x_min) || !std::isfinite(z_max - z_min))
        throw ConfigError("grid bounds must satisfy min < max");
    auto pow2 = [](int n) { return n >= 2 && std::has_single_bit(static_cast<unsigned>(n)); };
    if (!pow2(n_x) || !pow2(n_z)) throw ConfigError("grid point counts must be powers of two");
}

double SampledSpinor::discrete_norm() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < plus.size(); ++i) sum += std::norm(plus[i]) + std::norm(minus[i]);
    return sum * grid.dx() * grid.dz();
}

void SampledSpinor::normalize() {
    norm = discrete_norm();
    if (!(norm > 0.0)) throw NumericalError("sampled state vanishes on the grid");
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& v : plus) v *= scale;
    for (auto& v : minus) v *= scale;
}

double SampledSpinor::boundary_leak() const {
    double peak = 0.0;
    double edge = 0.0;
    for (int i = 0; i < grid.n_x; ++i) {
        for (int j = 0; j < grid.n_z; ++j) {
            const std::size_t k = index(i, j);
            const double a = std::sqrt(std::norm(plus[k]) + std::norm(minus[k]));
            peak = std::max(peak, a);
            if (i == 0 || j == 0 || i == grid.n_x - 1 || j == grid.n_z - 1) edge = std::max(edge, a);
        }
    }
    return peak > 0.0 ? edge / peak : 0.0;
}

Grid2D suggest_grid(const DimensionlessParams& params, Z0PhaseExponent exponent) {
    const BranchGeometry g = BranchGeometry::from(params, exponent);
    const double L = g.domain_half_width();
    const double h = kPi / required_wavenumber(g);
    return Grid2D::square(L, std::max(64, next_pow2(2.0 * L / h)));
}

SampledSpinor sample_state(const DimensionlessParams& params, const Grid2D& grid, Z0PhaseExponent exponent) {
    grid.validate();
    const SpinorState state(params, NormMode::analytic_M, exponent);
    const double K = required_wavenumber(state.geometry());
    const double h = std::max(grid.dx(), grid.dz());
    if (K * h > kPi) {
        const double L = std::max({-grid.x_min, grid.x_max, -grid.z_min, grid.z_max});
        throw GridTooSmallError("spacing " + std::to_string(h) + " undersamples wavenumber " + std::to_string(K), L,
                                next_pow2(2.0 * L * K / kPi));
    }

    SampledSpinor s;
    s.grid = grid;
    s.plus.resize(grid.size());
    s.minus.resize(grid.size());
    std::vector<cplx> fx_plus(grid.n_x), fx_minus(grid.n_x), fz_plus(grid.n_z), fz_minus(grid.n_z);
    for (int i = 0; i < grid.n_x; ++i) {
        fx_plus[i] = state.x_factor(+1, grid.x(i));
        fx_minus[i] = state.x_factor(-1, grid.x(i));
    }
    for (int j = 0; j < grid.n_z; ++j) {
        fz_plus[j] = state.z_factor(+1, grid.z(j));
        fz_minus[j] = state.z_factor(-1, grid.z(j));
    }
    for (int i = 0; i < grid.n_x; ++i)
        for (int j = 0; j < grid.n_z; ++j) {
            s.plus[s.index(i, j)] = fz_plus[j] * fx_plus[i];
            s.minus[s.index(i, j)] = fz_minus[j] * fx_minus[i];
        }

    const double leak = s.boundary_leak();
    if (leak >= 1e-8) {
        const double suggested = suggest_grid(params, exponent).x_max;
        throw GridTooSmallError("boundary amplitude " + std::to_string(leak) + " of peak", suggested);
    }
    s.normalize();
    return s;
}

SampledSpinor initial_state(const Grid2D& grid) {
    grid.validate();
    SampledSpinor s;
    s.grid = grid;
    s.plus.resize(grid.size());
    s.minus.assign(grid.size(), cplx{});
    for (int i = 0; i < grid.n_x; ++i)
        for (int j = 0; j < grid.n_z; ++j) {
            const double X = grid.x(i);
            const double Z = grid.z(j);
            s.plus[s.index(i, j)] = std::exp(-0.25 * (X * X + Z * Z));
        }
    s.normalize();
    return s;
}

SampledSpinor sample_intermediate_state(const PhysicalParams& p, const Grid2D& grid) {
    grid.validate();
    SampledSpinor s;
    s.grid = grid;
    s.plus.resize(grid.size());
    s.minus.resize(grid.size());
    for (int i = 0; i < grid.n_x; ++i)
        for (int j = 0; j < grid.n_z; ++j) {
            const Spinor v = intermediate_state(p.sigma0 * grid.x(i), 0.0, p.sigma0 * grid.z(j), p);
            s.plus[s.index(i, j)] = (v.up + v.down) / kSqrt2;
            s.minus[s.index(i, j)] = (v.up - v.down) / kSqrt2;
        }
    s.normalize();
    return s;
}

SampledSpinor split_operator_evolve(const SampledSpinor& initial, Stage stage, const PhysicalParams& p, int steps) {
    if (steps < 1) throw ConfigError("split-operator propagation needs at least one step");
    const DimensionlessParams d = dimensionless_from_physical(p);
    const Grid2D& grid = initial.grid;
    grid.validate();

    const bool x_stage = stage == Stage::H2;
    const double tau = x_stage ? d.tau2 : d.tau3;
    const double k = x_stage ? d.k2 : d.k3;
    const double offset = x_stage ? d.x0 : d.z0;
    const double coupling = kSqrt2 * k * k * k;
    const double dt = tau / steps;

    SampledSpinor s = initial;
    if (tau == 0.0) return s;
    const double norm_before = s.discrete_norm();

    const std::vector<double> kx = wavenumbers(grid.n_x, grid.dx());
    const std::vector<double> kz = wavenumbers(grid.n_z, grid.dz());
    std::vector<cplx> kinetic(grid.size());
    for (int i = 0; i < grid.n_x; ++i)
        for (int j = 0; j < grid.n_z; ++j)
            kinetic[s.index(i, j)] = std::exp(-kI * dt * (kx[i] * kx[i] + kz[j] * kz[j])) / static_cast<double>(grid.size());

    // exp(-i v sigma) for v = coupling (u + offset) dt / 2 along the stage axis.
    const int n_axis = x_stage ? grid.n_x : grid.n_z;
    std::vector<double> cos_v(n_axis), sin_v(n_axis);
    for (int a = 0; a < n_axis; ++a) {
        const double u = x_stage ? grid.x(a) : grid.z(a);
        const double v = 0.5 * coupling * (u + offset) * dt;
        cos_v[a] = std::cos(v);
        sin_v[a] = std::sin(v);
    }
    auto potential_half_step = [&] {
        for (int i = 0; i < grid.n_x; ++i)
            for (int j = 0; j < grid.n_z; ++j) {
                const std::size_t idx = s.index(i, j);
                const int a = x_stage ? i : j;
                const cplx up = s.plus[idx];
                const cplx down = s.minus[idx];
                if (x_stage) {
                    s.plus[idx] = cos_v[a] * up - kI * sin_v[a] * down;
                    s.minus[idx] = cos_v[a] * down - kI * sin_v[a] * up;
                } else {
                    s.plus[idx] = cplx(cos_v[a], -sin_v[a]) * up;
                    s.minus[idx] = cplx(cos_v[a], sin_v[a]) * down;
                }
            }
    };

    const Fft2 fft(grid.n_x, grid.n_z);
    for (int n = 0; n < steps; ++n) {
        potential_half_step();
        for (auto* comp : {&s.plus, &s.minus}) {
            fft.forward(*comp);
            for (std::size_t idx = 0; idx < comp->size(); ++idx) (*comp)[idx] *= kinetic[idx];
            fft.backward(*comp);
        }
        potential_half_step();
    }

    const double norm_after = s.discrete_norm();
    const double drift = std::abs(norm_after - norm_before) / norm_before;
    if (!(drift <= 1e-6))
        throw UnstableStepError("norm drift " + std::to_string(drift) + " over " + std::to_string(steps) + " steps",
                                2 * steps);
    s.norm = norm_after;
    return s;
}

double fidelity(const SampledSpinor& a, const SampledSpinor& b) {
    same_grid(a, b);
    cplx overlap{};
    double na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.plus.size(); ++i) {
        overlap += std::conj(a.plus[i]) * b.plus[i] + std::conj(a.minus[i]) * b.minus[i];
        na += std::norm(a.plus[i]) + std::norm(a.minus[i]);
        nb += std::norm(b.plus[i]) + std::norm(b.minus[i]);
    }
    return std::norm(overlap) / (na * nb);
}

ParityQuadrature::ParityQuadrature(const SampledSpinor& state) : state_(state) {
    const Grid2D& g = state_.grid;
    g.validate();
    if (!g.symmetric()) throw ConfigError("parity quadrature needs a grid symmetric about the origin");
    kx_ = wavenumbers(g.n_x, g.dx());
    kz_ = wavenumbers(g.n_z, g.dz());

    double peak = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        peak = std::max(peak, std::norm(state_.plus[i]) + std::norm(state_.minus[i]));
    for (int i = 0; i < g.n_x; ++i)
        for (int j = 0; j < g.n_z; ++j) {
            const std::size_t idx = state_.index(i, j);
            if (std::norm(state_.plus[idx]) + std::norm(state_.minus[idx]) > 1e-16 * peak) {
                support_x_ = std::max(support_x_, std::abs(g.x(i)));
                support_z_ = std::max(support_z_, std::abs(g.z(j)));
            }
        }

    // Point i sits at -x_i's mirror index (n - i) mod n on a symmetric periodic grid.
    const Fft2 fft(g.n_x, g.n_z);
    const std::array<const std::vector<cplx>*, 2> comps{&state_.plus, &state_.minus};
    for (int c = 0; c < 2; ++c) {
        std::vector<cplx> r(g.size());
        for (int i = 0; i < g.n_x; ++i)
            for (int j = 0; j < g.n_z; ++j)
                r[state_.index(i, j)] = (*comps[c])[state_.index((g.n_x - i) % g.n_x, (g.n_z - j) % g.n_z)];
        fft.forward(r);
        reflected_spectrum_[c] = std::move(r);
    }
}

double ParityQuadrature::operator()(const PhaseSpacePoint& pt) const {
    const Grid2D& g = state_.grid;
    if (std::abs(pt.X) + support_x_ > g.x_max || std::abs(pt.Z) + support_z_ > g.z_max) {
        const double need = std::max(std::abs(pt.X) + support_x_, std::abs(pt.Z) + support_z_);
        throw GridTooSmallError("reflection about (" + std::to_string(pt.X) + ", " + std::to_string(pt.Z) +
                                    ") leaves the grid",
                                need);
    }

    // mirrored[c](Y, W) = psi_c(2X - Y, 2Z - W): the reflected array shifted by (2X, 2Z).
    const Fft2 fft(g.n_x, g.n_z);
    std::array<std::vector<cplx>, 2> mirrored;
    for (int c = 0; c < 2; ++c) {
        std::vector<cplx> v = reflected_spectrum_[c];
        for (int i = 0; i < g.n_x; ++i) {
            const cplx sx = std::exp(-kI * 2.0 * kx_[i] * pt.X);
            for (int j = 0; j < g.n_z; ++j) v[state_.index(i, j)] *= sx * std::exp(-kI * 2.0 * kz_[j] * pt.Z);
        }
        fft.backward(v);
        mirrored[c] = std::move(v);
    }

    std::vector<cplx> phase_z(g.n_z);
    for (int j = 0; j < g.n_z; ++j) phase_z[j] = std::exp(-2.0 * kI * pt.P_z * (g.z(j) - pt.Z));
    std::array<std::array<cplx, 2>, 2> pi{};
    const std::array<const std::vector<cplx>*, 2> comps{&state_.plus, &state_.minus};
    for (int i = 0; i < g.n_x; ++i) {
        const cplx phase_x = std::exp(-2.0 * kI * pt.P_x * (g.x(i) - pt.X));
        for (int j = 0; j < g.n_z; ++j) {
            const std::size_t idx = state_.index(i, j);
            const cplx w = phase_x * phase_z[j];
            for (int s = 0; s < 2; ++s)
                for (int t = 0; t < 2; ++t) pi[s][t] += std::conj(mirrored[s][idx]) * (*comps[t])[idx] * w;
        }
    }
    const double scale = g.dx() * g.dz() / static_cast<double>(g.size()) / state_.discrete_norm();
    const cplx value =
        std::cos(pt.theta) * (pi[0][0] - pi[1][1]) + std::sin(pt.theta) * (pi[0][1] + pi[1][0]);
    return value.real() * scale;
}

double parity_correlation_numeric(const PhaseSpacePoint& pt, const SampledSpinor& s) {
    return ParityQuadrature(s)(pt);
}

double entropy_from_gram(const std::array<std::array<cplx, 2>, 2>& gram) {
    const double trace = gram[0][0].real() + gram[1][1].real();
    if (!(trace > 0.0)) throw NumericalError("Gram matrix has zero trace");
    const double diff = (gram[0][0].real() - gram[1][1].real()) / trace;
    const double off = std::abs(0.5 * (gram[0][1] + std::conj(gram[1][0]))) / trace;
    const double r = std::sqrt(diff * diff + 4.0 * off * off);
    double entropy = 0.0;
    for (double lambda : {0.5 * (1.0 + r), 0.5 * (1.0 - r)}) {
        if (lambda < -1e-14 || lambda > 1.0 + 1e-14) throw NumericalError("density eigenvalue outside [0, 1]");
        lambda = std::clamp(lambda, 0.0, 1.0);
        if (lambda > 1e-14) entropy -= lambda * std::log2(lambda);
    }
    return std::clamp(entropy, 0.0, 1.0);
}

double entanglement_entropy(double tau, double k) {
    if (!(tau >= 0.0) || !(k >= 0.0) || !std::isfinite(tau) || !std::isfinite(k))
        throw ConfigError("entropy needs tau >= 0 and k >= 0");
    const cplx a(1.0, tau);
    const double k3 = k * k * k;
    const cplx c = kSqrt2 * k3 * tau * tau + 2.0 * kI * kSqrt2 * k3 * tau * a;
    const double centre = std::abs(c.real() + tau * c.imag());
    const double L = std::max(20.0, centre + 10.0 * std::abs(a));
    const double h = std::min(0.1, kPi / (std::abs(c.imag()) + 12.0));
    const int n = static_cast<int>(std::ceil(2.0 * L / h)) + 1;

    const std::array<cplx, 2> centres{c, -c};
    std::array<std::array<cplx, 2>, 2> gram{};
    for (int s = 0; s < 2; ++s)
        for (int t = s; t < 2; ++t) {
            gram[s][t] = trapezoid(
                [&](double u) { return std::conj(scaled_gaussian(u, centres[s], a)) * scaled_gaussian(u, centres[t], a); },
                -L, L, n);
            gram[t][s] = std::conj(gram[s][t]);
        }
    return entropy_from_gram(gram);
}

double entanglement_entropy_csge(const DimensionlessParams& params, Z0PhaseExponent exponent) {
    const SpinorState state(params, NormMode::numeric_renorm, exponent);
    std::array<std::array<cplx, 2>, 2> gram{};
    const std::array<int, 2> sign{+1, -1};
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t)
            gram[s][t] = state.z_overlap(sign[s], sign[t]) * state.x_overlap(sign[s], sign[t]);
    return entropy_from_gram(gram);
}

}  // namespace csge
