#include "doctest.h"

#include <cmath>
#include <numbers>

#include "csge/correlation.hpp"
#include "csge/error.hpp"
#include "csge/oracle.hpp"
#include "oracle_values.hpp"

using namespace csge;

namespace {

constexpr double kPi = std::numbers::pi;
const DimensionlessParams kReference{6.8, 2.6, 0.3, 0.3, 4.0, 4.0};

double second_moment_x(const SampledSpinor& s) {
    double m = 0.0;
    for (int i = 0; i < s.grid.n_x; ++i)
        for (int j = 0; j < s.grid.n_z; ++j) {
            const std::size_t k = s.index(i, j);
            m += s.grid.x(i) * s.grid.x(i) * (std::norm(s.plus[k]) + std::norm(s.minus[k]));
        }
    return m * s.grid.dx() * s.grid.dz() / s.discrete_norm();
}

struct Propagated {
    DimensionlessParams params;
    Grid2D grid;
    SampledSpinor initial, after_h2, final_state;
};

// H2 then H3 from the initial packet; shared by several cases.
const Propagated& propagated(const DimensionlessParams& d) {
    static std::vector<std::unique_ptr<Propagated>> cache;
    for (const auto& p : cache)
        if (p->params == d) return *p;
    auto p = std::make_unique<Propagated>();
    p->params = d;
    p->grid = suggest_grid(d);
    const PhysicalParams phys = physical_from_dimensionless(d);
    p->initial = initial_state(p->grid);
    p->after_h2 = split_operator_evolve(p->initial, Stage::H2, phys, 1000);
    p->final_state = split_operator_evolve(p->after_h2, Stage::H3, phys, 1000);
    cache.push_back(std::move(p));
    return *cache.back();
}

}  // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS((Grid2D{-1, 1, -1, 1, 100, 128}.validate()), ConfigError);
    CHECK_THROWS_AS((Grid2D{1, -1, -1, 1, 128, 128}.validate()), ConfigError);
    CHECK_NOTHROW((Grid2D{-1, 1, -2, 2, 64, 128}.validate()));
    CHECK(Grid2D::square(10, 64).symmetric());
    CHECK_FALSE((Grid2D{-1, 2, -1, 1, 64, 64}.symmetric()));
}

TEST_CASE("zero time samples the unit Gaussian") {
    const Grid2D g = Grid2D::square(20, 256);
    const SampledSpinor s = sample_state({0, 0, 0.3, 0.3, 0, 0}, g);
    CHECK(s.discrete_norm() == doctest::Approx(1.0).epsilon(1e-10));
    // Raw samples carry the analytic (X, Z) norm 8 pi.
    CHECK(s.norm == doctest::Approx(8 * kPi).epsilon(1e-10));
    for (int i : {0, 77, 128, 200})
        for (int j : {5, 128, 250}) {
            const double X = g.x(i), Z = g.z(j);
            CHECK(std::abs(s.plus[s.index(i, j)] - std::exp(-(X * X + Z * Z) / 4) / std::sqrt(2 * kPi)) < 1e-12);
            CHECK(std::abs(s.minus[s.index(i, j)]) < 1e-15);
        }
}

TEST_CASE("reference state on the suggested grid") {
    const Grid2D g = suggest_grid(kReference);
    const SampledSpinor s = sample_state(kReference, g);
    CHECK(s.boundary_leak() < 1e-10);
    CHECK(s.discrete_norm() == doctest::Approx(1.0).epsilon(1e-12));
    SUBCASE("doubling the resolution leaves the raw norm unchanged") {
        Grid2D fine = g;
        fine.n_x *= 2;
        fine.n_z *= 2;
        CHECK(std::abs(sample_state(kReference, fine).norm - s.norm) < 1e-9 * s.norm);
    }
}

TEST_CASE("grids that cut the state are rejected with a suggestion") {
    try {
        sample_state(kReference, Grid2D::square(25, 1024));
        FAIL("expected GridTooSmallError");
    } catch (const GridTooSmallError& e) {
        CHECK(e.suggested_half_width() >= suggest_grid(kReference).x_max);
    }
    try {
        sample_state(kReference, Grid2D::square(100, 64));
        FAIL("expected GridTooSmallError");
    } catch (const GridTooSmallError& e) {
        CHECK(e.suggested_points() > 64);
    }
}

TEST_CASE("zero field propagation is free spreading") {
    const Grid2D g = Grid2D::square(30, 256);
    for (double tau : {1.0, 3.0}) {
        PhysicalParams p;
        p.t2 = tau * 2.0;  // time unit 2 m sigma0^2 / hbar = 2
        const SampledSpinor s = split_operator_evolve(initial_state(g), Stage::H2, p, 1000);
        CHECK(std::sqrt(second_moment_x(s)) == doctest::Approx(std::sqrt(1 + tau * tau)).epsilon(1e-6));
        CHECK(std::abs(s.discrete_norm() - 1.0) < 1e-8);
    }
}

TEST_CASE("H2 alone reproduces the intermediate state") {
    for (DimensionlessParams d : {DimensionlessParams{3.0, 0.0, 0.5, 0.0, 4.0, 0.0}, DimensionlessParams{5.0, 0.0, 0.3, 0.0, 1.5, 0.0}}) {
        const Grid2D g = suggest_grid(d);
        const PhysicalParams p = physical_from_dimensionless(d, 1.0, 1.0, 1.0, 1.0);
        const SampledSpinor evolved = split_operator_evolve(initial_state(g), Stage::H2, p, 1000);
        CHECK(fidelity(evolved, sample_intermediate_state(p, g)) >= 0.999);
        CHECK(std::abs(evolved.discrete_norm() - 1.0) < 1e-8);
    }
}

TEST_CASE("H2 then H3 reproduces the closed-form final state") {
    const DimensionlessParams d{3.0, 2.0, 0.5, 0.5, 4.0, 4.0};
    const Propagated& p = propagated(d);
    const double f = fidelity(p.final_state, sample_state(d, p.grid));
    CHECK(f >= 0.999);
    CHECK(std::abs(p.final_state.discrete_norm() - 1.0) < 1e-8);
    SUBCASE("the k3^2 phase variant is a different state") {
        const double f2 = fidelity(p.final_state, sample_state(d, p.grid, Z0PhaseExponent::squared));
        CHECK(f2 < f);
    }
}

TEST_CASE("propagated density has the mirror symmetry and the inversion asymmetry of the closed form") {
    const DimensionlessParams d{3.0, 2.0, 0.5, 0.5, 0.0, 0.0};
    const Propagated& p = propagated(d);
    const SampledSpinor closed = sample_state(d, p.grid);
    auto measures = [](const SampledSpinor& s) {
        const Grid2D& g = s.grid;
        auto dens = [&](int i, int j) {
            const std::size_t k = s.index(i, j);
            return std::norm(s.plus[k]) + std::norm(s.minus[k]);
        };
        double mirror = 0, inversion = 0;
        for (int i = 0; i < g.n_x; ++i)
            for (int j = 0; j < g.n_z; ++j) {
                const int mi = (g.n_x - i) % g.n_x, mj = (g.n_z - j) % g.n_z;
                mirror = std::max(mirror, std::abs(dens(i, j) - dens(mi, j)));
                inversion = std::max(inversion, std::abs(dens(i, j) - dens(mi, mj)));
            }
        return std::pair{mirror, inversion};
    };
    const auto [m_prop, i_prop] = measures(p.final_state);
    const auto [m_closed, i_closed] = measures(closed);
    CHECK(m_prop < 1e-8);
    CHECK(m_closed < 1e-12);
    CHECK(i_prop == doctest::Approx(i_closed).epsilon(1e-3));
    CHECK(i_closed > 1e-4);
}

TEST_CASE("unit steps are rejected") {
    const Grid2D g = Grid2D::square(20, 64);
    CHECK_THROWS_AS(split_operator_evolve(initial_state(g), Stage::H2, PhysicalParams{}, 0), ConfigError);
}

TEST_CASE("parity quadrature limits") {
    const SampledSpinor s = sample_state({0, 0, 0.3, 0.3, 0, 0}, Grid2D::square(20, 128));
    CHECK(parity_correlation_numeric({0, 0, 0, 0, 0}, s) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(parity_correlation_numeric({0, 0, 0, 0, kPi / 2}, s)) < 1e-8);
    CHECK(std::abs(parity_correlation_numeric({0.3, 0.2, -1.0, 0.5, kPi / 2}, s)) < 1e-8);
}

TEST_CASE("parity quadrature matches the closed form at the reference parameters") {
    const SampledSpinor s = sample_state(kReference, suggest_grid(kReference));
    const ParityQuadrature q(s);
    for (double Z : {-5.0, -2.5, 0.0, 1.0, 2.4, 5.0})
        for (double theta : {0.0, 0.9, 2.0, 3.5, 5.5}) {
            const PhaseSpacePoint pt{0.1, 0.129, Z, 0.049, theta};
            CHECK(std::abs(q(pt) - correlation(pt, kReference)) < 1e-6);
        }
    for (const auto& r : oracle_values::kCorrelations) {
        const DimensionlessParams p{r.tau2, r.tau3, r.k2, r.k3, r.x0, r.z0};
        const PhaseSpacePoint pt{r.X, r.P_x, r.Z, r.P_z, r.theta};
        CHECK(std::abs(parity_correlation_numeric(pt, sample_state(p, suggest_grid(p))) - r.value) < 1e-6);
    }
}

TEST_CASE("parity quadrature converges under refinement") {
    Grid2D g = suggest_grid(kReference);
    const SampledSpinor coarse = sample_state(kReference, g);
    g.n_x *= 2;
    g.n_z *= 2;
    const SampledSpinor fine = sample_state(kReference, g);
    for (const PhaseSpacePoint& pt : {PhaseSpacePoint{0.1, 0.129, 0.3, 0.049, 1.0}, PhaseSpacePoint{0.1, 0.129, 2.4, 0.049, 0.6}})
        CHECK(std::abs(parity_correlation_numeric(pt, coarse) - parity_correlation_numeric(pt, fine)) < 1e-7);
}

TEST_CASE("reflection outside the grid is reported") {
    const SampledSpinor s = sample_state(kReference, suggest_grid(kReference));
    CHECK_THROWS_AS(parity_correlation_numeric({60.0, 0, 0, 0, 0}, s), GridTooSmallError);
    const Grid2D shifted{-20, 30, -25, 25, 128, 128};
    const SampledSpinor t = sample_state({0, 0, 0, 0, 0, 0}, shifted);
    CHECK_THROWS_AS(ParityQuadrature{t}, ConfigError);
}

TEST_CASE("single-apparatus entropy") {
    CHECK(entanglement_entropy(0.0, 0.3) == 0.0);
    CHECK(entanglement_entropy(100.0, 0.3) == doctest::Approx(1.0).epsilon(1e-3));
    for (const auto& r : oracle_values::kSingleEntropy)
        CHECK(entanglement_entropy(r.tau, r.k) == doctest::Approx(r.value).epsilon(1e-10));
    CHECK_THROWS_AS(entanglement_entropy(-1.0, 0.3), ConfigError);
}

TEST_CASE("entropy curves rise monotonically and saturate earlier for larger k") {
    double previous_saturation = 1e9;
    for (double k : {0.2, 0.3, 0.4}) {
        double last = -1.0;
        double saturation = -1.0;
        for (double tau = 0.0; tau <= 20.0; tau += 0.25) {
            const double e = entanglement_entropy(tau, k);
            CHECK(e >= 0.0);
            CHECK(e <= 1.0);
            if (tau > 0.0 && last < 1.0 - 1e-12) CHECK(e > last);
            if (saturation < 0.0 && e > 0.99) saturation = tau;
            last = e;
        }
        CHECK(saturation > 0.0);
        CHECK(saturation < previous_saturation);
        previous_saturation = saturation;
    }
}

TEST_CASE("two-apparatus entropy") {
    CHECK(entanglement_entropy_csge(kReference) == doctest::Approx(oracle_values::kReferenceCsgeEntropy).epsilon(1e-10));
    CHECK(entanglement_entropy_csge({0, 0, 0.3, 0.3, 4, 4}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(entanglement_entropy_csge({3, 3, 0.0, 0.5, 4, 4}) < 1e-10);
}

TEST_CASE("entropy of a Gram matrix") {
    CHECK(entropy_from_gram({{{1.0, 0.0}, {0.0, 1.0}}}) == doctest::Approx(1.0));
    CHECK(entropy_from_gram({{{2.0, 2.0}, {2.0, 2.0}}}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(entropy_from_gram({{{0.0, 0.0}, {0.0, 0.0}}}), NumericalError);
}
