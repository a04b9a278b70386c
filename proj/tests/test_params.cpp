#include "doctest.h"

#include <cmath>

#include "csge/error.hpp"
#include "csge/params.hpp"

using namespace csge;

namespace {

// Silver atom through a ~1e-5 m slit, SI units.
PhysicalParams silver() {
    PhysicalParams p;
    p.sigma0 = 1e-5;
    p.m = 1.79e-25;
    p.hbar = 1.054571817e-34;
    p.mu_c = 9.274e-24;
    return p;
}

void check_rel(double a, double b, double tol) { CHECK(std::abs(a - b) <= tol * std::max(std::abs(b), 1e-300)); }

}  // namespace

TEST_CASE("field-free limit defines offsets as zero") {
    PhysicalParams p = silver();
    p.t2 = 1e-3;
    p.t3 = 2e-3;
    const DimensionlessParams d = dimensionless_from_physical(p);
    CHECK(d.k2 == 0.0);
    CHECK(d.k3 == 0.0);
    CHECK(d.x0 == 0.0);
    CHECK(d.z0 == 0.0);
}

TEST_CASE("zero interaction times give zero reduced times") {
    PhysicalParams p = silver();
    p.b2 = p.b3 = 10.0;
    const DimensionlessParams d = dimensionless_from_physical(p);
    CHECK(d.tau2 == 0.0);
    CHECK(d.tau3 == 0.0);
}

TEST_CASE("reduced variables follow their definitions") {
    PhysicalParams p = silver();
    p.t2 = 0.01;
    p.t3 = 0.02;
    p.b2 = 3.0;
    p.b3 = 5.0;
    p.B2 = 1e-4;
    p.B3 = 2e-4;
    const DimensionlessParams d = dimensionless_from_physical(p);
    check_rel(d.tau2, p.hbar * p.t2 / (2.0 * p.m * p.sigma0 * p.sigma0), 1e-14);
    check_rel(d.tau3, p.hbar * p.t3 / (2.0 * p.m * p.sigma0 * p.sigma0), 1e-14);
    check_rel(d.k2, std::sqrt(2.0) * p.sigma0 * std::cbrt(p.m * p.mu_c * p.b2 / (2.0 * p.hbar * p.hbar)), 1e-14);
    check_rel(d.k3, std::sqrt(2.0) * p.sigma0 * std::cbrt(p.m * p.mu_c * p.b3 / (2.0 * p.hbar * p.hbar)), 1e-14);
    check_rel(d.x0, p.B2 / (p.sigma0 * p.b2), 1e-14);
    check_rel(d.z0, p.B3 / (p.sigma0 * p.b3), 1e-14);
}

TEST_CASE("Reference reduced parameters round-trip through physical units") {
    const DimensionlessParams target{6.8, 2.6, 0.3, 0.3, 4.0, 4.0};
    const PhysicalParams p = physical_from_dimensionless(target, 1e-5, 1.79e-25, 1.054571817e-34, 9.274e-24);
    const DimensionlessParams back = dimensionless_from_physical(p);
    check_rel(back.tau2, target.tau2, 1e-12);
    check_rel(back.tau3, target.tau3, 1e-12);
    check_rel(back.k2, target.k2, 1e-12);
    check_rel(back.k3, target.k3, 1e-12);
    check_rel(back.x0, target.x0, 1e-12);
    check_rel(back.z0, target.z0, 1e-12);
}

TEST_CASE("zero gradient with a homogeneous field leaves the offset undefined") {
    PhysicalParams p = silver();
    p.B2 = 0.1;
    CHECK_THROWS_AS(dimensionless_from_physical(p), OffsetUndefinedError);
    p.B2 = 0.0;
    p.B3 = 0.1;
    CHECK_THROWS_AS(dimensionless_from_physical(p), OffsetUndefinedError);
}

TEST_CASE("physical invariants") {
    PhysicalParams p = silver();
    SUBCASE("sigma0") {
        p.sigma0 = 0.0;
        CHECK_THROWS_AS(p.validate(), ConfigError);
    }
    SUBCASE("mass") {
        p.m = -1.0;
        CHECK_THROWS_AS(p.validate(), ConfigError);
    }
    SUBCASE("times") {
        p.t3 = -1e-9;
        CHECK_THROWS_AS(p.validate(), ConfigError);
    }
    SUBCASE("mu_c against g e hbar / 4m") {
        p.g = 2.0;
        p.e = 1.602176634e-19;
        p.m = 9.1093837015e-31;
        p.mu_c = *p.g * *p.e * p.hbar / (4.0 * p.m);
        CHECK_NOTHROW(p.validate());
        p.mu_c *= 1.0 + 1e-9;
        CHECK_THROWS_AS(p.validate(), ConfigError);
    }
}

TEST_CASE("dimensionless invariants") {
    CHECK_THROWS_AS((DimensionlessParams{-1.0, 0.0, 0.0, 0.0, 0.0, 0.0}.validate()), ConfigError);
    CHECK_THROWS_AS((DimensionlessParams{0.0, 0.0, -0.1, 0.0, 0.0, 0.0}.validate()), ConfigError);
    CHECK_THROWS_AS((DimensionlessParams{0.0, NAN, 0.0, 0.0, 0.0, 0.0}.validate()), ConfigError);
    CHECK_NOTHROW((DimensionlessParams{1.0, 2.0, 0.3, 0.3, -4.0, 4.0}.validate()));
}
