#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cfdual/core.hpp"
#include "cfdual/samplers.hpp"

using namespace cfdual;

namespace {

CatalogueEntry constant_entry() {
    CatalogueEntry e;
    e.name = "constant";
    e.sample = [](double x, double y, double z) {
        FrameSample s;
        s.f = {x, y, z, 0};
        s.X_alpha = {1, 0, 0, 0};
        s.X_beta = {0, 1, 0, 0};
        s.X_gamma = {0, 0, 1, 0};
        s.N = {0, 0, 0, 1};
        s.P = 1.0;
        s.phi = 0.7853981633974483;  // pi/4: kappa = (1, -1, 0)
        s.kappa3 = 0.0;
        return s;
    };
    e.valid_lo = {0, 0, 0};
    e.valid_hi = {1, 1, 1};
    return e;
}

}  // namespace

TEST_CASE("domain construction accepts cubes only") {
    const Domain d = build_domain(0, 1, 0, 1, 0, 1);
    CHECK(d.a == doctest::Approx(1.0));
    CHECK_THROWS_AS(build_domain(0, 1, 0, 1, 0, 2), UnequalSides);
    CHECK_THROWS_AS(build_domain(0, 0, 0, 0, 0, 0), UnequalSides);
    const Domain w = build_domain(0.5, 1.5, 0, 1, 0, 1);
    CHECK(w.a == doctest::Approx(1.0));
}

TEST_CASE("lattice nodes follow the exact affine formula") {
    const Domain d = build_domain(0, 1, 0, 1, 0, 1);
    CHECK_THROWS_AS(build_lattice(d, 0), InvalidN);

    const Lattice l1 = build_lattice(d, 1);
    CHECK(l1.node_count() == 8);
    CHECK(l1.delta == doctest::Approx(1.0));

    const Lattice l2 = build_lattice(d, 2);
    CHECK(l2.node_count() == 27);
    CHECK(l2.delta == doctest::Approx(0.5));

    const Lattice l64 = build_lattice(d, 64);
    CHECK(l64.delta == 0.015625);  // power of two: exact

    const Lattice l7 = build_lattice(d, 7);
    for (int i = 0; i < 7; ++i) {
        // translation-exactness: x_{i+1} - x_i agrees with a/n to one ulp
        const double step = l7.x(i + 1) - l7.x(i);
        CHECK(std::fabs(step - d.a / 7) < 1e-16);
    }
}

TEST_CASE("bound constants: pseudosphere window") {
    const auto entry = pseudosphere_cylinder(1.0, {0.5, 1.5}, {0, 1}, {0, 1});
    const Domain d = build_domain(0.5, 1.5, 0, 1, 0, 1);
    const BoundConstants b = estimate_bound_constants(entry, d, 33, 1.1);
    // |kappa2| = sinh u reaches sinh(1.5) at the far wall
    CHECK(b.C1_raw >= std::sinh(1.5) - 1e-9);
    CHECK(b.C1 == doctest::Approx(1.1 * b.C1_raw));
    // |dkappa2/du| = cosh u reaches cosh(1.5)
    CHECK(b.C2_raw >= std::cosh(1.5) - 1e-9);
    CHECK(b.a == doctest::Approx(1.0));
}

TEST_CASE("bound constants: constant entry and monotonicity") {
    const auto entry = constant_entry();
    const Domain d = build_domain(0, 1, 0, 1, 0, 1);
    const BoundConstants b = estimate_bound_constants(entry, d, 17, 1.1);
    CHECK(b.C1_raw == doctest::Approx(1.0));
    CHECK(b.C1 == doctest::Approx(1.1));
    CHECK(b.C2_raw < 1e-9);  // constants: derivatives at FD noise only

    const BoundConstants b2 = estimate_bound_constants(entry, d, 17, 2.0);
    CHECK(b2.C1 >= b.C1);  // monotone in safety
    CHECK_THROWS_AS(estimate_bound_constants(entry, d, 8, 1.1), InvalidN);
    CHECK_THROWS_AS(estimate_bound_constants(entry, d, 17, 0.5), InvalidN);
}

TEST_CASE("bound constants: inverted entry stable under grid refinement") {
    const auto base = pseudosphere_cylinder(1.0, {0.5, 1.5}, {0, 1}, {0, 1});
    const auto inv = invert_entry(base, Vec4{0, 0, 0, 5});
    const Domain d = build_domain(0.5, 1.5, 0, 1, 0, 1);
    const BoundConstants b1 = estimate_bound_constants(inv, d, 17, 1.1);
    const BoundConstants b2 = estimate_bound_constants(inv, d, 33, 1.1);
    CHECK(std::fabs(b2.C1 - b1.C1) / b2.C1 < 0.05);
    CHECK(std::fabs(b2.C2 - b1.C2) / b2.C2 < 0.05);
}

TEST_CASE("singular samples rejected") {
    CatalogueEntry e = constant_entry();
    auto base = e.sample;
    e.sample = [base](double x, double y, double z) {
        FrameSample s = base(x, y, z);
        s.phi = 0.0;  // sin(phi) = 0
        return s;
    };
    const Domain d = build_domain(0, 1, 0, 1, 0, 1);
    CHECK_THROWS_AS(estimate_bound_constants(e, d, 17, 1.1), SingularSample);
}

TEST_CASE("frame orthonormality across catalogue samples") {
    const auto entry = pseudosphere_cylinder(1.0, {0.5, 1.5}, {0, 1}, {0, 1});
    const auto inv = invert_entry(entry, Vec4{0, 0, 0, 5});
    for (const auto* e : {&entry, &inv})
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                for (int k = 0; k < 5; ++k) {
                    const FrameSample s =
                        e->sample(0.5 + 0.25 * i, 0.25 * j, 0.25 * k);
                    CHECK(frame_orthonormality_defect(s.X_alpha, s.X_beta, s.X_gamma,
                                                      s.N) < 1e-10);
                }
}
