#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cfdual/convergence.hpp"
#include "cfdual/samplers.hpp"

using namespace cfdual;

namespace {

CatalogueEntry psc() { return pseudosphere_cylinder(1.0, {0.5, 1.5}, {0, 1}, {0, 1}); }

CatalogueEntry inverted() { return invert_entry(psc(), Vec4{0, 0, 0, 5}); }

}  // namespace

TEST_CASE("slope fitting on synthetic data") {
    auto make = [](auto fn) {
        std::vector<std::pair<int, double>> pts;
        for (int n : {8, 16, 32, 64, 128}) pts.push_back({n, fn(n)});
        return pts;
    };
    CHECK(fit_slope(make([](int n) { return 3.0 / n; })).slope == doctest::Approx(-1.0));
    CHECK(fit_slope(make([](int) { return 0.25; })).slope == doctest::Approx(0.0));
    CHECK(fit_slope(make([](int n) { return 7.0 / double(n) / n; })).slope ==
          doctest::Approx(-2.0));
    CHECK_FALSE(fit_slope(make([](int n) { return 1.0 / n; })).floored);

    CHECK_THROWS_AS(fit_slope({{8, 1.0}, {16, 0.5}}), NonPositiveError);
    CHECK_THROWS_AS(fit_slope(make([](int n) { return n == 16 ? -1.0 : 1.0; })),
                    NonPositiveError);

    const SlopeFit floored = fit_slope(make([](int) { return 0.0; }));
    CHECK(floored.floored);
    CHECK(floored.slope == doctest::Approx(0.0));
}

TEST_CASE("sweep argument validation") {
    const auto e = psc();
    CHECK_THROWS_AS(sweep(e, Scheme::xbar, {8, 16}), InvalidN);
    CHECK_THROWS_AS(sweep(e, Scheme::xbar, {8, 16, 16}), InvalidN);
    CHECK_THROWS_AS(sweep(e, Scheme::xbar, {16, 8, 32}), InvalidN);
}

TEST_CASE("sweep on the exact entry reports the noise floor") {
    // sigma_3 and kappa_3 are constant on the cylinder: every segment is an
    // exact dual increment, so the measured "error" is the reference
    // integrator's own quadrature error. With enough substeps it sits below
    // the noise threshold and the slope fit is flagged as meaningless.
    const ConvergenceReport rep = sweep(psc(), Scheme::xbar, {16, 24, 32}, 32);
    CHECK(rep.at_noise_floor);
    CHECK(rep.all_bounds_satisfied);
    for (const auto& row : rep.rows) {
        CHECK(row.sup_error < 1e-12);
        CHECK(row.satisfied);
        CHECK(row.slice_satisfied);
        CHECK(row.delta == doctest::Approx(1.0 / row.n));
    }
}

TEST_CASE("sweep on a generic entry: bounds hold and the error is O(1/n)") {
    const ConvergenceReport rep = sweep(inverted(), Scheme::xbar, {8, 16, 32});
    CHECK_FALSE(rep.at_noise_floor);
    CHECK(rep.all_bounds_satisfied);
    REQUIRE(rep.rows.size() == 3);
    for (const auto& row : rep.rows) {
        CHECK(row.sup_error <= row.bound);
        CHECK(row.slice_sup_error <= row.slice_bound);
        CHECK(row.slice_sup_error <= row.sup_error + 1e-15);
        CHECK(row.bound == doctest::Approx(6.0 * rep.constants.C1 * rep.constants.C1 *
                                           rep.constants.C2 / row.n));
    }
    CHECK(rep.error_fit.slope > -1.35);
    CHECK(rep.error_fit.slope < -0.70);
    // the edge mismatch decays one order faster
    CHECK(rep.connector_fit.slope > -2.4);
    CHECK(rep.connector_fit.slope < -1.6);
    // both schemes behave alike
    const ConvergenceReport repy = sweep(inverted(), Scheme::yunder, {8, 16, 32});
    CHECK(repy.all_bounds_satisfied);
    CHECK(repy.error_fit.slope > -1.35);
    CHECK(repy.error_fit.slope < -0.70);
}

TEST_CASE("cusp experiment needs a degenerate point") {
    CHECK_THROWS_AS(cusp_experiment(psc(), 16), NoDegeneratePoint);
    CHECK_THROWS_AS(cusp_experiment(inverted(), 16), NoDegeneratePoint);
}

TEST_CASE("cusp experiment detects the direction reversal") {
    const auto e = cusp_probe_entry();
    const CuspReport rep = cusp_experiment(e, 32, 32);
    CHECK(rep.root[0] > 0.55);
    CHECK(rep.root[0] < 1.45);
    CHECK(std::fabs(rep.root_criterion) > 1e-3);  // transversal
    CHECK(rep.tangent_dot < 0.0);
    CHECK(rep.reversal_within_2delta);
    CHECK(rep.localization_error <= 2 * rep.delta);
}
