#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cfdual/samplers.hpp"
#include "cfdual/validate.hpp"

using namespace cfdual;

namespace {

// Generalized cross product in R^4: returns a vector orthogonal to u, v, w.
Vec4 cross4(const Vec4& u, const Vec4& v, const Vec4& w) {
    auto det3 = [](double a0, double a1, double a2, double b0, double b1, double b2,
                   double c0, double c1, double c2) {
        return a0 * (b1 * c2 - b2 * c1) - a1 * (b0 * c2 - b2 * c0) +
               a2 * (b0 * c1 - b1 * c0);
    };
    Vec4 n;
    n[0] = det3(u[1], u[2], u[3], v[1], v[2], v[3], w[1], w[2], w[3]);
    n[1] = -det3(u[0], u[2], u[3], v[0], v[2], v[3], w[0], w[2], w[3]);
    n[2] = det3(u[0], u[1], u[3], v[0], v[1], v[3], w[0], w[1], w[3]);
    n[3] = -det3(u[0], u[1], u[2], v[0], v[1], v[2], w[0], w[1], w[2]);
    return n;
}

// Independent shape-operator oracle: uses only the position closure of the
// entry (FD derivatives of f), builds the unit normal from the tangents, and
// reads principal curvatures off the diagonal second fundamental form.
struct ShapeOracle {
    double k_u, k_v, k_z;   // curvature along each coordinate direction
    double off_diag;        // max |II off-diagonal| (should vanish)
};

ShapeOracle shape_oracle(const CatalogueEntry& e, double u, double v, double z) {
    const double h = 1e-4;
    auto f = [&](double a, double b, double c) { return e.sample(a, b, c).f; };
    auto d1 = [&](int axis, double a, double b, double c) {
        const double da = axis == 0 ? h : 0, db = axis == 1 ? h : 0, dc = axis == 2 ? h : 0;
        return (f(a - 2 * da, b - 2 * db, c - 2 * dc) - f(a + 2 * da, b + 2 * db, c + 2 * dc) +
                8.0 * (f(a + da, b + db, c + dc) - f(a - da, b - db, c - dc))) /
               (12 * h);
    };
    const Vec4 fu = d1(0, u, v, z), fv = d1(1, u, v, z), fz = d1(2, u, v, z);
    Vec4 n = cross4(fu, fv, fz);
    n = n / norm(n);
    if (dot(n, e.sample(u, v, z).N) < 0) n = -n;  // orientation convention only
    auto second = [&](int a1, int a2) {
        auto dfa = [&](double x, double y, double w) { return d1(a1, x, y, w); };
        const double da = a2 == 0 ? h : 0, db = a2 == 1 ? h : 0, dc = a2 == 2 ? h : 0;
        const Vec4 m = (dfa(u - 2 * da, v - 2 * db, z - 2 * dc) -
                        dfa(u + 2 * da, v + 2 * db, z + 2 * dc) +
                        8.0 * (dfa(u + da, v + db, z + dc) - dfa(u - da, v - db, z - dc))) /
                       (12 * h);
        return dot(m, n);
    };
    ShapeOracle o{};
    o.k_u = second(0, 0) / dot(fu, fu);
    o.k_v = second(1, 1) / dot(fv, fv);
    const double fz2 = dot(fz, fz);
    o.k_z = fz2 > 0 ? second(2, 2) / fz2 : 0.0;
    o.off_diag = std::max({std::fabs(second(0, 1)), std::fabs(second(0, 2)),
                           std::fabs(second(1, 2))});
    return o;
}

CatalogueEntry psc() { return pseudosphere_cylinder(1.0, {0.5, 1.5}, {0, 1}, {0, 1}); }

}  // namespace

TEST_CASE("pseudosphere cylinder: direct evaluation") {
    const auto e = psc();
    const FrameSample s = e.sample(1.0, 0.0, 2.0);
    CHECK(s.f[0] == doctest::Approx(0.648054).epsilon(1e-5));
    CHECK(s.f[1] == doctest::Approx(0.0));
    CHECK(s.f[2] == doctest::Approx(0.238406).epsilon(1e-5));
    CHECK(s.f[3] == doctest::Approx(2.0));
    CHECK(std::cos(s.phi) == doctest::Approx(std::tanh(1.0)));
    CHECK(s.P == 1.0);
    CHECK(s.kappa3 == 0.0);
}

TEST_CASE("pseudosphere cylinder: shape-operator oracle fixes the curvatures") {
    const auto e = psc();
    for (double u : {0.6, 1.0, 1.4})
        for (double v : {0.1, 0.8}) {
            const ShapeOracle o = shape_oracle(e, u, v, 0.5);
            // oracle vs the metric-data formula kappa1 = csch u, kappa2 = -sinh u
            CHECK(o.k_u == doctest::Approx(1.0 / std::sinh(u)).epsilon(1e-6));
            CHECK(o.k_v == doctest::Approx(-std::sinh(u)).epsilon(1e-6));
            CHECK(std::fabs(o.k_z) < 1e-6);
            CHECK(o.off_diag < 1e-6);  // curvature-line coordinates
            CHECK(o.k_u * o.k_v == doctest::Approx(-1.0).epsilon(1e-6));
        }
    // matches the frame-data route at u = 1
    const auto k = principal_curvatures(e.sample(1.0, 0.2, 0.3));
    CHECK(k.k1 == doctest::Approx(0.850918).epsilon(1e-5));
    CHECK(k.k2 == doctest::Approx(-1.175201).epsilon(1e-5));
    CHECK(k.k3 == 0.0);
}

TEST_CASE("pseudosphere cylinder: tangent recovery and analytic derivatives") {
    const auto e = psc();
    const double h = 1e-5;
    for (double u : {0.7, 1.2}) {
        const FrameSample s = e.sample(u, 0.4, 0.6);
        // FD tangents of the position closure vs P cos(phi) X_alpha etc.
        const Vec4 fu = (e.sample(u + h, 0.4, 0.6).f - e.sample(u - h, 0.4, 0.6).f) / (2 * h);
        const Vec4 fv = (e.sample(u, 0.4 + h, 0.6).f - e.sample(u, 0.4 - h, 0.6).f) / (2 * h);
        CHECK(norm(fu - s.fx()) < 1e-8);
        CHECK(norm(fv - s.fy()) < 1e-8);
        CHECK(norm(s.fz() - Vec4{0, 0, 0, 1}) < 1e-12);
        // analytic kappa derivatives vs closed forms
        const auto dk = e.kappa_derivs(u, 0.4, 0.6);
        CHECK(dk[0][0] == doctest::Approx(-std::cosh(u) / (std::sinh(u) * std::sinh(u))));
        CHECK(dk[1][0] == doctest::Approx(-std::cosh(u)));
        CHECK(dk[2][0] == 0.0);
    }
}

TEST_CASE("pseudosphere cylinder: window validation") {
    CHECK_THROWS_AS(pseudosphere_cylinder(1.0, {0.0, 1.0}, {0, 1}, {0, 1}), InvalidWindow);
    CHECK_THROWS_AS(pseudosphere_cylinder(2.0, {0.5, 1.5}, {0, 1}, {0, 1}), InvalidWindow);
    CHECK_THROWS_AS(pseudosphere_cylinder(-1.0, {0.5, 1.5}, {0, 1}, {0, 1}), InvalidWindow);
}

TEST_CASE("inversion: quantity transforms") {
    const auto e = psc();
    // center two units along the normal: ||f - q|| = 2 at the base point
    const FrameSample s0 = e.sample(1.0, 0.5, 0.5);
    const Vec4 q = s0.f + 2.0 * s0.N;
    const auto inv = invert_entry(e, q);
    const FrameSample t0 = inv.sample(1.0, 0.5, 0.5);
    CHECK(t0.P == doctest::Approx(s0.P / 4.0));
    // kappa^q = r^2 kappa + 2 <N, f-q> with <N, f-q> = -2
    const auto k0 = principal_curvatures(s0);
    const auto kq = principal_curvatures(t0);
    CHECK(kq.k3 == doctest::Approx(4.0 * k0.k3 - 4.0));
    CHECK(kq.k1 == doctest::Approx(4.0 * k0.k1 - 4.0).epsilon(1e-9));
    CHECK(kq.k2 == doctest::Approx(4.0 * k0.k2 - 4.0).epsilon(1e-9));
    // frame vector orthogonal to f - q is unchanged by the reflection
    CHECK(norm(t0.X_beta - s0.X_beta) < 1e-12);
    // phi and its derivatives pass through untouched
    CHECK(t0.phi == s0.phi);
    CHECK(t0.phi_x == s0.phi_x);
    // reflections preserve orthonormality
    CHECK(frame_orthonormality_defect(t0.X_alpha, t0.X_beta, t0.X_gamma, t0.N) < 1e-12);
}

TEST_CASE("inversion: involution after recentering") {
    const auto e = psc();
    const Vec4 q{0, 0, 0, 5};
    const auto once = invert_entry(e, q);
    const auto recentred = rigid_motion_entry(once, Mat4::identity(), q);
    const auto twice = invert_entry(recentred, q);
    for (double u : {0.6, 1.1})
        for (double z : {0.2, 0.9}) {
            const FrameSample a = e.sample(u, 0.3, z);
            const FrameSample b = twice.sample(u, 0.3, z);
            CHECK(norm(b.f - (a.f - q)) < 1e-9);
            CHECK(b.P == doctest::Approx(a.P).epsilon(1e-9));
            CHECK(b.kappa3 == doctest::Approx(a.kappa3).epsilon(1e-9));
        }
}

TEST_CASE("inversion: center on the surface rejected") {
    const auto e = psc();
    const Vec4 q = e.sample(1.0, 0.5, 0.5).f;
    CHECK_THROWS_AS(invert_entry(e, q), CenterTooClose);
}

TEST_CASE("rigid motions") {
    const auto e = psc();
    SUBCASE("identity motion leaves samples unchanged") {
        const auto moved = rigid_motion_entry(e, Mat4::identity(), Vec4{});
        const FrameSample a = e.sample(1.0, 0.3, 0.7), b = moved.sample(1.0, 0.3, 0.7);
        CHECK(norm(a.f - b.f) == 0.0);
        CHECK(norm(a.N - b.N) == 0.0);
    }
    SUBCASE("translation shifts positions, not normals") {
        const Vec4 t{1, 2, 3, 4};
        const auto moved = rigid_motion_entry(e, Mat4::identity(), t);
        const FrameSample a = e.sample(1.0, 0.3, 0.7), b = moved.sample(1.0, 0.3, 0.7);
        CHECK(norm(b.f - (a.f + t)) < 1e-15);
        CHECK(norm(b.N - a.N) == 0.0);
    }
    SUBCASE("rotation preserves all scalar fields") {
        Mat4 r = Mat4::identity();
        r(0, 0) = 0;
        r(0, 1) = -1;
        r(1, 0) = 1;
        r(1, 1) = 0;
        const auto moved = rigid_motion_entry(e, r, Vec4{});
        const auto ka = principal_curvatures(e.sample(0.8, 0.6, 0.1));
        const auto kb = principal_curvatures(moved.sample(0.8, 0.6, 0.1));
        CHECK(ka.k1 == kb.k1);
        CHECK(ka.k2 == kb.k2);
        CHECK(frame_orthonormality_defect(moved.sample(0.8, 0.6, 0.1).X_alpha,
                                          moved.sample(0.8, 0.6, 0.1).X_beta,
                                          moved.sample(0.8, 0.6, 0.1).X_gamma,
                                          moved.sample(0.8, 0.6, 0.1).N) < 1e-12);
    }
    SUBCASE("non-orthogonal matrix rejected") {
        Mat4 r = Mat4::identity();
        r(0, 0) = 2;
        CHECK_THROWS_AS(rigid_motion_entry(e, r, Vec4{}), NotOrthogonal);
    }
}

TEST_CASE("coordinate swap mirrors the construction data") {
    const auto e = psc();
    const auto sw = swap_xy_entry(e);
    const FrameSample a = e.sample(1.1, 0.4, 0.3);
    const FrameSample b = sw.sample(0.4, 1.1, 0.3);
    CHECK(norm(a.f - b.f) == 0.0);
    CHECK(frame_orthonormality_defect(b.X_alpha, b.X_beta, b.X_gamma, b.N) < 1e-12);
    const auto ka = principal_curvatures(a);
    const auto kb = principal_curvatures(b);
    CHECK(kb.k1 == doctest::Approx(ka.k2).epsilon(1e-12));
    CHECK(kb.k2 == doctest::Approx(ka.k1).epsilon(1e-12));
    // tangent recovery transfers: x'-tangent of the swapped entry is the
    // y-tangent of the original
    CHECK(norm(b.fx() - a.fy()) < 1e-12);
    CHECK(norm(b.fy() - a.fx()) < 1e-12);
}

TEST_CASE("structural identity validation") {
    const auto e = psc();
    const Domain d = build_domain(0.5, 1.5, 0, 1, 0, 1);
    SUBCASE("pseudosphere passes every identity") {
        const ResidualReport r = validate_entry(e, d);
        for (const auto& ent : r.entries) {
            INFO(ent.name, " residual ", ent.sup.back(), " order ", ent.order);
            CHECK(ent.pass);
        }
        CHECK(r.all_pass);
        // the z-identities vanish structurally for the cylinder
        CHECK(r.find("kappa3-z")->sup.back() < 1e-12);
        CHECK(r.find("zline-accel")->sup.back() < 1e-6);
    }
    SUBCASE("inverted entry passes every identity") {
        const auto inv = invert_entry(e, Vec4{0, 0, 0, 5});
        const ResidualReport r = validate_entry(inv, d);
        for (const auto& ent : r.entries) {
            INFO(ent.name, " residual ", ent.sup.back(), " order ", ent.order);
            CHECK(ent.pass);
        }
    }
    SUBCASE("deliberate kappa3 offset is detected") {
        CatalogueEntry bad = e;
        auto base = e.sample;
        bad.sample = [base](double x, double y, double z) {
            FrameSample s = base(x, y, z);
            s.kappa3 += 0.1;
            return s;
        };
        bad.kappa_derivs = nullptr;
        const ResidualReport r = validate_entry(bad, d);
        CHECK_FALSE(r.find("zeta-consistency")->pass);
        CHECK(r.find("zeta-consistency")->sup.back() > 1e-3);
    }
}
