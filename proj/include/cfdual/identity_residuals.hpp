#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cfdual/core.hpp"
#include "cfdual/fd.hpp"
#include "cfdual/invariants.hpp"
#include "cfdual/reference_dual.hpp"
#include "cfdual/report.hpp"
#include "cfdual/samplers.hpp"
#include "cfdual/vec4.hpp"

namespace cfdual {

namespace detail {

/// Pointwise bundle used by the derivative identities below.
struct PointData {
    FrameSample s;
    CurvatureSet k;
    SchoutenEigen sig;
    DualQuantities d;
};

inline PointData point_data(const CatalogueEntry& entry, double x, double y, double z,
                            double h) {
    PointData p;
    p.s = entry.sample(x, y, z);
    const auto kk = curvatures_of(p.s);
    p.k = {kk[0], kk[1], kk[2]};
    p.sig = schouten_eigenvalues(p.k);
    p.d = dual_quantities(p.s, p.sig, p.k, pinv_deriv(entry, x, y, z, 2, h));
    return p;
}

/// (kappa3)_axis: analytic closure when available, 4th-order FD otherwise.
inline double kappa3_deriv(const CatalogueEntry& entry, double x, double y, double z,
                           int axis, double h) {
    if (entry.kappa_derivs) return entry.kappa_derivs(x, y, z)[2][axis];
    auto field = [&](fd::Point3 p) { return entry.sample(p.x, p.y, p.z).kappa3; };
    return fd::d1(field, fd::Point3{x, y, z}, axis, h);
}

}  // namespace detail

/// Residuals of the derivative identities that tie the dual invariant
/// f* + sigma3 f + kappa3 N and the inversion invariant K f + A to the frame
/// data, plus the inversion-invariance and cusp-direction-parallelism checks
/// against the inverted twin when an inversion center is supplied.
///
/// `fstar` must evaluate the dual of `entry`, anchored anywhere (all
/// identities are derivative- or gauge-based). Left sides are assembled from
/// `fstar` and finite differences; right sides are analytic.
inline ResidualReport identity_residuals(const CatalogueEntry& entry,
                                         const std::function<Vec4(double, double, double)>& fstar,
                                         const Domain& domain, double h,
                                         std::optional<Vec4> inversion_center = std::nullopt,
                                         double tol = 1e-6, int probe = 3,
                                         double oracle_steps_per_unit = 128.0) {
    using fd::Point3;
    const std::vector<double> h_list = {h, h / 2, h / 4};

    auto invd3 = [&](Point3 p) {
        const auto pd = detail::point_data(entry, p.x, p.y, p.z, h);
        return fstar(p.x, p.y, p.z) + pd.sig.s3 * pd.s.f + pd.k.k3 * pd.s.N;
    };
    auto invI = [&](Point3 p, double hh) {
        const auto pd = detail::point_data(entry, p.x, p.y, p.z, hh);
        return pd.d.K * pd.s.f + pd.d.A;
    };

    struct Ident {
        std::string name;
        std::function<double(Point3, double)> residual;
    };
    std::vector<Ident> idents;

    // x-, y-, z-derivatives of the dual invariant.
    idents.push_back({"dualinv3-x", [&, invd3](Point3 p, double hh) {
        const auto pd = detail::point_data(entry, p.x, p.y, p.z, hh);
        const double k3x = detail::kappa3_deriv(entry, p.x, p.y, p.z, 0, hh);
        return norm(fd::d1(invd3, p, 0, hh) - k3x * (pd.k.k2 * pd.s.f + pd.s.N));
    }});
    idents.push_back({"dualinv3-y", [&, invd3](Point3 p, double hh) {
        const auto pd = detail::point_data(entry, p.x, p.y, p.z, hh);
        const double k3y = detail::kappa3_deriv(entry, p.x, p.y, p.z, 1, hh);
        return norm(fd::d1(invd3, p, 1, hh) - k3y * (pd.k.k1 * pd.s.f + pd.s.N));
    }});
    idents.push_back({"dualinv3-z", [&, invd3, invI](Point3 p, double hh) {
        const auto pd = detail::point_data(entry, p.x, p.y, p.z, hh);
        return norm(fd::d1(invd3, p, 2, hh) + (1.0 / pd.s.P) * invI(p, hh));
    }});

    // z-derivative of the sqrt-rescaled invariant: symmetric in f and f*.
    idents.push_back({"dualinv3-sqrt-z", [&, invd3, invI](Point3 p, double hh) {
        auto field = [&](Point3 q) {
            const auto pd = detail::point_data(entry, q.x, q.y, q.z, hh);
            return (1.0 / std::sqrt(pd.sig.s3)) * invd3(q);
        };
        const auto pd = detail::point_data(entry, p.x, p.y, p.z, hh);
        const Vec4 invI_star =
            pd.d.Kstar * fstar(p.x, p.y, p.z) + pd.d.Astar;
        const Vec4 rhs = (-1.0 / (2.0 * pd.s.P * std::sqrt(pd.sig.s3))) *
                         (invI(p, hh) + invI_star);
        return norm(fd::d1(field, p, 2, hh) - rhs);
    }});

    // z-derivative of the fully rescaled invariant: the dual-side statement.
    idents.push_back({"dualinv3-dual-z", [&, invd3](Point3 p, double hh) {
        auto field = [&](Point3 q) {
            const auto pd = detail::point_data(entry, q.x, q.y, q.z, hh);
            return (1.0 / pd.sig.s3) * invd3(q);
        };
        const auto pd = detail::point_data(entry, p.x, p.y, p.z, hh);
        const Vec4 invI_star = pd.d.Kstar * fstar(p.x, p.y, p.z) + pd.d.Astar;
        return norm(fd::d1(field, p, 2, hh) + (1.0 / pd.d.Pstar) * invI_star);
    }});

    // x-, y-derivatives of the inversion invariant K f + A.
    idents.push_back({"invI-x", [&, invI](Point3 p, double hh) {
        auto field = [&, hh](Point3 q) { return invI(q, hh); };
        const auto pd = detail::point_data(entry, p.x, p.y, p.z, hh);
        auto phiz = [&](Point3 q) { return entry.sample(q.x, q.y, q.z).phi_z; };
        const double phi_zx = fd::d1(phiz, p, 0, hh);
        return norm(fd::d1(field, p, 0, hh) - phi_zx * (pd.k.k2 * pd.s.f + pd.s.N));
    }});
    idents.push_back({"invI-y", [&, invI](Point3 p, double hh) {
        auto field = [&, hh](Point3 q) { return invI(q, hh); };
        const auto pd = detail::point_data(entry, p.x, p.y, p.z, hh);
        auto phiz = [&](Point3 q) { return entry.sample(q.x, q.y, q.z).phi_z; };
        const double phi_zy = fd::d1(phiz, p, 1, hh);
        return norm(fd::d1(field, p, 1, hh) - phi_zy * (pd.k.k1 * pd.s.f + pd.s.N));
    }});

    ResidualReport report;
    report.tol = tol;

    auto probe_point = [&](int i, int j, int k) {
        return Point3{domain.x0 + domain.a * (0.2 + 0.6 * i / double(probe - 1)),
                      domain.y0 + domain.a * (0.2 + 0.6 * j / double(probe - 1)),
                      domain.z0 + domain.a * (0.2 + 0.6 * k / double(probe - 1))};
    };

    for (const auto& id : idents) {
        ResidualEntry re;
        re.name = id.name;
        for (double hh : h_list) {
            double sup = 0;
            for (int i = 0; i < probe; ++i)
                for (int j = 0; j < probe; ++j)
                    for (int k = 0; k < probe; ++k)
                        sup = std::max(sup, id.residual(probe_point(i, j, k), hh));
            re.h.push_back(hh);
            re.sup.push_back(sup);
        }
        finalize_residual_entry(re, tol);
        report.all_pass = report.all_pass && re.pass;
        report.entries.push_back(re);
    }

    // Fixed-point property of the rescaled dual invariant: building the dual
    // side with a genuinely re-integrated dual-of-dual must reproduce
    // (1/sigma3) times the primal invariant, up to the translation gauge.
    {
        ResidualEntry re;
        re.name = "dualinv3-fixedpoint";
        const Vec4 base_f = entry.sample(domain.x0, domain.y0, domain.z0).f;
        auto ddual = [&](double x, double y, double z) {
            // Integrate sigma*_i (f*)-tangents from the base corner (three legs).
            auto component = [&](double cx, double cy, double cz, int axis) {
                const auto pd = detail::point_data(entry, cx, cy, cz, h);
                const double sstar = 1.0 / (axis == 0   ? pd.sig.s1
                                            : axis == 1 ? pd.sig.s2
                                                        : pd.sig.s3);
                const Vec4 tangent = (axis == 0   ? pd.sig.s1 * pd.s.fx()
                                      : axis == 1 ? pd.sig.s2 * pd.s.fy()
                                                  : pd.sig.s3 * pd.s.fz());
                return sstar * tangent;
            };
            Vec4 acc;
            const double legs[3][4] = {{domain.x0, domain.y0, domain.z0, x - domain.x0},
                                       {x, domain.y0, domain.z0, y - domain.y0},
                                       {x, y, domain.z0, z - domain.z0}};
            for (int axis = 0; axis < 3; ++axis) {
                const double len = legs[axis][3];
                if (len == 0.0) continue;
                int m = std::max(8, int(std::ceil(std::fabs(len) * oracle_steps_per_unit)));
                m += m % 2;
                acc += detail::simpson(
                    [&](double t) {
                        double q[3] = {legs[axis][0], legs[axis][1], legs[axis][2]};
                        q[axis] += t;
                        return component(q[0], q[1], q[2], axis);
                    },
                    len, m);
            }
            return acc;
        };
        auto gauged_diff = [&](Point3 p) {
            const auto pd = detail::point_data(entry, p.x, p.y, p.z, h);
            const Vec4 fs = fstar(p.x, p.y, p.z);
            // dual side: f** + sigma3* f* + kappa3* N*, with N* = -N.
            const Vec4 lhs = (ddual(p.x, p.y, p.z) + base_f) + pd.d.sstar3 * fs +
                             pd.d.kstar3 * (-pd.s.N);
            const Vec4 rhs = pd.d.sstar3 * (fs + pd.sig.s3 * pd.s.f + pd.k.k3 * pd.s.N);
            return lhs - rhs;
        };
        const Vec4 at_base = gauged_diff(Point3{domain.x0, domain.y0, domain.z0});
        double sup = 0;
        for (int i = 0; i < probe; ++i)
            for (int j = 0; j < probe; ++j)
                for (int k = 0; k < probe; ++k)
                    sup = std::max(sup, norm(gauged_diff(probe_point(i, j, k)) - at_base));
        re.h = {h};
        re.sup = {sup};
        finalize_residual_entry(re, tol);
        report.all_pass = report.all_pass && re.pass;
        report.entries.push_back(re);
    }

    if (inversion_center) {
        const Vec4 q = *inversion_center;
        const CatalogueEntry inv = invert_entry(entry, q);

        // Invariance of K f + A under the inversion, in the translation-blind
        // form: K^q (f-q)/||f-q||^2 + A^q = (K f + A) - K q.
        {
            ResidualEntry re;
            re.name = "inversion-invariance";
            double sup = 0;
            const int g = 17;
            for (int i = 0; i < g; ++i)
                for (int j = 0; j < g; ++j)
                    for (int k = 0; k < g; ++k) {
                        const double x = domain.x0 + domain.a * double(i) / (g - 1);
                        const double y = domain.y0 + domain.a * double(j) / (g - 1);
                        const double z = domain.z0 + domain.a * double(k) / (g - 1);
                        const auto pd = detail::point_data(entry, x, y, z, h);
                        const auto pq = detail::point_data(inv, x, y, z, h);
                        const Vec4 lhs = pq.d.K * pq.s.f + pq.d.A;
                        const Vec4 rhs = (pd.d.K * pd.s.f + pd.d.A) - pd.d.K * q;
                        sup = std::max(sup, norm(lhs - rhs));
                    }
            re.h = {h};
            re.sup = {sup};
            finalize_residual_entry(re, tol);
            report.all_pass = report.all_pass && re.pass;
            report.entries.push_back(re);
        }

        // Parallelism of the x/y-derivatives of the dual invariants of f - q
        // and of the inverted twin (sin of the angle between the FD vectors,
        // skipping points where either is numerically zero).
        {
            ResidualEntry re;
            re.name = "cusp-parallelism";
            const Domain dom_inv = domain;
            DualSampler fstar_inv(inv, dom_inv, oracle_steps_per_unit);
            auto invd3_shift = [&](Point3 p) {
                const auto pd = detail::point_data(entry, p.x, p.y, p.z, h);
                return fstar(p.x, p.y, p.z) + pd.sig.s3 * (pd.s.f - q) + pd.k.k3 * pd.s.N;
            };
            auto invd3_inv = [&](Point3 p) {
                const auto pd = detail::point_data(inv, p.x, p.y, p.z, h);
                return fstar_inv(p.x, p.y, p.z) + pd.sig.s3 * pd.s.f + pd.k.k3 * pd.s.N;
            };
            double sup = 0;
            for (int axis = 0; axis < 2; ++axis)
                for (int i = 0; i < probe; ++i)
                    for (int j = 0; j < probe; ++j)
                        for (int k = 0; k < probe; ++k) {
                            const Point3 p = probe_point(i, j, k);
                            const Vec4 va = fd::d1(invd3_shift, p, axis, h);
                            const Vec4 vb = fd::d1(invd3_inv, p, axis, h);
                            if (norm(va) < 1e-8 || norm(vb) < 1e-8) continue;
                            sup = std::max(sup, sin_angle(va, vb));
                        }
            re.h = {h};
            re.sup = {sup};
            finalize_residual_entry(re, tol);
            report.all_pass = report.all_pass && re.pass;
            report.entries.push_back(re);
        }
    }
    return report;
}

}  // namespace cfdual
