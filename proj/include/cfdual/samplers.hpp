#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cfdual/core.hpp"
#include "cfdual/errors.hpp"
#include "cfdual/fd.hpp"
#include "cfdual/invariants.hpp"
#include "cfdual/vec4.hpp"

namespace cfdual {

/// Tractrix pseudosphere (Gauss curvature -1) crossed with a line:
///   f(u,v,z) = (sech u cos v, sech u sin v, u - tanh u, z).
/// The induced metric is tanh^2 u du^2 + sech^2 u dv^2 + dz^2, so the
/// curvature-line coordinates are already canonical with P = 1,
/// cos phi = tanh u, sin phi = sech u, kappa3 = 0. P_const must be 1; the
/// parameter is kept in the signature to document the canonicity condition.
inline CatalogueEntry pseudosphere_cylinder(double P_const,
                                            std::pair<double, double> u_window,
                                            std::pair<double, double> v_window,
                                            std::pair<double, double> z_window) {
    if (!(P_const > 0)) throw InvalidWindow("P_const must be positive");
    if (P_const != 1.0)
        throw InvalidWindow("P_const must be 1: the tractrix parametrization is canonical only then");
    if (u_window.first <= 0.0 || u_window.second <= u_window.first)
        throw InvalidWindow("u-window must be positive and bounded away from 0");

    CatalogueEntry e;
    e.name = "pseudosphere-cylinder";
    e.structure_class = StructureClass::A_mu0;
    e.params = {{"P", 1.0}};
    e.valid_lo = {u_window.first, v_window.first, z_window.first};
    e.valid_hi = {u_window.second, v_window.second, z_window.second};

    e.sample = [](double u, double v, double z) {
        const double sech = 1.0 / std::cosh(u);
        const double th = std::tanh(u);
        const double cv = std::cos(v), sv = std::sin(v);
        FrameSample s;
        s.f = {sech * cv, sech * sv, u - th, z};
        s.X_alpha = {-sech * cv, -sech * sv, th, 0.0};
        s.X_beta = {-sv, cv, 0.0, 0.0};
        s.X_gamma = {0.0, 0.0, 0.0, 1.0};
        s.N = {th * cv, th * sv, sech, 0.0};
        s.P = 1.0;
        s.phi = std::atan2(sech, th);  // cos phi = tanh u, sin phi = sech u
        s.kappa3 = 0.0;
        s.phi_x = -sech;
        s.phi_y = 0.0;
        s.phi_z = 0.0;
        return s;
    };
    // kappa1 = csch u, kappa2 = -sinh u, kappa3 = 0; only u-derivatives survive.
    e.kappa_derivs = [](double u, double, double) {
        std::array<std::array<double, 3>, 3> d{};
        const double csch = 1.0 / std::sinh(u);
        d[0][0] = -csch * csch * std::cosh(u);
        d[1][0] = -std::cosh(u);
        return d;
    };
    e.pinv_grad = [](double, double, double) { return std::array<double, 3>{0.0, 0.0, 0.0}; };
    e.exact_dual = [](double u, double v, double z) {
        const double sech = 1.0 / std::cosh(u);
        return Vec4{-0.5 * sech * std::cos(v), -0.5 * sech * std::sin(v),
                    -0.5 * (u - std::tanh(u)), 0.5 * z};
    };
    return e;
}

/// Composition with the sphere inversion centered at q, in the translation-
/// blind form x -> (x - q)/||x - q||^2. Positions map through the inversion,
/// frame vectors through the reflection Z -> Z - 2<Z, f-q>(f-q)/||f-q||^2,
/// and P -> P/||f-q||^2, kappa3 -> ||f-q||^2 kappa3 + 2<N, f-q>; the net
/// angle phi and its derivatives are unchanged.
inline CatalogueEntry invert_entry(const CatalogueEntry& entry, const Vec4& q,
                                   int grid_check = 17) {
    const double a =
        std::max({entry.valid_hi[0] - entry.valid_lo[0], entry.valid_hi[1] - entry.valid_lo[1],
                  entry.valid_hi[2] - entry.valid_lo[2]});
    double min_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_check; ++i)
        for (int j = 0; j < grid_check; ++j)
            for (int k = 0; k < grid_check; ++k) {
                const double x = entry.valid_lo[0] +
                                 (entry.valid_hi[0] - entry.valid_lo[0]) * double(i) / (grid_check - 1);
                const double y = entry.valid_lo[1] +
                                 (entry.valid_hi[1] - entry.valid_lo[1]) * double(j) / (grid_check - 1);
                const double z = entry.valid_lo[2] +
                                 (entry.valid_hi[2] - entry.valid_lo[2]) * double(k) / (grid_check - 1);
                min_dist = std::min(min_dist, norm(entry.sample(x, y, z).f - q));
            }
    if (min_dist < 1e-3 * a) throw CenterTooClose("inversion center too close to the surface");

    CatalogueEntry e;
    e.name = entry.name + "+inverted";
    e.structure_class = StructureClass::Generic;
    e.params = entry.params;
    e.params["q0"] = q[0];
    e.params["q1"] = q[1];
    e.params["q2"] = q[2];
    e.params["q3"] = q[3];
    e.valid_lo = entry.valid_lo;
    e.valid_hi = entry.valid_hi;

    auto base_sample = entry.sample;
    e.sample = [base_sample, q](double x, double y, double z) {
        const FrameSample s = base_sample(x, y, z);
        const Vec4 w = s.f - q;
        const double r2 = norm2(w);
        auto reflect = [&](const Vec4& Z) { return Z - (2.0 * dot(Z, w) / r2) * w; };
        FrameSample t;
        t.f = w / r2;
        t.X_alpha = reflect(s.X_alpha);
        t.X_beta = reflect(s.X_beta);
        t.X_gamma = reflect(s.X_gamma);
        t.N = reflect(s.N);
        t.P = s.P / r2;
        t.phi = s.phi;
        t.kappa3 = r2 * s.kappa3 + 2.0 * dot(s.N, w);
        t.phi_x = s.phi_x;
        t.phi_y = s.phi_y;
        t.phi_z = s.phi_z;
        return t;
    };
    // (1/P)^q = ||f-q||^2 / P, so its gradient chains through d(r^2) = 2<f_axis, f-q>.
    if (entry.pinv_grad) {
        auto base_pinv = entry.pinv_grad;
        e.pinv_grad = [base_sample, base_pinv, q](double x, double y, double z) {
            const FrameSample s = base_sample(x, y, z);
            const Vec4 w = s.f - q;
            const double r2 = norm2(w);
            const std::array<double, 3> bp = base_pinv(x, y, z);
            const Vec4 tang[3] = {s.fx(), s.fy(), s.fz()};
            std::array<double, 3> out{};
            for (int axis = 0; axis < 3; ++axis)
                out[axis] = 2.0 * dot(tang[axis], w) / s.P + r2 * bp[axis];
            return out;
        };
    }
    return e;
}

/// Inverted cylinder with a cusp locus: the center sits 0.4 units from
/// f(1, 0.5, 0.5) along cos(0.6) X_alpha + sin(0.6) N, placed so that sigma_1
/// of the inverted entry changes sign transversally on interior x-lines while
/// the surface stays well separated from the center. The resulting entry is
/// the catalogue's degenerate-dual specimen (its dual has cusps, so the
/// regular-region constructions refuse it and only curve-level experiments
/// apply).
inline CatalogueEntry cusp_probe_entry() {
    const CatalogueEntry base = pseudosphere_cylinder(1.0, {0.5, 1.5}, {0, 1}, {0, 1});
    const FrameSample s0 = base.sample(1.0, 0.5, 0.5);
    const Vec4 q = s0.f + 0.4 * (std::sin(0.6) * s0.N + std::cos(0.6) * s0.X_alpha);
    CatalogueEntry e = invert_entry(base, q);
    e.name = "pseudosphere-cylinder+cusp";
    return e;
}

/// Composition with a Euclidean motion x -> R x + t. All Guichard scalars are
/// motion-invariant; positions and frame vectors rotate, positions translate,
/// and the stored closed-form dual (defined up to translation) just rotates.
inline CatalogueEntry rigid_motion_entry(const CatalogueEntry& entry, const Mat4& rotation,
                                         const Vec4& translation) {
    double defect = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double g = 0.0;
            for (int k = 0; k < 4; ++k) g += rotation(k, i) * rotation(k, j);
            defect = std::max(defect, std::fabs(g - (i == j ? 1.0 : 0.0)));
        }
    if (defect > 1e-12 || std::fabs(det(rotation) - 1.0) > 1e-12)
        throw NotOrthogonal("rotation must be orthogonal with determinant +1");

    CatalogueEntry e = entry;
    e.name = entry.name + "+moved";
    auto base_sample = entry.sample;
    e.sample = [base_sample, rotation, translation](double x, double y, double z) {
        FrameSample s = base_sample(x, y, z);
        s.f = rotation.apply(s.f) + translation;
        s.X_alpha = rotation.apply(s.X_alpha);
        s.X_beta = rotation.apply(s.X_beta);
        s.X_gamma = rotation.apply(s.X_gamma);
        s.N = rotation.apply(s.N);
        return s;
    };
    if (entry.exact_dual) {
        auto base_dual = entry.exact_dual;
        e.exact_dual = [base_dual, rotation](double x, double y, double z) {
            return rotation.apply(base_dual(x, y, z));
        };
    }
    return e;
}

/// Relabels the first two curvature-line coordinates: the returned entry
/// samples the same hypersurface with (x', y') = (y, x) and phi' = phi + pi/2
/// (so cos^2 phi' dx'^2 + sin^2 phi' dy'^2 = sin^2 phi dy^2 + cos^2 phi dx^2).
/// This swaps kappa1 <-> kappa2 and sigma1 <-> sigma2 and turns the y-based
/// discrete construction into the x-based one.
inline CatalogueEntry swap_xy_entry(const CatalogueEntry& entry) {
    CatalogueEntry e;
    e.name = entry.name + "+xyswap";
    e.structure_class = StructureClass::Generic;
    e.params = entry.params;
    e.valid_lo = {entry.valid_lo[1], entry.valid_lo[0], entry.valid_lo[2]};
    e.valid_hi = {entry.valid_hi[1], entry.valid_hi[0], entry.valid_hi[2]};
    auto base_sample = entry.sample;
    e.sample = [base_sample](double x, double y, double z) {
        const FrameSample s = base_sample(y, x, z);
        FrameSample t = s;
        t.phi = s.phi + 1.5707963267948966;  // pi/2
        t.X_alpha = -s.X_beta;
        t.X_beta = s.X_alpha;
        t.phi_x = s.phi_y;
        t.phi_y = s.phi_x;
        return t;
    };
    if (entry.pinv_grad) {
        auto bp = entry.pinv_grad;
        e.pinv_grad = [bp](double x, double y, double z) {
            const auto g = bp(y, x, z);
            return std::array<double, 3>{g[1], g[0], g[2]};
        };
    }
    return e;
}

}  // namespace cfdual
