#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cfdual/core.hpp"
#include "cfdual/errors.hpp"
#include "cfdual/fd.hpp"
#include "cfdual/vec4.hpp"

namespace cfdual {

struct CurvatureSet {
    double k1 = 0, k2 = 0, k3 = 0;
};

/// Eigenvalues of the Schouten-type tensor S that defines the dual via
/// df* = df o S, plus det S (the dual is regular exactly where det S != 0).
struct SchoutenEigen {
    double s1 = 0, s2 = 0, s3 = 0;
    double detS = 0;
};

inline CurvatureSet principal_curvatures(double P, double phi, double kappa3) {
    const double sn = std::sin(phi), cs = std::cos(phi);
    if (std::fabs(sn * cs) < 1e-12) throw DegenerateAngle();
    if (!(P > 0)) throw SingularSample("P must be positive");
    return {sn / (P * cs) + kappa3, -cs / (P * sn) + kappa3, kappa3};
}

inline CurvatureSet principal_curvatures(const FrameSample& s) {
    return principal_curvatures(s.P, s.phi, s.kappa3);
}

inline SchoutenEigen schouten_eigenvalues(const CurvatureSet& k) {
    SchoutenEigen s;
    s.s1 = 0.5 * (k.k1 * k.k2 - k.k2 * k.k3 + k.k3 * k.k1);
    s.s2 = 0.5 * (k.k1 * k.k2 + k.k2 * k.k3 - k.k3 * k.k1);
    s.s3 = 0.5 * (-k.k1 * k.k2 + k.k2 * k.k3 + k.k3 * k.k1);
    s.detS = s.s1 * s.s2 * s.s3;
    return s;
}

/// Dual-side pointwise quantities. kstar1/kstar2 (and sstar1/sstar2) are
/// undefined where the corresponding sigma vanishes -- those are genuine cusp
/// loci, not errors. phi* is carried as the (cos, sin) pair; the angle field
/// is produced by two-argument arctangent for reporting only.
struct DualQuantities {
    double Pstar = 0;
    double cos_phistar = 0, sin_phistar = 0;
    double phistar = 0;
    double phistar_z = 0;
    std::optional<double> kstar1, kstar2;
    double kstar3 = 0;
    std::optional<double> sstar1, sstar2;
    double sstar3 = 0;
    double K = 0, Kstar = 0;
    Vec4 A, Astar;
    double w = 0, wstar = 0;  // Moebius curvature -cos^2 phi and its dual
};

/// pinv_z is the z-derivative of 1/P at the sample point (analytic when the
/// entry provides it, finite differences otherwise); it enters only through
/// K = -(1/P)_z + kappa3 * phi_z.
inline DualQuantities dual_quantities(const FrameSample& s, const SchoutenEigen& sig,
                                      const CurvatureSet& k, double pinv_z) {
    DualQuantities d;
    d.Pstar = sig.s3 * s.P;
    d.cos_phistar = (sig.s1 / sig.s3) * std::cos(s.phi);
    d.sin_phistar = (sig.s2 / sig.s3) * std::sin(s.phi);
    d.phistar = std::atan2(d.sin_phistar, d.cos_phistar);
    d.kstar3 = -k.k3 / sig.s3;
    d.sstar3 = 1.0 / sig.s3;
    if (sig.s1 != 0.0) {
        d.kstar1 = -k.k1 / sig.s1;
        d.sstar1 = 1.0 / sig.s1;
    }
    if (sig.s2 != 0.0) {
        d.kstar2 = -k.k2 / sig.s2;
        d.sstar2 = 1.0 / sig.s2;
    }
    d.K = -pinv_z + s.kappa3 * s.phi_z;
    d.Kstar = -d.K / sig.s3;
    d.A = -s.X_gamma + s.phi_z * s.N;
    d.phistar_z = -s.phi_z + (k.k3 / sig.s3) * d.K;
    // A* = -X*_gamma + phi*_z N* with X*_gamma = X_gamma, N* = -N.
    d.Astar = -s.X_gamma - d.phistar_z * s.N;
    const double c = std::cos(s.phi);
    d.w = -c * c;
    d.wstar = -d.cos_phistar * d.cos_phistar;
    return d;
}

/// The inversion invariant K f + A and the dual invariants f* + sigma_i f +
/// kappa_i N. All three dual maps are algebraically defined everywhere, but
/// the first two are only meaningful where sigma_i != 0.
struct InvariantMaps {
    Vec4 InvI;
    Vec4 InvD1, InvD2, InvD3;
};

inline InvariantMaps invariant_maps(const FrameSample& s, const SchoutenEigen& sig,
                                    const CurvatureSet& k, const DualQuantities& d,
                                    const Vec4& fstar_value) {
    if (sig.s1 == 0.0 || sig.s2 == 0.0)
        throw UndefinedInvD("sigma_1 or sigma_2 vanishes at the point");
    InvariantMaps m;
    m.InvI = d.K * s.f + d.A;
    m.InvD1 = fstar_value + sig.s1 * s.f + k.k1 * s.N;
    m.InvD2 = fstar_value + sig.s2 * s.f + k.k2 * s.N;
    m.InvD3 = fstar_value + sig.s3 * s.f + k.k3 * s.N;
    return m;
}

namespace detail {

inline SchoutenEigen schouten_of(const FrameSample& s) {
    return schouten_eigenvalues(CurvatureSet{curvatures_of(s)[0], curvatures_of(s)[1],
                                             curvatures_of(s)[2]});
}

/// (1/P)_axis: analytic closure when available, else 4th-order central FD.
inline double pinv_deriv(const CatalogueEntry& entry, double x, double y, double z,
                         int axis, double h) {
    if (entry.pinv_grad) return entry.pinv_grad(x, y, z)[axis];
    auto field = [&](fd::Point3 p) { return 1.0 / entry.sample(p.x, p.y, p.z).P; };
    return fd::d1(field, fd::Point3{x, y, z}, axis, h);
}

}  // namespace detail

/// A sigma zero found on a coordinate line, with the transversality verdict.
struct DegeneratePoint {
    std::array<double, 3> point{};
    int axis = 0;        // 0: sigma_1 zero along an x-line; 1: sigma_2 along a y-line
    bool transversal = false;
    double criterion = 0;  // (1/P)_axis - kappa3 * phi_axis at the root
};

namespace detail {

/// Locates zeros of fn on [lo, hi]: sign changes are bisected to 1e-10; exact
/// zeros at scan points are kept as-is.
inline std::vector<double> scan_roots_1d(const std::function<double(double)>& fn,
                                         double lo, double hi, int samples) {
    std::vector<double> roots;
    double prev_t = lo, prev_v = fn(lo);
    for (int s = 1; s <= samples; ++s) {
        const double t = lo + (hi - lo) * double(s) / samples;
        const double v = fn(t);
        if (prev_v == 0.0) {
            roots.push_back(prev_t);
        } else if (v != 0.0 && std::signbit(prev_v) != std::signbit(v)) {
            double a = prev_t, b = t, fa = prev_v;
            while (b - a > 1e-10) {
                const double mid = 0.5 * (a + b);
                const double fm = fn(mid);
                if (fm == 0.0) {
                    a = b = mid;
                    break;
                }
                if (std::signbit(fa) != std::signbit(fm))
                    b = mid;
                else
                    a = mid, fa = fm;
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_t = t;
        prev_v = v;
    }
    if (prev_v == 0.0) roots.push_back(prev_t);
    return roots;
}

}  // namespace detail

/// Scans sigma_1 along x-lines and sigma_2 along y-lines of a grid x grid net
/// of coordinate lines. The transversality flag applies the cusp criterion:
/// the zero is transversal iff (1/P)_axis != kappa3 * phi_axis at the root.
inline std::vector<DegeneratePoint> detect_degenerate(const CatalogueEntry& entry,
                                                      const Domain& domain, int grid = 9,
                                                      double trans_tol = 1e-7) {
    std::vector<DegeneratePoint> found;
    const double h = 1e-3 * domain.a;
    auto sigma = [&](int which, double x, double y, double z) {
        const auto s = detail::schouten_of(entry.sample(x, y, z));
        return which == 0 ? s.s1 : s.s2;
    };
    for (int axis = 0; axis < 2; ++axis) {
        const int fixed1 = (axis == 0) ? 1 : 0;  // the two frozen axes
        for (int b1 = 0; b1 < grid; ++b1)
            for (int b2 = 0; b2 < grid; ++b2) {
                std::array<double, 3> p{};
                p[fixed1] = domain.lo(fixed1) + domain.a * double(b1) / (grid - 1);
                p[2] = domain.z0 + domain.a * double(b2) / (grid - 1);
                auto line = [&](double t) {
                    std::array<double, 3> q = p;
                    q[axis] = t;
                    return sigma(axis, q[0], q[1], q[2]);
                };
                for (double r :
                     detail::scan_roots_1d(line, domain.lo(axis), domain.hi(axis), 4 * grid)) {
                    DegeneratePoint dp;
                    dp.point = p;
                    dp.point[axis] = r;
                    dp.axis = axis;
                    const FrameSample s = entry.sample(dp.point[0], dp.point[1], dp.point[2]);
                    const double pinv_d =
                        detail::pinv_deriv(entry, dp.point[0], dp.point[1], dp.point[2], axis, h);
                    const double phi_d = (axis == 0) ? s.phi_x : s.phi_y;
                    dp.criterion = pinv_d - s.kappa3 * phi_d;
                    dp.transversal = std::fabs(dp.criterion) > trans_tol;
                    found.push_back(dp);
                }
            }
    }
    return found;
}

/// Closed-form duals of the normal forms, anchored so f*(base) = 0 with base
/// the low corner of the entry's validity box. Only classes whose formula is
/// expressible through the entry's own samples (or a stored closed form) are
/// supported; class B lacks its translation field and is reported as partial.
inline std::function<Vec4(double, double, double)> exact_dual(const CatalogueEntry& entry) {
    const double bx = entry.valid_lo[0], by = entry.valid_lo[1], bz = entry.valid_lo[2];
    auto anchored = [=](std::function<Vec4(double, double, double)> raw) {
        const Vec4 at_base = raw(bx, by, bz);
        return std::function<Vec4(double, double, double)>(
            [raw = std::move(raw), at_base](double x, double y, double z) {
                return raw(x, y, z) - at_base;
            });
    };
    switch (entry.structure_class) {
        case StructureClass::A_mu0: {
            if (!entry.exact_dual)
                throw Unsupported("class A (constant z-angle) needs the entry's stored closed form");
            auto raw = entry.exact_dual;
            return anchored([raw](double x, double y, double z) { return raw(x, y, z); });
        }
        case StructureClass::A_muz: {
            // f* = -(c^2/2) f - kappa3(z) N + q(z) B with q'(z) = c c1 cos^2 mu(z).
            const auto need = [&](const char* key) {
                auto it = entry.params.find(key);
                if (it == entry.params.end())
                    throw Unsupported(std::string("missing parameter ") + key);
                return it->second;
            };
            const double C = need("C"), c1 = need("c1"), mu0 = need("mu0");
            const Vec4 B{need("B0"), need("B1"), need("B2"), need("B3")};
            auto sample = entry.sample;
            auto mu = [sample, bx, by, bz, mu0](double z) {
                return sample(bx, by, z).phi - sample(bx, by, bz).phi + mu0;
            };
            auto q_of = [C, c1, mu, bz](double z) {
                // Composite Simpson for q(z) = int_{bz}^{z} C c1 cos^2(mu).
                const int m = 64;
                const double hh = (z - bz) / m;
                double acc = 0.0;
                for (int i = 0; i <= m; ++i) {
                    const double t = bz + i * hh;
                    const double g = C * c1 * std::cos(mu(t)) * std::cos(mu(t));
                    acc += g * ((i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0));
                }
                return acc * hh / 3.0;
            };
            return anchored([sample, C, B, q_of](double x, double y, double z) {
                const FrameSample s = sample(x, y, z);
                return -0.5 * C * C * s.f - s.kappa3 * s.N + q_of(z) * B;
            });
        }
        case StructureClass::C_mu0: {
            auto sample = entry.sample;
            return anchored([sample](double x, double y, double z) {
                const FrameSample s = sample(x, y, z);
                return -detail::schouten_of(s).s3 * s.f;
            });
        }
        case StructureClass::C_muz: {
            auto sample = entry.sample;
            return anchored([sample](double x, double y, double z) {
                const FrameSample s = sample(x, y, z);
                return -(detail::schouten_of(s).s3 * s.f + s.kappa3 * s.N);
            });
        }
        case StructureClass::B:
            throw PartialForm(
                "class B dual is sigma_3(x,y) f plus an unresolved translation field; "
                "use exact_dual_partial for the sigma_3 f part");
        default:
            throw Unsupported("no closed-form dual for a generic entry");
    }
}

/// The resolvable part of the class B dual (the sigma_3 f term).
inline std::function<Vec4(double, double, double)> exact_dual_partial(const CatalogueEntry& entry) {
    if (entry.structure_class != StructureClass::B)
        throw Unsupported("partial form applies to class B only");
    auto sample = entry.sample;
    return [sample](double x, double y, double z) {
        const FrameSample s = sample(x, y, z);
        return detail::schouten_of(s).s3 * s.f;
    };
}

}  // namespace cfdual
