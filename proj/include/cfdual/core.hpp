#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cfdual/errors.hpp"
#include "cfdual/parallel.hpp"
#include "cfdual/vec4.hpp"

namespace cfdual {

/// Pointwise data of a curvature-line-parametrized hypersurface in R^4:
/// position, orthonormal frame (X_alpha, X_beta, X_gamma, N), the conformal
/// factor P and net angle phi of the induced metric P^2(cos^2 phi dx^2 +
/// sin^2 phi dy^2 + dz^2), the middle principal curvature kappa3, and the
/// first derivatives of phi.
struct FrameSample {
    Vec4 f;
    Vec4 X_alpha, X_beta, X_gamma, N;
    double P = 1.0;
    double phi = 0.0;
    double kappa3 = 0.0;
    double phi_x = 0.0, phi_y = 0.0, phi_z = 0.0;

    // Coordinate tangents recovered from the frame.
    Vec4 fx() const { return (P * std::cos(phi)) * X_alpha; }
    Vec4 fy() const { return (P * std::sin(phi)) * X_beta; }
    Vec4 fz() const { return P * X_gamma; }
};

/// Axis-aligned cube [x0,xe] x [y0,ye] x [z0,ze] with common side length a.
struct Domain {
    double x0 = 0, xe = 1, y0 = 0, ye = 1, z0 = 0, ze = 1;
    double a = 1;

    double lo(int axis) const { return axis == 0 ? x0 : axis == 1 ? y0 : z0; }
    double hi(int axis) const { return axis == 0 ? xe : axis == 1 ? ye : ze; }
    Vec4 base() const { return {x0, y0, z0, 0.0}; }
};

/// Uniform lattice with (n+1)^3 nodes; coordinates by exact affine formula.
struct Lattice {
    Domain domain;
    int n = 1;
    double delta = 1;

    double x(int i) const { return domain.x0 + i * domain.a / n; }
    double y(int j) const { return domain.y0 + j * domain.a / n; }
    double z(int k) const { return domain.z0 + k * domain.a / n; }
    double coord(int axis, int idx) const {
        return domain.lo(axis) + idx * domain.a / n;
    }
    std::size_t node_count() const {
        const std::size_t m = static_cast<std::size_t>(n) + 1;
        return m * m * m;
    }
    std::size_t index(int i, int j, int k) const {
        const std::size_t m = static_cast<std::size_t>(n) + 1;
        return (static_cast<std::size_t>(k) * m + j) * m + i;
    }
};

/// Constants C1, C2 bounding |P|, 1/|P|, |kappa_i| and the first derivatives
/// of the kappa_i over the cube of side a. Both the raw grid suprema and the
/// safety-inflated values are kept; the inflated ones feed the bound checks.
struct BoundConstants {
    double C1 = 0, C2 = 0;
    double a = 0;
    double C1_raw = 0, C2_raw = 0;
    double safety = 1.0;
};

inline Domain build_domain(double x0, double xe, double y0, double ye, double z0, double ze) {
    const double ax = xe - x0, ay = ye - y0, az = ze - z0;
    if (!(ax > 0) || !(ay > 0) || !(az > 0)) throw UnequalSides("empty interval");
    const double a = ax;
    if (std::fabs(ay - a) > 1e-12 * a || std::fabs(az - a) > 1e-12 * a)
        throw UnequalSides("side lengths differ: the construction requires a cube");
    return Domain{x0, xe, y0, ye, z0, ze, a};
}

inline Lattice build_lattice(const Domain& domain, int n) {
    if (n < 1) throw InvalidN("lattice resolution must be >= 1");
    return Lattice{domain, n, domain.a / n};
}

/// Structure classes of the normal forms: slices in parallel hyperplanes (A),
/// rotating hyperplanes (B), concentric 3-spheres (C); the mu suffix records
/// whether the z-part of the net angle is constant (mu0) or not (muz).
enum class StructureClass { A_mu0, A_muz, B, C_mu0, C_muz, Generic };

inline const char* to_string(StructureClass s) {
    switch (s) {
        case StructureClass::A_mu0: return "A_mu0";
        case StructureClass::A_muz: return "A_muz";
        case StructureClass::B: return "B";
        case StructureClass::C_mu0: return "C_mu0";
        case StructureClass::C_muz: return "C_muz";
        default: return "Generic";
    }
}

/// An analytic hypersurface sampler. `sample` must be pure and reentrant.
/// Optional closures provide a closed-form dual, analytic kappa derivatives
/// (rows i = kappa_i, columns = x,y,z), and the analytic gradient of 1/P;
/// when absent, consumers fall back to finite differences.
struct CatalogueEntry {
    std::string name;
    StructureClass structure_class = StructureClass::Generic;
    std::map<std::string, double> params;
    std::function<FrameSample(double, double, double)> sample;
    std::function<Vec4(double, double, double)> exact_dual;  // may be empty
    std::function<std::array<std::array<double, 3>, 3>(double, double, double)>
        kappa_derivs;                                        // may be empty
    std::function<std::array<double, 3>(double, double, double)> pinv_grad;  // may be empty
    std::array<double, 3> valid_lo{0, 0, 0};
    std::array<double, 3> valid_hi{1, 1, 1};
};

namespace detail {

/// Principal curvatures straight from the metric data (first fundamental
/// form relation kappa_1 = P^-1 tan phi + kappa_3, kappa_2 = -P^-1 cot phi + kappa_3).
inline std::array<double, 3> curvatures_of(const FrameSample& s) {
    const double c = std::cos(s.phi), sn = std::sin(s.phi);
    return {sn / (s.P * c) + s.kappa3, -c / (s.P * sn) + s.kappa3, s.kappa3};
}

/// FD fallback for the kappa derivatives with a 4th-order central stencil.
inline std::array<std::array<double, 3>, 3> kappa_derivs_fd(
    const CatalogueEntry& entry, double x, double y, double z, double h) {
    std::array<std::array<double, 3>, 3> out{};
    for (int axis = 0; axis < 3; ++axis) {
        auto at = [&](double t) {
            const double xs = x + (axis == 0 ? t : 0.0);
            const double ys = y + (axis == 1 ? t : 0.0);
            const double zs = z + (axis == 2 ? t : 0.0);
            return curvatures_of(entry.sample(xs, ys, zs));
        };
        const auto p1 = at(h), m1 = at(-h), p2 = at(2 * h), m2 = at(-2 * h);
        for (int i = 0; i < 3; ++i)
            out[i][axis] = (m2[i] - p2[i] + 8.0 * (p1[i] - m1[i])) / (12.0 * h);
    }
    return out;
}

}  // namespace detail

/// Grid-sup estimate of the bound constants with a safety inflation factor.
/// kappa derivatives use the entry's analytic closure when present, otherwise
/// 4th-order central differences with step 1e-3 * a.
inline BoundConstants estimate_bound_constants(const CatalogueEntry& entry,
                                               const Domain& domain,
                                               int grid_m = 65,
                                               double safety = 1.1) {
    if (grid_m < 16) throw InvalidN("grid_m must be >= 16");
    if (!(safety >= 1.0)) throw InvalidN("safety must be >= 1");
    const double h = 1e-3 * domain.a;
    const std::size_t m = static_cast<std::size_t>(grid_m);

    std::vector<double> c1_slab(m, 0.0), c2_slab(m, 0.0);
    std::vector<char> singular(m, 0);
    parallel_for(m, [&](std::size_t ii) {
        double c1 = 0.0, c2 = 0.0;
        for (std::size_t jj = 0; jj < m; ++jj)
            for (std::size_t kk = 0; kk < m; ++kk) {
                const double x = domain.x0 + domain.a * double(ii) / double(grid_m - 1);
                const double y = domain.y0 + domain.a * double(jj) / double(grid_m - 1);
                const double z = domain.z0 + domain.a * double(kk) / double(grid_m - 1);
                const FrameSample s = entry.sample(x, y, z);
                if (!(s.P > 0) || std::sin(s.phi) * std::cos(s.phi) == 0.0) {
                    singular[ii] = 1;
                    return;
                }
                const auto k = detail::curvatures_of(s);
                c1 = std::max({c1, std::fabs(s.P), 1.0 / std::fabs(s.P),
                               std::fabs(k[0]), std::fabs(k[1]), std::fabs(k[2])});
                const auto dk = entry.kappa_derivs
                                    ? entry.kappa_derivs(x, y, z)
                                    : detail::kappa_derivs_fd(entry, x, y, z, h);
                for (const auto& row : dk)
                    for (double d : row) c2 = std::max(c2, std::fabs(d));
            }
        c1_slab[ii] = c1;
        c2_slab[ii] = c2;
    });
    for (char s : singular)
        if (s) throw SingularSample("P <= 0 or sin(phi)cos(phi) = 0 on grid");

    BoundConstants b;
    for (std::size_t i = 0; i < m; ++i) {
        b.C1_raw = std::max(b.C1_raw, c1_slab[i]);
        b.C2_raw = std::max(b.C2_raw, c2_slab[i]);
    }
    b.a = domain.a;
    b.safety = safety;
    b.C1 = safety * b.C1_raw;
    b.C2 = safety * b.C2_raw;
    return b;
}

}  // namespace cfdual
