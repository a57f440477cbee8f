#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "cfdual/core.hpp"
#include "cfdual/errors.hpp"
#include "cfdual/invariants.hpp"
#include "cfdual/parallel.hpp"
#include "cfdual/vec4.hpp"

namespace cfdual {

/// Node values of the dual f*, anchored to 0 at the base node (0,0,0).
/// Built by path integration of the exact one-form
///   df* = sigma1 f_x dx + sigma2 f_y dy + sigma3 f_z dz.
struct DualField {
    Lattice lattice;
    std::vector<Vec4> values;
    std::size_t base_index = 0;
    int substeps = 16;
    int integrator_order = 4;  // composite Simpson

    const Vec4& at(int i, int j, int k) const { return values[lattice.index(i, j, k)]; }
};

namespace detail {

/// sigma_axis * f_axis at (x,y,z) -- the integrand of the dual one-form.
inline Vec4 dual_form_component(const CatalogueEntry& entry, double x, double y, double z,
                                int axis) {
    const FrameSample s = entry.sample(x, y, z);
    const auto k = curvatures_of(s);
    const SchoutenEigen sig = schouten_eigenvalues(CurvatureSet{k[0], k[1], k[2]});
    switch (axis) {
        case 0: return sig.s1 * s.fx();
        case 1: return sig.s2 * s.fy();
        default: return sig.s3 * s.fz();
    }
}

/// Composite Simpson of an R^4-valued integrand over [0, len] (len may be
/// negative, meaning integration in the decreasing direction).
template <class Fn>
Vec4 simpson(const Fn& g, double len, int m) {
    if (len == 0.0) return {};
    const double h = len / m;
    Vec4 acc;
    for (int i = 0; i <= m; ++i) {
        const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * g(i * h);
    }
    return acc * (h / 3.0);
}

}  // namespace detail

/// Integral of the dual one-form along the axis-parallel edge starting at
/// (x,y,z) with (signed) length len, by composite Simpson with m substeps.
inline Vec4 integrate_dual_edge(const CatalogueEntry& entry, double x, double y, double z,
                                int axis, double len, int m = 16) {
    if (m < 2 || m % 2) throw InvalidN("Simpson substep count must be even and >= 2");
    return detail::simpson(
        [&](double t) {
            return detail::dual_form_component(entry, x + (axis == 0 ? t : 0.0),
                                               y + (axis == 1 ? t : 0.0),
                                               z + (axis == 2 ? t : 0.0), axis);
        },
        len, m);
}

namespace detail {

inline void check_regular(const CatalogueEntry& entry, const Domain& domain, int grid = 17,
                          double eps = 1e-10) {
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j)
            for (int k = 0; k < grid; ++k) {
                const double x = domain.x0 + domain.a * double(i) / (grid - 1);
                const double y = domain.y0 + domain.a * double(j) / (grid - 1);
                const double z = domain.z0 + domain.a * double(k) / (grid - 1);
                if (std::fabs(schouten_of(entry.sample(x, y, z)).detS) < eps)
                    throw DegenerateRegion("det S vanishes on the cube: dual not regular");
            }
}

}  // namespace detail

/// f* at every lattice node along the canonical path
/// base -> (x_i, y0, z0) -> (x_i, y_j, z0) -> (x_i, y_j, z_k).
/// `path_order` permutes the three legs (used by the path-independence test).
inline DualField reference_dual_lattice(const CatalogueEntry& entry, const Lattice& lat,
                                        int m = 16,
                                        std::array<int, 3> path_order = {0, 1, 2}) {
    detail::check_regular(entry, lat.domain, std::min(17, lat.n + 1));

    DualField field;
    field.lattice = lat;
    field.substeps = m;
    field.values.assign(lat.node_count(), Vec4{});
    const int n = lat.n;

    // Leg 1: prefix along the first axis from the base corner.
    const int a0 = path_order[0], a1 = path_order[1], a2 = path_order[2];
    std::vector<Vec4> leg1(n + 1);
    {
        std::array<double, 3> p{lat.domain.x0, lat.domain.y0, lat.domain.z0};
        for (int i = 1; i <= n; ++i) {
            p[a0] = lat.coord(a0, i - 1);
            leg1[i] = leg1[i - 1] + integrate_dual_edge(entry, p[0], p[1], p[2], a0,
                                                        lat.delta, m);
        }
    }
    // Leg 2: for each first-axis index, prefix along the second axis.
    std::vector<std::vector<Vec4>> leg2(n + 1, std::vector<Vec4>(n + 1));
    parallel_for(static_cast<std::size_t>(n) + 1, [&](std::size_t i) {
        std::array<double, 3> p{lat.domain.x0, lat.domain.y0, lat.domain.z0};
        p[a0] = lat.coord(a0, static_cast<int>(i));
        for (int j = 1; j <= n; ++j) {
            p[a1] = lat.coord(a1, j - 1);
            leg2[i][j] = leg2[i][j - 1] +
                         integrate_dual_edge(entry, p[0], p[1], p[2], a1, lat.delta, m);
        }
    });
    // Leg 3: for each (first, second) pair, prefix along the third axis.
    const std::size_t pencils = static_cast<std::size_t>(n + 1) * (n + 1);
    parallel_for(pencils, [&](std::size_t idx) {
        const int i = static_cast<int>(idx % (n + 1));
        const int j = static_cast<int>(idx / (n + 1));
        std::array<double, 3> p{lat.domain.x0, lat.domain.y0, lat.domain.z0};
        p[a0] = lat.coord(a0, i);
        p[a1] = lat.coord(a1, j);
        Vec4 acc = leg1[i] + leg2[i][j];
        std::array<int, 3> node{};
        node[a0] = i;
        node[a1] = j;
        node[a2] = 0;
        field.values[lat.index(node[0], node[1], node[2])] = acc;
        for (int k = 1; k <= n; ++k) {
            p[a2] = lat.coord(a2, k - 1);
            acc += integrate_dual_edge(entry, p[0], p[1], p[2], a2, lat.delta, m);
            node[a2] = k;
            field.values[lat.index(node[0], node[1], node[2])] = acc;
        }
    });
    return field;
}

/// Norm of the integral of the dual one-form around an axis-aligned square
/// loop; a closedness (path-independence) diagnostic for the oracle.
inline double loop_residual(const CatalogueEntry& entry, const Vec4& corner, int plane,
                            double side, int m = 16) {
    // plane 0: (x,y) loop; 1: (y,z); 2: (z,x).
    const int a = plane, b = (plane + 1) % 3;
    std::array<double, 3> p{corner[0], corner[1], corner[2]};
    Vec4 acc = integrate_dual_edge(entry, p[0], p[1], p[2], a, side, m);
    p[a] += side;
    acc += integrate_dual_edge(entry, p[0], p[1], p[2], b, side, m);
    p[b] += side;
    acc += integrate_dual_edge(entry, p[0], p[1], p[2], a, -side, m);
    p[a] -= side;
    acc += integrate_dual_edge(entry, p[0], p[1], p[2], b, -side, m);
    return norm(acc);
}

/// Evaluates f* at arbitrary points by fresh path integration (three
/// axis-parallel legs from the domain base corner), with a substep density
/// per unit length chosen for oracle-level accuracy.
class DualSampler {
  public:
    DualSampler(CatalogueEntry entry, Domain domain, double steps_per_unit = 128.0)
        : entry_(std::move(entry)), domain_(domain), spu_(steps_per_unit) {}

    Vec4 operator()(double x, double y, double z) const {
        Vec4 acc;
        acc += leg(domain_.x0, domain_.y0, domain_.z0, 0, x - domain_.x0);
        acc += leg(x, domain_.y0, domain_.z0, 1, y - domain_.y0);
        acc += leg(x, y, domain_.z0, 2, z - domain_.z0);
        return acc;
    }

  private:
    Vec4 leg(double x, double y, double z, int axis, double len) const {
        if (len == 0.0) return {};
        int m = static_cast<int>(std::ceil(std::fabs(len) * spu_));
        m = std::max(8, m + (m % 2));
        return integrate_dual_edge(entry_, x, y, z, axis, len, m);
    }

    CatalogueEntry entry_;
    Domain domain_;
    double spu_;
};

/// Builds the dual of the dual by integrating sigma*_i times the tangents of
/// f* (which are sigma_i f_x etc.), and returns the sup over lattice nodes of
/// the distance to f - f(base). Exercises the involution (f*)* = f.
inline double involution_check(const CatalogueEntry& entry, const Lattice& lat, int m = 16) {
    detail::check_regular(entry, lat.domain, std::min(17, lat.n + 1));
    auto base_sample = entry.sample;
    const int n = lat.n;
    auto component = [&](double x, double y, double z, int axis) {
        const FrameSample s = base_sample(x, y, z);
        const auto k = detail::curvatures_of(s);
        const SchoutenEigen sig = schouten_eigenvalues(CurvatureSet{k[0], k[1], k[2]});
        const double sstar =
            1.0 / (axis == 0 ? sig.s1 : axis == 1 ? sig.s2 : sig.s3);
        const Vec4 fstar_tangent = (axis == 0 ? sig.s1 * s.fx()
                                   : axis == 1 ? sig.s2 * s.fy()
                                               : sig.s3 * s.fz());
        return sstar * fstar_tangent;
    };
    auto edge = [&](std::array<double, 3> p, int axis) {
        return detail::simpson(
            [&](double t) {
                std::array<double, 3> q = p;
                q[axis] += t;
                return component(q[0], q[1], q[2], axis);
            },
            lat.delta, m);
    };

    std::vector<Vec4> xleg(n + 1);
    for (int i = 1; i <= n; ++i)
        xleg[i] = xleg[i - 1] + edge({lat.x(i - 1), lat.domain.y0, lat.domain.z0}, 0);
    std::vector<double> slab_max(n + 1, 0.0);
    parallel_for(static_cast<std::size_t>(n) + 1, [&](std::size_t i) {
        const Vec4 f_base = base_sample(lat.domain.x0, lat.domain.y0, lat.domain.z0).f;
        double worst = 0.0;
        Vec4 yacc = xleg[i];
        for (int j = 0; j <= n; ++j) {
            if (j > 0) yacc += edge({lat.x(int(i)), lat.y(j - 1), lat.domain.z0}, 1);
            Vec4 zacc = yacc;
            for (int k = 0; k <= n; ++k) {
                if (k > 0) zacc += edge({lat.x(int(i)), lat.y(j), lat.z(k - 1)}, 2);
                const Vec4 f_here = base_sample(lat.x(int(i)), lat.y(j), lat.z(k)).f;
                worst = std::max(worst, norm(zacc - (f_here - f_base)));
            }
        }
        slab_max[i] = worst;
    });
    double sup = 0.0;
    for (double s : slab_max) sup = std::max(sup, s);
    return sup;
}

}  // namespace cfdual
