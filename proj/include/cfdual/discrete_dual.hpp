#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "cfdual/core.hpp"
#include "cfdual/errors.hpp"
#include "cfdual/invariants.hpp"
#include "cfdual/parallel.hpp"
#include "cfdual/reference_dual.hpp"
#include "cfdual/vec4.hpp"

namespace cfdual {

/// Which of the two mirror constructions is used: xbar builds each slice from
/// a y-spine plus x-curves, yunder from an x-spine plus y-curves.
enum class Scheme { xbar, yunder };

inline const char* to_string(Scheme s) { return s == Scheme::xbar ? "xbar" : "yunder"; }

/// A polyline approximating one curvature line of the dual, with parameters
/// (cell endpoints plus optional intra-cell subsamples) and R^4 values.
struct DiscreteCurve {
    int axis = 0;                     // parameter axis (0 = x, 1 = y, 2 = z)
    std::array<double, 3> fixed{};    // coordinates of the curve's start point
    std::vector<double> params;
    std::vector<Vec4> values;
};

namespace detail {

/// sigma_pick selects which (sigma_i, kappa_i) pair anchors the segments:
/// 2 for the in-slice curves (sigma3, kappa3), 1 or 0 for the z-spines.
struct AnchorData {
    FrameSample s;
    double sigma = 0, kappa = 0;
};

inline AnchorData anchor_at(const CatalogueEntry& entry, double x, double y, double z,
                            int sigma_pick) {
    AnchorData a;
    a.s = entry.sample(x, y, z);
    const auto k = curvatures_of(a.s);
    const SchoutenEigen sig = schouten_eigenvalues(CurvatureSet{k[0], k[1], k[2]});
    a.sigma = (sigma_pick == 0 ? sig.s1 : sigma_pick == 1 ? sig.s2 : sig.s3);
    a.kappa = k[sigma_pick];
    return a;
}

/// One anchored segment: -sigma_bar [f(t) - f(anchor)] - kappa_bar [N(t) - N(anchor)],
/// where t replaces coordinate `axis` of the anchor point.
inline Vec4 anchored_segment(const CatalogueEntry& entry, const AnchorData& a,
                             std::array<double, 3> anchor, int axis, double t) {
    std::array<double, 3> p = anchor;
    p[axis] = t;
    const FrameSample s = entry.sample(p[0], p[1], p[2]);
    return -a.sigma * (s.f - a.s.f) - a.kappa * (s.N - a.s.N);
}

/// Prefix-concatenated curve of n anchored segments along `axis`, starting at
/// zero. subsamples >= 1 intra-cell evaluations per cell (1 = nodes only).
inline DiscreteCurve build_curve(const CatalogueEntry& entry, const Lattice& lat,
                                 std::array<double, 3> line_origin, int axis,
                                 int sigma_pick, int subsamples) {
    DiscreteCurve c;
    c.axis = axis;
    c.fixed = line_origin;
    const int n = lat.n;
    Vec4 prefix;
    c.params.push_back(line_origin[axis]);
    c.values.push_back(Vec4{});
    for (int cell = 0; cell < n; ++cell) {
        std::array<double, 3> anchor = line_origin;
        anchor[axis] = lat.coord(axis, cell);
        const AnchorData a = anchor_at(entry, anchor[0], anchor[1], anchor[2], sigma_pick);
        const double t_next = lat.coord(axis, cell + 1);
        for (int s = 1; s <= subsamples; ++s) {
            const double t = anchor[axis] + (t_next - anchor[axis]) * double(s) / subsamples;
            c.params.push_back(t);
            c.values.push_back(prefix + anchored_segment(entry, a, anchor, axis, t));
        }
        prefix = c.values.back();
    }
    return c;
}

}  // namespace detail

/// The x-direction segment anchored at node (i,j,k), evaluated at x.
inline Vec4 u_segment(const CatalogueEntry& entry, const Lattice& lat, int i, int j, int k,
                      double x) {
    const std::array<double, 3> anchor{lat.x(i), lat.y(j), lat.z(k)};
    const auto a = detail::anchor_at(entry, anchor[0], anchor[1], anchor[2], 2);
    return detail::anchored_segment(entry, a, anchor, 0, x);
}

/// The y-direction segment anchored at node (i,j,k), evaluated at y.
inline Vec4 v_segment(const CatalogueEntry& entry, const Lattice& lat, int i, int j, int k,
                      double y) {
    const std::array<double, 3> anchor{lat.x(i), lat.y(j), lat.z(k)};
    const auto a = detail::anchor_at(entry, anchor[0], anchor[1], anchor[2], 2);
    return detail::anchored_segment(entry, a, anchor, 1, y);
}

/// Concatenated x-curve along (., y_j, z_k), anchored to zero at x0.
inline DiscreteCurve u_curve(const CatalogueEntry& entry, const Lattice& lat, int j, int k,
                             int subsamples = 1) {
    return detail::build_curve(entry, lat, {lat.domain.x0, lat.y(j), lat.z(k)}, 0, 2,
                               subsamples);
}

/// Concatenated y-curve along (x_i, ., z_k), anchored to zero at y0.
inline DiscreteCurve v_curve(const CatalogueEntry& entry, const Lattice& lat, int i, int k,
                             int subsamples = 1) {
    return detail::build_curve(entry, lat, {lat.x(i), lat.domain.y0, lat.z(k)}, 1, 2,
                               subsamples);
}

/// Concatenated z-curve along (x0, y0, .), anchored to zero at z0. The xbar
/// scheme anchors (sigma2, kappa2), the yunder scheme (sigma1, kappa1); in
/// both cases the segment tangents are parallel to f*_z within each cell.
inline DiscreteCurve z_spine(const CatalogueEntry& entry, const Lattice& lat, Scheme scheme,
                             int subsamples = 1) {
    return detail::build_curve(entry, lat, {lat.domain.x0, lat.domain.y0, lat.domain.z0}, 2,
                               scheme == Scheme::xbar ? 1 : 0, subsamples);
}

/// One z-slice of the discrete dual. `nodes` holds the (n+1)^2 net values
/// (index j*(n+1)+i), anchored to zero at (x0,y0); `spine` and `lines` retain
/// the defining curves with their subsamples.
struct DiscreteDualSurface {
    int k = 0;
    Scheme scheme = Scheme::xbar;
    Lattice lattice;
    std::vector<Vec4> nodes;
    DiscreteCurve spine;
    std::vector<DiscreteCurve> lines;

    const Vec4& node(int i, int j) const { return nodes[std::size_t(j) * (lattice.n + 1) + i]; }
};

/// Slice built from the y-spine at x0 plus one x-curve per y_j.
inline DiscreteDualSurface surface_xbar(const CatalogueEntry& entry, const Lattice& lat,
                                        int k, int subsamples = 1) {
    DiscreteDualSurface s;
    s.k = k;
    s.scheme = Scheme::xbar;
    s.lattice = lat;
    const int n = lat.n;
    s.spine = detail::build_curve(entry, lat, {lat.domain.x0, lat.domain.y0, lat.z(k)}, 1, 2,
                                  subsamples);
    s.nodes.assign(std::size_t(n + 1) * (n + 1), Vec4{});
    s.lines.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        const Vec4 spine_j = s.spine.values[std::size_t(j) * subsamples];
        s.lines[j] = u_curve(entry, lat, j, k, subsamples);
        for (auto& v : s.lines[j].values) v += spine_j;
        for (int i = 0; i <= n; ++i)
            s.nodes[std::size_t(j) * (n + 1) + i] =
                s.lines[j].values[std::size_t(i) * subsamples];
    }
    return s;
}

/// Mirror slice: x-spine at y0 plus one y-curve per x_i.
inline DiscreteDualSurface surface_yunder(const CatalogueEntry& entry, const Lattice& lat,
                                          int k, int subsamples = 1) {
    DiscreteDualSurface s;
    s.k = k;
    s.scheme = Scheme::yunder;
    s.lattice = lat;
    const int n = lat.n;
    s.spine = detail::build_curve(entry, lat, {lat.domain.x0, lat.domain.y0, lat.z(k)}, 0, 2,
                                  subsamples);
    s.nodes.assign(std::size_t(n + 1) * (n + 1), Vec4{});
    s.lines.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        const Vec4 spine_i = s.spine.values[std::size_t(i) * subsamples];
        s.lines[i] = v_curve(entry, lat, i, k, subsamples);
        for (auto& v : s.lines[i].values) v += spine_i;
        for (int j = 0; j <= n; ++j)
            s.nodes[std::size_t(j) * (n + 1) + i] =
                s.lines[i].values[std::size_t(j) * subsamples];
    }
    return s;
}

/// The assembled discrete dual on the full lattice: z-spine plus one slice
/// per z-level, each translated so its (x0,y0) corner sits on the spine.
struct DiscreteDualHypersurface {
    Lattice lattice;
    Scheme scheme = Scheme::xbar;
    std::vector<Vec4> values;  // (n+1)^3 node values, base node = 0
    DiscreteCurve spine;

    const Vec4& at(int i, int j, int k) const { return values[lattice.index(i, j, k)]; }
};

inline DiscreteDualHypersurface assemble(const CatalogueEntry& entry, const Lattice& lat,
                                         Scheme scheme, int subsamples = 1) {
    detail::check_regular(entry, lat.domain, std::min(17, lat.n + 1));
    DiscreteDualHypersurface h;
    h.lattice = lat;
    h.scheme = scheme;
    h.spine = z_spine(entry, lat, scheme, subsamples);
    h.values.assign(lat.node_count(), Vec4{});
    const int n = lat.n;
    parallel_for(std::size_t(n) + 1, [&](std::size_t k) {
        const Vec4 spine_k = h.spine.values[k * subsamples];
        const DiscreteDualSurface s =
            (scheme == Scheme::xbar) ? surface_xbar(entry, lat, int(k), 1)
                                     : surface_yunder(entry, lat, int(k), 1);
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i)
                h.values[lat.index(i, j, int(k))] = spine_k + s.node(i, j);
    });
    return h;
}

namespace detail {

/// Generic end-matched connector over one cell edge along `axis`:
///   (n/a) [ (t1 - t) fwd(t) + (t - t0) (b + bwd(t)) ],
/// where fwd is the segment anchored at the edge start, bwd the reversed
/// segment anchored at the same point but measured from the edge end, and b
/// the difference of the already-assembled values at the edge's endpoints.
inline DiscreteCurve build_connector(const CatalogueEntry& entry, const Lattice& lat,
                                     std::array<double, 3> edge_start, int axis,
                                     int sigma_pick, const Vec4& value_start,
                                     const Vec4& value_end, int subsamples) {
    DiscreteCurve c;
    c.axis = axis;
    c.fixed = edge_start;
    const double t0 = edge_start[axis];
    const double t1 = t0 + lat.delta;
    const Vec4 b = value_end - value_start;
    const AnchorData a = anchor_at(entry, edge_start[0], edge_start[1], edge_start[2],
                                   sigma_pick);
    std::array<double, 3> edge_end = edge_start;
    edge_end[axis] = t1;
    const FrameSample s_end = entry.sample(edge_end[0], edge_end[1], edge_end[2]);
    const double inv_delta = 1.0 / lat.delta;
    for (int s = 0; s <= subsamples; ++s) {
        const double t = t0 + (t1 - t0) * double(s) / subsamples;
        std::array<double, 3> p = edge_start;
        p[axis] = t;
        const FrameSample sp = entry.sample(p[0], p[1], p[2]);
        const Vec4 fwd = -a.sigma * (sp.f - a.s.f) - a.kappa * (sp.N - a.s.N);
        const Vec4 bwd = a.sigma * (s_end.f - sp.f) + a.kappa * (s_end.N - sp.N);
        const Vec4 blend = inv_delta * ((t1 - t) * fwd + (t - t0) * (b + bwd));
        c.params.push_back(t);
        c.values.push_back(value_start + blend);
    }
    return c;
}

}  // namespace detail

/// Connector along the in-slice edge the scheme does not cover by full
/// curves: the y-edge (x_i, [y_j, y_{j+1}], z_k) for xbar slices, the x-edge
/// ([x_i, x_{i+1}], y_j, z_k) for yunder slices. Endpoint values are taken
/// from the slice's node net; interior values interpolate between the two
/// parallel-transported segment copies.
inline DiscreteCurve connector_v(const CatalogueEntry& entry, const DiscreteDualSurface& s,
                                 int i, int j, int k, int subsamples = 8) {
    const Lattice& lat = s.lattice;
    if (s.scheme == Scheme::xbar) {
        return detail::build_connector(entry, lat, {lat.x(i), lat.y(j), lat.z(k)}, 1, 2,
                                       s.node(i, j), s.node(i, j + 1), subsamples);
    }
    return detail::build_connector(entry, lat, {lat.x(i), lat.y(j), lat.z(k)}, 0, 2,
                                   s.node(i, j), s.node(i + 1, j), subsamples);
}

/// Connector along the z-edge between assembled nodes (i,j,k) and (i,j,k+1),
/// built from the scheme's z-spine anchor pair ((sigma2,kappa2) for xbar,
/// (sigma1,kappa1) for yunder).
inline DiscreteCurve connector_z(const CatalogueEntry& entry,
                                 const DiscreteDualHypersurface& h, int i, int j, int k,
                                 int subsamples = 8) {
    const Lattice& lat = h.lattice;
    return detail::build_connector(entry, lat, {lat.x(i), lat.y(j), lat.z(k)}, 2,
                                   h.scheme == Scheme::xbar ? 1 : 0, h.at(i, j, k),
                                   h.at(i, j, k + 1), subsamples);
}

/// Sup over the edge of the constant-vector identity satisfied by the two
/// parallel-transported copies: -fwd(t) + bwd(t) = -fwd(t1) for all t. An
/// algebraic telescoping identity, so the result must sit at machine noise.
inline double connector_constant_identity(const CatalogueEntry& entry, const Lattice& lat,
                                          std::array<double, 3> edge_start, int axis,
                                          int sigma_pick, int subsamples = 16) {
    const auto a = detail::anchor_at(entry, edge_start[0], edge_start[1], edge_start[2],
                                     sigma_pick);
    const double t0 = edge_start[axis], t1 = t0 + lat.delta;
    std::array<double, 3> e = edge_start;
    e[axis] = t1;
    const FrameSample s_end = entry.sample(e[0], e[1], e[2]);
    const Vec4 expected = a.sigma * (s_end.f - a.s.f) + a.kappa * (s_end.N - a.s.N);
    double sup = 0;
    for (int s = 0; s <= subsamples; ++s) {
        const double t = t0 + (t1 - t0) * double(s) / subsamples;
        std::array<double, 3> p = edge_start;
        p[axis] = t;
        const FrameSample sp = entry.sample(p[0], p[1], p[2]);
        const Vec4 fwd = -a.sigma * (sp.f - a.s.f) - a.kappa * (sp.N - a.s.N);
        const Vec4 bwd = a.sigma * (s_end.f - sp.f) + a.kappa * (s_end.N - sp.N);
        sup = std::max(sup, norm((-1.0) * fwd + bwd - expected));
    }
    return sup;
}

/// The second-order edge mismatch: || [value(end) - value(start)] - segment
/// anchored at the start evaluated at the end ||, over one in-slice edge.
inline double connector_edge_residual(const CatalogueEntry& entry,
                                      const DiscreteDualSurface& s, int i, int j) {
    const Lattice& lat = s.lattice;
    if (s.scheme == Scheme::xbar) {
        const Vec4 a_ij = s.node(i, j + 1) - s.node(i, j);
        return norm(a_ij - v_segment(entry, lat, i, j, s.k, lat.y(j + 1)));
    }
    const Vec4 a_ij = s.node(i + 1, j) - s.node(i, j);
    return norm(a_ij - u_segment(entry, lat, i, j, s.k, lat.x(i + 1)));
}

}  // namespace cfdual
