#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cfdual/core.hpp"
#include "cfdual/discrete_dual.hpp"
#include "cfdual/errors.hpp"
#include "cfdual/invariants.hpp"
#include "cfdual/reference_dual.hpp"
#include "cfdual/report.hpp"
#include "cfdual/vec4.hpp"

namespace cfdual {

struct SlopeFit {
    double slope = 0, intercept = 0, ci95 = 0;
    bool floored = false;  // some errors were exact zeros, floored to eps
};

/// Least squares of log(err) against log(n). Exact zeros are floored to
/// machine epsilon and flagged; negative errors are rejected.
inline SlopeFit fit_slope(const std::vector<std::pair<int, double>>& points) {
    if (points.size() < 3) throw NonPositiveError("need at least 3 points for a slope fit");
    SlopeFit out;
    std::vector<double> lx, ly;
    for (const auto& [n, err] : points) {
        if (err < 0) throw NonPositiveError("negative error in slope fit");
        double e = err;
        if (e == 0.0) {
            e = 2.220446049250313e-16;
            out.floored = true;
        }
        lx.push_back(std::log(double(n)));
        ly.push_back(std::log(e));
    }
    const LineFit f = least_squares(lx, ly);
    out.slope = f.slope;
    out.intercept = f.intercept;
    out.ci95 = 1.96 * f.stderr_slope;
    return out;
}

struct ConvergenceRow {
    int n = 0;
    double delta = 0;
    double sup_error = 0;          // discrete dual vs reference, over all nodes
    double bound = 0;              // 6 C1^2 C2 a^3 / n with inflated constants
    bool satisfied = false;
    double slice_sup_error = 0;    // worst per-slice error over slices
    double slice_bound = 0;        // 4 C1^2 C2 a^2 / n
    bool slice_satisfied = false;
    double connector_residual = 0; // sup edge mismatch at the middle slice
};

struct ConvergenceReport {
    std::string entry_name;
    Scheme scheme = Scheme::xbar;
    BoundConstants constants;
    std::vector<ConvergenceRow> rows;
    SlopeFit error_fit;
    SlopeFit connector_fit;
    bool all_bounds_satisfied = true;
    bool at_noise_floor = false;  // all sup errors at machine noise (exact scheme)
};

/// Runs the discrete construction for each n, compares against the reference
/// dual on the lattice nodes, and records bound verdicts and slope fits. The
/// cube is the entry's validity box (which must be a cube).
inline ConvergenceReport sweep(const CatalogueEntry& entry, Scheme scheme,
                               const std::vector<int>& n_list, int m_ref = 16,
                               int constants_grid = 33, double safety = 1.1) {
    if (n_list.size() < 3) throw InvalidN("n_list must have at least 3 increasing values");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1]) throw InvalidN("n_list must be increasing");

    const Domain domain = build_domain(entry.valid_lo[0], entry.valid_hi[0], entry.valid_lo[1],
                                       entry.valid_hi[1], entry.valid_lo[2], entry.valid_hi[2]);
    ConvergenceReport rep;
    rep.entry_name = entry.name;
    rep.scheme = scheme;
    rep.constants = estimate_bound_constants(entry, domain, constants_grid, safety);
    const double a = domain.a;
    const double cc = rep.constants.C1 * rep.constants.C1 * rep.constants.C2;

    for (int n : n_list) {
        const Lattice lat = build_lattice(domain, n);
        const DualField ref = reference_dual_lattice(entry, lat, m_ref);
        const DiscreteDualHypersurface disc = assemble(entry, lat, scheme);

        ConvergenceRow row;
        row.n = n;
        row.delta = lat.delta;
        row.bound = 6.0 * cc * a * a * a / n;
        row.slice_bound = 4.0 * cc * a * a / n;

        double sup = 0, slice_sup = 0;
        for (int k = 0; k <= n; ++k) {
            // Per-slice comparison in the slice's own gauge: both the slice
            // net and the reference are re-anchored at (x0, y0, z_k).
            double slice_err = 0;
            const Vec4 ref_anchor = ref.at(0, 0, k);
            const Vec4 disc_anchor = disc.at(0, 0, k);
            for (int j = 0; j <= n; ++j)
                for (int i = 0; i <= n; ++i) {
                    const Vec4 err = disc.at(i, j, k) - ref.at(i, j, k);
                    sup = std::max(sup, norm(err));
                    slice_err = std::max(
                        slice_err, norm((disc.at(i, j, k) - disc_anchor) -
                                        (ref.at(i, j, k) - ref_anchor)));
                }
            slice_sup = std::max(slice_sup, slice_err);
        }
        row.sup_error = sup;
        row.slice_sup_error = slice_sup;
        row.satisfied = sup <= row.bound;
        row.slice_satisfied = slice_sup <= row.slice_bound;

        const int kmid = n / 2;
        const DiscreteDualSurface smid = (scheme == Scheme::xbar)
                                             ? surface_xbar(entry, lat, kmid)
                                             : surface_yunder(entry, lat, kmid);
        double conn = 0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                conn = std::max(conn, connector_edge_residual(entry, smid, i, j));
        row.connector_residual = conn;

        rep.all_bounds_satisfied =
            rep.all_bounds_satisfied && row.satisfied && row.slice_satisfied;
        rep.rows.push_back(row);
    }

    std::vector<std::pair<int, double>> err_pts, conn_pts;
    double max_err = 0;
    for (const auto& r : rep.rows) {
        err_pts.push_back({r.n, r.sup_error});
        conn_pts.push_back({r.n, r.connector_residual});
        max_err = std::max(max_err, r.sup_error);
    }
    rep.at_noise_floor = max_err < 1e-12;
    rep.error_fit = fit_slope(err_pts);
    rep.connector_fit = fit_slope(conn_pts);
    return rep;
}

struct CuspReport {
    std::array<double, 3> root{};      // bisected sigma1 zero on an x-line
    double root_criterion = 0;         // transversality criterion value there
    double min_speed_x = 0;            // polyline speed minimum along the x-curve
    double localization_error = 0;     // |min_speed_x - root_x|
    double tangent_dot = 0;            // most negative consecutive-tangent dot near the root
    bool reversal_within_2delta = false;
    double delta = 0;
    int n = 0;
};

/// Builds the discrete dual x-curve through a transversal sigma1 zero and
/// verifies the cusp signature: a direction reversal of the polyline tangent
/// near the root and a speed minimum converging to it.
inline CuspReport cusp_experiment(const CatalogueEntry& entry, int n, int subsamples = 32) {
    const Domain domain = build_domain(entry.valid_lo[0], entry.valid_hi[0], entry.valid_lo[1],
                                       entry.valid_hi[1], entry.valid_lo[2], entry.valid_hi[2]);
    std::vector<DegeneratePoint> roots = detect_degenerate(entry, domain, 9);
    const DegeneratePoint* pick = nullptr;
    for (const auto& r : roots)
        if (r.axis == 0 && r.transversal &&
            r.point[0] > domain.x0 + 0.05 * domain.a &&
            r.point[0] < domain.xe - 0.05 * domain.a) {
            pick = &r;
            break;
        }
    if (!pick) throw NoDegeneratePoint("no transversal sigma1 zero on any scanned x-line");

    const Lattice lat = build_lattice(domain, n);
    CuspReport rep;
    rep.root = pick->point;
    rep.root_criterion = pick->criterion;
    rep.n = n;
    rep.delta = lat.delta;

    // Snap the root's line to the nearest lattice line so the curve is one of
    // the construction's own x-curves.
    const DiscreteCurve curve = detail::build_curve(
        entry, lat, {domain.x0, pick->point[1], pick->point[2]}, 0, 2, subsamples);

    // Polyline tangents between consecutive subsamples.
    double best_dot = 1.0, best_dot_x = 0;
    double min_speed = std::numeric_limits<double>::infinity(), min_speed_x = 0;
    for (std::size_t s = 0; s + 1 < curve.values.size(); ++s) {
        const Vec4 seg = curve.values[s + 1] - curve.values[s];
        const double dt = curve.params[s + 1] - curve.params[s];
        const double speed = norm(seg) / dt;
        const double xm = 0.5 * (curve.params[s] + curve.params[s + 1]);
        if (speed < min_speed) {
            min_speed = speed;
            min_speed_x = xm;
        }
        if (s > 0) {
            const Vec4 prev = curve.values[s] - curve.values[s - 1];
            const double d = dot(prev, seg);
            if (std::fabs(xm - rep.root[0]) <= 2 * lat.delta && d < best_dot) {
                best_dot = d;
                best_dot_x = xm;
            }
        }
    }
    rep.min_speed_x = min_speed_x;
    rep.localization_error = std::fabs(min_speed_x - rep.root[0]);
    rep.tangent_dot = best_dot;
    rep.reversal_within_2delta =
        best_dot < 0 && std::fabs(best_dot_x - rep.root[0]) <= 2 * lat.delta;
    return rep;
}

}  // namespace cfdual
