#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfdual/convergence.hpp"
#include "cfdual/discrete_dual.hpp"
#include "cfdual/errors.hpp"
#include "cfdual/reference_dual.hpp"
#include "cfdual/report.hpp"
#include "cfdual/vec4.hpp"

namespace cfdual {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// JSON serialization of reports and fields
// ---------------------------------------------------------------------------

inline json to_json(const Vec4& v) { return json::array({v[0], v[1], v[2], v[3]}); }

inline json to_json(const ResidualEntry& e) {
    return json{{"name", e.name}, {"h", e.h}, {"sup", e.sup}, {"order", e.order},
                {"pass", e.pass}};
}

inline json to_json(const ResidualReport& r) {
    json entries = json::array();
    for (const auto& e : r.entries) entries.push_back(to_json(e));
    return json{{"tol", r.tol}, {"all_pass", r.all_pass}, {"entries", entries}};
}

inline json to_json(const Lattice& lat) {
    return json{{"n", lat.n},
                {"delta", lat.delta},
                {"domain", {{"x0", lat.domain.x0}, {"y0", lat.domain.y0},
                            {"z0", lat.domain.z0}, {"a", lat.domain.a}}}};
}

inline json to_json(const DualField& f) {
    json vals = json::array();
    for (const auto& v : f.values) vals.push_back(to_json(v));
    return json{{"kind", "dual_field"},
                {"lattice", to_json(f.lattice)},
                {"substeps", f.substeps},
                {"integrator_order", f.integrator_order},
                {"base_index", f.base_index},
                {"values", vals}};
}

inline json to_json(const DiscreteDualHypersurface& h) {
    json vals = json::array();
    for (const auto& v : h.values) vals.push_back(to_json(v));
    return json{{"kind", "discrete_dual"},
                {"lattice", to_json(h.lattice)},
                {"scheme", to_string(h.scheme)},
                {"values", vals}};
}

inline json to_json(const SlopeFit& f) {
    return json{{"slope", f.slope}, {"intercept", f.intercept}, {"ci95", f.ci95},
                {"floored", f.floored}};
}

inline json to_json(const ConvergenceReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back(json{{"n", row.n},
                            {"delta", row.delta},
                            {"sup_error", row.sup_error},
                            {"bound", row.bound},
                            {"satisfied", row.satisfied},
                            {"slice_sup_error", row.slice_sup_error},
                            {"slice_bound", row.slice_bound},
                            {"slice_satisfied", row.slice_satisfied},
                            {"connector_residual", row.connector_residual}});
    return json{{"entry", r.entry_name},
                {"scheme", to_string(r.scheme)},
                {"constants", {{"C1", r.constants.C1},
                               {"C2", r.constants.C2},
                               {"C1_raw", r.constants.C1_raw},
                               {"C2_raw", r.constants.C2_raw},
                               {"a", r.constants.a},
                               {"safety", r.constants.safety}}},
                {"rows", rows},
                {"error_fit", to_json(r.error_fit)},
                {"connector_fit", to_json(r.connector_fit)},
                {"all_bounds_satisfied", r.all_bounds_satisfied},
                {"at_noise_floor", r.at_noise_floor}};
}

inline json to_json(const CuspReport& r) {
    return json{{"root", {r.root[0], r.root[1], r.root[2]}},
                {"root_criterion", r.root_criterion},
                {"min_speed_x", r.min_speed_x},
                {"localization_error", r.localization_error},
                {"tangent_dot", r.tangent_dot},
                {"reversal_within_2delta", r.reversal_within_2delta},
                {"delta", r.delta},
                {"n", r.n}};
}

// ---------------------------------------------------------------------------
// Sweep CSV: fixed header, running slope over the rows seen so far
// ---------------------------------------------------------------------------

/// Columns: n, delta, sup_error, bound, satisfied, slope_running. The running
/// slope is the log-log fit over rows 1..i; the first row has no slope and
/// prints "nan". Number formatting is locale-independent for byte-identical
/// reruns.
inline std::string sweep_csv(const ConvergenceReport& r) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out << "n,delta,sup_error,bound,satisfied,slope_running\n";
    std::vector<double> lx, ly;
    out.precision(17);
    for (const auto& row : r.rows) {
        lx.push_back(std::log(double(row.n)));
        ly.push_back(std::log(std::max(row.sup_error, 2.220446049250313e-16)));
        out << row.n << ',' << row.delta << ',' << row.sup_error << ',' << row.bound << ','
            << (row.satisfied ? "true" : "false") << ',';
        if (lx.size() < 2)
            out << "nan";
        else
            out << least_squares(lx, ly).slope;
        out << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// R^4 -> R^3 projections for geometry export
// ---------------------------------------------------------------------------

enum class ProjectionMode { drop_w, stereographic };

inline ProjectionMode projection_mode_from_string(const std::string& s) {
    if (s == "drop_w") return ProjectionMode::drop_w;
    if (s == "stereographic") return ProjectionMode::stereographic;
    throw Unsupported("unknown projection mode: " + s);
}

/// drop_w forgets the fourth coordinate. The stereographic mode projects from
/// a center onto the hyperplane through the data's bounding-box center
/// orthogonal to the fourth axis; the center sits at least 10 bounding-box
/// diameters away along +w, so the denominator is bounded away from zero.
struct Projection {
    ProjectionMode mode = ProjectionMode::drop_w;
    Vec4 center;       // stereographic pole
    double plane_w = 0;  // w-level of the image hyperplane

    std::array<double, 3> operator()(const Vec4& p) const {
        if (mode == ProjectionMode::drop_w) return {p[0], p[1], p[2]};
        const double denom = p[3] - center[3];
        const double t = (plane_w - center[3]) / denom;
        return {center[0] + t * (p[0] - center[0]), center[1] + t * (p[1] - center[1]),
                center[2] + t * (p[2] - center[2])};
    }
};

inline Projection make_projection(ProjectionMode mode, const std::vector<Vec4>& points) {
    Projection pr;
    pr.mode = mode;
    if (mode == ProjectionMode::drop_w || points.empty()) return pr;
    Vec4 lo = points.front(), hi = points.front();
    for (const auto& p : points)
        for (int c = 0; c < 4; ++c) {
            lo[c] = std::min(lo[c], p[c]);
            hi[c] = std::max(hi[c], p[c]);
        }
    double diam = 0;
    for (int c = 0; c < 4; ++c) diam = std::max(diam, hi[c] - lo[c]);
    if (diam == 0.0) diam = 1.0;
    pr.center = 0.5 * (lo + hi);
    pr.plane_w = pr.center[3];
    pr.center[3] = hi[3] + 10.0 * diam;  // >= 10 diameters above the box
    return pr;
}

// ---------------------------------------------------------------------------
// Polyline geometry export (OBJ / PLY)
// ---------------------------------------------------------------------------

struct Polyline {
    std::vector<Vec4> points;
};

/// The grid curves of one z-slice of a node field: the n+1 x-lines and n+1
/// y-lines of the slice, as polylines through the node values.
template <class NodeAt>
std::vector<Polyline> slice_polylines(const Lattice& lat, int k, const NodeAt& at) {
    std::vector<Polyline> lines;
    const int n = lat.n;
    for (int j = 0; j <= n; ++j) {
        Polyline pl;
        for (int i = 0; i <= n; ++i) pl.points.push_back(at(i, j, k));
        lines.push_back(std::move(pl));
    }
    for (int i = 0; i <= n; ++i) {
        Polyline pl;
        for (int j = 0; j <= n; ++j) pl.points.push_back(at(i, j, k));
        lines.push_back(std::move(pl));
    }
    return lines;
}

/// OBJ with one "l" element per polyline; vertex count equals the total
/// emitted sample count.
inline std::string polylines_to_obj(const std::vector<Polyline>& lines,
                                    const Projection& pr) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out.precision(17);
    std::size_t base = 1;
    std::vector<std::size_t> starts;
    for (const auto& pl : lines) {
        starts.push_back(base);
        for (const auto& p : pl.points) {
            const auto q = pr(p);
            out << "v " << q[0] << ' ' << q[1] << ' ' << q[2] << '\n';
        }
        base += pl.points.size();
    }
    for (std::size_t li = 0; li < lines.size(); ++li) {
        if (lines[li].points.size() < 2) continue;
        out << 'l';
        for (std::size_t s = 0; s < lines[li].points.size(); ++s)
            out << ' ' << (starts[li] + s);
        out << '\n';
    }
    return out.str();
}

/// ASCII PLY with vertex and edge elements.
inline std::string polylines_to_ply(const std::vector<Polyline>& lines,
                                    const Projection& pr) {
    std::size_t nv = 0, ne = 0;
    for (const auto& pl : lines) {
        nv += pl.points.size();
        if (pl.points.size() >= 2) ne += pl.points.size() - 1;
    }
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out.precision(17);
    out << "ply\nformat ascii 1.0\n"
        << "element vertex " << nv << '\n'
        << "property double x\nproperty double y\nproperty double z\n"
        << "element edge " << ne << '\n'
        << "property int vertex1\nproperty int vertex2\nend_header\n";
    for (const auto& pl : lines)
        for (const auto& p : pl.points) {
            const auto q = pr(p);
            out << q[0] << ' ' << q[1] << ' ' << q[2] << '\n';
        }
    std::size_t base = 0;
    for (const auto& pl : lines) {
        for (std::size_t s = 0; s + 1 < pl.points.size(); ++s)
            out << (base + s) << ' ' << (base + s + 1) << '\n';
        base += pl.points.size();
    }
    return out.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open output file: " + path);
    f << content;
}

}  // namespace cfdual
