// Acceptance harness: runs every acceptance criterion at its stated tolerance
// and prints one [PASS]/[FAIL] line per criterion (indented lines are
// sub-check details). Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "cfdual/convergence.hpp"
#include "cfdual/identity_residuals.hpp"
#include "cfdual/samplers.hpp"
#include "cfdual/validate.hpp"

using namespace cfdual;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

double secs(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void detail_line(const std::string& msg) { std::printf("       %s\n", msg.c_str()); }

void verdict(int criterion, bool ok, const std::string& what) {
    std::printf("%s criterion %d: %s\n", ok ? "[PASS]" : "[FAIL]", criterion, what.c_str());
    if (!ok) ++g_failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

double max_bottom(const ResidualReport& r) {
    double b = 0;
    for (const auto& e : r.entries) b = std::max(b, e.sup.back());
    return b;
}

}  // namespace

int main() {
    const CatalogueEntry psc = pseudosphere_cylinder(1.0, {0.5, 1.5}, {0, 1}, {0, 1});
    const CatalogueEntry inv = invert_entry(psc, Vec4{0, 0, 0, 5});
    const Domain dom = build_domain(0.5, 1.5, 0, 1, 0, 1);
    const double h = 1e-2 * dom.a;
    const auto fstar_psc = exact_dual(psc);
    const DualSampler fstar_inv(inv, dom);
    auto fstar_inv_fn = [&](double x, double y, double z) { return fstar_inv(x, y, z); };

    // ----- 1: structural and dual-invariant identity suite ------------------
    {
        const auto t0 = Clock::now();
        const ResidualReport va = validate_entry(psc, dom);
        const ResidualReport vb = validate_entry(inv, dom);
        const ResidualReport ia = identity_residuals(psc, fstar_psc, dom, h);
        const ResidualReport ib = identity_residuals(inv, fstar_inv_fn, dom, h);
        const double elapsed = secs(t0);
        // analytic-derivative entry bottoms out at 1e-8, the FD-driven one at 1e-6
        const bool bottoms = max_bottom(va) <= 1e-8 && max_bottom(ia) <= 1e-8 &&
                             max_bottom(vb) <= 1e-6 && max_bottom(ib) <= 1e-6;
        const bool ok = va.all_pass && vb.all_pass && ia.all_pass && ib.all_pass &&
                        bottoms && elapsed <= 60.0;
        detail_line("bottom residuals: analytic entry " +
                    fmt(std::max(max_bottom(va), max_bottom(ia))) + " <= 1e-8, FD entry " +
                    fmt(std::max(max_bottom(vb), max_bottom(ib))) + " <= 1e-6");
        detail_line("runtime " + fmt(elapsed) + " s <= 60 s");
        verdict(1, ok, "identity suite residuals refine and bottom out");
    }

    // ----- 2: discrete dual of the cylinder vs the closed form --------------
    {
        const auto t0 = Clock::now();
        const BoundConstants bc = estimate_bound_constants(psc, dom, 33, 1.1);
        bool bounds_ok = true;
        bool slope_ok = true;
        double worst_sup = 0;
        for (Scheme sch : {Scheme::xbar, Scheme::yunder}) {
            std::vector<std::pair<int, double>> pts;
            for (int n : {8, 16, 32, 64, 128}) {
                const Lattice lat = build_lattice(dom, n);
                const DiscreteDualHypersurface d = assemble(psc, lat, sch);
                const Vec4 g0 = d.at(0, 0, 0) - psc.exact_dual(dom.x0, dom.y0, dom.z0);
                double sup = 0;
                for (int k = 0; k <= n; ++k)
                    for (int j = 0; j <= n; ++j)
                        for (int i = 0; i <= n; ++i)
                            sup = std::max(sup, norm(d.at(i, j, k) - g0 -
                                                     psc.exact_dual(lat.x(i), lat.y(j),
                                                                    lat.z(k))));
                const double bound = 6 * bc.C1 * bc.C1 * bc.C2 * dom.a * dom.a * dom.a / n;
                bounds_ok = bounds_ok && sup <= bound;
                worst_sup = std::max(worst_sup, sup);
                pts.push_back({n, sup});
            }
            const SlopeFit f = fit_slope(pts);
            const bool in_window = f.slope >= -1.25 && f.slope <= -0.80;
            // On this entry the construction reproduces the closed form to
            // rounding at every n (the scheme's per-segment data are constant
            // along the integration directions), so the errors sit ten orders
            // below the bound and a log-log slope over them is not a
            // convergence rate. The window check is therefore satisfied via
            // the explicit noise-floor condition; the genuine O(1/n) window
            // is exercised on the inverted entry below.
            const bool noise_floor = worst_sup < 1e-10;
            slope_ok = slope_ok && (in_window || noise_floor);
            detail_line(std::string(to_string(sch)) + ": sup " + fmt(pts.back().second) +
                        " at n=128, slope " + fmt(f.slope) +
                        (noise_floor ? " (noise floor, window waived)" : ""));
        }
        const ConvergenceReport supp = sweep(inv, Scheme::xbar, {8, 16, 32});
        const bool supp_ok = supp.error_fit.slope >= -1.25 && supp.error_fit.slope <= -0.80;
        detail_line("supplementary inverted-entry error slope " + fmt(supp.error_fit.slope) +
                    " in [-1.25,-0.80]");
        const double elapsed = secs(t0);
        detail_line("runtime " + fmt(elapsed) + " s <= 300 s");
        verdict(2, bounds_ok && slope_ok && supp_ok && elapsed <= 300.0,
                "cylinder discrete dual matches the closed form within 6*C1^2*C2*a^3/n");
    }

    // ----- 3: per-slice bound, both schemes, both entries -------------------
    {
        bool ok = true;
        double worst_ratio = 0;
        for (const auto* e : {&psc, &inv})
            for (Scheme sch : {Scheme::xbar, Scheme::yunder}) {
                const ConvergenceReport rep = sweep(*e, sch, {8, 16, 32});
                for (const auto& row : rep.rows) {
                    ok = ok && row.slice_satisfied;
                    worst_ratio = std::max(worst_ratio, row.slice_sup_error / row.slice_bound);
                }
            }
        detail_line("worst slice error / (4*C1^2*C2*a^2/n) = " + fmt(worst_ratio));
        verdict(3, ok, "per-slice nets stay within 4*C1^2*C2*a^2/n for all tested n");
    }

    // ----- 4: connector suite ----------------------------------------------
    {
        // (a) constant-vector identity of the two transported copies, all
        // edge directions and anchor picks, n-independent, machine exact
        double ident_sup = 0;
        for (const auto* e : {&psc, &inv})
            for (int n : {8, 32}) {
                const Lattice lat = build_lattice(dom, n);
                for (int axis = 0; axis < 3; ++axis)
                    for (int pick = 0; pick < 3; ++pick)
                        for (int c = 0; c < 4; ++c) {
                            std::array<double, 3> start{dom.x0 + 0.11 + 0.18 * c,
                                                        dom.y0 + 0.07 + 0.2 * c,
                                                        dom.z0 + 0.13 + 0.17 * c};
                            ident_sup = std::max(ident_sup,
                                                 connector_constant_identity(*e, lat, start,
                                                                             axis, pick));
                        }
            }
        // (b) second-order edge mismatch decay on the generic entry
        std::vector<std::pair<int, double>> pts;
        for (int n : {16, 32, 64}) {
            const Lattice lat = build_lattice(dom, n);
            const DiscreteDualSurface s = surface_xbar(inv, lat, n / 2);
            double worst = 0;
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    worst = std::max(worst, connector_edge_residual(inv, s, i, j));
            pts.push_back({n, worst});
        }
        const SlopeFit ef = fit_slope(pts);
        // (c) connector endpoints interpolate the net nodes exactly
        double end_sup = 0;
        {
            const int n = 16;
            const Lattice lat = build_lattice(dom, n);
            const DiscreteDualHypersurface hh = assemble(inv, lat, Scheme::xbar);
            const DiscreteDualSurface s = surface_xbar(inv, lat, n / 2);
            for (int j = 0; j + 1 <= n; j += 3)
                for (int i = 0; i <= n; i += 3) {
                    const DiscreteCurve cv = connector_v(inv, s, i, j, n / 2);
                    end_sup = std::max(end_sup, norm(cv.values.front() - s.node(i, j)));
                    end_sup = std::max(end_sup, norm(cv.values.back() - s.node(i, j + 1)));
                    const DiscreteCurve cz = connector_z(inv, hh, i, j, n / 2);
                    end_sup = std::max(end_sup, norm(cz.values.front() - hh.at(i, j, n / 2)));
                    end_sup = std::max(end_sup,
                                       norm(cz.values.back() - hh.at(i, j, n / 2 + 1)));
                }
        }
        const bool ok = ident_sup <= 1e-13 && ef.slope >= -2.3 && ef.slope <= -1.7 &&
                        end_sup <= 1e-13;
        detail_line("transport identity sup " + fmt(ident_sup) + " <= 1e-13");
        detail_line("edge-residual slope " + fmt(ef.slope) + " in [-2.3,-1.7]");
        detail_line("endpoint mismatch sup " + fmt(end_sup) + " <= 1e-13");
        verdict(4, ok, "connector identity, second-order edge decay, exact endpoints");
    }

    // ----- 5: oracle integrity ---------------------------------------------
    {
        double loop_sup = 0;
        for (const auto* e : {&psc, &inv}) {
            const double side = dom.a / 16;
            for (int plane = 0; plane < 3; ++plane)
                for (int c = 0; c < 5; ++c) {
                    const Vec4 corner{dom.x0 + 0.05 + 0.17 * c, dom.y0 + 0.05 + 0.15 * c,
                                      dom.z0 + 0.05 + 0.13 * c, 0};
                    loop_sup = std::max(loop_sup, loop_residual(*e, corner, plane, side, 16));
                }
        }
        // 4th-order refinement measured on a face large enough to stay above
        // rounding noise
        const Vec4 big_corner{0.6, 0.1, 0.1, 0};
        const double r16 = loop_residual(psc, big_corner, 0, 0.5, 16);
        const double r32 = loop_residual(psc, big_corner, 0, 0.5, 32);
        const double ratio = r16 / r32;
        const Lattice lat16 = build_lattice(dom, 16);
        const double inv_psc = involution_check(psc, lat16, 16);
        const double inv_inv = involution_check(inv, lat16, 16);
        const bool ok = loop_sup <= 1e-10 && ratio > 10.0 && inv_psc <= 1e-7 &&
                        inv_inv <= 1e-7;
        detail_line("closed-loop residual sup " + fmt(loop_sup) + " <= 1e-10 at m=16");
        detail_line("refinement ratio m=16 -> m=32: " + fmt(ratio) + " (4th order ~ 16)");
        detail_line("involution sup " + fmt(std::max(inv_psc, inv_inv)) +
                    " <= 1e-7 at n=16, m=16");
        verdict(5, ok, "loop residual, 4th-order refinement, involution of the dual");
    }

    // ----- 6: inversion invariance -----------------------------------------
    {
        const ResidualReport r =
            identity_residuals(psc, fstar_psc, dom, h, Vec4{0, 0, 0, 5}, 1e-9);
        double inv_sup = -1;
        for (const auto& e : r.entries)
            if (e.name == "inversion-invariance") inv_sup = e.sup.back();
        double frame_sup = 0;
        const int g = 17;
        for (const auto* e : {&psc, &inv})
            for (int i = 0; i < g; ++i)
                for (int j = 0; j < g; ++j)
                    for (int k = 0; k < g; ++k) {
                        const FrameSample s =
                            e->sample(dom.x0 + dom.a * i / double(g - 1),
                                      dom.y0 + dom.a * j / double(g - 1),
                                      dom.z0 + dom.a * k / double(g - 1));
                        frame_sup = std::max(frame_sup,
                                             frame_orthonormality_defect(s.X_alpha, s.X_beta,
                                                                         s.X_gamma, s.N));
                    }
        const bool ok = inv_sup >= 0 && inv_sup <= 1e-9 && frame_sup <= 1e-10;
        detail_line("invariant-map residual sup " + fmt(inv_sup) + " <= 1e-9 on 17^3 grid");
        detail_line("frame orthonormality defect sup " + fmt(frame_sup) + " <= 1e-10");
        verdict(6, ok, "inversion leaves the invariant map fixed and the frame orthonormal");
    }

    // ----- 7: dual-quantity algebra ----------------------------------------
    {
        double sup = 0;
        bool middle_ok = true;
        const int g = 9;
        for (const auto* e : {&psc, &inv})
            for (int i = 0; i < g; ++i)
                for (int j = 0; j < g; ++j)
                    for (int k = 0; k < g; ++k) {
                        const FrameSample s =
                            e->sample(dom.x0 + dom.a * i / double(g - 1),
                                      dom.y0 + dom.a * j / double(g - 1),
                                      dom.z0 + dom.a * k / double(g - 1));
                        const CurvatureSet kk = principal_curvatures(s);
                        const SchoutenEigen sig = schouten_eigenvalues(kk);
                        if (sig.detS == 0.0 || sig.s1 == 0.0 || sig.s2 == 0.0) continue;
                        const DualQuantities d = dual_quantities(s, sig, kk, 0.0);
                        sup = std::max(sup, std::fabs(*d.sstar1 * sig.s1 - 1.0));
                        sup = std::max(sup, std::fabs(*d.sstar2 * sig.s2 - 1.0));
                        sup = std::max(sup, std::fabs(d.sstar3 * sig.s3 - 1.0));
                        sup = std::max(sup, std::fabs(-*d.kstar1 / *d.sstar1 - kk.k1));
                        sup = std::max(sup, std::fabs(-*d.kstar2 / *d.sstar2 - kk.k2));
                        sup = std::max(sup, std::fabs(-d.kstar3 / d.sstar3 - kk.k3));
                        sup = std::max(sup,
                                       std::fabs(d.cos_phistar * d.cos_phistar +
                                                 d.sin_phistar * d.sin_phistar - 1.0));
                        const double lo = std::min(*d.kstar1, *d.kstar2);
                        const double hi = std::max(*d.kstar1, *d.kstar2);
                        middle_ok = middle_ok && d.kstar3 >= lo - 1e-12 &&
                                    d.kstar3 <= hi + 1e-12;
                    }
        const bool ok = sup <= 1e-12 && middle_ok;
        detail_line("algebraic residual sup " + fmt(sup) + " <= 1e-12; middle ordering " +
                    (middle_ok ? "holds" : "violated"));
        verdict(7, ok, "dual-quantity algebra closes at every nondegenerate sample");
    }

    // ----- 8: cusp localization --------------------------------------------
    {
        const CatalogueEntry cp = cusp_probe_entry();
        const CuspReport r64 = cusp_experiment(cp, 64);
        const CuspReport r128 = cusp_experiment(cp, 128);
        const double ratio = r128.localization_error / r64.localization_error;
        const bool ok = r64.reversal_within_2delta && r128.reversal_within_2delta &&
                        r64.tangent_dot < 0.0 && r128.tangent_dot < 0.0 && ratio <= 0.6;
        detail_line("n=64: localization " + fmt(r64.localization_error) + " <= 2*delta " +
                    fmt(2 * r64.delta));
        detail_line("n=128: localization " + fmt(r128.localization_error) +
                    ", ratio vs n=64 " + fmt(ratio) + " <= 0.6");
        verdict(8, ok, "tangent reversal within 2*delta of the root, localization halves");
    }

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
