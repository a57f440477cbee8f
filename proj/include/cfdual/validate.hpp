#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "cfdual/core.hpp"
#include "cfdual/fd.hpp"
#include "cfdual/invariants.hpp"
#include "cfdual/report.hpp"
#include "cfdual/vec4.hpp"

namespace cfdual {

/// Checks the structural PDE identities an analytic entry must satisfy:
/// the three compatibility equations of the Guichard net, the second-order
/// existence equation for 1/P, the kappa3 formula and the zeta = kappa3^2
/// consistency, the derivative identities for kappa3 / K / sigma_i, the
/// z-derivative formulas of the frame vector X_gamma, and the z-line
/// acceleration decomposition. All derivatives are 4th-order central
/// differences at each step in h_list; each identity gets a sup residual
/// over an interior probe grid and a fitted refinement order.
inline ResidualReport validate_entry(const CatalogueEntry& entry, const Domain& domain,
                                     std::vector<double> h_list = {}, double tol = 1e-6,
                                     int probe = 4) {
    if (h_list.empty())
        h_list = {1e-2 * domain.a, 5e-3 * domain.a, 2.5e-3 * domain.a};

    using fd::Point3;
    auto sample = [&](Point3 p) { return entry.sample(p.x, p.y, p.z); };
    auto pinv = [&](Point3 p) { return 1.0 / sample(p).P; };
    auto phi = [&](Point3 p) { return sample(p).phi; };
    auto phi_z = [&](Point3 p) { return sample(p).phi_z; };
    auto kappa = [&](Point3 p) { return detail::curvatures_of(sample(p)); };
    auto k1f = [&](Point3 p) { return kappa(p)[0]; };
    auto k2f = [&](Point3 p) { return kappa(p)[1]; };
    auto k3f = [&](Point3 p) { return kappa(p)[2]; };
    auto sigma = [&](Point3 p) {
        const auto k = kappa(p);
        return schouten_eigenvalues(CurvatureSet{k[0], k[1], k[2]});
    };
    auto xgamma = [&](Point3 p) { return sample(p).X_gamma; };

    struct Ident {
        std::string name;
        std::function<double(Point3, double)> residual;  // |residual| at point, step
    };
    std::vector<Ident> idents;

    // Derivatives of 1/P: analytic closure when the entry has one, FD otherwise.
    auto pinv_d = [&](Point3 p, int axis, double h) {
        if (entry.pinv_grad) return entry.pinv_grad(p.x, p.y, p.z)[axis];
        return fd::d1(pinv, p, axis, h);
    };
    auto Kf = [&](Point3 p, double h) {
        const FrameSample s = sample(p);
        return -pinv_d(p, 2, h) + s.kappa3 * s.phi_z;
    };

    // Compatibility of the net angle with 1/P (three mixed-derivative equations).
    idents.push_back({"guichard-xy", [=](Point3 p, double h) {
        const double c = std::cos(phi(p)), s = std::sin(phi(p));
        const FrameSample fs = sample(p);
        return std::fabs(fd::d2_mixed(pinv, p, 0, 1, h) - pinv_d(p, 1, h) * fs.phi_x * (c / s) +
                         pinv_d(p, 0, h) * fs.phi_y * (s / c));
    }});
    idents.push_back({"guichard-zx", [=](Point3 p, double h) {
        const double c = std::cos(phi(p)), s = std::sin(phi(p));
        const FrameSample fs = sample(p);
        const double phi_zx = fd::d1(phi_z, p, 0, h);
        return std::fabs(fd::d2_mixed(pinv, p, 2, 0, h) + pinv_d(p, 0, h) * fs.phi_z * (s / c) -
                         pinv(p) * phi_zx * (c / s));
    }});
    idents.push_back({"guichard-zy", [=](Point3 p, double h) {
        const double c = std::cos(phi(p)), s = std::sin(phi(p));
        const FrameSample fs = sample(p);
        const double phi_zy = fd::d1(phi_z, p, 1, h);
        return std::fabs(fd::d2_mixed(pinv, p, 2, 1, h) - pinv_d(p, 1, h) * fs.phi_z * (c / s) +
                         pinv(p) * phi_zy * (s / c));
    }});

    auto psi_zz = [=](Point3 p, double h) {
        const double ph = phi(p);
        const double phi_xx = fd::d2(phi, p, 0, h);
        const double phi_yy = fd::d2(phi, p, 1, h);
        const double phi_zz = fd::d1(phi_z, p, 2, h);
        return (phi_xx - phi_yy - phi_zz * std::cos(2 * ph)) / std::sin(2 * ph);
    };

    // Second-order existence equation for 1/P.
    idents.push_back({"existence-pde", [=](Point3 p, double h) {
        const FrameSample fs = sample(p);
        const double tn = std::tan(fs.phi), ct = 1.0 / tn;
        const double rhs = -(fd::d2(pinv, p, 0, h) + 2 * fs.phi_x * tn * pinv_d(p, 0, h)) -
                           (fd::d2(pinv, p, 1, h) - 2 * fs.phi_y * ct * pinv_d(p, 1, h)) +
                           fd::d2(pinv, p, 2, h) + 2 * psi_zz(p, h) * pinv(p);
        return std::fabs(pinv(p) - rhs);
    }});

    // kappa3 expressed through 1/P and the net angle.
    idents.push_back({"kappa3-formula", [=](Point3 p, double h) {
        const FrameSample fs = sample(p);
        const double c = std::cos(fs.phi), s = std::sin(fs.phi);
        const double c2 = std::cos(2 * fs.phi);
        const double phi_zz = fd::d1(phi_z, p, 2, h);
        const double rhs = (s / c) * fd::d2(pinv, p, 0, h) - fs.phi_x * (c2 / (c * c)) * pinv_d(p, 0, h) -
                           ((c / s) * fd::d2(pinv, p, 1, h) - fs.phi_y * (c2 / (s * s)) * pinv_d(p, 1, h)) +
                           (pinv(p) * phi_zz - pinv_d(p, 2, h) * fs.phi_z);
        return std::fabs(fs.kappa3 - rhs);
    }});

    // First-order existence condition zeta = kappa3^2.
    idents.push_back({"zeta-consistency", [=](Point3 p, double h) {
        const FrameSample fs = sample(p);
        const double c = std::cos(fs.phi), s = std::sin(fs.phi);
        const double px = pinv_d(p, 0, h), py = pinv_d(p, 1, h), pz = pinv_d(p, 2, h);
        const double zeta =
            pinv(p) * (2 * fd::d2(pinv, p, 2, h) +
                       (-1 + fs.phi_z * fs.phi_z + 2 * psi_zz(p, h)) * pinv(p)) -
            (px * px / (c * c) + py * py / (s * s) + pz * pz);
        return std::fabs(zeta - fs.kappa3 * fs.kappa3);
    }});

    // Derivatives of kappa3.
    idents.push_back({"kappa3-x", [=](Point3 p, double h) {
        const FrameSample fs = sample(p);
        return std::fabs(fd::d1(k3f, p, 0, h) + pinv_d(p, 0, h) * std::tan(fs.phi));
    }});
    idents.push_back({"kappa3-y", [=](Point3 p, double h) {
        const FrameSample fs = sample(p);
        return std::fabs(fd::d1(k3f, p, 1, h) - pinv_d(p, 1, h) / std::tan(fs.phi));
    }});
    idents.push_back({"kappa3-z", [=](Point3 p, double h) {
        const FrameSample fs = sample(p);
        return std::fabs(fd::d1(k3f, p, 2, h) + pinv(p) * fs.phi_z);
    }});

    // Derivatives of K and sigma3.
    idents.push_back({"K-x", [=](Point3 p, double h) {
        auto kf = [=](Point3 q) { return Kf(q, h); };
        const double phi_zx = fd::d1(phi_z, p, 0, h);
        return std::fabs(fd::d1(kf, p, 0, h) - k2f(p) * phi_zx);
    }});
    idents.push_back({"K-y", [=](Point3 p, double h) {
        auto kf = [=](Point3 q) { return Kf(q, h); };
        const double phi_zy = fd::d1(phi_z, p, 1, h);
        return std::fabs(fd::d1(kf, p, 1, h) - k1f(p) * phi_zy);
    }});
    idents.push_back({"sigma3-x", [=](Point3 p, double h) {
        auto s3 = [=](Point3 q) { return sigma(q).s3; };
        return std::fabs(fd::d1(s3, p, 0, h) - k2f(p) * fd::d1(k3f, p, 0, h));
    }});
    idents.push_back({"sigma3-y", [=](Point3 p, double h) {
        auto s3 = [=](Point3 q) { return sigma(q).s3; };
        return std::fabs(fd::d1(s3, p, 1, h) - k1f(p) * fd::d1(k3f, p, 1, h));
    }});
    idents.push_back({"sigma3-z", [=](Point3 p, double h) {
        auto s3 = [=](Point3 q) { return sigma(q).s3; };
        return std::fabs(fd::d1(s3, p, 2, h) + pinv(p) * Kf(p, h));
    }});

    // Derivatives of sigma1, sigma2 through kappa derivatives.
    idents.push_back({"sigma1-y", [=](Point3 p, double h) {
        auto s1 = [=](Point3 q) { return sigma(q).s1; };
        return std::fabs(fd::d1(s1, p, 1, h) - fd::d1(k1f, p, 1, h) * k3f(p));
    }});
    idents.push_back({"sigma1-z", [=](Point3 p, double h) {
        auto s1 = [=](Point3 q) { return sigma(q).s1; };
        return std::fabs(fd::d1(s1, p, 2, h) - fd::d1(k1f, p, 2, h) * k2f(p));
    }});
    idents.push_back({"sigma2-x", [=](Point3 p, double h) {
        auto s2 = [=](Point3 q) { return sigma(q).s2; };
        return std::fabs(fd::d1(s2, p, 0, h) - fd::d1(k2f, p, 0, h) * k3f(p));
    }});
    idents.push_back({"sigma2-z", [=](Point3 p, double h) {
        auto s2 = [=](Point3 q) { return sigma(q).s2; };
        return std::fabs(fd::d1(s2, p, 2, h) - fd::d1(k2f, p, 2, h) * k1f(p));
    }});

    // Closed forms of the kappa1/kappa2 derivatives.
    idents.push_back({"kappa1-y-closed", [=](Point3 p, double h) {
        const FrameSample fs = sample(p);
        const double c = std::cos(fs.phi), s = std::sin(fs.phi);
        const double rhs = (pinv_d(p, 1, h) + pinv(p) * fs.phi_y * (s / c)) / (s * c);
        return std::fabs(fd::d1(k1f, p, 1, h) - rhs);
    }});
    idents.push_back({"kappa1-z-closed", [=](Point3 p, double h) {
        const FrameSample fs = sample(p);
        const double tn = std::tan(fs.phi);
        const double rhs = (pinv_d(p, 2, h) + pinv(p) * fs.phi_z * tn) * tn;
        return std::fabs(fd::d1(k1f, p, 2, h) - rhs);
    }});
    idents.push_back({"kappa2-x-closed", [=](Point3 p, double h) {
        const FrameSample fs = sample(p);
        const double c = std::cos(fs.phi), s = std::sin(fs.phi);
        const double rhs = (-pinv_d(p, 0, h) + pinv(p) * fs.phi_x * (c / s)) / (s * c);
        return std::fabs(fd::d1(k2f, p, 0, h) - rhs);
    }});
    idents.push_back({"kappa2-z-closed", [=](Point3 p, double h) {
        const FrameSample fs = sample(p);
        const double ct = 1.0 / std::tan(fs.phi);
        const double rhs = (-pinv_d(p, 2, h) + pinv(p) * fs.phi_z * ct) * ct;
        return std::fabs(fd::d1(k2f, p, 2, h) - rhs);
    }});

    // x- and y-derivatives of the frame vector X_gamma.
    idents.push_back({"xgamma-x", [=](Point3 p, double h) {
        const FrameSample fs = sample(p);
        auto pcos_z = [=](Point3 q) {
            const FrameSample t = sample(q);
            return t.P * std::cos(t.phi);
        };
        const double coef = fd::d1(pcos_z, p, 2, h) / (fs.P * fs.P * std::cos(fs.phi));
        return norm(fd::d1(xgamma, p, 0, h) - coef * fs.fx());
    }});
    idents.push_back({"xgamma-y", [=](Point3 p, double h) {
        const FrameSample fs = sample(p);
        auto psin_z = [=](Point3 q) {
            const FrameSample t = sample(q);
            return t.P * std::sin(t.phi);
        };
        const double coef = fd::d1(psin_z, p, 2, h) / (fs.P * fs.P * std::sin(fs.phi));
        return norm(fd::d1(xgamma, p, 1, h) - coef * fs.fy());
    }});

    // Acceleration of the unit-speed z-lines in the frame.
    idents.push_back({"zline-accel", [=](Point3 p, double h) {
        const FrameSample fs = sample(p);
        const double a_coef = pinv_d(p, 0, h) / std::cos(fs.phi);
        const double b_coef = pinv_d(p, 1, h) / std::sin(fs.phi);
        const Vec4 lhs = (1.0 / fs.P) * fd::d1(xgamma, p, 2, h);
        return norm(lhs - (a_coef * fs.X_alpha + b_coef * fs.X_beta + fs.kappa3 * fs.N));
    }});

    ResidualReport report;
    report.tol = tol;
    for (const auto& id : idents) {
        ResidualEntry re;
        re.name = id.name;
        for (double h : h_list) {
            double sup = 0;
            for (int i = 0; i < probe; ++i)
                for (int j = 0; j < probe; ++j)
                    for (int k = 0; k < probe; ++k) {
                        const Point3 p{
                            domain.x0 + domain.a * (0.2 + 0.6 * i / double(probe - 1)),
                            domain.y0 + domain.a * (0.2 + 0.6 * j / double(probe - 1)),
                            domain.z0 + domain.a * (0.2 + 0.6 * k / double(probe - 1))};
                        sup = std::max(sup, id.residual(p, h));
                    }
            re.h.push_back(h);
            re.sup.push_back(sup);
        }
        finalize_residual_entry(re, tol);
        report.all_pass = report.all_pass && re.pass;
        report.entries.push_back(re);
    }
    return report;
}

}  // namespace cfdual
