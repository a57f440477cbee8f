#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace cfdual {

/// Ordinary least squares y = slope*x + intercept, with the standard error
/// of the slope (for the 95% confidence interval: slope +- 1.96*stderr).
struct LineFit {
    double slope = 0, intercept = 0, stderr_slope = 0;
};

inline LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    LineFit f;
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0 || n < 2) return f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    if (n > 2) {
        double sse = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = ys[i] - (f.slope * xs[i] + f.intercept);
            sse += r * r;
        }
        f.stderr_slope = std::sqrt(sse / double(n - 2) / (sxx - sx * sx / n));
    }
    return f;
}

/// One identity's residual history over a list of FD steps.
struct ResidualEntry {
    std::string name;
    std::vector<double> h;    // FD steps, decreasing
    std::vector<double> sup;  // sup residual over the probe grid at each step
    double order = 0;         // fitted slope of log(sup) vs log(h)
    bool pass = false;
};

struct ResidualReport {
    std::vector<ResidualEntry> entries;
    double tol = 0;
    bool all_pass = true;

    const ResidualEntry* find(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return &e;
        return nullptr;
    }
};

/// Fits the refinement order and applies the pass rule: the smallest-step
/// residual is at or below tol, or the residuals shrink at order >= 1.5.
inline void finalize_residual_entry(ResidualEntry& e, double tol) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < e.h.size(); ++i) {
        lx.push_back(std::log(e.h[i]));
        ly.push_back(std::log(std::max(e.sup[i], 1e-300)));
    }
    e.order = least_squares(lx, ly).slope;
    e.pass = (!e.sup.empty() && e.sup.back() <= tol) || e.order >= 1.5;
}

}  // namespace cfdual
