#pragma once

#include <array>
#include <functional>

#include "cfdual/vec4.hpp"

namespace cfdual {

/// 4th-order central finite differences for fields defined on (x,y,z).
/// Axis convention: 0 = x, 1 = y, 2 = z.
namespace fd {

struct Point3 {
    double x, y, z;
    Point3 shifted(int axis, double d) const {
        Point3 p = *this;
        (axis == 0 ? p.x : axis == 1 ? p.y : p.z) += d;
        return p;
    }
};

/// f'(0) ≈ [f(-2h) - 8f(-h) + 8f(h) - f(2h)] / 12h, error O(h^4).
template <class Field>
auto d1(const Field& f, Point3 p, int axis, double h) {
    auto fp1 = f(p.shifted(axis, h));
    auto fm1 = f(p.shifted(axis, -h));
    auto fp2 = f(p.shifted(axis, 2 * h));
    auto fm2 = f(p.shifted(axis, -2 * h));
    return (fm2 - fp2 + 8.0 * (fp1 - fm1)) * (1.0 / (12.0 * h));
}

/// f''(0) ≈ [-f(-2h) + 16f(-h) - 30f(0) + 16f(h) - f(2h)] / 12h², error O(h^4).
template <class Field>
auto d2(const Field& f, Point3 p, int axis, double h) {
    auto f0 = f(p);
    auto fp1 = f(p.shifted(axis, h));
    auto fm1 = f(p.shifted(axis, -h));
    auto fp2 = f(p.shifted(axis, 2 * h));
    auto fm2 = f(p.shifted(axis, -2 * h));
    return (16.0 * (fp1 + fm1) - (fp2 + fm2) - 30.0 * f0) * (1.0 / (12.0 * h * h));
}

/// Mixed second derivative: 4th-order d1 in axis_b applied to the 4th-order
/// d1 in axis_a (25-point stencil overall), error O(h^4).
template <class Field>
auto d2_mixed(const Field& f, Point3 p, int axis_a, int axis_b, double h) {
    auto inner = [&](Point3 q) { return d1(f, q, axis_a, h); };
    return d1(inner, p, axis_b, h);
}

}  // namespace fd
}  // namespace cfdual
