#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>

namespace cfdual {

/// Point / vector in R^4.
struct Vec4 {
    std::array<double, 4> v{0.0, 0.0, 0.0, 0.0};

    constexpr Vec4() = default;
    constexpr Vec4(double a, double b, double c, double d) : v{a, b, c, d} {}

    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }

    Vec4& operator+=(const Vec4& o) {
        for (int i = 0; i < 4; ++i) v[i] += o.v[i];
        return *this;
    }
    Vec4& operator-=(const Vec4& o) {
        for (int i = 0; i < 4; ++i) v[i] -= o.v[i];
        return *this;
    }
    Vec4& operator*=(double s) {
        for (int i = 0; i < 4; ++i) v[i] *= s;
        return *this;
    }

    friend Vec4 operator+(Vec4 a, const Vec4& b) { return a += b; }
    friend Vec4 operator-(Vec4 a, const Vec4& b) { return a -= b; }
    friend Vec4 operator*(double s, Vec4 a) { return a *= s; }
    friend Vec4 operator*(Vec4 a, double s) { return a *= s; }
    friend Vec4 operator/(Vec4 a, double s) { return a *= (1.0 / s); }
    friend Vec4 operator-(const Vec4& a) { return {-a.v[0], -a.v[1], -a.v[2], -a.v[3]}; }

    friend std::ostream& operator<<(std::ostream& os, const Vec4& a) {
        return os << '(' << a.v[0] << ", " << a.v[1] << ", " << a.v[2] << ", " << a.v[3] << ')';
    }
};

inline double dot(const Vec4& a, const Vec4& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

inline double norm2(const Vec4& a) { return dot(a, a); }
inline double norm(const Vec4& a) { return std::sqrt(norm2(a)); }

/// Sine of the angle between two vectors, via |a||b|sin = sqrt(|a|^2|b|^2 - <a,b>^2).
inline double sin_angle(const Vec4& a, const Vec4& b) {
    const double na2 = norm2(a), nb2 = norm2(b);
    const double d = dot(a, b);
    double s2 = na2 * nb2 - d * d;
    if (s2 < 0.0) s2 = 0.0;
    return std::sqrt(s2 / (na2 * nb2));
}

/// Row-major 4x4 matrix, used for rigid motions.
struct Mat4 {
    std::array<double, 16> m{};

    static Mat4 identity() {
        Mat4 r;
        for (int i = 0; i < 4; ++i) r.m[5 * i] = 1.0;
        return r;
    }

    double& operator()(int i, int j) { return m[4 * i + j]; }
    double operator()(int i, int j) const { return m[4 * i + j]; }

    Vec4 apply(const Vec4& x) const {
        Vec4 r;
        for (int i = 0; i < 4; ++i) {
            double s = 0.0;
            for (int j = 0; j < 4; ++j) s += (*this)(i, j) * x[j];
            r[i] = s;
        }
        return r;
    }
};

/// Determinant by cofactor expansion; 4x4 only, no pivoting needed here.
inline double det(const Mat4& a) {
    auto m3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
        return a(r0, c0) * (a(r1, c1) * a(r2, c2) - a(r1, c2) * a(r2, c1)) -
               a(r0, c1) * (a(r1, c0) * a(r2, c2) - a(r1, c2) * a(r2, c0)) +
               a(r0, c2) * (a(r1, c0) * a(r2, c1) - a(r1, c1) * a(r2, c0));
    };
    return a(0, 0) * m3(1, 2, 3, 1, 2, 3) - a(0, 1) * m3(1, 2, 3, 0, 2, 3) +
           a(0, 2) * m3(1, 2, 3, 0, 1, 3) - a(0, 3) * m3(1, 2, 3, 0, 1, 2);
}

/// Max-norm deviation of the columns-as-frame Gram matrix from the identity.
inline double frame_orthonormality_defect(const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& d) {
    const Vec4* f[4] = {&a, &b, &c, &d};
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double g = dot(*f[i], *f[j]) - (i == j ? 1.0 : 0.0);
            worst = std::max(worst, std::fabs(g));
        }
    return worst;
}

}  // namespace cfdual
