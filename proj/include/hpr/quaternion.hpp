#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace hpr {

/// Quaternion over double, x = a + b i + c j + d k with the Hamilton
/// relations i^2 = j^2 = k^2 = ijk = -1.  Values are immutable in spirit:
/// every operation returns a new value.
struct Quaternion {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double a_, double b_ = 0.0, double c_ = 0.0, double d_ = 0.0)
        : a(a_), b(b_), c(c_), d(d_) {}

    static constexpr Quaternion unit(int i) {
        Quaternion q;
        switch (i) {
            case 0: q.a = 1.0; break;
            case 1: q.b = 1.0; break;
            case 2: q.c = 1.0; break;
            case 3: q.d = 1.0; break;
            default: throw std::out_of_range("quaternion unit index");
        }
        return q;
    }

    constexpr double coeff(int i) const {
        switch (i) {
            case 0: return a;
            case 1: return b;
            case 2: return c;
            case 3: return d;
            default: throw std::out_of_range("quaternion coeff index");
        }
    }
    constexpr void set_coeff(int i, double v) {
        switch (i) {
            case 0: a = v; return;
            case 1: b = v; return;
            case 2: c = v; return;
            case 3: d = v; return;
            default: throw std::out_of_range("quaternion coeff index");
        }
    }

    constexpr bool operator==(const Quaternion&) const = default;

    constexpr Quaternion operator-() const { return {-a, -b, -c, -d}; }

    constexpr Quaternion& operator+=(const Quaternion& r) {
        a += r.a; b += r.b; c += r.c; d += r.d;
        return *this;
    }
    constexpr Quaternion& operator-=(const Quaternion& r) {
        a -= r.a; b -= r.b; c -= r.c; d -= r.d;
        return *this;
    }
    constexpr Quaternion& operator*=(double s) {
        a *= s; b *= s; c *= s; d *= s;
        return *this;
    }
};

constexpr Quaternion operator+(Quaternion l, const Quaternion& r) { return l += r; }
constexpr Quaternion operator-(Quaternion l, const Quaternion& r) { return l -= r; }
constexpr Quaternion operator*(Quaternion q, double s) { return q *= s; }
constexpr Quaternion operator*(double s, Quaternion q) { return q *= s; }

/// Hamilton product; noncommutative.
constexpr Quaternion operator*(const Quaternion& x, const Quaternion& y) {
    return {x.a * y.a - x.b * y.b - x.c * y.c - x.d * y.d,
            x.a * y.b + x.b * y.a + x.c * y.d - x.d * y.c,
            x.a * y.c - x.b * y.d + x.c * y.a + x.d * y.b,
            x.a * y.d + x.b * y.c - x.c * y.b + x.d * y.a};
}

constexpr Quaternion qmul(const Quaternion& x, const Quaternion& y) { return x * y; }

constexpr Quaternion conj(const Quaternion& q) { return {q.a, -q.b, -q.c, -q.d}; }

constexpr double norm2(const Quaternion& q) {
    return q.a * q.a + q.b * q.b + q.c * q.c + q.d * q.d;
}

inline double abs(const Quaternion& q) { return std::sqrt(norm2(q)); }

inline Quaternion inverse(const Quaternion& q) {
    const double n2 = norm2(q);
    if (n2 == 0.0) throw std::domain_error("inverse of zero quaternion");
    return conj(q) * (1.0 / n2);
}

/// sign(x) = x / |x|, the unit phase factor.
inline Quaternion sign(const Quaternion& q) {
    const double m = abs(q);
    if (m == 0.0) throw std::domain_error("sign of zero quaternion");
    return q * (1.0 / m);
}

/// x^mu = mu x mu^{-1}: rotates the vector part of x about the vector part
/// of mu, keeping the real part.
inline Quaternion rotate(const Quaternion& x, const Quaternion& mu) {
    return mu * x * inverse(mu);
}

inline bool approx_equal(const Quaternion& x, const Quaternion& y, double rel_tol = 1e-12) {
    const double scale = std::max({1.0, abs(x), abs(y)});
    return abs(x - y) <= rel_tol * scale;
}

/// Left multiplication by exp(i*theta) given (cos theta, sin theta);
/// used by the row/column passes of the two-sided QDFT.
constexpr Quaternion mul_left_expi(const Quaternion& q, double co, double si) {
    return {q.a * co - q.b * si, q.b * co + q.a * si,
            q.c * co - q.d * si, q.d * co + q.c * si};
}

/// Right multiplication by exp(j*theta).
constexpr Quaternion mul_right_expj(const Quaternion& q, double co, double si) {
    return {q.a * co - q.c * si, q.b * co - q.d * si,
            q.c * co + q.a * si, q.d * co + q.b * si};
}

}  // namespace hpr
