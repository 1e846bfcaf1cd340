#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace hpr {

/// Entry template of the right matrix representation gimel(x): the (r,c)
/// cell holds sign[r][c] * x[index[r][c]].  The octonion product is defined
/// through it as aleph(x y) = gimel(x) aleph(y), so the unit multiplication
/// table is derived by column extraction rather than typed by hand.
struct GimelTemplate {
    std::array<std::array<std::uint8_t, 8>, 8> index;
    std::array<std::array<std::int8_t, 8>, 8> sign;
};

constexpr GimelTemplate kGimel = {{{{{0, 1, 2, 3, 4, 5, 6, 7}},
                                    {{1, 0, 3, 2, 5, 4, 7, 6}},
                                    {{2, 3, 0, 1, 6, 7, 4, 5}},
                                    {{3, 2, 1, 0, 7, 6, 5, 4}},
                                    {{4, 5, 6, 7, 0, 1, 2, 3}},
                                    {{5, 4, 7, 6, 1, 0, 3, 2}},
                                    {{6, 7, 4, 5, 2, 3, 0, 1}},
                                    {{7, 6, 5, 4, 3, 2, 1, 0}}}},
                                  {{{{+1, -1, -1, -1, -1, -1, -1, -1}},
                                    {{+1, +1, +1, -1, +1, -1, -1, +1}},
                                    {{+1, -1, +1, +1, +1, +1, -1, -1}},
                                    {{+1, +1, -1, +1, +1, -1, +1, -1}},
                                    {{+1, -1, -1, -1, +1, +1, +1, +1}},
                                    {{+1, +1, -1, +1, -1, +1, -1, +1}},
                                    {{+1, +1, +1, -1, -1, +1, +1, -1}},
                                    {{+1, -1, +1, +1, -1, -1, +1, +1}}}}};

/// Octonion over double, x = c[0] + sum_{i=1..7} c[i] e_i.  Non-commutative
/// and non-associative; the product is fixed by the gimel template above.
struct Octonion {
    std::array<double, 8> c{};

    constexpr Octonion() = default;
    constexpr explicit Octonion(double real) { c[0] = real; }
    constexpr explicit Octonion(const std::array<double, 8>& coeffs) : c(coeffs) {}

    static constexpr Octonion unit(int i) {
        if (i < 0 || i > 7) throw std::out_of_range("octonion unit index");
        Octonion o;
        o.c[static_cast<std::size_t>(i)] = 1.0;
        return o;
    }

    constexpr double coeff(int i) const { return c[static_cast<std::size_t>(i)]; }
    constexpr void set_coeff(int i, double v) { c[static_cast<std::size_t>(i)] = v; }

    constexpr bool operator==(const Octonion&) const = default;

    constexpr Octonion operator-() const {
        Octonion o;
        for (int i = 0; i < 8; ++i) o.c[i] = -c[i];
        return o;
    }
    constexpr Octonion& operator+=(const Octonion& r) {
        for (int i = 0; i < 8; ++i) c[i] += r.c[i];
        return *this;
    }
    constexpr Octonion& operator-=(const Octonion& r) {
        for (int i = 0; i < 8; ++i) c[i] -= r.c[i];
        return *this;
    }
    constexpr Octonion& operator*=(double s) {
        for (int i = 0; i < 8; ++i) c[i] *= s;
        return *this;
    }
};

constexpr Octonion operator+(Octonion l, const Octonion& r) { return l += r; }
constexpr Octonion operator-(Octonion l, const Octonion& r) { return l -= r; }
constexpr Octonion operator*(Octonion o, double s) { return o *= s; }
constexpr Octonion operator*(double s, Octonion o) { return o *= s; }

/// Product with a caller-supplied gimel template.  Production code always
/// passes kGimel; the selftest mutation hook perturbs a copy to prove the
/// algebra invariant suite catches sign defects.
constexpr Octonion omul_with(const GimelTemplate& g, const Octonion& x, const Octonion& y) {
    Octonion out;
    for (int r = 0; r < 8; ++r) {
        double acc = 0.0;
        for (int col = 0; col < 8; ++col)
            acc += static_cast<double>(g.sign[r][col]) * x.c[g.index[r][col]] * y.c[col];
        out.c[r] = acc;
    }
    return out;
}

constexpr Octonion omul(const Octonion& x, const Octonion& y) { return omul_with(kGimel, x, y); }
constexpr Octonion operator*(const Octonion& x, const Octonion& y) { return omul(x, y); }

constexpr Octonion conj(const Octonion& o) {
    Octonion out;
    out.c[0] = o.c[0];
    for (int i = 1; i < 8; ++i) out.c[i] = -o.c[i];
    return out;
}

constexpr double norm2(const Octonion& o) {
    double s = 0.0;
    for (int i = 0; i < 8; ++i) s += o.c[i] * o.c[i];
    return s;
}

inline double abs(const Octonion& o) { return std::sqrt(norm2(o)); }

inline Octonion inverse(const Octonion& o) {
    const double n2 = norm2(o);
    if (n2 == 0.0) throw std::domain_error("inverse of zero octonion");
    return conj(o) * (1.0 / n2);
}

inline Octonion sign(const Octonion& o) {
    const double m = abs(o);
    if (m == 0.0) throw std::domain_error("sign of zero octonion");
    return o * (1.0 / m);
}

inline bool approx_equal(const Octonion& x, const Octonion& y, double rel_tol = 1e-12) {
    const double scale = std::max({1.0, abs(x), abs(y)});
    return abs(x - y) <= rel_tol * scale;
}

}  // namespace hpr
