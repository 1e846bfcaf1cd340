#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "hpr/octonion.hpp"
#include "hpr/quaternion.hpp"

namespace hpr {

template <class S>
struct algebra_traits;

template <>
struct algebra_traits<Quaternion> {
    static constexpr int dim = 4;
    static constexpr const char* name = "quaternion";
};

template <>
struct algebra_traits<Octonion> {
    static constexpr int dim = 8;
    static constexpr const char* name = "octonion";
};

template <class S>
using Vec = std::vector<S>;

/// Dense row-major matrix over a hypercomplex scalar.
template <class S>
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<S> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    S& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Dense row-major real matrix (lifted representations, oracles).
struct RealMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    RealMatrix() = default;
    RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

inline std::vector<double> matvec(const RealMatrix& m, const std::vector<double>& v) {
    if (v.size() != m.cols) throw std::invalid_argument("real matvec shape mismatch");
    std::vector<double> out(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) acc += m(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

// ---- vector operations ------------------------------------------------

template <class S>
double norm2(const Vec<S>& x) {
    double s = 0.0;
    for (const S& e : x) s += norm2(e);
    return s;
}

template <class S>
double norm(const Vec<S>& x) {
    return std::sqrt(norm2(x));
}

template <class S>
Vec<S> operator+(Vec<S> x, const Vec<S>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("vector size mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
    return x;
}

template <class S>
Vec<S> operator-(Vec<S> x, const Vec<S>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("vector size mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= y[i];
    return x;
}

template <class S>
Vec<S> operator*(Vec<S> x, double s) {
    for (S& e : x) e *= s;
    return x;
}

/// Componentwise right scaling x_j w (the trivial-ambiguity action).
template <class S>
Vec<S> right_scaled(const Vec<S>& x, const S& w) {
    Vec<S> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * w;
    return out;
}

/// a^* x = sum_j conj(a_j) x_j.
template <class S>
S dot_conj(const Vec<S>& a, const Vec<S>& x) {
    if (a.size() != x.size()) throw std::invalid_argument("vector size mismatch");
    S acc{};
    for (std::size_t j = 0; j < a.size(); ++j) acc += conj(a[j]) * x[j];
    return acc;
}

/// (A x)_i = sum_j A_ij x_j, matrix entries multiplying from the left.
template <class S>
Vec<S> matvec(const Matrix<S>& A, const Vec<S>& x) {
    if (x.size() != A.cols) throw std::invalid_argument("matvec shape mismatch");
    Vec<S> out(A.rows, S{});
    for (std::size_t i = 0; i < A.rows; ++i) {
        S acc{};
        for (std::size_t j = 0; j < A.cols; ++j) acc += A(i, j) * x[j];
        out[i] = acc;
    }
    return out;
}

/// (A^*)_ij = conj(A_ji).
template <class S>
Matrix<S> hermitian_adjoint(const Matrix<S>& A) {
    Matrix<S> out(A.cols, A.rows);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) out(j, i) = conj(A(i, j));
    return out;
}

// ---- real representations ---------------------------------------------

/// aleph: coefficient unrolling, one block of algebra_traits<S>::dim reals
/// per entry.  Satisfies ||x|| = ||aleph(x)||.
template <class S>
std::vector<double> aleph(const Vec<S>& x) {
    constexpr int dim = algebra_traits<S>::dim;
    std::vector<double> out(x.size() * dim);
    for (std::size_t j = 0; j < x.size(); ++j)
        for (int i = 0; i < dim; ++i) out[j * dim + i] = x[j].coeff(i);
    return out;
}

template <class S>
std::vector<double> aleph(const S& x) {
    return aleph(Vec<S>{x});
}

template <class S>
Vec<S> aleph_inv(const std::vector<double>& v) {
    constexpr int dim = algebra_traits<S>::dim;
    if (v.size() % dim != 0) throw std::invalid_argument("aleph_inv length not divisible by algebra dim");
    Vec<S> out(v.size() / dim);
    for (std::size_t j = 0; j < out.size(); ++j)
        for (int i = 0; i < dim; ++i) out[j].set_coeff(i, v[j * dim + i]);
    return out;
}

/// gimel of a scalar: the dim x dim left-multiplication block, defined by
/// aleph(x y) = gimel(x) aleph(y).
inline void gimel_block(const Octonion& x, RealMatrix& out, std::size_t r0, std::size_t c0) {
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
            out(r0 + r, c0 + c) = static_cast<double>(kGimel.sign[r][c]) * x.c[kGimel.index[r][c]];
}

inline void gimel_block(const Quaternion& q, RealMatrix& out, std::size_t r0, std::size_t c0) {
    const double m[4][4] = {{q.a, -q.b, -q.c, -q.d},
                            {q.b, q.a, -q.d, q.c},
                            {q.c, q.d, q.a, -q.b},
                            {q.d, -q.c, q.b, q.a}};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out(r0 + r, c0 + c) = m[r][c];
}

template <class S>
RealMatrix gimel(const S& x) {
    constexpr int dim = algebra_traits<S>::dim;
    RealMatrix out(dim, dim);
    gimel_block(x, out, 0, 0);
    return out;
}

/// Block-assembled gimel of a matrix; aleph(A x) = gimel(A) aleph(x).
template <class S>
RealMatrix gimel(const Matrix<S>& A) {
    constexpr int dim = algebra_traits<S>::dim;
    RealMatrix out(A.rows * dim, A.cols * dim);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) gimel_block(A(i, j), out, i * dim, j * dim);
    return out;
}

template <class S>
RealMatrix gimel(const Vec<S>& x) {
    Matrix<S> col(x.size(), 1);
    for (std::size_t i = 0; i < x.size(); ++i) col(i, 0) = x[i];
    return gimel(col);
}

}  // namespace hpr
