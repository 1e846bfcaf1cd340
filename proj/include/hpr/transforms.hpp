#pragma once

#include <cstddef>
#include <vector>

#include "hpr/algebra.hpp"

namespace hpr {

/// Two-sided 2-D quaternion DFT on an N x N grid,
///   F(r,s) = (1/N) sum_{q,b} exp(-i 2pi r q / N) f(q,b) exp(-j 2pi s b / N),
/// evaluated by sided row/column passes (left-i kernel over the first index,
/// right-j kernel over the second), which equals the double sum exactly.
/// The inverse uses conjugated kernels with the same 1/N factor, so the
/// round trip is the identity and Parseval holds with no extra scaling.
class Qdft2D {
public:
    explicit Qdft2D(std::size_t side);

    std::size_t side() const { return side_; }

    Matrix<Quaternion> forward(const Matrix<Quaternion>& f) const;
    Matrix<Quaternion> inverse(const Matrix<Quaternion>& spectrum) const;

    /// One spectrum entry as a real-linear functional.  Because the
    /// transform is two-sided the row is a pair of kernel vectors applied
    /// as written, not a single quaternion inner product.
    struct RowKernels {
        std::vector<Quaternion> left;   // exp(-i 2pi r q / N), per q
        std::vector<Quaternion> right;  // exp(-j 2pi s b / N), per b
        double scale;                   // 1/N
    };
    RowKernels row(std::size_t r, std::size_t s) const;
    Quaternion row_apply(std::size_t r, std::size_t s, const Matrix<Quaternion>& f) const;

private:
    std::size_t side_;
    std::vector<double> cos_;  // cos(2 pi t / N)
    std::vector<double> sin_;
};

/// Forward 1-D QDFT with a left i kernel, (1/sqrt(N)) sum_b e^{-i 2pi s b/N} v(b);
/// the row form used by the quaternion STFT.
Vec<Quaternion> qdft1d(const Vec<Quaternion>& v);
Quaternion qdft1d_row_apply(std::size_t s, const Vec<Quaternion>& v);

/// Tri-variate octonion DFT on an N x N x N volume with right-multiplied
/// kernels in the printed unit order e1, e2, e4 and left-to-right
/// parenthesization ((f k1) k2) k3; normalization 1/N.
class Odft3D {
public:
    explicit Odft3D(std::size_t side);

    std::size_t side() const { return side_; }

    /// Volume layout: flat vector of length N^3, index ((n1*N)+n2)*N+n3.
    std::vector<Octonion> forward(const std::vector<Octonion>& f) const;

private:
    std::size_t side_;
    std::vector<double> cos_;
    std::vector<double> sin_;
};

/// Discrete quaternion STFT plan: window w of length T <= N, hop L, and
/// R = ceil((N + T - 1) / L) sections.  Section r windows the signal with
/// the r*L-circular shift of w (window entry multiplying from the left) and
/// applies the 1-D QDFT rows.
struct QstftPlan {
    Vec<Quaternion> window;
    std::size_t hop = 1;
    std::size_t length = 0;  // N, transform length == signal length

    std::size_t sections() const;  // R
    /// Zero-padded circular shift of the window for section r.
    Vec<Quaternion> shifted_window(std::size_t r) const;
};

QstftPlan make_qstft_plan(Vec<Quaternion> window, std::size_t hop, std::size_t length);

/// Y(r,s) = s-th 1-D QDFT row applied to W_r f; returns an R x N matrix.
Matrix<Quaternion> qstft(const Vec<Quaternion>& f, const QstftPlan& plan);

/// Bank of scaled/rotated copies of a mother quaternion wavelet,
/// psi_k(x) = (1/a_k) psi(R_{-theta_k} x / a_k), sampled on the signal grid
/// with exact index permutation for angles that are multiples of pi/2 and
/// nearest-neighbour resampling otherwise.
struct QwtBank {
    std::size_t grid = 0;  // N of the images the bank convolves with
    std::vector<Matrix<Quaternion>> members;
};

struct QwtParams {
    double scale = 1.0;
    double angle = 0.0;
};

QwtBank make_qwt_bank(const Matrix<Quaternion>& mother, const std::vector<QwtParams>& params,
                      std::size_t grid);

/// Default mother wavelet: the four 2-D Haar atoms (LL, LH, HL, HH) in the
/// four quaternion components on a 2 x 2 support.
Matrix<Quaternion> quaternion_haar_mother();

QwtBank default_qwt_bank(std::size_t grid, std::size_t size);

/// Per-member circular 2-D convolution, F_k(r,s) = sum_{p,q} f(p,q)
/// psi_k(r-p, s-q) with the signal multiplying from the left.
std::vector<Matrix<Quaternion>> qwt(const Matrix<Quaternion>& f, const QwtBank& bank);

}  // namespace hpr
