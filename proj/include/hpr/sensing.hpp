#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hpr/algebra.hpp"
#include "hpr/rng.hpp"
#include "hpr/transforms.hpp"

namespace hpr {

enum class ModelKind {
    GaussianReal,
    GaussianQuaternion,
    GaussianOctonion,
    CodedFourierQ,
    StftQ,
    WaveletQ,
};

std::string to_string(ModelKind kind);

/// Unit-modulus quaternion coding values for the diffractive element; each
/// DOE entry is drawn uniformly from the alphabet.
struct DoeAlphabet {
    std::vector<Quaternion> symbols;

    std::size_t size() const { return symbols.size(); }

    /// d = 4 -> {1,-1,i,-i}; d = 8 -> {+-1,+-i,+-j,+-k}; larger d -> unit
    /// quaternions with components on the symmetric grid {-1,0,1},
    /// normalized, in a fixed deterministic order.
    static DoeAlphabet standard(std::size_t d);
};

/// Real-lifted view of a sensing model: the linear map G with
/// aleph-domain/range such that measurement_l(x) = ||(G v)_block_l||^2.
struct RealOperator {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::function<std::vector<double>(const std::vector<double>&)> apply;
    std::function<std::vector<double>(const std::vector<double>&)> adjoint;
};

/// A real-linear forward operator x -> (row_l applied to x)_l with intensity
/// measurement y = |Ax|^2.  Immutable after construction; all evaluation
/// methods are pure.
template <class S>
class SensingModel {
public:
    static SensingModel gaussian(ModelKind kind, std::size_t m, std::size_t n, std::uint64_t seed);

    /// Wraps caller-supplied dense rows (the measurement is a_l^* x with
    /// a_l the l-th row).
    static SensingModel from_rows(Matrix<S> rows);

    ModelKind kind() const { return kind_; }
    std::size_t measurement_count() const { return m_; }
    std::size_t signal_length() const { return n_; }
    std::uint64_t seed() const { return seed_; }

    /// u_l = row_l applied to x, all rows.
    Vec<S> apply(const Vec<S>& x) const;
    /// sum_l row_l^dagger (w_l) under the real inner product.
    Vec<S> adjoint(const Vec<S>& w) const;
    S row_apply(std::size_t ell, const Vec<S>& x) const;

    /// y_l = |u_l|^2.
    std::vector<double> measure(const Vec<S>& x) const;

    bool has_dense_rows() const { return !rows_.data.empty(); }
    const Matrix<S>& rows() const;

    RealOperator real_lift() const;
    RealMatrix real_lift_matrix() const;

    // transform-variant constructors live on the quaternion instantiation
    static SensingModel coded_fourier(std::size_t side, std::size_t snapshots,
                                      const DoeAlphabet& alphabet, std::uint64_t seed);
    static SensingModel stft(QstftPlan plan);
    static SensingModel wavelet(QwtBank bank);

    // coded-Fourier row decoding: snapshot-major stacking, snapshot k = l / n
    // and flat frequency index l mod n
    std::size_t snapshot_of(std::size_t ell) const { return ell / n_; }
    std::size_t frequency_of(std::size_t ell) const { return ell % n_; }
    std::size_t side() const { return side_; }
    std::size_t snapshots() const { return does_.size(); }
    const std::vector<Vec<Quaternion>>& doe_diagonals() const { return does_; }

private:
    ModelKind kind_ = ModelKind::GaussianQuaternion;
    std::size_t m_ = 0;
    std::size_t n_ = 0;
    std::uint64_t seed_ = 0;

    Matrix<S> rows_;  // Gaussian variants: entries a_{l j}

    // coded Fourier payload
    std::size_t side_ = 0;
    std::vector<Vec<Quaternion>> does_;
    std::shared_ptr<const Qdft2D> qdft_;

    // STFT payload
    QstftPlan stft_plan_;
    std::vector<Vec<Quaternion>> stft_windows_;

    // wavelet payload
    QwtBank bank_;
};

using QuaternionModel = SensingModel<Quaternion>;
using OctonionModel = SensingModel<Octonion>;

/// Additive Gaussian noise scaled so that 10 log10(||y||^2 / E||eta||^2)
/// equals snr_db; entries clamped to stay nonnegative.  An infinite snr_db
/// is the noiseless sentinel.
std::vector<double> add_noise(const std::vector<double>& y, double snr_db, std::uint64_t seed);

}  // namespace hpr
