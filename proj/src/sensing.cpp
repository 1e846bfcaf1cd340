#include "hpr/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hpr {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::GaussianReal: return "gaussian-r";
        case ModelKind::GaussianQuaternion: return "gaussian-q";
        case ModelKind::GaussianOctonion: return "gaussian-o";
        case ModelKind::CodedFourierQ: return "coded-fourier";
        case ModelKind::StftQ: return "stft";
        case ModelKind::WaveletQ: return "wavelet";
    }
    return "unknown";
}

DoeAlphabet DoeAlphabet::standard(std::size_t d) {
    if (d < 2) throw std::invalid_argument("alphabet needs at least two symbols");
    DoeAlphabet a;
    if (d == 4) {
        a.symbols = {Quaternion(1), Quaternion(-1), Quaternion(0, 1), Quaternion(0, -1)};
        return a;
    }
    if (d == 8) {
        a.symbols = {Quaternion(1),        Quaternion(-1),       Quaternion(0, 1),
                     Quaternion(0, -1),    Quaternion(0, 0, 1),  Quaternion(0, 0, -1),
                     Quaternion(0, 0, 0, 1), Quaternion(0, 0, 0, -1)};
        return a;
    }
    // symmetric grid {-1,0,1}^4 minus the origin, normalized, fixed order
    for (int ca = -1; ca <= 1; ++ca)
        for (int cb = -1; cb <= 1; ++cb)
            for (int cc = -1; cc <= 1; ++cc)
                for (int cd = -1; cd <= 1; ++cd) {
                    Quaternion q(ca, cb, cc, cd);
                    const double m = abs(q);
                    if (m == 0.0) continue;
                    a.symbols.push_back(q * (1.0 / m));
                    if (a.symbols.size() == d) return a;
                }
    throw std::invalid_argument("alphabet size too large for the coding grid");
}

std::vector<double> add_noise(const std::vector<double>& y, double snr_db, std::uint64_t seed) {
    if (std::isinf(snr_db) && snr_db > 0) return y;
    if (!std::isfinite(snr_db)) throw std::invalid_argument("snr_db must be finite or +inf");
    double energy = 0.0;
    for (double v : y) energy += v * v;
    if (energy == 0.0) throw std::invalid_argument("cannot set a finite SNR on a zero signal");
    const double noise_energy = energy * std::pow(10.0, -snr_db / 10.0);
    const double sigma = std::sqrt(noise_energy / static_cast<double>(y.size()));
    Rng rng(seed);
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = std::max(0.0, y[i] + rng.normal(sigma));
    return out;
}

namespace {

template <class S>
Matrix<S> sample_rows(ModelKind kind, std::size_t m, std::size_t n, std::uint64_t seed) {
    Matrix<S> rows(m, n);
    Rng rng(derive_seed(seed, 0x617453));
    constexpr int dim = algebra_traits<S>::dim;
    const double comp_sigma = 1.0 / std::sqrt(static_cast<double>(dim));
    for (std::size_t l = 0; l < m; ++l)
        for (std::size_t j = 0; j < n; ++j) {
            if (kind == ModelKind::GaussianReal) {
                S e{};
                e.set_coeff(0, rng.normal(1.0));
                rows(l, j) = e;
            } else {
                rows(l, j) = rng.template normal_scalar<S>(comp_sigma);
            }
        }
    return rows;
}

}  // namespace

template <class S>
SensingModel<S> SensingModel<S>::gaussian(ModelKind kind, std::size_t m, std::size_t n,
                                          std::uint64_t seed) {
    if (m < 1 || n < 1) throw std::invalid_argument("gaussian model needs m, n >= 1");
    const bool quaternion_kind =
        kind == ModelKind::GaussianReal || kind == ModelKind::GaussianQuaternion;
    if constexpr (std::is_same_v<S, Quaternion>) {
        if (!quaternion_kind) throw std::invalid_argument("model kind does not match quaternion scalar");
    } else {
        if (kind != ModelKind::GaussianOctonion)
            throw std::invalid_argument("model kind does not match octonion scalar");
    }
    SensingModel<S> model;
    model.kind_ = kind;
    model.m_ = m;
    model.n_ = n;
    model.seed_ = seed;
    model.rows_ = sample_rows<S>(kind, m, n, seed);
    return model;
}

template <class S>
SensingModel<S> SensingModel<S>::from_rows(Matrix<S> rows) {
    if (rows.rows < 1 || rows.cols < 1) throw std::invalid_argument("rows matrix must be nonempty");
    SensingModel<S> model;
    model.kind_ = std::is_same_v<S, Octonion> ? ModelKind::GaussianOctonion
                                              : ModelKind::GaussianQuaternion;
    model.m_ = rows.rows;
    model.n_ = rows.cols;
    model.rows_ = std::move(rows);
    return model;
}

template <class S>
SensingModel<S> SensingModel<S>::coded_fourier(std::size_t side, std::size_t snapshots,
                                               const DoeAlphabet& alphabet, std::uint64_t seed) {
    if constexpr (!std::is_same_v<S, Quaternion>) {
        throw std::invalid_argument("coded Fourier model is quaternion-valued");
    } else {
        if (side < 2 || snapshots < 1) throw std::invalid_argument("coded fourier needs N >= 2, L >= 1");
        if (alphabet.size() < 2) throw std::invalid_argument("alphabet needs at least two symbols");
        for (const Quaternion& q : alphabet.symbols)
            if (std::abs(norm2(q) - 1.0) > 1e-12)
                throw std::invalid_argument("alphabet symbols must have unit modulus");
        SensingModel<S> model;
        model.kind_ = ModelKind::CodedFourierQ;
        model.side_ = side;
        model.n_ = side * side;
        model.m_ = snapshots * model.n_;
        model.seed_ = seed;
        model.qdft_ = std::make_shared<Qdft2D>(side);
        Rng rng(derive_seed(seed, 0xd0e));
        for (std::size_t k = 0; k < snapshots; ++k) {
            Vec<Quaternion> diag(model.n_);
            for (Quaternion& q : diag) q = alphabet.symbols[rng.integer(alphabet.size())];
            model.does_.push_back(std::move(diag));
        }
        return model;
    }
}

template <class S>
SensingModel<S> SensingModel<S>::stft(QstftPlan plan) {
    if constexpr (!std::is_same_v<S, Quaternion>) {
        throw std::invalid_argument("stft model is quaternion-valued");
    } else {
        SensingModel<S> model;
        model.kind_ = ModelKind::StftQ;
        model.n_ = plan.length;
        model.m_ = plan.sections() * plan.length;
        model.stft_plan_ = std::move(plan);
        for (std::size_t r = 0; r < model.stft_plan_.sections(); ++r)
            model.stft_windows_.push_back(model.stft_plan_.shifted_window(r));
        return model;
    }
}

template <class S>
SensingModel<S> SensingModel<S>::wavelet(QwtBank bank) {
    if constexpr (!std::is_same_v<S, Quaternion>) {
        throw std::invalid_argument("wavelet model is quaternion-valued");
    } else {
        if (bank.members.empty()) throw std::invalid_argument("empty wavelet bank");
        SensingModel<S> model;
        model.kind_ = ModelKind::WaveletQ;
        model.n_ = bank.grid * bank.grid;
        model.m_ = bank.members.size() * model.n_;
        model.bank_ = std::move(bank);
        return model;
    }
}

template <class S>
const Matrix<S>& SensingModel<S>::rows() const {
    if (!has_dense_rows()) throw std::logic_error("model has no dense row representation");
    return rows_;
}

namespace {

Matrix<Quaternion> reshape_square(const Vec<Quaternion>& x, std::size_t side) {
    Matrix<Quaternion> img(side, side);
    for (std::size_t r = 0; r < side; ++r)
        for (std::size_t s = 0; s < side; ++s) img(r, s) = x[r * side + s];
    return img;
}

void flatten_into(const Matrix<Quaternion>& img, std::size_t offset, Vec<Quaternion>& out) {
    for (std::size_t r = 0; r < img.rows; ++r)
        for (std::size_t s = 0; s < img.cols; ++s) out[offset + r * img.cols + s] = img(r, s);
}

}  // namespace

template <class S>
Vec<S> SensingModel<S>::apply(const Vec<S>& x) const {
    if (x.size() != n_) throw std::invalid_argument("signal length mismatch");
    Vec<S> u(m_, S{});
    switch (kind_) {
        case ModelKind::GaussianReal:
        case ModelKind::GaussianQuaternion:
        case ModelKind::GaussianOctonion: {
            for (std::size_t l = 0; l < m_; ++l) {
                S acc{};
                const S* row = &rows_.data[l * n_];
                for (std::size_t j = 0; j < n_; ++j) acc += conj(row[j]) * x[j];
                u[l] = acc;
            }
            return u;
        }
        default: break;
    }
    if constexpr (std::is_same_v<S, Quaternion>) {
        switch (kind_) {
            case ModelKind::CodedFourierQ: {
                Vec<Quaternion> coded(n_);
                for (std::size_t k = 0; k < does_.size(); ++k) {
                    const Vec<Quaternion>& d = does_[k];
                    for (std::size_t j = 0; j < n_; ++j) coded[j] = d[j] * x[j];
                    flatten_into(qdft_->forward(reshape_square(coded, side_)), k * n_, u);
                }
                return u;
            }
            case ModelKind::StftQ: {
                const std::size_t len = stft_plan_.length;
                Vec<Quaternion> windowed(len);
                for (std::size_t r = 0; r < stft_windows_.size(); ++r) {
                    const Vec<Quaternion>& w = stft_windows_[r];
                    for (std::size_t b = 0; b < len; ++b) windowed[b] = w[b] * x[b];
                    for (std::size_t s = 0; s < len; ++s)
                        u[r * len + s] = qdft1d_row_apply(s, windowed);
                }
                return u;
            }
            case ModelKind::WaveletQ: {
                const auto convs = qwt(reshape_square(x, bank_.grid), bank_);
                for (std::size_t k = 0; k < convs.size(); ++k) flatten_into(convs[k], k * n_, u);
                return u;
            }
            default: break;
        }
    }
    throw std::logic_error("unreachable sensing variant");
}

template <class S>
Vec<S> SensingModel<S>::adjoint(const Vec<S>& w) const {
    if (w.size() != m_) throw std::invalid_argument("measurement length mismatch");
    Vec<S> out(n_, S{});
    switch (kind_) {
        case ModelKind::GaussianReal:
        case ModelKind::GaussianQuaternion:
        case ModelKind::GaussianOctonion: {
            for (std::size_t l = 0; l < m_; ++l) {
                const S* row = &rows_.data[l * n_];
                const S& wl = w[l];
                for (std::size_t j = 0; j < n_; ++j) out[j] += row[j] * wl;
            }
            return out;
        }
        default: break;
    }
    if constexpr (std::is_same_v<S, Quaternion>) {
        switch (kind_) {
            case ModelKind::CodedFourierQ: {
                for (std::size_t k = 0; k < does_.size(); ++k) {
                    Matrix<Quaternion> block(side_, side_);
                    for (std::size_t r = 0; r < side_; ++r)
                        for (std::size_t s = 0; s < side_; ++s)
                            block(r, s) = w[k * n_ + r * side_ + s];
                    // the forward transform is an isometry, so its adjoint is
                    // the inverse transform
                    const Matrix<Quaternion> back = qdft_->inverse(block);
                    const Vec<Quaternion>& d = does_[k];
                    for (std::size_t j = 0; j < n_; ++j)
                        out[j] += conj(d[j]) * back(j / side_, j % side_);
                }
                return out;
            }
            case ModelKind::StftQ: {
                const std::size_t len = stft_plan_.length;
                const double scale = 1.0 / std::sqrt(static_cast<double>(len));
                for (std::size_t r = 0; r < stft_windows_.size(); ++r) {
                    const Vec<Quaternion>& win = stft_windows_[r];
                    for (std::size_t b = 0; b < len; ++b) {
                        Quaternion acc;
                        for (std::size_t s = 0; s < len; ++s) {
                            const double theta =
                                2.0 * std::numbers::pi * ((s * b) % len) / static_cast<double>(len);
                            acc += mul_left_expi(w[r * len + s], std::cos(theta), std::sin(theta));
                        }
                        out[b] += conj(win[b]) * (acc * scale);
                    }
                }
                return out;
            }
            case ModelKind::WaveletQ: {
                const std::size_t g = bank_.grid;
                for (std::size_t k = 0; k < bank_.members.size(); ++k) {
                    const Matrix<Quaternion>& psi = bank_.members[k];
                    for (std::size_t p = 0; p < g; ++p)
                        for (std::size_t q = 0; q < g; ++q) {
                            Quaternion acc;
                            for (std::size_t r = 0; r < g; ++r)
                                for (std::size_t s = 0; s < g; ++s)
                                    acc += w[k * n_ + r * g + s] *
                                           conj(psi((r + g - p) % g, (s + g - q) % g));
                            out[p * g + q] += acc;
                        }
                }
                return out;
            }
            default: break;
        }
    }
    throw std::logic_error("unreachable sensing variant");
}

template <class S>
S SensingModel<S>::row_apply(std::size_t ell, const Vec<S>& x) const {
    if (ell >= m_) throw std::out_of_range("row index out of range");
    if (x.size() != n_) throw std::invalid_argument("signal length mismatch");
    switch (kind_) {
        case ModelKind::GaussianReal:
        case ModelKind::GaussianQuaternion:
        case ModelKind::GaussianOctonion: {
            S acc{};
            const S* row = &rows_.data[ell * n_];
            for (std::size_t j = 0; j < n_; ++j) acc += conj(row[j]) * x[j];
            return acc;
        }
        default: break;
    }
    if constexpr (std::is_same_v<S, Quaternion>) {
        switch (kind_) {
            case ModelKind::CodedFourierQ: {
                const std::size_t k = snapshot_of(ell);
                const std::size_t freq = frequency_of(ell);
                Vec<Quaternion> coded(n_);
                const Vec<Quaternion>& d = does_[k];
                for (std::size_t j = 0; j < n_; ++j) coded[j] = d[j] * x[j];
                return qdft_->row_apply(freq / side_, freq % side_, reshape_square(coded, side_));
            }
            case ModelKind::StftQ: {
                const std::size_t len = stft_plan_.length;
                const std::size_t r = ell / len;
                const std::size_t s = ell % len;
                const Vec<Quaternion>& win = stft_windows_[r];
                Vec<Quaternion> windowed(len);
                for (std::size_t b = 0; b < len; ++b) windowed[b] = win[b] * x[b];
                return qdft1d_row_apply(s, windowed);
            }
            case ModelKind::WaveletQ: {
                const std::size_t g = bank_.grid;
                const std::size_t k = ell / n_;
                const std::size_t r = (ell % n_) / g;
                const std::size_t s = (ell % n_) % g;
                const Matrix<Quaternion>& psi = bank_.members[k];
                Quaternion acc;
                for (std::size_t p = 0; p < g; ++p)
                    for (std::size_t q = 0; q < g; ++q)
                        acc += x[p * g + q] * psi((r + g - p) % g, (s + g - q) % g);
                return acc;
            }
            default: break;
        }
    }
    throw std::logic_error("unreachable sensing variant");
}

template <class S>
std::vector<double> SensingModel<S>::measure(const Vec<S>& x) const {
    const Vec<S> u = apply(x);
    std::vector<double> y(m_);
    for (std::size_t l = 0; l < m_; ++l) y[l] = norm2(u[l]);
    return y;
}

template <class S>
RealOperator SensingModel<S>::real_lift() const {
    constexpr int dim = algebra_traits<S>::dim;
    RealOperator op;
    op.rows = m_ * dim;
    op.cols = n_ * dim;
    op.apply = [this](const std::vector<double>& v) { return aleph(apply(aleph_inv<S>(v))); };
    op.adjoint = [this](const std::vector<double>& v) { return aleph(adjoint(aleph_inv<S>(v))); };
    return op;
}

template <class S>
RealMatrix SensingModel<S>::real_lift_matrix() const {
    const RealOperator op = real_lift();
    RealMatrix out(op.rows, op.cols);
    std::vector<double> basis(op.cols, 0.0);
    for (std::size_t j = 0; j < op.cols; ++j) {
        basis[j] = 1.0;
        const std::vector<double> col = op.apply(basis);
        for (std::size_t i = 0; i < op.rows; ++i) out(i, j) = col[i];
        basis[j] = 0.0;
    }
    return out;
}

template class SensingModel<Quaternion>;
template class SensingModel<Octonion>;

}  // namespace hpr
