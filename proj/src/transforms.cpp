#include "hpr/transforms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hpr {

namespace {

std::vector<double> cos_table(std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) t[k] = std::cos(2.0 * std::numbers::pi * k / n);
    return t;
}

std::vector<double> sin_table(std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) t[k] = std::sin(2.0 * std::numbers::pi * k / n);
    return t;
}

}  // namespace

Qdft2D::Qdft2D(std::size_t side) : side_(side), cos_(cos_table(side)), sin_(sin_table(side)) {
    if (side < 1) throw std::invalid_argument("qdft side must be >= 1");
}

Matrix<Quaternion> Qdft2D::forward(const Matrix<Quaternion>& f) const {
    const std::size_t n = side_;
    if (f.rows != n || f.cols != n) throw std::invalid_argument("qdft input shape mismatch");

    // right pass over the column index: G(q,s) = sum_b f(q,b) e^{-j 2pi s b/N}
    Matrix<Quaternion> g(n, n);
    for (std::size_t q = 0; q < n; ++q) {
        for (std::size_t s = 0; s < n; ++s) {
            Quaternion acc;
            for (std::size_t b = 0; b < n; ++b) {
                const std::size_t t = (s * b) % n;
                acc += mul_right_expj(f(q, b), cos_[t], -sin_[t]);
            }
            g(q, s) = acc;
        }
    }
    // left pass over the row index with the 1/N factor
    Matrix<Quaternion> out(n, n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = 0; s < n; ++s) {
            Quaternion acc;
            for (std::size_t q = 0; q < n; ++q) {
                const std::size_t t = (r * q) % n;
                acc += mul_left_expi(g(q, s), cos_[t], -sin_[t]);
            }
            out(r, s) = acc * scale;
        }
    }
    return out;
}

Matrix<Quaternion> Qdft2D::inverse(const Matrix<Quaternion>& spectrum) const {
    const std::size_t n = side_;
    if (spectrum.rows != n || spectrum.cols != n) throw std::invalid_argument("qdft input shape mismatch");

    Matrix<Quaternion> g(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t b = 0; b < n; ++b) {
            Quaternion acc;
            for (std::size_t s = 0; s < n; ++s) {
                const std::size_t t = (s * b) % n;
                acc += mul_right_expj(spectrum(r, s), cos_[t], sin_[t]);
            }
            g(r, b) = acc;
        }
    }
    Matrix<Quaternion> out(n, n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t q = 0; q < n; ++q) {
        for (std::size_t b = 0; b < n; ++b) {
            Quaternion acc;
            for (std::size_t r = 0; r < n; ++r) {
                const std::size_t t = (r * q) % n;
                acc += mul_left_expi(g(r, b), cos_[t], sin_[t]);
            }
            out(q, b) = acc * scale;
        }
    }
    return out;
}

Qdft2D::RowKernels Qdft2D::row(std::size_t r, std::size_t s) const {
    const std::size_t n = side_;
    if (r >= n || s >= n) throw std::out_of_range("qdft row index out of range");
    RowKernels k;
    k.left.resize(n);
    k.right.resize(n);
    k.scale = 1.0 / static_cast<double>(n);
    for (std::size_t q = 0; q < n; ++q) {
        const std::size_t t = (r * q) % n;
        k.left[q] = Quaternion(cos_[t], -sin_[t], 0.0, 0.0);
    }
    for (std::size_t b = 0; b < n; ++b) {
        const std::size_t t = (s * b) % n;
        k.right[b] = Quaternion(cos_[t], 0.0, -sin_[t], 0.0);
    }
    return k;
}

Quaternion Qdft2D::row_apply(std::size_t r, std::size_t s, const Matrix<Quaternion>& f) const {
    const std::size_t n = side_;
    if (f.rows != n || f.cols != n) throw std::invalid_argument("qdft input shape mismatch");
    if (r >= n || s >= n) throw std::out_of_range("qdft row index out of range");
    Quaternion acc;
    for (std::size_t q = 0; q < n; ++q) {
        const std::size_t tq = (r * q) % n;
        for (std::size_t b = 0; b < n; ++b) {
            const std::size_t tb = (s * b) % n;
            acc += mul_left_expi(mul_right_expj(f(q, b), cos_[tb], -sin_[tb]), cos_[tq], -sin_[tq]);
        }
    }
    return acc * (1.0 / static_cast<double>(n));
}

Vec<Quaternion> qdft1d(const Vec<Quaternion>& v) {
    const std::size_t n = v.size();
    Vec<Quaternion> out(n);
    for (std::size_t s = 0; s < n; ++s) out[s] = qdft1d_row_apply(s, v);
    return out;
}

Quaternion qdft1d_row_apply(std::size_t s, const Vec<Quaternion>& v) {
    const std::size_t n = v.size();
    if (s >= n) throw std::out_of_range("qdft1d row index out of range");
    Quaternion acc;
    for (std::size_t b = 0; b < n; ++b) {
        const double theta = 2.0 * std::numbers::pi * ((s * b) % n) / static_cast<double>(n);
        acc += mul_left_expi(v[b], std::cos(theta), -std::sin(theta));
    }
    return acc * (1.0 / std::sqrt(static_cast<double>(n)));
}

Odft3D::Odft3D(std::size_t side) : side_(side), cos_(cos_table(side)), sin_(sin_table(side)) {
    if (side < 1) throw std::invalid_argument("odft side must be >= 1");
}

std::vector<Octonion> Odft3D::forward(const std::vector<Octonion>& f) const {
    const std::size_t n = side_;
    if (f.size() != n * n * n) throw std::invalid_argument("odft input shape mismatch");
    const auto at = [n](std::size_t a, std::size_t b, std::size_t c) { return (a * n + b) * n + c; };

    // kernel(u, t) = cos - e_u sin for exp(-e_u 2pi t / N)
    const auto kernel = [this](int unit, std::size_t t) {
        Octonion k;
        k.c[0] = cos_[t];
        k.c[static_cast<std::size_t>(unit)] = -sin_[t];
        return k;
    };

    // axis passes in the printed order; right multiplication keeps the
    // ((f k1) k2) k3 parenthesization per term
    std::vector<Octonion> g1(f.size());
    for (std::size_t k1 = 0; k1 < n; ++k1)
        for (std::size_t n2 = 0; n2 < n; ++n2)
            for (std::size_t n3 = 0; n3 < n; ++n3) {
                Octonion acc;
                for (std::size_t n1 = 0; n1 < n; ++n1)
                    acc += omul(f[at(n1, n2, n3)], kernel(1, (k1 * n1) % n));
                g1[at(k1, n2, n3)] = acc;
            }
    std::vector<Octonion> g2(f.size());
    for (std::size_t k1 = 0; k1 < n; ++k1)
        for (std::size_t k2 = 0; k2 < n; ++k2)
            for (std::size_t n3 = 0; n3 < n; ++n3) {
                Octonion acc;
                for (std::size_t n2 = 0; n2 < n; ++n2)
                    acc += omul(g1[at(k1, n2, n3)], kernel(2, (k2 * n2) % n));
                g2[at(k1, k2, n3)] = acc;
            }
    std::vector<Octonion> out(f.size());
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t k1 = 0; k1 < n; ++k1)
        for (std::size_t k2 = 0; k2 < n; ++k2)
            for (std::size_t k3 = 0; k3 < n; ++k3) {
                Octonion acc;
                for (std::size_t n3 = 0; n3 < n; ++n3)
                    acc += omul(g2[at(k1, k2, n3)], kernel(4, (k3 * n3) % n));
                out[at(k1, k2, k3)] = acc * scale;
            }
    return out;
}

std::size_t QstftPlan::sections() const {
    return (length + window.size() - 1 + hop - 1) / hop;
}

Vec<Quaternion> QstftPlan::shifted_window(std::size_t r) const {
    Vec<Quaternion> w(length, Quaternion{});
    const std::size_t shift = (r * hop) % length;
    for (std::size_t t = 0; t < window.size(); ++t) w[(t + shift) % length] = window[t];
    return w;
}

QstftPlan make_qstft_plan(Vec<Quaternion> window, std::size_t hop, std::size_t length) {
    if (window.empty() || length == 0 || hop == 0) throw std::invalid_argument("qstft plan parameters");
    if (window.size() > length) throw std::invalid_argument("qstft window longer than signal");
    return QstftPlan{std::move(window), hop, length};
}

Matrix<Quaternion> qstft(const Vec<Quaternion>& f, const QstftPlan& plan) {
    if (f.size() != plan.length) throw std::invalid_argument("qstft signal length mismatch");
    const std::size_t n = plan.length;
    const std::size_t r_count = plan.sections();
    Matrix<Quaternion> out(r_count, n);
    Vec<Quaternion> windowed(n);
    for (std::size_t r = 0; r < r_count; ++r) {
        const Vec<Quaternion> w = plan.shifted_window(r);
        for (std::size_t b = 0; b < n; ++b) windowed[b] = w[b] * f[b];
        for (std::size_t s = 0; s < n; ++s) out(r, s) = qdft1d_row_apply(s, windowed);
    }
    return out;
}

Matrix<Quaternion> quaternion_haar_mother() {
    Matrix<Quaternion> psi(2, 2);
    const double h = 0.5;
    // components: a = LL, b = LH, c = HL, d = HH
    psi(0, 0) = Quaternion(h, h, h, h);
    psi(0, 1) = Quaternion(h, -h, h, -h);
    psi(1, 0) = Quaternion(h, h, -h, -h);
    psi(1, 1) = Quaternion(h, -h, -h, h);
    return psi;
}

QwtBank make_qwt_bank(const Matrix<Quaternion>& mother, const std::vector<QwtParams>& params,
                      std::size_t grid) {
    if (params.empty()) throw std::invalid_argument("empty wavelet bank");
    if (mother.rows > grid || mother.cols > grid)
        throw std::invalid_argument("wavelet support exceeds image size");
    QwtBank bank;
    bank.grid = grid;
    const auto signed_offset = [grid](std::size_t p) {
        const auto half = static_cast<long>(grid / 2);
        auto v = static_cast<long>(p);
        if (v >= half) v -= static_cast<long>(grid);
        return v;
    };
    // mother samples addressed by signed offsets around its own centre
    const auto mother_at = [&mother](long u, long v) {
        const long rc = static_cast<long>(mother.rows) / 2;
        const long cc = static_cast<long>(mother.cols) / 2;
        const long r = u + rc;
        const long c = v + cc;
        if (r < 0 || c < 0 || r >= static_cast<long>(mother.rows) || c >= static_cast<long>(mother.cols))
            return Quaternion{};
        return mother(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    };
    for (const QwtParams& pr : params) {
        if (pr.scale <= 0.0) throw std::invalid_argument("wavelet scale must be positive");
        Matrix<Quaternion> member(grid, grid);
        const double ca = std::cos(-pr.angle);
        const double sa = std::sin(-pr.angle);
        for (std::size_t p = 0; p < grid; ++p)
            for (std::size_t q = 0; q < grid; ++q) {
                const double u = static_cast<double>(signed_offset(p));
                const double v = static_cast<double>(signed_offset(q));
                // rotate by -theta, then shrink by the scale
                const double ur = (ca * u + sa * v) / pr.scale;
                const double vr = (-sa * u + ca * v) / pr.scale;
                const long ui = std::lround(ur);
                const long vi = std::lround(vr);
                member(p, q) = mother_at(ui, vi) * (1.0 / pr.scale);
            }
        bank.members.push_back(std::move(member));
    }
    return bank;
}

QwtBank default_qwt_bank(std::size_t grid, std::size_t size) {
    std::vector<QwtParams> params;
    const double half_pi = std::numbers::pi / 2.0;
    for (std::size_t k = 0; k < size; ++k) {
        QwtParams p;
        p.scale = (k / 4 == 0) ? 1.0 : 2.0;
        p.angle = half_pi * static_cast<double>(k % 4);
        params.push_back(p);
    }
    return make_qwt_bank(quaternion_haar_mother(), params, grid);
}

std::vector<Matrix<Quaternion>> qwt(const Matrix<Quaternion>& f, const QwtBank& bank) {
    if (bank.members.empty()) throw std::invalid_argument("empty wavelet bank");
    const std::size_t n = bank.grid;
    if (f.rows != n || f.cols != n) throw std::invalid_argument("qwt input shape mismatch");
    std::vector<Matrix<Quaternion>> out;
    out.reserve(bank.members.size());
    for (const Matrix<Quaternion>& psi : bank.members) {
        Matrix<Quaternion> conv(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t s = 0; s < n; ++s) {
                Quaternion acc;
                for (std::size_t p = 0; p < n; ++p)
                    for (std::size_t q = 0; q < n; ++q)
                        acc += f(p, q) * psi((r + n - p) % n, (s + n - q) % n);
                conv(r, s) = acc;
            }
        out.push_back(std::move(conv));
    }
    return out;
}

}  // namespace hpr
