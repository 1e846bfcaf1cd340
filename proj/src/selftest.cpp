#include "hpr/selftest.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "hpr/harness.hpp"
#include "hpr/rng.hpp"
#include "hpr/sensing.hpp"
#include "hpr/solvers.hpp"
#include "hpr/transforms.hpp"

namespace hpr {

namespace {

std::string with_seed(std::uint64_t seed, const std::string& msg) {
    std::ostringstream os;
    os << msg << " (seed " << seed << ")";
    return os.str();
}

SelftestResult algebra_group(const SelftestOptions& opt) {
    SelftestResult res{"algebra-laws", true, ""};
    GimelTemplate table = kGimel;
    if (opt.inject_octonion_sign_defect) table.sign[2][3] = -table.sign[2][3];

    Rng rng(derive_seed(opt.seed, 0xa19));
    double worst_norm_q = 0.0, worst_norm_o = 0.0, worst_assoc = 0.0, worst_alt = 0.0;
    double best_witness = 0.0;
    for (int t = 0; t < 10000; ++t) {
        const Quaternion qx = rng.normal_scalar<Quaternion>(1.0);
        const Quaternion qy = rng.normal_scalar<Quaternion>(1.0);
        const Quaternion qz = rng.normal_scalar<Quaternion>(1.0);
        worst_norm_q = std::max(
            worst_norm_q, std::abs(abs(qx * qy) - abs(qx) * abs(qy)) / (abs(qx) * abs(qy)));
        worst_assoc = std::max(worst_assoc, abs((qx * qy) * qz - qx * (qy * qz)) /
                                                (abs(qx) * abs(qy) * abs(qz)));

        const Octonion ox = rng.normal_scalar<Octonion>(1.0);
        const Octonion oy = rng.normal_scalar<Octonion>(1.0);
        worst_norm_o =
            std::max(worst_norm_o, std::abs(abs(omul_with(table, ox, oy)) - abs(ox) * abs(oy)) /
                                       (abs(ox) * abs(oy)));
        const Octonion oxx = omul_with(table, ox, ox);
        worst_alt = std::max(
            worst_alt,
            abs(omul_with(table, oxx, oy) - omul_with(table, ox, omul_with(table, ox, oy))) /
                (norm2(ox) * abs(oy)));
        worst_alt = std::max(
            worst_alt,
            abs(omul_with(table, omul_with(table, oy, ox), ox) - omul_with(table, oy, oxx)) /
                (norm2(ox) * abs(oy)));
    }
    for (int t = 0; t < 100; ++t) {
        const Octonion x = rng.unit_scalar<Octonion>();
        const Octonion y = rng.unit_scalar<Octonion>();
        const Octonion z = rng.unit_scalar<Octonion>();
        best_witness = std::max(best_witness, abs(omul_with(table, omul_with(table, x, y), z) -
                                                  omul_with(table, x, omul_with(table, y, z))));
    }

    std::ostringstream os;
    os << "norm-mult q " << worst_norm_q << ", o " << worst_norm_o << "; assoc " << worst_assoc
       << "; alt " << worst_alt << "; nonassoc witness " << best_witness;
    res.passed = worst_norm_q <= 1e-12 && worst_norm_o <= 1e-12 && worst_assoc <= 1e-12 &&
                 worst_alt <= 1e-12 && best_witness > 0.1;
    res.detail = with_seed(opt.seed, os.str());
    if (!res.passed && worst_norm_o > 1e-12)
        res.detail += "; FAILING: octonion norm multiplicativity";
    return res;
}

SelftestResult representation_group(const SelftestOptions& opt) {
    SelftestResult res{"representation-homomorphism", true, ""};
    Rng rng(derive_seed(opt.seed, 0x41e));
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        Matrix<Octonion> A(4, 3);
        for (Octonion& e : A.data) e = rng.normal_scalar<Octonion>(1.0);
        const Vec<Octonion> x = rng.normal_vector<Octonion>(3, 1.0);
        const std::vector<double> lhs = aleph(matvec(A, x));
        const std::vector<double> rhs = matvec(gimel(A), aleph(x));
        double err = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            err += (lhs[i] - rhs[i]) * (lhs[i] - rhs[i]);
            scale += lhs[i] * lhs[i];
        }
        worst = std::max(worst, std::sqrt(err) / std::max(1e-300, std::sqrt(scale)));
        const std::vector<double> ax = aleph(x);
        const double ax_norm =
            std::sqrt(std::inner_product(ax.begin(), ax.end(), ax.begin(), 0.0));
        worst = std::max(worst, std::abs(norm(x) - ax_norm) / norm(x));

        Matrix<Quaternion> B(4, 3);
        for (Quaternion& e : B.data) e = rng.normal_scalar<Quaternion>(1.0);
        const Vec<Quaternion> qx = rng.normal_vector<Quaternion>(3, 1.0);
        const std::vector<double> ql = aleph(matvec(B, qx));
        const std::vector<double> qr = matvec(gimel(B), aleph(qx));
        double qerr = 0.0, qscale = 0.0;
        for (std::size_t i = 0; i < ql.size(); ++i) {
            qerr += (ql[i] - qr[i]) * (ql[i] - qr[i]);
            qscale += ql[i] * ql[i];
        }
        worst = std::max(worst, std::sqrt(qerr) / std::max(1e-300, std::sqrt(qscale)));
    }
    // gimel(x)^T gimel(x) = |x|^2 I
    double worst_orth = 0.0;
    for (int t = 0; t < 200; ++t) {
        const Octonion x = rng.normal_scalar<Octonion>(1.0);
        const RealMatrix g = gimel(x);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) {
                double acc = 0.0;
                for (int k = 0; k < 8; ++k) acc += g(k, i) * g(k, j);
                const double expect = i == j ? norm2(x) : 0.0;
                worst_orth = std::max(worst_orth, std::abs(acc - expect) / norm2(x));
            }
    }
    std::ostringstream os;
    os << "aleph/gimel homomorphism " << worst << "; gimel orthogonality " << worst_orth;
    res.passed = worst <= 1e-12 && worst_orth <= 1e-12;
    res.detail = with_seed(opt.seed, os.str());
    return res;
}

SelftestResult transform_group(const SelftestOptions& opt) {
    SelftestResult res{"transform-correctness", true, ""};
    Rng rng(derive_seed(opt.seed, 0x7f0));

    // QDFT round trip + Parseval + row consistency at N=8
    const std::size_t n = 8;
    const Qdft2D plan(n);
    Matrix<Quaternion> f(n, n);
    for (Quaternion& e : f.data) e = rng.normal_scalar<Quaternion>(1.0);
    const Matrix<Quaternion> F = plan.forward(f);
    const Matrix<Quaternion> back = plan.inverse(F);
    double rt = 0.0, nf = 0.0, nF = 0.0, rowerr = 0.0;
    for (std::size_t i = 0; i < f.data.size(); ++i) {
        rt += norm2(back.data[i] - f.data[i]);
        nf += norm2(f.data[i]);
        nF += norm2(F.data[i]);
    }
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s)
            rowerr = std::max(rowerr, abs(plan.row_apply(r, s, f) - F(r, s)));
    const double roundtrip = std::sqrt(rt / nf);
    const double parseval = std::abs(std::sqrt(nF) - std::sqrt(nf)) / std::sqrt(nf);

    // ODFT vs direct triple sum at N=4
    const std::size_t no = 4;
    const Odft3D oplan(no);
    std::vector<Octonion> vol(no * no * no);
    for (Octonion& e : vol) e = rng.normal_scalar<Octonion>(1.0);
    const std::vector<Octonion> spec = oplan.forward(vol);
    double oerr = 0.0;
    for (std::size_t k1 = 0; k1 < no; ++k1)
        for (std::size_t k2 = 0; k2 < no; ++k2)
            for (std::size_t k3 = 0; k3 < no; ++k3) {
                Octonion acc;
                for (std::size_t n1 = 0; n1 < no; ++n1)
                    for (std::size_t n2 = 0; n2 < no; ++n2)
                        for (std::size_t n3 = 0; n3 < no; ++n3) {
                            const auto kernel = [no](int unit, std::size_t t) {
                                Octonion k;
                                const double th =
                                    2.0 * std::numbers::pi * t / static_cast<double>(no);
                                k.c[0] = std::cos(th);
                                k.c[static_cast<std::size_t>(unit)] = -std::sin(th);
                                return k;
                            };
                            Octonion term = vol[(n1 * no + n2) * no + n3];
                            term = omul(term, kernel(1, (k1 * n1) % no));
                            term = omul(term, kernel(2, (k2 * n2) % no));
                            term = omul(term, kernel(4, (k3 * n3) % no));
                            acc += term;
                        }
                acc *= 1.0 / static_cast<double>(no);
                oerr = std::max(oerr, abs(acc - spec[(k1 * no + k2) * no + k3]));
            }

    // QWT vs direct double sum at N=4
    const std::size_t nw = 4;
    Matrix<Quaternion> img(nw, nw), psi(nw, nw);
    for (Quaternion& e : img.data) e = rng.normal_scalar<Quaternion>(1.0);
    for (Quaternion& e : psi.data) e = rng.normal_scalar<Quaternion>(1.0);
    QwtBank bank;
    bank.grid = nw;
    bank.members = {psi};
    const auto conv = qwt(img, bank);
    double werr = 0.0;
    for (std::size_t r = 0; r < nw; ++r)
        for (std::size_t s = 0; s < nw; ++s) {
            Quaternion acc;
            for (std::size_t p = 0; p < nw; ++p)
                for (std::size_t q = 0; q < nw; ++q)
                    acc += img(p, q) * psi((r + nw - p) % nw, (s + nw - q) % nw);
            werr = std::max(werr, abs(acc - conv[0](r, s)));
        }

    // full-window single-section QSTFT reproduces the 1-D QDFT
    Vec<Quaternion> sig = rng.normal_vector<Quaternion>(n, 1.0);
    const QstftPlan stft_plan =
        make_qstft_plan(Vec<Quaternion>(n, Quaternion(1.0)), n, n);
    const Matrix<Quaternion> stft_out = qstft(sig, stft_plan);
    const Vec<Quaternion> dft = qdft1d(sig);
    double serr = 0.0;
    for (std::size_t s = 0; s < n; ++s) serr = std::max(serr, abs(stft_out(0, s) - dft[s]));

    std::ostringstream os;
    os << "qdft roundtrip " << roundtrip << ", parseval " << parseval << ", rows " << rowerr
       << "; odft " << oerr << "; qwt " << werr << "; qstft " << serr;
    res.passed = roundtrip <= 1e-10 && parseval <= 1e-10 && rowerr <= 1e-12 && oerr <= 1e-12 &&
                 werr <= 1e-12 && serr <= 1e-10;
    res.detail = with_seed(opt.seed, os.str());
    return res;
}

template <class S>
double gradient_fd_error(const SensingModel<S>& model, const std::vector<double>& y, Loss loss,
                         const SolverConfig& config, Rng& rng) {
    const Vec<S> x = rng.template normal_vector<S>(model.signal_length(), 1.0);
    const std::vector<double> g = aleph(wf_gradient(model, y, x, loss, config));
    std::vector<double> v = aleph(x);
    std::vector<double> fd(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(v[i]));
        const double keep = v[i];
        v[i] = keep + h;
        const double fp = wf_cost(model, y, aleph_inv<S>(v), loss, config);
        v[i] = keep - h;
        const double fm = wf_cost(model, y, aleph_inv<S>(v), loss, config);
        v[i] = keep;
        fd[i] = (fp - fm) / (2.0 * h);
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        num += (g[i] - fd[i]) * (g[i] - fd[i]);
        den += fd[i] * fd[i];
    }
    return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

SelftestResult gradient_group(const SelftestOptions& opt) {
    SelftestResult res{"gradient-checks", true, ""};
    Rng rng(derive_seed(opt.seed, 0x96ad));
    SolverConfig config;
    config.tau_lo = 0.0;
    config.tau_hi = std::numeric_limits<double>::infinity();

    const auto qmodel =
        SensingModel<Quaternion>::gaussian(ModelKind::GaussianQuaternion, 24, 6, opt.seed + 1);
    const auto omodel =
        SensingModel<Octonion>::gaussian(ModelKind::GaussianOctonion, 24, 4, opt.seed + 2);
    const Vec<Quaternion> qx = rng.normal_vector<Quaternion>(6, 1.0);
    const Vec<Octonion> ox = rng.normal_vector<Octonion>(4, 1.0);
    const std::vector<double> qy = qmodel.measure(qx);
    const std::vector<double> oy = omodel.measure(ox);

    double worst_q = 0.0, worst_o = 0.0, worst_p = 0.0;
    for (int t = 0; t < 20; ++t) {
        worst_q = std::max(worst_q, gradient_fd_error(qmodel, qy, Loss::Quadratic, config, rng));
        worst_o = std::max(worst_o, gradient_fd_error(omodel, oy, Loss::Quadratic, config, rng));
        worst_p = std::max(worst_p, gradient_fd_error(qmodel, qy, Loss::Poisson, config, rng));
    }
    std::ostringstream os;
    os << "qwf " << worst_q << "; owf " << worst_o << "; qtwf (untrimmed) " << worst_p;
    res.passed = worst_q < 1e-6 && worst_o < 1e-6 && worst_p < 1e-6;
    res.detail = with_seed(opt.seed, os.str());
    return res;
}

}  // namespace

std::vector<SelftestResult> run_selftest(const SelftestOptions& options) {
    std::vector<SelftestResult> out;
    out.push_back(algebra_group(options));
    out.push_back(representation_group(options));
    out.push_back(transform_group(options));
    out.push_back(gradient_group(options));
    return out;
}

}  // namespace hpr
