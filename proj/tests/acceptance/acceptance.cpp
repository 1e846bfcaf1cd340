// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion.  The first argument must be the
// path of the hpr command-line binary (used by the reproducibility check).

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hpr/harness.hpp"
#include "hpr/rng.hpp"

using namespace hpr;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    int id;
    std::string label;
    std::function<bool(std::string&)> check;
};

// ---- 1: algebra laws ----------------------------------------------------

bool algebra_laws(std::string& detail) {
    Rng rng(20240001);
    double worst_norm_q = 0, worst_norm_o = 0, worst_assoc = 0, worst_alt = 0, witness = 0;
    for (int t = 0; t < 10000; ++t) {
        const Quaternion qa = rng.normal_scalar<Quaternion>(1.0);
        const Quaternion qb = rng.normal_scalar<Quaternion>(1.0);
        const Quaternion qc = rng.normal_scalar<Quaternion>(1.0);
        worst_norm_q = std::max(worst_norm_q,
                                std::abs(abs(qa * qb) - abs(qa) * abs(qb)) / (abs(qa) * abs(qb)));
        worst_assoc = std::max(
            worst_assoc, abs((qa * qb) * qc - qa * (qb * qc)) / (abs(qa) * abs(qb) * abs(qc)));
        const Octonion oa = rng.normal_scalar<Octonion>(1.0);
        const Octonion ob = rng.normal_scalar<Octonion>(1.0);
        worst_norm_o = std::max(
            worst_norm_o, std::abs(abs(omul(oa, ob)) - abs(oa) * abs(ob)) / (abs(oa) * abs(ob)));
        const Octonion oaa = omul(oa, oa);
        worst_alt =
            std::max(worst_alt, abs(omul(oaa, ob) - omul(oa, omul(oa, ob))) / (norm2(oa) * abs(ob)));
        worst_alt = std::max(
            worst_alt, abs(omul(omul(ob, oa), oa) - omul(ob, oaa)) / (norm2(oa) * abs(ob)));
    }
    for (int t = 0; t < 100; ++t) {
        const Octonion x = rng.unit_scalar<Octonion>();
        const Octonion y = rng.unit_scalar<Octonion>();
        const Octonion z = rng.unit_scalar<Octonion>();
        witness = std::max(witness, abs(omul(omul(x, y), z) - omul(x, omul(y, z))));
    }
    std::ostringstream os;
    os << "norm-mult q=" << worst_norm_q << " o=" << worst_norm_o << ", assoc=" << worst_assoc
       << ", alt=" << worst_alt << ", witness=" << witness;
    detail = os.str();
    return worst_norm_q <= 1e-12 && worst_norm_o <= 1e-12 && worst_assoc <= 1e-12 &&
           worst_alt <= 1e-12 && witness > 0.1;
}

// ---- 2: representation homomorphism -------------------------------------

bool representation(std::string& detail) {
    Rng rng(20240002);
    double worst = 0;
    for (int t = 0; t < 1000; ++t) {
        Matrix<Octonion> A(4, 3);
        for (Octonion& e : A.data) e = rng.normal_scalar<Octonion>(1.0);
        const Vec<Octonion> x = rng.normal_vector<Octonion>(3, 1.0);
        const auto lhs = aleph(matvec(A, x));
        const auto rhs = matvec(gimel(A), aleph(x));
        double err = 0, scale = 0;
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            err += (lhs[i] - rhs[i]) * (lhs[i] - rhs[i]);
            scale += lhs[i] * lhs[i];
        }
        worst = std::max(worst, std::sqrt(err / std::max(scale, 1e-300)));
        double an = 0;
        for (double v : aleph(x)) an += v * v;
        worst = std::max(worst, std::abs(std::sqrt(an) - norm(x)) / norm(x));

        Matrix<Quaternion> B(4, 3);
        for (Quaternion& e : B.data) e = rng.normal_scalar<Quaternion>(1.0);
        const Vec<Quaternion> qx = rng.normal_vector<Quaternion>(3, 1.0);
        const auto ql = aleph(matvec(B, qx));
        const auto qr = matvec(gimel(B), aleph(qx));
        err = 0, scale = 0;
        for (std::size_t i = 0; i < ql.size(); ++i) {
            err += (ql[i] - qr[i]) * (ql[i] - qr[i]);
            scale += ql[i] * ql[i];
        }
        worst = std::max(worst, std::sqrt(err / std::max(scale, 1e-300)));
    }
    std::ostringstream os;
    os << "max relative deviation " << worst;
    detail = os.str();
    return worst <= 1e-12;
}

// ---- 3: transform correctness --------------------------------------------

bool transforms_correct(std::string& detail) {
    Rng rng(20240003);
    double roundtrip = 0, parseval = 0, rows = 0, odft_err = 0, qwt_err = 0;
    for (std::size_t n : {2, 4, 8, 16}) {
        const Qdft2D plan(n);
        Matrix<Quaternion> f(n, n);
        for (Quaternion& e : f.data) e = rng.normal_scalar<Quaternion>(1.0);
        const auto spec = plan.forward(f);
        const auto back = plan.inverse(spec);
        double dist = 0, nf = 0, nspec = 0;
        for (std::size_t i = 0; i < f.data.size(); ++i) {
            dist += norm2(back.data[i] - f.data[i]);
            nf += norm2(f.data[i]);
            nspec += norm2(spec.data[i]);
        }
        roundtrip = std::max(roundtrip, std::sqrt(dist / nf));
        parseval = std::max(parseval, std::abs(std::sqrt(nspec) - std::sqrt(nf)) / std::sqrt(nf));
        if (n == 8)
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t s = 0; s < n; ++s)
                    rows = std::max(rows, abs(plan.row_apply(r, s, f) - spec(r, s)));
    }
    {
        const std::size_t n = 4;
        const Odft3D plan(n);
        std::vector<Octonion> vol(n * n * n);
        for (Octonion& e : vol) e = rng.normal_scalar<Octonion>(1.0);
        const auto spec = plan.forward(vol);
        const auto kernel = [n](int unit, std::size_t t) {
            Octonion k;
            const double th = 2.0 * 3.14159265358979323846 * static_cast<double>(t) / n;
            k.c[0] = std::cos(th);
            k.c[static_cast<std::size_t>(unit)] = -std::sin(th);
            return k;
        };
        for (std::size_t k1 = 0; k1 < n; ++k1)
            for (std::size_t k2 = 0; k2 < n; ++k2)
                for (std::size_t k3 = 0; k3 < n; ++k3) {
                    Octonion acc;
                    for (std::size_t n1 = 0; n1 < n; ++n1)
                        for (std::size_t n2 = 0; n2 < n; ++n2)
                            for (std::size_t n3 = 0; n3 < n; ++n3) {
                                Octonion term = vol[(n1 * n + n2) * n + n3];
                                term = omul(term, kernel(1, (k1 * n1) % n));
                                term = omul(term, kernel(2, (k2 * n2) % n));
                                term = omul(term, kernel(4, (k3 * n3) % n));
                                acc += term;
                            }
                    odft_err = std::max(
                        odft_err, abs(acc * (1.0 / n) - spec[(k1 * n + k2) * n + k3]));
                }
    }
    {
        const std::size_t n = 4;
        Matrix<Quaternion> f(n, n), psi(n, n);
        for (Quaternion& e : f.data) e = rng.normal_scalar<Quaternion>(1.0);
        for (Quaternion& e : psi.data) e = rng.normal_scalar<Quaternion>(1.0);
        QwtBank bank;
        bank.grid = n;
        bank.members = {psi};
        const auto out = qwt(f, bank);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t s = 0; s < n; ++s) {
                Quaternion acc;
                for (std::size_t p = 0; p < n; ++p)
                    for (std::size_t q = 0; q < n; ++q)
                        acc += f(p, q) * psi((r + n - p) % n, (s + n - q) % n);
                qwt_err = std::max(qwt_err, abs(acc - out[0](r, s)));
            }
    }
    std::ostringstream os;
    os << "roundtrip=" << roundtrip << " parseval=" << parseval << " rows=" << rows
       << " odft=" << odft_err << " qwt=" << qwt_err;
    detail = os.str();
    return roundtrip <= 1e-10 && parseval <= 1e-10 && rows <= 1e-12 && odft_err <= 1e-12 &&
           qwt_err <= 1e-12;
}

// ---- 4: gradient checks ---------------------------------------------------

template <class S>
double gradient_fd_worst(const SensingModel<S>& model, const std::vector<double>& y, Loss loss,
                         Rng& rng, int points) {
    SolverConfig cfg;
    cfg.tau_lo = 0.0;
    cfg.tau_hi = std::numeric_limits<double>::infinity();
    double worst = 0;
    for (int t = 0; t < points; ++t) {
        const Vec<S> x = rng.template normal_vector<S>(model.signal_length(), 1.0);
        const auto grad = aleph(wf_gradient(model, y, x, loss, cfg));
        std::vector<double> v = aleph(x);
        double num = 0, den = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double h = 1e-6 * std::max(1.0, std::abs(v[i]));
            const double keep = v[i];
            v[i] = keep + h;
            const double fp = wf_cost(model, y, aleph_inv<S>(v), loss, cfg);
            v[i] = keep - h;
            const double fm = wf_cost(model, y, aleph_inv<S>(v), loss, cfg);
            v[i] = keep;
            const double fd = (fp - fm) / (2.0 * h);
            num += (grad[i] - fd) * (grad[i] - fd);
            den += fd * fd;
        }
        worst = std::max(worst, std::sqrt(num / std::max(den, 1e-300)));
    }
    return worst;
}

bool gradients(std::string& detail) {
    Rng rng(20240004);
    const auto qmodel =
        SensingModel<Quaternion>::gaussian(ModelKind::GaussianQuaternion, 32, 8, 404);
    const auto omodel = SensingModel<Octonion>::gaussian(ModelKind::GaussianOctonion, 32, 4, 405);
    const auto qy = qmodel.measure(rng.normal_vector<Quaternion>(8, 1.0));
    const auto oy = omodel.measure(rng.normal_vector<Octonion>(4, 1.0));
    const double worst_q = gradient_fd_worst(qmodel, qy, Loss::Quadratic, rng, 20);
    const double worst_o = gradient_fd_worst(omodel, oy, Loss::Quadratic, rng, 20);
    std::ostringstream os;
    os << "qwf=" << worst_q << " owf=" << worst_o;
    detail = os.str();
    return worst_q < 1e-6 && worst_o < 1e-6;
}

// ---- 5: qwf recovery + monotone grid --------------------------------------

ExperimentSpec qwf_spec() {
    ExperimentSpec spec;
    spec.solver = SolverId::Qwf;
    spec.model = ModelKind::GaussianQuaternion;
    spec.n = 16;
    spec.trials = 100;
    spec.eps_succ = 1e-5;
    spec.master_seed = 42;
    spec.threads = 1;
    return spec;
}

bool qwf_recovery(std::string& detail) {
    auto spec = qwf_spec();
    spec.m_over_n = {2, 4, 6, 8, 10, 12};
    const auto records = run_sweep(spec);
    double rate_at_10 = -1;
    bool monotone = true;
    std::ostringstream os;
    os << "rates";
    for (std::size_t i = 0; i < records.size(); ++i) {
        os << " " << records[i].success_rate;
        if (records[i].m_over_n == 10.0) rate_at_10 = records[i].success_rate;
        if (i > 0) {
            const double s0 = records[i - 1].success_rate;
            const double s1 = records[i].success_rate;
            const double sigma = std::sqrt((s0 * (1 - s0) + s1 * (1 - s1)) /
                                           static_cast<double>(spec.trials));
            if (s1 < s0 - sigma) monotone = false;
        }
    }
    os << "; rate(m/n=10)=" << rate_at_10;
    detail = os.str();
    return rate_at_10 >= 0.95 && monotone;
}

// ---- 6: owf recovery + snr curve -------------------------------------------

bool owf_recovery(std::string& detail) {
    ExperimentSpec spec;
    spec.solver = SolverId::Owf;
    spec.model = ModelKind::GaussianOctonion;
    spec.n = 8;
    spec.m_over_n = {12.0};
    spec.trials = 100;
    spec.eps_succ = 1e-5;
    spec.master_seed = 42;
    spec.threads = 1;
    const auto noiseless = run_sweep(spec);

    spec.trials = 25;
    spec.snr_db = {0.0, 10.0, 20.0, 30.0};
    spec.config.max_restarts = 1;  // noisy stalls sit at the noise floor
    const auto curve = run_snr_curve(spec);
    bool improving = true;
    std::ostringstream os;
    os << "success=" << noiseless[0].success_rate << "; snr dists";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        os << " " << curve[i].mean_rel_dist;
        if (i > 0 && !(curve[i].mean_rel_dist < curve[i - 1].mean_rel_dist)) improving = false;
    }
    detail = os.str();
    return noiseless[0].success_rate >= 0.90 && improving;
}

// ---- 7: qwf vs concatenated real wf ----------------------------------------

bool qwf_vs_concat(std::string& detail) {
    auto spec = qwf_spec();
    spec.m_over_n = {10.0};
    const auto qwf_rec = run_sweep(spec);
    spec.solver = SolverId::ConcatWf;
    const auto concat_rec = run_sweep(spec);
    std::ostringstream os;
    os << "mean dist qwf=" << qwf_rec[0].mean_rel_dist
       << " concat=" << concat_rec[0].mean_rel_dist;
    detail = os.str();
    return qwf_rec[0].mean_rel_dist <= concat_rec[0].mean_rel_dist;
}

// ---- 8: coded-fourier coding richness ---------------------------------------

bool coding_richness(std::string& detail) {
    const auto mean_psnr = [](std::size_t d) {
        double acc = 0;
        for (int t = 0; t < 20; ++t) {
            ImageTask task;
            task.source = synthetic_gradient(16, 16, 3);
            task.patch = 16;
            task.model = ModelKind::CodedFourierQ;
            task.snapshots = 10;
            task.alphabet_d = d;
            task.solver = SolverId::Qwf;
            task.seed = 900 + static_cast<std::uint64_t>(t);
            task.threads = 1;
            // equal fixed budget for both alphabets so convergence speed,
            // not the float noise floor, is compared
            task.config.max_iters = 400;
            task.config.max_restarts = 0;
            acc += recover_image(task).psnr_db;
        }
        return acc / 20.0;
    };
    const double p4 = mean_psnr(4);
    const double p8 = mean_psnr(8);
    std::ostringstream os;
    os << "mean psnr d4=" << p4 << " d8=" << p8;
    detail = os.str();
    return p8 >= p4;
}

// ---- 9: qtwf outlier robustness ---------------------------------------------

bool qtwf_robustness(std::string& detail) {
    int wins = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        const auto seed = static_cast<std::uint64_t>(t + 1);
        const auto model = SensingModel<Quaternion>::gaussian(ModelKind::GaussianQuaternion, 160,
                                                              16, derive_seed(77, seed, 1));
        Rng rng(derive_seed(77, seed, 2));
        const Vec<Quaternion> x = rng.normal_vector<Quaternion>(16, 1.0);
        auto y = model.measure(x);
        y[0] *= 100.0;
        SolverConfig cfg;
        cfg.seed = derive_seed(77, seed, 3);
        const auto init = spectral_init(model, y, cfg);
        const auto rq = qwf(model, y, cfg, init.x0);
        const auto rt = qtwf(model, y, cfg, init.x0);
        wins += right_phase_distance(rt.estimate, x) < right_phase_distance(rq.estimate, x);
    }
    std::ostringstream os;
    os << "qtwf wins " << wins << "/" << trials;
    detail = os.str();
    return wins >= 80;
}

// ---- 10: byte-identical outputs across thread counts ------------------------

std::string g_hpr_binary;

int run_cli(const std::string& args) {
    const std::string cmd = g_hpr_binary + " " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool reproducibility(std::string& detail) {
    const fs::path dir = fs::temp_directory_path() / "hpr_acceptance_repro";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir / "sim.cfg");
        cfg << "solver = qwf\nexperiment.n = 8\nexperiment.trials = 6\n"
               "experiment.m_over_n = 6,10\n";
    }
    {
        std::ofstream cfg(dir / "rec.cfg");
        cfg << "model = gaussian-q\nsolver = qwf\nrecover.input = synthetic-rgb:8x8\n"
               "recover.patch = 4\nrecover.m_over_n = 12\n";
    }
    const std::string sim = "simulate --config " + (dir / "sim.cfg").string() + " --seed 99 ";
    const std::string rec = "recover --config " + (dir / "rec.cfg").string() + " --seed 99 ";
    if (run_cli(sim + "--out " + (dir / "s1").string() + " --threads 1") != 0) {
        detail = "simulate (threads=1) failed";
        return false;
    }
    if (run_cli(sim + "--out " + (dir / "s8").string() + " --threads 8") != 0) {
        detail = "simulate (threads=8) failed";
        return false;
    }
    if (run_cli(rec + "--out " + (dir / "r1").string() + " --threads 1") != 0) {
        detail = "recover (threads=1) failed";
        return false;
    }
    if (run_cli(rec + "--out " + (dir / "r8").string() + " --threads 8") != 0) {
        detail = "recover (threads=8) failed";
        return false;
    }
    const bool sim_ok =
        slurp(dir / "s1" / "phase_transition.csv") == slurp(dir / "s8" / "phase_transition.csv");
    const bool metrics_ok = slurp(dir / "r1" / "metrics.json") == slurp(dir / "r8" / "metrics.json");
    const fs::path recon1 = fs::exists(dir / "r1" / "recon.png") ? dir / "r1" / "recon.png"
                                                                 : dir / "r1" / "recon.ppm";
    const fs::path recon8 = fs::exists(dir / "r8" / "recon.png") ? dir / "r8" / "recon.png"
                                                                 : dir / "r8" / "recon.ppm";
    const bool recon_ok = slurp(recon1) == slurp(recon8);
    detail = std::string("csv ") + (sim_ok ? "identical" : "DIFFER") + ", metrics " +
             (metrics_ok ? "identical" : "DIFFER") + ", image " +
             (recon_ok ? "identical" : "DIFFER");
    return sim_ok && metrics_ok && recon_ok;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path-to-hpr-binary>\n";
        return 2;
    }
    g_hpr_binary = argv[1];

    const std::vector<Criterion> criteria = {
        {1, "algebra laws", algebra_laws},
        {2, "representation homomorphism", representation},
        {3, "transform correctness", transforms_correct},
        {4, "gradient checks", gradients},
        {5, "qwf recovery and monotone grid", qwf_recovery},
        {6, "owf recovery and snr curve", owf_recovery},
        {7, "qwf vs concatenated real wf", qwf_vs_concat},
        {8, "coded-fourier coding richness", coding_richness},
        {9, "qtwf outlier robustness", qtwf_robustness},
        {10, "byte-identical outputs across threads", reproducibility},
    };

    bool all_ok = true;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.check(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("CRITERION %2d [%s] %s (%s; %.1fs)\n", c.id, ok ? "PASS" : "FAIL",
                    c.label.c_str(), detail.c_str(), secs);
        std::fflush(stdout);
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
