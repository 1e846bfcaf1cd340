#include "hpr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace hpr {

std::string to_string(SolverId id) {
    switch (id) {
        case SolverId::Qwf: return "qwf";
        case SolverId::Qtwf: return "qtwf";
        case SolverId::Owf: return "owf";
        case SolverId::ConcatWf: return "concat-wf";
    }
    return "unknown";
}

std::optional<SolverId> parse_solver(const std::string& name) {
    if (name == "qwf") return SolverId::Qwf;
    if (name == "qtwf") return SolverId::Qtwf;
    if (name == "owf") return SolverId::Owf;
    if (name == "concat-wf") return SolverId::ConcatWf;
    return std::nullopt;
}

std::optional<ModelKind> parse_model(const std::string& name) {
    if (name == "gaussian-q") return ModelKind::GaussianQuaternion;
    if (name == "gaussian-o") return ModelKind::GaussianOctonion;
    if (name == "gaussian-r") return ModelKind::GaussianReal;
    if (name == "coded-fourier") return ModelKind::CodedFourierQ;
    if (name == "stft") return ModelKind::StftQ;
    if (name == "wavelet") return ModelKind::WaveletQ;
    return std::nullopt;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    for (std::thread& t : pool) t.join();
}

namespace {

struct TrialOutcome {
    double rel_dist = std::numeric_limits<double>::quiet_NaN();
    double iters = 0.0;
    double seconds = 0.0;
};

constexpr std::uint64_t kModelStream = 1;
constexpr std::uint64_t kTruthStream = 2;
constexpr std::uint64_t kNoiseStream = 3;
constexpr std::uint64_t kInitStream = 4;

template <class S>
TrialOutcome hyper_trial(const ExperimentSpec& spec, double m_over_n, double snr_db,
                         std::uint64_t cell, std::uint64_t trial) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t model_seed = derive_seed(spec.master_seed, cell, trial, kModelStream);
    const std::uint64_t truth_seed = derive_seed(spec.master_seed, cell, trial, kTruthStream);

    SensingModel<S> model = [&] {
        switch (spec.model) {
            case ModelKind::GaussianReal:
            case ModelKind::GaussianQuaternion:
            case ModelKind::GaussianOctonion: {
                const auto m = static_cast<std::size_t>(
                    std::llround(m_over_n * static_cast<double>(spec.n)));
                return SensingModel<S>::gaussian(spec.model, m, spec.n, model_seed);
            }
            case ModelKind::CodedFourierQ: {
                if constexpr (std::is_same_v<S, Quaternion>) {
                    const auto snapshots =
                        static_cast<std::size_t>(std::max(1.0, std::round(m_over_n)));
                    return SensingModel<S>::coded_fourier(
                        spec.side, snapshots, DoeAlphabet::standard(spec.alphabet_d), model_seed);
                }
                break;
            }
            case ModelKind::StftQ: {
                if constexpr (std::is_same_v<S, Quaternion>) {
                    const std::size_t window =
                        spec.stft_window > 0 ? spec.stft_window : std::max<std::size_t>(1, spec.n / 2);
                    const auto sections =
                        static_cast<std::size_t>(std::max(1.0, std::round(m_over_n)));
                    const std::size_t hop =
                        std::max<std::size_t>(1, (spec.n + window - 1 + sections - 1) / sections);
                    Rng wrng(derive_seed(model_seed, 0x517f7));
                    return SensingModel<S>::stft(
                        make_qstft_plan(wrng.template normal_vector<Quaternion>(window, 0.5), hop,
                                        spec.n));
                }
                break;
            }
            case ModelKind::WaveletQ: {
                if constexpr (std::is_same_v<S, Quaternion>) {
                    const auto bank =
                        static_cast<std::size_t>(std::max(1.0, std::round(m_over_n)));
                    return SensingModel<S>::wavelet(default_qwt_bank(spec.side, bank));
                }
                break;
            }
        }
        throw std::invalid_argument("model kind incompatible with solver algebra");
    }();

    Rng trng(truth_seed);
    const Vec<S> x = trng.template normal_vector<S>(model.signal_length(), 1.0);
    std::vector<double> y = model.measure(x);
    if (spec.outlier_factor != 1.0 && !y.empty()) y[0] *= spec.outlier_factor;
    if (std::isfinite(snr_db))
        y = add_noise(y, snr_db, derive_seed(spec.master_seed, cell, trial, kNoiseStream));

    SolverConfig config = spec.config;
    config.seed = derive_seed(spec.master_seed, cell, trial, kInitStream);
    const auto init = spectral_init(model, y, config);

    RecoveryResult<S> rec;
    if constexpr (std::is_same_v<S, Quaternion>) {
        rec = (spec.solver == SolverId::Qtwf) ? qtwf(model, y, config, init.x0)
                                              : qwf(model, y, config, init.x0);
    } else {
        rec = owf(model, y, config, init.x0);
    }

    TrialOutcome out;
    const double nx = norm(x);
    out.rel_dist = right_phase_distance(rec.estimate, x) / (nx > 0.0 ? nx : 1.0);
    out.iters = static_cast<double>(rec.iterations_used);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

TrialOutcome concat_trial(const ExperimentSpec& spec, double m_over_n, double snr_db,
                          std::uint64_t cell, std::uint64_t trial) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n_real = spec.n * 4;
    const auto m =
        static_cast<std::size_t>(std::llround(m_over_n * static_cast<double>(spec.n)));
    const RealMatrix rows =
        concat_gaussian_rows(m, n_real, derive_seed(spec.master_seed, cell, trial, kModelStream));

    Rng trng(derive_seed(spec.master_seed, cell, trial, kTruthStream));
    const std::vector<double> v = trng.normal_reals(n_real);
    std::vector<double> u = matvec(rows, v);
    std::vector<double> y(m);
    for (std::size_t l = 0; l < m; ++l) y[l] = u[l] * u[l];
    if (spec.outlier_factor != 1.0 && !y.empty()) y[0] *= spec.outlier_factor;
    if (std::isfinite(snr_db))
        y = add_noise(y, snr_db, derive_seed(spec.master_seed, cell, trial, kNoiseStream));

    SolverConfig config = spec.config;
    config.seed = derive_seed(spec.master_seed, cell, trial, kInitStream);
    const RealRecovery rec = baseline_concat_wf(rows, y, config);

    TrialOutcome out;
    double nv = 0.0;
    for (double e : v) nv += e * e;
    nv = std::sqrt(nv);
    out.rel_dist = sign_distance(rec.estimate, v) / (nv > 0.0 ? nv : 1.0);
    out.iters = static_cast<double>(rec.iterations_used);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

ExperimentRecord reduce_cell(const ExperimentSpec& spec, double m_over_n, double snr_db,
                             std::uint64_t cell, const std::vector<TrialOutcome>& outcomes) {
    ExperimentRecord rec;
    rec.m_over_n = m_over_n;
    rec.snr_db = snr_db;
    rec.trials = outcomes.size();
    rec.cell_seed = derive_seed(spec.master_seed, cell, 0, 0);
    std::size_t successes = 0;
    std::vector<double> dists;
    dists.reserve(outcomes.size());
    for (const TrialOutcome& o : outcomes) {
        if (o.rel_dist < spec.eps_succ) ++successes;
        dists.push_back(o.rel_dist);
        rec.mean_rel_dist += o.rel_dist;
        rec.mean_iters += o.iters;
        rec.mean_seconds += o.seconds;
    }
    const auto count = static_cast<double>(outcomes.size());
    rec.success_rate = static_cast<double>(successes) / count;
    rec.mean_rel_dist /= count;
    rec.mean_iters /= count;
    rec.mean_seconds /= count;
    std::sort(dists.begin(), dists.end());
    rec.median_rel_dist = dists.empty() ? 0.0
                          : (dists.size() % 2 == 1
                                 ? dists[dists.size() / 2]
                                 : 0.5 * (dists[dists.size() / 2 - 1] + dists[dists.size() / 2]));
    return rec;
}

}  // namespace

std::vector<ExperimentRecord> run_sweep(const ExperimentSpec& spec) {
    if (spec.trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (spec.m_over_n.empty() || spec.snr_db.empty())
        throw std::invalid_argument("sweep grids must be nonempty");
    if (!(spec.eps_succ > 0.0)) throw std::invalid_argument("eps_succ must be positive");

    std::vector<ExperimentRecord> records;
    std::uint64_t cell = 0;
    for (double m_over_n : spec.m_over_n) {
        for (double snr_db : spec.snr_db) {
            ++cell;
            const double m_est = m_over_n * static_cast<double>(spec.n);
            if (!(m_est >= 1.0)) {
                ExperimentRecord rec;
                rec.m_over_n = m_over_n;
                rec.snr_db = snr_db;
                rec.skipped = true;
                rec.note = "infeasible cell: m < 1";
                rec.mean_rel_dist = std::numeric_limits<double>::quiet_NaN();
                rec.median_rel_dist = std::numeric_limits<double>::quiet_NaN();
                records.push_back(std::move(rec));
                continue;
            }
            std::vector<TrialOutcome> outcomes(spec.trials);
            parallel_for(spec.trials, spec.threads, [&](std::size_t t) {
                switch (spec.solver) {
                    case SolverId::ConcatWf:
                        outcomes[t] = concat_trial(spec, m_over_n, snr_db, cell, t + 1);
                        break;
                    case SolverId::Owf:
                        outcomes[t] = hyper_trial<Octonion>(spec, m_over_n, snr_db, cell, t + 1);
                        break;
                    default:
                        outcomes[t] = hyper_trial<Quaternion>(spec, m_over_n, snr_db, cell, t + 1);
                        break;
                }
            });
            records.push_back(reduce_cell(spec, m_over_n, snr_db, cell, outcomes));
        }
    }
    return records;
}

std::vector<ExperimentRecord> run_snr_curve(const ExperimentSpec& spec) { return run_sweep(spec); }

RealRecovery baseline_concat_wf(const RealMatrix& rows, const std::vector<double>& y,
                                const SolverConfig& config) {
    return real_wf(rows, y, config);
}

RealMatrix concat_gaussian_rows(std::size_t m, std::size_t n_real, std::uint64_t seed) {
    RealMatrix rows(m, n_real);
    Rng rng(derive_seed(seed, 0xc0c47));
    for (double& v : rows.data) v = rng.normal();
    return rows;
}

namespace {

template <class S>
void patch_to_signal(const Image& img, std::size_t row0, std::size_t col0, std::size_t patch,
                     Vec<S>& out) {
    out.assign(patch * patch, S{});
    for (std::size_t r = 0; r < patch; ++r)
        for (std::size_t c = 0; c < patch; ++c) {
            S& e = out[r * patch + c];
            const std::size_t rr = row0 + r;
            const std::size_t cc = col0 + c;
            const bool inside = rr < img.height && cc < img.width;
            if (!inside) continue;  // zero padding
            if constexpr (std::is_same_v<S, Quaternion>) {
                e = Quaternion(0.0, img.at(0, rr, cc), img.at(1, rr, cc), img.at(2, rr, cc));
            } else {
                for (std::size_t ch = 0; ch < 8; ++ch) e.set_coeff(static_cast<int>(ch),
                                                                   img.at(ch, rr, cc));
            }
        }
}

template <class S>
void signal_to_patch(const Vec<S>& sig, Image& img, std::size_t row0, std::size_t col0,
                     std::size_t patch) {
    for (std::size_t r = 0; r < patch; ++r)
        for (std::size_t c = 0; c < patch; ++c) {
            const std::size_t rr = row0 + r;
            const std::size_t cc = col0 + c;
            if (rr >= img.height || cc >= img.width) continue;
            const S& e = sig[r * patch + c];
            if constexpr (std::is_same_v<S, Quaternion>) {
                img.at(0, rr, cc) = e.coeff(1);
                img.at(1, rr, cc) = e.coeff(2);
                img.at(2, rr, cc) = e.coeff(3);
            } else {
                for (std::size_t ch = 0; ch < 8; ++ch) img.at(ch, rr, cc) = e.coeff(static_cast<int>(ch));
            }
        }
}

template <class S>
void recover_patches(const ImageTask& task, Image& recon, std::vector<double>& per_patch) {
    const std::size_t patch = task.patch;
    const std::size_t n = patch * patch;
    const std::size_t tiles_r = (task.source.height + patch - 1) / patch;
    const std::size_t tiles_c = (task.source.width + patch - 1) / patch;
    per_patch.assign(tiles_r * tiles_c, 0.0);
    std::vector<Vec<S>> aligned(tiles_r * tiles_c);

    parallel_for(tiles_r * tiles_c, task.threads, [&](std::size_t tile) {
        const std::size_t tr = tile / tiles_c;
        const std::size_t tc = tile % tiles_c;
        Vec<S> truth;
        patch_to_signal<S>(task.source, tr * patch, tc * patch, patch, truth);

        if (task.oracle) {
            aligned[tile] = truth;
            per_patch[tile] = 0.0;
            return;
        }

        const std::uint64_t model_seed = derive_seed(task.seed, tile, 0, kModelStream);
        SensingModel<S> model = [&] {
            if (task.model == ModelKind::CodedFourierQ) {
                if constexpr (std::is_same_v<S, Quaternion>) {
                    return SensingModel<S>::coded_fourier(
                        patch, task.snapshots, DoeAlphabet::standard(task.alphabet_d), model_seed);
                }
            }
            const auto m = static_cast<std::size_t>(
                std::llround(task.m_over_n * static_cast<double>(n)));
            return SensingModel<S>::gaussian(task.model, m, n, model_seed);
        }();

        const std::vector<double> y = model.measure(truth);
        SolverConfig config = task.config;
        config.seed = derive_seed(task.seed, tile, 0, kInitStream);
        if constexpr (std::is_same_v<S, Quaternion>) config.project_pure = true;
        const auto init = spectral_init(model, y, config);
        RecoveryResult<S> rec;
        if constexpr (std::is_same_v<S, Quaternion>) {
            rec = (task.solver == SolverId::Qtwf) ? qtwf(model, y, config, init.x0)
                                                  : qwf(model, y, config, init.x0);
        } else {
            rec = owf(model, y, config, init.x0);
        }

        // undo the trivial right phase against the known patch before stitching
        const S w = right_phase_factor(rec.estimate, truth);
        const Vec<S> est = right_scaled(rec.estimate, conj(w));
        const double nt = norm(truth);
        per_patch[tile] = norm(est - truth) / (nt > 0.0 ? nt : 1.0);
        aligned[tile] = est;
    });

    for (std::size_t tile = 0; tile < aligned.size(); ++tile) {
        const std::size_t tr = tile / tiles_c;
        const std::size_t tc = tile % tiles_c;
        signal_to_patch<S>(aligned[tile], recon, tr * patch, tc * patch, patch);
    }
}

}  // namespace

ImageRecovery recover_image(const ImageTask& task) {
    const auto t0 = std::chrono::steady_clock::now();
    if (task.mapping == ChannelMap::RgbQuaternion && task.source.channels != 3)
        throw std::invalid_argument("RGB mapping expects a 3-channel image");
    if (task.mapping == ChannelMap::MsiOctonion && task.source.channels != 8)
        throw std::invalid_argument("octonion mapping expects an 8-band image");
    if (task.patch < 2) throw std::invalid_argument("patch size must be >= 2");

    ImageRecovery out;
    out.reconstruction = Image(task.source.width, task.source.height, task.source.channels);
    if (task.mapping == ChannelMap::RgbQuaternion)
        recover_patches<Quaternion>(task, out.reconstruction, out.per_patch_rel_dist);
    else
        recover_patches<Octonion>(task, out.reconstruction, out.per_patch_rel_dist);

    out.psnr_db = psnr(task.source, out.reconstruction);
    out.exact = std::isinf(out.psnr_db);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace hpr
