#pragma once

#include <functional>
#include <optional>
#include <string>

#include "hpr/image.hpp"
#include "hpr/solvers.hpp"

namespace hpr {

enum class SolverId { Qwf, Qtwf, Owf, ConcatWf };

std::string to_string(SolverId id);
std::optional<SolverId> parse_solver(const std::string& name);
std::optional<ModelKind> parse_model(const std::string& name);

/// Runs fn(0..count-1) on up to `threads` workers.  Results must be written
/// to per-index slots; the caller reduces in index order, so scheduling
/// never affects the output.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

/// Monte-Carlo sweep description.  The m/n grid maps onto each model's
/// structural parameter: measurement count for Gaussian models, snapshot
/// count L for coded Fourier, section count R for STFT and bank size for
/// wavelets.
struct ExperimentSpec {
    SolverId solver = SolverId::Qwf;
    ModelKind model = ModelKind::GaussianQuaternion;
    std::size_t n = 16;      // signal length; coded Fourier uses side^2
    std::size_t side = 4;    // coded Fourier patch side
    std::size_t alphabet_d = 4;
    std::size_t stft_window = 0;  // 0 -> n/2
    std::vector<double> m_over_n = {10.0};
    std::vector<double> snr_db = {std::numeric_limits<double>::infinity()};
    std::size_t trials = 100;
    double eps_succ = 1e-5;
    double outlier_factor = 1.0;  // multiplies y[0]; robustness experiments
    std::uint64_t master_seed = 1;
    SolverConfig config;
    int threads = 1;
};

struct ExperimentRecord {
    double m_over_n = 0.0;
    double snr_db = std::numeric_limits<double>::infinity();
    std::size_t trials = 0;
    double success_rate = 0.0;
    double mean_rel_dist = 0.0;
    double median_rel_dist = 0.0;
    double mean_iters = 0.0;
    double mean_seconds = 0.0;  // measured; excluded from determinism contracts
    std::uint64_t cell_seed = 0;
    bool skipped = false;
    std::string note;
};

/// One record per grid cell (m/n x SNR), aggregated in trial order from
/// deterministically derived per-trial seeds.
std::vector<ExperimentRecord> run_sweep(const ExperimentSpec& spec);

/// Same engine with the SNR axis swept; provided as its own entry point for
/// robustness curves.
std::vector<ExperimentRecord> run_snr_curve(const ExperimentSpec& spec);

/// Channel-concatenation comparison arm: real WF on the aleph lift with the
/// same sample budget.
RealRecovery baseline_concat_wf(const RealMatrix& rows, const std::vector<double>& y,
                                const SolverConfig& config);
RealMatrix concat_gaussian_rows(std::size_t m, std::size_t n_real, std::uint64_t seed);

// ---- image pipelines ----------------------------------------------------

enum class ChannelMap { RgbQuaternion, MsiOctonion };

struct ImageTask {
    Image source;
    std::size_t patch = 32;
    ChannelMap mapping = ChannelMap::RgbQuaternion;
    ModelKind model = ModelKind::GaussianQuaternion;
    double m_over_n = 15.0;
    std::size_t snapshots = 10;   // coded Fourier L
    std::size_t alphabet_d = 4;
    SolverId solver = SolverId::Qwf;
    SolverConfig config;
    bool oracle = false;  // bypass the solver and return the truth
    std::uint64_t seed = 1;
    int threads = 1;
};

struct ImageRecovery {
    Image reconstruction;
    double psnr_db = 0.0;  // +inf when exact
    bool exact = false;
    std::vector<double> per_patch_rel_dist;
    double seconds = 0.0;
};

/// Per-patch sensing + recovery + right-phase alignment against the ground
/// truth patch, stitched back and scored with PSNR over all channels.
ImageRecovery recover_image(const ImageTask& task);

}  // namespace hpr
