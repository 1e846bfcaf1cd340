#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "hpr/sensing.hpp"

namespace hpr {

/// Scaling factor of the spectral initializer: sqrt(mean y) follows the
/// expectation argument E[y_l] = ||x||^2 and is the default; RootMeanSquareY
/// is the printed variant (mean of y^2 under the square root).
enum class ScalingRule { MeanY, RootMeanSquareY };

struct SolverConfig {
    double step_size = 0.0;       // <= 0 selects 0.25 / ||x0||^2
    std::size_t max_iters = 20000;  // total, shared across restart rounds
    double stop_tol = 1e-12;      // relative cost-decrease threshold
    std::size_t power_iters = 100;
    double power_tol = 1e-10;     // Rayleigh-quotient convergence
    double tau_lo = 0.1;          // QTWF trimming band, relative to sqrt(mean y)
    double tau_hi = 5.0;
    double cost_floor_rel = 1e-16;  // absolute stop at mean(y^2) * this
    std::size_t max_backoffs = 20;
    double step_growth = 1.5;     // regrow after a clean accept, capped at
    double step_growth_cap = 100.0;  // this multiple of the base step
    // quadratic-loss runs that stall at a cost plateau above
    // mean(y^2) * restart_bar_rel re-seed from a fresh direction; the best
    // iterate across rounds is returned
    std::size_t max_restarts = 4;
    double restart_bar_rel = 1e-6;
    ScalingRule scaling = ScalingRule::MeanY;
    bool project_pure = false;    // re-project iterates onto pure quaternions
    std::uint64_t seed = 0;       // start vector of the power method
};

template <class S>
struct RecoveryResult {
    Vec<S> estimate;
    std::vector<double> cost_trace;
    double final_distance = -1.0;  // filled by callers that know the truth
    std::size_t iterations_used = 0;
    double wall_seconds = 0.0;
    bool degenerate_init = false;
};

template <class S>
struct SpectralEstimate {
    Vec<S> x0;
    bool degenerate = false;  // all-zero measurements
};

/// Leading-eigenvector initializer of Y = (1/m) sum y_l a_l a_l^*, run as a
/// power method on the real lift and mapped back through aleph^{-1}; scaled
/// by the configured rule.
template <class S>
SpectralEstimate<S> spectral_init(const SensingModel<S>& model, const std::vector<double>& y,
                                  const SolverConfig& config);

/// Deflation-free power method for symmetric matrices; stops when
/// successive Rayleigh-quotient magnitudes differ by less than tol
/// (relative), or after `iters` rounds.
std::vector<double> power_iteration(const RealMatrix& matrix, std::size_t iters, double tol,
                                    std::uint64_t seed);

enum class Loss { Quadratic, Poisson };

/// Cost/gradient of the intensity objectives, exposed for the gradient
/// oracles and the gradcheck command.  Quadratic: (1/2m) sum (|u_l|^2-y_l)^2.
/// Poisson: -(1/m) sum [y_l log |u_l|^2 - |u_l|^2], with per-term trimming to
/// the band tau_lo..tau_hi * sqrt(mean y) and a floored log argument.
template <class S>
double wf_cost(const SensingModel<S>& model, const std::vector<double>& y, const Vec<S>& x,
               Loss loss, const SolverConfig& config);

template <class S>
Vec<S> wf_gradient(const SensingModel<S>& model, const std::vector<double>& y, const Vec<S>& x,
                   Loss loss, const SolverConfig& config);

/// Wirtinger-flow style descent of the quadratic intensity cost with a
/// quaternion-valued model.
RecoveryResult<Quaternion> qwf(const SensingModel<Quaternion>& model, const std::vector<double>& y,
                               const SolverConfig& config, Vec<Quaternion> x0);

/// Truncated variant on the Poisson objective.
RecoveryResult<Quaternion> qtwf(const SensingModel<Quaternion>& model, const std::vector<double>& y,
                                const SolverConfig& config, Vec<Quaternion> x0);

/// Octonion recovery: the same descent run through the 8n-dimensional real
/// representation (the algebra operations coincide with the lifted ones).
RecoveryResult<Octonion> owf(const SensingModel<Octonion>& model, const std::vector<double>& y,
                             const SolverConfig& config, Vec<Octonion> x0);

/// d(xt, x) = min over unit w of ||xt - x w||, evaluated in closed form with
/// w = sign(x^* xt); falls back to seeded sampling when x^* xt vanishes and
/// to ||xt|| when x = 0.
template <class S>
double right_phase_distance(const Vec<S>& xt, const Vec<S>& x);

inline double quat_distance(const Vec<Quaternion>& xt, const Vec<Quaternion>& x) {
    return right_phase_distance(xt, x);
}
inline double oct_distance(const Vec<Octonion>& xt, const Vec<Octonion>& x) {
    return right_phase_distance(xt, x);
}

/// The minimizing unit factor itself (sign(x^* xt)); identity when the
/// correlation vanishes.
template <class S>
S right_phase_factor(const Vec<S>& xt, const Vec<S>& x);

// ---- real-valued Wirtinger flow (comparison arm) -----------------------

struct RealRecovery {
    std::vector<double> estimate;
    std::vector<double> cost_trace;
    std::size_t iterations_used = 0;
    double final_distance = -1.0;
};

/// Plain real WF on y = (A v)^2 with spectral initialization (or a caller
/// supplied start); used by the channel-concatenation baseline.
RealRecovery real_wf(const RealMatrix& rows, const std::vector<double>& y,
                     const SolverConfig& config,
                     const std::vector<double>* start = nullptr);

/// min(||v - x||, ||v + x||) / sign quotient distance of real PR.
double sign_distance(const std::vector<double>& v, const std::vector<double>& x);

}  // namespace hpr
