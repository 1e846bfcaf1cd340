#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "hpr/harness.hpp"
#include "hpr/image.hpp"
#include "hpr/selftest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSelftestFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPartial = 3;

struct Options {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;  // 0 -> hardware concurrency
    std::string solver;
    std::string model;
    bool timing = false;

    std::map<std::string, std::string> file;  // raw config keys

    std::string value(const std::string& key, const std::string& fallback) const {
        const auto it = file.find(key);
        return it == file.end() ? fallback : it->second;
    }
    double number(const std::string& key, double fallback) const {
        const auto it = file.find(key);
        return it == file.end() ? fallback : std::stod(it->second);
    }
    std::uint64_t integer(const std::string& key, std::uint64_t fallback) const {
        const auto it = file.find(key);
        return it == file.end() ? fallback : std::stoull(it->second);
    }
    bool flag(const std::string& key, bool fallback) const {
        const auto it = file.find(key);
        if (it == file.end()) return fallback;
        return it->second == "1" || it->second == "true" || it->second == "yes";
    }
};

const std::vector<std::string> kKnownKeys = {
    "solver",
    "model",
    "seed",
    "threads",
    "experiment.n",
    "experiment.side",
    "experiment.trials",
    "experiment.eps_succ",
    "experiment.m_over_n",
    "experiment.snr_db",
    "experiment.outlier_factor",
    "model.alphabet_d",
    "model.stft_window",
    "solver.step_size",
    "solver.max_iters",
    "solver.stop_tol",
    "solver.power_iters",
    "solver.tau_lo",
    "solver.tau_hi",
    "solver.step_growth",
    "solver.max_restarts",
    "solver.scaling",
    "solver.project_pure",
    "recover.input",
    "recover.patch",
    "recover.m_over_n",
    "recover.snapshots",
    "recover.alphabet_d",
    "recover.oracle",
    "selftest.inject_octonion_sign_defect",
};

void load_config_file(Options& opt) {
    if (opt.config_path.empty()) return;
    std::ifstream in(opt.config_path);
    if (!in) throw std::runtime_error("cannot read config file " + opt.config_path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) + " is not key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end())
            throw std::runtime_error("unknown config key '" + key + "'");
        opt.file[key] = value;
    }
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        if (tok == "inf" || tok == "+inf")
            out.push_back(std::numeric_limits<double>::infinity());
        else
            out.push_back(std::stod(tok));
    }
    if (out.empty()) throw std::runtime_error("empty grid: " + text);
    return out;
}

std::uint64_t resolve_seed(const Options& opt) {
    if (opt.seed_set) return opt.seed;
    if (opt.file.count("seed")) return std::stoull(opt.file.at("seed"));
    if (const char* env = std::getenv("HPR_SEED")) return std::stoull(env);
    return 1;
}

int resolve_threads(const Options& opt) {
    if (opt.threads > 0) return opt.threads;
    if (opt.file.count("threads")) return static_cast<int>(std::stoi(opt.file.at("threads")));
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

hpr::SolverConfig solver_config(const Options& opt) {
    hpr::SolverConfig cfg;
    cfg.step_size = opt.number("solver.step_size", 0.0);
    cfg.max_iters = static_cast<std::size_t>(opt.integer("solver.max_iters", cfg.max_iters));
    cfg.stop_tol = opt.number("solver.stop_tol", cfg.stop_tol);
    cfg.power_iters = static_cast<std::size_t>(opt.integer("solver.power_iters", cfg.power_iters));
    cfg.tau_lo = opt.number("solver.tau_lo", cfg.tau_lo);
    cfg.tau_hi = opt.number("solver.tau_hi", cfg.tau_hi);
    cfg.step_growth = opt.number("solver.step_growth", cfg.step_growth);
    cfg.max_restarts = static_cast<std::size_t>(opt.integer("solver.max_restarts", cfg.max_restarts));
    cfg.project_pure = opt.flag("solver.project_pure", false);
    const std::string scaling = opt.value("solver.scaling", "mean");
    if (scaling == "rms")
        cfg.scaling = hpr::ScalingRule::RootMeanSquareY;
    else if (scaling != "mean")
        throw std::runtime_error("solver.scaling must be 'mean' or 'rms'");
    return cfg;
}

void write_manifest(const Options& opt, const std::string& subcommand, std::uint64_t seed,
                    int threads, const std::map<std::string, std::string>& resolved) {
    std::ofstream out(fs::path(opt.out_dir) / "manifest.txt");
    out << "subcommand=" << subcommand << "\n";
    out << "seed=" << seed << "\n";
    out << "threads=" << threads << "\n";
    for (const auto& [k, v] : resolved) out << k << "=" << v << "\n";
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string algebra_name(hpr::SolverId solver, hpr::ModelKind model) {
    if (solver == hpr::SolverId::ConcatWf) return "real";
    if (solver == hpr::SolverId::Owf || model == hpr::ModelKind::GaussianOctonion)
        return "octonion";
    return "quaternion";
}

int run_simulate(Options& opt, bool snr_mode) {
    const std::uint64_t seed = resolve_seed(opt);
    const int threads = resolve_threads(opt);

    hpr::ExperimentSpec spec;
    const std::string solver_name = !opt.solver.empty() ? opt.solver : opt.value("solver", "qwf");
    const auto solver = hpr::parse_solver(solver_name);
    if (!solver) {
        std::cerr << "unknown solver '" << solver_name << "'\n";
        return kExitUsage;
    }
    spec.solver = *solver;
    const std::string model_name = !opt.model.empty()
                                       ? opt.model
                                       : opt.value("model", spec.solver == hpr::SolverId::Owf
                                                                ? "gaussian-o"
                                                                : "gaussian-q");
    const auto model = hpr::parse_model(model_name);
    if (!model) {
        std::cerr << "unknown model '" << model_name << "'\n";
        return kExitUsage;
    }
    spec.model = *model;
    if (spec.solver == hpr::SolverId::Owf && spec.model != hpr::ModelKind::GaussianOctonion) {
        std::cerr << "owf requires an octonion model\n";
        return kExitUsage;
    }
    if (spec.solver != hpr::SolverId::Owf && spec.model == hpr::ModelKind::GaussianOctonion) {
        std::cerr << "octonion model requires the owf solver\n";
        return kExitUsage;
    }

    spec.n = static_cast<std::size_t>(opt.integer("experiment.n", 16));
    spec.side = static_cast<std::size_t>(opt.integer("experiment.side", 4));
    if (spec.model == hpr::ModelKind::CodedFourierQ || spec.model == hpr::ModelKind::WaveletQ)
        spec.n = spec.side * spec.side;
    spec.trials = static_cast<std::size_t>(opt.integer("experiment.trials", 100));
    spec.eps_succ = opt.number("experiment.eps_succ", 1e-5);
    spec.outlier_factor = opt.number("experiment.outlier_factor", 1.0);
    spec.alphabet_d = static_cast<std::size_t>(opt.integer("model.alphabet_d", 4));
    spec.stft_window = static_cast<std::size_t>(opt.integer("model.stft_window", 0));
    spec.m_over_n = parse_grid(opt.value("experiment.m_over_n", snr_mode ? "12" : "10"));
    spec.snr_db = parse_grid(opt.value("experiment.snr_db", snr_mode ? "0,10,20,30" : "inf"));
    spec.master_seed = seed;
    spec.threads = threads;
    spec.config = solver_config(opt);

    fs::create_directories(opt.out_dir);
    std::vector<hpr::ExperimentRecord> records;
    try {
        records = hpr::run_sweep(spec);
    } catch (const std::exception& e) {
        std::cerr << "simulation failed: " << e.what() << "\n";
        return kExitUsage;
    }

    std::ofstream csv(fs::path(opt.out_dir) / "phase_transition.csv");
    csv << "solver,algebra,n,m_over_n,snr_db,trials,success_rate,mean_rel_dist,mean_iters,"
           "mean_seconds,seed\n";
    bool partial = false;
    for (const hpr::ExperimentRecord& rec : records) {
        partial = partial || rec.skipped;
        csv << hpr::to_string(spec.solver) << ',' << algebra_name(spec.solver, spec.model) << ','
            << spec.n << ',' << format_double(rec.m_over_n) << ',' << format_double(rec.snr_db)
            << ',' << rec.trials << ',' << format_double(rec.success_rate) << ','
            << format_double(rec.mean_rel_dist) << ',' << format_double(rec.mean_iters) << ','
            << format_double(opt.timing ? rec.mean_seconds : 0.0) << ',' << rec.cell_seed << "\n";
        if (rec.skipped) std::cerr << "warning: skipped cell m/n=" << rec.m_over_n << ": " << rec.note << "\n";
    }
    csv.close();

    std::map<std::string, std::string> resolved = opt.file;
    resolved["solver"] = hpr::to_string(spec.solver);
    resolved["model"] = hpr::to_string(spec.model);
    resolved["experiment.n"] = std::to_string(spec.n);
    resolved["experiment.trials"] = std::to_string(spec.trials);
    write_manifest(opt, snr_mode ? "snr" : "simulate", seed, threads, resolved);
    return partial ? kExitPartial : kExitOk;
}

hpr::Image load_recover_input(const std::string& input, hpr::ChannelMap mapping) {
    if (input.rfind("synthetic-rgb:", 0) == 0 || input.rfind("synthetic-msi:", 0) == 0) {
        const bool msi = input.rfind("synthetic-msi:", 0) == 0;
        const std::string dims = input.substr(input.find(':') + 1);
        const auto x = dims.find('x');
        if (x == std::string::npos) throw std::runtime_error("synthetic input must be WxH");
        const auto w = static_cast<std::size_t>(std::stoul(dims.substr(0, x)));
        const auto h = static_cast<std::size_t>(std::stoul(dims.substr(x + 1)));
        return hpr::synthetic_gradient(w, h, msi ? 8 : 3);
    }
    if (mapping == hpr::ChannelMap::MsiOctonion) return hpr::read_msi(input);
    return hpr::read_image(input);
}

int run_recover(Options& opt) {
    const std::uint64_t seed = resolve_seed(opt);
    const int threads = resolve_threads(opt);

    const std::string model_name =
        !opt.model.empty() ? opt.model : opt.value("model", "gaussian-q");
    const auto model = hpr::parse_model(model_name);
    if (!model) {
        std::cerr << "unknown model '" << model_name << "'\n";
        return kExitUsage;
    }
    const std::string solver_name = !opt.solver.empty()
                                        ? opt.solver
                                        : opt.value("solver", *model == hpr::ModelKind::GaussianOctonion
                                                                  ? "owf"
                                                                  : "qwf");
    const auto solver = hpr::parse_solver(solver_name);
    if (!solver) {
        std::cerr << "unknown solver '" << solver_name << "'\n";
        return kExitUsage;
    }

    hpr::ImageTask task;
    task.model = *model;
    task.solver = *solver;
    task.mapping = (*model == hpr::ModelKind::GaussianOctonion) ? hpr::ChannelMap::MsiOctonion
                                                                : hpr::ChannelMap::RgbQuaternion;
    task.patch = static_cast<std::size_t>(opt.integer("recover.patch", 32));
    task.m_over_n = opt.number("recover.m_over_n", 15.0);
    task.snapshots = static_cast<std::size_t>(opt.integer("recover.snapshots", 10));
    task.alphabet_d = static_cast<std::size_t>(opt.integer("recover.alphabet_d", 4));
    task.oracle = opt.flag("recover.oracle", false);
    task.seed = seed;
    task.threads = threads;
    task.config = solver_config(opt);

    const std::string input = opt.value("recover.input", "");
    if (input.empty()) {
        std::cerr << "recover.input is required\n";
        return kExitUsage;
    }

    fs::create_directories(opt.out_dir);
    hpr::ImageRecovery result;
    try {
        task.source = load_recover_input(input, task.mapping);
        result = hpr::recover_image(task);
    } catch (const std::exception& e) {
        std::cerr << "recover failed: " << e.what() << "\n";
        return kExitUsage;
    }

    if (task.mapping == hpr::ChannelMap::MsiOctonion) {
        hpr::write_msi_raw(result.reconstruction, (fs::path(opt.out_dir) / "recon.hprmsi").string());
    } else {
#ifdef HPR_HAVE_PNG
        hpr::write_image(result.reconstruction, (fs::path(opt.out_dir) / "recon.png").string());
#else
        hpr::write_image(result.reconstruction, (fs::path(opt.out_dir) / "recon.ppm").string());
#endif
    }

    json metrics;
    metrics["psnr_db"] = result.exact ? json(nullptr) : json(result.psnr_db);
    metrics["exact"] = result.exact;
    metrics["per_patch_rel_dist"] = result.per_patch_rel_dist;
    metrics["seconds"] = opt.timing ? result.seconds : 0.0;
    metrics["seed"] = seed;
    std::ofstream mj(fs::path(opt.out_dir) / "metrics.json");
    mj << metrics.dump(2) << "\n";

    std::map<std::string, std::string> resolved = opt.file;
    resolved["solver"] = hpr::to_string(task.solver);
    resolved["model"] = hpr::to_string(task.model);
    resolved["recover.input"] = input;
    write_manifest(opt, "recover", seed, threads, resolved);
    return kExitOk;
}

int run_selftest_cmd(Options& opt, bool inject_flag) {
    hpr::SelftestOptions sopt;
    sopt.seed = resolve_seed(opt);
    sopt.inject_octonion_sign_defect =
        inject_flag || opt.flag("selftest.inject_octonion_sign_defect", false);
    const auto results = hpr::run_selftest(sopt);
    bool all_pass = true;
    for (const auto& r : results) {
        std::cout << (r.passed ? "PASS" : "FAIL") << " " << r.group << ": " << r.detail << "\n";
        all_pass = all_pass && r.passed;
    }
    return all_pass ? kExitOk : kExitSelftestFailure;
}

int run_gradcheck(Options& opt) {
    hpr::SelftestOptions sopt;
    sopt.seed = resolve_seed(opt);
    const auto results = hpr::run_selftest(sopt);
    for (const auto& r : results) {
        if (r.group != "gradient-checks") continue;
        std::cout << (r.passed ? "PASS" : "FAIL") << " " << r.group << ": " << r.detail << "\n";
        return r.passed ? kExitOk : kExitSelftestFailure;
    }
    return kExitSelftestFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypercomplex phase retrieval toolkit"};
    app.require_subcommand(1);
    app.fallthrough(true);

    Options opt;
    app.add_option("--config", opt.config_path, "flat key=value config file");
    app.add_option("--seed", opt.seed, "master seed (fallback: HPR_SEED env, then 1)")
        ->each([&](const std::string&) { opt.seed_set = true; });
    app.add_option("--out", opt.out_dir, "output directory");
    app.add_option("--threads", opt.threads, "worker count; 1 gives a fully serial run");
    app.add_option("--solver", opt.solver)->check(CLI::IsMember({"qwf", "qtwf", "owf", "concat-wf"}));
    app.add_option("--model", opt.model)
        ->check(CLI::IsMember(
            {"gaussian-q", "gaussian-o", "gaussian-r", "coded-fourier", "stft", "wavelet"}));
    app.add_flag("--timing", opt.timing,
                 "emit measured wall-clock times (off by default to keep outputs byte-reproducible)");

    CLI::App* simulate = app.add_subcommand("simulate", "phase-transition sweeps over m/n");
    CLI::App* snr = app.add_subcommand("snr", "robustness curves over SNR");
    CLI::App* recover = app.add_subcommand("recover", "image recovery with PSNR scoring");
    CLI::App* selftest = app.add_subcommand("selftest", "run the invariant property suites");
    CLI::App* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient validation");
    bool inject = false;
    selftest->add_flag("--inject-octonion-sign-defect", inject,
                       "mutation hook: flip one sign in the multiplication template");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        load_config_file(opt);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) return run_simulate(opt, false);
        if (snr->parsed()) return run_simulate(opt, true);
        if (recover->parsed()) return run_recover(opt);
        if (selftest->parsed()) return run_selftest_cmd(opt, inject);
        if (gradcheck->parsed()) return run_gradcheck(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
