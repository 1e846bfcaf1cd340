#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hpr/image.hpp"

namespace fs = std::filesystem;

namespace {

std::string hpr_bin() {
    const char* env = std::getenv("HPR_BIN");
    REQUIRE(env != nullptr);
    return env;
}

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& args) {
    const std::string cmd = hpr_bin() + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    std::array<char, 512> buf;
    while (fgets(buf.data(), buf.size(), pipe)) res.output += buf.data();
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "hpr_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_config(const fs::path& path, const std::string& body) {
    std::ofstream out(path);
    out << body;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

const std::string kCsvHeader =
    "solver,algebra,n,m_over_n,snr_db,trials,success_rate,mean_rel_dist,mean_iters,"
    "mean_seconds,seed";

}  // namespace

TEST_CASE("simulate writes a schema-conforming csv") {
    const fs::path dir = fresh_dir("simulate_minimal");
    const fs::path cfg = dir / "run.cfg";
    write_config(cfg, "solver = qwf\nexperiment.n = 8\nexperiment.trials = 3\n"
                      "experiment.m_over_n = 10\n");
    const auto res = run("simulate --config " + cfg.string() + " --seed 7 --out " +
                         (dir / "out").string() + " --threads 1");
    CHECK(res.exit_code == 0);

    const auto rows = parse_csv(slurp(dir / "out" / "phase_transition.csv"));
    REQUIRE(rows.size() == 2);
    std::string header;
    for (std::size_t i = 0; i < rows[0].size(); ++i)
        header += (i ? "," : "") + rows[0][i];
    CHECK(header == kCsvHeader);
    REQUIRE(rows[1].size() == 11);
    CHECK(rows[1][0] == "qwf");
    CHECK(rows[1][1] == "quaternion");
    CHECK(rows[1][2] == "8");
    const double rate = std::stod(rows[1][6]);
    CHECK(rate >= 0.0);
    CHECK(rate <= 1.0);
    CHECK(std::stod(rows[1][9]) == 0.0);  // timing column is zero without --timing
    CHECK(fs::exists(dir / "out" / "manifest.txt"));
}

TEST_CASE("identical invocations produce byte-identical outputs") {
    const fs::path dir = fresh_dir("simulate_repro");
    const fs::path cfg = dir / "run.cfg";
    write_config(cfg, "solver = qwf\nexperiment.n = 8\nexperiment.trials = 4\n"
                      "experiment.m_over_n = 6,10\n");
    const std::string base = "simulate --config " + cfg.string() + " --seed 11 ";
    CHECK(run(base + "--out " + (dir / "a").string() + " --threads 1").exit_code == 0);
    CHECK(run(base + "--out " + (dir / "b").string() + " --threads 1").exit_code == 0);
    CHECK(run(base + "--out " + (dir / "c").string() + " --threads 8").exit_code == 0);
    const std::string a = slurp(dir / "a" / "phase_transition.csv");
    CHECK(a == slurp(dir / "b" / "phase_transition.csv"));
    CHECK(a == slurp(dir / "c" / "phase_transition.csv"));
    // manifests echo the resolved config (including threads), so only
    // identical invocations are byte-equal
    CHECK(slurp(dir / "a" / "manifest.txt") == slurp(dir / "b" / "manifest.txt"));
}

TEST_CASE("snr subcommand emits one row per snr cell") {
    const fs::path dir = fresh_dir("snr");
    const fs::path cfg = dir / "run.cfg";
    write_config(cfg, "solver = qwf\nexperiment.n = 8\nexperiment.trials = 2\n"
                      "experiment.m_over_n = 10\nexperiment.snr_db = 10,inf\n"
                      "solver.max_iters = 2000\n");
    const auto res = run("snr --config " + cfg.string() + " --seed 3 --out " +
                         (dir / "out").string() + " --threads 1");
    CHECK(res.exit_code == 0);
    const auto rows = parse_csv(slurp(dir / "out" / "phase_transition.csv"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][4] == "10");
    CHECK(rows[2][4] == "inf");
}

TEST_CASE("usage and config errors exit with code 2") {
    CHECK(run("simulate --solver nope").exit_code == 2);
    CHECK(run("").exit_code == 2);
    const fs::path dir = fresh_dir("bad_config");
    const fs::path cfg = dir / "bad.cfg";
    write_config(cfg, "unknown.key = 1\n");
    CHECK(run("simulate --config " + cfg.string()).exit_code == 2);
    write_config(cfg, "solver qwf\n");
    CHECK(run("simulate --config " + cfg.string()).exit_code == 2);
    CHECK(run("recover --out /tmp/hpr_cli_tests/nowhere").exit_code == 2);
    // solver/model algebra mismatch
    CHECK(run("simulate --solver owf --model gaussian-q").exit_code == 2);
}

TEST_CASE("partial sweeps exit with code 3 and keep the csv") {
    const fs::path dir = fresh_dir("partial");
    const fs::path cfg = dir / "run.cfg";
    write_config(cfg, "solver = qwf\nexperiment.n = 8\nexperiment.trials = 2\n"
                      "experiment.m_over_n = 0.01,10\n");
    const auto res = run("simulate --config " + cfg.string() + " --seed 5 --out " +
                         (dir / "out").string() + " --threads 1");
    CHECK(res.exit_code == 3);
    const auto rows = parse_csv(slurp(dir / "out" / "phase_transition.csv"));
    CHECK(rows.size() == 3);
}

TEST_CASE("selftest exit codes and the mutation hook") {
    CHECK(run("selftest").exit_code == 0);
    const auto bad = run("selftest --inject-octonion-sign-defect");
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("FAIL algebra-laws") != std::string::npos);
    CHECK(bad.output.find("norm multiplicativity") != std::string::npos);
    CHECK(run("gradcheck").exit_code == 0);
}

TEST_CASE("selftest report is reproducible for a fixed seed") {
    const auto a = run("selftest --seed 9");
    const auto b = run("selftest --seed 9");
    CHECK(a.output == b.output);
}

TEST_CASE("recover on a synthetic rgb image") {
    const fs::path dir = fresh_dir("recover_rgb");
    const fs::path cfg = dir / "run.cfg";
    write_config(cfg, "model = gaussian-q\nsolver = qwf\n"
                      "recover.input = synthetic-rgb:12x12\nrecover.patch = 6\n"
                      "recover.m_over_n = 15\n");
    const auto res = run("recover --config " + cfg.string() + " --seed 2 --out " +
                         (dir / "out").string() + " --threads 1");
    CHECK(res.exit_code == 0);
    const auto metrics = nlohmann::json::parse(slurp(dir / "out" / "metrics.json"));
    CHECK(metrics["psnr_db"].is_number());
    CHECK(metrics["psnr_db"].get<double>() > 30.0);
    CHECK(metrics["exact"].get<bool>() == false);
    CHECK(metrics["per_patch_rel_dist"].is_array());
    CHECK(metrics["seconds"].get<double>() == 0.0);
    CHECK(metrics["seed"].get<std::uint64_t>() == 2);
    const bool recon_exists =
        fs::exists(dir / "out" / "recon.png") || fs::exists(dir / "out" / "recon.ppm");
    CHECK(recon_exists);
}

TEST_CASE("recover with the oracle flag reports an exact null psnr") {
    const fs::path dir = fresh_dir("recover_oracle");
    const fs::path cfg = dir / "run.cfg";
    write_config(cfg, "model = gaussian-q\nrecover.input = synthetic-rgb:8x8\n"
                      "recover.patch = 4\nrecover.oracle = true\n");
    const auto res = run("recover --config " + cfg.string() + " --seed 2 --out " +
                         (dir / "out").string());
    CHECK(res.exit_code == 0);
    const auto metrics = nlohmann::json::parse(slurp(dir / "out" / "metrics.json"));
    CHECK(metrics["psnr_db"].is_null());
    CHECK(metrics["exact"].get<bool>() == true);
}

TEST_CASE("recover accepts the msi raw format") {
    const fs::path dir = fresh_dir("recover_msi");
    const hpr::Image msi = hpr::synthetic_gradient(16, 16, 8);
    hpr::write_msi_raw(msi, (dir / "input.hprmsi").string());
    {
        // header sanity on the file just written
        std::ifstream in(dir / "input.hprmsi");
        std::string line;
        std::getline(in, line);
        CHECK(line == "HPRMSI v1 16 16 8");
    }
    const fs::path cfg = dir / "run.cfg";
    write_config(cfg, "model = gaussian-o\nsolver = owf\nrecover.input = " +
                          (dir / "input.hprmsi").string() +
                          "\nrecover.patch = 4\nrecover.m_over_n = 14\n"
                          "recover.oracle = true\n");
    const auto res = run("recover --config " + cfg.string() + " --seed 4 --out " +
                         (dir / "out").string());
    CHECK(res.exit_code == 0);
    CHECK(fs::exists(dir / "out" / "recon.hprmsi"));
    const hpr::Image recon = hpr::read_msi((dir / "out" / "recon.hprmsi").string());
    CHECK(recon.width == 16);
    CHECK(recon.channels == 8);
}

TEST_CASE("recover rejects unreadable input with exit 2") {
    const fs::path dir = fresh_dir("recover_bad");
    const fs::path cfg = dir / "run.cfg";
    write_config(cfg, "model = gaussian-q\nrecover.input = /does/not/exist.ppm\n");
    CHECK(run("recover --config " + cfg.string() + " --out " + (dir / "out").string()).exit_code ==
          2);
    // ill-formed msi header
    std::ofstream bad(dir / "bad.hprmsi");
    bad << "HPRMSI v9 4 4 8\n";
    bad.close();
    write_config(cfg, "model = gaussian-o\nsolver = owf\nrecover.input = " +
                          (dir / "bad.hprmsi").string() + "\n");
    CHECK(run("recover --config " + cfg.string() + " --out " + (dir / "out").string()).exit_code ==
          2);
}

TEST_CASE("seed resolution falls back to the environment") {
    const fs::path dir = fresh_dir("seed_env");
    const fs::path cfg = dir / "run.cfg";
    write_config(cfg, "solver = qwf\nexperiment.n = 8\nexperiment.trials = 1\n"
                      "experiment.m_over_n = 10\n");
    const std::string cmd = "HPR_SEED=12345 " + hpr_bin() + " simulate --config " + cfg.string() +
                            " --out " + (dir / "out").string() + " --threads 1 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 256> buf;
    while (fgets(buf.data(), buf.size(), pipe)) {
    }
    CHECK(WEXITSTATUS(pclose(pipe)) == 0);
    const std::string manifest = slurp(dir / "out" / "manifest.txt");
    CHECK(manifest.find("seed=12345") != std::string::npos);
}

TEST_CASE("ppm round trip through the image io layer") {
    const fs::path dir = fresh_dir("ppm_roundtrip");
    const hpr::Image img = hpr::synthetic_gradient(11, 5, 3);
    hpr::write_image(img, (dir / "img.ppm").string());
    const hpr::Image back = hpr::read_image((dir / "img.ppm").string());
    REQUIRE(back.width == img.width);
    REQUIRE(back.height == img.height);
    // 8-bit quantization bounds the round-trip error
    for (std::size_t i = 0; i < img.pix.size(); ++i)
        CHECK(std::abs(back.pix[i] - img.pix[i]) <= 0.5 / 255.0 + 1e-12);
#ifdef HPR_HAVE_PNG
    hpr::write_image(img, (dir / "img.png").string());
    const hpr::Image png = hpr::read_image((dir / "img.png").string());
    for (std::size_t i = 0; i < img.pix.size(); ++i)
        CHECK(std::abs(png.pix[i] - img.pix[i]) <= 0.5 / 255.0 + 1e-12);
#endif
}
