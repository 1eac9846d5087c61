#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "gibbswave/config.hpp"
#include "gibbswave/experiments.hpp"
#include "json.hpp"

using namespace gibbswave;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / "gibbswave_tests" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json manifest(const fs::path& dir) {
  return nlohmann::json::parse(slurp(dir / "manifest.json"));
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("config parses key = value lines with comments") {
  Config cfg = Config::parse_string(
      "# run setup\n"
      "alpha = 2.5\n"
      "p = 5.5   # needs p > 2 alpha\n"
      "n_modes = 32\n"
      "\n"
      "n_list = 8, 16, 24\n"
      "measure = gaussian\n");
  CHECK(cfg.alpha == 2.5);
  CHECK(cfg.p == 5.5);
  CHECK(cfg.n_modes == 32);
  CHECK(cfg.n_list == std::vector<int>{8, 16, 24});
  CHECK(cfg.measure == "gaussian");
  CHECK(cfg.dt == 1e-3);  // untouched defaults stay put
}

TEST_CASE("config rejects unknown keys, duplicates, and malformed values") {
  CHECK_THROWS_AS(Config::parse_string("alhpa = 2\n"), config_error);
  CHECK_THROWS_AS(Config::parse_string("alpha = 2\nalpha = 2.2\n"), config_error);
  CHECK_THROWS_AS(Config::parse_string("alpha = fast\n"), config_error);
  CHECK_THROWS_AS(Config::parse_string("n_modes = 3.5\n"), config_error);
  CHECK_THROWS_AS(Config::parse_string("n_modes\n"), config_error);
  CHECK_THROWS_AS(Config::parse_string("n_list = 4, x\n"), config_error);
}

TEST_CASE("config validation pins the exponent window") {
  Config cfg;
  cfg.alpha = 3.5;
  bool threw = false;
  try {
    cfg.validate();
  } catch (const config_error& e) {
    threw = true;
    CHECK(std::string(e.what()).find("max(4,2alpha) < p < 6") !=
          std::string::npos);
  }
  CHECK(threw);

  Config bad_p;
  bad_p.alpha = 2.2;
  bad_p.p = 4.2;  // must exceed 2 alpha = 4.4
  CHECK_THROWS_AS(bad_p.validate(), config_error);
  bad_p.p = 6.0;
  CHECK_THROWS_AS(bad_p.validate(), config_error);
  bad_p.p = 4.0;
  CHECK_THROWS_AS(bad_p.validate(), config_error);
  bad_p.p = 5.0;
  CHECK_NOTHROW(bad_p.validate());
}

TEST_CASE("config validation covers the remaining ranges") {
  auto reject = [](const std::string& line) {
    Config cfg = Config::parse_string(line);
    CHECK_THROWS_AS(cfg.validate(), config_error);
  };
  reject("s = 0.5\n");
  reject("s = 0\n");
  reject("dt = 0\n");
  reject("n_quad = 100\n");       // must be 0 or >= 2 n_modes (= 128)
  reject("n_ensemble = 1\n");
  reject("n_samples = 99\n");
  reject("t_nodes = 15\n");
  reject("q_max = 7\n");
  reject("q_max = 18\n");
  reject("measure = cauchy\n");
  reject("n_list = 32\nn_ref = 16\n");
  reject("observe_spacetime = 2\n");
  reject("dt_refine = 2\n");
  reject("nonlinear = 2\n");
  reject("workers = -1\n");
  Config ok;
  CHECK_NOTHROW(ok.validate());
  CHECK(ok.sigma() == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("config snapshot covers every key") {
  Config cfg;
  auto snap = cfg.snapshot();
  for (const char* key :
       {"alpha", "p", "s", "n_modes", "n_quad", "dt", "t_final",
        "record_every", "n_ensemble", "n_samples", "n_trials", "t_nodes",
        "min_count", "q_max", "measure", "n_list", "n_ref",
        "partition_n_list", "observe_spacetime", "dt_refine", "nonlinear",
        "workers"}) {
    CAPTURE(key);
    CHECK(snap.count(key) == 1);
  }
  CHECK(snap.size() == 22);
  CHECK(snap["n_list"] == "32,64,128");
}

TEST_CASE("run_command rejects unknown commands") {
  Config cfg;
  CHECK_THROWS_AS(run_command("dance", cfg, 1, fresh_dir("unknown")),
                  config_error);
}

TEST_CASE("sample command writes coefficients, norms, histogram, manifest") {
  Config cfg;
  cfg.n_modes = 8;
  cfg.n_samples = 200;
  fs::path dir = fresh_dir("sample");
  int code = run_command("sample", cfg, 42, dir);
  CHECK(code == kExitOk);
  CHECK(fs::exists(dir / "coefficients.csv"));
  CHECK(fs::exists(dir / "norms.csv"));
  CHECK(fs::exists(dir / "hist_h_norm.csv"));

  std::string norms = slurp(dir / "norms.csv");
  CHECK(count_lines(norms) == 201);  // header + one row per sample
  CHECK(norms.find("\r\n") != std::string::npos);
  std::string coeffs = slurp(dir / "coefficients.csv");
  CHECK(count_lines(coeffs) == 1 + 100 * 8);  // first 100 samples, 8 modes

  nlohmann::json m = manifest(dir);
  CHECK(m["command"] == "sample");
  CHECK(m["seed"] == 42);
  CHECK(m["exit_code"] == 0);
  CHECK(m["config"]["n_modes"] == "8");
  CHECK(m["summary"]["sigma"] == doctest::Approx(0.7));
  double rate = m["summary"]["acceptance_rate"];
  CHECK(rate > 0.9);
  CHECK(rate <= 1.0);
}

TEST_CASE("sample command is deterministic in (config, seed) and workers-independent") {
  Config cfg;
  cfg.n_modes = 8;
  cfg.n_samples = 150;
  fs::path d1 = fresh_dir("det1");
  fs::path d2 = fresh_dir("det2");
  fs::path d3 = fresh_dir("det3");
  run_command("sample", cfg, 7, d1, 1);
  run_command("sample", cfg, 7, d2, 1);
  run_command("sample", cfg, 7, d3, 3);
  for (const char* f : {"coefficients.csv", "norms.csv", "hist_h_norm.csv"}) {
    CAPTURE(f);
    CHECK(slurp(d1 / f) == slurp(d2 / f));
    CHECK(slurp(d1 / f) == slurp(d3 / f));
  }
  fs::path d4 = fresh_dir("det4");
  run_command("sample", cfg, 8, d4, 1);
  CHECK(slurp(d1 / "norms.csv") != slurp(d4 / "norms.csv"));
}

TEST_CASE("evolve command records a time series and conserves energy") {
  Config cfg;
  cfg.n_modes = 8;
  cfg.t_final = 1.0;
  cfg.dt = 1e-3;
  cfg.record_every = 100;
  fs::path dir = fresh_dir("evolve");
  int code = run_command("evolve", cfg, 5, dir);
  CHECK(code == kExitOk);
  std::string series = slurp(dir / "series.csv");
  CHECK(count_lines(series) == 12);  // header + records at 0,100,...,1000
  CHECK(series.rfind("t,", 0) == 0);
  CHECK(fs::exists(dir / "final_state.csv"));

  nlohmann::json m = manifest(dir);
  CHECK(m["summary"]["steps"] == 1000);
  double drift = m["summary"]["hamiltonian_max_drift"];
  CHECK(drift >= 0.0);
  CHECK(drift < 1e-6);
  double h0 = m["summary"]["hamiltonian_initial"];
  double h1 = m["summary"]["hamiltonian_final"];
  CHECK(std::abs(h1 - h0) <= drift + 1e-15);
}

TEST_CASE("evolve command with t_final = 0 emits the single initial record") {
  Config cfg;
  cfg.n_modes = 4;
  cfg.t_final = 0.0;
  fs::path dir = fresh_dir("evolve0");
  CHECK(run_command("evolve", cfg, 5, dir) == kExitOk);
  CHECK(count_lines(slurp(dir / "series.csv")) == 2);
  nlohmann::json m = manifest(dir);
  CHECK(m["summary"]["steps"] == 0);
}

TEST_CASE("evolve command can track the space-time norm observer") {
  Config cfg;
  cfg.n_modes = 4;
  cfg.t_final = 0.1;
  cfg.dt = 1e-2;
  cfg.record_every = 5;
  cfg.observe_spacetime = 1;
  cfg.t_nodes = 16;
  fs::path dir = fresh_dir("evolve_st");
  CHECK(run_command("evolve", cfg, 6, dir) == kExitOk);
  std::string header = slurp(dir / "series.csv");
  CHECK(header.find("spacetime_lp") != std::string::npos);
}

TEST_CASE("invariance command writes KS rows for both step sizes") {
  Config cfg;
  cfg.n_modes = 4;
  cfg.n_ensemble = 500;
  cfg.t_final = 0.5;
  cfg.dt = 1e-2;
  cfg.dt_refine = 1;
  fs::path dir = fresh_dir("invariance");
  CHECK(run_command("invariance", cfg, 9, dir) == kExitOk);
  std::string ks = slurp(dir / "ks.csv");
  CHECK(count_lines(ks) == 9);  // header + 4 observables x 2 step sizes
  nlohmann::json m = manifest(dir);
  REQUIRE(m["summary"]["runs"].size() == 2);
  for (const auto& run : m["summary"]["runs"]) {
    double min_p = run["min_p_value"];
    CHECK(min_p > 0.0025);
    CHECK(min_p <= 1.0);
  }
  // identical bytes under a different worker count
  fs::path dir4 = fresh_dir("invariance4");
  CHECK(run_command("invariance", cfg, 9, dir4, 4) == kExitOk);
  CHECK(slurp(dir / "ks.csv") == slurp(dir4 / "ks.csv"));
  CHECK(slurp(dir / "observables.csv") == slurp(dir4 / "observables.csv"));
}

TEST_CASE("tails command fits both observables on a small gaussian ensemble") {
  Config cfg;
  cfg.n_modes = 8;
  cfg.n_samples = 4000;
  cfg.measure = "gaussian";
  cfg.t_nodes = 16;
  fs::path dir = fresh_dir("tails");
  int code = run_command("tails", cfg, 11, dir);
  CHECK(code == kExitOk);
  std::string fits = slurp(dir / "fits.csv");
  CHECK(count_lines(fits) == 3);  // header + h_norm + spacetime
  CHECK(fs::exists(dir / "bins_h_norm.csv"));
  CHECK(fs::exists(dir / "bins_spacetime.csv"));
  nlohmann::json m = manifest(dir);
  CHECK(bool(m["summary"]["conclusive"]));
  double slope_h = m["summary"]["h_norm_slope"];
  double slope_st = m["summary"]["spacetime_slope"];
  CHECK(slope_h < 0.0);
  CHECK(slope_st < 0.0);
}

TEST_CASE("converge command nests partition estimates and Galerkin errors") {
  Config cfg;
  cfg.n_modes = 8;
  cfg.n_list = {4, 8};
  cfg.n_ref = 16;
  cfg.partition_n_list = {4, 8};
  cfg.n_samples = 300;
  cfg.dt = 1e-2;
  cfg.t_final = 0.2;
  fs::path dir = fresh_dir("converge");
  CHECK(run_command("converge", cfg, 13, dir) == kExitOk);

  std::string part = slurp(dir / "partition.csv");
  CHECK(count_lines(part) == 3);
  std::string gal = slurp(dir / "galerkin.csv");
  CHECK(count_lines(gal) == 4);  // header + n_list rows + reference row
  CHECK(gal.find("16,0\r\n") != std::string::npos);  // reference error is exactly 0

  nlohmann::json m = manifest(dir);
  double gap = m["summary"]["crosscheck_gap"];
  CHECK(gap >= 0.0);
  CHECK(gap < 1e-5);
  double e4 = m["summary"]["galerkin_errors"][0];
  double e8 = m["summary"]["galerkin_errors"][1];
  CHECK(e4 > e8);
  CHECK(bool(m["summary"]["galerkin_monotone"]));
}

TEST_CASE("growth command reports per-trajectory envelope ratios") {
  Config cfg;
  cfg.n_modes = 8;
  cfg.n_ensemble = 3;
  cfg.t_final = 2.0;
  cfg.dt = 1e-2;
  cfg.record_every = 50;
  fs::path dir = fresh_dir("growth");
  CHECK(run_command("growth", cfg, 17, dir) == kExitOk);
  std::string ratios = slurp(dir / "sup_ratio.csv");
  CHECK(count_lines(ratios) == 4);
  nlohmann::json m = manifest(dir);
  double mm = m["summary"]["max_over_median"];
  CHECK(mm >= 1.0);
  CHECK(std::isfinite(mm));
  std::string growth = slurp(dir / "growth.csv");
  CHECK(growth.rfind("stream_id,", 0) == 0);
}

TEST_CASE("manifest records provenance fields") {
  Config cfg;
  cfg.n_modes = 4;
  cfg.n_samples = 100;
  fs::path dir = fresh_dir("manifest");
  run_command("sample", cfg, 3, dir, 2);
  nlohmann::json m = manifest(dir);
  CHECK(m.count("version") == 1);
  CHECK(m.count("started_utc") == 1);
  CHECK(m.count("finished_utc") == 1);
  CHECK(m["workers"] == 2);
  CHECK(m["outputs"].size() >= 3);
  std::string started = m["started_utc"];
  CHECK(started.size() == 20);  // 2026-01-01T00:00:00Z
  CHECK(started.back() == 'Z');
}
