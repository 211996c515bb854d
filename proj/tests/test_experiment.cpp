#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "spinosc/experiment.hpp"

#ifndef SPINOSC_CONFIG_DIR
#define SPINOSC_CONFIG_DIR "configs"
#endif

using namespace spinosc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("an empty config yields the canonical defaults") {
  ExperimentConfig cfg = parse_config("");
  CHECK(cfg.n_spins == 2);
  CHECK(cfg.j_hz == doctest::Approx(5.7));
  CHECK(cfg.offset_hz[0] == doctest::Approx(226.0));
  CHECK(cfg.offset_hz[1] == doctest::Approx(0.0));
  CHECK(cfg.encoding == "gray");
  CHECK_FALSE(cfg.relaxation);
  CHECK(cfg.mode == ExperimentMode::series);
  CHECK(cfg.sequence == SequenceKind::qho);
  CHECK(cfg.amp_re[0] == 1.0);
}

TEST_CASE("unknown keys and sections are rejected, not ignored") {
  CHECK_THROWS_WITH_AS(parse_config("[system]\nfrequency = 3\n"),
                       doctest::Contains("unknown key"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("[bogus]\nx = 1\n"),
                       doctest::Contains("unknown section"),
                       std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[system]\nspins = 2\nspins = 2\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config("orphan = 1\n"), std::invalid_argument);
}

TEST_CASE("a vanishing coupling is rejected at parse time for series runs") {
  CHECK_THROWS_WITH_AS(parse_config("[system]\nj_hz = 0\n"),
                       doctest::Contains("unsolvable"), std::invalid_argument);
}

TEST_CASE("relaxation requires both time constants") {
  CHECK_THROWS_AS(parse_config("[relaxation]\nenabled = true\n"),
                  std::invalid_argument);
}

TEST_CASE("angles parse in sequence notation or radians") {
  CHECK(parse_angle("pi") == doctest::Approx(kPi));
  CHECK(parse_angle("pi/2") == doctest::Approx(kPi / 2));
  CHECK(parse_angle("-5pi/6") == doctest::Approx(-5.0 * kPi / 6.0));
  CHECK(parse_angle("3pi/4") == doctest::Approx(3.0 * kPi / 4.0));
  CHECK(parse_angle("0.5") == doctest::Approx(0.5));
  CHECK_THROWS_AS(parse_angle("pi*2"), std::invalid_argument);
}

TEST_CASE("the shipped fig1b config describes the 0 + i 2 experiment") {
  ExperimentConfig cfg =
      parse_config_file(std::string(SPINOSC_CONFIG_DIR) + "/fig1b.cfg");
  CHECK(cfg.label == "fig1b");
  CHECK(cfg.sequence == SequenceKind::qho);
  CHECK(cfg.amp_re == std::vector<double>{1, 0, 0, 0});
  CHECK(cfg.amp_im == std::vector<double>{0, 0, 1, 0});
  REQUIRE(cfg.read_pulse.has_value());
  CHECK(cfg.read_pulse->spin == 2);
  CHECK(cfg.read_pulse->angle == doctest::Approx(kPi / 2));
  CHECK(cfg.grid.count == 64);
  CHECK(cfg.grid.step_s == doctest::Approx(0.03125));
}

TEST_CASE("running fig1a writes its three outputs and passes its checks") {
  ExperimentConfig cfg =
      parse_config_file(std::string(SPINOSC_CONFIG_DIR) + "/fig1a.cfg");
  fs::path dir = fs::temp_directory_path() / "spinosc-test-run";
  fs::remove_all(dir);
  RunResult result = run_experiment(cfg, dir.string());
  CHECK(result.ok);
  REQUIRE(result.files.size() == 3);
  for (const auto& f : result.files) CHECK(fs::exists(f));
  std::string oracle = slurp(dir.string() + "/fig1a_oracle.txt");
  CHECK(oracle.find("status: ok") != std::string::npos);
  std::string freq = slurp(dir.string() + "/fig1a_freq.txt");
  CHECK(freq.find("spin1_a.dc_fraction") != std::string::npos);
  std::string csv = slurp(dir.string() + "/fig1a_series.csv");
  CHECK(csv.rfind("T,t_phys,spin1_a_re", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("the binary closed-form check configs pass") {
  for (const char* name : {"binary_n2", "binary_n3", "binary_n4"}) {
    ExperimentConfig cfg = parse_config_file(std::string(SPINOSC_CONFIG_DIR) +
                                             "/" + name + ".cfg");
    CHECK(cfg.mode == ExperimentMode::hamiltonian_check);
    fs::path dir = fs::temp_directory_path() / "spinosc-test-check";
    fs::remove_all(dir);
    RunResult result = run_experiment(cfg, dir.string());
    CHECK(result.ok);
    std::string report = slurp(result.files.at(0));
    CHECK(report.find("status: ok") != std::string::npos);
    fs::remove_all(dir);
  }
}

TEST_CASE("missing config files surface a readable error") {
  CHECK_THROWS_AS(parse_config_file("/nonexistent/nowhere.cfg"),
                  std::runtime_error);
}

TEST_CASE("grid points are uniform from start to count") {
  GridSpec grid{0.5, 0.25, 4};
  auto pts = grid.points();
  REQUIRE(pts.size() == 4);
  CHECK(pts[0] == 0.5);
  CHECK(pts[3] == doctest::Approx(1.25));
}

TEST_CASE("the shipped fig2_relax config enables damping with T2 = 1 s") {
  ExperimentConfig cfg =
      parse_config_file(std::string(SPINOSC_CONFIG_DIR) + "/fig2_relax.cfg");
  CHECK(cfg.sequence == SequenceKind::aho);
  CHECK(cfg.relaxation);
  REQUIRE(cfg.t2_s.has_value());
  CHECK(*cfg.t2_s == doctest::Approx(1.0));
  CHECK(cfg.mu == doctest::Approx(-2.0 / 9.0));
  REQUIRE(cfg.rabi_factor.has_value());
  CHECK(*cfg.rabi_factor == doctest::Approx(-2.0 / 9.0));
  CHECK(cfg.grid.count == 288);
}
