#ifndef SPINOSC_EXPERIMENT_HPP
#define SPINOSC_EXPERIMENT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spinosc/readout.hpp"

// Experiment orchestration: flat key = value configs with strict unknown-key
// rejection, the end-to-end run pipeline (series CSV, frequency report,
// oracle-comparison report) and the one-shot verification harness.

namespace spinosc {

enum class ExperimentMode { series, hamiltonian_check };

struct GridSpec {
  double start_s = 0.0;
  double step_s = 0.03125;
  int count = 64;

  std::vector<double> points() const;
};

struct ReadPulseSpec {
  int spin = 2;  // 1-based in configs
  PulseAxis axis = PulseAxis::plus_y;
  double angle = kPi / 2.0;
};

struct ExperimentConfig {
  std::string label = "experiment";
  ExperimentMode mode = ExperimentMode::series;
  SequenceKind sequence = SequenceKind::qho;

  int n_spins = 2;
  std::vector<double> offset_hz;  // (w_i - w_0) / 2pi per spin
  double j_hz = 5.7;
  std::optional<double> t1_s;
  std::optional<double> t2_s;

  double omega_rad_s = kTwoPi;  // oscillator frequency
  double mu = 0.0;

  std::optional<int> drive_level;
  std::optional<double> rabi_factor;  // rabi / omega

  std::string encoding = "gray";  // gray | binary

  std::vector<double> amp_re;  // initial amplitudes over levels
  std::vector<double> amp_im;

  std::optional<ReadPulseSpec> read_pulse;

  GridSpec grid;
  bool relaxation = false;

  std::string output_prefix;  // defaults to label

  SpinSystemParams spin_params() const;
  SeriesSpec series_spec() const;
};

// Parses the flat key = value text form. Unknown sections or keys are
// rejected, not ignored; invariant violations carry field-level messages.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Parses "pi", "pi/2", "-5pi/6", "3pi/4" or a plain decimal (radians).
double parse_angle(const std::string& text);

struct RunResult {
  bool ok = false;
  std::vector<std::string> files;  // paths written
  std::string summary;             // human-readable one-per-line outcomes
};

// Runs one experiment and writes its outputs under out_dir (created when
// missing). File writes are whole-file atomic replacements; identical
// configs produce byte-identical outputs.
RunResult run_experiment(const ExperimentConfig& config,
                         const std::string& out_dir);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured value vs tolerance
};

// Runs the full verification suite and returns one result per criterion.
// config_dir must hold the shipped canonical configs (used by the
// determinism check).
std::vector<CriterionResult> verify_all(const std::string& config_dir);

}  // namespace spinosc

#endif
