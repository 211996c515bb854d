#include "spinosc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace spinosc {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw std::invalid_argument("config: empty element in list for " + key);
    std::size_t used = 0;
    double v = std::stod(item, &used);
    if (used != item.size())
      throw std::invalid_argument("config: bad number '" + item + "' for " + key);
    out.push_back(v);
  }
  if (out.empty())
    throw std::invalid_argument("config: empty list for " + key);
  return out;
}

double parse_double(const std::string& text, const std::string& key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number '" + text + "' for " + key);
  }
  if (used != text.size())
    throw std::invalid_argument("config: bad number '" + text + "' for " + key);
  return v;
}

int parse_int(const std::string& text, const std::string& key) {
  double v = parse_double(text, key);
  int i = int(std::lround(v));
  if (std::abs(v - i) > 1e-12)
    throw std::invalid_argument("config: expected integer for " + key);
  return i;
}

bool parse_bool(const std::string& text, const std::string& key) {
  if (text == "true" || text == "on" || text == "1") return true;
  if (text == "false" || text == "off" || text == "0") return false;
  throw std::invalid_argument("config: expected boolean for " + key);
}

void atomic_write(const std::string& path, const std::string& content) {
  fs::path target(path);
  fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, target);
}

std::string format_double(double v, const char* fmt = "%.12e") {
  char buf[48];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

std::vector<double> GridSpec::points() const {
  std::vector<double> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) out.push_back(start_s + step_s * k);
  return out;
}

double parse_angle(const std::string& raw) {
  std::string text = trim(raw);
  auto pos = text.find("pi");
  if (pos == std::string::npos) return parse_double(text, "angle");
  std::string num = trim(text.substr(0, pos));
  std::string den = trim(text.substr(pos + 2));
  double numerator = 1.0;
  if (num == "-")
    numerator = -1.0;
  else if (!num.empty())
    numerator = parse_double(num, "angle");
  double denominator = 1.0;
  if (!den.empty()) {
    if (den[0] != '/')
      throw std::invalid_argument("config: bad angle '" + raw + "'");
    denominator = parse_double(trim(den.substr(1)), "angle");
    if (denominator == 0.0)
      throw std::invalid_argument("config: zero denominator in angle");
  }
  return numerator * kPi / denominator;
}

SpinSystemParams ExperimentConfig::spin_params() const {
  SpinSystemParams p;
  p.n_spins = n_spins;
  p.receiver_frequency = 0.0;
  p.resonance_frequencies.resize(n_spins);
  for (int i = 0; i < n_spins; ++i)
    p.resonance_frequencies[i] = kTwoPi * offset_hz.at(i);
  p.j_couplings = Eigen::MatrixXd::Zero(n_spins, n_spins);
  if (n_spins >= 2) {
    p.j_couplings(0, 1) = j_hz;
    p.j_couplings(1, 0) = j_hz;
  }
  p.t1_seconds = t1_s;
  p.t2_seconds = t2_s;
  p.validate();
  return p;
}

SeriesSpec ExperimentConfig::series_spec() const {
  SeriesSpec spec;
  spec.params = spin_params();
  spec.oscillator.levels = 1 << n_spins;
  spec.oscillator.omega = omega_rad_s;
  spec.oscillator.mu = mu;
  if (drive_level) {
    DriveSpec drive;
    drive.level_m = *drive_level;
    drive.rabi_frequency = rabi_factor.value_or(0.0) * omega_rad_s;
    spec.drive = drive;
  }
  spec.encoding =
      encoding == "gray" ? gray_encoding(n_spins) : binary_encoding(n_spins);
  ComplexVector amps(Eigen::Index(1) << n_spins);
  for (Eigen::Index k = 0; k < amps.size(); ++k)
    amps[k] = Complex(amp_re.at(k), amp_im.at(k));
  spec.initial_levels = amps;
  if (read_pulse) {
    PulseEvent ev;
    ev.flip_angle = read_pulse->angle;
    ev.axis = read_pulse->axis;
    ev.targets = {read_pulse->spin - 1};
    spec.read_pulse = ev;
  }
  spec.t_grid = grid.points();
  spec.sequence = sequence;
  spec.relaxation = relaxation;
  return spec;
}

ExperimentConfig parse_config(const std::string& text) {
  static const std::map<std::string, std::set<std::string>> kSchema = {
      {"experiment", {"label", "mode", "sequence"}},
      {"system", {"spins", "offset_hz", "j_hz", "t1_s", "t2_s"}},
      {"oscillator", {"omega_rad_s", "mu"}},
      {"drive", {"level", "rabi_factor"}},
      {"encoding", {"code"}},
      {"state", {"amp_re", "amp_im"}},
      {"read", {"spin", "axis", "angle"}},
      {"grid", {"start_s", "step_s", "count"}},
      {"relaxation", {"enabled"}},
      {"output", {"prefix"}},
  };

  ExperimentConfig cfg;
  std::map<std::string, std::map<std::string, std::string>> values;

  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config line " + std::to_string(line_no) +
                                    ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!kSchema.count(section))
        throw std::invalid_argument("config: unknown section [" + section + "]");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw std::invalid_argument("config: key '" + key + "' outside a section");
    if (!kSchema.at(section).count(key))
      throw std::invalid_argument("config: unknown key '" + key +
                                  "' in section [" + section + "]");
    if (values[section].count(key))
      throw std::invalid_argument("config: duplicate key '" + key + "'");
    values[section][key] = value;
  }

  auto get = [&](const std::string& sec,
                 const std::string& key) -> std::optional<std::string> {
    auto s = values.find(sec);
    if (s == values.end()) return std::nullopt;
    auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second;
  };

  if (auto v = get("experiment", "label")) cfg.label = *v;
  if (auto v = get("experiment", "mode")) {
    if (*v == "series")
      cfg.mode = ExperimentMode::series;
    else if (*v == "hamiltonian-check")
      cfg.mode = ExperimentMode::hamiltonian_check;
    else
      throw std::invalid_argument("config: unknown mode '" + *v + "'");
  }
  if (auto v = get("experiment", "sequence")) {
    if (*v == "qho")
      cfg.sequence = SequenceKind::qho;
    else if (*v == "aho")
      cfg.sequence = SequenceKind::aho;
    else
      throw std::invalid_argument("config: unknown sequence '" + *v + "'");
  }

  if (auto v = get("system", "spins")) cfg.n_spins = parse_int(*v, "spins");
  if (cfg.n_spins < 1 || cfg.n_spins > 6)
    throw std::invalid_argument("config: spins must be in 1..6");
  if (auto v = get("system", "offset_hz"))
    cfg.offset_hz = parse_list(*v, "offset_hz");
  else if (cfg.n_spins == 2)
    cfg.offset_hz = {226.0, 0.0};
  else
    cfg.offset_hz.assign(cfg.n_spins, 0.0);
  if (int(cfg.offset_hz.size()) != cfg.n_spins)
    throw std::invalid_argument("config: offset_hz needs one value per spin");
  if (auto v = get("system", "j_hz")) cfg.j_hz = parse_double(*v, "j_hz");
  if (auto v = get("system", "t1_s")) cfg.t1_s = parse_double(*v, "t1_s");
  if (auto v = get("system", "t2_s")) cfg.t2_s = parse_double(*v, "t2_s");

  if (auto v = get("oscillator", "omega_rad_s"))
    cfg.omega_rad_s = parse_double(*v, "omega_rad_s");
  if (auto v = get("oscillator", "mu")) cfg.mu = parse_double(*v, "mu");

  if (values.count("drive")) {
    cfg.drive_level = 0;
    if (auto v = get("drive", "level")) cfg.drive_level = parse_int(*v, "level");
    if (auto v = get("drive", "rabi_factor"))
      cfg.rabi_factor = parse_double(*v, "rabi_factor");
    else
      throw std::invalid_argument("config: [drive] needs rabi_factor");
  }

  if (auto v = get("encoding", "code")) {
    if (*v != "gray" && *v != "binary")
      throw std::invalid_argument("config: unknown encoding '" + *v + "'");
    cfg.encoding = *v;
  }

  const int levels = 1 << cfg.n_spins;
  if (auto v = get("state", "amp_re"))
    cfg.amp_re = parse_list(*v, "amp_re");
  else {
    cfg.amp_re.assign(levels, 0.0);
    cfg.amp_re[0] = 1.0;
  }
  if (auto v = get("state", "amp_im"))
    cfg.amp_im = parse_list(*v, "amp_im");
  else
    cfg.amp_im.assign(levels, 0.0);
  if (int(cfg.amp_re.size()) != levels || int(cfg.amp_im.size()) != levels)
    throw std::invalid_argument(
        "config: state amplitudes need one value per level");
  double norm2 = 0.0;
  for (int k = 0; k < levels; ++k)
    norm2 += cfg.amp_re[k] * cfg.amp_re[k] + cfg.amp_im[k] * cfg.amp_im[k];
  if (norm2 <= 0.0)
    throw std::invalid_argument("config: initial state is not normalisable");

  if (values.count("read")) {
    ReadPulseSpec read;
    if (auto v = get("read", "spin")) read.spin = parse_int(*v, "spin");
    if (read.spin < 1 || read.spin > cfg.n_spins)
      throw std::invalid_argument("config: read spin out of range");
    if (auto v = get("read", "axis")) read.axis = pulse_axis_from_string(*v);
    if (auto v = get("read", "angle")) read.angle = parse_angle(*v);
    cfg.read_pulse = read;
  }

  if (auto v = get("grid", "start_s"))
    cfg.grid.start_s = parse_double(*v, "start_s");
  if (auto v = get("grid", "step_s")) cfg.grid.step_s = parse_double(*v, "step_s");
  if (auto v = get("grid", "count")) cfg.grid.count = parse_int(*v, "count");
  if (cfg.grid.count < 2)
    throw std::invalid_argument("config: grid count must be >= 2");
  if (cfg.grid.step_s <= 0.0)
    throw std::invalid_argument("config: grid step must be positive");

  if (auto v = get("relaxation", "enabled"))
    cfg.relaxation = parse_bool(*v, "enabled");
  if (cfg.relaxation && (!cfg.t1_s || !cfg.t2_s))
    throw std::invalid_argument("config: relaxation needs t1_s and t2_s");

  if (auto v = get("output", "prefix")) cfg.output_prefix = *v;
  if (cfg.output_prefix.empty()) cfg.output_prefix = cfg.label;

  // Surface timing preconditions at parse time rather than mid-run.
  if (cfg.mode == ExperimentMode::series) {
    if (cfg.j_hz == 0.0)
      throw std::invalid_argument(
          "config: j_hz = 0 leaves the sequence intervals unsolvable");
    if (cfg.sequence == SequenceKind::aho && !cfg.drive_level)
      throw std::invalid_argument("config: aho sequence needs a [drive] section");
  }

  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

std::string series_csv(const PeakSeries& series) {
  std::ostringstream out;
  out << "T,t_phys";
  for (const char* name : PeakSet::names())
    out << "," << name << "_re," << name << "_im";
  const std::size_t levels =
      series.populations.empty() ? 0 : series.populations.front().size();
  for (std::size_t n = 0; n < levels; ++n) out << ",pop" << n;
  out << "\n";
  for (std::size_t k = 0; k < series.t_grid.size(); ++k) {
    out << format_double(series.t_grid[k]) << ","
        << format_double(series.t_phys[k]);
    for (int l = 0; l < 4; ++l)
      out << "," << format_double(series.lines[l][k].real()) << ","
          << format_double(series.lines[l][k].imag());
    for (double p : series.populations[k]) out << "," << format_double(p);
    out << "\n";
  }
  return out.str();
}

struct OracleCheck {
  double max_distance_target = 0.0;  // against the generator the sequence realises
  double max_distance_mapped_drive = 0.0;  // anharmonic runs only
  int fallbacks = 0;
  bool ok = true;
};

OracleCheck oracle_check(const SeriesSpec& spec) {
  OracleCheck check;
  const ComplexMatrix p_target =
      spec.sequence == SequenceKind::qho
          ? average_hamiltonian(qho_hamiltonian(spec.oscillator), spec.encoding)
          : aho_sequence_generator(spec.oscillator.omega, spec.oscillator.mu,
                                   spec.drive->rabi_frequency);
  ComplexMatrix p_drive;
  if (spec.sequence == SequenceKind::aho)
    p_drive = average_hamiltonian(
        driven_hamiltonian(spec.oscillator, *spec.drive), spec.encoding);
  for (double t : spec.t_grid) {
    const double omega_t = spec.oscillator.omega * t;
    PulseProgram prog =
        spec.sequence == SequenceKind::qho
            ? qho_program(omega_t, spec.params)
            : aho_program(omega_t, spec.params, spec.oscillator.mu,
                          spec.drive->rabi_frequency / spec.oscillator.omega);
    UnitaryPropagator compiled = compile_program(prog, spec.params);
    PhaseDistance d =
        phase_invariant_distance(compiled.matrix(), expm_hermitian_generator(p_target, t).matrix());
    check.max_distance_target = std::max(check.max_distance_target, d.value);
    if (d.grid_fallback) ++check.fallbacks;
    if (spec.sequence == SequenceKind::aho) {
      PhaseDistance dd = phase_invariant_distance(
          compiled.matrix(), expm_hermitian_generator(p_drive, t).matrix());
      check.max_distance_mapped_drive =
          std::max(check.max_distance_mapped_drive, dd.value);
    }
  }
  check.ok = check.max_distance_target < 1e-9;
  return check;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config,
                         const std::string& out_dir) {
  RunResult result;
  std::ostringstream summary;
  const std::string base = out_dir + "/" + config.output_prefix;

  if (config.mode == ExperimentMode::hamiltonian_check) {
    OscillatorSpec osc;
    osc.levels = 1 << config.n_spins;
    osc.omega = config.omega_rad_s;
    osc.mu = 0.0;
    double diff = 0.0;
    std::string kind;
    if (config.encoding == "binary") {
      kind = "binary closed form vs conjugated oscillator Hamiltonian";
      diff = max_abs_diff(
          coupling_free_closed_form(config.n_spins, config.omega_rad_s),
          average_hamiltonian(qho_hamiltonian(osc),
                              binary_encoding(config.n_spins)));
    } else {
      if (config.n_spins != 2)
        throw std::invalid_argument(
            "hamiltonian-check: gray closed form is defined for 2 spins");
      kind = "gray closed form vs conjugated oscillator Hamiltonian (mod identity)";
      diff = max_diff_mod_identity(
          qho_closed_form(config.omega_rad_s),
          average_hamiltonian(qho_hamiltonian(osc), gray_encoding(2)));
    }
    const bool ok = diff < 1e-12;
    std::ostringstream report;
    report << "experiment: " << config.label << "\n"
           << "check: " << kind << "\n"
           << "spins: " << config.n_spins << "\n"
           << "max_abs_difference: " << format_double(diff, "%.6e") << "\n"
           << "tolerance: 1e-12\n"
           << "status: " << (ok ? "ok" : "fail") << "\n";
    const std::string path = base + "_check.txt";
    atomic_write(path, report.str());
    result.files.push_back(path);
    summary << "check " << (ok ? "ok" : "FAIL") << " (max diff "
            << format_double(diff, "%.3e") << ")\n";
    result.ok = ok;
    result.summary = summary.str();
    return result;
  }

  const SeriesSpec spec = config.series_spec();
  PeakSeries series = assemble_series(spec);

  const std::string csv_path = base + "_series.csv";
  atomic_write(csv_path, series_csv(series));
  result.files.push_back(csv_path);

  FrequencyReport freq = frequency_content(series);
  std::ostringstream freq_text;
  freq_text << "experiment: " << config.label << "\n" << freq.to_text();
  const std::string freq_path = base + "_freq.txt";
  atomic_write(freq_path, freq_text.str());
  result.files.push_back(freq_path);

  OracleCheck oracle = oracle_check(spec);
  std::ostringstream oracle_text;
  oracle_text << "experiment: " << config.label << "\n"
              << "sequence: "
              << (config.sequence == SequenceKind::qho ? "qho" : "aho") << "\n"
              << "grid_points: " << series.t_grid.size() << "\n"
              << "max_phase_distance_sequence_target: "
              << format_double(oracle.max_distance_target, "%.6e") << "\n"
              << "tolerance: 1e-9\n";
  if (config.sequence == SequenceKind::aho)
    oracle_text << "max_phase_distance_mapped_drive: "
                << format_double(oracle.max_distance_mapped_drive, "%.6e")
                << "\n";
  oracle_text << "alignment_fallbacks: " << oracle.fallbacks << "\n"
              << "status: " << (oracle.ok ? "ok" : "fail") << "\n";
  const std::string oracle_path = base + "_oracle.txt";
  atomic_write(oracle_path, oracle_text.str());
  result.files.push_back(oracle_path);

  summary << "series points " << series.t_grid.size() << "\n";
  summary << "oracle " << (oracle.ok ? "ok" : "FAIL") << " (max distance "
          << format_double(oracle.max_distance_target, "%.3e") << ")\n";
  result.ok = oracle.ok;
  result.summary = summary.str();
  return result;
}

}  // namespace spinosc
