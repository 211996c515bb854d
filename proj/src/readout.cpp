#include "spinosc/readout.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spinosc {

namespace {
const Complex kI(0.0, 1.0);

// (row, col) of the four single-quantum elements in basis (uu, ud, du, dd).
constexpr int kLineIndex[4][2] = {{0, 2}, {1, 3}, {0, 1}, {2, 3}};
}  // namespace

PeakSet extract_peaks(const DensityMatrix& rho) {
  if (rho.dim() != 4)
    throw std::invalid_argument("extract_peaks: needs a two-spin state");
  PeakSet out;
  for (int k = 0; k < 4; ++k)
    out.amplitudes[k] = rho.matrix()(kLineIndex[k][0], kLineIndex[k][1]);
  return out;
}

std::vector<double> level_populations(const DensityMatrix& rho,
                                      const Encoding& e) {
  if (rho.dim() != e.dim())
    throw std::invalid_argument("level_populations: dimension mismatch");
  std::vector<double> pops(e.dim());
  for (int n = 0; n < int(pops.size()); ++n)
    pops[n] = rho.matrix()(e.basis_index(n), e.basis_index(n)).real();
  return pops;
}

PeakSeries assemble_series(const SeriesSpec& spec) {
  spec.params.validate();
  spec.oscillator.validate();
  if (spec.t_grid.size() < 2)
    throw std::invalid_argument("assemble_series: need at least two T points");
  for (std::size_t k = 1; k + 1 < spec.t_grid.size(); ++k) {
    double d0 = spec.t_grid[k] - spec.t_grid[k - 1];
    double d1 = spec.t_grid[k + 1] - spec.t_grid[k];
    if (d0 <= 0.0 || std::abs(d1 - d0) > 1e-9 * std::max(d0, 1.0))
      throw std::invalid_argument("assemble_series: grid must be uniform");
  }
  if (spec.sequence == SequenceKind::aho && !spec.drive)
    throw std::invalid_argument("assemble_series: anharmonic run needs a drive");

  const StateVector s0 = StateVector::normalized(spec.initial_levels);
  const DensityMatrix rho0 =
      DensityMatrix::pure(pushforward_state(s0, spec.encoding));

  PeakSeries series;
  series.t_grid = spec.t_grid;
  for (double t : spec.t_grid) {
    const double omega_t = spec.oscillator.omega * t;
    PulseProgram prog =
        spec.sequence == SequenceKind::qho
            ? qho_program(omega_t, spec.params)
            : aho_program(omega_t, spec.params, spec.oscillator.mu,
                          spec.drive->rabi_frequency / spec.oscillator.omega);
    DensityMatrix rho =
        execute_program(prog, rho0, spec.params, spec.relaxation);
    if (spec.read_pulse) rho = apply_pulse(rho, *spec.read_pulse, spec.params);
    series.t_phys.push_back(prog.total_delay());
    PeakSet peaks = extract_peaks(rho);
    for (int k = 0; k < 4; ++k)
      series.lines[k].push_back(peaks.amplitudes[k]);
    series.populations.push_back(level_populations(rho, spec.encoding));
  }
  return series;
}

double Spectrum::total_power() const {
  double s = 0.0;
  for (double p : power) s += p;
  return s;
}

double Spectrum::fraction_at(double freq) const {
  double non_dc = non_dc_power();
  if (non_dc <= 0.0) return 0.0;
  int best = -1;
  double best_gap = 0.0;
  for (int k = 1; k < int(freq_rad_s.size()); ++k) {
    double gap = std::abs(freq_rad_s[k] - std::abs(freq));
    if (best < 0 || gap < best_gap) {
      best = k;
      best_gap = gap;
    }
  }
  return best < 0 ? 0.0 : power[best] / non_dc;
}

int Spectrum::dominant_non_dc_bin() const {
  int best = -1;
  for (int k = 1; k < int(power.size()); ++k)
    if (best < 0 || power[k] > power[best]) best = k;
  if (best >= 0 && power[best] <= 0.0) return -1;
  return best;
}

Spectrum spectrum(const std::vector<double>& t_grid,
                  const std::vector<Complex>& values) {
  const int n = int(values.size());
  if (n < 8) throw std::invalid_argument("spectrum: need at least 8 samples");
  if (int(t_grid.size()) != n)
    throw std::invalid_argument("spectrum: grid/value size mismatch");
  const double dt = t_grid[1] - t_grid[0];
  for (int k = 1; k < n; ++k)
    if (std::abs((t_grid[k] - t_grid[k - 1]) - dt) > 1e-9 * std::max(dt, 1.0))
      throw std::invalid_argument("spectrum: grid must be uniform");

  // Plain O(n^2) transform; series here have a few hundred points at most.
  std::vector<Complex> coef(n);
  for (int j = 0; j < n; ++j) {
    Complex acc(0.0, 0.0);
    for (int k = 0; k < n; ++k)
      acc += values[k] * std::exp(-kI * (kTwoPi * j * k / double(n)));
    coef[j] = acc;
  }

  Spectrum out;
  out.bin_width = kTwoPi / (n * dt);
  const int half = n / 2;
  out.freq_rad_s.resize(half + 1);
  out.power.assign(half + 1, 0.0);
  for (int j = 0; j < n; ++j) {
    int fold = j <= half ? j : n - j;  // |frequency| bin
    out.power[fold] += std::norm(coef[j]);
  }
  for (int j = 0; j <= half; ++j) out.freq_rad_s[j] = out.bin_width * j;
  return out;
}

Spectrum spectrum(const std::vector<double>& t_grid,
                  const std::vector<double>& values) {
  std::vector<Complex> cx(values.begin(), values.end());
  return spectrum(t_grid, cx);
}

FrequencyReport frequency_content(const PeakSeries& series) {
  FrequencyReport report;
  report.samples = int(series.t_grid.size());
  if (report.samples >= 2) report.dt = series.t_grid[1] - series.t_grid[0];
  for (int k = 0; k < 4; ++k) {
    Spectrum sp = spectrum(series.t_grid, series.lines[k]);
    LineContent content;
    content.line = PeakSet::names()[k];
    const double total = sp.silent() ? 0.0 : sp.total_power();
    content.dc_fraction = total > 0.0 ? sp.dc_power() / total : 0.0;
    content.non_dc_fraction = total > 0.0 ? sp.non_dc_power() / total : 0.0;
    const double non_dc = sp.silent() ? 0.0 : sp.non_dc_power();
    if (non_dc > 0.0) {
      for (int j = 1; j < int(sp.power.size()); ++j) {
        double frac = sp.power[j] / non_dc;
        if (frac > 0.05)
          content.dominant.push_back({sp.freq_rad_s[j], frac});
      }
      std::sort(content.dominant.begin(), content.dominant.end(),
                [](const auto& a, const auto& b) {
                  return a.fraction > b.fraction;
                });
    }
    report.lines.push_back(std::move(content));
  }
  return report;
}

std::string FrequencyReport::to_text() const {
  std::ostringstream out;
  char buf[64];
  out << "samples: " << samples << "\n";
  std::snprintf(buf, sizeof buf, "%.12g", dt);
  out << "dt_s: " << buf << "\n";
  for (const auto& line : lines) {
    std::snprintf(buf, sizeof buf, "%.6e", line.dc_fraction);
    out << line.line << ".dc_fraction: " << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.6e", line.non_dc_fraction);
    out << line.line << ".non_dc_fraction: " << buf << "\n";
    for (std::size_t k = 0; k < line.dominant.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.6f", line.dominant[k].freq_rad_s);
      out << line.line << ".peak" << k << ".freq_rad_s: " << buf << "\n";
      std::snprintf(buf, sizeof buf, "%.4f", line.dominant[k].fraction);
      out << line.line << ".peak" << k << ".fraction: " << buf << "\n";
    }
  }
  return out.str();
}

EnvelopeFit fit_exponential_envelope(const std::vector<double>& t,
                                     const std::vector<double>& y) {
  const int n = int(y.size());
  if (n < 6 || int(t.size()) != n)
    throw std::invalid_argument(
        "fit_exponential_envelope: need >= 6 samples with matching grids");

  // Rectified local maxima, refined by a parabola through the triplet. The
  // refined abscissa is only trusted when the local t steps are consistent;
  // interval solutions produce sawtooth durations, and there the centre
  // sample's t is used as-is (the scatter averages out in the fit).
  std::vector<double> pt, pv;
  for (int k = 1; k + 1 < n; ++k) {
    double a = std::abs(y[k - 1]), b = std::abs(y[k]), c = std::abs(y[k + 1]);
    if (b < a || b < c || b <= 0.0) continue;
    double denom = a - 2.0 * b + c;
    double value = b, at = t[k];
    if (denom < -1e-300) {
      double delta = 0.5 * (a - c) / denom;  // in samples, |delta| <= 1/2
      value = b - 0.25 * (a - c) * delta;
      double step0 = t[k] - t[k - 1], step1 = t[k + 1] - t[k];
      bool smooth = step0 > 0.0 && step1 > 0.0 &&
                    std::abs(step1 - step0) < 0.25 * std::max(step0, step1);
      if (smooth) at = t[k] + delta * 0.5 * (t[k + 1] - t[k - 1]);
    }
    pt.push_back(at);
    pv.push_back(value);
  }
  if (pt.size() < 3)
    throw std::invalid_argument(
        "fit_exponential_envelope: fewer than 3 usable envelope peaks");

  // Log-linear least squares: ln v = ln A - rate * t.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < pt.size(); ++k) {
    if (pv[k] <= 0.0)
      throw std::invalid_argument(
          "fit_exponential_envelope: non-positive envelope sample");
    double ly = std::log(pv[k]);
    sx += pt[k];
    sy += ly;
    sxx += pt[k] * pt[k];
    sxy += pt[k] * ly;
  }
  const double m = double(pt.size());
  const double denom = m * sxx - sx * sx;
  if (std::abs(denom) < 1e-300)
    throw std::invalid_argument("fit_exponential_envelope: degenerate fit");
  const double slope = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / m;
  EnvelopeFit fit;
  fit.rate = -slope;
  fit.amplitude = std::exp(intercept);
  fit.peaks_used = int(pt.size());
  return fit;
}

}  // namespace spinosc
