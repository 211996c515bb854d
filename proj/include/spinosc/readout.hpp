#ifndef SPINOSC_READOUT_HPP
#define SPINOSC_READOUT_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "spinosc/encoding.hpp"
#include "spinosc/oscillator.hpp"
#include "spinosc/pulse_program.hpp"
#include "spinosc/spin_system.hpp"

// Measurement side: single-quantum line amplitudes (the only directly
// observable signal), simulated-level populations, assembly of readout
// series over the simulated-time grid, discrete Fourier analysis of the
// series and exponential envelope fitting.
//
// "Peak height" is the complex single-quantum density-matrix element
// itself; for ideal delta-like lines that element is the integrated line
// amplitude, so no lineshape synthesis is performed.

namespace spinosc {

// The four single-quantum lines of a two-spin system, by fixed index map:
//   spin1_a = rho(uu, du)   spin1_b = rho(ud, dd)
//   spin2_a = rho(uu, ud)   spin2_b = rho(du, dd)
struct PeakSet {
  std::array<Complex, 4> amplitudes{};

  static constexpr std::array<const char*, 4> names() {
    return {"spin1_a", "spin1_b", "spin2_a", "spin2_b"};
  }
  Complex spin1_a() const { return amplitudes[0]; }
  Complex spin1_b() const { return amplitudes[1]; }
  Complex spin2_a() const { return amplitudes[2]; }
  Complex spin2_b() const { return amplitudes[3]; }
};

PeakSet extract_peaks(const DensityMatrix& rho);

// Diagonal of the pulled-back density matrix; sums to trace(rho).
std::vector<double> level_populations(const DensityMatrix& rho,
                                      const Encoding& e);

struct PeakSeries {
  std::vector<double> t_grid;   // simulated time T, seconds, uniform
  std::vector<double> t_phys;   // physical program duration per point
  std::array<std::vector<Complex>, 4> lines;
  std::vector<std::vector<double>> populations;  // per point, per level
};

enum class SequenceKind { qho, aho };

// One experiment's readout pipeline over the indirect dimension.
struct SeriesSpec {
  SpinSystemParams params;
  OscillatorSpec oscillator;
  std::optional<DriveSpec> drive;  // present for anharmonic runs
  Encoding encoding;
  ComplexVector initial_levels;    // amplitudes over levels, any norm > 0
  std::optional<PulseEvent> read_pulse;
  std::vector<double> t_grid;      // seconds
  SequenceKind sequence = SequenceKind::qho;
  bool relaxation = false;
};

// For each T: prepare the initial state, run the V_T program, apply the
// read pulse when configured, record peaks and populations.
PeakSeries assemble_series(const SeriesSpec& spec);

// Power spectrum of a uniformly sampled complex series, negative and
// positive frequencies folded onto |frequency| bins. Bin 0 is DC.
// Series whose total power sits below this floor are treated as silent:
// their content is roundoff from the propagator eigensolves, and power
// ratios on pure noise are meaningless.
inline constexpr double kSilentPower = 1e-20;

struct Spectrum {
  std::vector<double> freq_rad_s;  // bin centres, |frequency|
  std::vector<double> power;      // folded power per bin
  double bin_width = 0.0;         // rad/s

  bool silent() const { return total_power() < kSilentPower; }
  double total_power() const;
  double dc_power() const { return power.empty() ? 0.0 : power[0]; }
  double non_dc_power() const { return total_power() - dc_power(); }
  // Fraction of non-DC power in the bin nearest the given frequency.
  double fraction_at(double freq_rad_s) const;
  int dominant_non_dc_bin() const;  // -1 when there is no non-DC power
};

Spectrum spectrum(const std::vector<double>& t_grid,
                  const std::vector<Complex>& values);
Spectrum spectrum(const std::vector<double>& t_grid,
                  const std::vector<double>& values);

struct LineContent {
  std::string line;
  double dc_fraction = 0.0;      // DC power / total power
  double non_dc_fraction = 0.0;  // non-DC power / total power
  struct Bin {
    double freq_rad_s = 0.0;
    double fraction = 0.0;  // of the line's non-DC power
  };
  std::vector<Bin> dominant;  // bins holding > 5% of non-DC power
};

struct FrequencyReport {
  int samples = 0;
  double dt = 0.0;
  std::vector<LineContent> lines;

  std::string to_text() const;  // key: value form for golden files
};

// Per-line Fourier content of a peak series. Requires >= 8 uniform samples.
FrequencyReport frequency_content(const PeakSeries& series);

struct EnvelopeFit {
  double rate = 0.0;       // 1/s
  double amplitude = 0.0;  // envelope at t = 0
  int peaks_used = 0;
};

// Least-squares fit of amplitude * exp(-rate * t) to the oscillation
// envelope of y(t): rectified local maxima, parabolically refined, then a
// log-linear fit. t is typically the physical program duration, which need
// not be uniform or monotone; peaks straddling a discontinuity in t are
// skipped.
EnvelopeFit fit_exponential_envelope(const std::vector<double>& t,
                                     const std::vector<double>& y);

}  // namespace spinosc

#endif
