#include "spinosc/pulse_program.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "spinosc/encoding.hpp"

namespace spinosc {

namespace {

constexpr double kTinyFreq = 1e-9;   // rad/s, "on resonance" threshold
constexpr double kRegimeTol = 1e-9;  // specialised-regime parameter tolerance

// Smallest value >= 0 congruent to x modulo pi.
double wrap_to_pi(double x) {
  double w = std::fmod(x, kPi);
  if (w < 0.0) w += kPi;
  if (w > kPi - 1e-13) w = 0.0;  // treat values a rounding error below pi as 0
  return w + 0.0;                // normalise -0
}

void require_two_spins(const SpinSystemParams& params, const char* who) {
  if (params.n_spins != 2)
    throw std::invalid_argument(std::string(who) + ": needs a two-spin system");
}

// The harmonic sequences require the receiver sitting on spin 2 and the
// working offset on spin 1.
double working_offset(const SpinSystemParams& params, const char* who) {
  require_two_spins(params, who);
  if (std::abs(params.offset(1)) > kTinyFreq)
    throw std::invalid_argument(
        std::string(who) +
        ": off-resonance frame configured (receiver must sit on spin 2)");
  return params.offset(0);
}

PulseEvent hard_pulse(double angle, PulseAxis axis, std::vector<int> targets) {
  PulseEvent p;
  p.flip_angle = angle;
  p.axis = axis;
  p.targets = std::move(targets);
  return p;
}

std::string format_angle(double angle) {
  // Render small rational multiples of pi the way sequence listings do.
  for (int q = 1; q <= 12; ++q) {
    double p = angle * q / kPi;
    double r = std::round(p);
    if (std::abs(p - r) < 1e-9 && r != 0.0) {
      int pi_num = int(r);
      std::string num;
      if (pi_num == 1)
        num = "pi";
      else if (pi_num == -1)
        num = "-pi";
      else
        num = std::to_string(pi_num) + "pi";
      if (q == 1) return num;
      return num + "/" + std::to_string(q);
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", angle);
  return buf;
}

}  // namespace

double PulseProgram::total_delay() const {
  double t = 0.0;
  for (const auto& ev : events)
    if (const auto* d = std::get_if<DelayEvent>(&ev)) t += d->duration;
  return t;
}

bool PulseProgram::has_gradient() const {
  for (const auto& ev : events)
    if (std::holds_alternative<GradientEvent>(ev)) return true;
  return false;
}

PulseProgram pseudopure_prep_program(const SpinSystemParams& params) {
  require_two_spins(params, "pseudopure_prep_program");
  const double j = params.j(0, 1);
  if (j <= 0.0)
    throw std::invalid_argument(
        "pseudopure_prep_program: needs a positive J coupling");
  const double quarter = 1.0 / (4.0 * j);
  PulseProgram prog;
  prog.label = "pseudopure-prep";
  prog.events = {
      hard_pulse(kPi / 4.0, PulseAxis::plus_x, {0, 1}),
      DelayEvent{quarter},
      hard_pulse(kPi, PulseAxis::plus_y, {0, 1}),
      DelayEvent{quarter},
      hard_pulse(-5.0 * kPi / 6.0, PulseAxis::minus_y, {0, 1}),
      GradientEvent{},
  };
  return prog;
}

TimingSolution qho_timing(double omega_t, const SpinSystemParams& params) {
  if (omega_t < 0.0)
    throw std::invalid_argument("qho_timing: OmegaT must be >= 0");
  const double dw = working_offset(params, "qho_timing");
  const double j = params.j(0, 1);
  if (j == 0.0) throw std::invalid_argument("qho_timing: J must be nonzero");
  if (dw == 0.0)
    throw std::invalid_argument("qho_timing: spins must be inequivalent");
  TimingSolution t;
  t.tau2 = 2.0 * omega_t / dw;
  t.tau1 = omega_t * (1.0 / (kPi * j) - 2.0 / dw);
  if (t.tau2 < 0.0 || t.tau1 < 0.0) {
    std::ostringstream msg;
    msg << "qho_timing: negative interval (tau1 = " << t.tau1
        << " s, tau2 = " << t.tau2 << " s) for J = " << j
        << " Hz, offset = " << dw << " rad/s";
    throw std::invalid_argument(msg.str());
  }
  return t;
}

TimingSolution qho_matched_timing(double omega_t,
                                  const SpinSystemParams& params) {
  if (omega_t < 0.0)
    throw std::invalid_argument("qho_matched_timing: OmegaT must be >= 0");
  const double dw = working_offset(params, "qho_matched_timing");
  const double j = params.j(0, 1);
  if (j <= 0.0 || dw <= 0.0)
    throw std::invalid_argument(
        "qho_matched_timing: needs positive J and positive spin-1 offset");
  // dw tau2 / 2 == -OmegaT (mod pi) and pi J (tau1+tau2) / 2 == -OmegaT/2
  // (mod pi), smallest non-negative solutions.
  TimingSolution t;
  t.tau2 = 2.0 * wrap_to_pi(-omega_t) / dw;
  double total = 2.0 * wrap_to_pi(-omega_t / 2.0) / (kPi * j);
  while (total < t.tau2 - 1e-15) total += 2.0 / j;  // bump the J channel by pi
  t.tau1 = std::max(total - t.tau2, 0.0);
  return t;
}

PulseProgram qho_program(double omega_t, const SpinSystemParams& params) {
  TimingSolution t = qho_matched_timing(omega_t, params);
  PulseProgram prog;
  prog.omega_t = omega_t;
  prog.label = "qho";
  prog.events = {
      hard_pulse(kPi, PulseAxis::plus_y, {0, 1}),
      DelayEvent{t.tau1 / 2.0},
      hard_pulse(kPi, PulseAxis::plus_y, {0, 1}),
      DelayEvent{t.tau1 / 2.0 + t.tau2},
  };
  return prog;
}

namespace {

void check_aho_regime(double mu, double rabi_over_omega, const char* who) {
  if (std::abs(mu + 2.0 / 9.0) > kRegimeTol ||
      std::abs(rabi_over_omega - mu) > kRegimeTol)
    throw std::invalid_argument(
        std::string(who) +
        ": interval formulas hold only for mu = -2/9 with rabi = mu * omega");
}

// The anharmonic sequence needs the receiver J/2 below spin 2, so that the
// spin-2 offset equals pi J and the tilted interval carries equal sz2/sx2
// weight.
void check_aho_frame(const SpinSystemParams& params, const char* who) {
  require_two_spins(params, who);
  const double j = params.j(0, 1);
  if (j <= 0.0)
    throw std::invalid_argument(std::string(who) + ": needs positive J");
  if (std::abs(params.offset(1) - kPi * j) > 1e-6 * std::abs(kPi * j))
    throw std::invalid_argument(
        std::string(who) +
        ": receiver must sit J/2 below spin 2 (spin-2 offset = pi J)");
  if (params.offset(0) <= 0.0)
    throw std::invalid_argument(std::string(who) +
                                ": spin-1 offset must be positive");
}

}  // namespace

TimingSolution aho_timing(double omega_t, const SpinSystemParams& params,
                          double mu, double rabi_over_omega) {
  if (omega_t < 0.0)
    throw std::invalid_argument("aho_timing: OmegaT must be >= 0");
  check_aho_regime(mu, rabi_over_omega, "aho_timing");
  check_aho_frame(params, "aho_timing");
  const double j = params.j(0, 1);
  const double w1 = params.offset(0);
  TimingSolution t;
  t.tau2 = std::sqrt(2.0) * omega_t / (9.0 * kPi * j);
  t.m_integer = int(std::ceil(omega_t / (9.0 * kPi) - 1e-12));
  t.tau1 = (t.m_integer - omega_t / (9.0 * kPi)) * kTwoPi / w1;
  if (t.tau1 < 0.0) {  // unreachable for the ceil above; keep the guard
    ++t.m_integer;
    t.tau1 = (t.m_integer - omega_t / (9.0 * kPi)) * kTwoPi / w1;
  }
  return t;
}

TimingSolution aho_matched_timing(double omega_t,
                                  const SpinSystemParams& params, double mu,
                                  double rabi_over_omega) {
  if (omega_t < 0.0)
    throw std::invalid_argument("aho_matched_timing: OmegaT must be >= 0");
  check_aho_regime(mu, rabi_over_omega, "aho_matched_timing");
  check_aho_frame(params, "aho_matched_timing");
  const double j = params.j(0, 1);
  const double w1 = params.offset(0);
  // Tilted channel: pi J tau2 / 2 == -sqrt(2) OmegaT / 18 (mod pi).
  TimingSolution t;
  t.tau2 = 2.0 * wrap_to_pi(-std::sqrt(2.0) * omega_t / 18.0) / (kPi * j);
  // Spin-1 channel including the tau2 window:
  //   w1 (tau1 + tau2) / 2 == -OmegaT / 9 (mod pi).
  double target = wrap_to_pi(-omega_t / 9.0);
  double total = 2.0 * target / w1;
  int m = 0;
  while (total < t.tau2 - 1e-15) {
    total += kTwoPi / w1;
    ++m;
  }
  t.tau1 = std::max(total - t.tau2, 0.0);
  t.m_integer = m;
  return t;
}

PulseProgram aho_program(double omega_t, const SpinSystemParams& params,
                         double mu, double rabi_over_omega) {
  TimingSolution t = aho_matched_timing(omega_t, params, mu, rabi_over_omega);
  PulseProgram prog;
  prog.omega_t = omega_t;
  prog.label = "aho";
  prog.events = {
      DelayEvent{t.tau1 / 2.0},
      hard_pulse(kPi, PulseAxis::plus_y, {1}),
      DelayEvent{t.tau1 / 2.0},
      hard_pulse(3.0 * kPi / 4.0, PulseAxis::plus_y, {1}),
      DelayEvent{t.tau2},
      hard_pulse(kPi / 4.0, PulseAxis::plus_y, {1}),
  };
  return prog;
}

ComplexMatrix aho_sequence_generator(double omega, double mu, double rabi) {
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  const ComplexMatrix sz1 = pauli_operator(Pauli::z, 0, 2);
  const ComplexMatrix sz2 = pauli_operator(Pauli::z, 1, 2);
  const ComplexMatrix sx2 = pauli_operator(Pauli::x, 1, 2);
  return 0.25 * omega * (mu * sz2 - 4.0 * (4.0 * mu + 1.0) * sz1 * (id + 0.5 * sz2)) +
         0.25 * rabi * sx2 * (id + sz1);
}

UnitaryPropagator compile_program(const PulseProgram& program,
                                  const SpinSystemParams& params) {
  if (program.has_gradient())
    throw std::invalid_argument(
        "compile_program: gradients are non-unitary; use execute_program");
  const Eigen::Index d = params.dim();
  ComplexMatrix u = ComplexMatrix::Identity(d, d);
  const ComplexMatrix h0 = natural_hamiltonian(params);
  for (const auto& ev : program.events) {
    if (const auto* p = std::get_if<PulseEvent>(&ev)) {
      u = pulse_propagator(*p, params.n_spins) * u;
    } else if (const auto* del = std::get_if<DelayEvent>(&ev)) {
      u = expm_hermitian_generator(h0, del->duration).matrix() * u;
    }
  }
  return UnitaryPropagator(std::move(u));
}

DensityMatrix execute_program(const PulseProgram& program,
                              const DensityMatrix& state,
                              const SpinSystemParams& params,
                              bool relaxation) {
  DensityMatrix rho = state;
  for (const auto& ev : program.events) {
    if (const auto* p = std::get_if<PulseEvent>(&ev)) {
      rho = apply_pulse(rho, *p, params);
    } else if (const auto* d = std::get_if<DelayEvent>(&ev)) {
      rho = evolve_delay(rho, d->duration, params, relaxation);
    } else {
      rho = gradient_crush(rho);
    }
  }
  return rho;
}

std::string serialize_program(const PulseProgram& program) {
  std::ostringstream out;
  for (const auto& ev : program.events) {
    if (const auto* p = std::get_if<PulseEvent>(&ev)) {
      out << "pulse " << to_string(p->axis) << " ";
      for (std::size_t i = 0; i < p->targets.size(); ++i) {
        if (i) out << "+";
        out << (p->targets[i] + 1);
      }
      out << " " << format_angle(p->flip_angle) << "\n";
    } else if (const auto* d = std::get_if<DelayEvent>(&ev)) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", d->duration);
      out << "delay " << buf << "\n";
    } else {
      out << "grad\n";
    }
  }
  return out.str();
}

}  // namespace spinosc
