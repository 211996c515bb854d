#ifndef SPINOSC_SPIN_SYSTEM_HPP
#define SPINOSC_SPIN_SYSTEM_HPP

#include <optional>
#include <string>
#include <vector>

#include "spinosc/linalg.hpp"

// Physics of the N-spin processor: the rotating-frame natural Hamiltonian,
// ideal hard pulses, free-evolution delays with optional phenomenological
// relaxation, the gradient crusher and the thermal deviation state.
//
// Conventions (fixed once, relied on everywhere):
//   * spin 1 occupies the most significant tensor slot; the product basis
//     is ordered (uu, ud, du, dd) for two spins with sigma_z |u> = +|u>;
//   * pulses are ideal zero-duration rotations exp(-i (angle/2) * sum of
//     sigma_axis over targets), with the angle sign carried by the event;
//   * delays evolve states by exp(-i H0 dt).

namespace spinosc {

struct SpinSystemParams {
  int n_spins = 2;
  std::vector<double> resonance_frequencies;  // rad/s, one per spin
  double receiver_frequency = 0.0;            // rad/s
  Eigen::MatrixXd j_couplings;                // Hz, symmetric, zero diagonal
  std::optional<double> t1_seconds;           // global longitudinal time
  std::optional<double> t2_seconds;           // global transverse time

  // Rotating-frame offset omega_i - omega_0 of a 0-based spin index.
  double offset(int spin) const;
  double j(int a, int b) const { return j_couplings(a, b); }
  Eigen::Index dim() const { return Eigen::Index(1) << n_spins; }

  void validate() const;  // throws std::invalid_argument on bad fields

  // Two-spin system with the given offsets (rad/s) and J (Hz).
  static SpinSystemParams two_spin(double offset1, double offset2,
                                   double j_hz);
};

enum class PulseAxis { plus_x, minus_x, plus_y, minus_y };

std::string to_string(PulseAxis axis);
PulseAxis pulse_axis_from_string(const std::string& s);

struct PulseEvent {
  double flip_angle = 0.0;   // radians, signed
  PulseAxis axis = PulseAxis::plus_y;
  std::vector<int> targets;  // 0-based spin indices, non-empty
};

struct DelayEvent {
  double duration = 0.0;  // seconds, >= 0
};

struct GradientEvent {};  // crusher marker, non-unitary

// 2x2 Pauli matrices.
enum class Pauli { x, y, z };
ComplexMatrix pauli_matrix(Pauli p);

// I (x) ... (x) sigma (x) ... (x) I with the operator at the given spin's
// slot (spin 0 = most significant).
ComplexMatrix pauli_operator(Pauli p, int spin, int n_spins);
ComplexMatrix pauli_operator(Pauli p, int spin, const SpinSystemParams& params);

// H0 = (1/2) [ sum_i (w_i - w_0) sz_i + sum_{i<j} pi J_ij sz_i sz_j ],
// diagonal in the product basis, rad/s.
ComplexMatrix natural_hamiltonian(const SpinSystemParams& params);

// Rotation operator of a pulse event.
ComplexMatrix pulse_propagator(const PulseEvent& pulse, int n_spins);

// rho -> R rho R^dagger, instantaneous.
DensityMatrix apply_pulse(const DensityMatrix& state, const PulseEvent& pulse,
                          const SpinSystemParams& params);

// Free evolution under H0 for dt seconds. With relaxation on, afterwards
// every off-diagonal element is damped by exp(-dt/T2) and every diagonal
// deviation from the uniform diagonal is damped by exp(-dt/T1).
DensityMatrix evolve_delay(const DensityMatrix& state, double dt,
                           const SpinSystemParams& params, bool relaxation);

// Zeroes all off-diagonal entries exactly; diagonal untouched. Idempotent.
// Physical gradients would spare zero-quantum terms; this model crushes
// them too.
DensityMatrix gradient_crush(const DensityMatrix& state);

// Deviation part of the thermal state: sum_i sz_i, normalised to unit
// maximum eigenvalue (all spins are like nuclei and enter with equal
// weight). Traceless, flagged as a deviation matrix.
DensityMatrix thermal_deviation(const SpinSystemParams& params);

}  // namespace spinosc

#endif
