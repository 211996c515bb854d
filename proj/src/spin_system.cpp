#include "spinosc/spin_system.hpp"

#include <algorithm>
#include <cmath>

namespace spinosc {

namespace {
const Complex kI(0.0, 1.0);
}

double SpinSystemParams::offset(int spin) const {
  return resonance_frequencies.at(spin) - receiver_frequency;
}

void SpinSystemParams::validate() const {
  if (n_spins < 1)
    throw std::invalid_argument("SpinSystemParams: n_spins must be >= 1");
  if (int(resonance_frequencies.size()) != n_spins)
    throw std::invalid_argument(
        "SpinSystemParams: need one resonance frequency per spin");
  if (j_couplings.rows() != n_spins || j_couplings.cols() != n_spins)
    throw std::invalid_argument("SpinSystemParams: J matrix must be N x N");
  for (int i = 0; i < n_spins; ++i) {
    if (j_couplings(i, i) != 0.0)
      throw std::invalid_argument("SpinSystemParams: J diagonal must be zero");
    for (int k = i + 1; k < n_spins; ++k)
      if (j_couplings(i, k) != j_couplings(k, i))
        throw std::invalid_argument("SpinSystemParams: J must be symmetric");
  }
  if (t1_seconds && *t1_seconds <= 0.0)
    throw std::invalid_argument("SpinSystemParams: T1 must be positive");
  if (t2_seconds && *t2_seconds <= 0.0)
    throw std::invalid_argument("SpinSystemParams: T2 must be positive");
  if (t1_seconds && t2_seconds && *t2_seconds > 2.0 * *t1_seconds)
    throw std::invalid_argument("SpinSystemParams: T2 must be <= 2 T1");
}

SpinSystemParams SpinSystemParams::two_spin(double offset1, double offset2,
                                            double j_hz) {
  SpinSystemParams p;
  p.n_spins = 2;
  p.receiver_frequency = 0.0;
  p.resonance_frequencies = {offset1, offset2};
  p.j_couplings = Eigen::MatrixXd::Zero(2, 2);
  p.j_couplings(0, 1) = j_hz;
  p.j_couplings(1, 0) = j_hz;
  p.validate();
  return p;
}

std::string to_string(PulseAxis axis) {
  switch (axis) {
    case PulseAxis::plus_x: return "x";
    case PulseAxis::minus_x: return "-x";
    case PulseAxis::plus_y: return "y";
    case PulseAxis::minus_y: return "-y";
  }
  return "?";
}

PulseAxis pulse_axis_from_string(const std::string& s) {
  if (s == "x") return PulseAxis::plus_x;
  if (s == "-x") return PulseAxis::minus_x;
  if (s == "y") return PulseAxis::plus_y;
  if (s == "-y") return PulseAxis::minus_y;
  throw std::invalid_argument("unknown pulse axis: " + s);
}

ComplexMatrix pauli_matrix(Pauli p) {
  ComplexMatrix m(2, 2);
  switch (p) {
    case Pauli::x: m << 0, 1, 1, 0; break;
    case Pauli::y: m << 0, -kI, kI, 0; break;
    case Pauli::z: m << 1, 0, 0, -1; break;
  }
  return m;
}

ComplexMatrix pauli_operator(Pauli p, int spin, int n_spins) {
  if (spin < 0 || spin >= n_spins)
    throw std::out_of_range("pauli_operator: spin index out of range");
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int s = 0; s < n_spins; ++s)
    out = kron(out, s == spin ? pauli_matrix(p) : ComplexMatrix::Identity(2, 2));
  return out;
}

ComplexMatrix pauli_operator(Pauli p, int spin, const SpinSystemParams& params) {
  return pauli_operator(p, spin, params.n_spins);
}

ComplexMatrix natural_hamiltonian(const SpinSystemParams& params) {
  params.validate();
  const Eigen::Index d = params.dim();
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < params.n_spins; ++i)
    h += 0.5 * params.offset(i) * pauli_operator(Pauli::z, i, params.n_spins);
  for (int i = 0; i < params.n_spins; ++i)
    for (int k = i + 1; k < params.n_spins; ++k)
      if (params.j(i, k) != 0.0)
        h += 0.5 * kPi * params.j(i, k) *
             pauli_operator(Pauli::z, i, params.n_spins) *
             pauli_operator(Pauli::z, k, params.n_spins);
  return h;
}

ComplexMatrix pulse_propagator(const PulseEvent& pulse, int n_spins) {
  if (pulse.targets.empty())
    throw std::invalid_argument("pulse_propagator: empty target set");
  const Eigen::Index d = Eigen::Index(1) << n_spins;
  ComplexMatrix gen = ComplexMatrix::Zero(d, d);
  double sign = 1.0;
  Pauli base = Pauli::x;
  switch (pulse.axis) {
    case PulseAxis::plus_x: base = Pauli::x; sign = 1.0; break;
    case PulseAxis::minus_x: base = Pauli::x; sign = -1.0; break;
    case PulseAxis::plus_y: base = Pauli::y; sign = 1.0; break;
    case PulseAxis::minus_y: base = Pauli::y; sign = -1.0; break;
  }
  for (int t : pulse.targets) gen += sign * pauli_operator(base, t, n_spins);
  return expm_hermitian_generator(gen, pulse.flip_angle / 2.0).matrix();
}

DensityMatrix apply_pulse(const DensityMatrix& state, const PulseEvent& pulse,
                          const SpinSystemParams& params) {
  ComplexMatrix r = pulse_propagator(pulse, params.n_spins);
  if (r.rows() != state.dim())
    throw std::invalid_argument("apply_pulse: dimension mismatch");
  ComplexMatrix m = r * state.matrix() * r.adjoint();
  return state.is_deviation() ? DensityMatrix::deviation(std::move(m))
                              : DensityMatrix::normalized(std::move(m));
}

DensityMatrix evolve_delay(const DensityMatrix& state, double dt,
                           const SpinSystemParams& params, bool relaxation) {
  if (dt < 0.0) throw std::invalid_argument("evolve_delay: negative duration");
  if (relaxation && (!params.t1_seconds || !params.t2_seconds))
    throw std::invalid_argument(
        "evolve_delay: relaxation requested but T1/T2 not set");
  ComplexMatrix u = expm_hermitian_generator(natural_hamiltonian(params), dt)
                        .matrix();
  ComplexMatrix m = u * state.matrix() * u.adjoint();
  if (relaxation && dt > 0.0) {
    const double f2 = std::exp(-dt / *params.t2_seconds);
    const double f1 = std::exp(-dt / *params.t1_seconds);
    // T1 fixed point: uniform diagonal carrying the full trace. The true
    // thermal diagonal differs from uniform by a part-per-1e5 polarisation
    // that the deviation picture drops anyway.
    const Complex uniform = m.trace() / double(m.rows());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (i == j)
          m(i, j) = uniform + (m(i, j) - uniform) * f1;
        else
          m(i, j) *= f2;
      }
    }
  }
  return state.is_deviation() ? DensityMatrix::deviation(std::move(m))
                              : DensityMatrix::normalized(std::move(m));
}

DensityMatrix gradient_crush(const DensityMatrix& state) {
  ComplexMatrix m = state.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j) m(i, j) = Complex(0.0, 0.0);
  return state.is_deviation() ? DensityMatrix::deviation(std::move(m))
                              : DensityMatrix::normalized(std::move(m));
}

DensityMatrix thermal_deviation(const SpinSystemParams& params) {
  params.validate();
  const Eigen::Index d = params.dim();
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < params.n_spins; ++i)
    m += pauli_operator(Pauli::z, i, params.n_spins);
  m /= double(params.n_spins);  // max eigenvalue of the sum is n_spins
  return DensityMatrix::deviation(std::move(m));
}

}  // namespace spinosc
