#include "spinosc/oscillator.hpp"

namespace spinosc {

void OscillatorSpec::validate() const {
  if (levels < 2)
    throw std::invalid_argument("OscillatorSpec: need at least two levels");
  if (omega == 0.0)
    throw std::invalid_argument("OscillatorSpec: omega must be nonzero");
}

void DriveSpec::validate(const OscillatorSpec& osc) const {
  if (level_m < 0 || level_m > osc.levels - 2)
    throw std::out_of_range("DriveSpec: level index out of range");
}

ComplexMatrix qho_hamiltonian(const OscillatorSpec& spec) {
  spec.validate();
  if (spec.mu != 0.0)
    throw std::invalid_argument("qho_hamiltonian: mu must be zero");
  ComplexMatrix h = ComplexMatrix::Zero(spec.levels, spec.levels);
  for (int n = 0; n < spec.levels; ++n) h(n, n) = spec.omega * (n + 0.5);
  return h;
}

ComplexMatrix aho_hamiltonian(const OscillatorSpec& spec) {
  spec.validate();
  ComplexMatrix h = ComplexMatrix::Zero(spec.levels, spec.levels);
  for (int n = 0; n < spec.levels; ++n) {
    double x = n + 0.5;
    h(n, n) = spec.omega * (x + spec.mu * x * x);
  }
  return h;
}

double transition_energy(int m, const OscillatorSpec& spec) {
  spec.validate();
  if (m < 0 || m + 1 >= spec.levels)
    throw std::out_of_range("transition_energy: level index out of range");
  return spec.omega * (2.0 * spec.mu * (m + 1) + 1.0);
}

ComplexMatrix driven_hamiltonian(const OscillatorSpec& spec,
                                 const DriveSpec& drive) {
  drive.validate(spec);
  ComplexMatrix h = aho_hamiltonian(spec);
  h(drive.level_m, drive.level_m + 1) += 0.5 * drive.rabi_frequency;
  h(drive.level_m + 1, drive.level_m) += 0.5 * drive.rabi_frequency;
  return h;
}

UnitaryPropagator exact_propagator(const ComplexMatrix& h, double t_simulated) {
  return expm_hermitian_generator(h, t_simulated);
}

}  // namespace spinosc
