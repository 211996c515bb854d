#ifndef SPINOSC_OSCILLATOR_HPP
#define SPINOSC_OSCILLATOR_HPP

#include "spinosc/linalg.hpp"

// Truncated harmonic and anharmonic oscillator Hamiltonians, the selective
// two-level drive, and the exact propagator used as the oracle against
// which every pulse program is checked. Truncation is exact by
// construction: the Hamiltonians are defined directly on `levels` states,
// with no leakage modelling.

namespace spinosc {

struct OscillatorSpec {
  int levels = 4;      // 2^N for an N-spin realisation
  double omega = 0.0;  // oscillator frequency, rad/s
  double mu = 0.0;     // dimensionless anharmonicity (0 = harmonic)

  void validate() const;
};

struct DriveSpec {
  int level_m = 0;              // couples |m> and |m+1>
  double rabi_frequency = 0.0;  // rad/s, signed

  void validate(const OscillatorSpec& osc) const;
};

// diag( omega (n + 1/2) ), n = 0..levels-1. Requires mu == 0.
ComplexMatrix qho_hamiltonian(const OscillatorSpec& spec);

// diag( omega [ (n + 1/2) + mu (n + 1/2)^2 ] ).
ComplexMatrix aho_hamiltonian(const OscillatorSpec& spec);

// Spacing between levels m and m+1: omega [ 2 mu (m+1) + 1 ]. Identical to
// the corresponding eigenvalue difference of aho_hamiltonian.
double transition_energy(int m, const OscillatorSpec& spec);

// aho_hamiltonian plus the symmetric coupling (rabi/2) between the drive's
// level pair.
ComplexMatrix driven_hamiltonian(const OscillatorSpec& spec,
                                 const DriveSpec& drive);

// exp(-i h T) for the simulated duration T (seconds).
UnitaryPropagator exact_propagator(const ComplexMatrix& h, double t_simulated);

}  // namespace spinosc

#endif
