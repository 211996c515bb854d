#ifndef SPINOSC_ENCODING_HPP
#define SPINOSC_ENCODING_HPP

#include <string>
#include <vector>

#include "spinosc/linalg.hpp"

// Maps between oscillator levels |n> and spin product states: the Gray code
// (adjacent levels differ by a single spin flip, so Delta n = +-1
// transitions are directly observable) and the plain binary code (which
// yields a coupling-free mapped Hamiltonian). Also the pushforward /
// pullback of states and operators along a map, and the spin-side closed
// forms of the mapped oscillator Hamiltonians.
//
// Label resolution for the closed forms: written as products of sigma_z
// factors, the two possible slot assignments of the closed forms' spin
// labels give different eigenvalue orders; the assignment used here is the
// one that makes each closed form equal the permutation-conjugated
// oscillator Hamiltonian (asserted by tests). Under it the "outer" sigma_z
// factor of the harmonic form acts on spin 1 (the most significant slot).

namespace spinosc {

struct Encoding {
  int n_spins = 0;
  std::vector<int> level_to_basis;  // bijection on 0..2^N-1
  std::string label;

  int basis_index(int level) const { return level_to_basis.at(level); }
  int level_of(int basis) const;
  Eigen::Index dim() const { return Eigen::Index(1) << n_spins; }

  // Permutation matrix P with P[basis_index(n), n] = 1. Satisfies
  // P P^T = I exactly.
  ComplexMatrix permutation_matrix() const;

  void validate() const;
};

// Reflected binary Gray code with up = 0, down = 1 and spin 1 as the most
// significant symbol. For two spins: 0<->uu, 1<->ud, 2<->dd, 3<->du.
Encoding gray_encoding(int n_spins);

// Level k maps to the spin state whose bit pattern is k with spin 1
// carrying the least significant bit.
Encoding binary_encoding(int n_spins);

// |s> -> |p>: amplitudes permuted onto the spin side.
StateVector pushforward_state(const StateVector& s, const Encoding& e);
DensityMatrix pushforward_state(const DensityMatrix& s, const Encoding& e);
StateVector pullback_state(const StateVector& p, const Encoding& e);
DensityMatrix pullback_state(const DensityMatrix& p, const Encoding& e);

// Conjugation of a simulated-side operator onto the spin side: P A P^T.
// This is the mapped (average) Hamiltonian when A is the simulated
// Hamiltonian. Preserves the eigenvalue multiset exactly.
ComplexMatrix average_hamiltonian(const ComplexMatrix& h_s, const Encoding& e);
ComplexMatrix pullback_operator(const ComplexMatrix& h_p, const Encoding& e);

// Spin-side generator of the Gray-coded truncated harmonic oscillator for
// two spins: omega (2 - sz1 (1 + sz2/2)). Equals
// average_hamiltonian(qho, gray) up to a multiple of the identity.
ComplexMatrix qho_closed_form(double omega);

// Spin-side generator of the binary-coded truncated harmonic oscillator:
// (omega/2) (2^n - [sz1 + 2 sz2 + ... + 2^{n-1} szn]). Contains no
// spin-spin cross terms and equals average_hamiltonian(qho, binary)
// exactly, identity offset included.
ComplexMatrix coupling_free_closed_form(int n_spins, double omega);

// Spin-side generator of the Gray-coded anharmonic oscillator driven on
// its lowest transition:
//   omega mu sz2 - omega (4 mu + 1) sz1 (1 + sz2/2)
//     + (rabi/4) sx2 (1 + sz1).
// Equals average_hamiltonian(driven_hamiltonian(m=0), gray) up to a
// multiple of the identity.
ComplexMatrix driven_aho_closed_form(double omega, double mu, double rabi);

// max-entry norm of a - b after removing the mean diagonal shift, i.e.
// || a - b - (tr(a-b)/dim) I ||_max.
double max_diff_mod_identity(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace spinosc

#endif
