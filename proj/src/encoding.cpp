#include "spinosc/encoding.hpp"

#include <algorithm>

#include "spinosc/spin_system.hpp"

namespace spinosc {

int Encoding::level_of(int basis) const {
  for (int n = 0; n < int(level_to_basis.size()); ++n)
    if (level_to_basis[n] == basis) return n;
  throw std::out_of_range("Encoding: basis index not in permutation");
}

ComplexMatrix Encoding::permutation_matrix() const {
  ComplexMatrix p = ComplexMatrix::Zero(dim(), dim());
  for (int n = 0; n < int(level_to_basis.size()); ++n)
    p(level_to_basis[n], n) = 1.0;
  return p;
}

void Encoding::validate() const {
  if (n_spins < 1) throw std::invalid_argument("Encoding: n_spins must be >= 1");
  const int d = 1 << n_spins;
  if (int(level_to_basis.size()) != d)
    throw std::invalid_argument("Encoding: permutation has wrong size");
  std::vector<bool> seen(d, false);
  for (int b : level_to_basis) {
    if (b < 0 || b >= d || seen[b])
      throw std::invalid_argument("Encoding: permutation is not a bijection");
    seen[b] = true;
  }
}

Encoding gray_encoding(int n_spins) {
  if (n_spins < 1)
    throw std::invalid_argument("gray_encoding: n_spins must be >= 1");
  Encoding e;
  e.n_spins = n_spins;
  e.label = "gray";
  const int d = 1 << n_spins;
  e.level_to_basis.resize(d);
  for (int n = 0; n < d; ++n) e.level_to_basis[n] = n ^ (n >> 1);
  e.validate();
  return e;
}

Encoding binary_encoding(int n_spins) {
  if (n_spins < 1)
    throw std::invalid_argument("binary_encoding: n_spins must be >= 1");
  Encoding e;
  e.n_spins = n_spins;
  e.label = "binary";
  const int d = 1 << n_spins;
  e.level_to_basis.resize(d);
  for (int k = 0; k < d; ++k) {
    // bit i of k (spin i+1, LSB first) lands in tensor slot i+1 (MSB first),
    // so the basis index is the bit reversal of k.
    int rev = 0;
    for (int i = 0; i < n_spins; ++i)
      if (k & (1 << i)) rev |= 1 << (n_spins - 1 - i);
    e.level_to_basis[k] = rev;
  }
  e.validate();
  return e;
}

StateVector pushforward_state(const StateVector& s, const Encoding& e) {
  if (s.dim() != e.dim())
    throw std::invalid_argument("pushforward_state: dimension mismatch");
  ComplexVector out(e.dim());
  for (int n = 0; n < e.dim(); ++n)
    out[e.basis_index(n)] = s.amplitudes()[n];
  return StateVector(std::move(out));
}

DensityMatrix pushforward_state(const DensityMatrix& s, const Encoding& e) {
  if (s.dim() != e.dim())
    throw std::invalid_argument("pushforward_state: dimension mismatch");
  ComplexMatrix out(e.dim(), e.dim());
  for (int n = 0; n < e.dim(); ++n)
    for (int m = 0; m < e.dim(); ++m)
      out(e.basis_index(n), e.basis_index(m)) = s.matrix()(n, m);
  return s.is_deviation() ? DensityMatrix::deviation(std::move(out))
                          : DensityMatrix::normalized(std::move(out));
}

StateVector pullback_state(const StateVector& p, const Encoding& e) {
  if (p.dim() != e.dim())
    throw std::invalid_argument("pullback_state: dimension mismatch");
  ComplexVector out(e.dim());
  for (int n = 0; n < e.dim(); ++n)
    out[n] = p.amplitudes()[e.basis_index(n)];
  return StateVector(std::move(out));
}

DensityMatrix pullback_state(const DensityMatrix& p, const Encoding& e) {
  if (p.dim() != e.dim())
    throw std::invalid_argument("pullback_state: dimension mismatch");
  ComplexMatrix out(e.dim(), e.dim());
  for (int n = 0; n < e.dim(); ++n)
    for (int m = 0; m < e.dim(); ++m)
      out(n, m) = p.matrix()(e.basis_index(n), e.basis_index(m));
  return p.is_deviation() ? DensityMatrix::deviation(std::move(out))
                          : DensityMatrix::normalized(std::move(out));
}

ComplexMatrix average_hamiltonian(const ComplexMatrix& h_s, const Encoding& e) {
  if (h_s.rows() != e.dim() || h_s.cols() != e.dim())
    throw std::invalid_argument("average_hamiltonian: dimension mismatch");
  ComplexMatrix out(e.dim(), e.dim());
  for (int n = 0; n < e.dim(); ++n)
    for (int m = 0; m < e.dim(); ++m)
      out(e.basis_index(n), e.basis_index(m)) = h_s(n, m);
  return out;
}

ComplexMatrix pullback_operator(const ComplexMatrix& h_p, const Encoding& e) {
  if (h_p.rows() != e.dim() || h_p.cols() != e.dim())
    throw std::invalid_argument("pullback_operator: dimension mismatch");
  ComplexMatrix out(e.dim(), e.dim());
  for (int n = 0; n < e.dim(); ++n)
    for (int m = 0; m < e.dim(); ++m)
      out(n, m) = h_p(e.basis_index(n), e.basis_index(m));
  return out;
}

ComplexMatrix qho_closed_form(double omega) {
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  const ComplexMatrix sz1 = pauli_operator(Pauli::z, 0, 2);
  const ComplexMatrix sz2 = pauli_operator(Pauli::z, 1, 2);
  return omega * (2.0 * id - sz1 * (id + 0.5 * sz2));
}

ComplexMatrix coupling_free_closed_form(int n_spins, double omega) {
  if (n_spins < 1)
    throw std::invalid_argument("coupling_free_closed_form: n_spins >= 1");
  const Eigen::Index d = Eigen::Index(1) << n_spins;
  ComplexMatrix weighted = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < n_spins; ++i)
    weighted += double(1 << i) * pauli_operator(Pauli::z, i, n_spins);
  return 0.5 * omega *
         (double(d) * ComplexMatrix::Identity(d, d) - weighted);
}

ComplexMatrix driven_aho_closed_form(double omega, double mu, double rabi) {
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  const ComplexMatrix sz1 = pauli_operator(Pauli::z, 0, 2);
  const ComplexMatrix sz2 = pauli_operator(Pauli::z, 1, 2);
  const ComplexMatrix sx2 = pauli_operator(Pauli::x, 1, 2);
  return omega * mu * sz2 - omega * (4.0 * mu + 1.0) * sz1 * (id + 0.5 * sz2) +
         0.25 * rabi * sx2 * (id + sz1);
}

double max_diff_mod_identity(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_diff_mod_identity: dimension mismatch");
  ComplexMatrix d = a - b;
  Complex shift = d.trace() / double(d.rows());
  d -= shift * ComplexMatrix::Identity(d.rows(), d.cols());
  return max_abs(d);
}

}  // namespace spinosc
