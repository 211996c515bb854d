#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>
#include <random>

#include "spinosc/spin_system.hpp"

using namespace spinosc;

namespace {

const Complex I1(0.0, 1.0);
const double kDelta = kTwoPi * 226.0;
const double kJ = 5.7;

SpinSystemParams canonical() {
  return SpinSystemParams::two_spin(kDelta, 0.0, kJ);
}

DensityMatrix random_state(std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  ComplexVector v(4);
  for (int k = 0; k < 4; ++k) v[k] = Complex(dist(rng), dist(rng));
  return DensityMatrix::pure(StateVector::normalized(v));
}

std::vector<double> sorted_eigs(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  std::vector<double> e(es.eigenvalues().data(),
                        es.eigenvalues().data() + es.eigenvalues().size());
  return e;  // already ascending
}

}  // namespace

TEST_CASE("sigma_z on spin 1 of 2 is diag(1,1,-1,-1)") {
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.diagonal() << 1, 1, -1, -1;
  CHECK(max_abs_diff(pauli_operator(Pauli::z, 0, 2), expected) == 0.0);
}

TEST_CASE("embedded sigma_x squares to the identity") {
  ComplexMatrix sx2 = pauli_operator(Pauli::x, 1, 2);
  CHECK(max_abs_diff(sx2 * sx2, ComplexMatrix::Identity(4, 4)) == 0.0);
}

TEST_CASE("product of the two sigma_z operators") {
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.diagonal() << 1, -1, -1, 1;
  CHECK(max_abs_diff(pauli_operator(Pauli::z, 0, 2) * pauli_operator(Pauli::z, 1, 2),
                     expected) == 0.0);
}

TEST_CASE("pauli_operator rejects out-of-range spins") {
  CHECK_THROWS_AS(pauli_operator(Pauli::x, 2, 2), std::out_of_range);
}

TEST_CASE("natural Hamiltonian entries for the canonical parameters") {
  // Offset spin carries the full shift difference; receiver spin on
  // resonance. Diagonal entries are (1/2)(z1 dw + z1 z2 pi J).
  SpinSystemParams p = canonical();
  ComplexMatrix h = natural_hamiltonian(p);
  const double pj = kPi * kJ;
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.diagonal() << 0.5 * (kDelta + pj), 0.5 * (kDelta - pj),
      0.5 * (-kDelta - pj), 0.5 * (-kDelta + pj);
  CHECK(max_abs_diff(h, expected) < 1e-12);
}

TEST_CASE("natural Hamiltonian vanishes without offsets or coupling") {
  SpinSystemParams p = SpinSystemParams::two_spin(0.0, 0.0, 0.0);
  CHECK(max_abs(natural_hamiltonian(p)) == 0.0);
}

TEST_CASE("single offset on spin 2 yields (delta/2) diag(1,-1,1,-1)") {
  const double delta = 17.0;
  SpinSystemParams p = SpinSystemParams::two_spin(0.0, delta, 0.0);
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.diagonal() << 0.5 * delta, -0.5 * delta, 0.5 * delta, -0.5 * delta;
  CHECK(max_abs_diff(natural_hamiltonian(p), expected) < 1e-15);
}

TEST_CASE("natural Hamiltonian commutes with every sigma_z") {
  SpinSystemParams p = canonical();
  ComplexMatrix h = natural_hamiltonian(p);
  for (int s = 0; s < 2; ++s) {
    ComplexMatrix sz = pauli_operator(Pauli::z, s, 2);
    CHECK(max_abs(h * sz - sz * h) < 1e-14);
  }
}

TEST_CASE("zero flip angle leaves the state unchanged") {
  std::mt19937 rng(1);
  DensityMatrix rho = random_state(rng);
  PulseEvent p{0.0, PulseAxis::plus_y, {0, 1}};
  CHECK(max_abs_diff(apply_pulse(rho, p, canonical()).matrix(), rho.matrix()) <
        1e-14);
}

TEST_CASE("a double pi pulse is the identity on density matrices") {
  std::mt19937 rng(2);
  DensityMatrix rho = random_state(rng);
  PulseEvent p{kPi, PulseAxis::plus_y, {0, 1}};
  SpinSystemParams params = canonical();
  DensityMatrix twice = apply_pulse(apply_pulse(rho, p, params), p, params);
  CHECK(max_abs_diff(twice.matrix(), rho.matrix()) < 1e-13);
}

TEST_CASE("half-pi read on the uu state opens the spin-1 coherence") {
  // Independent route: R acts only on the leading slot, so the rotated
  // state is cos|uu> + sin|du> and the density matrix has the four
  // quarter-weight entries connecting indices 0 and 2.
  SpinSystemParams params = canonical();
  ComplexVector up(4);
  up << 1, 0, 0, 0;
  DensityMatrix rho = DensityMatrix::pure(StateVector(up));
  PulseEvent p{kPi / 2.0, PulseAxis::plus_y, {0}};
  ComplexMatrix got = apply_pulse(rho, p, params).matrix();
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = expected(0, 2) = expected(2, 0) = expected(2, 2) = 0.5;
  CHECK(max_abs_diff(got, expected) < 1e-14);
}

TEST_CASE("pulses preserve trace, hermiticity and the eigenvalue multiset") {
  std::mt19937 rng(3);
  SpinSystemParams params = canonical();
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int trial = 0; trial < 10; ++trial) {
    DensityMatrix rho = random_state(rng);
    PulseEvent p{angle(rng),
                 trial % 2 ? PulseAxis::minus_x : PulseAxis::plus_y,
                 trial % 3 ? std::vector<int>{0, 1} : std::vector<int>{1}};
    DensityMatrix out = apply_pulse(rho, p, params);
    CHECK(std::abs(out.trace_real() - 1.0) < 1e-12);
    CHECK(hermiticity_defect(out.matrix()) < 1e-12);
    auto ea = sorted_eigs(rho.matrix());
    auto eb = sorted_eigs(out.matrix());
    for (std::size_t k = 0; k < ea.size(); ++k)
      CHECK(std::abs(ea[k] - eb[k]) < 1e-10);
  }
}

TEST_CASE("zero-duration delays do nothing") {
  std::mt19937 rng(4);
  DensityMatrix rho = random_state(rng);
  CHECK(max_abs_diff(evolve_delay(rho, 0.0, canonical(), false).matrix(),
                     rho.matrix()) < 1e-15);
}

TEST_CASE("population-only states are fixed points of free evolution") {
  ComplexMatrix diag = ComplexMatrix::Zero(4, 4);
  diag.diagonal() << 0.4, 0.3, 0.2, 0.1;
  DensityMatrix rho = DensityMatrix::normalized(diag);
  CHECK(max_abs_diff(evolve_delay(rho, 0.123, canonical(), false).matrix(),
                     diag) < 1e-13);
}

TEST_CASE("the outer coherence of uu + i dd advances at the spin-2 offset") {
  const double delta = 31.0, dt = 0.017;
  SpinSystemParams p = SpinSystemParams::two_spin(0.0, delta, 0.0);
  ComplexVector v(4);
  v << 1.0 / std::sqrt(2.0), 0, 0, I1 / std::sqrt(2.0);
  DensityMatrix rho = DensityMatrix::pure(StateVector(v));
  DensityMatrix out = evolve_delay(rho, dt, p, false);
  Complex expected = rho.matrix()(0, 3) * std::exp(-I1 * delta * dt);
  CHECK(std::abs(out.matrix()(0, 3) - expected) < 1e-14);
}

TEST_CASE("free evolution preserves trace and purity; relaxation only loses purity") {
  std::mt19937 rng(5);
  SpinSystemParams p = canonical();
  p.t1_seconds = 2.0;
  p.t2_seconds = 1.0;
  DensityMatrix rho = random_state(rng);
  DensityMatrix coherent = evolve_delay(rho, 0.02, p, false);
  double purity0 = (rho.matrix() * rho.matrix()).trace().real();
  CHECK(std::abs(coherent.trace_real() - 1.0) < 1e-12);
  CHECK(std::abs((coherent.matrix() * coherent.matrix()).trace().real() -
                 purity0) < 1e-12);
  DensityMatrix damped = evolve_delay(rho, 0.02, p, true);
  CHECK(std::abs(damped.trace_real() - 1.0) < 1e-12);
  CHECK((damped.matrix() * damped.matrix()).trace().real() <= purity0 + 1e-12);
}

TEST_CASE("relaxation without configured times is an error") {
  std::mt19937 rng(6);
  DensityMatrix rho = random_state(rng);
  CHECK_THROWS_AS(evolve_delay(rho, 0.01, canonical(), true),
                  std::invalid_argument);
}

TEST_CASE("gradient crush zeroes coherences, is idempotent, keeps the trace") {
  std::mt19937 rng(7);
  DensityMatrix rho = random_state(rng);
  DensityMatrix crushed = gradient_crush(rho);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) CHECK(std::abs(crushed.matrix()(i, j)) == 0.0);
  CHECK(max_abs_diff(gradient_crush(crushed).matrix(), crushed.matrix()) == 0.0);
  CHECK(crushed.trace_real() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("crushing the uu + i dd projector leaves its diagonal") {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = m(3, 3) = 0.5;
  m(0, 3) = -0.5 * I1;
  m(3, 0) = 0.5 * I1;
  DensityMatrix crushed = gradient_crush(DensityMatrix::normalized(m));
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = expected(3, 3) = 0.5;
  CHECK(max_abs_diff(crushed.matrix(), expected) == 0.0);
}

TEST_CASE("thermal deviation is the normalised sum of sigma_z terms") {
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.diagonal() << 1, 0, 0, -1;
  DensityMatrix dev = thermal_deviation(canonical());
  CHECK(dev.is_deviation());
  CHECK(max_abs_diff(dev.matrix(), expected) == 0.0);
  CHECK(dev.matrix().trace() == Complex(0.0, 0.0));

  SpinSystemParams one;
  one.n_spins = 1;
  one.resonance_frequencies = {0.0};
  one.j_couplings = Eigen::MatrixXd::Zero(1, 1);
  ComplexMatrix single = thermal_deviation(one).matrix();
  CHECK(single(0, 0) == Complex(1.0, 0.0));
  CHECK(single(1, 1) == Complex(-1.0, 0.0));
}

TEST_CASE("a pi pulse about y on all spins flips every sigma_z") {
  PulseEvent p{kPi, PulseAxis::plus_y, {0, 1}};
  ComplexMatrix r = pulse_propagator(p, 2);
  for (int s = 0; s < 2; ++s) {
    ComplexMatrix sz = pauli_operator(Pauli::z, s, 2);
    CHECK(max_abs_diff(r * sz * r.adjoint(), ComplexMatrix(-sz)) < 1e-12);
  }
}

TEST_CASE("parameter validation catches inconsistent relaxation times") {
  SpinSystemParams p = canonical();
  p.t1_seconds = 1.0;
  p.t2_seconds = 3.0;  // T2 > 2 T1
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.t2_seconds = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("infinite relaxation times reduce to coherent evolution") {
  std::mt19937 rng(8);
  SpinSystemParams p = canonical();
  p.t1_seconds = std::numeric_limits<double>::infinity();
  p.t2_seconds = std::numeric_limits<double>::infinity();
  DensityMatrix rho = random_state(rng);
  CHECK(max_abs_diff(evolve_delay(rho, 0.05, p, true).matrix(),
                     evolve_delay(rho, 0.05, p, false).matrix()) < 1e-12);
}
