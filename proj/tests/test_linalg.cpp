#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "spinosc/linalg.hpp"
#include "spinosc/spin_system.hpp"

using namespace spinosc;

namespace {

const Complex I1(0.0, 1.0);

ComplexMatrix random_hermitian(int dim, std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  ComplexMatrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(dist(rng), dist(rng));
  return 0.5 * (a + a.adjoint().eval());
}

ComplexMatrix random_matrix(int dim, std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  ComplexMatrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(dist(rng), dist(rng));
  return a;
}

}  // namespace

TEST_CASE("kron of identities is the identity") {
  ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  CHECK(max_abs_diff(kron(id2, id2), ComplexMatrix::Identity(4, 4)) == 0.0);
}

TEST_CASE("kron places sigma_z in the leading slot") {
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.diagonal() << 1, 1, -1, -1;
  CHECK(max_abs_diff(kron(pauli_matrix(Pauli::z), ComplexMatrix::Identity(2, 2)),
                     expected) == 0.0);
}

TEST_CASE("kron of sigma_x with itself squares to the identity") {
  ComplexMatrix xx = kron(pauli_matrix(Pauli::x), pauli_matrix(Pauli::x));
  CHECK(max_abs_diff(xx * xx, ComplexMatrix::Identity(4, 4)) == 0.0);
}

TEST_CASE("kron is associative on random triples") {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix a = random_matrix(2, rng);
    ComplexMatrix b = random_matrix(2, rng);
    ComplexMatrix c = random_matrix(2, rng);
    CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-13);
  }
}

TEST_CASE("exponential of the zero generator is the identity") {
  ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  CHECK(max_abs_diff(expm_hermitian_generator(h, 3.7).matrix(),
                     ComplexMatrix::Identity(4, 4)) < 1e-15);
}

TEST_CASE("diagonal generators give elementwise phases") {
  ComplexMatrix u =
      expm_hermitian_generator(pauli_matrix(Pauli::z), kPi / 2).matrix();
  ComplexMatrix expected(2, 2);
  expected << std::exp(-I1 * kPi / 2.0), 0, 0, std::exp(I1 * kPi / 2.0);
  CHECK(max_abs_diff(u, expected) < 1e-15);
}

TEST_CASE("sigma_x at a quarter turn gives -i sigma_x") {
  ComplexMatrix u =
      expm_hermitian_generator(pauli_matrix(Pauli::x), kPi / 2).matrix();
  CHECK(max_abs_diff(u, -I1 * pauli_matrix(Pauli::x)) < 1e-15);
}

TEST_CASE("exponential rejects a non-Hermitian generator") {
  ComplexMatrix h(2, 2);
  h << 0, 1, 0, 0;
  CHECK_THROWS_AS(expm_hermitian_generator(h, 1.0), std::invalid_argument);
}

TEST_CASE("forward and backward evolution cancel") {
  std::mt19937 rng(7);
  for (int dim : {4, 8}) {
    ComplexMatrix h = random_hermitian(dim, rng);
    ComplexMatrix prod = expm_hermitian_generator(h, 0.83).matrix() *
                         expm_hermitian_generator(h, -0.83).matrix();
    CHECK(max_abs_diff(prod, ComplexMatrix::Identity(dim, dim)) < 1e-12);
  }
}

TEST_CASE("same-generator exponentials compose additively") {
  std::mt19937 rng(11);
  ComplexMatrix h = random_hermitian(4, rng);
  ComplexMatrix lhs = expm_hermitian_generator(h, 0.4).matrix() *
                      expm_hermitian_generator(h, 1.9).matrix();
  CHECK(max_abs_diff(lhs, expm_hermitian_generator(h, 2.3).matrix()) < 1e-11);
}

TEST_CASE("unitary wrapper rejects non-unitary matrices") {
  ComplexMatrix m = 2.0 * ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(UnitaryPropagator{m}, std::invalid_argument);
}

TEST_CASE("phase distance vanishes for equal and phase-shifted inputs") {
  std::mt19937 rng(3);
  UnitaryPropagator u = expm_hermitian_generator(random_hermitian(4, rng), 1.0);
  CHECK(phase_invariant_distance(u, u).value < 1e-14);
  UnitaryPropagator shifted(std::exp(I1 * kPi / 7.0) * u.matrix());
  CHECK(phase_invariant_distance(u, shifted).value < 1e-12);
}

TEST_CASE("orthogonal pair falls back to the grid and keeps distance >= 1") {
  UnitaryPropagator id{ComplexMatrix::Identity(2, 2)};
  UnitaryPropagator x{pauli_matrix(Pauli::x)};
  PhaseDistance d = phase_invariant_distance(id, x);
  CHECK(d.grid_fallback);
  CHECK(d.value >= 1.0 - 1e-12);
}

TEST_CASE("phase distance is symmetric") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    UnitaryPropagator a = expm_hermitian_generator(random_hermitian(4, rng), 0.6);
    UnitaryPropagator b = expm_hermitian_generator(random_hermitian(4, rng), 1.3);
    CHECK(std::abs(phase_invariant_distance(a, b).value -
                   phase_invariant_distance(b, a).value) < 1e-12);
  }
}

TEST_CASE("state vectors must be normalised") {
  ComplexVector v(2);
  v << 1.0, 1.0;
  CHECK_THROWS_AS(StateVector{v}, std::invalid_argument);
  CHECK(StateVector::normalized(v).amplitudes().norm() == doctest::Approx(1.0));
}

TEST_CASE("density matrices enforce hermiticity and trace") {
  ComplexMatrix bad(2, 2);
  bad << 1, 1, 0, 0;
  CHECK_THROWS_AS(DensityMatrix::normalized(bad), std::invalid_argument);
  ComplexMatrix herm = 0.7 * ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix::normalized(herm), std::invalid_argument);
  CHECK(DensityMatrix::deviation(herm).is_deviation());
}
