#include "spinosc/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace spinosc {

namespace {
const Complex kI(0.0, 1.0);
}

double max_abs(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: dimension mismatch");
  return max_abs(a - b);
}

double hermiticity_defect(const ComplexMatrix& m) {
  return max_abs(m - m.adjoint().eval());
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && hermiticity_defect(m) <= tol;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      c.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return c;
}

UnitaryPropagator::UnitaryPropagator(ComplexMatrix u) : u_(std::move(u)) {
  if (u_.rows() != u_.cols())
    throw std::invalid_argument("UnitaryPropagator: matrix not square");
  ComplexMatrix gram = u_.adjoint() * u_;
  double defect =
      max_abs(gram - ComplexMatrix::Identity(u_.rows(), u_.cols()));
  if (defect > kUnitaryTol)
    throw std::invalid_argument(
        "UnitaryPropagator: not unitary, ||U^H U - I||_max = " +
        std::to_string(defect));
}

UnitaryPropagator expm_hermitian_generator(const ComplexMatrix& h, double t) {
  if (h.rows() != h.cols())
    throw std::invalid_argument("expm_hermitian_generator: matrix not square");
  double defect = hermiticity_defect(h);
  if (defect > kHermitianTol)
    throw std::invalid_argument(
        "expm_hermitian_generator: generator not Hermitian, defect = " +
        std::to_string(defect));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("expm_hermitian_generator: eigensolver failed");
  ComplexVector phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k)
    phases[k] = std::exp(-kI * es.eigenvalues()[k] * t);
  ComplexMatrix u = es.eigenvectors() * phases.asDiagonal() *
                    es.eigenvectors().adjoint();
  return UnitaryPropagator(std::move(u));
}

StateVector::StateVector(ComplexVector amplitudes) : a_(std::move(amplitudes)) {
  if (a_.size() == 0)
    throw std::invalid_argument("StateVector: empty amplitude vector");
  if (std::abs(a_.norm() - 1.0) > kStateTol)
    throw std::invalid_argument("StateVector: not normalised");
}

StateVector StateVector::normalized(const ComplexVector& amplitudes) {
  double n = amplitudes.norm();
  if (n <= 0.0)
    throw std::invalid_argument("StateVector: cannot normalise zero vector");
  return StateVector(amplitudes / n);
}

DensityMatrix::DensityMatrix(ComplexMatrix m, bool deviation)
    : m_(std::move(m)), deviation_(deviation) {
  if (m_.rows() != m_.cols())
    throw std::invalid_argument("DensityMatrix: matrix not square");
  double defect = hermiticity_defect(m_);
  if (defect > kStateTol)
    throw std::invalid_argument("DensityMatrix: not Hermitian, defect = " +
                                std::to_string(defect));
  if (!deviation_ && std::abs(m_.trace().real() - 1.0) > kStateTol)
    throw std::invalid_argument("DensityMatrix: trace != 1 for normalised state");
}

DensityMatrix DensityMatrix::normalized(ComplexMatrix m) {
  return DensityMatrix(std::move(m), false);
}

DensityMatrix DensityMatrix::deviation(ComplexMatrix m) {
  return DensityMatrix(std::move(m), true);
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  ComplexMatrix m = psi.amplitudes() * psi.amplitudes().adjoint();
  return DensityMatrix(std::move(m), false);
}

PhaseDistance phase_invariant_distance(const ComplexMatrix& u1,
                                       const ComplexMatrix& u2) {
  if (u1.rows() != u2.rows() || u1.cols() != u2.cols())
    throw std::invalid_argument("phase_invariant_distance: dimension mismatch");
  PhaseDistance out;
  Complex tr = (u2.adjoint() * u1).trace();
  if (std::abs(tr) > 1e-10) {
    out.theta = std::arg(tr);
    out.value = max_abs(u1 - std::exp(kI * out.theta) * u2);
    return out;
  }
  // Degenerate alignment (orthogonal propagators): fall back to a grid scan.
  out.grid_fallback = true;
  out.value = std::numeric_limits<double>::infinity();
  constexpr int kSteps = 3600;
  for (int k = 0; k < kSteps; ++k) {
    double theta = kTwoPi * k / kSteps;
    double d = max_abs(u1 - std::exp(kI * theta) * u2);
    if (d < out.value) {
      out.value = d;
      out.theta = theta;
    }
  }
  return out;
}

PhaseDistance phase_invariant_distance(const UnitaryPropagator& u1,
                                       const UnitaryPropagator& u2) {
  return phase_invariant_distance(u1.matrix(), u2.matrix());
}

}  // namespace spinosc
