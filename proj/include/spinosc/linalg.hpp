#ifndef SPINOSC_LINALG_HPP
#define SPINOSC_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

// Dense complex linear algebra shared by every layer: tensor products,
// Hermitian matrix exponentials and the phase-invariant distance used to
// compare propagators. Dimensions stay small (<= 2^6), so everything is
// plain dense Eigen with no attempt at sparsity.

namespace spinosc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline constexpr double kUnitaryTol = 1e-12;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kStateTol = 1e-12;

// Largest |entry|.
double max_abs(const ComplexMatrix& m);

// max |a - b| entrywise; dimensions must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// ||m - m^dagger||_max
double hermiticity_defect(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);

// Standard tensor product, dims multiply.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Square complex matrix checked to satisfy U^dagger U = I within
// kUnitaryTol in max-entry norm at construction.
class UnitaryPropagator {
 public:
  explicit UnitaryPropagator(ComplexMatrix u);

  const ComplexMatrix& matrix() const { return u_; }
  Eigen::Index dim() const { return u_.rows(); }

  UnitaryPropagator adjoint() const { return UnitaryPropagator(u_.adjoint()); }

  friend UnitaryPropagator operator*(const UnitaryPropagator& a,
                                     const UnitaryPropagator& b) {
    return UnitaryPropagator(a.u_ * b.u_);
  }

 private:
  ComplexMatrix u_;
};

// exp(-i h t) for Hermitian h, computed by eigendecomposition (exact up to
// roundoff for these dimensions; no series truncation). Rejects
// non-Hermitian input with the measured defect in the message.
UnitaryPropagator expm_hermitian_generator(const ComplexMatrix& h, double t);

// Normalised complex state vector.
class StateVector {
 public:
  explicit StateVector(ComplexVector amplitudes);

  static StateVector normalized(const ComplexVector& amplitudes);

  const ComplexVector& amplitudes() const { return a_; }
  Eigen::Index dim() const { return a_.size(); }

 private:
  ComplexVector a_;
};

// Hermitian density matrix. Normalised states must have trace 1; deviation
// matrices (traceless parts of a pseudopure state) are flagged and exempt
// from the trace rule.
class DensityMatrix {
 public:
  static DensityMatrix normalized(ComplexMatrix m);
  static DensityMatrix deviation(ComplexMatrix m);
  static DensityMatrix pure(const StateVector& psi);

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  bool is_deviation() const { return deviation_; }
  double trace_real() const { return m_.trace().real(); }

 private:
  DensityMatrix(ComplexMatrix m, bool deviation);
  ComplexMatrix m_;
  bool deviation_;
};

struct PhaseDistance {
  double value = 0.0;
  double theta = 0.0;          // aligning phase actually used
  bool grid_fallback = false;  // trace alignment was degenerate
};

// min over real theta of ||u1 - e^{i theta} u2||_max. The aligning phase
// comes from trace(u2^dagger u1); when that trace vanishes the minimum is
// found by a fine grid search instead and the result is flagged.
PhaseDistance phase_invariant_distance(const UnitaryPropagator& u1,
                                       const UnitaryPropagator& u2);
PhaseDistance phase_invariant_distance(const ComplexMatrix& u1,
                                       const ComplexMatrix& u2);

}  // namespace spinosc

#endif
