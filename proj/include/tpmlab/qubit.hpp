#pragma once

// Closed-form single-qubit algebra in the Bloch representation.
// Everything is built from Pauli expansions; no eigensolvers anywhere.

#include <array>
#include <complex>
#include <cstdlib>

namespace tpmlab {

// Tolerances used by the validating constructors.
inline constexpr double kOperatorTol = 1e-10;  // operator identities (entrywise)
inline constexpr double kScalarTol = 1e-12;    // scalar closed-form comparisons
inline constexpr double kUnitNormTol = 1e-6;   // |s|=1 check on raw components

using complexd = std::complex<double>;

/// Real unit 3-vector; defines observables, Hamiltonian axes and projectors.
struct BlochVector {
  double x, y, z;

  // Rejects non-unit components; use from_angles for the always-valid path.
  BlochVector(double x, double y, double z);

  /// (sin t cos p, sin t sin p, cos t); unit for any finite angles.
  static BlochVector from_angles(double theta, double phi);

  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
  BlochVector operator-() const { return BlochVector(-x, -y, -z); }
};

inline BlochVector bloch_x() { return {1, 0, 0}; }
inline BlochVector bloch_y() { return {0, 1, 0}; }
inline BlochVector bloch_z() { return {0, 0, 1}; }

/// 2x2 complex matrix, row-major. No intrinsic constraints.
struct Operator2 {
  std::array<complexd, 4> m{};  // [ m00 m01 ; m10 m11 ]

  static Operator2 identity();
  static Operator2 pauli_x();
  static Operator2 pauli_y();
  static Operator2 pauli_z();
  /// c . sigma = c_x sx + c_y sy + c_z sz
  static Operator2 bloch_dot(const BlochVector& c);

  complexd trace() const { return m[0] + m[3]; }
  Operator2 adjoint() const;

  Operator2 operator+(const Operator2& o) const;
  Operator2 operator-(const Operator2& o) const;
  Operator2 operator*(const Operator2& o) const;
  friend Operator2 operator*(complexd s, const Operator2& a);
};

/// max entrywise |a - b|
double max_abs_diff(const Operator2& a, const Operator2& b);
/// Re tr(a b), exact for products of Hermitian operators
double real_trace_product(const Operator2& a, const Operator2& b);

/// Positive unit-trace Hermitian operator (validated on construction).
class DensityOperator {
 public:
  explicit DensityOperator(const Operator2& matrix);

  static DensityOperator maximally_mixed();
  /// (I + r.sigma)/2 for |r| <= 1; pure when |r| = 1.
  static DensityOperator from_bloch(double rx, double ry, double rz);

  const Operator2& matrix() const { return m_; }

 private:
  Operator2 m_;
};

/// Rank-one projector (I + sign s.sigma)/2 with its defining axis and sign.
class Projector {
 public:
  Projector(const Operator2& matrix, const BlochVector& axis, int sign);

  const Operator2& matrix() const { return m_; }
  const BlochVector& axis() const { return axis_; }
  int sign() const { return sign_; }

 private:
  Operator2 m_;
  BlochVector axis_;
  int sign_;
};

/// Unitary operator (U Udag = I validated on construction).
class Unitary {
 public:
  explicit Unitary(const Operator2& matrix);

  static Unitary identity();
  Unitary adjoint() const;

  const Operator2& matrix() const { return m_; }

 private:
  Operator2 m_;
};

/// H = energy * (axis.sigma), eigenvalues exactly +-energy.
struct TwoLevelHamiltonian {
  double energy;  // > 0
  BlochVector axis;

  TwoLevelHamiltonian(double energy, const BlochVector& axis);

  Operator2 matrix() const;
  Projector projector(int sign) const;
};

/// Gibbs state exp(-beta H)/Z of a two-level Hamiltonian; Z = 2 cosh(beta E).
struct ThermalState {
  TwoLevelHamiltonian hamiltonian;
  double beta;  // >= 0, finite

  ThermalState(const TwoLevelHamiltonian& h, double beta);

  /// ln Z = beta E + ln(1 + exp(-2 beta E)); overflow-free.
  double log_partition_function() const;
  double partition_function() const;
  /// p_+ = e^{-beta E}/Z, p_- = e^{+beta E}/Z via the logistic form.
  double weight(int sign) const;
  DensityOperator density() const;
  /// F = -(1/beta) ln Z; requires beta > 0.
  double free_energy() const;
};

// ---- operations ----

BlochVector bloch_from_angles(double theta, double phi);

/// P = (I + sign s.sigma)/2; sign must be +1 or -1.
Projector bloch_to_projector(const BlochVector& s, int sign);

DensityOperator thermal_density(const TwoLevelHamiltonian& h, double beta);

/// U = exp(-i H t) = cos(E t) I - i sin(E t) (axis.sigma), closed form.
Unitary unitary_from_hamiltonian(const TwoLevelHamiltonian& h, double t);

/// tr(P Q) = (1 + sign_p sign_q axis_p.axis_q)/2, in [0, 1].
double projector_overlap(const Projector& p, const Projector& q);

}  // namespace tpmlab
