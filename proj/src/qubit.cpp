#include "tpmlab/qubit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tpmlab {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

BlochVector::BlochVector(double x, double y, double z) : x(x), y(y), z(z) {
  require(finite(x) && finite(y) && finite(z), "BlochVector: components must be finite");
  const double norm = std::sqrt(x * x + y * y + z * z);
  // No silent renormalization: off-unit input is a caller bug.
  require(std::abs(norm - 1.0) <= kUnitNormTol, "BlochVector: components must have unit norm");
}

BlochVector BlochVector::from_angles(double theta, double phi) {
  require(finite(theta) && finite(phi), "BlochVector: angles must be finite");
  const double st = std::sin(theta);
  return BlochVector(st * std::cos(phi), st * std::sin(phi), std::cos(theta));
}

BlochVector bloch_from_angles(double theta, double phi) {
  return BlochVector::from_angles(theta, phi);
}

Operator2 Operator2::identity() { return {{complexd(1), complexd(0), complexd(0), complexd(1)}}; }
Operator2 Operator2::pauli_x() { return {{complexd(0), complexd(1), complexd(1), complexd(0)}}; }
Operator2 Operator2::pauli_y() {
  return {{complexd(0), complexd(0, -1), complexd(0, 1), complexd(0)}};
}
Operator2 Operator2::pauli_z() { return {{complexd(1), complexd(0), complexd(0), complexd(-1)}}; }

Operator2 Operator2::bloch_dot(const BlochVector& c) {
  // [ c_z        c_x - i c_y ]
  // [ c_x+i c_y  -c_z        ]
  return {{complexd(c.z), complexd(c.x, -c.y), complexd(c.x, c.y), complexd(-c.z)}};
}

Operator2 Operator2::adjoint() const {
  return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
}

Operator2 Operator2::operator+(const Operator2& o) const {
  return {{m[0] + o.m[0], m[1] + o.m[1], m[2] + o.m[2], m[3] + o.m[3]}};
}

Operator2 Operator2::operator-(const Operator2& o) const {
  return {{m[0] - o.m[0], m[1] - o.m[1], m[2] - o.m[2], m[3] - o.m[3]}};
}

Operator2 Operator2::operator*(const Operator2& o) const {
  return {{m[0] * o.m[0] + m[1] * o.m[2], m[0] * o.m[1] + m[1] * o.m[3],
           m[2] * o.m[0] + m[3] * o.m[2], m[2] * o.m[1] + m[3] * o.m[3]}};
}

Operator2 operator*(complexd s, const Operator2& a) {
  return {{s * a.m[0], s * a.m[1], s * a.m[2], s * a.m[3]}};
}

double max_abs_diff(const Operator2& a, const Operator2& b) {
  double d = 0;
  for (int i = 0; i < 4; ++i) d = std::max(d, std::abs(a.m[i] - b.m[i]));
  return d;
}

double real_trace_product(const Operator2& a, const Operator2& b) {
  // tr(AB) = sum_ij A_ij B_ji
  return (a.m[0] * b.m[0] + a.m[1] * b.m[2] + a.m[2] * b.m[1] + a.m[3] * b.m[3]).real();
}

DensityOperator::DensityOperator(const Operator2& matrix) : m_(matrix) {
  require(max_abs_diff(m_, m_.adjoint()) <= kOperatorTol, "DensityOperator: not Hermitian");
  require(std::abs(m_.trace() - complexd(1)) <= kOperatorTol, "DensityOperator: trace != 1");
  // Eigenvalues of (I + r.sigma)/2 are (1 +- |r|)/2; nonnegativity is |r| <= 1.
  const double rx = 2.0 * m_.m[1].real();
  const double ry = -2.0 * m_.m[1].imag();
  const double rz = (m_.m[0] - m_.m[3]).real();
  const double r = std::sqrt(rx * rx + ry * ry + rz * rz);
  require((1.0 - r) / 2.0 >= -kOperatorTol, "DensityOperator: negative eigenvalue");
}

DensityOperator DensityOperator::maximally_mixed() {
  return DensityOperator(complexd(0.5) * Operator2::identity());
}

DensityOperator DensityOperator::from_bloch(double rx, double ry, double rz) {
  Operator2 m{{complexd((1 + rz) / 2), complexd(rx / 2, -ry / 2), complexd(rx / 2, ry / 2),
               complexd((1 - rz) / 2)}};
  return DensityOperator(m);
}

Projector::Projector(const Operator2& matrix, const BlochVector& axis, int sign)
    : m_(matrix), axis_(axis), sign_(sign) {
  require(sign == 1 || sign == -1, "Projector: sign must be +1 or -1");
  const double s = sign;
  Operator2 expected{{complexd((1 + s * axis.z) / 2), complexd(s * axis.x / 2, -s * axis.y / 2),
                      complexd(s * axis.x / 2, s * axis.y / 2), complexd((1 - s * axis.z) / 2)}};
  require(max_abs_diff(m_, expected) <= kOperatorTol, "Projector: matrix != (I + sign s.sigma)/2");
  require(max_abs_diff(m_ * m_, m_) <= kOperatorTol, "Projector: not idempotent");
  require(std::abs(m_.trace() - complexd(1)) <= kOperatorTol, "Projector: trace != 1");
}

Projector bloch_to_projector(const BlochVector& s, int sign) {
  require(sign == 1 || sign == -1, "bloch_to_projector: sign must be +1 or -1");
  const double g = sign;
  Operator2 m{{complexd((1 + g * s.z) / 2), complexd(g * s.x / 2, -g * s.y / 2),
               complexd(g * s.x / 2, g * s.y / 2), complexd((1 - g * s.z) / 2)}};
  return Projector(m, s, sign);
}

Unitary::Unitary(const Operator2& matrix) : m_(matrix) {
  require(max_abs_diff(m_ * m_.adjoint(), Operator2::identity()) <= kOperatorTol,
          "Unitary: U Udag != I");
}

Unitary Unitary::identity() { return Unitary(Operator2::identity()); }

Unitary Unitary::adjoint() const { return Unitary(m_.adjoint()); }

TwoLevelHamiltonian::TwoLevelHamiltonian(double energy, const BlochVector& axis)
    : energy(energy), axis(axis) {
  require(finite(energy) && energy > 0, "TwoLevelHamiltonian: energy must be positive");
}

Operator2 TwoLevelHamiltonian::matrix() const {
  return complexd(energy) * Operator2::bloch_dot(axis);
}

Projector TwoLevelHamiltonian::projector(int sign) const { return bloch_to_projector(axis, sign); }

ThermalState::ThermalState(const TwoLevelHamiltonian& h, double beta) : hamiltonian(h), beta(beta) {
  require(finite(beta) && beta >= 0, "ThermalState: beta must be finite and >= 0");
}

double ThermalState::log_partition_function() const {
  const double be = beta * hamiltonian.energy;
  return be + std::log1p(std::exp(-2.0 * be));
}

double ThermalState::partition_function() const { return std::exp(log_partition_function()); }

double ThermalState::weight(int sign) const {
  require(sign == 1 || sign == -1, "ThermalState: sign must be +1 or -1");
  const double be = beta * hamiltonian.energy;
  // e^{-+ beta E}/Z = 1/(1 + e^{+-2 beta E})
  return 1.0 / (1.0 + std::exp(2.0 * sign * be));
}

DensityOperator ThermalState::density() const {
  const Projector plus = hamiltonian.projector(+1);
  const Projector minus = hamiltonian.projector(-1);
  Operator2 m = complexd(weight(+1)) * plus.matrix() + complexd(weight(-1)) * minus.matrix();
  return DensityOperator(m);
}

double ThermalState::free_energy() const {
  require(beta > 0, "ThermalState: free energy needs beta > 0");
  return -log_partition_function() / beta;
}

DensityOperator thermal_density(const TwoLevelHamiltonian& h, double beta) {
  return ThermalState(h, beta).density();
}

Unitary unitary_from_hamiltonian(const TwoLevelHamiltonian& h, double t) {
  require(std::isfinite(t), "unitary_from_hamiltonian: time must be finite");
  const double a = h.energy * t;
  const double c = std::cos(a);
  const complexd is(0, std::sin(a));
  Operator2 m = complexd(c) * Operator2::identity() - is * Operator2::bloch_dot(h.axis);
  return Unitary(m);
}

double projector_overlap(const Projector& p, const Projector& q) {
  return (1.0 + p.sign() * q.sign() * p.axis().dot(q.axis())) / 2.0;
}

}  // namespace tpmlab
