#pragma once

// Shared helpers for the test binaries: seeded random inputs and scalar
// oracles computed without any of the library's matrix algebra.

#include <array>
#include <cmath>

#include "tpmlab/qubit.hpp"
#include "tpmlab/rng.hpp"

namespace testsup {

inline constexpr double kPi = 3.14159265358979323846;

struct Rand {
  tpmlab::Philox4x64 rng;

  explicit Rand(std::uint64_t seed) : rng(seed, 99) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * rng.next_double(); }

  tpmlab::BlochVector axis() {
    const double z = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * kPi);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return tpmlab::BlochVector(r * std::cos(phi), r * std::sin(phi), z);
  }

  tpmlab::DensityOperator state() {
    const tpmlab::BlochVector dir = axis();
    const double r = std::cbrt(rng.next_double());
    return tpmlab::DensityOperator::from_bloch(r * dir.x, r * dir.y, r * dir.z);
  }
};

struct Vec3 {
  double x, y, z;
};

inline Vec3 to_vec(const tpmlab::BlochVector& v) { return {v.x, v.y, v.z}; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// Rodrigues rotation of v about unit axis u by angle a.
inline Vec3 rotate(const Vec3& v, const Vec3& u, double a) {
  const double c = std::cos(a), s = std::sin(a);
  const Vec3 uxv = cross(u, v);
  const double ud = dot(u, v) * (1 - c);
  return {v.x * c + uxv.x * s + u.x * ud, v.y * c + uxv.y * s + u.y * ud,
          v.z * c + uxv.z * s + u.z * ud};
}

// e^{-sign beta E} / (2 cosh(beta E)) without matrices.
inline double thermal_weight(double energy, double beta, int sign) {
  return 1.0 / (1.0 + std::exp(2.0 * sign * beta * energy));
}

// Joint TPM table from the scalar formula p(n,m) = w_n (1 + n m c)/2, where
// c is the dot product of the (possibly rotated) initial axis with the
// final axis. Indexed [n][m], 0 = plus.
inline std::array<std::array<double, 2>, 2> joint_oracle(double ei, double beta, double c) {
  std::array<std::array<double, 2>, 2> t{};
  for (int n = 0; n < 2; ++n) {
    const int sn = n == 0 ? 1 : -1;
    const double wn = thermal_weight(ei, beta, sn);
    for (int m = 0; m < 2; ++m) {
      const int sm = m == 0 ? 1 : -1;
      t[n][m] = wn * (1.0 + sn * sm * c) / 2.0;
    }
  }
  return t;
}

// Brute-force <W^k> for the equal-spectra sudden quench: scalar sum over the
// four outcome pairs.
inline double moment_oracle(double energy, double beta, double c, int order) {
  const auto table = joint_oracle(energy, beta, c);
  double sum = 0;
  for (int n = 0; n < 2; ++n)
    for (int m = 0; m < 2; ++m) {
      const int sn = n == 0 ? 1 : -1;
      const int sm = m == 0 ? 1 : -1;
      sum += table[n][m] * std::pow(energy * sn - energy * sm, order);
    }
  return sum;
}

}  // namespace testsup
