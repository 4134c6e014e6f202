#pragma once

// Sequential (two-time) measurement correlations on one qubit and the
// CHSH-type combinations built from them. The two-time correlation equals
// the dot product of the two measurement axes for any input state.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tpmlab/qubit.hpp"

namespace tpmlab {

struct TwoTimeSetting {
  BlochVector first;
  BlochVector second;
  DensityOperator state;
};

/// Probabilities of the four sequential outcome pairs,
/// q[a][b] = tr{ P^b P^a rho P^a }, indexed 0 = plus.
std::array<std::array<double, 2>, 2> sequential_probabilities(const TwoTimeSetting& setting);

/// <AB> = sum_{a,b} a b q[a][b]; equals first.second for any state.
double two_time_correlation(const TwoTimeSetting& setting);
double two_time_correlation(const BlochVector& first, const BlochVector& second,
                            const DensityOperator& state);

struct CHSHSettings {
  BlochVector a1, a2, b1, b2;
};

/// <A1B1> + <A2B1> + <A1B2> - <A2B2> from four sequential correlations.
double chsh_value(const DensityOperator& state, const CHSHSettings& s);

/// The same combination in closed form: a1.b1 + a2.b1 + a1.b2 - a2.b2.
double chsh_bloch_form(const CHSHSettings& s);

/// Settings reaching the quantum maximum 2 sqrt 2:
/// a1 = z, a2 = x, b1 = (z+x)/sqrt2, b2 = (z-x)/sqrt2.
CHSHSettings tsirelson_settings();

/// Predetermined outcome assignment; entries are +1 or -1.
struct ClassicalStrategy {
  int a1, a2, b1, b2;

  ClassicalStrategy(int a1, int a2, int b1, int b2);
};

double classical_strategy_value(const ClassicalStrategy& s);
std::array<ClassicalStrategy, 16> all_classical_strategies();

struct ClassicalBound {
  double max_value;  // exactly 2
  ClassicalStrategy argmax;
};

/// Exhaustive enumeration of the 16 deterministic strategies.
ClassicalBound classical_chsh_bound();

enum class BellConvention { plus, minus };

struct ThreeSettingResult {
  double lhs;
  double rhs;
  bool violated;  // lhs < rhs - 1e-12
};

/// 1 -+ <B1B2> vs |<AB1> - <AB2>|, all correlations evaluated sequentially
/// on the given state. The minus convention is the same-system sequential
/// form; plus is the anticorrelation form.
ThreeSettingResult three_setting_bell(const DensityOperator& state, const BlochVector& a,
                                      const BlochVector& b1, const BlochVector& b2,
                                      BellConvention convention);

// ---- derivative-free maximization over angle parameters ----

using AngleObjective = std::function<double(std::span<const double>)>;

struct AngleOptimum {
  std::vector<double> angles;
  double value;
};

/// Coordinate-wise refinement: per coordinate, a 16-point bracketing scan
/// over one period followed by golden-section search; sweeps repeat until
/// the best value improves by less than `sweep_tolerance`.
AngleOptimum refine_coordinates(const AngleObjective& objective, std::vector<double> start,
                                double sweep_tolerance = 1e-12, int max_sweeps = 200);

/// Restarted maximization from uniformly random angle vectors; restarts are
/// merged by best value, ties keeping the earliest restart.
AngleOptimum maximize_over_angles(const AngleObjective& objective, int dimension, int restarts,
                                  std::uint64_t seed, double sweep_tolerance = 1e-12);

/// (theta, phi) pairs -> four axes, in a1 a2 b1 b2 order.
CHSHSettings chsh_settings_from_angles(std::span<const double> angles);

struct TsirelsonResult {
  CHSHSettings settings;
  double value;
};

/// Maximizes chsh_value over the four axes (eight angles).
TsirelsonResult tsirelson_optimize(int restarts, std::uint64_t seed);
/// Refinement from a caller-chosen starting configuration.
TsirelsonResult tsirelson_refine(const CHSHSettings& start);

}  // namespace tpmlab
