#pragma once

// CHSH-weighted combinations of work moments over two initial and two final
// measurement settings, with their classical intervals and quantum extrema.
// Each pair (a_i, b_j) runs its own protocol: the system is prepared
// thermally in the basis of its initial axis, so the prepared state depends
// on which observable is measured first.

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tpmlab/qubit.hpp"

namespace tpmlab {

/// Two initial and two final axes with a single spectrum (+-energy) shared
/// by all four sub-protocols.
struct WorkBellSettings {
  BlochVector a1, a2, b1, b2;
  double energy;  // > 0
  double beta;    // >= 0, finite

  WorkBellSettings(const BlochVector& a1, const BlochVector& a2, const BlochVector& b1,
                   const BlochVector& b2, double energy, double beta);
};

struct MomentCombination {
  int order;
  double value;
  double chsh_bloch_term;  // a1.b1 + a1.b2 + a2.b1 - a2.b2, |.| <= 2 sqrt 2

  MomentCombination(int order, double value, double chsh_bloch_term);
};

/// <W^n>_B = f_n(E, beta) (2 - S) with f_n the one-pair moment prefactor
/// (<W^n> = f_n (1 - c)) and S the CHSH combination of axis dot products.
MomentCombination work_bell_combination(const WorkBellSettings& s, int order);

struct Bounds {
  double lo, hi;
};

/// Range of the combination over S in [-2, 2] (deterministic strategies).
Bounds classical_work_bounds(double energy, double beta, int order);

/// Range over S in [-2 sqrt 2, 2 sqrt 2].
Bounds quantum_work_extrema(double energy, double beta, int order);

struct ExpWorkBell {
  std::array<double, 4> per_pair;  // (a1,b1), (a1,b2), (a2,b1), (a2,b2)
  double combination;              // CHSH signs; identically 2
};

/// Jarzynski average of each pair and their CHSH combination. Every pair
/// averages to 1, so the combination carries no quantum-classical gap.
ExpWorkBell exp_work_bell_combination(const WorkBellSettings& s);

/// work_bell_combination value across a list of inverse temperatures.
std::vector<std::pair<double, double>> temperature_scan(const WorkBellSettings& s,
                                                        std::span<const double> betas, int order);

struct WorkBellOptimum {
  WorkBellSettings settings;
  double value;
};

/// Maximizes the order-n combination over the four axes (eight angles).
WorkBellOptimum optimize_work_bell(double energy, double beta, int order, int restarts,
                                   std::uint64_t seed);

/// Axes attaining the quantum maximum for the given order: S = +2 sqrt 2
/// for odd orders (negative prefactor), S = -2 sqrt 2 for even orders.
WorkBellSettings optimal_work_settings(double energy, double beta, int order);

/// One (initial axis, final axis) protocol with a caller-chosen weight;
/// building block for Bell combinations beyond the four-setting CHSH form.
struct WeightedPair {
  BlochVector initial;
  BlochVector final;
  double weight;
};

/// sum_i weight_i <W^n>_{pair i}, each pair on its own thermal preparation.
double weighted_moment_combination(std::span<const WeightedPair> pairs, double energy, double beta,
                                   int order);

}  // namespace tpmlab
