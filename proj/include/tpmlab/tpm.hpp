#pragma once

// Two-point measurement protocol on a qubit: measure in the initial
// Hamiltonian basis, evolve unitarily, measure in the final basis. Work is
// the difference of measured energies, W = E^i_n - E^f_m.

#include <array>
#include <variant>
#include <vector>

#include "tpmlab/qubit.hpp"

namespace tpmlab {

enum class Outcome { plus, minus };

inline double outcome_sign(Outcome o) { return o == Outcome::plus ? 1.0 : -1.0; }
inline int outcome_index(Outcome o) { return o == Outcome::plus ? 0 : 1; }
constexpr std::array<Outcome, 2> kOutcomes{Outcome::plus, Outcome::minus};

/// U = I; the Hamiltonian changes instantaneously.
struct SuddenQuench {};
/// U = exp(-i H_f t); commutes with the final projectors.
struct FinalGenerated {
  double time;
};
/// Arbitrary caller-supplied unitary.
struct ExplicitUnitary {
  Unitary u;
};

using Evolution = std::variant<SuddenQuench, FinalGenerated, ExplicitUnitary>;

/// One full protocol run description.
struct ProtocolSpec {
  TwoLevelHamiltonian initial;
  TwoLevelHamiltonian final;
  double beta;  // >= 0, finite
  Evolution evolution;

  ProtocolSpec(const TwoLevelHamiltonian& initial, const TwoLevelHamiltonian& final, double beta,
               Evolution evolution = SuddenQuench{});

  bool equal_spectra() const { return initial.energy == final.energy; }
  /// E^i_n resp. E^f_m of a measured outcome.
  double initial_energy(Outcome n) const { return outcome_sign(n) * initial.energy; }
  double final_energy(Outcome m) const { return outcome_sign(m) * final.energy; }
};

/// The unitary between the two measurements.
Unitary protocol_unitary(const ProtocolSpec& spec);

/// 2x2 outcome table; first index = first measurement of the run.
struct JointDistribution {
  explicit JointDistribution(const std::array<std::array<double, 2>, 2>& table);

  double probability(Outcome first, Outcome second) const {
    return table[outcome_index(first)][outcome_index(second)];
  }

  std::array<std::array<double, 2>, 2> table;  // [first][second], 0 = plus
};

struct WorkPoint {
  double work;
  double probability;
};

/// Work values with probabilities, aggregated over outcome pairs of equal
/// work (within 1e-9) and sorted by decreasing work. Zero-probability
/// degenerate values are kept.
struct WorkDistribution {
  explicit WorkDistribution(std::vector<WorkPoint> points);

  std::vector<WorkPoint> points;
};

/// p(n,m) = tr{ P^f_m U P^i_n rho_i P^i_n Udag P^f_m } over all four pairs.
JointDistribution joint_distribution(const ProtocolSpec& spec);

double work_value(const ProtocolSpec& spec, Outcome n, Outcome m);

WorkDistribution work_distribution(const ProtocolSpec& spec);

/// dF = -(1/beta) ln(Z_f/Z_i); 0 at beta = 0 (analytic limit) and for
/// equal spectra.
double free_energy_difference(const ProtocolSpec& spec);

/// sum_{n,m} p(n,m) e^{beta (W + dF)} with dF = free_energy_difference;
/// W (work done by the system) pairs with the free energy drop F_i - F_f,
/// so the average is identically 1 for every valid spec.
double jarzynski_average(const ProtocolSpec& spec);

inline constexpr int kMaxMomentOrder = 60;

/// <W^k> = sum p(n,m) W(n,m)^k; order 0 returns 1. order in [0, 60].
double work_moment(const ProtocolSpec& spec, int order);
/// Same moment from a precomputed work distribution.
double work_moment(const WorkDistribution& dist, int order);

/// Equal-spectra closed form:
///   <W^n> = 2^{n-1} E^n (1 - c) (e^{-bE} + (-1)^n e^{+bE}) / (e^{-bE} + e^{+bE})
/// with c the dot product of the two measurement axes.
double moment_closed_form(double energy, double beta, double axis_dot, int order);

/// sum_{k=0}^{K} beta^k/k! <W^k>; equal spectra only. Converges to 1.
double taylor_partial_sum(const ProtocolSpec& spec, int max_order);

enum class BackwardMode {
  exact_inverse,     // U_b = Udag of the forward unitary (default)
  initial_generated  // U_b = exp(+i H_i t); only for quench / final-generated
};

/// Reversed protocol: start in the thermal state of H_f, measure P^f_m,
/// apply the backward unitary, measure P^i_n. First table index is m.
JointDistribution backward_joint_distribution(const ProtocolSpec& spec,
                                              BackwardMode mode = BackwardMode::exact_inverse);

/// p_F(n,m) / p_B(m,n); equals e^{-beta (W + dF)} wherever defined.
/// Throws std::domain_error when the backward probability vanishes
/// (degenerate support), rather than returning infinity.
double crooks_ratio(const ProtocolSpec& spec, Outcome n, Outcome m);

}  // namespace tpmlab
