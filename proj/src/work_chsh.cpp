#include "tpmlab/work_chsh.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tpmlab/temporal_bell.hpp"
#include "tpmlab/tpm.hpp"

namespace tpmlab {

namespace {

constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// f_n with <W^n> = f_n (1 - c); equals the closed form at c = 0.
double moment_prefactor(double energy, double beta, int order) {
  return moment_closed_form(energy, beta, 0.0, order);
}

double bloch_term(const WorkBellSettings& s) {
  return chsh_bloch_form({s.a1, s.a2, s.b1, s.b2});
}

}  // namespace

WorkBellSettings::WorkBellSettings(const BlochVector& a1, const BlochVector& a2,
                                   const BlochVector& b1, const BlochVector& b2, double energy,
                                   double beta)
    : a1(a1), a2(a2), b1(b1), b2(b2), energy(energy), beta(beta) {
  require(std::isfinite(energy) && energy > 0, "WorkBellSettings: energy must be positive");
  require(std::isfinite(beta) && beta >= 0, "WorkBellSettings: beta must be finite and >= 0");
}

MomentCombination::MomentCombination(int order, double value, double chsh_bloch_term)
    : order(order), value(value), chsh_bloch_term(chsh_bloch_term) {
  if (std::abs(chsh_bloch_term) > kTsirelson + 1e-9)
    throw std::logic_error("MomentCombination: Bloch term beyond the quantum bound");
}

MomentCombination work_bell_combination(const WorkBellSettings& s, int order) {
  require(order >= 1 && order <= kMaxMomentOrder,
          "work_bell_combination: order must be in [1, 60]");
  const double term = bloch_term(s);
  return MomentCombination(order, moment_prefactor(s.energy, s.beta, order) * (2.0 - term), term);
}

Bounds classical_work_bounds(double energy, double beta, int order) {
  require(order >= 1 && order <= kMaxMomentOrder,
          "classical_work_bounds: order must be in [1, 60]");
  // f_n (2 - S) over S in [-2, 2] spans [0, 4 f_n] (sign-ordered).
  const double extreme = 4.0 * moment_prefactor(energy, beta, order);
  return {std::min(0.0, extreme), std::max(0.0, extreme)};
}

Bounds quantum_work_extrema(double energy, double beta, int order) {
  require(order >= 1 && order <= kMaxMomentOrder,
          "quantum_work_extrema: order must be in [1, 60]");
  const double f = moment_prefactor(energy, beta, order);
  const double e1 = f * (2.0 - kTsirelson);
  const double e2 = f * (2.0 + kTsirelson);
  return {std::min(e1, e2), std::max(e1, e2)};
}

ExpWorkBell exp_work_bell_combination(const WorkBellSettings& s) {
  auto pair_average = [&](const BlochVector& a, const BlochVector& b) {
    const ProtocolSpec spec(TwoLevelHamiltonian(s.energy, a), TwoLevelHamiltonian(s.energy, b),
                            s.beta);
    return jarzynski_average(spec);
  };
  ExpWorkBell out{};
  out.per_pair = {pair_average(s.a1, s.b1), pair_average(s.a1, s.b2), pair_average(s.a2, s.b1),
                  pair_average(s.a2, s.b2)};
  out.combination = out.per_pair[0] + out.per_pair[1] + out.per_pair[2] - out.per_pair[3];
  return out;
}

std::vector<std::pair<double, double>> temperature_scan(const WorkBellSettings& s,
                                                        std::span<const double> betas, int order) {
  std::vector<std::pair<double, double>> out;
  out.reserve(betas.size());
  for (double beta : betas) {
    const WorkBellSettings at_beta(s.a1, s.a2, s.b1, s.b2, s.energy, beta);
    out.emplace_back(beta, work_bell_combination(at_beta, order).value);
  }
  return out;
}

WorkBellOptimum optimize_work_bell(double energy, double beta, int order, int restarts,
                                   std::uint64_t seed) {
  require(order >= 1 && order <= kMaxMomentOrder, "optimize_work_bell: order must be in [1, 60]");
  require(std::isfinite(energy) && energy > 0, "optimize_work_bell: energy must be positive");
  require(std::isfinite(beta) && beta >= 0, "optimize_work_bell: beta must be >= 0");
  const AngleObjective objective = [&](std::span<const double> angles) {
    const CHSHSettings axes = chsh_settings_from_angles(angles);
    const WorkBellSettings s(axes.a1, axes.a2, axes.b1, axes.b2, energy, beta);
    return work_bell_combination(s, order).value;
  };
  const AngleOptimum opt = maximize_over_angles(objective, 8, restarts, seed);
  const CHSHSettings axes = chsh_settings_from_angles(opt.angles);
  return {WorkBellSettings(axes.a1, axes.a2, axes.b1, axes.b2, energy, beta), opt.value};
}

WorkBellSettings optimal_work_settings(double energy, double beta, int order) {
  require(order >= 1 && order <= kMaxMomentOrder,
          "optimal_work_settings: order must be in [1, 60]");
  const CHSHSettings t = tsirelson_settings();
  if (order % 2 == 1) return {t.a1, t.a2, t.b1, t.b2, energy, beta};
  // Even orders have a positive prefactor; the maximum sits at S = -2 sqrt 2.
  return {t.a1, t.a2, -t.b1, -t.b2, energy, beta};
}

double weighted_moment_combination(std::span<const WeightedPair> pairs, double energy, double beta,
                                   int order) {
  double sum = 0;
  for (const WeightedPair& p : pairs)
    sum += p.weight * moment_closed_form(energy, beta, p.initial.dot(p.final), order);
  return sum;
}

}  // namespace tpmlab
