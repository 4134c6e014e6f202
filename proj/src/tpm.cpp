#include "tpmlab/tpm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tpmlab {

namespace {

constexpr double kWorkAggregationTol = 1e-9;  // equal-spectra degeneracies are exact
constexpr double kCrooksDenominatorGuard = 1e-300;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Clamp float noise on probabilities computed from matrix traces.
double as_probability(double v, const char* what) {
  if (v < -kScalarTol || v > 1.0 + kScalarTol) throw std::invalid_argument(what);
  return std::min(std::max(v, 0.0), 1.0);
}

// p(first, second) table for: thermal state of first_h at beta, measure in
// its basis, apply u, measure in the second_h basis.
std::array<std::array<double, 2>, 2> tpm_table(const TwoLevelHamiltonian& first_h,
                                               const TwoLevelHamiltonian& second_h, double beta,
                                               const Unitary& u) {
  const ThermalState initial_state(first_h, beta);
  const Operator2 udag = u.matrix().adjoint();
  std::array<std::array<double, 2>, 2> table{};
  for (Outcome n : kOutcomes) {
    const Operator2 rotated =
        u.matrix() * first_h.projector(n == Outcome::plus ? +1 : -1).matrix() * udag;
    const double wn = initial_state.weight(n == Outcome::plus ? +1 : -1);
    for (Outcome m : kOutcomes) {
      const Operator2 pf = second_h.projector(m == Outcome::plus ? +1 : -1).matrix();
      const double overlap = as_probability(real_trace_product(pf, rotated),
                                            "joint_distribution: overlap outside [0,1]");
      table[outcome_index(n)][outcome_index(m)] = wn * overlap;
    }
  }
  return table;
}

}  // namespace

ProtocolSpec::ProtocolSpec(const TwoLevelHamiltonian& initial, const TwoLevelHamiltonian& final,
                           double beta, Evolution evolution)
    : initial(initial), final(final), beta(beta), evolution(std::move(evolution)) {
  require(std::isfinite(beta) && beta >= 0, "ProtocolSpec: beta must be finite and >= 0");
  if (const auto* fg = std::get_if<FinalGenerated>(&this->evolution)) {
    require(std::isfinite(fg->time), "ProtocolSpec: evolution time must be finite");
  }
}

Unitary protocol_unitary(const ProtocolSpec& spec) {
  return std::visit(
      [&](const auto& evo) -> Unitary {
        using T = std::decay_t<decltype(evo)>;
        if constexpr (std::is_same_v<T, SuddenQuench>) {
          return Unitary::identity();
        } else if constexpr (std::is_same_v<T, FinalGenerated>) {
          return unitary_from_hamiltonian(spec.final, evo.time);
        } else {
          return evo.u;
        }
      },
      spec.evolution);
}

JointDistribution::JointDistribution(const std::array<std::array<double, 2>, 2>& t) : table(t) {
  double sum = 0;
  for (const auto& row : table)
    for (double p : row) {
      require(p >= 0.0 && p <= 1.0, "JointDistribution: entry outside [0,1]");
      sum += p;
    }
  require(std::abs(sum - 1.0) <= kScalarTol, "JointDistribution: entries must sum to 1");
}

JointDistribution joint_distribution(const ProtocolSpec& spec) {
  return JointDistribution(tpm_table(spec.initial, spec.final, spec.beta, protocol_unitary(spec)));
}

double work_value(const ProtocolSpec& spec, Outcome n, Outcome m) {
  return spec.initial_energy(n) - spec.final_energy(m);
}

WorkDistribution::WorkDistribution(std::vector<WorkPoint> pts) : points(std::move(pts)) {
  double sum = 0;
  for (const auto& p : points) sum += p.probability;
  if (std::abs(sum - 1.0) > kScalarTol)
    throw std::invalid_argument("WorkDistribution: probabilities must sum to 1");
}

WorkDistribution work_distribution(const ProtocolSpec& spec) {
  const JointDistribution joint = joint_distribution(spec);
  std::vector<WorkPoint> points;
  for (Outcome n : kOutcomes) {
    for (Outcome m : kOutcomes) {
      const double w = work_value(spec, n, m);
      const double p = joint.probability(n, m);
      auto existing = std::find_if(points.begin(), points.end(), [&](const WorkPoint& q) {
        return std::abs(q.work - w) <= kWorkAggregationTol;
      });
      if (existing != points.end())
        existing->probability += p;
      else
        points.push_back({w, p});
    }
  }
  std::sort(points.begin(), points.end(),
            [](const WorkPoint& a, const WorkPoint& b) { return a.work > b.work; });
  return WorkDistribution(std::move(points));
}

double free_energy_difference(const ProtocolSpec& spec) {
  if (spec.beta == 0.0 || spec.equal_spectra()) return 0.0;
  const ThermalState zi(spec.initial, spec.beta);
  const ThermalState zf(spec.final, spec.beta);
  return -(zf.log_partition_function() - zi.log_partition_function()) / spec.beta;
}

double jarzynski_average(const ProtocolSpec& spec) {
  // W = E^i_n - E^f_m is the work done by the system, so it pairs with the
  // free energy drop F_i - F_f = -free_energy_difference(spec): the term
  // exponent is beta (W + dF) with dF = F_f - F_i.
  const JointDistribution joint = joint_distribution(spec);
  const double df = free_energy_difference(spec);
  double sum = 0;
  for (Outcome n : kOutcomes)
    for (Outcome m : kOutcomes)
      sum += joint.probability(n, m) * std::exp(spec.beta * (work_value(spec, n, m) + df));
  return sum;
}

double work_moment(const WorkDistribution& dist, int order) {
  require(order >= 0 && order <= kMaxMomentOrder, "work_moment: order must be in [0, 60]");
  if (order == 0) return 1.0;
  double sum = 0;
  for (const auto& p : dist.points) sum += p.probability * std::pow(p.work, order);
  return sum;
}

double work_moment(const ProtocolSpec& spec, int order) {
  return work_moment(work_distribution(spec), order);
}

double moment_closed_form(double energy, double beta, double axis_dot, int order) {
  require(std::isfinite(energy) && energy > 0, "moment_closed_form: energy must be positive");
  require(std::isfinite(beta) && beta >= 0, "moment_closed_form: beta must be >= 0");
  require(order >= 1, "moment_closed_form: order must be positive");
  require(std::abs(axis_dot) <= 1.0 + kScalarTol, "moment_closed_form: |axis_dot| > 1");
  const double c = std::min(std::max(axis_dot, -1.0), 1.0);
  // (e^{-bE} + (-1)^n e^{bE}) / (e^{-bE} + e^{bE}) is 1 for even n and
  // -tanh(bE) for odd n.
  const double parity = (order % 2 == 0) ? 1.0 : -std::tanh(beta * energy);
  return std::exp2(order - 1) * std::pow(energy, order) * (1.0 - c) * parity;
}

double taylor_partial_sum(const ProtocolSpec& spec, int max_order) {
  require(max_order >= 0 && max_order <= kMaxMomentOrder,
          "taylor_partial_sum: order must be in [0, 60]");
  require(spec.equal_spectra(), "taylor_partial_sum: equal spectra required");
  const WorkDistribution dist = work_distribution(spec);
  double sum = 1.0;  // k = 0 term
  double coeff = 1.0;
  for (int k = 1; k <= max_order; ++k) {
    coeff *= spec.beta / k;
    sum += coeff * work_moment(dist, k);
  }
  return sum;
}

JointDistribution backward_joint_distribution(const ProtocolSpec& spec, BackwardMode mode) {
  Unitary backward = protocol_unitary(spec).adjoint();
  if (mode == BackwardMode::initial_generated) {
    backward = std::visit(
        [&](const auto& evo) -> Unitary {
          using T = std::decay_t<decltype(evo)>;
          if constexpr (std::is_same_v<T, SuddenQuench>) {
            return Unitary::identity();
          } else if constexpr (std::is_same_v<T, FinalGenerated>) {
            // e^{+i H_i t}; the inverse of the forward unitary only when
            // the two Hamiltonians coincide.
            return unitary_from_hamiltonian(spec.initial, -evo.time);
          } else {
            throw std::invalid_argument(
                "backward_joint_distribution: initial_generated mode needs a "
                "time-generated forward evolution");
          }
        },
        spec.evolution);
  }
  return JointDistribution(tpm_table(spec.final, spec.initial, spec.beta, backward));
}

double crooks_ratio(const ProtocolSpec& spec, Outcome n, Outcome m) {
  const double forward = joint_distribution(spec).probability(n, m);
  const double backward = backward_joint_distribution(spec).probability(m, n);
  if (backward <= kCrooksDenominatorGuard)
    throw std::domain_error("crooks_ratio: outcome pair unsupported in the backward protocol");
  return forward / backward;
}

}  // namespace tpmlab
