#include "tpmlab/selftest.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "tpmlab/qubit.hpp"
#include "tpmlab/rng.hpp"
#include "tpmlab/sampler.hpp"
#include "tpmlab/temporal_bell.hpp"
#include "tpmlab/tpm.hpp"
#include "tpmlab/work_chsh.hpp"

namespace tpmlab::selftest {

namespace {

constexpr double kTwoSqrtTwo = 2.0 * std::numbers::sqrt2;

struct Draw {
  Philox4x64 rng;

  explicit Draw(std::uint64_t seed) : rng(seed, 1) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * rng.next_double(); }

  BlochVector axis() {
    const double z = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * std::numbers::pi);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return BlochVector(r * std::cos(phi), r * std::sin(phi), z);
  }

  DensityOperator state() {
    // uniform inside the Bloch ball
    const BlochVector dir = axis();
    const double r = std::cbrt(rng.next_double());
    return DensityOperator::from_bloch(r * dir.x, r * dir.y, r * dir.z);
  }

  Unitary rotation() {
    const BlochVector u = axis();
    const double half = uniform(0.0, std::numbers::pi);
    const complexd is(0, std::sin(half));
    return Unitary(complexd(std::cos(half)) * Operator2::identity() -
                   is * Operator2::bloch_dot(u));
  }

  ProtocolSpec spec(bool equal_spectra = false) {
    const double ei = uniform(0.05, 2.0);
    const double ef = equal_spectra ? ei : uniform(0.05, 2.0);
    const double beta = uniform(0.0, 3.0);
    const int mode = static_cast<int>(uniform(0.0, 3.0));
    Evolution evo = SuddenQuench{};
    if (mode == 1)
      evo = FinalGenerated{uniform(0.0, 10.0)};
    else if (mode == 2)
      evo = ExplicitUnitary{rotation()};
    return ProtocolSpec(TwoLevelHamiltonian(ei, axis()), TwoLevelHamiltonian(ef, axis()), beta,
                        evo);
  }
};

struct Check {
  bool ok = true;
  double worst = 0.0;
  std::string note;

  void within(double value, double target, double tol) {
    const double err = std::abs(value - target);
    worst = std::max(worst, err);
    if (err > tol) ok = false;
  }

  void that(bool cond, const char* what) {
    if (!cond) {
      ok = false;
      if (note.empty()) note = what;
    }
  }

  SuiteResult result(const std::string& name) const {
    std::ostringstream detail;
    if (!note.empty())
      detail << note;
    else
      detail << "max error " << worst;
    return {name, ok, detail.str()};
  }
};

using Suite = std::function<SuiteResult(const Options&)>;

SuiteResult bloch_projectors(const Options& o) {
  Draw d(o.seed);
  Check c;
  for (int i = 0; i < 1000; ++i) {
    const BlochVector s = d.axis();
    const int sign = d.rng.next_double() < 0.5 ? 1 : -1;
    const Projector p = bloch_to_projector(s, sign);
    c.within(max_abs_diff(p.matrix() * p.matrix(), p.matrix()), 0.0, kOperatorTol);
    c.within(std::abs(p.matrix().trace() - complexd(1)), 0.0, kOperatorTol);
  }
  return c.result("bloch-projectors");
}

SuiteResult unitarity(const Options& o) {
  Draw d(o.seed + 1);
  Check c;
  for (int i = 0; i < 300; ++i) {
    const TwoLevelHamiltonian h(d.uniform(0.05, 2.0), d.axis());
    const double t1 = d.uniform(-5.0, 5.0);
    const double t2 = d.uniform(-5.0, 5.0);
    const Unitary u1 = unitary_from_hamiltonian(h, t1);
    const Unitary u2 = unitary_from_hamiltonian(h, t2);
    const Unitary u12 = unitary_from_hamiltonian(h, t1 + t2);
    c.within(max_abs_diff(u1.matrix() * u1.matrix().adjoint(), Operator2::identity()), 0.0,
             kOperatorTol);
    c.within(max_abs_diff(u1.matrix() * u2.matrix(), u12.matrix()), 0.0, kOperatorTol);
  }
  return c.result("unitarity");
}

SuiteResult thermal_state(const Options& o) {
  Draw d(o.seed + 2);
  Check c;
  for (int i = 0; i < 300; ++i) {
    const ThermalState ts(TwoLevelHamiltonian(d.uniform(0.05, 2.0), d.axis()),
                          d.uniform(0.0, 10.0));
    const Operator2 rho = ts.density().matrix();
    c.within(std::abs(rho.trace() - complexd(1)), 0.0, kOperatorTol);
    const double p = ts.weight(+1);
    c.that(p >= 0.0 && p <= 1.0 && ts.weight(-1) >= 0.0 && ts.weight(-1) <= 1.0,
           "thermal weight outside [0,1]");
  }
  return c.result("thermal-state");
}

SuiteResult projector_overlap_closed_form(const Options& o) {
  Draw d(o.seed + 3);
  Check c;
  for (int i = 0; i < 500; ++i) {
    const Projector p = bloch_to_projector(d.axis(), d.rng.next_double() < 0.5 ? 1 : -1);
    const Projector q = bloch_to_projector(d.axis(), d.rng.next_double() < 0.5 ? 1 : -1);
    c.within(projector_overlap(p, q), real_trace_product(p.matrix(), q.matrix()), kScalarTol);
  }
  return c.result("projector-overlap");
}

SuiteResult distribution_normalization(const Options& o) {
  Draw d(o.seed + 4);
  Check c;
  for (int i = 0; i < 1000; ++i) {
    const ProtocolSpec spec = d.spec();
    const JointDistribution joint = joint_distribution(spec);
    double sum = 0;
    for (const auto& row : joint.table)
      for (double p : row) sum += p;
    c.within(sum, 1.0, kScalarTol);
    double wsum = 0;
    for (const auto& pt : work_distribution(spec).points) wsum += pt.probability;
    c.within(wsum, 1.0, kScalarTol);
  }
  return c.result("distribution-normalization");
}

SuiteResult marginal_consistency(const Options& o) {
  Draw d(o.seed + 5);
  Check c;
  for (int i = 0; i < 500; ++i) {
    const ProtocolSpec spec = d.spec();
    const JointDistribution joint = joint_distribution(spec);
    const ThermalState initial(spec.initial, spec.beta);
    for (Outcome n : kOutcomes) {
      const double marginal =
          joint.probability(n, Outcome::plus) + joint.probability(n, Outcome::minus);
      c.within(marginal, initial.weight(n == Outcome::plus ? 1 : -1), kScalarTol);
    }
  }
  return c.result("marginal-consistency");
}

SuiteResult unitary_invariance(const Options& o) {
  Draw d(o.seed + 6);
  Check c;
  for (int i = 0; i < 200; ++i) {
    const TwoLevelHamiltonian hi(d.uniform(0.05, 2.0), d.axis());
    const TwoLevelHamiltonian hf(d.uniform(0.05, 2.0), d.axis());
    const double beta = d.uniform(0.0, 3.0);
    const JointDistribution base =
        joint_distribution(ProtocolSpec(hi, hf, beta, SuddenQuench{}));
    for (double t : {0.0, 0.3, 1.7, 10.0}) {
      const JointDistribution at_t =
          joint_distribution(ProtocolSpec(hi, hf, beta, FinalGenerated{t}));
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) c.within(at_t.table[a][b], base.table[a][b], kScalarTol);
    }
  }
  return c.result("unitary-invariance");
}

SuiteResult jarzynski_identity(const Options& o) {
  Draw d(o.seed + 7);
  Check c;
  const double tol = o.inject_failure ? -1.0 : 1e-10;
  for (int i = 0; i < 1000; ++i) c.within(jarzynski_average(d.spec()), 1.0, tol);
  return c.result("jarzynski-identity");
}

SuiteResult moment_closed_form_suite(const Options& o) {
  Draw d(o.seed + 8);
  Check c;
  for (int i = 0; i < 100; ++i) {
    const double e = d.uniform(0.05, 1.5);
    const double beta = d.uniform(0.0, 3.0);
    const BlochVector si = d.axis();
    const BlochVector sf = d.axis();
    const ProtocolSpec spec(TwoLevelHamiltonian(e, si), TwoLevelHamiltonian(e, sf), beta);
    for (int n = 1; n <= 10; ++n)
      c.within(moment_closed_form(e, beta, si.dot(sf), n), work_moment(spec, n), 1e-10);
  }
  return c.result("moment-closed-form");
}

SuiteResult even_moment_beta_independence(const Options& o) {
  Draw d(o.seed + 9);
  Check c;
  for (int i = 0; i < 200; ++i) {
    const double e = d.uniform(0.05, 1.5);
    const double cdot = d.uniform(-1.0, 1.0);
    const double b1 = d.uniform(0.0, 5.0);
    const double b2 = d.uniform(0.0, 5.0);
    for (int n = 2; n <= 10; n += 2)
      c.within(moment_closed_form(e, b1, cdot, n), moment_closed_form(e, b2, cdot, n), kScalarTol);
  }
  return c.result("even-moment-beta-independence");
}

SuiteResult crooks(const Options& o) {
  Draw d(o.seed + 10);
  Check c;
  for (int i = 0; i < 1000; ++i) {
    const ProtocolSpec spec = d.spec();
    const double df = free_energy_difference(spec);
    const JointDistribution backward = backward_joint_distribution(spec);
    for (Outcome n : kOutcomes)
      for (Outcome m : kOutcomes) {
        if (backward.probability(m, n) <= 1e-12) continue;
        const double expected = std::exp(-spec.beta * (work_value(spec, n, m) + df));
        const double ratio = crooks_ratio(spec, n, m);
        c.within(ratio / expected, 1.0, 1e-10);
      }
  }
  return c.result("crooks");
}

SuiteResult state_independence(const Options& o) {
  Draw d(o.seed + 11);
  Check c;
  const BlochVector a = d.axis();
  const BlochVector b = d.axis();
  double lo = 2, hi = -2;
  for (int i = 0; i < 100; ++i) {
    const double v = two_time_correlation(a, b, d.state());
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  c.within(hi - lo, 0.0, kScalarTol);
  return c.result("two-time-state-independence");
}

SuiteResult time_order_symmetry(const Options& o) {
  Draw d(o.seed + 12);
  Check c;
  for (int i = 0; i < 200; ++i) {
    const BlochVector a = d.axis();
    const BlochVector b = d.axis();
    const DensityOperator rho = d.state();
    c.within(two_time_correlation(a, b, rho), two_time_correlation(b, a, rho), kScalarTol);
  }
  return c.result("time-order-symmetry");
}

SuiteResult sequential_probability_consistency(const Options& o) {
  Draw d(o.seed + 13);
  Check c;
  for (int i = 0; i < 200; ++i) {
    const auto q = sequential_probabilities({d.axis(), d.axis(), d.state()});
    double sum = 0;
    for (const auto& row : q)
      for (double p : row) {
        c.that(p >= -kScalarTol, "negative sequential probability");
        sum += p;
      }
    c.within(sum, 1.0, kScalarTol);
  }
  return c.result("sequential-probabilities");
}

SuiteResult chsh_closed_form_suite(const Options& o) {
  Draw d(o.seed + 14);
  Check c;
  for (int i = 0; i < 200; ++i) {
    const CHSHSettings s{d.axis(), d.axis(), d.axis(), d.axis()};
    c.within(chsh_value(d.state(), s), chsh_bloch_form(s), kScalarTol);
  }
  return c.result("chsh-closed-form");
}

SuiteResult classical_bound(const Options&) {
  Check c;
  const ClassicalBound bound = classical_chsh_bound();
  c.within(bound.max_value, 2.0, 0.0);
  double lo = 8;
  for (const auto& s : all_classical_strategies()) {
    const double v = classical_strategy_value(s);
    lo = std::min(lo, v);
    c.that(std::abs(v) <= 2.0, "strategy value beyond 2");
  }
  c.within(lo, -2.0, 0.0);
  return c.result("classical-bound");
}

SuiteResult tsirelson(const Options& o) {
  Check c;
  const TsirelsonResult r = tsirelson_optimize(12, o.seed + 15);
  c.that(r.value <= kTwoSqrtTwo + 1e-9, "optimizer exceeded the quantum bound");
  c.within(r.value, kTwoSqrtTwo, 1e-6);
  return c.result("tsirelson");
}

SuiteResult bell3_deterministic(const Options&) {
  Check c;
  for (int a : {1, -1})
    for (int b1 : {1, -1})
      for (int b2 : {1, -1}) {
        const double lhs = 1.0 - b1 * b2;
        const double rhs = std::abs(a * b1 - a * b2);
        c.within(lhs, rhs, kScalarTol);  // equality for every strategy
      }
  return c.result("bell3-deterministic");
}

SuiteResult work_bell_protocol_consistency(const Options& o) {
  Draw d(o.seed + 16);
  Check c;
  for (int i = 0; i < 30; ++i) {
    const double e = d.uniform(0.05, 1.5);
    const double beta = d.uniform(0.0, 3.0);
    const WorkBellSettings s(d.axis(), d.axis(), d.axis(), d.axis(), e, beta);
    for (int n = 1; n <= 6; ++n) {
      auto pair_moment = [&](const BlochVector& a, const BlochVector& b) {
        return work_moment(
            ProtocolSpec(TwoLevelHamiltonian(e, a), TwoLevelHamiltonian(e, b), beta), n);
      };
      const double protocol_sum = pair_moment(s.a1, s.b1) + pair_moment(s.a1, s.b2) +
                                  pair_moment(s.a2, s.b1) - pair_moment(s.a2, s.b2);
      c.within(work_bell_combination(s, n).value, protocol_sum, 1e-10);
    }
  }
  return c.result("work-bell-consistency");
}

SuiteResult work_bell_bloch_term(const Options& o) {
  Draw d(o.seed + 17);
  Check c;
  for (int i = 0; i < 100; ++i) {
    const WorkBellSettings s(d.axis(), d.axis(), d.axis(), d.axis(), 1.0, 1.0);
    c.within(work_bell_combination(s, 1).chsh_bloch_term,
             chsh_value(DensityOperator::maximally_mixed(), {s.a1, s.a2, s.b1, s.b2}), kScalarTol);
  }
  return c.result("work-bell-bloch-term");
}

SuiteResult work_bell_classical_containment(const Options& o) {
  Draw d(o.seed + 18);
  Check c;
  for (int i = 0; i < 20; ++i) {
    const double e = d.uniform(0.05, 1.5);
    const double beta = d.uniform(0.0, 3.0);
    const BlochVector u = d.axis();
    for (const ClassicalStrategy& strat : all_classical_strategies()) {
      auto oriented = [&](int sign) { return sign == 1 ? u : -u; };
      const WorkBellSettings s(oriented(strat.a1), oriented(strat.a2), oriented(strat.b1),
                               oriented(strat.b2), e, beta);
      for (int n : {1, 2, 3, 4}) {
        const Bounds bounds = classical_work_bounds(e, beta, n);
        const double v = work_bell_combination(s, n).value;
        c.that(v >= bounds.lo - 1e-10 && v <= bounds.hi + 1e-10,
               "collinear combination escaped the classical interval");
      }
    }
  }
  return c.result("work-bell-classical-containment");
}

SuiteResult work_bell_quantum_excess(const Options&) {
  Check c;
  const double e = 1.0, beta = 1.0;
  const double first = work_bell_combination(optimal_work_settings(e, beta, 1), 1).value;
  c.that(first > 0.0, "first-moment combination not positive at optimal axes");
  const double second = work_bell_combination(optimal_work_settings(e, beta, 2), 2).value;
  c.that(second > 8.0 * e * e, "second-moment combination below the classical ceiling");
  return c.result("work-bell-quantum-excess");
}

SuiteResult even_odd_split(const Options& o) {
  Draw d(o.seed + 19);
  Check c;
  const WorkBellSettings base(d.axis(), d.axis(), d.axis(), d.axis(), 1.3, 1.0);
  const std::array<double, 3> betas{0.4, 1.1, 2.7};
  for (int n : {2, 4, 6}) {
    const auto series = temperature_scan(base, betas, n);
    for (const auto& point : series) c.within(point.second, series.front().second, kScalarTol);
  }
  for (int n : {1, 3, 5}) {
    const auto series = temperature_scan(base, betas, n);
    const double ref = series.front().second / std::tanh(betas.front() * base.energy);
    for (std::size_t i = 1; i < series.size(); ++i)
      c.within(series[i].second / std::tanh(betas[i] * base.energy), ref, 1e-10);
  }
  return c.result("even-odd-split");
}

SuiteResult taylor_resummation(const Options& o) {
  Draw d(o.seed + 20);
  Check c;
  for (int i = 0; i < 100; ++i) {
    const double e = d.uniform(0.05, 2.0);
    const double beta = d.uniform(0.0, 2.0 / e);  // beta E <= 2
    const ProtocolSpec spec(TwoLevelHamiltonian(e, d.axis()), TwoLevelHamiltonian(e, d.axis()),
                            beta);
    c.within(taylor_partial_sum(spec, 40), 1.0, 1e-8);
  }
  return c.result("taylor-resummation");
}

SuiteResult sampler_reproducibility(const Options& o) {
  Check c;
  const ProtocolSpec spec(TwoLevelHamiltonian(1.0, bloch_z()), TwoLevelHamiltonian(1.0, bloch_x()),
                          1.0);
  const SamplerConfig one(o.seed + 21, 20000, 1);
  const SamplerConfig same(o.seed + 21, 20000, 1);
  const SamplerConfig four(o.seed + 21, 20000, 4);
  const EstimateReport r1 = estimate_jarzynski(spec, one);
  const EstimateReport r2 = estimate_jarzynski(spec, same);
  c.that(r1.mean == r2.mean && r1.std_error == r2.std_error, "identical runs differ");
  const EstimateReport r4 = estimate_jarzynski(spec, four);
  c.within(r4.mean, r1.mean, 1e-9);
  const auto s1 = sample_trajectories(spec, one);
  const auto s4 = sample_trajectories(spec, four);
  for (std::size_t j = 0; j < s1.size(); ++j)
    c.that(s1[j].first == s4[j].first && s1[j].second == s4[j].second,
           "worker partition changed the sample sequence");
  return c.result("sampler-reproducibility");
}

SuiteResult sampler_frequencies(const Options& o) {
  Check c;
  const ProtocolSpec spec(TwoLevelHamiltonian(1.0, bloch_z()), TwoLevelHamiltonian(1.0, bloch_x()),
                          0.0);
  const std::uint64_t n = 100000;
  const auto samples = sample_trajectories(spec, SamplerConfig(o.seed + 22, n, 1));
  std::array<std::array<double, 2>, 2> freq{};
  for (const auto& s : samples) freq[outcome_index(s.first)][outcome_index(s.second)] += 1.0;
  const JointDistribution joint = joint_distribution(spec);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double p = joint.table[a][b];
      const double se = std::sqrt(p * (1 - p) / static_cast<double>(n));
      c.that(std::abs(freq[a][b] / static_cast<double>(n) - p) <= 5 * se,
             "empirical frequency more than 5 standard errors off");
    }
  return c.result("sampler-frequencies");
}

const std::vector<std::pair<std::string, Suite>>& registry() {
  static const std::vector<std::pair<std::string, Suite>> suites = {
      {"bloch-projectors", bloch_projectors},
      {"unitarity", unitarity},
      {"thermal-state", thermal_state},
      {"projector-overlap", projector_overlap_closed_form},
      {"distribution-normalization", distribution_normalization},
      {"marginal-consistency", marginal_consistency},
      {"unitary-invariance", unitary_invariance},
      {"jarzynski-identity", jarzynski_identity},
      {"moment-closed-form", moment_closed_form_suite},
      {"even-moment-beta-independence", even_moment_beta_independence},
      {"crooks", crooks},
      {"two-time-state-independence", state_independence},
      {"time-order-symmetry", time_order_symmetry},
      {"sequential-probabilities", sequential_probability_consistency},
      {"chsh-closed-form", chsh_closed_form_suite},
      {"classical-bound", classical_bound},
      {"tsirelson", tsirelson},
      {"bell3-deterministic", bell3_deterministic},
      {"work-bell-consistency", work_bell_protocol_consistency},
      {"work-bell-bloch-term", work_bell_bloch_term},
      {"work-bell-classical-containment", work_bell_classical_containment},
      {"work-bell-quantum-excess", work_bell_quantum_excess},
      {"even-odd-split", even_odd_split},
      {"taylor-resummation", taylor_resummation},
      {"sampler-reproducibility", sampler_reproducibility},
      {"sampler-frequencies", sampler_frequencies},
  };
  return suites;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& entry : registry()) names.push_back(entry.first);
  return names;
}

std::vector<SuiteResult> run_all(const Options& options, std::ostream* progress) {
  std::vector<SuiteResult> results;
  for (const auto& entry : registry()) {
    SuiteResult r = entry.second(options);
    if (progress) *progress << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << "\n";
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace tpmlab::selftest
