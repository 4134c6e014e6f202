// Acceptance suite: one line per criterion, nonzero exit iff any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "tpmlab/sampler.hpp"
#include "tpmlab/temporal_bell.hpp"
#include "tpmlab/tpm.hpp"
#include "tpmlab/work_chsh.hpp"

using namespace tpmlab;
using testsup::kPi;

namespace {

constexpr double kTwoSqrtTwo = 2.8284271247461903;

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int index, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s criterion-%d: %s (%s)\n", ok ? "PASS" : "FAIL", index, name.c_str(),
              detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(const char* pattern, double a, double b = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

ProtocolSpec random_spec(testsup::Rand& rand) {
  const double ei = rand.uniform(0.001, 2.0);
  const double ef = rand.uniform(0.001, 2.0);
  const double beta = rand.uniform(0.0, 3.0);
  const BlochVector n = rand.axis();
  const double half = rand.uniform(0.0, kPi);
  const Unitary u(complexd(std::cos(half)) * Operator2::identity() -
                  complexd(0, std::sin(half)) * Operator2::bloch_dot(n));
  return ProtocolSpec(TwoLevelHamiltonian(ei, rand.axis()), TwoLevelHamiltonian(ef, rand.axis()),
                      beta, ExplicitUnitary{u});
}

void criterion_1_jarzynski() {
  Timer timer;
  testsup::Rand rand(101);
  double worst = 0;
  for (int i = 0; i < 1000; ++i)
    worst = std::max(worst, std::abs(jarzynski_average(random_spec(rand)) - 1.0));
  const double t = timer.seconds();
  report(1, "jarzynski identity over 1000 randomized specs", worst <= 1e-10 && t < 1.0,
         fmt("max |avg - 1| = %.2e, %.2f s", worst, t));
}

void criterion_2_tsirelson() {
  Timer timer;
  const TsirelsonResult r = tsirelson_optimize(50, 424242);
  const ClassicalBound classical = classical_chsh_bound();
  const double t = timer.seconds();
  const bool ok = std::abs(r.value - kTwoSqrtTwo) <= 1e-6 && r.value <= kTwoSqrtTwo + 1e-9 &&
                  classical.max_value == 2.0 && t < 5.0;
  report(2, "tsirelson recovery and classical bound", ok,
         fmt("optimizer = %.9f, %.2f s", r.value, t));
}

void criterion_3_first_moment() {
  const double value = work_bell_combination(optimal_work_settings(1.0, 1.0, 1), 1).value;
  report(3, "first-moment work combination at optimal axes", std::abs(value - 0.630926) <= 1e-6,
         fmt("value = %.9f", value));
}

void criterion_4_second_moment() {
  const double exact = 4.0 * (1.0 + std::sqrt(2.0));
  double worst = 0;
  double spread_lo = 1e300, spread_hi = -1e300;
  for (double beta : {0.1, 1.0, 10.0}) {
    const double v = work_bell_combination(optimal_work_settings(1.0, beta, 2), 2).value;
    worst = std::max(worst, std::abs(v - exact));
    spread_lo = std::min(spread_lo, v);
    spread_hi = std::max(spread_hi, v);
  }
  const bool ok = worst <= 1e-9 && (spread_hi - spread_lo) <= 1e-12;
  report(4, "second-moment extremum 4(1+sqrt2)E^2, beta independent", ok,
         fmt("max |v - exact| = %.2e, spread = %.2e", worst, spread_hi - spread_lo));
}

void criterion_5_classical_scans() {
  testsup::Rand rand(105);
  bool ok = true;
  double worst_excess = -1e300;
  for (int trial = 0; trial < 4; ++trial) {
    const double e = rand.uniform(0.1, 1.5);
    const double beta = rand.uniform(0.1, 3.0);
    const Bounds b2 = classical_work_bounds(e, beta, 2);
    for (int iu = 0; iu < 24; ++iu)
      for (int ju = 0; ju < 12; ++ju) {
        const BlochVector u =
            bloch_from_angles(kPi * ju / 11.0, 2 * kPi * iu / 24.0);
        for (const ClassicalStrategy& s : all_classical_strategies()) {
          auto oriented = [&](int sign) { return sign == 1 ? u : -u; };
          const WorkBellSettings w(oriented(s.a1), oriented(s.a2), oriented(s.b1),
                                   oriented(s.b2), e, beta);
          const double v1 = work_bell_combination(w, 1).value;
          const double v2 = work_bell_combination(w, 2).value;
          worst_excess = std::max(worst_excess, v1);
          if (v1 > 1e-10) ok = false;
          if (v2 < b2.lo - 1e-10 || v2 > b2.hi + 1e-10) ok = false;
        }
      }
  }
  report(5, "collinear scans respect the classical work bounds", ok,
         fmt("max first-moment value = %.2e", worst_excess));
}

void criterion_6_moment_closed_form() {
  testsup::Rand rand(106);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const double e = rand.uniform(0.01, 1.5);
    const double beta = rand.uniform(0.0, 3.0);
    const double c = rand.uniform(-1.0, 1.0);
    for (int n = 1; n <= 10; ++n)
      worst = std::max(worst, std::abs(moment_closed_form(e, beta, c, n) -
                                       testsup::moment_oracle(e, beta, c, n)));
  }
  report(6, "moment closed form vs brute-force oracle, n = 1..10", worst <= 1e-10,
         fmt("max |closed - oracle| = %.2e", worst));
}

void criterion_7_resummation() {
  testsup::Rand rand(107);
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const double e = rand.uniform(0.05, 2.0);
    const double beta = rand.uniform(0.0, 2.0 / e);  // beta E <= 2
    const ProtocolSpec spec(TwoLevelHamiltonian(e, rand.axis()),
                            TwoLevelHamiltonian(e, rand.axis()), beta);
    worst = std::max(worst, std::abs(taylor_partial_sum(spec, 40) - 1.0));
  }
  report(7, "Taylor resummation to 1 at K = 40", worst <= 1e-8,
         fmt("max |sum - 1| = %.2e", worst));
}

void criterion_8_monte_carlo() {
  Timer timer;
  const ProtocolSpec spec(TwoLevelHamiltonian(1.0, bloch_z()), TwoLevelHamiltonian(1.0, bloch_x()),
                          1.0);
  const SamplerConfig cfg(20240811, 1000000, 1);
  const EstimateReport jz = estimate_jarzynski(spec, cfg);
  const std::array<int, 2> orders{1, 2};
  const auto moments = estimate_moments(spec, cfg, orders);
  const double t = timer.seconds();
  const double dev_j = std::abs(jz.mean - 1.0) / jz.std_error;
  const double dev_1 = std::abs(moments[0].mean + 0.7615941559557649) / moments[0].std_error;
  const double dev_2 = std::abs(moments[1].mean - 2.0) / moments[1].std_error;
  const bool ok = dev_j <= 4 && dev_1 <= 4 && dev_2 <= 4 && t < 10.0;
  report(8, "Monte Carlo estimates within 4 standard errors at N = 1e6", ok,
         fmt("max deviation = %.2f se, %.2f s", std::max({dev_j, dev_1, dev_2}), t));
}

void criterion_9_crooks() {
  testsup::Rand rand(109);
  double worst = 0;
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const ProtocolSpec spec = random_spec(rand);
    const JointDistribution backward = backward_joint_distribution(spec);
    const double df = free_energy_difference(spec);
    for (Outcome n : kOutcomes)
      for (Outcome m : kOutcomes) {
        if (backward.probability(m, n) <= 1e-12) continue;
        const double expected = std::exp(-spec.beta * (work_value(spec, n, m) + df));
        const double err =
            std::abs(crooks_ratio(spec, n, m) - expected) / std::max(1.0, std::abs(expected));
        worst = std::max(worst, err);
        ++checked;
      }
  }
  report(9, "Crooks ratio equals exp(-beta (W + dF))", worst <= 1e-10 && checked >= 3000,
         fmt("max error = %.2e over %.0f pairs", worst, static_cast<double>(checked)));
}

void criterion_10_state_independence() {
  testsup::Rand rand(110);
  const BlochVector a = rand.axis();
  const BlochVector b = rand.axis();
  double lo = 2, hi = -2, worst_swap = 0;
  for (int i = 0; i < 100; ++i) {
    const DensityOperator rho = rand.state();
    const double v = two_time_correlation(a, b, rho);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    worst_swap = std::max(worst_swap, std::abs(v - two_time_correlation(b, a, rho)));
  }
  const bool ok = (hi - lo) <= 1e-12 && worst_swap <= 1e-12;
  report(10, "two-time correlations: state independent, order symmetric", ok,
         fmt("spread = %.2e, swap = %.2e", hi - lo, worst_swap));
}

}  // namespace

int main() {
  criterion_1_jarzynski();
  criterion_2_tsirelson();
  criterion_3_first_moment();
  criterion_4_second_moment();
  criterion_5_classical_scans();
  criterion_6_moment_closed_form();
  criterion_7_resummation();
  criterion_8_monte_carlo();
  criterion_9_crooks();
  criterion_10_state_independence();
  if (failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
