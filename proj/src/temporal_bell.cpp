#include "tpmlab/temporal_bell.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tpmlab/rng.hpp"

namespace tpmlab {

namespace {

constexpr double kViolationSlack = 1e-12;

}  // namespace

std::array<std::array<double, 2>, 2> sequential_probabilities(const TwoTimeSetting& setting) {
  std::array<std::array<double, 2>, 2> q{};
  for (int a = 0; a < 2; ++a) {
    const Operator2 pa = bloch_to_projector(setting.first, a == 0 ? +1 : -1).matrix();
    const Operator2 collapsed = pa * setting.state.matrix() * pa;
    for (int b = 0; b < 2; ++b) {
      const Operator2 pb = bloch_to_projector(setting.second, b == 0 ? +1 : -1).matrix();
      q[a][b] = real_trace_product(pb, collapsed);
    }
  }
  return q;
}

double two_time_correlation(const TwoTimeSetting& setting) {
  const auto q = sequential_probabilities(setting);
  return q[0][0] - q[0][1] - q[1][0] + q[1][1];
}

double two_time_correlation(const BlochVector& first, const BlochVector& second,
                            const DensityOperator& state) {
  return two_time_correlation(TwoTimeSetting{first, second, state});
}

double chsh_value(const DensityOperator& state, const CHSHSettings& s) {
  return two_time_correlation(s.a1, s.b1, state) + two_time_correlation(s.a2, s.b1, state) +
         two_time_correlation(s.a1, s.b2, state) - two_time_correlation(s.a2, s.b2, state);
}

double chsh_bloch_form(const CHSHSettings& s) {
  return s.a1.dot(s.b1) + s.a2.dot(s.b1) + s.a1.dot(s.b2) - s.a2.dot(s.b2);
}

CHSHSettings tsirelson_settings() {
  const double r = 1.0 / std::numbers::sqrt2;
  return {bloch_z(), bloch_x(), BlochVector(r, 0, r), BlochVector(-r, 0, r)};
}

ClassicalStrategy::ClassicalStrategy(int a1, int a2, int b1, int b2)
    : a1(a1), a2(a2), b1(b1), b2(b2) {
  for (int v : {a1, a2, b1, b2})
    if (v != 1 && v != -1)
      throw std::invalid_argument("ClassicalStrategy: entries must be +1 or -1");
}

double classical_strategy_value(const ClassicalStrategy& s) {
  return s.a1 * s.b1 + s.a2 * s.b1 + s.a1 * s.b2 - s.a2 * s.b2;
}

std::array<ClassicalStrategy, 16> all_classical_strategies() {
  std::array<ClassicalStrategy, 16> out{
      ClassicalStrategy(1, 1, 1, 1),     ClassicalStrategy(1, 1, 1, -1),
      ClassicalStrategy(1, 1, -1, 1),    ClassicalStrategy(1, 1, -1, -1),
      ClassicalStrategy(1, -1, 1, 1),    ClassicalStrategy(1, -1, 1, -1),
      ClassicalStrategy(1, -1, -1, 1),   ClassicalStrategy(1, -1, -1, -1),
      ClassicalStrategy(-1, 1, 1, 1),    ClassicalStrategy(-1, 1, 1, -1),
      ClassicalStrategy(-1, 1, -1, 1),   ClassicalStrategy(-1, 1, -1, -1),
      ClassicalStrategy(-1, -1, 1, 1),   ClassicalStrategy(-1, -1, 1, -1),
      ClassicalStrategy(-1, -1, -1, 1),  ClassicalStrategy(-1, -1, -1, -1)};
  return out;
}

ClassicalBound classical_chsh_bound() {
  ClassicalBound best{-8.0, ClassicalStrategy(1, 1, 1, 1)};
  for (const ClassicalStrategy& s : all_classical_strategies()) {
    const double v = classical_strategy_value(s);
    if (v > best.max_value) best = {v, s};
  }
  return best;
}

ThreeSettingResult three_setting_bell(const DensityOperator& state, const BlochVector& a,
                                      const BlochVector& b1, const BlochVector& b2,
                                      BellConvention convention) {
  const double b1b2 = two_time_correlation(b1, b2, state);
  const double ab1 = two_time_correlation(a, b1, state);
  const double ab2 = two_time_correlation(a, b2, state);
  const double lhs = convention == BellConvention::plus ? 1.0 + b1b2 : 1.0 - b1b2;
  const double rhs = std::abs(ab1 - ab2);
  return {lhs, rhs, lhs < rhs - kViolationSlack};
}

namespace {

constexpr int kScanPoints = 16;
constexpr double kLineWidthTol = 1e-7;  // value error near a maximum is O(width^2)

// Maximize the objective along coordinate `c`. The slice of every objective
// used here is sinusoidal in a single angle, so a scan at 16 points over one
// period brackets the maximum within one grid cell, where the function is
// unimodal.
double line_maximize(const AngleObjective& f, std::vector<double>& angles, int c) {
  constexpr double period = 2.0 * std::numbers::pi;
  constexpr double step = period / kScanPoints;
  const double original = angles[c];

  auto eval = [&](double v) {
    angles[c] = v;
    return f(angles);
  };

  double best_angle = original;
  double best = eval(original);
  for (int j = 0; j < kScanPoints; ++j) {
    const double v = original + j * step;
    const double fv = eval(v);
    if (fv > best) {
      best = fv;
      best_angle = v;
    }
  }

  constexpr double invphi = 0.6180339887498949;
  double lo = best_angle - step;
  double hi = best_angle + step;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = eval(x1);
  double f2 = eval(x2);
  while (hi - lo > kLineWidthTol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = eval(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = eval(x1);
    }
  }
  const double mid = (lo + hi) / 2;
  const double fmid = eval(mid);
  if (fmid >= best) return fmid;
  angles[c] = best_angle;
  return f(angles);
}

}  // namespace

AngleOptimum refine_coordinates(const AngleObjective& objective, std::vector<double> start,
                                double sweep_tolerance, int max_sweeps) {
  double best = objective(start);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double before = best;
    for (std::size_t c = 0; c < start.size(); ++c)
      best = line_maximize(objective, start, static_cast<int>(c));
    if (best - before < sweep_tolerance) break;
  }
  return {std::move(start), best};
}

AngleOptimum maximize_over_angles(const AngleObjective& objective, int dimension, int restarts,
                                  std::uint64_t seed, double sweep_tolerance) {
  if (restarts < 1) throw std::invalid_argument("maximize_over_angles: restarts must be >= 1");
  Philox4x64 rng(seed);
  AngleOptimum best{{}, 0.0};
  bool have_best = false;
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> start(dimension);
    for (double& a : start) a = rng.next_double() * 2.0 * std::numbers::pi;
    AngleOptimum candidate = refine_coordinates(objective, std::move(start), sweep_tolerance);
    if (!have_best || candidate.value > best.value) {
      best = std::move(candidate);
      have_best = true;
    }
  }
  return best;
}

CHSHSettings chsh_settings_from_angles(std::span<const double> angles) {
  if (angles.size() != 8)
    throw std::invalid_argument("chsh_settings_from_angles: eight angles expected");
  return {bloch_from_angles(angles[0], angles[1]), bloch_from_angles(angles[2], angles[3]),
          bloch_from_angles(angles[4], angles[5]), bloch_from_angles(angles[6], angles[7])};
}

namespace {

AngleObjective chsh_objective() {
  return [state = DensityOperator::maximally_mixed()](std::span<const double> angles) {
    return chsh_value(state, chsh_settings_from_angles(angles));
  };
}

std::vector<double> settings_to_angles(const CHSHSettings& s) {
  auto to_angles = [](const BlochVector& v) {
    return std::pair<double, double>(std::acos(std::clamp(v.z, -1.0, 1.0)), std::atan2(v.y, v.x));
  };
  std::vector<double> angles;
  for (const BlochVector* v : {&s.a1, &s.a2, &s.b1, &s.b2}) {
    auto [theta, phi] = to_angles(*v);
    angles.push_back(theta);
    angles.push_back(phi);
  }
  return angles;
}

}  // namespace

TsirelsonResult tsirelson_optimize(int restarts, std::uint64_t seed) {
  const AngleOptimum opt = maximize_over_angles(chsh_objective(), 8, restarts, seed);
  return {chsh_settings_from_angles(opt.angles), opt.value};
}

TsirelsonResult tsirelson_refine(const CHSHSettings& start) {
  const AngleOptimum opt = refine_coordinates(chsh_objective(), settings_to_angles(start));
  return {chsh_settings_from_angles(opt.angles), opt.value};
}

}  // namespace tpmlab
