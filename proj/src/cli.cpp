#include "tpmlab/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tpmlab/qubit.hpp"
#include "tpmlab/sampler.hpp"
#include "tpmlab/selftest.hpp"
#include "tpmlab/temporal_bell.hpp"
#include "tpmlab/tpm.hpp"
#include "tpmlab/work_chsh.hpp"

namespace tpmlab::cli {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All floating output carries 9 significant digits; rounding the stored
// value keeps serialization, round-trip parsing and CSV in exact agreement.
double round9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::strtod(buf, nullptr);
}

std::string format9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Lossless text form, for re-parsing rather than display.
std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json num(double v) { return json(round9(v)); }

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

struct Document {
  json request = json::object();
  json results = json::object();
  std::optional<Table> table;
  std::vector<std::string> notes;

  json to_json() const {
    json doc;
    doc["request"] = request;
    doc["results"] = results;
    if (table) {
      json t;
      t["columns"] = table->columns;
      t["rows"] = json::array();
      for (const auto& row : table->rows) t["rows"].push_back(row);
      doc["table"] = t;
    } else {
      doc["table"] = nullptr;
    }
    doc["notes"] = notes;
    return doc;
  }
};

enum class Format { json, csv };

void emit(const Document& doc, Format format, std::ostream& out) {
  if (format == Format::json) {
    out << doc.to_json().dump(2) << "\n";
    return;
  }
  if (!doc.table) throw UsageError("csv output requires a subcommand that produces a table");
  const Table& t = *doc.table;
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    out << t.columns[i] << (i + 1 < t.columns.size() ? "," : "\n");
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i].is_string())
        out << row[i].get<std::string>();
      else if (row[i].is_number_float())
        out << format9(row[i].get<double>());
      else
        out << row[i].dump();
      out << (i + 1 < row.size() ? "," : "\n");
    }
  }
}

std::vector<double> parse_numbers(const std::string& text, std::size_t count, const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0')
      throw UsageError(std::string(what) + ": could not parse '" + item + "'");
    values.push_back(v);
  }
  if (values.size() != count)
    throw UsageError(std::string(what) + ": expected " + std::to_string(count) +
                     " comma-separated values");
  return values;
}

// One measurement axis, settable as angles or as unit components.
struct AxisOption {
  std::string angles;
  std::string xyz;

  bool set() const { return !angles.empty() || !xyz.empty(); }

  BlochVector resolve(const BlochVector& fallback, const char* what) const {
    if (!angles.empty() && !xyz.empty())
      throw UsageError(std::string(what) + ": give either angles or components, not both");
    if (!angles.empty()) {
      const auto v = parse_numbers(angles, 2, what);
      return bloch_from_angles(v[0], v[1]);
    }
    if (!xyz.empty()) {
      const auto v = parse_numbers(xyz, 3, what);
      return BlochVector(v[0], v[1], v[2]);
    }
    return fallback;
  }
};

json axis_json(const BlochVector& v) { return json::array({num(v.x), num(v.y), num(v.z)}); }

// Parameters shared across subcommands; each subcommand registers only the
// flags it understands.
struct Params {
  double energy = 1.0;
  double energy_final = -1.0;  // < 0: follow --energy
  double beta = 1.0;
  AxisOption axis_i, axis_f, axis_a, axis_a1, axis_a2, axis_b1, axis_b2;
  std::string evolution = "quench";
  double time = 0.0;
  AxisOption rot_axis;
  double rot_angle = 0.0;
  int order = 1;
  std::vector<int> orders;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  int restarts = 50;
  std::string scan;
  std::string format = "json";
  std::string convention = "minus";
  std::string objective = "chsh";
  std::string outcome;
  std::string backward = "exact-inverse";
  bool optimal = false;
  bool inject_failure = false;

  Format output_format() const {
    if (format == "json") return Format::json;
    if (format == "csv") return Format::csv;
    throw UsageError("--format must be json or csv");
  }

  double final_energy() const { return energy_final > 0 ? energy_final : energy; }

  Evolution make_evolution() const {
    if (evolution == "quench") return SuddenQuench{};
    if (evolution == "final-ht") return FinalGenerated{time};
    if (evolution == "explicit") {
      const BlochVector n = rot_axis.resolve(bloch_z(), "--rot-axis");
      const double half = rot_angle / 2.0;
      const complexd is(0, std::sin(half));
      return ExplicitUnitary{
          Unitary(complexd(std::cos(half)) * Operator2::identity() - is * Operator2::bloch_dot(n))};
    }
    throw UsageError("--evolution must be quench, final-ht or explicit");
  }

  ProtocolSpec make_spec() const {
    return ProtocolSpec(TwoLevelHamiltonian(energy, axis_i.resolve(bloch_z(), "--axis-i")),
                        TwoLevelHamiltonian(final_energy(), axis_f.resolve(bloch_z(), "--axis-f")),
                        beta, make_evolution());
  }

  void echo_spec(json& request) const {
    request["energy"] = num(energy);
    request["energy_final"] = num(final_energy());
    request["beta"] = num(beta);
    request["axis_i"] = axis_json(axis_i.resolve(bloch_z(), "--axis-i"));
    request["axis_f"] = axis_json(axis_f.resolve(bloch_z(), "--axis-f"));
    request["evolution"] = evolution;
    if (evolution == "final-ht") request["time"] = num(time);
    if (evolution == "explicit") {
      request["rot_axis"] = axis_json(rot_axis.resolve(bloch_z(), "--rot-axis"));
      request["rot_angle"] = num(rot_angle);
    }
  }

  CHSHSettings make_chsh_axes() const {
    if (optimal) return tsirelson_settings();
    return {axis_a1.resolve(bloch_z(), "--axis-a1"), axis_a2.resolve(bloch_z(), "--axis-a2"),
            axis_b1.resolve(bloch_z(), "--axis-b1"), axis_b2.resolve(bloch_z(), "--axis-b2")};
  }

  WorkBellSettings make_work_settings(int for_order) const {
    if (optimal) return optimal_work_settings(energy, beta, for_order);
    const CHSHSettings s = make_chsh_axes();
    return WorkBellSettings(s.a1, s.a2, s.b1, s.b2, energy, beta);
  }

  void echo_chsh_axes(json& request, const CHSHSettings& s) const {
    request["axis_a1"] = axis_json(s.a1);
    request["axis_a2"] = axis_json(s.a2);
    request["axis_b1"] = axis_json(s.b1);
    request["axis_b2"] = axis_json(s.b2);
    request["optimal"] = optimal;
  }
};

void add_axis(CLI::App* sub, const std::string& name, AxisOption& axis, const char* help) {
  sub->add_option(name, axis.angles, std::string(help) + " as theta,phi (radians)");
  sub->add_option(name + "-xyz", axis.xyz, std::string(help) + " as unit components x,y,z");
}

void add_spec_flags(CLI::App* sub, Params& p) {
  sub->add_option("--energy", p.energy, "level splitting E of the initial Hamiltonian (> 0)");
  sub->add_option("--energy-final", p.energy_final,
                  "final-Hamiltonian splitting (defaults to --energy)");
  sub->add_option("--beta", p.beta, "inverse temperature (>= 0)");
  add_axis(sub, "--axis-i", p.axis_i, "initial measurement axis");
  add_axis(sub, "--axis-f", p.axis_f, "final measurement axis");
  sub->add_option("--evolution", p.evolution, "quench | final-ht | explicit");
  sub->add_option("--time", p.time, "evolution time for final-ht");
  add_axis(sub, "--rot-axis", p.rot_axis, "rotation axis for explicit evolution");
  sub->add_option("--rot-angle", p.rot_angle, "rotation angle for explicit evolution (radians)");
}

void add_chsh_axes(CLI::App* sub, Params& p) {
  add_axis(sub, "--axis-a1", p.axis_a1, "first early axis");
  add_axis(sub, "--axis-a2", p.axis_a2, "second early axis");
  add_axis(sub, "--axis-b1", p.axis_b1, "first late axis");
  add_axis(sub, "--axis-b2", p.axis_b2, "second late axis");
  sub->add_flag("--optimal", p.optimal, "use the quantum-extremal settings");
}

void add_format(CLI::App* sub, Params& p) {
  sub->add_option("--format", p.format, "json | csv (csv needs a table)");
}

// ---- subcommand handlers ----

Document run_jarzynski(const Params& p) {
  Document doc;
  doc.request["subcommand"] = "jarzynski";
  p.echo_spec(doc.request);
  const ProtocolSpec spec = p.make_spec();
  doc.results["jarzynski_average"] = num(jarzynski_average(spec));
  doc.results["free_energy_difference"] = num(free_energy_difference(spec));
  return doc;
}

Document run_moments(const Params& p) {
  Document doc;
  doc.request["subcommand"] = "moments";
  p.echo_spec(doc.request);
  doc.request["order"] = p.order;
  const ProtocolSpec spec = p.make_spec();
  doc.results["moment"] = num(work_moment(spec, p.order));
  if (spec.equal_spectra() && p.order >= 1) {
    const double c = spec.initial.axis.dot(spec.final.axis);
    doc.results["closed_form"] = num(moment_closed_form(p.energy, p.beta, c, p.order));
  }
  return doc;
}

Document run_work_dist(const Params& p) {
  Document doc;
  doc.request["subcommand"] = "work-dist";
  p.echo_spec(doc.request);
  const WorkDistribution dist = work_distribution(p.make_spec());
  Table t{{"work", "probability"}, {}};
  for (const auto& pt : dist.points) t.rows.push_back({num(pt.work), num(pt.probability)});
  doc.table = std::move(t);
  doc.results["support_size"] = dist.points.size();
  return doc;
}

Document run_chsh(const Params& p) {
  Document doc;
  doc.request["subcommand"] = "chsh";
  const CHSHSettings s = p.make_chsh_axes();
  p.echo_chsh_axes(doc.request, s);
  doc.results["chsh"] = num(chsh_value(DensityOperator::maximally_mixed(), s));
  doc.results["classical_bound"] = num(2.0);
  doc.results["quantum_bound"] = num(2.0 * std::numbers::sqrt2);
  return doc;
}

Document run_bell3(const Params& p) {
  Document doc;
  doc.request["subcommand"] = "bell3";
  const BlochVector a = p.axis_a.resolve(bloch_z(), "--axis-a");
  const BlochVector b1 = p.axis_b1.resolve(bloch_z(), "--axis-b1");
  const BlochVector b2 = p.axis_b2.resolve(bloch_z(), "--axis-b2");
  doc.request["axis_a"] = axis_json(a);
  doc.request["axis_b1"] = axis_json(b1);
  doc.request["axis_b2"] = axis_json(b2);
  doc.request["convention"] = p.convention;
  BellConvention convention;
  if (p.convention == "plus")
    convention = BellConvention::plus;
  else if (p.convention == "minus")
    convention = BellConvention::minus;
  else
    throw UsageError("--convention must be plus or minus");
  const ThreeSettingResult r =
      three_setting_bell(DensityOperator::maximally_mixed(), a, b1, b2, convention);
  doc.results["lhs"] = num(r.lhs);
  doc.results["rhs"] = num(r.rhs);
  doc.results["violated"] = r.violated ? 1 : 0;
  doc.notes.push_back(
      p.convention == "minus"
          ? "convention minus: lhs = 1 - <B1B2>, the same-system sequential form; "
            "--convention plus selects the anticorrelation form lhs = 1 + <B1B2>"
          : "convention plus: lhs = 1 + <B1B2>, the anticorrelation form; deterministic "
            "same-system strategies satisfy only the minus form");
  return doc;
}

Document run_work_bell(const Params& p) {
  Document doc;
  doc.request["subcommand"] = "work-bell";
  const WorkBellSettings s = p.make_work_settings(p.order);
  p.echo_chsh_axes(doc.request, {s.a1, s.a2, s.b1, s.b2});
  doc.request["energy"] = num(p.energy);
  doc.request["beta"] = num(p.beta);
  doc.request["order"] = p.order;
  const MomentCombination mc = work_bell_combination(s, p.order);
  doc.results["value"] = num(mc.value);
  doc.results["chsh_bloch_term"] = num(mc.chsh_bloch_term);
  const ExpWorkBell ew = exp_work_bell_combination(s);
  doc.results["exp_combination"] = num(ew.combination);
  return doc;
}

Document run_classical_bounds(const Params& p) {
  Document doc;
  doc.request["subcommand"] = "classical-bounds";
  doc.request["energy"] = num(p.energy);
  doc.request["beta"] = num(p.beta);
  doc.request["order"] = p.order;
  const Bounds cb = classical_work_bounds(p.energy, p.beta, p.order);
  const Bounds qb = quantum_work_extrema(p.energy, p.beta, p.order);
  doc.results["classical_lo"] = num(cb.lo);
  doc.results["classical_hi"] = num(cb.hi);
  doc.results["quantum_lo"] = num(qb.lo);
  doc.results["quantum_hi"] = num(qb.hi);
  return doc;
}

Document run_optimize(const Params& p) {
  Document doc;
  doc.request["subcommand"] = "optimize";
  doc.request["objective"] = p.objective;
  doc.request["restarts"] = p.restarts;
  doc.request["seed"] = p.seed;
  auto echo_axes = [&](const CHSHSettings& s) {
    doc.results["a1_x"] = num(s.a1.x);
    doc.results["a1_y"] = num(s.a1.y);
    doc.results["a1_z"] = num(s.a1.z);
    doc.results["a2_x"] = num(s.a2.x);
    doc.results["a2_y"] = num(s.a2.y);
    doc.results["a2_z"] = num(s.a2.z);
    doc.results["b1_x"] = num(s.b1.x);
    doc.results["b1_y"] = num(s.b1.y);
    doc.results["b1_z"] = num(s.b1.z);
    doc.results["b2_x"] = num(s.b2.x);
    doc.results["b2_y"] = num(s.b2.y);
    doc.results["b2_z"] = num(s.b2.z);
  };
  if (p.objective == "chsh") {
    const TsirelsonResult r = tsirelson_optimize(p.restarts, p.seed);
    doc.results["value"] = num(r.value);
    echo_axes(r.settings);
  } else if (p.objective == "work-bell") {
    doc.request["order"] = p.order;
    doc.request["energy"] = num(p.energy);
    doc.request["beta"] = num(p.beta);
    const WorkBellOptimum r = optimize_work_bell(p.energy, p.beta, p.order, p.restarts, p.seed);
    doc.results["value"] = num(r.value);
    echo_axes({r.settings.a1, r.settings.a2, r.settings.b1, r.settings.b2});
  } else {
    throw UsageError("--objective must be chsh or work-bell");
  }
  return doc;
}

Document run_crooks(const Params& p) {
  Document doc;
  doc.request["subcommand"] = "crooks";
  p.echo_spec(doc.request);
  doc.request["backward"] = p.backward;
  BackwardMode mode;
  if (p.backward == "exact-inverse")
    mode = BackwardMode::exact_inverse;
  else if (p.backward == "initial-ht")
    mode = BackwardMode::initial_generated;
  else
    throw UsageError("--backward must be exact-inverse or initial-ht");

  const ProtocolSpec spec = p.make_spec();
  const JointDistribution forward = joint_distribution(spec);
  const JointDistribution backward = backward_joint_distribution(spec, mode);
  const double df = free_energy_difference(spec);
  doc.results["free_energy_difference"] = num(df);
  if (mode == BackwardMode::initial_generated)
    doc.notes.push_back(
        "initial-ht backward evolution is exp(+i H_i t); it inverts the forward "
        "unitary only when the two Hamiltonians coincide, so the ratio identity "
        "is not guaranteed");

  auto label = [](Outcome o) { return std::string(o == Outcome::plus ? "+" : "-"); };
  Table t{{"n", "m", "forward", "backward", "ratio", "predicted"}, {}};
  for (Outcome n : kOutcomes)
    for (Outcome m : kOutcomes) {
      const double pf = forward.probability(n, m);
      const double pb = backward.probability(m, n);
      const double predicted = std::exp(-spec.beta * (work_value(spec, n, m) + df));
      if (pb <= 1e-300) {
        doc.notes.push_back("outcome pair (" + label(n) + "," + label(m) +
                            ") has no backward support; ratio undefined");
        continue;
      }
      t.rows.push_back(
          {label(n), label(m), num(pf), num(pb), num(pf / pb), num(predicted)});
    }
  doc.table = std::move(t);

  if (!p.outcome.empty()) {
    std::stringstream ss(p.outcome);
    std::string n_text, m_text;
    if (!std::getline(ss, n_text, ',') || !std::getline(ss, m_text) ||
        (n_text != "+" && n_text != "-") || (m_text != "+" && m_text != "-"))
      throw UsageError("--outcome expects two signs, e.g. +,-");
    const Outcome n = n_text == "+" ? Outcome::plus : Outcome::minus;
    const Outcome m = m_text == "+" ? Outcome::plus : Outcome::minus;
    doc.request["outcome"] = p.outcome;
    doc.results["ratio"] = num(crooks_ratio(spec, n, m));  // throws when degenerate
    doc.results["predicted"] = num(std::exp(-spec.beta * (work_value(spec, n, m) + df)));
  }
  return doc;
}

Document run_sample(const Params& p) {
  Document doc;
  doc.request["subcommand"] = "sample";
  p.echo_spec(doc.request);
  doc.request["samples"] = p.samples;
  doc.request["seed"] = p.seed;
  doc.request["workers"] = p.workers;
  const ProtocolSpec spec = p.make_spec();
  const SamplerConfig cfg(p.seed, p.samples, p.workers);
  std::vector<int> orders = p.orders.empty() ? std::vector<int>{1, 2} : p.orders;
  doc.request["orders"] = orders;

  Table t{{"estimator", "mean", "std_error", "samples"}, {}};
  const EstimateReport jz = estimate_jarzynski(spec, cfg);
  t.rows.push_back({jz.estimator, num(jz.mean), num(jz.std_error), jz.samples});
  for (const EstimateReport& r : estimate_moments(spec, cfg, orders))
    t.rows.push_back({r.estimator, num(r.mean), num(r.std_error), r.samples});
  doc.table = std::move(t);
  doc.results["jarzynski_mean"] = num(jz.mean);
  doc.results["jarzynski_std_error"] = num(jz.std_error);
  if (jz.single_sample)
    doc.notes.push_back("single-sample run: standard errors are reported as 0");
  return doc;
}

struct ScanRequest {
  std::string parameter;
  double start, stop;
  int steps;
};

ScanRequest parse_scan(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw UsageError("--scan expects param=start:stop:steps");
  ScanRequest r;
  r.parameter = text.substr(0, eq);
  std::stringstream ss(text.substr(eq + 1));
  std::string a, b, n;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, n))
    throw UsageError("--scan expects param=start:stop:steps");
  const auto va = parse_numbers(a, 1, "--scan start");
  const auto vb = parse_numbers(b, 1, "--scan stop");
  r.start = va[0];
  r.stop = vb[0];
  char* end = nullptr;
  r.steps = static_cast<int>(std::strtol(n.c_str(), &end, 10));
  if (end == n.c_str() || *end != '\0') throw UsageError("--scan: steps must be an integer");
  if (r.steps < 2) throw UsageError("--scan: at least 2 grid points required");
  return r;
}

Document run_scan(const Params& p, const std::string& quantity) {
  Document doc;
  doc.request["subcommand"] = "scan";
  doc.request["quantity"] = quantity;
  const ScanRequest scan = parse_scan(p.scan);
  doc.request["parameter"] = scan.parameter;
  doc.request["start"] = num(scan.start);
  doc.request["stop"] = num(scan.stop);
  doc.request["steps"] = scan.steps;

  const bool spec_quantity = quantity == "jarzynski" || quantity == "moment";
  if (!spec_quantity && quantity != "work-bell")
    throw UsageError("--quantity must be jarzynski, moment or work-bell");
  if (quantity != "jarzynski") doc.request["order"] = p.order;

  if (scan.parameter == "time" && p.evolution != "final-ht")
    throw UsageError("scanning time requires --evolution final-ht");
  if (!spec_quantity && (scan.parameter == "time" || scan.parameter == "angle-theta-f"))
    throw UsageError("parameter '" + scan.parameter + "' applies to jarzynski/moment scans");
  if (spec_quantity) p.echo_spec(doc.request);

  auto value_at = [&](double x) -> double {
    Params q = p;
    if (scan.parameter == "beta") {
      q.beta = x;
    } else if (scan.parameter == "energy") {
      q.energy = x;  // energy-final follows unless set explicitly
    } else if (scan.parameter == "time") {
      q.time = x;
    } else if (scan.parameter == "angle-theta-f") {
      const auto phi =
          q.axis_f.angles.empty() ? 0.0 : parse_numbers(q.axis_f.angles, 2, "--axis-f")[1];
      q.axis_f.angles = format_full(x) + "," + format_full(phi);
      q.axis_f.xyz.clear();
    } else {
      throw UsageError("scan parameter must be beta, energy, time or angle-theta-f");
    }
    if (quantity == "jarzynski") return jarzynski_average(q.make_spec());
    if (quantity == "moment") return work_moment(q.make_spec(), q.order);
    return work_bell_combination(q.make_work_settings(q.order), q.order).value;
  };

  Table t{{scan.parameter, "value"}, {}};
  for (int i = 0; i < scan.steps; ++i) {
    const double x = scan.start + (scan.stop - scan.start) * i / (scan.steps - 1);
    t.rows.push_back({num(x), num(value_at(x))});
  }
  doc.table = std::move(t);
  doc.results["points"] = scan.steps;
  return doc;
}

struct Outputs {
  Document doc;
  int code = 0;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"two-point-measurement work statistics and temporal Bell correlations "
               "for a single qubit"};
  app.require_subcommand(1);

  Params p;
  std::optional<Outputs> outputs;

  auto* jarzynski = app.add_subcommand("jarzynski", "analytic <e^{beta(W-dF)}> for one protocol");
  add_spec_flags(jarzynski, p);
  add_format(jarzynski, p);
  jarzynski->callback([&] { outputs = Outputs{run_jarzynski(p)}; });

  auto* moments = app.add_subcommand("moments", "analytic work moment <W^k>");
  add_spec_flags(moments, p);
  moments->add_option("--order", p.order, "moment order k (0..60)");
  add_format(moments, p);
  moments->callback([&] { outputs = Outputs{run_moments(p)}; });

  auto* work_dist = app.add_subcommand("work-dist", "work values and probabilities");
  add_spec_flags(work_dist, p);
  add_format(work_dist, p);
  work_dist->callback([&] { outputs = Outputs{run_work_dist(p)}; });

  auto* chsh = app.add_subcommand("chsh", "two-time CHSH combination of four axes");
  add_chsh_axes(chsh, p);
  add_format(chsh, p);
  chsh->callback([&] { outputs = Outputs{run_chsh(p)}; });

  auto* bell3 = app.add_subcommand("bell3", "three-setting temporal Bell inequality");
  add_axis(bell3, "--axis-a", p.axis_a, "early axis");
  add_axis(bell3, "--axis-b1", p.axis_b1, "first late axis");
  add_axis(bell3, "--axis-b2", p.axis_b2, "second late axis");
  bell3->add_option("--convention", p.convention, "plus | minus (default minus)");
  add_format(bell3, p);
  bell3->callback([&] { outputs = Outputs{run_bell3(p)}; });

  auto* work_bell = app.add_subcommand("work-bell", "CHSH combination of work moments");
  add_chsh_axes(work_bell, p);
  work_bell->add_option("--order", p.order, "moment order n (1..60)");
  work_bell->add_option("--energy", p.energy, "level splitting E (> 0)");
  work_bell->add_option("--beta", p.beta, "inverse temperature (>= 0)");
  add_format(work_bell, p);
  work_bell->callback([&] { outputs = Outputs{run_work_bell(p)}; });

  auto* bounds = app.add_subcommand("classical-bounds", "classical interval and quantum extrema");
  bounds->add_option("--order", p.order, "moment order n (1..60)");
  bounds->add_option("--energy", p.energy, "level splitting E (> 0)");
  bounds->add_option("--beta", p.beta, "inverse temperature (>= 0)");
  add_format(bounds, p);
  bounds->callback([&] { outputs = Outputs{run_classical_bounds(p)}; });

  auto* optimize = app.add_subcommand("optimize", "maximize chsh or work-bell over the axes");
  optimize->add_option("--objective", p.objective, "chsh | work-bell");
  optimize->add_option("--order", p.order, "work-bell moment order");
  optimize->add_option("--energy", p.energy, "level splitting E (> 0)");
  optimize->add_option("--beta", p.beta, "inverse temperature (>= 0)");
  optimize->add_option("--restarts", p.restarts, "random restarts (default 50)");
  optimize->add_option("--seed", p.seed, "restart seed");
  add_format(optimize, p);
  optimize->callback([&] { outputs = Outputs{run_optimize(p)}; });

  auto* crooks = app.add_subcommand("crooks", "forward/backward ratios per outcome pair");
  add_spec_flags(crooks, p);
  crooks->add_option("--backward", p.backward, "exact-inverse | initial-ht");
  crooks->add_option("--outcome", p.outcome, "specific pair, e.g. +,-");
  add_format(crooks, p);
  crooks->callback([&] { outputs = Outputs{run_crooks(p)}; });

  auto* sample = app.add_subcommand("sample", "Monte Carlo estimates over TPM trajectories");
  add_spec_flags(sample, p);
  sample->add_option("--samples", p.samples, "number of trajectories (default 100000)");
  sample->add_option("--seed", p.seed, "generator seed");
  sample->add_option("--workers", p.workers, "parallel workers (default 1)");
  sample->add_option("--order", p.orders, "moment order, repeatable (default 1 and 2)");
  add_format(sample, p);
  sample->callback([&] { outputs = Outputs{run_sample(p)}; });

  auto* scan = app.add_subcommand("scan", "tabulate a quantity over a parameter grid");
  std::string scan_quantity = "jarzynski";
  scan->add_option("--quantity", scan_quantity, "jarzynski | moment | work-bell");
  scan->add_option("--scan", p.scan, "param=start:stop:steps")->required();
  add_spec_flags(scan, p);
  add_chsh_axes(scan, p);
  scan->add_option("--order", p.order, "moment order for moment/work-bell");
  add_format(scan, p);
  scan->callback([&] { outputs = Outputs{run_scan(p, scan_quantity)}; });

  auto* selftest = app.add_subcommand("selftest", "run all invariant suites");
  selftest->add_option("--seed", p.seed, "suite seed")->default_val(selftest::Options{}.seed);
  selftest->add_flag("--inject-failure", p.inject_failure)->group("");  // test hook
  add_format(selftest, p);

  try {
    app.parse(argc, argv);

    if (selftest->parsed()) {
      selftest::Options options;
      options.seed = p.seed;
      options.inject_failure = p.inject_failure;
      const auto results = selftest::run_all(options, &err);
      Document doc;
      doc.request["subcommand"] = "selftest";
      doc.request["seed"] = options.seed;
      Table t{{"suite", "passed"}, {}};
      int failed = 0;
      for (const auto& r : results) {
        t.rows.push_back({r.name, r.passed ? 1 : 0});
        if (!r.passed) {
          ++failed;
          doc.notes.push_back("failed: " + r.name + " (" + r.detail + ")");
        }
      }
      doc.table = std::move(t);
      doc.results["passed"] = static_cast<int>(results.size()) - failed;
      doc.results["failed"] = failed;
      outputs = Outputs{std::move(doc), failed == 0 ? 0 : 3};
    }

    if (!outputs) throw UsageError("no subcommand executed");
    emit(outputs->doc, p.output_format(), out);
    return outputs->code;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::logic_error& e) {
    err << "numerical error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace tpmlab::cli
