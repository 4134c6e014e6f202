#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "tpmlab/cli.hpp"

using nlohmann::json;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;

  json doc() const { return json::parse(out); }
};

CliResult run_cli(std::vector<std::string> args) {
  std::vector<const char*> argv{"tpmlab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code =
      tpmlab::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("jarzynski subcommand returns 1") {
  const CliResult r = run_cli(
      {"jarzynski", "--energy", "1", "--beta", "1", "--axis-i", "0,0", "--axis-f", "1.5707963,0"});
  REQUIRE(r.code == 0);
  const json doc = r.doc();
  CHECK(doc["results"]["jarzynski_average"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(doc["results"]["free_energy_difference"].get<double>() == doctest::Approx(0.0));
  CHECK(doc["request"]["subcommand"] == "jarzynski");
}

TEST_CASE("jarzynski is 1 for every evolution mode") {
  const CliResult quench = run_cli({"jarzynski", "--energy-final", "1.7", "--beta", "0.8",
                                    "--axis-f", "0.9,2.1"});
  REQUIRE(quench.code == 0);
  CHECK(quench.doc()["results"]["jarzynski_average"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-9));

  const CliResult ht = run_cli({"jarzynski", "--energy-final", "1.7", "--beta", "0.8", "--axis-f",
                                "0.9,2.1", "--evolution", "final-ht", "--time", "3.4"});
  REQUIRE(ht.code == 0);
  CHECK(ht.doc()["results"]["jarzynski_average"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-9));

  const CliResult rot =
      run_cli({"jarzynski", "--energy-final", "1.7", "--beta", "0.8", "--axis-f", "0.9,2.1",
               "--evolution", "explicit", "--rot-axis", "1.0,0.5", "--rot-angle", "2.2"});
  REQUIRE(rot.code == 0);
  CHECK(rot.doc()["results"]["jarzynski_average"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rot.doc()["request"]["rot_angle"].get<double>() == doctest::Approx(2.2));
}

TEST_CASE("chsh --optimal reproduces the quantum maximum") {
  const CliResult r = run_cli({"chsh", "--optimal"});
  REQUIRE(r.code == 0);
  CHECK(r.doc()["results"]["chsh"].get<double>() == doctest::Approx(2.828427).epsilon(1e-6));
}

TEST_CASE("work-bell --order 2 --optimal") {
  const CliResult r = run_cli({"work-bell", "--order", "2", "--optimal", "--energy", "1"});
  REQUIRE(r.code == 0);
  const json doc = r.doc();
  CHECK(doc["results"]["value"].get<double>() == doctest::Approx(9.65685425).epsilon(1e-8));
  CHECK(doc["results"]["exp_combination"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("json output round-trips and is byte-stable") {
  const std::vector<std::string> args{"work-dist", "--energy", "1", "--beta", "1",
                                      "--axis-f",  "1.5707963,0"};
  const CliResult a = run_cli(args);
  const CliResult b = run_cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  const json parsed = json::parse(a.out);
  CHECK(json::parse(parsed.dump(2)) == parsed);
  // document shape
  CHECK(parsed.contains("request"));
  CHECK(parsed.contains("results"));
  CHECK(parsed.contains("table"));
  CHECK(parsed.contains("notes"));
}

TEST_CASE("work-dist table and csv") {
  const CliResult r = run_cli({"work-dist", "--axis-f", "1.5707963,0"});
  REQUIRE(r.code == 0);
  const json doc = r.doc();
  CHECK(doc["results"]["support_size"].get<int>() == 3);
  CHECK(doc["table"]["columns"] == json::array({"work", "probability"}));
  CHECK(doc["table"]["rows"].size() == 3);

  const CliResult csv = run_cli({"work-dist", "--axis-f", "1.5707963,0", "--format", "csv"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.substr(0, 17) == "work,probability\n");
  CHECK(csv.out.find('\r') == std::string::npos);
  CHECK(csv.out.find("0.5") != std::string::npos);
}

TEST_CASE("scan over time is constant for jarzynski") {
  const CliResult r = run_cli({"scan", "--quantity", "jarzynski", "--scan", "time=0:10:11",
                               "--evolution", "final-ht", "--axis-f", "1.2,0.4"});
  REQUIRE(r.code == 0);
  const json rows = r.doc()["table"]["rows"];
  REQUIRE(rows.size() == 11);
  for (const auto& row : rows)
    CHECK(row[1].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("scan beta of the first-moment work combination") {
  const CliResult r = run_cli({"scan", "--quantity", "work-bell", "--order", "1", "--optimal",
                               "--scan", "beta=0:3:31"});
  REQUIRE(r.code == 0);
  const json rows = r.doc()["table"]["rows"];
  REQUIRE(rows.size() == 31);
  CHECK(rows[0][1].get<double>() == doctest::Approx(0.0));
  CHECK(rows[30][1].get<double>() == doctest::Approx(0.824330349).epsilon(1e-8));
  // monotone growth in beta
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i][1].get<double>() >= rows[i - 1][1].get<double>() - 1e-12);
}

TEST_CASE("scan over the final-axis polar angle") {
  // <W> = -tanh(beta E)(1 - cos theta): 0 at aligned axes, -2 tanh(1) at
  // opposite axes.
  const CliResult r = run_cli({"scan", "--quantity", "moment", "--order", "1", "--scan",
                               "angle-theta-f=0:3.14159265358979:5"});
  REQUIRE(r.code == 0);
  const json rows = r.doc()["table"]["rows"];
  REQUIRE(rows.size() == 5);
  CHECK(rows[0][1].get<double>() == doctest::Approx(0.0));
  CHECK(rows[4][1].get<double>() == doctest::Approx(-2 * std::tanh(1.0)).epsilon(1e-8));
}

TEST_CASE("scan beta of the second moment is a constant column") {
  const CliResult r = run_cli({"scan", "--quantity", "work-bell", "--order", "2", "--optimal",
                               "--scan", "beta=0.1:10:5", "--format", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "beta,value");
  int rows = 0;
  while (std::getline(lines, line)) {
    CHECK(line.substr(line.find(',') + 1) == "9.65685425");
    ++rows;
  }
  CHECK(rows == 5);
}

TEST_CASE("argument errors exit with code 2") {
  CHECK(run_cli({"unknown-subcommand"}).code == 2);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"jarzynski", "--axis-i", "bogus"}).code == 2);
  CHECK(run_cli({"jarzynski", "--axis-i-xyz", "1,1,1"}).code == 2);
  CHECK(run_cli({"jarzynski", "--axis-i", "0,0", "--axis-i-xyz", "0,0,1"}).code == 2);
  CHECK(run_cli({"jarzynski", "--beta", "-1"}).code == 2);
  CHECK(run_cli({"jarzynski", "--format", "csv"}).code == 2);  // no table
  CHECK(run_cli({"scan", "--quantity", "jarzynski", "--scan", "beta=0:1:1"}).code == 2);
  CHECK(run_cli({"scan", "--quantity", "work-bell", "--scan", "time=0:1:5"}).code == 2);
  CHECK(run_cli({"scan", "--quantity", "jarzynski", "--scan", "time=0:1:5"}).code == 2);
  CHECK(run_cli({"moments", "--order", "61"}).code == 2);

  const CliResult unknown = run_cli({"unknown-subcommand"});
  CHECK(!unknown.err.empty());
}

TEST_CASE("help exits cleanly") {
  const CliResult r = run_cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("jarzynski") != std::string::npos);
}

TEST_CASE("crooks table and degenerate outcome") {
  const CliResult r = run_cli({"crooks", "--axis-f", "1.5707963,0"});
  REQUIRE(r.code == 0);
  const json doc = r.doc();
  CHECK(doc["table"]["rows"].size() == 4);
  for (const auto& row : doc["table"]["rows"])
    CHECK(row[4].get<double>() == doctest::Approx(row[5].get<double>()).epsilon(1e-9));

  // opposite axes: the (+,+) pair has no support either way
  const CliResult degenerate =
      run_cli({"crooks", "--axis-i", "0,0", "--axis-f", "3.14159265358979,0", "--outcome", "+,+"});
  CHECK(degenerate.code == 3);
}

TEST_CASE("sample subcommand") {
  const std::vector<std::string> args{"sample",  "--samples", "20000", "--seed", "7",
                                      "--axis-f", "1.5707963,0"};
  const CliResult a = run_cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == run_cli(args).out);  // fixed seed, byte-identical
  const json doc = a.doc();
  CHECK(doc["table"]["columns"] ==
        json::array({"estimator", "mean", "std_error", "samples"}));
  REQUIRE(doc["table"]["rows"].size() == 3);  // jarzynski + orders 1, 2
  CHECK(doc["table"]["rows"][0][0] == "jarzynski");
  CHECK(doc["results"]["jarzynski_mean"].get<double>() == doctest::Approx(1.0).epsilon(0.1));

  const CliResult single = run_cli({"sample", "--samples", "1"});
  REQUIRE(single.code == 0);
  CHECK(single.doc()["notes"].size() == 1);
}

TEST_CASE("bell3 convention note and values") {
  const CliResult minus = run_cli({"bell3", "--axis-a", "0,0", "--axis-b1", "1.0471975511965976,0",
                                   "--axis-b2", "2.0943951023931953,0"});
  REQUIRE(minus.code == 0);
  const json doc = minus.doc();
  CHECK(doc["results"]["lhs"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(doc["results"]["rhs"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(doc["results"]["violated"].get<int>() == 1);
  CHECK(doc["notes"].size() == 1);

  const CliResult plus = run_cli({"bell3", "--axis-a", "0,0", "--axis-b1", "1.0471975511965976,0",
                                  "--axis-b2", "2.0943951023931953,0", "--convention", "plus"});
  CHECK(plus.doc()["results"]["violated"].get<int>() == 0);
}

TEST_CASE("optimize subcommand") {
  const CliResult r = run_cli({"optimize", "--objective", "chsh", "--restarts", "8", "--seed",
                               "11"});
  REQUIRE(r.code == 0);
  CHECK(r.doc()["results"]["value"].get<double>() == doctest::Approx(2.828427).epsilon(1e-5));

  const CliResult w = run_cli({"optimize", "--objective", "work-bell", "--order", "1",
                               "--restarts", "8", "--seed", "12"});
  REQUIRE(w.code == 0);
  CHECK(w.doc()["results"]["value"].get<double>() == doctest::Approx(0.630925257).epsilon(1e-5));
}

TEST_CASE("selftest registry and exit codes") {
  const CliResult r = run_cli({"selftest"});
  REQUIRE(r.code == 0);
  const json doc = r.doc();
  CHECK(doc["results"]["failed"].get<int>() == 0);
  std::vector<std::string> suites;
  for (const auto& row : doc["table"]["rows"]) suites.push_back(row[0].get<std::string>());
  for (const char* required : {"jarzynski-identity", "tsirelson", "crooks"})
    CHECK(std::find(suites.begin(), suites.end(), required) != suites.end());
  CHECK(r.err.find("[PASS] jarzynski-identity") != std::string::npos);

  const CliResult broken = run_cli({"selftest", "--inject-failure"});
  CHECK(broken.code == 3);
  CHECK(broken.doc()["results"]["failed"].get<int>() == 1);
}
