#include "metallic/errors.hpp"
#include "metallic/report.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace metallic;
using nlohmann::ordered_json;

namespace {

RunConfig config(const std::string& entry, int samples = 5) {
  RunConfig c;
  c.entry = entry;
  c.samples = samples;
  c.seed = 42;
  return c;
}

std::vector<std::string> suite_names(const ordered_json& report) {
  std::vector<std::string> out;
  for (const auto& s : report.at("suites")) out.push_back(s.at("suite").get<std::string>());
  return out;
}

}  // namespace

TEST_CASE("suite names") {
  CHECK(parse_suites("all").size() == 4);
  CHECK(parse_suites("slant") == std::vector<Suite>{Suite::slant});
  CHECK_THROWS_AS(parse_suites("everything"), DomainError);
  CHECK(std::string(to_string(Suite::inheritance)) == "inheritance");
}

TEST_CASE("configuration validation") {
  RunConfig c = config("example2");
  c.samples = 0;
  CHECK_THROWS_AS(run(c), DomainError);
  c.samples = 2;
  c.tol_angle = 0.0;
  CHECK_THROWS_AS(run(c), DomainError);
  c.tol_angle = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.tol_angle.reset();
  c.tol_oracle = -1.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  CHECK_THROWS_AS(run(config("torus")), UnknownEntryError);
  RunConfig bad = config("example2");
  bad.params = {{"r2", "0"}};
  CHECK_THROWS_AS(run(bad), DomainError);
}

TEST_CASE("identical configurations give identical reports") {
  for (const std::string entry : {"example2", "linear_slant", "sphere"}) {
    const std::string first = to_json_text(run(config(entry)).report);
    const std::string second = to_json_text(run(config(entry)).report);
    CHECK(first == second);
  }
  RunConfig other = config("sphere");
  other.seed = 43;
  CHECK(to_json_text(run(other).report) != to_json_text(run(config("sphere")).report));
}

TEST_CASE("report layout") {
  const RunResult r = run(config("example2"));
  const ordered_json& j = r.report;
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"schema_version", "metadata", "ambient", "immersion", "pass", "suites",
                                         "extras"});
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("metadata").at("version") == version);
  CHECK(j.at("metadata").at("params").at("r1") == "1");
  CHECK(suite_names(j) == std::vector<std::string>{"structure", "slant", "connection", "inheritance"});
  CHECK(r.passed);
  CHECK(j.at("pass") == true);
}

TEST_CASE("selected suites only") {
  RunConfig c = config("linear_chain");
  c.suites = {Suite::inheritance, Suite::structure};
  const RunResult r = run(c);
  CHECK(suite_names(r.report) == std::vector<std::string>{"structure", "inheritance"});
  CHECK(r.passed);
}

TEST_CASE("failing checks make the run fail") {
  RunConfig c = config("example1");
  c.suites = {Suite::structure};
  c.tol_structure = 1e-300;
  const RunResult r = run(c);
  CHECK_FALSE(r.passed);
  CHECK(r.report.at("pass") == false);
  const std::string summary = summary_text(r);
  CHECK(summary.find("FAIL structure.") != std::string::npos);
  CHECK(summary.find("some checks failed") != std::string::npos);
}

TEST_CASE("floats are written with 17 significant digits and round-trip") {
  ordered_json j;
  j["third"] = 1.0 / 3.0;
  j["tiny"] = 5e-324;
  j["nan"] = std::numeric_limits<double>::quiet_NaN();
  j["inf"] = std::numeric_limits<double>::infinity();
  j["list"] = {0.1, 2};
  const std::string text = to_json_text(j);
  CHECK(text.find("0.33333333333333331") != std::string::npos);
  CHECK(text.find("\"nan\": null") != std::string::npos);
  CHECK(text.find("\"inf\": null") != std::string::npos);
  CHECK(text.find("[0.10000000000000001, 2]") != std::string::npos);
  const ordered_json back = ordered_json::parse(text);
  CHECK(back.at("third").get<double>() == 1.0 / 3.0);
  CHECK(back.at("tiny").get<double>() == 5e-324);
  CHECK(back.at("nan").is_null());
}

TEST_CASE("analysis summary") {
  const ordered_json j = analyze(config("example2"));
  CHECK(j.at("pointwise_class") == "invariant");
  CHECK(j.at("slant").contains("classification"));
  CHECK(j.contains("sigma"));
}

TEST_CASE("oracle table lists gate failures with the three values") {
  RunConfig c = config("example1", 10);
  c.suites = {Suite::structure};
  const RunResult r = run(c);
  CHECK(r.passed);
  const ordered_json& table = r.report.at("extras").at("oracle");
  int gate_failures = 0;
  for (const auto& row : table) {
    if (!row.at("gate_pass").get<bool>()) {
      ++gate_failures;
      CHECK(row.contains("printed"));
      CHECK(row.contains("definitional"));
      CHECK(row.contains("computed"));
    }
  }
  CHECK(gate_failures == 6);
}
