#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "instances.hpp"
#include "pathpref/errors.hpp"
#include "pathpref/scenario_io.hpp"
#include "pathpref/scenarios.hpp"
#include "pathpref/serialize.hpp"

using namespace pathpref;
using nlohmann::json;

namespace {

std::string error_of(const json& doc) {
  try {
    scenario_from_json(doc);
  } catch (const SchemaError& err) {
    return err.what();
  }
  return {};
}

}  // namespace

TEST(ScenarioIo, RoundTripGeneratedScenarios) {
  for (const char* name : {"spec-A", "spec-C", "prm-150-6-8"}) {
    const Scenario s = build_named_scenario(name, 3);
    EXPECT_TRUE(scenario_from_json(scenario_to_json(s)) == s) << name;
    EXPECT_TRUE(parse_scenario(scenario_to_json(s).dump()) == s) << name;
  }
}

TEST(ScenarioIo, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "pathpref_io_test.json";
  const Scenario s = build_named_scenario("spec-B", 2);
  save_scenario(path, s);
  EXPECT_TRUE(load_scenario(path) == s);
  std::filesystem::remove(path);
}

TEST(ScenarioIo, MissingEdgesNamesTheKey) {
  auto doc = scenario_to_json(build_named_scenario("spec-A", 1));
  doc.erase("edges");
  const auto msg = error_of(doc);
  EXPECT_NE(msg.find("edges"), std::string::npos) << msg;
}

TEST(ScenarioIo, WrongTypeReportsThePath) {
  auto doc = scenario_to_json(build_named_scenario("spec-A", 1));
  doc["edges"][3]["tail"] = "three";
  const auto msg = error_of(doc);
  EXPECT_NE(msg.find("/edges/3/tail"), std::string::npos) << msg;
}

TEST(ScenarioIo, TruncatedTextIsAParseError) {
  const auto text = scenario_to_json(build_named_scenario("spec-A", 1)).dump();
  try {
    parse_scenario(text.substr(0, text.size() / 2));
    FAIL() << "expected a parse error";
  } catch (const SchemaError& err) {
    EXPECT_NE(std::string(err.what()).find("parse error"), std::string::npos);
  }
}

TEST(ScenarioIo, RejectsUnknownSchemaVersionAndSparseIds) {
  auto doc = scenario_to_json(build_named_scenario("spec-A", 1));
  doc["schema_version"] = 7;
  EXPECT_FALSE(error_of(doc).empty());
  doc = scenario_to_json(build_named_scenario("spec-A", 1));
  doc["vertices"][0]["id"] = 100000;
  EXPECT_FALSE(error_of(doc).empty());
}

TEST(ScenarioIo, MissingFileIsReported) {
  EXPECT_ANY_THROW(load_scenario("/nonexistent/pathpref.json"));
}

TEST(Serialize, NumberFormatIsFixed) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(1e-20), "1e-20");
  EXPECT_EQ(format_number(2.0), "2");
}

TEST(Serialize, PosteriorSnapshotFields) {
  PosteriorState state({0.25, 0.75});
  const auto snap = posterior_snapshot(state);
  ASSERT_EQ(snap.size(), 2u);
  EXPECT_EQ(snap[1]["region"], 1);
  EXPECT_DOUBLE_EQ(snap[1]["probability"].get<double>(), 0.75);
  EXPECT_DOUBLE_EQ(snap[1]["q"].get<double>(), 0.75);
  EXPECT_EQ(snap[1]["canonical_path_id"], 1);
}

TEST(Serialize, ObservationRoundTripAndValidation) {
  const Observation o{2, 5, Choice::J, 0.85, 7};
  EXPECT_EQ(observation_from_json(observation_to_json(o)), o);
  auto bad = observation_to_json(o);
  bad["choice"] = "k";
  EXPECT_THROW(observation_from_json(bad), SchemaError);
  bad.erase("choice");
  EXPECT_THROW(observation_from_json(bad), SchemaError);
}

TEST(Serialize, PriorNames) {
  EXPECT_EQ(prior_from_string(to_string(PriorKind::Uniform)), PriorKind::Uniform);
  EXPECT_EQ(prior_from_string(to_string(PriorKind::SupportProportional)),
            PriorKind::SupportProportional);
  EXPECT_THROW(prior_from_string("jeffreys"), InputError);
}

TEST(Serialize, TrajectoryCsvLongFormat) {
  const auto s = testsupport::as_scenario(testsupport::two_route_instance(10.0, 5.0, 10.0));
  SessionConfig c;
  c.budget = 3;
  c.sample_count = 200;
  SimulatedUser user(UserModel::MerrConstant, WeightVector{2.0}, 0.9, 1);
  const auto res = run_session(s, 0, user, c, 4);
  std::ostringstream out;
  write_trajectory_csv(out, res);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "seed,iteration,region_id,posterior,is_true_region,current_path_id");
  int rows = 0;
  int truth_rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    ASSERT_EQ(cols.size(), 6u);
    truth_rows += cols[4] == "1";
  }
  EXPECT_EQ(rows, int(res.trajectory.size() * res.region_count));
  EXPECT_EQ(truth_rows, int(res.trajectory.size()));
  const auto doc = session_result_to_json(res);
  EXPECT_EQ(doc["executed_iterations"], res.executed());
  EXPECT_EQ(doc["observations"].size(), res.log.size());
  EXPECT_EQ(doc["true_trajectory"].size(), res.trajectory.size());
}

TEST(Serialize, RegionSetDump) {
  const auto s = testsupport::as_scenario(testsupport::two_route_instance(10.0, 5.0, 10.0));
  auto rs = sample_regions(s.graph, s.constraints, s.tasks[0], 100, 3);
  const auto doc = region_set_to_json(rs);
  EXPECT_EQ(doc["regions"].size(), rs.size());
  EXPECT_EQ(doc["sample_count"], 100);
  EXPECT_EQ(doc["regions"][0]["path"]["edges"], json(rs[0].canonical_path.edges));
  EXPECT_EQ(doc["regions"][0]["support_count"], rs[0].support_count());
}
