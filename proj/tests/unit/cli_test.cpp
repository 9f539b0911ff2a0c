#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "gsopt/cli/commands.hpp"

using namespace gsopt;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("gsopt_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

cli::RunConfig small() {
  auto c = cli::default_run_config();
  c.sim_days = 1.0;
  c.limits.time_s = 20.0;
  return c;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(GSOPT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path write_json(const std::string& name, const std::string& text) {
  const auto p = scratch(name);
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST(RunConfig, DefaultsMatchTheDesignTable) {
  const auto c = cli::default_run_config();
  EXPECT_EQ(c.seed, 1u);
  EXPECT_EQ(c.sim_days, 7.0);
  EXPECT_EQ(c.opt_days, 365.0);
  EXPECT_EQ(c.min_elevation_deg, 10.0);
  EXPECT_EQ(c.constraints.objective, model::Objective::MinCost);
  EXPECT_EQ(c.window_days.size(), 13u);
  EXPECT_EQ(c.trials, 10);
  EXPECT_EQ(c.constellation_sizes, (std::vector<int>{1, 2}));
  EXPECT_NO_THROW(cli::check_run_config(c));
}

TEST(RunConfig, RejectsUnknownKeysAndBadValues) {
  auto c = cli::default_run_config();
  EXPECT_THROW(cli::apply_run_json(model::Json::parse(R"({"bogus": 1})"), c), model::ConfigError);
  EXPECT_THROW(cli::apply_run_json(model::Json::parse(R"({"solver": {"gap": 1}})"), c), model::ConfigError);
  EXPECT_THROW(cli::apply_run_json(model::Json::parse(R"({"seed": "one"})"), c), model::ConfigError);
  EXPECT_THROW(cli::apply_run_json(model::Json::parse(R"({"constraints": {"objective": "fastest"}})"), c),
               model::ConfigError);
  auto d = cli::default_run_config();
  d.providers = 3;
  EXPECT_THROW(cli::check_run_config(d), model::ConfigError);
  d = cli::default_run_config();
  d.start = "yesterday";
  EXPECT_THROW(cli::check_run_config(d), model::ConfigError);
  d = cli::default_run_config();
  d.propagator = "kepler";
  EXPECT_THROW(cli::check_run_config(d), model::ConfigError);
}

TEST(RunConfig, ObjectiveSelectsItsDefaults) {
  auto c = cli::default_run_config();
  cli::apply_run_json(model::Json::parse(R"({"constraints": {"objective": "max_data", "e_max": 5000}})"), c);
  EXPECT_EQ(c.constraints.objective, model::Objective::MaxData);
  ASSERT_TRUE(c.constraints.e_max);
  EXPECT_EQ(*c.constraints.e_max, 5000.0);
}

TEST(RunConfig, EchoRoundTrips) {
  auto c = cli::default_run_config();
  c.seed = 77;
  c.satellites = 3;
  c.limits.time_s = 12.5;
  auto d = cli::default_run_config();
  cli::apply_run_json(cli::run_config_to_json(c), d);
  EXPECT_EQ(cli::run_config_to_json(c), cli::run_config_to_json(d));
}

TEST(Guarded, MapsFailuresToExitCodes) {
  std::ostringstream err;
  EXPECT_EQ(cli::guarded([] {}, err), cli::kExitOk);
  EXPECT_EQ(cli::guarded([] { throw model::ConfigError("x"); }, err), cli::kExitConfig);
  EXPECT_EQ(cli::guarded([] { throw std::runtime_error("y"); }, err), cli::kExitCompute);
}

TEST(Commands, OptimizeIsDeterministicAndWritesArtifacts) {
  const auto c = small();
  const auto a = scratch("opt_a"), b = scratch("opt_b");
  const auto ra = cli::cmd_optimize(c, a.string());
  cli::cmd_optimize(c, b.string());
  ASSERT_TRUE(ra.solution.has_incumbent());
  for (const char* f : {"solution.json", "metrics.csv", "map.geojson"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  const auto doc = model::Json::parse(slurp(a / "solution.json"));
  EXPECT_EQ(doc["seed"], 1);
  EXPECT_EQ(doc["selected_locations"].size(), ra.solution.selected_locations.size());
  const auto geo = model::Json::parse(slurp(a / "map.geojson"));
  EXPECT_EQ(geo["features"].size(), 2 * ra.solution.selected_locations.size());
  EXPECT_EQ(slurp(a / "metrics.csv").rfind(cli::kMetricsCsvHeader, 0), 0u);
}

TEST(Commands, SavedScenarioReproducesTheGeneratedOne) {
  auto c = small();
  const auto dir = scratch("gen");
  cli::cmd_scenario_gen(c, dir.string());
  const auto direct = cli::cmd_optimize(c, scratch("gen_direct").string());
  c.scenario = (dir / "scenario.json").string();
  const auto loaded = cli::cmd_optimize(c, scratch("gen_loaded").string());
  EXPECT_EQ(direct.contacts.size(), loaded.contacts.size());
  EXPECT_EQ(direct.solution.selected_contacts, loaded.solution.selected_contacts);
  ASSERT_TRUE(loaded.solution.has_incumbent());
  EXPECT_NEAR(*direct.solution.certificate.objective, *loaded.solution.certificate.objective,
              1e-9 * std::abs(*direct.solution.certificate.objective));
}

TEST(Commands, ContactsAndExport) {
  const auto c = small();
  const auto dir = scratch("contacts");
  const auto cs = cli::cmd_contacts(c, dir.string());
  EXPECT_EQ(lines(slurp(dir / "contacts.csv")), cs.size() + 1);
  const auto m = cli::cmd_export_lp(c, dir.string());
  EXPECT_TRUE(fs::exists(dir / "model.lp"));
  EXPECT_EQ(m.contact_var.size(), cs.size());
}

TEST(Commands, BaselineRowsPerSubset) {
  auto c = small();
  c.trials = 1;
  c.constellation_sizes = {1};
  c.subset_time_limit_s = 5.0;
  c.limits.time_s = 10.0;
  const auto dir = scratch("baseline");
  const auto doc = cli::cmd_baseline(c, dir.string());
  const auto csv = slurp(dir / "baseline.csv");
  EXPECT_EQ(csv.rfind(cli::kBaselineCsvHeader, 0), 0u);
  const auto n = cli::build_scenario(c).providers.size();
  EXPECT_EQ(lines(csv), n + 1);
  EXPECT_EQ(doc["runs"].size(), 1u);
}

TEST(Commands, WindowStudyRows) {
  auto c = small();
  c.window_days = {2, 1};
  c.window_sample = 2;
  const auto dir = scratch("window");
  const auto stats = cli::cmd_window_study(c, dir.string());
  ASSERT_EQ(stats.size(), 2u);
  EXPECT_EQ(stats[0].window_days, 1);
  EXPECT_EQ(lines(slurp(dir / "window_study.csv")), 3u);
}

TEST(Binary, ExitCodes) {
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli(""), cli::kExitConfig);
  EXPECT_EQ(run_cli("optimize --no-such-flag"), cli::kExitConfig);
  EXPECT_EQ(run_cli("optimize --objective fastest"), cli::kExitConfig);
  const auto bad = write_json("bad.json", R"({"constraints": {"objective": "max_data", "e_max": null}})");
  EXPECT_EQ(run_cli("optimize --config " + bad.string() + " --out " + scratch("bad_out").string()),
            cli::kExitConfig);
  const auto unknown = write_json("unknown.json", R"({"satelites": 2})");
  EXPECT_EQ(run_cli("optimize --config " + unknown.string()), cli::kExitConfig);
  EXPECT_EQ(run_cli("optimize --config /nonexistent/run.json"), cli::kExitConfig);
}

TEST(Binary, ScenarioGenIsReproducible) {
  const auto a = scratch("sg_a"), b = scratch("sg_b");
  ASSERT_EQ(run_cli("scenario-gen --seed 42 --out " + a.string()), 0);
  ASSERT_EQ(run_cli("scenario-gen --seed 42 --out " + b.string()), 0);
  EXPECT_EQ(slurp(a / "scenario.json"), slurp(b / "scenario.json"));
  const auto c = scratch("sg_c");
  ASSERT_EQ(run_cli("scenario-gen --seed 43 --out " + c.string()), 0);
  EXPECT_NE(slurp(a / "scenario.json"), slurp(c / "scenario.json"));
}
