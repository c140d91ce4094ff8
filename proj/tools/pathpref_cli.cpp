// pathpref command line: batch experiments, summaries, scenarios, sessions
// and the HTTP service.

#include <chrono>
#include <csignal>
#include <ctime>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "pathpref/errors.hpp"
#include "pathpref/experiments.hpp"
#include "pathpref/scenario_io.hpp"
#include "pathpref/scenarios.hpp"
#include "pathpref/serialize.hpp"
#include "pathpref/service.hpp"
#include "pathpref/session.hpp"

namespace {

using namespace pathpref;

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct ScenarioSource {
  std::string preset;
  std::string file;
  std::uint64_t layout_seed = 1;

  void add_options(CLI::App* cmd) {
    auto* p = cmd->add_option("--preset", preset, "spec-A, spec-B, spec-C or prm-<n>-<k>-<c>");
    auto* f = cmd->add_option("--scenario", file, "scenario JSON file")->check(CLI::ExistingFile);
    p->excludes(f);
    cmd->add_option("--layout-seed", layout_seed, "seed of the generated layout");
  }

  Scenario load() const {
    if (!file.empty()) return load_scenario(file);
    if (preset.empty()) throw InputError("give --preset or --scenario");
    return build_named_scenario(preset, layout_seed);
  }
};

HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pairwise preference learning over path equivalence regions"};
  app.require_subcommand(1);

  // run
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed_override;
  unsigned jobs = 1;
  auto* run = app.add_subcommand("run", "run a batch experiment and write the CSV dataset");
  run->add_option("--config", config_path, "experiment config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", out_path, "output CSV")->required();
  run->add_option("--seed", seed_override, "override the master seed");
  run->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  // summarize
  std::string in_path;
  std::string report_path;
  auto* summ = app.add_subcommand("summarize", "summarise a batch CSV into a JSON report");
  summ->add_option("--in", in_path, "batch CSV")->required()->check(CLI::ExistingFile);
  summ->add_option("--out", report_path, "report JSON (stdout when omitted)");

  // scenario
  ScenarioSource scen_src;
  std::string scen_out;
  auto* scen = app.add_subcommand("scenario", "generate a scenario file");
  scen_src.add_options(scen);
  scen->add_option("--out", scen_out, "output JSON")->required();

  // regions
  ScenarioSource reg_src;
  std::size_t reg_task = 0;
  std::size_t reg_samples = 2000;
  std::uint64_t reg_seed = 1;
  std::string reg_out;
  auto* reg = app.add_subcommand("regions", "sample equivalence regions and dump them");
  reg_src.add_options(reg);
  reg->add_option("--task", reg_task, "task index");
  reg->add_option("--samples", reg_samples, "uniform weight samples M");
  reg->add_option("--seed", reg_seed, "sampling seed");
  reg->add_option("--out", reg_out, "output JSON (stdout when omitted)");
  reg->add_option("--jobs", jobs, "sampling threads")->check(CLI::PositiveNumber);

  // simulate
  ScenarioSource sim_src;
  std::size_t sim_task = 0;
  std::string sim_selector = "merr";
  std::string sim_user = "merr_constant";
  double sim_accuracy = 0.9;
  double sim_beta = 1.0;
  std::optional<double> sim_phat;
  SessionConfig sim_cfg;
  std::uint64_t sim_seed = 1;
  std::string sim_csv;
  std::string sim_json;
  auto* sim = app.add_subcommand("simulate", "run one session against a simulated user");
  sim_src.add_options(sim);
  sim->add_option("--task", sim_task, "task index");
  sim->add_option("--selector", sim_selector, "merr, mvr or random");
  sim->add_option("--user", sim_user, "merr_constant or mvr_logistic");
  sim->add_option("--accuracy", sim_accuracy, "user accuracy p");
  sim->add_option("--beta", sim_beta, "logistic user beta (also the mvr learner beta)");
  sim->add_option("--p-hat", sim_phat, "assumed accuracy (defaults to --accuracy)");
  sim->add_option("--budget", sim_cfg.budget, "query budget N");
  sim->add_option("--samples", sim_cfg.sample_count, "uniform weight samples M");
  sim->add_option("--seed", sim_seed, "session seed");
  sim->add_option("--csv", sim_csv, "trajectory CSV");
  sim->add_option("--json", sim_json, "result JSON");

  // serve
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string journal;
  auto* serve = app.add_subcommand("serve", "serve the session HTTP API");
  serve->add_option("--host", host, "bind address");
  serve->add_option("--port", port, "port");
  serve->add_option("--journal", journal, "journal directory; sessions survive restarts");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      ExperimentConfig cfg = load_experiment(config_path);
      if (seed_override) cfg.master_seed = *seed_override;
      const BatchResult batch = run_batch(cfg, jobs);
      std::ofstream out(out_path);
      if (!out) throw InputError("cannot write " + out_path);
      write_batch_csv(out, batch, utc_timestamp());
      std::size_t errors = 0;
      for (const auto& r : batch.rows) errors += r.status == "error";
      std::cerr << "wrote " << batch.rows.size() << " rows for " << batch.cells.size()
                << " cells to " << out_path;
      if (errors) std::cerr << " (" << errors << " failed trials)";
      std::cerr << '\n';
    } else if (*summ) {
      std::ifstream in(in_path);
      const auto report = summary_to_json(summarize(read_batch_csv(in)));
      if (report_path.empty()) {
        std::cout << report.dump(2) << '\n';
      } else {
        std::ofstream(report_path) << report.dump(2) << '\n';
      }
    } else if (*scen) {
      const Scenario s = scen_src.load();
      save_scenario(scen_out, s);
      std::cerr << s.name << ": " << s.graph.num_vertices() << " vertices, "
                << s.graph.num_edges() << " edges, " << s.constraints.dimension()
                << " constraints\n";
    } else if (*reg) {
      const Scenario s = reg_src.load();
      if (reg_task >= s.tasks.size()) throw InputError("task index out of range");
      const RegionSet regions = sample_regions(s.graph, s.constraints, s.tasks[reg_task],
                                               reg_samples, reg_seed, jobs);
      const auto doc = region_set_to_json(regions).dump(1);
      if (reg_out.empty()) {
        std::cout << doc << '\n';
      } else {
        std::ofstream(reg_out) << doc << '\n';
      }
      std::cerr << regions.size() << " regions\n";
    } else if (*sim) {
      const Scenario s = sim_src.load();
      if (sim_task >= s.tasks.size()) throw InputError("task index out of range");
      sim_cfg.selector = selector_from_string(sim_selector);
      const UserModel model = user_model_from_string(sim_user);
      sim_cfg.assumed_accuracy = sim_phat.value_or(sim_accuracy);
      sim_cfg.mvr_beta = sim_beta;
      // The hidden weight: uniform over the box, seeded from the session seed.
      std::mt19937_64 rng(splitmix64(sim_seed));
      const WeightVector lo = s.constraints.lower_corner();
      const WeightVector hi = s.constraints.upper_corner();
      std::vector<double> w(lo.size());
      for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
      }
      SimulatedUser user(model, WeightVector(w),
                         model == UserModel::MerrConstant ? sim_accuracy : sim_beta,
                         splitmix64(sim_seed + 1));
      const SessionResult res = run_session(s, sim_task, user, sim_cfg, sim_seed);
      std::cout << "regions " << res.region_count << ", executed " << res.executed()
                << ", true region "
                << (res.true_region ? std::to_string(*res.true_region) : "unsampled")
                << ", final posterior of true region " << format_number(res.true_trajectory.back())
                << ", best region " << res.best.region << '\n';
      if (!sim_csv.empty()) {
        std::ofstream out(sim_csv);
        write_trajectory_csv(out, res);
      }
      if (!sim_json.empty()) std::ofstream(sim_json) << session_result_to_json(res).dump(1) << '\n';
    } else if (*serve) {
      std::optional<std::filesystem::path> dir;
      if (!journal.empty()) dir = journal;
      SessionService service(dir);
      const std::size_t restored = service.restore();
      if (restored) std::cerr << "restored " << restored << " sessions\n";
      HttpServer server(service);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      const int bound = server.bind(host, port);
      if (bound < 0) throw InputError("cannot bind " + host + ":" + std::to_string(port));
      std::cerr << "listening on " << host << ':' << bound << '\n';
      server.serve();
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
