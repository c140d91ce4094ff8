#include "pathpref/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "pathpref/errors.hpp"
#include "pathpref/scenario_io.hpp"
#include "pathpref/scenarios.hpp"
#include "pathpref/serialize.hpp"
#include "pathpref/session.hpp"

namespace pathpref {

using nlohmann::json;

std::string ScenarioSpec::label() const {
  std::string base = preset.empty() ? file.filename().string() : preset;
  if (!preset.empty() && layout_seed != 1) base += "@" + std::to_string(layout_seed);
  return base + "#" + std::to_string(task);
}

double UserSpec::nominal_accuracy() const {
  if (model == UserModel::MerrConstant) {
    if (!accuracy) throw InputError("merr_constant user needs an accuracy");
    return *accuracy;
  }
  if (target_accuracy) return *target_accuracy;
  if (accuracy) return *accuracy;
  throw InputError("mvr_logistic user with a fixed beta needs an accuracy for p-hat policies");
}

std::string UserSpec::label() const {
  std::string out(to_string(model));
  if (model == UserModel::MerrConstant) return out + ":p=" + format_number(*accuracy);
  if (target_accuracy) return out + ":target=" + format_number(*target_accuracy);
  return out + ":beta=" + format_number(*beta);
}

std::string AccuracyPolicy::label() const {
  if (!relative) return format_number(value);
  if (value == 0.0) return "p";
  return value > 0.0 ? "p+" + format_number(value) : "p-" + format_number(-value);
}

// ---- config ----------------------------------------------------------------

namespace {

AccuracyPolicy policy_from_json(const json& j) {
  if (j.is_number()) return {false, j.get<double>()};
  if (!j.is_string()) throw SchemaError("p-hat policy must be a number or \"p\", \"p+x\", \"p-x\"");
  const std::string s = j.get<std::string>();
  if (s == "p") return {true, 0.0};
  if (s.size() > 2 && s[0] == 'p' && (s[1] == '+' || s[1] == '-')) {
    try {
      const double v = std::stod(s.substr(2));
      return {true, s[1] == '+' ? v : -v};
    } catch (const std::exception&) {
    }
  }
  throw SchemaError("bad p-hat policy '" + s + "'");
}

json policy_to_json(const AccuracyPolicy& p) {
  if (!p.relative) return p.value;
  return p.label();
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

ExperimentConfig experiment_from_json(const json& doc) {
  ExperimentConfig cfg;
  try {
    if (!doc.is_object()) throw SchemaError("experiment config must be an object");
    const int version = get_or<int>(doc, "schema_version", kBatchSchemaVersion);
    if (version != kBatchSchemaVersion) throw SchemaError("unsupported experiment schema version");
    cfg.name = get_or<std::string>(doc, "name", cfg.name);
    cfg.master_seed = get_or<std::uint64_t>(doc, "master_seed", cfg.master_seed);
    cfg.trials = get_or<int>(doc, "trials", cfg.trials);
    cfg.budget = get_or<int>(doc, "budget", cfg.budget);
    cfg.sample_count = get_or<std::size_t>(doc, "sample_count", cfg.sample_count);
    cfg.prior = prior_from_string(get_or<std::string>(doc, "prior", "uniform"));
    if (doc.contains("stop_threshold") && !doc.at("stop_threshold").is_null()) {
      cfg.stop_threshold = doc.at("stop_threshold").get<double>();
    }
    if (doc.contains("mvr_beta") && !doc.at("mvr_beta").is_null()) {
      cfg.mvr_beta = doc.at("mvr_beta").get<double>();
    }
    cfg.true_weight = get_or<std::string>(doc, "true_weight", cfg.true_weight);

    if (!doc.contains("scenarios")) throw SchemaError("missing key 'scenarios'");
    for (const auto& js : doc.at("scenarios")) {
      ScenarioSpec s;
      if (js.is_string()) {
        s.preset = js.get<std::string>();
      } else {
        s.preset = get_or<std::string>(js, "preset", "");
        s.file = get_or<std::string>(js, "file", "");
        s.layout_seed = get_or<std::uint64_t>(js, "layout_seed", 1);
        s.task = get_or<std::size_t>(js, "task", 0);
      }
      cfg.scenarios.push_back(std::move(s));
    }
    if (!doc.contains("users")) throw SchemaError("missing key 'users'");
    for (const auto& ju : doc.at("users")) {
      UserSpec u;
      u.model = user_model_from_string(ju.at("model").get<std::string>());
      if (ju.contains("accuracy")) u.accuracy = ju.at("accuracy").get<double>();
      if (ju.contains("beta")) u.beta = ju.at("beta").get<double>();
      if (ju.contains("target_accuracy")) u.target_accuracy = ju.at("target_accuracy").get<double>();
      u.tolerance = get_or<double>(ju, "tolerance", u.tolerance);
      cfg.users.push_back(u);
    }
    if (doc.contains("selectors")) {
      cfg.selectors.clear();
      for (const auto& s : doc.at("selectors")) {
        cfg.selectors.push_back(selector_from_string(s.get<std::string>()));
      }
    }
    if (doc.contains("assumed_accuracy")) {
      cfg.policies.clear();
      const json& ja = doc.at("assumed_accuracy");
      if (ja.is_array()) {
        for (const auto& p : ja) cfg.policies.push_back(policy_from_json(p));
      } else {
        cfg.policies.push_back(policy_from_json(ja));
      }
    }
  } catch (const json::exception& err) {
    throw SchemaError(std::string("malformed experiment config: ") + err.what());
  } catch (const InputError& err) {
    throw SchemaError(std::string("malformed experiment config: ") + err.what());
  }

  if (cfg.trials < 1) throw SchemaError("trials must be at least 1");
  if (cfg.budget < 0) throw SchemaError("budget must be nonnegative");
  if (cfg.sample_count < 1) throw SchemaError("sample_count must be at least 1");
  if (cfg.true_weight != "uniform" && cfg.true_weight != "sample") {
    throw SchemaError("true_weight must be \"uniform\" or \"sample\"");
  }
  if (cfg.scenarios.empty() || cfg.users.empty() || cfg.selectors.empty() ||
      cfg.policies.empty()) {
    throw SchemaError("scenarios, users, selectors and assumed_accuracy must be nonempty");
  }
  for (const auto& s : cfg.scenarios) {
    if (s.preset.empty() == s.file.empty()) {
      throw SchemaError("each scenario needs exactly one of 'preset' or 'file'");
    }
  }
  for (const auto& u : cfg.users) {
    if (u.model == UserModel::MerrConstant && !u.accuracy) {
      throw SchemaError("merr_constant users need 'accuracy'");
    }
    if (u.model == UserModel::MvrLogistic && !u.beta == !u.target_accuracy) {
      throw SchemaError("mvr_logistic users need exactly one of 'beta' or 'target_accuracy'");
    }
    for (const auto& p : cfg.policies) {
      double ph = 0.0;
      try {
        ph = p.resolve(u.nominal_accuracy());
      } catch (const InputError& err) {
        throw SchemaError(err.what());
      }
      if (!(ph > 0.5 && ph <= 1.0 + 1e-12)) {
        throw SchemaError("p-hat policy " + p.label() + " leaves (0.5, 1] for user " + u.label());
      }
    }
  }
  return cfg;
}

json experiment_to_json(const ExperimentConfig& cfg) {
  json doc{{"schema_version", kBatchSchemaVersion},
           {"name", cfg.name},
           {"master_seed", cfg.master_seed},
           {"trials", cfg.trials},
           {"budget", cfg.budget},
           {"sample_count", cfg.sample_count},
           {"prior", std::string(to_string(cfg.prior))},
           {"true_weight", cfg.true_weight}};
  if (cfg.stop_threshold) doc["stop_threshold"] = *cfg.stop_threshold;
  if (cfg.mvr_beta) doc["mvr_beta"] = *cfg.mvr_beta;
  json scen = json::array();
  for (const auto& s : cfg.scenarios) {
    json js{{"layout_seed", s.layout_seed}, {"task", s.task}};
    if (!s.preset.empty()) js["preset"] = s.preset;
    if (!s.file.empty()) js["file"] = s.file.string();
    scen.push_back(std::move(js));
  }
  doc["scenarios"] = std::move(scen);
  json users = json::array();
  for (const auto& u : cfg.users) {
    json ju{{"model", std::string(to_string(u.model))}, {"tolerance", u.tolerance}};
    if (u.accuracy) ju["accuracy"] = *u.accuracy;
    if (u.beta) ju["beta"] = *u.beta;
    if (u.target_accuracy) ju["target_accuracy"] = *u.target_accuracy;
    users.push_back(std::move(ju));
  }
  doc["users"] = std::move(users);
  json sel = json::array();
  for (auto s : cfg.selectors) sel.push_back(std::string(to_string(s)));
  doc["selectors"] = std::move(sel);
  json pol = json::array();
  for (const auto& p : cfg.policies) pol.push_back(policy_to_json(p));
  doc["assumed_accuracy"] = std::move(pol);
  return doc;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open experiment config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& err) {
    throw SchemaError("parse error at byte " + std::to_string(err.byte) + ": " + err.what());
  }
  ExperimentConfig cfg = experiment_from_json(doc);
  // Scenario files are relative to the config.
  for (auto& s : cfg.scenarios) {
    if (!s.file.empty() && s.file.is_relative()) s.file = path.parent_path() / s.file;
  }
  return cfg;
}

std::vector<CellSpec> expand_cells(const ExperimentConfig& cfg) {
  std::vector<CellSpec> cells;
  for (std::size_t s = 0; s < cfg.scenarios.size(); ++s) {
    for (std::size_t u = 0; u < cfg.users.size(); ++u) {
      for (auto sel : cfg.selectors) {
        for (const auto& p : cfg.policies) {
          cells.push_back({static_cast<int>(cells.size()), s, u, sel, p});
        }
      }
    }
  }
  return cells;
}

// ---- seeds -----------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t region_seed(std::uint64_t master, std::size_t scenario) {
  return splitmix64(splitmix64(splitmix64(master) ^ scenario) ^ 0x5245474eULL);
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t scenario, int trial) {
  return splitmix64(splitmix64(splitmix64(master) ^ scenario) ^ static_cast<std::uint64_t>(trial));
}

std::uint64_t stream_seed(std::uint64_t trial, TrialStream stream) {
  return splitmix64(trial ^ static_cast<std::uint64_t>(stream));
}

// ---- batch -----------------------------------------------------------------

namespace {

struct ScenarioContext {
  Scenario scenario;
  std::shared_ptr<const RegionSet> regions;
};

Scenario load_spec(const ScenarioSpec& spec) {
  Scenario s = spec.preset.empty() ? load_scenario(spec.file)
                                   : build_named_scenario(spec.preset, spec.layout_seed);
  if (spec.task >= s.tasks.size()) throw InputError("scenario task index out of range");
  return s;
}

WeightVector draw_true_weight(const ExperimentConfig& cfg, const ScenarioContext& ctx,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const RegionSet& regions = *ctx.regions;
  if (cfg.true_weight == "sample") {
    std::uniform_int_distribution<std::size_t> pick(0, regions.samples().size() - 1);
    return regions.samples()[pick(rng)];
  }
  const WeightVector lo = ctx.scenario.constraints.lower_corner();
  const WeightVector hi = ctx.scenario.constraints.upper_corner();
  std::vector<double> w(lo.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
    if (!(w[i] >= lo[i])) w[i] = lo[i];  // degenerate intervals
  }
  return WeightVector(std::move(w));
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ' ';
  }
  return s;
}

int argmax_lowest(const std::vector<double>& p) {
  int best = 0;
  for (std::size_t k = 1; k < p.size(); ++k) {
    if (p[k] > p[static_cast<std::size_t>(best)]) best = static_cast<int>(k);
  }
  return best;
}

std::vector<BatchRow> run_trial(const ExperimentConfig& cfg, const CellSpec& cell,
                                const ScenarioContext& ctx, int trial) {
  const UserSpec& us = cfg.users[cell.user];
  BatchRow base;
  base.cell = cell.index;
  base.scenario = cfg.scenarios[cell.scenario].label();
  base.task = cfg.scenarios[cell.scenario].task;
  base.user = us.label();
  base.selector = std::string(to_string(cell.selector));
  base.trial = trial;
  base.seed = trial_seed(cfg.master_seed, cell.scenario, trial);
  base.region_count = ctx.regions->size();

  const RegionSet& regions = *ctx.regions;
  const std::size_t task = cfg.scenarios[cell.scenario].task;
  const WeightVector w_star =
      draw_true_weight(cfg, ctx, stream_seed(base.seed, TrialStream::TrueWeight));
  const std::optional<int> truth = region_of_weight(ctx.scenario, task, regions, w_star);
  base.true_region = truth.value_or(-1);

  const double p = us.nominal_accuracy();
  base.p_hat = std::min(1.0, cell.policy.resolve(p));

  // Logistic users either carry a fixed beta or are calibrated against w*.
  const bool need_panel = (us.model == UserModel::MvrLogistic && us.target_accuracy) ||
                          (cell.selector == SelectorKind::Mvr && !cfg.mvr_beta &&
                           us.model == UserModel::MerrConstant);
  RegionPanel panel;
  if (need_panel) {
    panel = draw_panel(regions, kCalibrationPanelSize, stream_seed(base.seed, TrialStream::Panel));
  }
  double user_beta = 0.0;
  if (us.model == UserModel::MvrLogistic) {
    user_beta = us.beta ? *us.beta
                        : calibrate_beta(regions, panel, w_star, *us.target_accuracy,
                                         us.tolerance).beta;
    base.beta = user_beta;
  }

  SessionConfig sc;
  sc.selector = cell.selector;
  sc.assumed_accuracy = base.p_hat;
  sc.budget = cfg.budget;
  sc.stop_threshold = cfg.stop_threshold;
  sc.prior = cfg.prior;
  sc.sample_count = cfg.sample_count;
  if (cell.selector == SelectorKind::Mvr) {
    if (cfg.mvr_beta) {
      sc.mvr_beta = *cfg.mvr_beta;
    } else if (us.model == UserModel::MvrLogistic) {
      sc.mvr_beta = user_beta;
    } else {
      sc.mvr_beta = calibrate_beta(regions, panel, w_star, p, us.tolerance).beta;
    }
  }

  SimulatedUser user(us.model, w_star,
                     us.model == UserModel::MerrConstant ? *us.accuracy : user_beta,
                     stream_seed(base.seed, TrialStream::User));
  Session session(ctx.regions, sc, stream_seed(base.seed, TrialStream::Selector));
  const SessionResult res = run_session(session, user, truth);

  std::vector<BatchRow> rows;
  rows.reserve(static_cast<std::size_t>(cfg.budget) + 1);
  base.iterations_to_half = res.iterations_to_half.value_or(-1);
  base.iterations_to_ninety = res.iterations_to_ninety.value_or(-1);
  if (res.stop != StopReason::Budget) base.message = std::string(to_string(res.stop));
  for (int n = 0; n <= cfg.budget; ++n) {
    const int src = std::min(n, res.executed());
    const auto& probs = res.trajectory[static_cast<std::size_t>(src)];
    BatchRow row = base;
    row.iteration = n;
    row.executed = n <= res.executed();
    row.posterior_true = res.true_trajectory[static_cast<std::size_t>(src)];
    row.max_posterior = *std::max_element(probs.begin(), probs.end());
    row.current_region = res.current_regions[static_cast<std::size_t>(src)];
    row.current_correct = truth && row.current_region == *truth;
    row.best_region = argmax_lowest(probs);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

BatchResult run_batch(const ExperimentConfig& cfg, unsigned jobs) {
  BatchResult out;
  out.config = cfg;
  out.cells = expand_cells(cfg);
  jobs = std::max(1u, jobs);

  // Scenario and region set per scenario entry; a failure marks every
  // trial of that scenario as an error.
  std::vector<std::unique_ptr<ScenarioContext>> contexts(cfg.scenarios.size());
  std::vector<std::string> context_errors(cfg.scenarios.size());
  for (std::size_t s = 0; s < cfg.scenarios.size(); ++s) {
    try {
      auto ctx = std::make_unique<ScenarioContext>();
      ctx->scenario = load_spec(cfg.scenarios[s]);
      ctx->regions = std::make_shared<const RegionSet>(sample_regions(
          ctx->scenario.graph, ctx->scenario.constraints,
          ctx->scenario.tasks[cfg.scenarios[s].task], cfg.sample_count,
          region_seed(cfg.master_seed, s), jobs));
      contexts[s] = std::move(ctx);
    } catch (const std::exception& err) {
      context_errors[s] = err.what();
    }
  }

  const std::size_t total = out.cells.size() * static_cast<std::size_t>(cfg.trials);
  std::vector<std::vector<BatchRow>> results(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      const CellSpec& cell = out.cells[job / static_cast<std::size_t>(cfg.trials)];
      const int trial = static_cast<int>(job % static_cast<std::size_t>(cfg.trials));
      try {
        if (!contexts[cell.scenario]) throw ConfigError(context_errors[cell.scenario]);
        results[job] = run_trial(cfg, cell, *contexts[cell.scenario], trial);
      } catch (const std::exception& err) {
        BatchRow row;
        row.cell = cell.index;
        row.scenario = cfg.scenarios[cell.scenario].label();
        row.task = cfg.scenarios[cell.scenario].task;
        row.user = cfg.users[cell.user].label();
        row.selector = std::string(to_string(cell.selector));
        row.trial = trial;
        row.seed = trial_seed(cfg.master_seed, cell.scenario, trial);
        row.executed = false;
        row.status = "error";
        row.message = sanitize(err.what());
        results[job] = {row};
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (auto& r : results) {
    for (auto& row : r) out.rows.push_back(std::move(row));
  }
  return out;
}

// ---- CSV -------------------------------------------------------------------

std::string batch_csv_header() {
  return "cell,scenario,task,user,selector,p_hat,beta,trial,seed,iteration,executed,status,"
         "region_count,true_region,posterior_true,max_posterior,current_region,current_correct,"
         "best_region,iterations_to_0.5,iterations_to_0.9,message";
}

void write_batch_csv(std::ostream& out, const BatchResult& batch, const std::string& timestamp) {
  out << "# pathpref batch schema_version=" << kBatchSchemaVersion << " created=" << timestamp
      << '\n';
  out << batch_csv_header() << '\n';
  for (const BatchRow& r : batch.rows) {
    out << r.cell << ',' << r.scenario << ',' << r.task << ',' << r.user << ',' << r.selector
        << ',' << format_number(r.p_hat) << ',' << format_number(r.beta) << ',' << r.trial << ','
        << r.seed << ',' << r.iteration << ',' << (r.executed ? 1 : 0) << ',' << r.status << ','
        << r.region_count << ',' << r.true_region << ',' << format_number(r.posterior_true) << ','
        << format_number(r.max_posterior) << ',' << r.current_region << ','
        << (r.current_correct ? 1 : 0) << ',' << r.best_region << ',' << r.iterations_to_half
        << ',' << r.iterations_to_ninety << ',' << r.message << '\n';
  }
}

std::vector<BatchRow> read_batch_csv(std::istream& in) {
  std::vector<BatchRow> rows;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != batch_csv_header()) throw SchemaError("unexpected CSV header");
      header_seen = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 22) {
      throw SchemaError("line " + std::to_string(line_no) + ": expected 22 fields, got " +
                        std::to_string(f.size()));
    }
    try {
      BatchRow r;
      r.cell = std::stoi(f[0]);
      r.scenario = f[1];
      r.task = std::stoul(f[2]);
      r.user = f[3];
      r.selector = f[4];
      r.p_hat = std::stod(f[5]);
      r.beta = std::stod(f[6]);
      r.trial = std::stoi(f[7]);
      r.seed = std::stoull(f[8]);
      r.iteration = std::stoi(f[9]);
      r.executed = f[10] == "1";
      r.status = f[11];
      r.region_count = std::stoul(f[12]);
      r.true_region = std::stoi(f[13]);
      r.posterior_true = std::stod(f[14]);
      r.max_posterior = std::stod(f[15]);
      r.current_region = std::stoi(f[16]);
      r.current_correct = f[17] == "1";
      r.best_region = std::stoi(f[18]);
      r.iterations_to_half = std::stoi(f[19]);
      r.iterations_to_ninety = std::stoi(f[20]);
      r.message = f[21];
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw SchemaError("line " + std::to_string(line_no) + ": malformed number");
    }
  }
  if (!header_seen) throw SchemaError("CSV has no header");
  return rows;
}

// ---- summary ---------------------------------------------------------------

double median(std::vector<double> v) {
  if (v.empty()) throw InputError("median of an empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<CellSummary> summarize(const std::vector<BatchRow>& rows) {
  if (rows.empty()) throw InputError("dataset is empty");
  std::map<int, std::map<int, std::vector<const BatchRow*>>> by_cell;
  std::map<int, std::string> labels;
  for (const BatchRow& r : rows) {
    by_cell[r.cell][r.trial].push_back(&r);
    labels[r.cell] = r.scenario + "|" + r.user + "|" + r.selector + "|p_hat=" +
                     format_number(r.p_hat);
  }
  std::vector<CellSummary> out;
  for (const auto& [cell, trials] : by_cell) {
    CellSummary s;
    s.cell = cell;
    s.label = labels[cell];
    std::map<int, std::vector<double>> per_iter;
    int reached_half = 0;
    int reached_ninety = 0;
    int budget = 0;
    for (const auto& [trial, trows] : trials) {
      if (trows.size() == 1 && trows.front()->status == "error") {
        ++s.errors;
        continue;
      }
      ++s.trials;
      double best = 0.0;
      for (const BatchRow* r : trows) {
        per_iter[r->iteration].push_back(r->posterior_true);
        if (r->executed) best = std::max(best, r->posterior_true);
        budget = std::max(budget, r->iteration);
      }
      if (best >= 0.5) ++reached_half;
      if (best >= 0.9) ++reached_ninety;
    }
    if (s.trials > 0) {
      s.fraction_half = static_cast<double>(reached_half) / s.trials;
      s.fraction_ninety = static_cast<double>(reached_ninety) / s.trials;
      for (const auto& [it, values] : per_iter) s.median.push_back(median(values));
      s.median_final = s.median.back();
      for (int snap : {10, 20, 30}) {
        if (snap > budget) continue;
        auto values = per_iter[snap];
        std::sort(values.begin(), values.end());
        s.snapshots[snap] = std::move(values);
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

json summary_to_json(const std::vector<CellSummary>& summary) {
  json cells = json::array();
  for (const auto& s : summary) {
    json snaps = json::object();
    for (const auto& [it, values] : s.snapshots) snaps[std::to_string(it)] = values;
    cells.push_back({{"cell", s.cell},
                     {"label", s.label},
                     {"trials", s.trials},
                     {"errors", s.errors},
                     {"fraction_reaching_0.5", s.fraction_half},
                     {"fraction_reaching_0.9", s.fraction_ninety},
                     {"median_posterior", s.median},
                     {"median_final_posterior", s.median_final},
                     {"snapshots", std::move(snaps)}});
  }
  return {{"schema_version", kBatchSchemaVersion}, {"cells", std::move(cells)}};
}

}  // namespace pathpref
