#include "pathpref/service.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <numeric>
#include <sstream>

#include <httplib.h>

#include "pathpref/errors.hpp"
#include "pathpref/scenario_io.hpp"
#include "pathpref/scenarios.hpp"
#include "pathpref/serialize.hpp"

namespace pathpref {

using nlohmann::json;

struct SessionService::Entry {
  std::mutex mutex;
  std::string id;
  std::string created;
  json request;
  Scenario scenario;
  std::size_t task = 0;
  std::unique_ptr<Session> session;
  std::uint64_t version = 0;
};

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ServiceResponse error(int status, const std::string& message) {
  return {status, json{{"api_version", kApiVersion}, {"error", message}}};
}

json path_view(const Scenario& scenario, const RegionSet& regions, int region, bool current) {
  const PathRecord& path = regions[static_cast<std::size_t>(region)].canonical_path;
  json polyline = json::array();
  const auto& g = scenario.graph;
  auto point = [&](VertexId v) {
    const Vertex& vx = g.vertices()[static_cast<std::size_t>(v)];
    return vx.x && vx.y ? json::array({*vx.x, *vx.y}) : json(nullptr);
  };
  if (!path.edges.empty()) polyline.push_back(point(g.edge(path.edges.front()).tail));
  for (EdgeId e : path.edges) polyline.push_back(point(g.edge(e).head));
  return {{"region", region},
          {"edges", path.edges},
          {"violations", path.violations},
          {"time", path.time},
          {"polyline", std::move(polyline)},
          {"is_current", current}};
}

json final_view(const Session& s) {
  const BestRegion best = s.best();
  return {{"stop_reason", std::string(to_string(s.stop_reason()))},
          {"iteration", s.iteration()},
          {"best_region", best.region},
          {"best_weight", std::vector<double>(best.weight.begin(), best.weight.end())},
          {"current_region", s.current_region()}};
}

SessionConfig config_from_request(const json& body) {
  SessionConfig cfg;
  if (!body.contains("config")) return cfg;
  const json& c = body.at("config");
  if (!c.is_object()) throw SchemaError("'config' must be an object");
  if (c.contains("selector")) cfg.selector = selector_from_string(c.at("selector").get<std::string>());
  if (c.contains("assumed_accuracy")) cfg.assumed_accuracy = c.at("assumed_accuracy").get<double>();
  if (c.contains("budget")) cfg.budget = c.at("budget").get<int>();
  if (c.contains("sample_count")) cfg.sample_count = c.at("sample_count").get<std::size_t>();
  if (c.contains("mvr_beta")) cfg.mvr_beta = c.at("mvr_beta").get<double>();
  if (c.contains("prior")) cfg.prior = prior_from_string(c.at("prior").get<std::string>());
  if (c.contains("stop_threshold") && !c.at("stop_threshold").is_null()) {
    cfg.stop_threshold = c.at("stop_threshold").get<double>();
  }
  return cfg;
}

}  // namespace

SessionService::SessionService(std::optional<std::filesystem::path> journal_dir)
    : journal_dir_(std::move(journal_dir)) {
  if (journal_dir_) std::filesystem::create_directories(*journal_dir_);
}

SessionService::~SessionService() = default;

std::size_t SessionService::session_count() const {
  std::shared_lock lock(registry_mutex_);
  return sessions_.size();
}

std::shared_ptr<SessionService::Entry> SessionService::find(const std::string& id) const {
  std::shared_lock lock(registry_mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::shared_ptr<SessionService::Entry> SessionService::build(const json& body,
                                                             const std::string& id) const {
  if (!body.is_object()) throw SchemaError("request body must be a JSON object");
  auto entry = std::make_shared<Entry>();
  entry->id = id;
  entry->created = utc_now();
  if (body.contains("scenario")) {
    entry->scenario = scenario_from_json(body.at("scenario"));
  } else if (body.contains("preset")) {
    const std::uint64_t layout_seed = body.value("layout_seed", std::uint64_t{1});
    try {
      entry->scenario = build_named_scenario(body.at("preset").get<std::string>(), layout_seed);
    } catch (const InputError& err) {
      throw SchemaError(err.what());
    }
  } else {
    throw SchemaError("request needs 'preset' or 'scenario'");
  }
  entry->task = body.value("task", std::size_t{0});
  if (entry->task >= entry->scenario.tasks.size()) throw SchemaError("task index out of range");
  const std::uint64_t seed = body.value("seed", std::uint64_t{1});
  SessionConfig cfg;
  try {
    cfg = config_from_request(body);
  } catch (const InputError& err) {
    throw SchemaError(err.what());
  }
  entry->session = std::make_unique<Session>(entry->scenario, entry->task, cfg, seed);
  entry->request = body;
  entry->request["seed"] = seed;
  return entry;
}

void SessionService::journal(const std::string& id, const json& line) const {
  if (!journal_dir_) return;
  std::ofstream out(*journal_dir_ / (id + ".jsonl"), std::ios::app);
  out << line.dump() << '\n';
}

ServiceResponse SessionService::create(const std::string& raw_body) {
  json body;
  try {
    body = json::parse(raw_body);
  } catch (const json::parse_error& err) {
    return error(400, std::string("malformed JSON: ") + err.what());
  }
  return create(body);
}

ServiceResponse SessionService::create(const json& body) {
  std::string id;
  std::shared_ptr<Entry> entry;
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "s%06llu",
                  static_cast<unsigned long long>(next_id_.fetch_add(1)));
    id = buf;
  }
  try {
    entry = build(body, id);
  } catch (const SchemaError& err) {
    return error(400, err.what());
  } catch (const json::exception& err) {
    return error(400, std::string("malformed request: ") + err.what());
  } catch (const InputError& err) {
    return error(400, err.what());
  } catch (const ConfigError& err) {
    return error(422, err.what());
  }
  {
    std::unique_lock lock(registry_mutex_);
    sessions_[id] = entry;
  }
  journal(id, {{"type", "create"}, {"id", id}, {"request", entry->request}});

  const Session& s = *entry->session;
  json out{{"api_version", kApiVersion},
           {"session_id", id},
           {"created", entry->created},
           {"version", entry->version},
           {"region_count", s.regions().size()},
           {"budget", s.config().budget},
           {"already_converged", s.converged_by_vacuity()},
           {"initial_path", path_view(entry->scenario, s.regions(), s.current_region(), true)},
           {"render", scenario_to_json(entry->scenario).at("render")}};
  return {201, std::move(out)};
}

ServiceResponse SessionService::get_query(const std::string& id) const {
  auto entry = find(id);
  if (!entry) return error(404, "unknown session " + id);
  std::lock_guard lock(entry->mutex);
  const Session& s = *entry->session;
  if (!s.pending()) {
    ServiceResponse r = error(410, s.stop_reason() == StopReason::Budget ? "budget exhausted"
                                                                         : "session finished");
    r.body["version"] = entry->version;
    r.body["result"] = final_view(s);
    return r;
  }
  const QueryPair& q = *s.pending();
  return {200, json{{"api_version", kApiVersion},
                    {"version", entry->version},
                    {"iteration", s.iteration()},
                    {"budget", s.config().budget},
                    {"selector", std::string(to_string(q.selector))},
                    {"current", path_view(entry->scenario, s.regions(), q.current, true)},
                    {"proposed", path_view(entry->scenario, s.regions(), q.proposed, false)}}};
}

ServiceResponse SessionService::post_feedback(const std::string& id, const std::string& raw) {
  json body;
  try {
    body = json::parse(raw);
  } catch (const json::parse_error& err) {
    return error(400, std::string("malformed JSON: ") + err.what());
  }
  return post_feedback(id, body);
}

ServiceResponse SessionService::post_feedback(const std::string& id, const json& body) {
  auto entry = find(id);
  if (!entry) return error(404, "unknown session " + id);
  if (!body.is_object() || !body.contains("choice") || !body.contains("version") ||
      !body.at("choice").is_string() || !body.at("version").is_number_unsigned()) {
    return error(400, "feedback needs {\"choice\": \"current\"|\"new\", \"version\": n}");
  }
  const std::string choice = body.at("choice").get<std::string>();
  if (choice != "current" && choice != "new") {
    return error(400, "choice must be \"current\" or \"new\"");
  }
  const std::uint64_t version = body.at("version").get<std::uint64_t>();

  std::lock_guard lock(entry->mutex);
  Session& s = *entry->session;
  if (!s.pending()) {
    ServiceResponse r = error(410, s.stop_reason() == StopReason::Budget ? "budget exhausted"
                                                                         : "session finished");
    r.body["version"] = entry->version;
    r.body["result"] = final_view(s);
    return r;
  }
  if (version != entry->version) {
    ServiceResponse r = error(409, "stale version");
    r.body["version"] = entry->version;
    return r;
  }
  const int before = s.current_region();
  try {
    s.step(choice == "current" ? Choice::I : Choice::J);
  } catch (const ContradictoryFeedbackError& err) {
    return error(422, err.what());
  }
  ++entry->version;
  journal(id, {{"type", "feedback"}, {"choice", choice}, {"version", entry->version}});
  return {200, json{{"api_version", kApiVersion},
                    {"version", entry->version},
                    {"iteration", s.iteration()},
                    {"current_changed", s.current_region() != before},
                    {"current_region", s.current_region()},
                    {"pending", static_cast<bool>(s.pending())},
                    {"stop_reason", std::string(to_string(s.stop_reason()))}}};
}

ServiceResponse SessionService::get_posterior(const std::string& id, std::size_t top_k) const {
  auto entry = find(id);
  if (!entry) return error(404, "unknown session " + id);
  std::lock_guard lock(entry->mutex);
  const Session& s = *entry->session;
  const PosteriorState& post = s.posterior();
  std::vector<std::size_t> order(post.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return post.probability(a) > post.probability(b);
  });
  order.resize(std::min(top_k, order.size()));
  json top = json::array();
  for (std::size_t r : order) {
    top.push_back({{"region", r},
                   {"probability", post.probability(r)},
                   {"q", post.measure(r)},
                   {"path", path_view(entry->scenario, s.regions(), static_cast<int>(r),
                                      static_cast<int>(r) == s.current_region())}});
  }
  const BestRegion best = s.best();
  return {200, json{{"api_version", kApiVersion},
                    {"version", entry->version},
                    {"iteration", s.iteration()},
                    {"region_count", post.size()},
                    {"top", std::move(top)},
                    {"best_region", best.region},
                    {"best_weight", std::vector<double>(best.weight.begin(), best.weight.end())}}};
}

ServiceResponse SessionService::get_render(const std::string& id) const {
  auto entry = find(id);
  if (!entry) return error(404, "unknown session " + id);
  std::lock_guard lock(entry->mutex);
  const Scenario& sc = entry->scenario;
  json vertices = json::array();
  for (const Vertex& v : sc.graph.vertices()) {
    vertices.push_back(v.x && v.y ? json::array({*v.x, *v.y}) : json(nullptr));
  }
  json constraints = json::array();
  for (const auto& c : sc.constraints.constraints()) {
    constraints.push_back({{"id", c.id},
                           {"kind", std::string(to_string(c.kind))},
                           {"weight_lo", c.weight_lo},
                           {"weight_hi", c.weight_hi}});
  }
  const TaskSpec& task = sc.tasks[entry->task];
  return {200, json{{"api_version", kApiVersion},
                    {"name", sc.name},
                    {"render", scenario_to_json(sc).at("render")},
                    {"vertices", std::move(vertices)},
                    {"constraints", std::move(constraints)},
                    {"task", {{"start", task.start}, {"goal", task.goal}}}}};
}

std::size_t SessionService::restore() {
  if (!journal_dir_) return 0;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(*journal_dir_)) {
    if (e.path().extension() == ".jsonl") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::size_t restored = 0;
  for (const auto& file : files) {
    std::ifstream in(file);
    std::string line;
    std::shared_ptr<Entry> entry;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json rec = json::parse(line);
      const std::string type = rec.at("type").get<std::string>();
      if (type == "create") {
        entry = build(rec.at("request"), rec.at("id").get<std::string>());
      } else if (type == "feedback" && entry) {
        const bool keep = rec.at("choice").get<std::string>() == "current";
        entry->session->step(keep ? Choice::I : Choice::J);
        entry->version = rec.at("version").get<std::uint64_t>();
      }
    }
    if (!entry) continue;
    const std::string& id = entry->id;
    if (id.size() > 1 && id[0] == 's') {
      const std::uint64_t n = std::stoull(id.substr(1));
      std::uint64_t cur = next_id_.load();
      while (n >= cur && !next_id_.compare_exchange_weak(cur, n + 1)) {
      }
    }
    std::unique_lock lock(registry_mutex_);
    sessions_[id] = std::move(entry);
    ++restored;
  }
  return restored;
}

// ---- HTTP ------------------------------------------------------------------

struct HttpServer::Impl {
  SessionService& service;
  httplib::Server server;

  explicit Impl(SessionService& s) : service(s) {
    auto reply = [](httplib::Response& res, const ServiceResponse& r) {
      res.status = r.status;
      res.set_header("Access-Control-Allow-Origin", "*");
      res.set_content(r.body.dump(), "application/json");
    };
    server.Post("/sessions", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.create(req.body));
    });
    server.Get(R"(/sessions/([^/]+)/query)",
               [this, reply](const httplib::Request& req, httplib::Response& res) {
                 reply(res, service.get_query(req.matches[1]));
               });
    server.Post(R"(/sessions/([^/]+)/feedback)",
                [this, reply](const httplib::Request& req, httplib::Response& res) {
                  reply(res, service.post_feedback(req.matches[1], req.body));
                });
    server.Get(R"(/sessions/([^/]+)/posterior)",
               [this, reply](const httplib::Request& req, httplib::Response& res) {
                 std::size_t k = kDefaultTopK;
                 if (req.has_param("k")) {
                   try {
                     k = std::stoul(req.get_param_value("k"));
                   } catch (const std::exception&) {
                     reply(res, {400, json{{"error", "k must be a positive integer"}}});
                     return;
                   }
                 }
                 reply(res, service.get_posterior(req.matches[1], k));
               });
    server.Get(R"(/sessions/([^/]+)/render)",
               [this, reply](const httplib::Request& req, httplib::Response& res) {
                 reply(res, service.get_render(req.matches[1]));
               });
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", "*");
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
  }
};

HttpServer::HttpServer(SessionService& service) : impl_(std::make_unique<Impl>(service)) {}
HttpServer::~HttpServer() = default;

bool HttpServer::listen(const std::string& host, int port) {
  return impl_->server.listen(host, port);
}

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::serve() { return impl_->server.listen_after_bind(); }
void HttpServer::stop() { impl_->server.stop(); }
void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace pathpref
