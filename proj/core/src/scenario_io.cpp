#include "pathpref/scenario_io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "pathpref/errors.hpp"

namespace pathpref {

using nlohmann::json;

namespace {

json polygon_to_json(const Polygon& poly) {
  json out = json::array();
  for (const Point2& p : poly) out.push_back({p.x, p.y});
  return out;
}

// Typed accessors that report the JSON pointer of whatever is wrong.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  const json& raw() const { return node_; }
  const std::string& path() const { return path_; }

  Reader at(const std::string& key) const {
    if (!node_.is_object()) fail("expected an object");
    auto it = node_.find(key);
    if (it == node_.end()) throw SchemaError("missing key '" + key + "' at " + where());
    return Reader(*it, path_ + "/" + key);
  }
  bool has(const std::string& key) const { return node_.is_object() && node_.contains(key); }

  Reader at(std::size_t i) const { return Reader(node_.at(i), path_ + "/" + std::to_string(i)); }
  std::size_t size() const {
    if (!node_.is_array()) fail("expected an array");
    return node_.size();
  }

  double number() const {
    if (!node_.is_number()) fail("expected a number");
    return node_.get<double>();
  }
  std::int64_t integer() const {
    if (!node_.is_number_integer()) fail("expected an integer");
    return node_.get<std::int64_t>();
  }
  std::string string() const {
    if (!node_.is_string()) fail("expected a string");
    return node_.get<std::string>();
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw SchemaError(what + " at " + where());
  }

 private:
  std::string where() const { return path_.empty() ? "/" : path_; }

  const json& node_;
  std::string path_;
};

Point2 read_point(const Reader& r) {
  if (r.size() != 2) r.fail("expected an [x, y] pair");
  return {r.at(std::size_t{0}).number(), r.at(std::size_t{1}).number()};
}

Polygon read_polygon(const Reader& r) {
  Polygon poly;
  for (std::size_t i = 0; i < r.size(); ++i) poly.push_back(read_point(r.at(i)));
  return poly;
}

int read_id(const Reader& r) {
  const std::int64_t v = r.integer();
  if (v < 0 || v > std::numeric_limits<std::int32_t>::max()) r.fail("id out of range");
  return static_cast<int>(v);
}

}  // namespace

json scenario_to_json(const Scenario& s) {
  json doc;
  doc["schema_version"] = kScenarioSchemaVersion;
  doc["name"] = s.name;
  json vertices = json::array();
  for (const Vertex& v : s.graph.vertices()) {
    json jv{{"id", v.id}};
    if (v.x) jv["x"] = *v.x;
    if (v.y) jv["y"] = *v.y;
    vertices.push_back(std::move(jv));
  }
  doc["vertices"] = std::move(vertices);
  json edges = json::array();
  for (const Edge& e : s.graph.edges()) {
    edges.push_back({{"id", e.id}, {"tail", e.tail}, {"head", e.head}, {"time", e.time}});
  }
  doc["edges"] = std::move(edges);
  json constraints = json::array();
  for (const Constraint& c : s.constraints.constraints()) {
    json jc{{"id", c.id},
            {"kind", std::string(to_string(c.kind))},
            {"edge_ids", c.edge_ids},
            {"weight_lo", c.weight_lo},
            {"weight_hi", c.weight_hi}};
    if (c.true_weight) jc["true_weight"] = *c.true_weight;
    constraints.push_back(std::move(jc));
  }
  doc["constraints"] = std::move(constraints);
  json tasks = json::array();
  for (const TaskSpec& t : s.tasks) tasks.push_back({{"start", t.start}, {"goal", t.goal}});
  doc["tasks"] = std::move(tasks);

  json render{{"layout", s.render.layout},
              {"cell_size", s.render.cell_size},
              {"width", s.render.width},
              {"height", s.render.height}};
  json obstacles = json::array();
  for (const auto& poly : s.render.obstacles) obstacles.push_back(polygon_to_json(poly));
  render["obstacles"] = std::move(obstacles);
  json shapes = json::array();
  for (const auto& shape : s.render.constraints) {
    json js{{"constraint_id", shape.constraint_id},
            {"kind", std::string(to_string(shape.kind))},
            {"polygon", polygon_to_json(shape.polygon)},
            {"color", shape.color}};
    if (shape.direction) js["direction"] = {shape.direction->x, shape.direction->y};
    shapes.push_back(std::move(js));
  }
  render["constraints"] = std::move(shapes);
  doc["render"] = std::move(render);
  return doc;
}

Scenario scenario_from_json(const json& doc) {
  const Reader root(doc, "");
  if (!doc.is_object()) root.fail("expected an object");
  const std::int64_t version = root.at("schema_version").integer();
  if (version != kScenarioSchemaVersion) {
    root.at("schema_version").fail("unsupported schema version " + std::to_string(version));
  }

  Scenario s;
  s.name = root.has("name") ? root.at("name").string() : std::string();

  std::vector<Vertex> vertices;
  const Reader jv = root.at("vertices");
  for (std::size_t i = 0; i < jv.size(); ++i) {
    const Reader v = jv.at(i);
    Vertex vertex{read_id(v.at("id")), std::nullopt, std::nullopt};
    if (v.has("x")) vertex.x = v.at("x").number();
    if (v.has("y")) vertex.y = v.at("y").number();
    vertices.push_back(vertex);
  }
  std::vector<Edge> edges;
  const Reader je = root.at("edges");
  for (std::size_t i = 0; i < je.size(); ++i) {
    const Reader e = je.at(i);
    edges.push_back({read_id(e.at("id")), read_id(e.at("tail")), read_id(e.at("head")),
                     e.at("time").number()});
  }
  try {
    s.graph = EnvironmentGraph(s.name, std::move(vertices), std::move(edges));
  } catch (const InputError& err) {
    throw SchemaError(std::string("invalid graph: ") + err.what());
  }

  std::vector<Constraint> constraints;
  const Reader jc = root.at("constraints");
  for (std::size_t i = 0; i < jc.size(); ++i) {
    const Reader c = jc.at(i);
    Constraint con;
    con.id = read_id(c.at("id"));
    try {
      con.kind = constraint_kind_from_string(c.at("kind").string());
    } catch (const InputError& err) {
      c.at("kind").fail(err.what());
    }
    const Reader ids = c.at("edge_ids");
    for (std::size_t k = 0; k < ids.size(); ++k) con.edge_ids.push_back(read_id(ids.at(k)));
    con.weight_lo = c.at("weight_lo").number();
    con.weight_hi = c.at("weight_hi").number();
    if (c.has("true_weight")) con.true_weight = c.at("true_weight").number();
    constraints.push_back(std::move(con));
  }
  try {
    s.constraints = ConstraintSet(s.graph, std::move(constraints));
  } catch (const InputError& err) {
    throw SchemaError(std::string("invalid constraints: ") + err.what());
  }

  const Reader jt = root.at("tasks");
  for (std::size_t i = 0; i < jt.size(); ++i) {
    const Reader t = jt.at(i);
    s.tasks.push_back({read_id(t.at("start")), read_id(t.at("goal"))});
  }

  if (root.has("render")) {
    const Reader r = root.at("render");
    if (r.has("layout")) s.render.layout = r.at("layout").string();
    if (r.has("cell_size")) s.render.cell_size = r.at("cell_size").number();
    if (r.has("width")) s.render.width = static_cast<int>(r.at("width").integer());
    if (r.has("height")) s.render.height = static_cast<int>(r.at("height").integer());
    if (r.has("obstacles")) {
      const Reader obs = r.at("obstacles");
      for (std::size_t i = 0; i < obs.size(); ++i) {
        s.render.obstacles.push_back(read_polygon(obs.at(i)));
      }
    }
    if (r.has("constraints")) {
      const Reader shapes = r.at("constraints");
      for (std::size_t i = 0; i < shapes.size(); ++i) {
        const Reader js = shapes.at(i);
        ConstraintShape shape;
        shape.constraint_id = read_id(js.at("constraint_id"));
        try {
          shape.kind = constraint_kind_from_string(js.at("kind").string());
        } catch (const InputError& err) {
          js.at("kind").fail(err.what());
        }
        shape.polygon = read_polygon(js.at("polygon"));
        shape.color = js.has("color") ? js.at("color").string() : default_color(shape.kind);
        if (js.has("direction")) shape.direction = read_point(js.at("direction"));
        s.render.constraints.push_back(std::move(shape));
      }
    }
  }

  try {
    validate_scenario(s);
  } catch (const std::exception& err) {
    throw SchemaError(std::string("invalid scenario: ") + err.what());
  }
  return s;
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw SchemaError("parse error at byte " + std::to_string(err.byte) + ": " + err.what());
  }
  return scenario_from_json(doc);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

void save_scenario(const std::filesystem::path& path, const Scenario& scenario) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write scenario file " + path.string());
  out << scenario_to_json(scenario).dump(1) << '\n';
}

}  // namespace pathpref
