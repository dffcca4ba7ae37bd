#include "tpng/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tpng {

using nlohmann::json;

namespace {

constexpr const char* k_diagram_schema = "tpng-diagram/1";
constexpr const char* k_layer_schema = "tpng-layer/1";
constexpr const char* k_report_schema = "tpng-report/1";

std::string origin_name(OriginKind k) {
  switch (k) {
    case OriginKind::source: return "source";
    case OriginKind::sink: return "sink";
    case OriginKind::bulk: return "bulk";
  }
  throw std::logic_error("unknown origin kind");
}

OriginKind origin_from(const std::string& s) {
  if (s == "source") return OriginKind::source;
  if (s == "sink") return OriginKind::sink;
  if (s == "bulk") return OriginKind::bulk;
  throw std::runtime_error("bad origin kind: " + s);
}

std::string end_name(EndKind k) {
  return k == EndKind::corner ? "corner" : "exit";
}

EndKind end_from(const std::string& s) {
  if (s == "corner") return EndKind::corner;
  if (s == "exit") return EndKind::exit;
  throw std::runtime_error("bad end kind: " + s);
}

std::string vertex_name(VertexKind k) {
  switch (k) {
    case VertexKind::corner: return "corner";
    case VertexKind::crossing: return "crossing";
    case VertexKind::nucleation: return "nucleation";
    case VertexKind::scp_swap: return "swap";
  }
  throw std::logic_error("unknown vertex kind");
}

VertexKind vertex_from(const std::string& s) {
  if (s == "corner") return VertexKind::corner;
  if (s == "crossing") return VertexKind::crossing;
  if (s == "nucleation") return VertexKind::nucleation;
  if (s == "swap") return VertexKind::scp_swap;
  throw std::runtime_error("bad vertex kind: " + s);
}

json point_json(Point p) { return json::array({p.x, p.y}); }

Point point_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::runtime_error("bad point");
  return Point{j[0].get<double>(), j[1].get<double>()};
}

json params_json(const ModelParams& p) {
  json j;
  j["t"] = p.t;
  j["source_rate"] = p.source_rate;
  j["sink_rate"] = p.sink_rate;
  j["bulk_intensity"] = p.bulk_intensity;
  j["width"] = p.box.width;
  j["height"] = p.box.height;
  j["seed"] = p.seed;
  return j;
}

ModelParams params_from(const json& j) {
  ModelParams p;
  p.t = j.at("t").get<double>();
  p.source_rate = j.at("source_rate").get<double>();
  p.sink_rate = j.at("sink_rate").get<double>();
  p.bulk_intensity = j.at("bulk_intensity").get<double>();
  p.box = Box{j.at("width").get<double>(), j.at("height").get<double>()};
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

json diagram_json(const Diagram& d) {
  json j;
  j["schema"] = k_diagram_schema;
  j["params"] = params_json(d.params);
  j["sources"] = d.sources;
  j["sinks"] = d.sinks;
  json bulk = json::array();
  for (const Point& p : d.bulk) bulk.push_back(point_json(p));
  j["bulk"] = bulk;
  json verts = json::array();
  for (const auto& s : d.verticals) {
    json v;
    v["x"] = s.x;
    v["y_lo"] = s.y_lo;
    v["y_hi"] = s.y_hi;
    v["origin_id"] = s.origin_id;
    v["lower"] = origin_name(s.lower);
    v["upper"] = end_name(s.upper);
    verts.push_back(std::move(v));
  }
  j["verticals"] = verts;
  json horiz = json::array();
  for (const auto& s : d.horizontals) {
    json h;
    h["y"] = s.y;
    h["x_lo"] = s.x_lo;
    h["x_hi"] = s.x_hi;
    h["origin_id"] = s.origin_id;
    h["left"] = origin_name(s.left);
    h["right"] = end_name(s.right);
    horiz.push_back(std::move(h));
  }
  j["horizontals"] = horiz;
  json vertices = json::array();
  for (const auto& v : d.vertices) {
    json w;
    w["at"] = point_json(v.at);
    w["kind"] = vertex_name(v.kind);
    w["vertical"] = v.vertical;
    w["horizontal"] = v.horizontal;
    vertices.push_back(std::move(w));
  }
  j["vertices"] = vertices;
  j["exits_top"] = d.exits_top;
  j["exits_right"] = d.exits_right;
  j["coins_drawn"] = d.coins_drawn;
  return j;
}

Diagram diagram_from(const json& j) {
  if (j.value("schema", "") != k_diagram_schema)
    throw std::runtime_error("not a tpng-diagram/1 document");
  Diagram d;
  d.params = params_from(j.at("params"));
  d.sources = j.at("sources").get<std::vector<double>>();
  d.sinks = j.at("sinks").get<std::vector<double>>();
  for (const auto& p : j.at("bulk")) d.bulk.push_back(point_from(p));
  for (const auto& v : j.at("verticals")) {
    VerticalSeg s;
    s.x = v.at("x").get<double>();
    s.y_lo = v.at("y_lo").get<double>();
    s.y_hi = v.at("y_hi").get<double>();
    s.origin_id = v.at("origin_id").get<int>();
    s.lower = origin_from(v.at("lower").get<std::string>());
    s.upper = end_from(v.at("upper").get<std::string>());
    d.verticals.push_back(s);
  }
  for (const auto& h : j.at("horizontals")) {
    HorizontalSeg s;
    s.y = h.at("y").get<double>();
    s.x_lo = h.at("x_lo").get<double>();
    s.x_hi = h.at("x_hi").get<double>();
    s.origin_id = h.at("origin_id").get<int>();
    s.left = origin_from(h.at("left").get<std::string>());
    s.right = end_from(h.at("right").get<std::string>());
    d.horizontals.push_back(s);
  }
  for (const auto& w : j.at("vertices")) {
    Vertex v;
    v.at = point_from(w.at("at"));
    v.kind = vertex_from(w.at("kind").get<std::string>());
    v.vertical = w.at("vertical").get<int>();
    v.horizontal = w.at("horizontal").get<int>();
    d.vertices.push_back(v);
  }
  d.exits_top = j.at("exits_top").get<int>();
  d.exits_right = j.at("exits_right").get<int>();
  d.coins_drawn = j.at("coins_drawn").get<std::uint64_t>();
  return d;
}

std::string hash_hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

json layer_json(const ScpLayer& layer) {
  json j;
  j["t"] = layer.t;
  json paths = json::array();
  for (const auto& p : layer.paths) {
    json q;
    q["label"] = p.label;
    q["entry_kind"] = origin_name(p.entry_kind);
    q["entry"] = point_json(p.entry);
    q["exit_kind"] = p.exit_kind == ScpPath::Exit::top ? "top" : "right";
    q["exit"] = point_json(p.exit);
    json pts = json::array();
    for (const Point& u : p.points) pts.push_back(point_json(u));
    q["points"] = pts;
    paths.push_back(std::move(q));
  }
  j["paths"] = paths;
  json swaps = json::array();
  for (const auto& s : layer.swaps) {
    json q;
    q["at"] = point_json(s.at);
    q["lower_label"] = s.lower_label;
    swaps.push_back(std::move(q));
  }
  j["swaps"] = swaps;
  j["enlarged"] = diagram_json(layer.psi);
  j["coins_drawn"] = layer.coins_drawn;
  return j;
}

ScpLayer layer_from(const json& j) {
  ScpLayer layer;
  layer.t = j.at("t").get<double>();
  for (const auto& q : j.at("paths")) {
    ScpPath p;
    p.label = q.at("label").get<int>();
    p.entry_kind = origin_from(q.at("entry_kind").get<std::string>());
    p.entry = point_from(q.at("entry"));
    const std::string ek = q.at("exit_kind").get<std::string>();
    if (ek != "top" && ek != "right") throw std::runtime_error("bad exit kind: " + ek);
    p.exit_kind = ek == "top" ? ScpPath::Exit::top : ScpPath::Exit::right;
    p.exit = point_from(q.at("exit"));
    for (const auto& u : q.at("points")) p.points.push_back(point_from(u));
    layer.paths.push_back(std::move(p));
  }
  for (const auto& q : j.at("swaps")) {
    SwapEvent s;
    s.at = point_from(q.at("at"));
    s.lower_label = q.at("lower_label").get<int>();
    layer.swaps.push_back(s);
  }
  layer.psi = diagram_from(j.at("enlarged"));
  layer.coins_drawn = j.at("coins_drawn").get<std::uint64_t>();
  return layer;
}

std::string dump_document(const json& j) { return j.dump(2) + "\n"; }

} // namespace

std::uint64_t content_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string diagram_to_json(const Diagram& d) { return dump_document(diagram_json(d)); }

Diagram diagram_from_json(const std::string& text) {
  return diagram_from(json::parse(text));
}

std::string layer_to_json(const CoupledPair& pair) {
  json j;
  j["schema"] = k_layer_schema;
  const json base = diagram_json(pair.lower);
  j["base"] = base;
  j["base_hash"] = hash_hex(content_hash(base.dump()));
  j["layer"] = layer_json(pair.layer);
  return dump_document(j);
}

CoupledPair layer_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.value("schema", "") != k_layer_schema)
    throw std::runtime_error("not a tpng-layer/1 document");
  CoupledPair pair;
  pair.lower = diagram_from(j.at("base"));
  const std::string want = j.at("base_hash").get<std::string>();
  const std::string got = hash_hex(content_hash(j.at("base").dump()));
  if (want != got) throw std::runtime_error("base diagram hash mismatch");
  pair.layer = layer_from(j.at("layer"));
  return pair;
}

std::string report_to_json(const ExperimentReport& rep) {
  json j;
  j["schema"] = k_report_schema;
  j["name"] = rep.name;
  j["seed"] = rep.seed;
  j["replicas"] = rep.replicas;
  j["excluded"] = rep.excluded;
  j["runtime_seconds"] = rep.runtime_seconds;
  j["inconclusive"] = rep.inconclusive;
  j["verdict"] = rep.inconclusive ? "inconclusive" : rep.passed() ? "pass" : "fail";
  json params = json::array();
  for (const auto& kv : rep.params) params.push_back(json::array({kv.first, kv.second}));
  j["params"] = params;
  json provenance;
  provenance["seed"] = rep.seed;
  provenance["replicas"] = rep.replicas;
  provenance["params"] = params;
  j["params_hash"] = hash_hex(content_hash(rep.name + provenance.dump()));
  json ms = json::array();
  for (const auto& m : rep.measurements) {
    json q;
    q["name"] = m.name;
    q["value"] = m.value;
    q["target"] = m.target;
    q["tolerance"] = m.tolerance;
    q["p_value"] = m.p_value;
    q["pass"] = m.pass;
    ms.push_back(std::move(q));
  }
  j["measurements"] = ms;
  j["notes"] = rep.notes;
  j["columns"] = rep.columns;
  return dump_document(j);
}

ExperimentReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.value("schema", "") != k_report_schema)
    throw std::runtime_error("not a tpng-report/1 document");
  ExperimentReport rep;
  rep.name = j.at("name").get<std::string>();
  rep.seed = j.at("seed").get<std::uint64_t>();
  rep.replicas = j.at("replicas").get<int>();
  rep.excluded = j.at("excluded").get<int>();
  rep.runtime_seconds = j.at("runtime_seconds").get<double>();
  rep.inconclusive = j.at("inconclusive").get<bool>();
  for (const auto& kv : j.at("params"))
    rep.params.emplace_back(kv.at(0).get<std::string>(), kv.at(1).get<double>());
  for (const auto& q : j.at("measurements")) {
    Measurement m;
    m.name = q.at("name").get<std::string>();
    m.value = q.at("value").get<double>();
    m.target = q.at("target").get<double>();
    m.tolerance = q.at("tolerance").get<double>();
    m.p_value = q.at("p_value").get<double>();
    m.pass = q.at("pass").get<bool>();
    rep.measurements.push_back(m);
  }
  rep.notes = j.at("notes").get<std::vector<std::string>>();
  rep.columns = j.at("columns").get<std::vector<std::string>>();
  return rep;
}

std::string report_csv(const ExperimentReport& rep) {
  std::ostringstream os;
  os << "replica";
  for (const auto& c : rep.columns) os << "," << c;
  os << "\n";
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    os << i;
    for (double v : rep.rows[i]) os << "," << json(v).dump();
    os << "\n";
  }
  return os.str();
}

// --- SVG ---------------------------------------------------------------------

namespace {

struct Canvas {
  std::ostringstream os;
  double unit; // glyph/stroke scale in model units

  // Glyphs scale with the box but never dwarf the O(1) feature spacing.
  explicit Canvas(double extent) : unit(std::min(extent / 400.0, 0.1)) {}

  void open_panel(double offset_x, const Box& box) {
    // Flip the ordinate: model origin sits at the bottom-left corner.
    os << "<g transform=\"translate(" << offset_x << "," << box.height
       << ") scale(1,-1)\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << box.width << "\" height=\"" << box.height
       << "\" fill=\"none\" stroke=\"black\" stroke-width=\"" << unit << "\"/>\n";
  }
  void close_panel() { os << "</g>\n"; }

  void line(double x1, double y1, double x2, double y2, const char* color, double w) {
    os << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
       << "\" stroke=\"" << color << "\" stroke-width=\"" << w << "\"/>\n";
  }

  void dot(Point p, const char* color, double r) {
    os << "<circle cx=\"" << p.x << "\" cy=\"" << p.y << "\" r=\"" << r << "\" fill=\""
       << color << "\"/>\n";
  }

  void ring(Point p, const char* color, double r) {
    os << "<circle cx=\"" << p.x << "\" cy=\"" << p.y << "\" r=\"" << r
       << "\" fill=\"white\" stroke=\"" << color << "\" stroke-width=\"" << unit
       << "\"/>\n";
  }

  void square(Point p, const char* color, double r) {
    os << "<rect x=\"" << p.x - r << "\" y=\"" << p.y - r << "\" width=\"" << 2 * r
       << "\" height=\"" << 2 * r << "\" fill=\"" << color << "\"/>\n";
  }

  void draw_diagram(const Diagram& d, const char* color) {
    const double w = 1.5 * unit;
    for (const auto& s : d.verticals) line(s.x, s.y_lo, s.x, s.y_hi, color, w);
    for (const auto& s : d.horizontals) line(s.x_lo, s.y, s.x_hi, s.y, color, w);
    for (const auto& v : d.vertices) {
      switch (v.kind) {
        case VertexKind::corner: dot(v.at, color, 2.5 * unit); break;
        case VertexKind::crossing: ring(v.at, color, 2.5 * unit); break;
        case VertexKind::nucleation: square(v.at, color, 2.0 * unit); break;
        case VertexKind::scp_swap: break;
      }
    }
  }

  void draw_layer_paths(const ScpLayer& layer) {
    const double w = 2.5 * unit;
    for (const auto& p : layer.paths) {
      os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"" << w
         << "\" points=\"";
      for (std::size_t k = 0; k < p.points.size(); ++k) {
        if (k) os << " ";
        os << p.points[k].x << "," << p.points[k].y;
      }
      os << "\"/>\n";
    }
    for (const auto& s : layer.swaps) dot(s.at, "black", 3.0 * unit);
  }
};

std::string svg_document(double width, double height, const std::string& body) {
  std::ostringstream os;
  const double m = 0.03 * std::max(width, height) + 0.2;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << -m
     << " " << -m << " " << width + 2 * m << " " << height + 2 * m << "\">\n";
  os << body;
  os << "</svg>\n";
  return os.str();
}

} // namespace

std::string render_svg(const Diagram& d) {
  Canvas c(std::max(d.box().width, d.box().height));
  c.open_panel(0.0, d.box());
  c.draw_diagram(d, "crimson");
  c.close_panel();
  return svg_document(d.box().width, d.box().height, c.os.str());
}

std::string render_svg(const CoupledPair& pair) {
  const Box& box = pair.lower.box();
  const double gap = 0.08 * box.width + 0.2;
  Canvas c(std::max(box.width, box.height));

  c.open_panel(0.0, box);
  c.draw_diagram(pair.lower, "crimson");
  c.close_panel();

  c.open_panel(box.width + gap, box);
  c.draw_diagram(pair.lower, "crimson");
  c.draw_layer_paths(pair.layer);
  c.close_panel();

  c.open_panel(2.0 * (box.width + gap), box);
  c.draw_diagram(pair.layer.psi, "royalblue");
  c.close_panel();

  return svg_document(3.0 * box.width + 2.0 * gap, box.height, c.os.str());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("short write to " + path);
}

} // namespace tpng
