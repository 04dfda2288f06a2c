#include "geolab/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace geolab::io {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  fail(ErrorCode::parse_error, "field '" + field + "': " + what);
}

const Json& need(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) bad(where.empty() ? key : where + "." + key, "missing");
  return *it;
}

std::string join(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

double number(const Json& j, const std::string& field) {
  if (!j.is_number()) bad(field, "expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) bad(field, "expected an integer");
  return j.get<int>();
}

bool boolean(const Json& j, const std::string& field) {
  if (!j.is_boolean()) bad(field, "expected true or false");
  return j.get<bool>();
}

std::string text(const Json& j, const std::string& field) {
  if (!j.is_string()) bad(field, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers(const Json& j, const std::string& field) {
  if (!j.is_array()) bad(field, "expected an array of numbers");
  std::vector<double> out;
  for (size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

std::optional<double> opt_number(const Json& j, const std::string& key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return number(*it, join(where, key));
}

Json opt_to_json(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

// Rethrows geometry validation failures as parse errors on `field`.
template <class F>
auto checked(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const GeoError& e) {
    if (e.code() == ErrorCode::parse_error) throw;
    bad(field, e.what());
  }
}

Point point_at(const Json& j, const Space& space, const std::string& field) {
  return checked(field, [&] {
    switch (space.kind()) {
      case SpaceKind::euclidean:
      case SpaceKind::l2box: {
        auto x = numbers(j, field);
        Point p = space.kind() == SpaceKind::euclidean ? Point::euclidean(std::move(x))
                                                       : Point::l2box(std::move(x));
        space.validate(p);
        return p;
      }
      case SpaceKind::hyperbolic: {
        if (!j.is_object()) bad(field, "expected {\"half_plane\": [x, y]} or {\"disk\": [u, v]}");
        Point p;
        if (j.contains("half_plane")) {
          const auto c = numbers(j["half_plane"], field + ".half_plane");
          if (c.size() != 2) bad(field + ".half_plane", "expected two numbers");
          p = Point::half_plane(c[0], c[1]);
        } else if (j.contains("disk")) {
          const auto c = numbers(j["disk"], field + ".disk");
          if (c.size() != 2) bad(field + ".disk", "expected two numbers");
          p = Point::disk(c[0], c[1]);
        } else {
          bad(field, "expected half_plane or disk coordinates");
        }
        space.validate(p);
        return p;
      }
      case SpaceKind::rtree: {
        if (!j.is_object()) bad(field, "expected {\"vertex\": v} or {\"edge\": e, \"offset\": s}");
        Point p = j.contains("vertex")
                      ? Point::tree_vertex(integer(j["vertex"], field + ".vertex"))
                      : Point::tree_edge(integer(need(j, "edge", field), field + ".edge"),
                                         number(need(j, "offset", field), field + ".offset"));
        space.validate(p);
        return p;
      }
    }
    bad(field, "unsupported space");
  });
}

Space space_at(const Json& j, const std::string& field) {
  const SpaceKind kind = checked(join(field, "kind"), [&] {
    return space_kind_from_string(text(need(j, "kind", field), join(field, "kind")));
  });
  return checked(field, [&] {
    switch (kind) {
      case SpaceKind::euclidean:
        return Space::euclidean(integer(need(j, "dimension", field), join(field, "dimension")));
      case SpaceKind::hyperbolic:
        return Space::hyperbolic();
      case SpaceKind::l2box: {
        const int n = integer(need(j, "dimension", field), join(field, "dimension"));
        const double base = j.contains("base") ? number(j["base"], join(field, "base")) : 10.0;
        return Space::l2box(n, base);
      }
      case SpaceKind::rtree: {
        const int vertices = integer(need(j, "vertices", field), join(field, "vertices"));
        const Json& edges = need(j, "edges", field);
        if (!edges.is_array()) bad(join(field, "edges"), "expected an array");
        std::vector<TreeEdge> list;
        for (size_t i = 0; i < edges.size(); ++i) {
          const std::string ef = join(field, "edges") + "[" + std::to_string(i) + "]";
          const auto e = numbers(edges[i], ef);
          if (e.size() < 2 || e.size() > 3) bad(ef, "expected [from, to, length] (to = -1 for the ray)");
          TreeEdge te;
          te.from = static_cast<int>(e[0]);
          te.to = static_cast<int>(e[1]);
          if (te.to >= 0 && e.size() != 3) bad(ef, "finite edges need a length");
          te.length = e.size() == 3 ? e[2] : 0.0;
          list.push_back(te);
        }
        return Space::rtree(RTree(vertices, std::move(list)));
      }
    }
    bad(field, "unsupported space");
  });
}

ConvexDomain domain_at(const Json& j, const Space& space, const std::string& field) {
  const std::string kind = text(need(j, "kind", field), join(field, "kind"));
  ConvexDomain d;
  if (kind == "whole") {
    d = WholeSpace{};
  } else if (kind == "ball") {
    d = MetricBall{point_at(need(j, "center", field), space, join(field, "center")),
                   number(need(j, "radius", field), join(field, "radius"))};
  } else if (kind == "box") {
    d = BoxDomain{};
  } else if (kind == "subtree") {
    const Json& e = need(j, "edges", field);
    if (!e.is_array()) bad(join(field, "edges"), "expected an array of edge ids");
    Subtree s;
    for (size_t i = 0; i < e.size(); ++i) s.edges.push_back(integer(e[i], join(field, "edges")));
    d = s;
  } else {
    bad(join(field, "kind"), "unknown domain '" + kind + "' (whole, ball, box, subtree)");
  }
  checked(field, [&] {
    validate_domain(space, d);
    return 0;
  });
  return d;
}

Curve curve_at(const Json& j, const std::string& field) {
  const Space space = space_at(need(j, "space", field), join(field, "space"));
  const Json& samples = need(j, "samples", field);
  if (!samples.is_array()) bad(join(field, "samples"), "expected an array");
  std::vector<CurveSample> list;
  for (size_t i = 0; i < samples.size(); ++i) {
    const std::string sf = join(field, "samples") + "[" + std::to_string(i) + "]";
    list.push_back({number(need(samples[i], "t", sf), sf + ".t"),
                    point_at(need(samples[i], "point", sf), space, sf + ".point")});
  }
  std::optional<CurveGenerator> gen;
  if (j.contains("generator") && !j["generator"].is_null()) {
    const std::string gf = join(field, "generator");
    gen = CurveGenerator{text(need(j["generator"], "name", gf), gf + ".name"),
                         numbers(need(j["generator"], "params", gf), gf + ".params")};
  }
  return checked(field, [&] { return Curve(space, std::move(list), std::move(gen)); });
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

}  // namespace

Json space_to_json(const Space& space) {
  Json j;
  j["kind"] = to_string(space.kind());
  switch (space.kind()) {
    case SpaceKind::euclidean:
      j["dimension"] = space.dimension();
      break;
    case SpaceKind::hyperbolic:
      break;
    case SpaceKind::l2box:
      j["dimension"] = space.dimension();
      j["base"] = space.base();
      break;
    case SpaceKind::rtree: {
      const RTree& t = space.tree();
      j["vertices"] = t.vertex_count();
      Json edges = Json::array();
      for (const TreeEdge& e : t.edges()) {
        edges.push_back(e.is_ray() ? Json::array({e.from, -1}) : Json::array({e.from, e.to, e.length}));
      }
      j["edges"] = edges;
      break;
    }
  }
  return j;
}

Space space_from_json(const Json& j) { return space_at(j, "space"); }

Json domain_to_json(const ConvexDomain& domain) {
  Json j;
  j["kind"] = domain_name(domain);
  if (const auto* b = std::get_if<MetricBall>(&domain)) {
    j["center"] = point_to_json(b->center);
    j["radius"] = b->radius;
  } else if (const auto* s = std::get_if<Subtree>(&domain)) {
    j["edges"] = s->edges;
  }
  return j;
}

ConvexDomain domain_from_json(const Json& j, const Space& space) {
  return domain_at(j, space, "domain");
}

Json point_to_json(const Point& p) {
  switch (p.kind()) {
    case SpaceKind::euclidean:
    case SpaceKind::l2box:
      return Json(std::vector<double>(p.coords().begin(), p.coords().end()));
    case SpaceKind::hyperbolic:
      return Json{{"half_plane", {p.half_plane().x, p.half_plane().y}}};
    case SpaceKind::rtree: {
      const TreeLocation& t = p.tree();
      if (t.on_vertex()) return Json{{"vertex", t.vertex}};
      return Json{{"edge", t.edge}, {"offset", t.offset}};
    }
  }
  return Json();
}

Point point_from_json(const Json& j, const Space& space) { return point_at(j, space, "point"); }

Json curve_to_json(const Curve& curve) {
  Json j;
  j["space"] = space_to_json(curve.space());
  Json samples = Json::array();
  for (const CurveSample& s : curve.samples()) {
    samples.push_back({{"t", s.t}, {"point", point_to_json(s.point)}});
  }
  j["samples"] = samples;
  if (curve.generator()) {
    j["generator"] = {{"name", curve.generator()->name}, {"params", curve.generator()->params}};
  } else {
    j["generator"] = nullptr;
  }
  return j;
}

Curve curve_from_json(const Json& j) { return curve_at(j, ""); }

Json transcript_to_json(const Transcript& t) {
  const GameConfig& c = t.config;
  Json header;
  header["space"] = space_to_json(c.space);
  header["domain"] = domain_to_json(c.domain);
  header["D"] = c.D;
  header["tol"] = c.tol;
  header["N"] = c.N;
  header["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  header["continue_after_capture"] = c.continue_after_capture;
  header["lion"] = point_to_json(c.lion);
  header["man"] = point_to_json(c.man);
  header["strategy"] = t.strategy;

  Json rows = Json::array();
  for (const StepRecord& r : t.steps) {
    rows.push_back({{"n", r.n},
                    {"lion", point_to_json(r.lion)},
                    {"man", point_to_json(r.man)},
                    {"D_n", r.gap},
                    {"gap_after", r.gap_after},
                    {"clamped", r.clamped},
                    {"stationary", r.stationary}});
  }
  Json j;
  j["header"] = header;
  j["rows"] = rows;
  j["final_lion"] = point_to_json(t.final_lion);
  j["final_man"] = t.final_man ? point_to_json(*t.final_man) : Json(nullptr);
  j["stop"] = {{"reason", to_string(t.stop)}, {"capture_step", opt_to_json(t.capture_step)}};
  j["clamp_count"] = t.clamp_count;
  return j;
}

Transcript transcript_from_json(const Json& j) {
  const Json& h = need(j, "header", "");
  Transcript t;
  GameConfig& c = t.config;
  c.space = space_at(need(h, "space", "header"), "header.space");
  c.domain = domain_at(need(h, "domain", "header"), c.space, "header.domain");
  c.D = number(need(h, "D", "header"), "header.D");
  c.tol = number(need(h, "tol", "header"), "header.tol");
  c.N = integer(need(h, "N", "header"), "header.N");
  const Json& seed = need(h, "seed", "header");
  if (!seed.is_null()) {
    if (!seed.is_number_unsigned()) bad("header.seed", "expected a nonnegative integer");
    c.seed = seed.get<std::uint64_t>();
  }
  c.continue_after_capture =
      boolean(need(h, "continue_after_capture", "header"), "header.continue_after_capture");
  c.lion = point_at(need(h, "lion", "header"), c.space, "header.lion");
  c.man = point_at(need(h, "man", "header"), c.space, "header.man");
  t.strategy = text(need(h, "strategy", "header"), "header.strategy");

  const Json& rows = need(j, "rows", "");
  if (!rows.is_array()) bad("rows", "expected an array");
  for (size_t i = 0; i < rows.size(); ++i) {
    const std::string rf = "rows[" + std::to_string(i) + "]";
    const Json& r = rows[i];
    StepRecord s;
    s.n = integer(need(r, "n", rf), rf + ".n");
    if (s.n != static_cast<int>(i)) bad(rf + ".n", "expected " + std::to_string(i));
    s.lion = point_at(need(r, "lion", rf), c.space, rf + ".lion");
    s.man = point_at(need(r, "man", rf), c.space, rf + ".man");
    s.gap = number(need(r, "D_n", rf), rf + ".D_n");
    s.gap_after = number(need(r, "gap_after", rf), rf + ".gap_after");
    s.clamped = boolean(need(r, "clamped", rf), rf + ".clamped");
    s.stationary = boolean(need(r, "stationary", rf), rf + ".stationary");
    t.steps.push_back(std::move(s));
  }
  t.final_lion = point_at(need(j, "final_lion", ""), c.space, "final_lion");
  const Json& fm = need(j, "final_man", "");
  if (!fm.is_null()) t.final_man = point_at(fm, c.space, "final_man");
  const Json& stop = need(j, "stop", "");
  t.stop = checked("stop.reason", [&] {
    return stop_reason_from_string(text(need(stop, "reason", "stop"), "stop.reason"));
  });
  const Json& cs = need(stop, "capture_step", "stop");
  if (!cs.is_null()) t.capture_step = integer(cs, "stop.capture_step");
  t.clamp_count = integer(need(j, "clamp_count", ""), "clamp_count");
  return t;
}

SetupFile setup_from_json(const Json& j) {
  SetupFile s;
  s.space = space_at(need(j, "space", ""), "space");
  if (j.contains("domain")) s.domain = domain_at(j["domain"], s.space, "domain");
  if (j.contains("lion")) s.lion = point_at(j["lion"], s.space, "lion");
  if (j.contains("man")) s.man = point_at(j["man"], s.space, "man");
  s.D = opt_number(j, "D", "");
  s.tol = opt_number(j, "tol", "");
  s.b = opt_number(j, "b", "");
  if (j.contains("N")) s.N = integer(j["N"], "N");
  if (j.contains("strategy")) {
    const Json& m = j["strategy"];
    if (m.is_string()) {
      s.strategy = m.get<std::string>();
    } else {
      s.strategy = text(need(m, "name", "strategy"), "strategy.name");
      if (m.contains("directions")) s.directions = integer(m["directions"], "strategy.directions");
      if (m.contains("moves")) {
        const Json& mv = m["moves"];
        if (!mv.is_array()) bad("strategy.moves", "expected an array of points");
        for (size_t i = 0; i < mv.size(); ++i) {
          s.script.push_back(point_at(mv[i], s.space, "strategy.moves[" + std::to_string(i) + "]"));
        }
      }
    }
  }
  if (j.contains("curve")) {
    s.curve = curve_at(j["curve"], "curve");
    if (!s.curve->space().same_geometry(s.space)) bad("curve.space", "differs from the config space");
  }
  return s;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::invalid_input, "cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::parse_error, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::invalid_input, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorCode::invalid_input, "failed writing '" + path + "'");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string gap_csv(const Transcript& t) {
  std::string out = "n,D_n\n";
  for (const StepRecord& r : t.steps) out += std::to_string(r.n) + "," + fmt(r.gap) + "\n";
  return out;
}

std::string beta_csv(const BetaSequence& seq) {
  std::string out = "n,beta,alpha\n";
  for (const BetaEntry& e : seq.entries) {
    out += std::to_string(e.n) + "," + fmt(e.beta) + "," + (std::isnan(e.alpha) ? "" : fmt(e.alpha)) + "\n";
  }
  return out;
}

std::string audit_csv(const CaptureAudit& audit) {
  std::string out = "n,colinearity,length_residual\n";
  for (size_t n = 0; n < audit.length_residuals.size(); ++n) {
    out += std::to_string(n) + "," + fmt(audit.colinearity[n]) + "," +
           fmt(audit.length_residuals[n]) + "\n";
  }
  return out;
}

std::string violation_csv(const QGReport& r) {
  std::string out = "kind,s,t,value\n";
  out += "worst_lower_ratio," + fmt(r.lower_ratio_witness.s) + "," + fmt(r.lower_ratio_witness.t) +
         "," + fmt(r.worst_lower_ratio) + "\n";
  out += "worst_lower_slack," + fmt(r.lower_slack_witness.s) + "," + fmt(r.lower_slack_witness.t) +
         "," + fmt(r.worst_lower_slack) + "\n";
  out += "worst_upper_excess," + fmt(r.upper_witness.s) + "," + fmt(r.upper_witness.t) + "," +
         fmt(r.worst_upper_excess) + "\n";
  if (r.first_violation) {
    const Violation& v = *r.first_violation;
    out += "first_violation_" + v.bound + "," + fmt(v.pair.s) + "," + fmt(v.pair.t) + "," +
           fmt(v.distance) + "\n";
  }
  return out;
}

std::string ray_csv(const RayApprox& ray) {
  std::string out = "k,distance_from_base,first_n,iterations,last_residual,stop,point\n";
  for (const RayPoint& p : ray.points) {
    const double last = p.residuals.empty() ? 0.0 : p.residuals.back();
    out += std::to_string(p.k) + "," + fmt(p.distance_from_base) + "," + std::to_string(p.first_n) +
           "," + std::to_string(p.residuals.size()) + "," + fmt(last) + "," + p.stop + ",\"" +
           to_string(p.point) + "\"\n";
  }
  return out;
}

}  // namespace geolab::io
