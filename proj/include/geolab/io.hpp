#pragma once

// JSON encodings of spaces, domains, points, curves and transcripts, config
// loading, and CSV series for plotting. Malformed input raises parse_error
// naming the offending field.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "geolab/analysis.hpp"
#include "geolab/curves.hpp"
#include "geolab/game.hpp"
#include "geolab/spaces.hpp"

namespace geolab::io {

using Json = nlohmann::json;

Json space_to_json(const Space& space);
Space space_from_json(const Json& j);

Json domain_to_json(const ConvexDomain& domain);
ConvexDomain domain_from_json(const Json& j, const Space& space);

// Vectors as arrays, hyperbolic points as {"half_plane": [x, y]} (or
// {"disk": [u, v]} on input), tree points as {"vertex": v} or
// {"edge": e, "offset": s}.
Json point_to_json(const Point& p);
Point point_from_json(const Json& j, const Space& space);

Json curve_to_json(const Curve& curve);
Curve curve_from_json(const Json& j);

Json transcript_to_json(const Transcript& t);
Transcript transcript_from_json(const Json& j);

// Space, domain, optional start points, game parameters, man strategy and
// directional curve, as stored in a config file.
struct SetupFile {
  Space space = Space::euclidean(2);
  ConvexDomain domain = WholeSpace{};
  std::optional<Point> lion;
  std::optional<Point> man;
  std::optional<double> D;
  std::optional<int> N;
  std::optional<double> tol;
  std::optional<std::string> strategy;
  std::optional<int> directions;
  std::vector<Point> script;
  std::optional<Curve> curve;
  std::optional<double> b;
};

SetupFile setup_from_json(const Json& j);

// Reads and parses a JSON file; parse errors carry the line and column.
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string dump(const Json& j);

// Plot series.
std::string gap_csv(const Transcript& t);
std::string beta_csv(const BetaSequence& seq);
std::string audit_csv(const CaptureAudit& audit);
std::string violation_csv(const QGReport& report);
std::string ray_csv(const RayApprox& ray);

}  // namespace geolab::io
