#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "geolab/io.hpp"

using namespace geolab;
using io::Json;

namespace {

Transcript reparse(const Transcript& t) {
  return io::transcript_from_json(Json::parse(io::dump(io::transcript_to_json(t))));
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const GeoError& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::invalid_input;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const GeoError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("transcripts survive a write and re-read in every space") {
  std::mt19937_64 rng(17);
  const std::vector<std::pair<Space, ConvexDomain>> setups = {
      {Space::euclidean(2), MetricBall{Point::euclidean({0.0, 0.0}), 2.0}},
      {Space::hyperbolic(), MetricBall{Point::half_plane(0.3, 2.0), 2.5}},
      {fixtures::ray_tree(), Subtree{{0, 1, 2}}},
      {Space::l2box(3, 3.0), BoxDomain{}},
  };
  for (const auto& [space, domain] : setups) {
    GameConfig c;
    c.space = space;
    c.domain = domain;
    c.D = 0.375;
    c.N = 60;
    c.tol = 1e-7;
    c.seed = rng();
    c.continue_after_capture = true;
    c.lion = random_domain_point(space, domain, rng);
    c.man = random_domain_point(space, domain, rng);
    auto man = man_random_strategy(7);
    const Transcript t = run_game(c, *man);
    CHECK(same_transcript(t, reparse(t)));
  }
  const Curve ray = fixtures::tree_ray_curve();
  GameConfig c;
  c.space = ray.space();
  c.N = 20;
  c.lion = ray.at(0.0);
  c.man = directional_start(ray, 1.0);
  auto man = man_directional_strategy(ray, 1.0);
  const Transcript t = run_game(c, *man);
  const Transcript back = reparse(t);
  CHECK(same_transcript(t, back));
  CHECK(!back.config.seed.has_value());
}

TEST_CASE("captured transcripts keep their stop record") {
  GameConfig c;
  c.space = Space::euclidean(1);
  c.domain = MetricBall{Point::euclidean({5.0}), 5.0};
  c.lion = Point::euclidean({0.0});
  c.man = Point::euclidean({10.0});
  auto man = man_stationary_strategy();
  const Transcript t = run_game(c, *man);
  const Transcript back = reparse(t);
  CHECK(same_transcript(t, back));
  CHECK(back.stop == StopReason::physical_capture);
  CHECK(*back.capture_step == 9);
  CHECK(!back.final_man.has_value());
}

TEST_CASE("curves, spaces and domains round-trip") {
  const Curve tube = fixtures::tube_curve(6.0, 0.25);
  const Curve back = io::curve_from_json(Json::parse(io::curve_to_json(tube).dump()));
  REQUIRE(back.samples().size() == tube.samples().size());
  for (size_t i = 0; i < back.samples().size(); ++i) {
    CHECK(back.samples()[i].t == tube.samples()[i].t);
    CHECK(back.samples()[i].point == tube.samples()[i].point);
  }
  CHECK(back.generator() == tube.generator());

  const Space tree = fixtures::ray_tree();
  CHECK(io::space_from_json(io::space_to_json(tree)).same_geometry(tree));
  const Space box = Space::l2box(4, 2.5);
  CHECK(io::space_from_json(io::space_to_json(box)).same_geometry(box));
  const ConvexDomain ball = MetricBall{Point::half_plane(1.0, 3.0), 0.5};
  CHECK(io::domain_from_json(io::domain_to_json(ball), Space::hyperbolic()) == ball);

  const Point disk = io::point_from_json(Json::parse(R"({"disk": [0.5, 0]})"), Space::hyperbolic());
  CHECK(distance(Space::hyperbolic(), disk, Point::disk(0.5, 0.0)) == 0.0);
}

TEST_CASE("malformed input names the field") {
  CHECK(code_of([] { io::space_from_json(Json::parse(R"({"dimension": 2})")); }) ==
        ErrorCode::parse_error);
  CHECK(message_of([] { io::space_from_json(Json::parse(R"({"dimension": 2})")); })
            .find("space.kind") != std::string::npos);
  CHECK(message_of([] { io::space_from_json(Json::parse(R"({"kind": "torus"})")); })
            .find("torus") != std::string::npos);
  CHECK(message_of([] {
          io::space_from_json(Json::parse(R"({"kind": "euclidean", "dimension": "two"})"));
        }).find("space.dimension") != std::string::npos);
  CHECK(code_of([] {
          io::point_from_json(Json::parse(R"({"half_plane": [0, -1]})"), Space::hyperbolic());
        }) == ErrorCode::parse_error);
  CHECK(code_of([] {
          io::space_from_json(Json::parse(R"({"kind": "rtree", "vertices": 3, "edges": [[0, 1, 1], [1, 0, 1]]})"));
        }) == ErrorCode::parse_error);
  const std::string cfg = R"({"space": {"kind": "euclidean", "dimension": 1}, "lion": [0, 1]})";
  CHECK(message_of([&] { io::setup_from_json(Json::parse(cfg)); }).find("lion") != std::string::npos);
  CHECK(code_of([] { io::read_json_file("/nonexistent/geolab.cfg"); }) == ErrorCode::invalid_input);
  const std::string bad_row = R"({"header": {}, "rows": []})";
  CHECK(message_of([&] { io::transcript_from_json(Json::parse(bad_row)); }).find("header.space") !=
        std::string::npos);
}

TEST_CASE("plot series") {
  GameConfig c;
  c.space = Space::euclidean(1);
  c.domain = MetricBall{Point::euclidean({5.0}), 5.0};
  c.lion = Point::euclidean({0.0});
  c.man = Point::euclidean({10.0});
  auto man = man_stationary_strategy();
  const Transcript t = run_game(c, *man);
  const std::string csv = io::gap_csv(t);
  CHECK(csv.rfind("n,D_n\n0,10\n1,9\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
}
