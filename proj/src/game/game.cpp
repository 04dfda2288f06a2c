#include "geolab/game.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace geolab {

namespace {

// Offsets in R-trees are drawn on this grid so that games stay exact.
constexpr double kTreeGrid = 8.0;

bool same_domain(const ConvexDomain& a, const ConvexDomain& b) { return a == b; }

}  // namespace

void validate_config(const GameConfig& config) {
  if (!(config.D > 0.0)) fail(ErrorCode::invalid_input, "step size D must be positive");
  if (!(config.tol > 0.0)) fail(ErrorCode::invalid_input, "capture tolerance must be positive");
  if (config.N < 1) fail(ErrorCode::invalid_input, "step budget N must be at least 1");
  validate_domain(config.space, config.domain);
  config.space.validate(config.lion);
  config.space.validate(config.man);
  if (!domain_contains(config.space, config.domain, config.lion)) {
    fail(ErrorCode::invalid_input, "lion start " + to_string(config.lion) + " is outside the domain");
  }
  if (!domain_contains(config.space, config.domain, config.man)) {
    fail(ErrorCode::invalid_input, "man start " + to_string(config.man) + " is outside the domain");
  }
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::physical_capture: return "physical-capture";
    case StopReason::step_budget: return "step-budget";
  }
  return "?";
}

StopReason stop_reason_from_string(const std::string& name) {
  if (name == "physical-capture") return StopReason::physical_capture;
  if (name == "step-budget") return StopReason::step_budget;
  fail(ErrorCode::parse_error, "unknown stop reason '" + name + "'");
}

bool same_transcript(const Transcript& a, const Transcript& b) {
  const GameConfig& x = a.config;
  const GameConfig& y = b.config;
  return x.space.same_geometry(y.space) && same_domain(x.domain, y.domain) && x.D == y.D &&
         x.N == y.N && x.tol == y.tol && x.lion == y.lion && x.man == y.man &&
         x.seed == y.seed && x.continue_after_capture == y.continue_after_capture &&
         a.strategy == b.strategy && a.steps == b.steps && a.final_lion == b.final_lion &&
         a.final_man == b.final_man && a.stop == b.stop && a.capture_step == b.capture_step &&
         a.clamp_count == b.clamp_count;
}

std::vector<Point> lion_path(const Transcript& t) {
  std::vector<Point> out;
  out.reserve(t.steps.size() + 1);
  for (const StepRecord& r : t.steps) out.push_back(r.lion);
  out.push_back(t.final_lion);
  return out;
}

Point lion_step(const Space& space, const Point& lion, const Point& man, double D) {
  if (!(D > 0.0)) fail(ErrorCode::invalid_input, "step size D must be positive");
  const double d = distance(space, lion, man);
  if (d <= D) return man;
  return point_toward(space, lion, man, D);
}

namespace {

// Geodesic points computed in floating point may land a rounding error outside
// a convex domain; pull them back along the segment from an inside anchor.
Point keep_inside(const Space& space, const ConvexDomain& domain, const Point& anchor, Point p) {
  if (domain_contains(space, domain, p) || !domain_contains(space, domain, anchor)) return p;
  double lo = 0.0;
  double hi = distance(space, anchor, p);
  for (int i = 0; i < 80 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (domain_contains(space, domain, point_toward(space, anchor, p, mid))) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo > 0.0 ? point_toward(space, anchor, p, lo) : anchor;
}

}  // namespace

// --- Strategies ------------------------------------------------------------

namespace {

class Stationary final : public ManStrategy {
 public:
  std::string name() const override { return "stationary"; }
  ManMove propose(const ManContext& ctx) override { return {ctx.man, true}; }
};

class Greedy final : public ManStrategy {
 public:
  explicit Greedy(int directions) : directions_(directions) {
    if (directions < 2) fail(ErrorCode::invalid_input, "greedy strategy needs at least two directions");
  }
  std::string name() const override { return "greedy"; }

  ManMove propose(const ManContext& ctx) override {
    const GameConfig& c = ctx.config;
    const auto cands =
        step_candidates(c.space, c.domain, ctx.man, ctx.lion_next, c.D, directions_);
    double best = distance(c.space, ctx.man, ctx.lion_next);
    const Point* pick = nullptr;
    for (const Point& p : cands) {
      const double d = distance(c.space, p, ctx.lion_next);
      if (d > best) {
        best = d;
        pick = &p;
      }
    }
    if (pick == nullptr) return {ctx.man, true};
    return {*pick, *pick == ctx.man};
  }

 private:
  int directions_;
};

class Random final : public ManStrategy {
 public:
  explicit Random(int directions) : directions_(directions) {
    if (directions < 2) fail(ErrorCode::invalid_input, "random strategy needs at least two directions");
  }
  std::string name() const override { return "random"; }
  bool stochastic() const override { return true; }
  void start(const GameConfig& config) override { rng_.seed(config.seed.value_or(0)); }

  ManMove propose(const ManContext& ctx) override {
    const GameConfig& c = ctx.config;
    const auto cands =
        step_candidates(c.space, c.domain, ctx.man, ctx.lion_next, c.D, directions_);
    std::uniform_int_distribution<size_t> pick(0, cands.size() - 1);
    const Point& p = cands[pick(rng_)];
    return {p, p == ctx.man};
  }

 private:
  int directions_;
  std::mt19937_64 rng_;
};

class Directional final : public ManStrategy {
 public:
  Directional(Curve curve, double D) : curve_(std::move(curve)), D_(D) {
    if (!(D > 0.0)) fail(ErrorCode::invalid_input, "step size D must be positive");
    if (!curve_.extendable()) {
      fail(ErrorCode::insufficient_curve, "directional strategy needs a curve with a closed-form extension");
    }
  }
  std::string name() const override { return "directional"; }

  ManMove propose(const ManContext& ctx) override {
    return {curve_.at((ctx.n + 3) * D_ + 1.0), false};
  }

 private:
  Curve curve_;
  double D_;
};

class Scripted final : public ManStrategy {
 public:
  explicit Scripted(std::vector<Point> moves) : moves_(std::move(moves)) {}
  std::string name() const override { return "scripted"; }

  ManMove propose(const ManContext& ctx) override {
    const size_t i = static_cast<size_t>(ctx.n);
    if (i < moves_.size()) return {moves_[i], moves_[i] == ctx.man};
    return {ctx.man, true};
  }

 private:
  std::vector<Point> moves_;
};

}  // namespace

ManStrategyPtr man_stationary_strategy() { return std::make_unique<Stationary>(); }
ManStrategyPtr man_greedy_strategy(int directions) { return std::make_unique<Greedy>(directions); }
ManStrategyPtr man_random_strategy(int directions) { return std::make_unique<Random>(directions); }
ManStrategyPtr man_directional_strategy(Curve curve, double D) {
  return std::make_unique<Directional>(std::move(curve), D);
}
ManStrategyPtr man_scripted_strategy(std::vector<Point> moves) {
  return std::make_unique<Scripted>(std::move(moves));
}

Point directional_start(const Curve& curve, double D) { return curve.at(2.0 * D + 1.0); }

// --- Engine ----------------------------------------------------------------

Transcript run_game(const GameConfig& config, ManStrategy& man) {
  validate_config(config);
  if (man.stochastic() && !config.seed) {
    fail(ErrorCode::invalid_input, "strategy '" + man.name() + "' is stochastic and needs a seed");
  }
  const Space& space = config.space;
  const double D = config.D;

  Transcript out;
  out.config = config;
  out.strategy = man.name();
  out.steps.reserve(static_cast<size_t>(config.N));
  man.start(config);

  Point lion = config.lion;
  Point pos = config.man;
  for (int n = 0; n < config.N; ++n) {
    StepRecord row;
    row.n = n;
    row.lion = lion;
    row.man = pos;
    row.gap = distance(space, lion, pos);
    const Point next = keep_inside(space, config.domain, lion, lion_step(space, lion, pos, D));
    row.gap_after = distance(space, next, pos);
    lion = next;

    const bool captured_now = !out.capture_step && row.gap_after <= config.tol;
    if (captured_now) out.capture_step = n;
    if (captured_now && !config.continue_after_capture) {
      out.steps.push_back(std::move(row));
      out.stop = StopReason::physical_capture;
      break;
    }

    ManMove move = man.propose({config, n, row.lion, lion, pos});
    space.validate(move.point);
    if (!domain_contains(space, config.domain, move.point)) {
      fail(ErrorCode::strategy_fault, "step " + std::to_string(n) + ": strategy '" + man.name() +
                                          "' proposed " + to_string(move.point) +
                                          " outside the domain");
    }
    if (distance(space, pos, move.point) > D * (1.0 + 1e-12)) {
      move.point = keep_inside(space, config.domain, pos, point_toward(space, pos, move.point, D));
      row.clamped = true;
      ++out.clamp_count;
    }
    row.stationary = move.stationary;
    pos = std::move(move.point);
    out.steps.push_back(std::move(row));
  }
  out.final_lion = lion;
  if (out.stop == StopReason::step_budget) {
    out.final_man = pos;
    if (out.capture_step) out.stop = StopReason::physical_capture;
  }
  return out;
}

// --- Classification --------------------------------------------------------

const char* to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::lion_wins_physical: return "lion-wins-physical";
    case OutcomeKind::lion_wins_limit: return "lion-wins-limit";
    case OutcomeKind::man_wins_observed: return "man-wins-observed";
    case OutcomeKind::undecided: return "undecided";
  }
  return "?";
}

Outcome classify_outcome(const Transcript& transcript, double D, double tol) {
  const auto& rows = transcript.steps;
  if (rows.empty()) fail(ErrorCode::insufficient_data, "empty transcript");
  Outcome out;
  out.margin = 10.0 * tol;
  for (const StepRecord& r : rows) {
    if (r.gap <= D * (1.0 + 1e-12)) {
      out.kind = OutcomeKind::lion_wins_physical;
      out.n0 = r.n;
      return out;
    }
  }

  const int count = static_cast<int>(rows.size());
  const int tail_len = std::max(1, (count + 9) / 10);
  out.tail_from = count - tail_len;
  out.tail_min_excess = std::numeric_limits<double>::infinity();
  out.tail_max_excess = -std::numeric_limits<double>::infinity();
  bool nonincreasing = true;
  for (int i = out.tail_from; i < count; ++i) {
    const double e = rows[static_cast<size_t>(i)].gap - D;
    out.tail_min_excess = std::min(out.tail_min_excess, e);
    out.tail_max_excess = std::max(out.tail_max_excess, e);
    if (i > out.tail_from && e > rows[static_cast<size_t>(i - 1)].gap - D + 1e-9) {
      nonincreasing = false;
    }
  }
  out.final_excess = rows.back().gap - D;
  const double drop = rows[static_cast<size_t>(out.tail_from)].gap - rows.back().gap;

  if (out.final_excess <= tol && nonincreasing) {
    out.kind = OutcomeKind::lion_wins_limit;
  } else if (out.tail_min_excess >= out.margin && drop <= tol) {
    out.kind = OutcomeKind::man_wins_observed;
  } else {
    out.kind = OutcomeKind::undecided;
  }
  return out;
}

// --- Sweeps ----------------------------------------------------------------

Point random_domain_point(const Space& space, const ConvexDomain& domain, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (space.kind() == SpaceKind::rtree) {
    const RTree& t = space.tree();
    std::vector<int> edges;
    if (const auto* sub = std::get_if<Subtree>(&domain)) {
      edges = sub->edges;
    } else {
      for (int e = 0; e < static_cast<int>(t.edges().size()); ++e) edges.push_back(e);
    }
    if (edges.empty()) return Point::tree_vertex(0);
    std::uniform_int_distribution<size_t> pick(0, edges.size() - 1);
    const int e = edges[pick(rng)];
    const double len = t.edge(e).is_ray() ? 8.0 : t.edge(e).length;
    const double steps = std::floor(len * kTreeGrid);
    std::uniform_int_distribution<long long> off(0, static_cast<long long>(steps));
    return Point::tree_edge(e, std::min(len, static_cast<double>(off(rng)) / kTreeGrid));
  }
  if (space.kind() == SpaceKind::l2box || std::holds_alternative<BoxDomain>(domain)) {
    std::vector<double> x(static_cast<size_t>(space.dimension()));
    for (size_t i = 0; i < x.size(); ++i) x[i] = unit(rng) * space.box_bound(static_cast<int>(i) + 1);
    return Point::l2box(std::move(x));
  }
  const auto* ball = std::get_if<MetricBall>(&domain);
  if (space.kind() == SpaceKind::hyperbolic) {
    PointSampler sampler(rng(), ball ? ball->radius + 8.0 : 2.0);
    const Point q = sampler.sample(space);
    if (!ball) return q;
    return point_toward(space, ball->center, q, ball->radius * unit(rng));
  }
  const size_t n = static_cast<size_t>(space.dimension());
  std::normal_distribution<double> gauss;
  std::vector<double> x(n);
  if (!ball) {
    for (double& v : x) v = 10.0 * unit(rng) - 5.0;
    return Point::euclidean(std::move(x));
  }
  double norm = 0.0;
  for (double& v : x) {
    v = gauss(rng);
    norm += v * v;
  }
  norm = std::sqrt(norm);
  const double r = ball->radius * std::pow(unit(rng), 1.0 / static_cast<double>(n));
  const auto c = ball->center.coords();
  for (size_t i = 0; i < n; ++i) x[i] = c[i] + (norm > 0.0 ? r * x[i] / norm : 0.0);
  Point p = Point::euclidean(std::move(x));
  return domain_contains(space, domain, p) ? p : ball->center;
}

std::vector<SweepResult> run_sweep(const std::vector<SweepJob>& jobs, int threads) {
  std::vector<SweepResult> results(jobs.size());
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(1, static_cast<int>(jobs.size())));
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < jobs.size(); i = next++) {
      try {
        ManStrategyPtr man = jobs[i].strategy();
        results[i].transcript = run_game(jobs[i].config, *man);
      } catch (const std::exception& e) {
        results[i].error = e.what();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  return results;
}

}  // namespace geolab
