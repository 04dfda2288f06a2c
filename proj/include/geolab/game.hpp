#pragma once

// The discrete Lion-Man game: lion update, man strategies, transcripts and
// finite-horizon outcome classification.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "geolab/curves.hpp"
#include "geolab/spaces.hpp"

namespace geolab {

struct GameConfig {
  Space space = Space::euclidean(2);
  ConvexDomain domain = WholeSpace{};
  double D = 1.0;
  int N = 100;
  double tol = 1e-9;
  Point lion;
  Point man;
  std::optional<std::uint64_t> seed;
  // Keep playing after physical capture instead of stopping.
  bool continue_after_capture = false;
};

// Throws invalid_input on D <= 0, tol <= 0, N < 1 or a start point outside
// the domain.
void validate_config(const GameConfig& config);

struct StepRecord {
  int n = 0;
  Point lion;              // L_n
  Point man;               // M_n
  double gap = 0.0;        // D_n = d(L_n, M_n)
  double gap_after = 0.0;  // d(L_{n+1}, M_n)
  // The man's move M_n -> M_{n+1} was cut back to length D.
  bool clamped = false;
  // The man did not move.
  bool stationary = false;
  bool operator==(const StepRecord&) const = default;
};

enum class StopReason { physical_capture, step_budget };
const char* to_string(StopReason reason);
StopReason stop_reason_from_string(const std::string& name);

struct Transcript {
  GameConfig config;
  std::string strategy;
  std::vector<StepRecord> steps;
  Point final_lion;                // L_{last + 1}
  std::optional<Point> final_man;  // M_{last + 1} when the man moved after the last row
  StopReason stop = StopReason::step_budget;
  std::optional<int> capture_step;  // first n with d(L_{n+1}, M_n) <= tol
  int clamp_count = 0;
};

// Field-by-field equality, spaces compared by geometry.
bool same_transcript(const Transcript& a, const Transcript& b);

// Lion points L_0, ..., L_{last + 1}.
std::vector<Point> lion_path(const Transcript& t);

Point lion_step(const Space& space, const Point& lion, const Point& man, double D);

struct ManContext {
  const GameConfig& config;
  int n = 0;
  const Point& lion;       // L_n
  const Point& lion_next;  // L_{n+1}
  const Point& man;        // M_n
};

struct ManMove {
  Point point;
  bool stationary = false;
};

class ManStrategy {
 public:
  virtual ~ManStrategy() = default;
  virtual std::string name() const = 0;
  virtual bool stochastic() const { return false; }
  // Called once before the first move.
  virtual void start(const GameConfig&) {}
  // Proposes M_{n+1}.
  virtual ManMove propose(const ManContext& ctx) = 0;
};

using ManStrategyPtr = std::unique_ptr<ManStrategy>;

ManStrategyPtr man_stationary_strategy();
// Farthest of `directions` moves of length D from L_{n+1}; ties go to the
// lower candidate index.
ManStrategyPtr man_greedy_strategy(int directions);
// Uniform choice among the greedy candidates, seeded from the config.
ManStrategyPtr man_random_strategy(int directions);
// M_n = curve((n + 2) D + 1). The curve needs a closed-form extension.
ManStrategyPtr man_directional_strategy(Curve curve, double D);
// M_1, M_2, ... from the list, then stays put.
ManStrategyPtr man_scripted_strategy(std::vector<Point> moves);

// Start point M_0 = curve(2 D + 1) of the directional strategy.
Point directional_start(const Curve& curve, double D);

// Throws strategy_fault naming the step when a proposal leaves the domain.
Transcript run_game(const GameConfig& config, ManStrategy& man);

enum class OutcomeKind { lion_wins_physical, lion_wins_limit, man_wins_observed, undecided };
const char* to_string(OutcomeKind kind);

struct Outcome {
  OutcomeKind kind = OutcomeKind::undecided;
  std::optional<int> n0;
  // Statistics of D_n - D over the final tenth of the rows.
  int tail_from = 0;
  double tail_min_excess = 0.0;
  double tail_max_excess = 0.0;
  double final_excess = 0.0;
  double margin = 0.0;
};

// Physical capture when some D_n <= D. Otherwise the tail of D_n - D decides:
// within tol at the end of a nonincreasing tail is the limit case, at least
// 10 tol throughout a tail that has stopped falling is a man win.
Outcome classify_outcome(const Transcript& transcript, double D, double tol);

// Random point inside a domain, for sweeps.
Point random_domain_point(const Space& space, const ConvexDomain& domain, std::mt19937_64& rng);

struct SweepJob {
  GameConfig config;
  std::function<ManStrategyPtr()> strategy;
};

struct SweepResult {
  std::optional<Transcript> transcript;
  std::string error;
};

// Runs the jobs on up to `threads` workers; results keep the job order.
std::vector<SweepResult> run_sweep(const std::vector<SweepJob>& jobs, int threads = 0);

}  // namespace geolab
