#pragma once

// Post-hoc analysis of game transcripts: angle sequences, the man-wins curve
// and its local quasi-geodesic certificate, the tree capture audit, and a
// battery runner that lines the outcomes up against the main equivalences.

#include <optional>
#include <string>
#include <vector>

#include "geolab/curves.hpp"
#include "geolab/game.hpp"
#include "geolab/spaces.hpp"

namespace geolab {

struct BetaEntry {
  int n = 0;
  double beta = 0.0;   // angle at L_n between L_{n-1} and M_n
  double alpha = 0.0;  // angle at L_n between M_{n-1} and M_n
};

struct BetaSequence {
  std::vector<BetaEntry> entries;
  // Steps n >= 1 where L_{n-1} = L_n or L_n = M_n.
  std::vector<int> gaps;
  // Over the last fifth of the entries.
  double tail_min = 0.0;
  double tail_mean = 0.0;
  // max of pi - (beta_n + alpha_n), skipping steps where L_n = M_{n-1}.
  double worst_angle_deficit = -std::numeric_limits<double>::infinity();
};

BetaSequence beta_angles(const Space& space, const Transcript& transcript);

// pi - pi / (4 ceil(k / D)).
double beta_threshold(double k, double D);

struct ManWinsCurve {
  int n_k = 0;
  double threshold = 0.0;
  Curve curve;
};

// Smallest n_k >= 1 with beta_{n+1} >= threshold for every recorded n >= n_k,
// and the curve through L_{n_k}, L_{n_k + 1}, ... with gamma(n D) = L_{n_k + n}.
// Throws threshold_not_met naming the last step below the threshold.
ManWinsCurve curve_from_transcript(const Space& space, const Transcript& transcript, double k,
                                   double D);

// k-local (sqrt 2, 0) quasi-geodesic check.
QGReport verify_mans_win_curve(const Curve& curve, double k, int grid);

struct CaptureAudit {
  bool pass = true;
  // Lion points L_0 .. L_m checked, m = 1 + last row with D_n > D.
  int audited = 0;
  // d(L_0, L_{n-1}) + d(L_{n-1}, L_n) - d(L_0, L_n), n = 1 .. m (0 at n = 0).
  std::vector<double> colinearity;
  // |d(L_0, L_n) - n D|, n = 0 .. m.
  std::vector<double> length_residuals;
  std::optional<int> first_failure;
  std::optional<int> capture_step;
  double tolerance = 0.0;
  double final_distance = 0.0;  // d(L_0, L_m)
};

// Checks L_{n-1} in [L_0, L_n] and d(L_0, L_n) = n D while D_n > D. The
// default tolerance 0 demands exact equality.
CaptureAudit rtree_capture_audit(const Space& space, const Transcript& transcript, double D,
                                 double tolerance = 0.0);

struct BatteryParams {
  double D = 1.0;
  int N = 500;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  int runs = 4;
  int directions = 16;
  double k = 12.0;  // in units of D
  int grid = 300;
  // Directional curve for the man, with its slack b (the game uses D = b
  // when b > 0).
  std::optional<Curve> directional;
  double b = 0.0;
  int threads = 0;
};

struct BatteryRun {
  std::string strategy;
  Point lion;
  Point man;
  Outcome outcome;
  int steps = 0;
  std::string error;
  // Man-wins runs only.
  std::optional<int> n_k;
  std::optional<bool> curve_certificate;
  std::optional<bool> ray_extracted;
  std::string note;
};

struct EquivalenceReport {
  SpaceKind kind = SpaceKind::euclidean;
  std::string domain;
  bool gromov_hyperbolic = false;
  bool exploratory = false;
  std::vector<BatteryRun> runs;
  int lion_wins = 0;
  int man_wins = 0;
  int undecided = 0;
  std::vector<std::string> notes;
};

// Greedy, random and stationary men from seeded random starts, plus the
// directional man when a curve is supplied; man-wins runs are pushed through
// the curve construction, its certificate and ray extraction.
EquivalenceReport equivalence_report(const Space& space, const ConvexDomain& domain,
                                     const BatteryParams& params);

}  // namespace geolab
