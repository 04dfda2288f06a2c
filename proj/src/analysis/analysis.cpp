#include "geolab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "geolab/hyperbolicity.hpp"

namespace geolab {

namespace {

constexpr double kPi = std::numbers::pi;

bool bounded_domain(const Space& space, const ConvexDomain& domain) {
  if (std::holds_alternative<MetricBall>(domain) || std::holds_alternative<BoxDomain>(domain)) {
    return true;
  }
  if (space.kind() != SpaceKind::rtree) return space.kind() == SpaceKind::l2box;
  const auto ray = space.tree().ray_edge();
  if (!ray) return true;
  if (const auto* sub = std::get_if<Subtree>(&domain)) {
    return std::find(sub->edges.begin(), sub->edges.end(), *ray) == sub->edges.end();
  }
  return false;
}

}  // namespace

BetaSequence beta_angles(const Space& space, const Transcript& transcript) {
  const auto& rows = transcript.steps;
  if (rows.size() < 2) fail(ErrorCode::insufficient_data, "angle sequence needs at least 2 steps");
  if (!transcript.config.space.same_geometry(space)) {
    fail(ErrorCode::invalid_input, "transcript was recorded in another space");
  }
  const std::vector<Point> lions = lion_path(transcript);
  std::vector<Point> men;
  for (const StepRecord& r : rows) men.push_back(r.man);
  if (transcript.final_man) men.push_back(*transcript.final_man);

  BetaSequence out;
  for (size_t n = 1; n < men.size(); ++n) {
    const Point& L = lions[n];
    if (distance(space, lions[n - 1], L) == 0.0 || distance(space, L, men[n]) == 0.0) {
      out.gaps.push_back(static_cast<int>(n));
      continue;
    }
    BetaEntry e;
    e.n = static_cast<int>(n);
    e.beta = alexandrov_angle(space, L, lions[n - 1], men[n]);
    const bool caught_before = distance(space, L, men[n - 1]) == 0.0;
    if (caught_before) {
      e.alpha = std::numeric_limits<double>::quiet_NaN();
    } else if (distance(space, men[n - 1], men[n]) == 0.0) {
      e.alpha = 0.0;
    } else {
      e.alpha = alexandrov_angle(space, L, men[n - 1], men[n]);
    }
    if (!caught_before) {
      out.worst_angle_deficit = std::max(out.worst_angle_deficit, kPi - (e.beta + e.alpha));
    }
    out.entries.push_back(e);
  }
  if (!out.entries.empty()) {
    const size_t count = out.entries.size();
    const size_t from = count - std::max<size_t>(1, count / 5);
    out.tail_min = kPi;
    double sum = 0.0;
    for (size_t i = from; i < count; ++i) {
      out.tail_min = std::min(out.tail_min, out.entries[i].beta);
      sum += out.entries[i].beta;
    }
    out.tail_mean = sum / static_cast<double>(count - from);
  }
  return out;
}

double beta_threshold(double k, double D) {
  if (!(k > 0.0) || !(D > 0.0)) fail(ErrorCode::invalid_input, "k and D must be positive");
  return kPi - kPi / (4.0 * std::ceil(k / D));
}

ManWinsCurve curve_from_transcript(const Space& space, const Transcript& transcript, double k,
                                   double D) {
  const double threshold = beta_threshold(k, D);
  const BetaSequence seq = beta_angles(space, transcript);
  int last_bad = 0;
  double bad_beta = kPi;
  for (int g : seq.gaps) last_bad = std::max(last_bad, g);
  for (const BetaEntry& e : seq.entries) {
    if (e.beta < threshold && e.n >= last_bad) {
      last_bad = e.n;
      bad_beta = e.beta;
    }
  }
  const int last_n = seq.entries.empty() ? 0 : seq.entries.back().n;
  const int n_k = std::max(1, last_bad);
  if (n_k + 1 > last_n) {
    fail(ErrorCode::threshold_not_met,
         "angle threshold " + std::to_string(threshold) + " fails at step " +
             std::to_string(last_bad) + " (beta " + std::to_string(bad_beta) +
             ") with no recorded steps after it");
  }
  const std::vector<Point> lions = lion_path(transcript);
  std::vector<Point> pts(lions.begin() + n_k, lions.end());
  return {n_k, threshold, Curve::from_points(space, pts, D)};
}

QGReport verify_mans_win_curve(const Curve& curve, double k, int grid) {
  if (grid < 2) fail(ErrorCode::invalid_input, "grid must be at least 2");
  if (!(k > 0.0)) fail(ErrorCode::invalid_input, "k must be positive");
  return check_quasi_geodesic(curve, std::sqrt(2.0), 0.0, grid, k);
}

CaptureAudit rtree_capture_audit(const Space& space, const Transcript& transcript, double D,
                                 double tolerance) {
  if (space.kind() != SpaceKind::rtree) {
    fail(ErrorCode::unsupported_space, "capture audit needs an R-tree");
  }
  if (!transcript.config.space.same_geometry(space)) {
    fail(ErrorCode::invalid_input, "transcript was recorded in another space");
  }
  const auto& rows = transcript.steps;
  CaptureAudit out;
  out.tolerance = tolerance;
  size_t m = 0;
  while (m < rows.size() && rows[m].gap > D) ++m;
  if (m < rows.size()) out.capture_step = static_cast<int>(m);
  const std::vector<Point> lions = lion_path(transcript);
  for (const Point& p : lions) space.validate(p);
  const Point& origin = lions[0];

  std::vector<double> from_origin(m + 1);
  for (size_t n = 0; n <= m; ++n) from_origin[n] = distance(space, origin, lions[n]);
  for (size_t n = 0; n <= m; ++n) {
    out.colinearity.push_back(
        n == 0 ? 0.0
               : from_origin[n - 1] + distance(space, lions[n - 1], lions[n]) - from_origin[n]);
    out.length_residuals.push_back(std::abs(from_origin[n] - static_cast<double>(n) * D));
    const bool bad = std::abs(out.colinearity.back()) > tolerance ||
                     out.length_residuals.back() > tolerance;
    if (bad && !out.first_failure) out.first_failure = static_cast<int>(n);
  }
  out.audited = static_cast<int>(m);
  out.final_distance = from_origin[m];
  out.pass = !out.first_failure;
  return out;
}

EquivalenceReport equivalence_report(const Space& space, const ConvexDomain& domain,
                                     const BatteryParams& params) {
  validate_domain(space, domain);
  EquivalenceReport report;
  report.kind = space.kind();
  report.domain = domain_name(domain);
  report.gromov_hyperbolic = space.is_gromov_hyperbolic();
  report.exploratory = !report.gromov_hyperbolic;
  if (report.exploratory) {
    report.notes.push_back("space is not Gromov hyperbolic: the equivalence hypotheses fail, "
                           "results are exploratory");
  }
  report.notes.push_back(bounded_domain(space, domain) ? "domain is bounded"
                                                       : "domain is unbounded");

  std::mt19937_64 rng(params.seed);
  std::vector<SweepJob> jobs;
  const int directions = params.directions;
  for (int r = 0; r < params.runs; ++r) {
    GameConfig c;
    c.space = space;
    c.domain = domain;
    c.D = params.D;
    c.N = params.N;
    c.tol = params.tol;
    c.lion = random_domain_point(space, domain, rng);
    c.man = random_domain_point(space, domain, rng);
    c.seed = params.seed + static_cast<std::uint64_t>(r);
    jobs.push_back({c, [directions] { return man_greedy_strategy(directions); }});
    jobs.push_back({c, [directions] { return man_random_strategy(directions); }});
    jobs.push_back({c, [] { return man_stationary_strategy(); }});
  }
  if (params.directional) {
    const Curve curve = *params.directional;
    GameConfig c;
    c.space = space;
    c.domain = domain;
    c.D = params.b > 0.0 ? params.b : params.D;
    c.N = params.N;
    c.tol = params.tol;
    c.lion = curve.at(0.0);
    c.man = directional_start(curve, c.D);
    const double D = c.D;
    jobs.push_back({c, [curve, D] { return man_directional_strategy(curve, D); }});
  }

  const std::vector<SweepResult> results = run_sweep(jobs, params.threads);
  for (size_t i = 0; i < jobs.size(); ++i) {
    BatteryRun run;
    run.lion = jobs[i].config.lion;
    run.man = jobs[i].config.man;
    run.strategy = jobs[i].strategy()->name();
    if (!results[i].transcript) {
      run.error = results[i].error;
      ++report.undecided;
      report.runs.push_back(std::move(run));
      continue;
    }
    const Transcript& t = *results[i].transcript;
    const double D = jobs[i].config.D;
    run.steps = static_cast<int>(t.steps.size());
    run.outcome = classify_outcome(t, D, jobs[i].config.tol);
    switch (run.outcome.kind) {
      case OutcomeKind::lion_wins_physical:
      case OutcomeKind::lion_wins_limit: ++report.lion_wins; break;
      case OutcomeKind::man_wins_observed: ++report.man_wins; break;
      case OutcomeKind::undecided: ++report.undecided; break;
    }
    if (run.outcome.kind == OutcomeKind::man_wins_observed) {
      try {
        const double k = params.k * D;
        const ManWinsCurve mc = curve_from_transcript(space, t, k, D);
        run.n_k = mc.n_k;
        run.curve_certificate = verify_mans_win_curve(mc.curve, k, params.grid).pass;
      } catch (const GeoError& e) {
        run.curve_certificate = false;
        run.note = e.what();
      }
      try {
        extract_ray_from_directional_sequence(space, lion_path(t), params.b, 10);
        run.ray_extracted = true;
      } catch (const GeoError& e) {
        run.ray_extracted = false;
        if (run.note.empty()) run.note = e.what();
      }
    }
    report.runs.push_back(std::move(run));
  }
  return report;
}

}  // namespace geolab
