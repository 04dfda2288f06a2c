#include "geolab/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <random>

#include "geolab/analysis.hpp"
#include "geolab/curves.hpp"
#include "geolab/game.hpp"
#include "geolab/hyperbolicity.hpp"
#include "geolab/io.hpp"

namespace geolab {

namespace {

// Shortest round-trip decimal form.
std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string opt_num(const std::optional<int>& v) { return v ? std::to_string(*v) : "-"; }

struct UsageError {
  std::string message;
};

struct SimulateArgs {
  std::string config;
  std::optional<std::string> man;
  std::optional<double> D;
  std::optional<int> N;
  std::optional<double> tol;
  std::optional<int> directions;
  std::optional<std::uint64_t> seed;
  bool continue_after_capture = false;
  std::optional<std::string> out;
  std::optional<std::string> csv;
};

struct AnalyzeArgs {
  std::string transcript;
  std::optional<double> k;
  int grid = 300;
  double audit_tol = 0.0;
  std::optional<std::string> report;
  std::optional<std::string> beta_csv;
  std::optional<std::string> audit_csv;
};

struct VerifyArgs {
  std::string curve;
  double lambda = 1.0;
  double epsilon = 0.0;
  int grid = 200;
  std::optional<double> k;
  std::optional<std::string> witness_csv;
};

struct ExtractArgs {
  std::optional<std::string> curve;
  std::optional<std::string> points;
  double lambda = std::sqrt(2.0);
  double alpha = 2.0;
  double delta_star = 0.0;
  double b = 0.0;
  int k_max = 10;
  std::optional<std::string> csv;
};

struct DeltaArgs {
  std::string config;
  int trials = 50;
  std::optional<std::uint64_t> seed;
  double scale = 1.0;
  int grid = 32;
};

struct DemoArgs {
  int N = 6;
  double base = 10.0;
  int grid = 500;
  std::optional<std::string> witness_csv;
};

struct SweepArgs {
  std::string config;
  int runs = 10;
  std::string men = "greedy,random,stationary";
  std::optional<double> D;
  std::optional<int> N;
  std::optional<double> tol;
  std::optional<int> directions;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::optional<std::string> csv;
};

ManStrategyPtr make_strategy(const std::string& name, int directions, const io::SetupFile& setup,
                             double D) {
  if (name == "greedy") return man_greedy_strategy(directions);
  if (name == "random") return man_random_strategy(directions);
  if (name == "stationary") return man_stationary_strategy();
  if (name == "scripted") return man_scripted_strategy(setup.script);
  if (name == "directional") {
    if (!setup.curve) throw UsageError{"directional strategy needs a 'curve' in the config"};
    return man_directional_strategy(*setup.curve, D);
  }
  throw UsageError{"unknown man strategy '" + name +
                   "' (greedy, random, stationary, directional, scripted)"};
}

bool is_stochastic(const std::string& name) { return name == "random"; }

GameConfig game_config(const io::SetupFile& setup, const std::optional<double>& D,
                       const std::optional<int>& N, const std::optional<double>& tol) {
  GameConfig c;
  c.space = setup.space;
  c.domain = setup.domain;
  c.D = D.value_or(setup.D.value_or(1.0));
  c.N = N.value_or(setup.N.value_or(100));
  c.tol = tol.value_or(setup.tol.value_or(1e-9));
  return c;
}

int simulate(const SimulateArgs& a, std::ostream& out) {
  const io::SetupFile setup = io::setup_from_json(io::read_json_file(a.config));
  GameConfig c = game_config(setup, a.D, a.N, a.tol);
  const std::string name = a.man.value_or(setup.strategy.value_or("greedy"));
  if (is_stochastic(name) && !a.seed) {
    throw UsageError{"--seed is required for the stochastic strategy '" + name + "'"};
  }
  c.seed = a.seed;
  c.continue_after_capture = a.continue_after_capture;
  if (setup.lion) {
    c.lion = *setup.lion;
  } else if (name == "directional" && setup.curve) {
    c.lion = setup.curve->at(0.0);
  } else {
    throw UsageError{"config needs a 'lion' start point"};
  }
  if (setup.man) {
    c.man = *setup.man;
  } else if (name == "directional" && setup.curve) {
    c.man = directional_start(*setup.curve, c.D);
  } else {
    throw UsageError{"config needs a 'man' start point"};
  }
  ManStrategyPtr man = make_strategy(name, a.directions.value_or(setup.directions.value_or(16)),
                                     setup, c.D);
  const Transcript t = run_game(c, *man);
  if (a.out) io::write_text_file(*a.out, io::dump(io::transcript_to_json(t)));
  if (a.csv) io::write_text_file(*a.csv, io::gap_csv(t));
  const Outcome o = classify_outcome(t, c.D, c.tol);
  out << "outcome=" << to_string(o.kind) << " n0=" << opt_num(o.n0) << " steps=" << t.steps.size()
      << " stop=" << to_string(t.stop) << " clamps=" << t.clamp_count
      << " final_gap=" << num(t.steps.back().gap) << "\n";
  return kExitOk;
}

int analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  const Transcript t = io::transcript_from_json(io::read_json_file(a.transcript));
  const Space& space = t.config.space;
  const double D = t.config.D;
  bool ok = true;
  io::Json report;

  const Outcome o = classify_outcome(t, D, t.config.tol);
  report["outcome"] = {{"kind", to_string(o.kind)},
                       {"n0", o.n0 ? io::Json(*o.n0) : io::Json(nullptr)},
                       {"tail_min_excess", o.tail_min_excess},
                       {"tail_max_excess", o.tail_max_excess},
                       {"final_excess", o.final_excess}};
  out << "outcome=" << to_string(o.kind) << " n0=" << opt_num(o.n0) << " steps=" << t.steps.size()
      << "\n";

  if (t.steps.size() >= 2) {
    const BetaSequence seq = beta_angles(space, t);
    report["beta"] = {{"count", seq.entries.size()},
                      {"gaps", seq.gaps},
                      {"tail_min", seq.tail_min},
                      {"tail_mean", seq.tail_mean},
                      {"worst_angle_deficit", seq.entries.empty() ? 0.0 : seq.worst_angle_deficit}};
    out << "beta count=" << seq.entries.size() << " gaps=" << seq.gaps.size()
        << " tail_min=" << num(seq.tail_min) << " tail_mean=" << num(seq.tail_mean) << "\n";
    if (a.beta_csv) io::write_text_file(*a.beta_csv, io::beta_csv(seq));
  }

  if (a.k) {
    try {
      const ManWinsCurve mc = curve_from_transcript(space, t, *a.k, D);
      const QGReport qg = verify_mans_win_curve(mc.curve, *a.k, a.grid);
      report["curve"] = {{"n_k", mc.n_k},
                         {"threshold", mc.threshold},
                         {"pass", qg.pass},
                         {"worst_lower_ratio", qg.worst_lower_ratio},
                         {"pairs", qg.pairs_tested}};
      out << "curve n_k=" << mc.n_k << " threshold=" << num(mc.threshold) << " certificate="
          << (qg.pass ? "PASS" : "FAIL") << " worst_lower_ratio=" << num(qg.worst_lower_ratio)
          << "\n";
      ok = ok && qg.pass;
    } catch (const GeoError& e) {
      if (e.code() != ErrorCode::threshold_not_met) throw;
      report["curve"] = {{"error", e.what()}, {"pass", false}};
      err << "threshold-not-met: " << e.what() << "\n";
      out << "curve certificate=FAIL threshold-not-met\n";
      ok = false;
    }
  }

  if (space.kind() == SpaceKind::rtree) {
    const CaptureAudit audit = rtree_capture_audit(space, t, D, a.audit_tol);
    report["audit"] = {{"pass", audit.pass},
                       {"audited", audit.audited},
                       {"capture_step", audit.capture_step ? io::Json(*audit.capture_step) : io::Json(nullptr)},
                       {"first_failure", audit.first_failure ? io::Json(*audit.first_failure) : io::Json(nullptr)},
                       {"final_distance", audit.final_distance}};
    out << "audit " << (audit.pass ? "PASS" : "FAIL") << " audited=" << audit.audited
        << " capture_step=" << opt_num(audit.capture_step)
        << " first_failure=" << opt_num(audit.first_failure)
        << " final_distance=" << num(audit.final_distance) << "\n";
    if (a.audit_csv) io::write_text_file(*a.audit_csv, io::audit_csv(audit));
    ok = ok && audit.pass;
  }
  if (a.report) io::write_text_file(*a.report, io::dump(report));
  return ok ? kExitOk : kExitCertificateFailed;
}

void print_qg(std::ostream& out, const std::string& label, const QGReport& r) {
  out << (r.pass ? "PASS " : "FAIL ") << label << " lambda=" << num(r.lambda)
      << " epsilon=" << num(r.epsilon) << " grid=" << r.grid << " pairs=" << r.pairs_tested
      << " worst_lower_ratio=" << num(r.worst_lower_ratio)
      << " worst_upper_excess=" << num(r.worst_upper_excess) << "\n";
  if (r.first_violation) {
    const Violation& v = *r.first_violation;
    out << "  first_violation s=" << num(v.pair.s) << " t=" << num(v.pair.t)
        << " distance=" << num(v.distance) << " bound=" << v.bound << "\n";
  }
}

int verify_curve(const VerifyArgs& a, std::ostream& out) {
  const Curve curve = io::curve_from_json(io::read_json_file(a.curve));
  const QGReport r = check_quasi_geodesic(curve, a.lambda, a.epsilon, a.grid, a.k);
  print_qg(out, "verify-curve", r);
  if (a.witness_csv) io::write_text_file(*a.witness_csv, io::violation_csv(r));
  return r.pass ? kExitOk : kExitCertificateFailed;
}

int extract_ray(const ExtractArgs& a, std::ostream& out) {
  RayApprox ray;
  if (a.curve) {
    const Curve curve = io::curve_from_json(io::read_json_file(*a.curve));
    ray = extract_ray_from_quasi_geodesic(curve.space(), curve, a.lambda, a.alpha, a.k_max,
                                          a.delta_star);
  } else {
    const io::Json j = io::read_json_file(*a.points);
    if (!j.contains("space") || !j.contains("points") || !j["points"].is_array()) {
      fail(ErrorCode::parse_error, "points file needs 'space' and a 'points' array");
    }
    const Space space = io::space_from_json(j["space"]);
    std::vector<Point> pts;
    for (const auto& p : j["points"]) pts.push_back(io::point_from_json(p, space));
    ray = extract_ray_from_directional_sequence(space, pts, a.b, a.k_max);
  }
  double worst_col = 0.0;
  for (double c : ray.colinearity) worst_col = std::max(worst_col, c);
  out << "PASS extract-ray k_max=" << a.k_max << " points=" << ray.points.size()
      << " max_colinearity=" << num(worst_col) << "\n";
  for (const RayPoint& p : ray.points) {
    out << "  k=" << p.k << " stop=" << p.stop << " iterations=" << p.residuals.size()
        << " point=" << to_string(p.point) << "\n";
  }
  if (a.csv) io::write_text_file(*a.csv, io::ray_csv(ray));
  return kExitOk;
}

int estimate(const DeltaArgs& a, std::ostream& out) {
  if (!a.seed) throw UsageError{"--seed is required"};
  const io::SetupFile setup = io::setup_from_json(io::read_json_file(a.config));
  const double delta = estimate_delta(setup.space, PointSampler(*a.seed, a.scale), a.trials, a.grid);
  out << "space=" << to_string(setup.space.kind()) << " trials=" << a.trials << " seed=" << *a.seed
      << " delta=" << num(delta) << "\n";
  return kExitOk;
}

int demo_l2(const DemoArgs& a, std::ostream& out) {
  const Curve curve = l2_example_curve(a.N, a.base);
  const QGReport main = check_quasi_geodesic(curve, std::sqrt(11.0 / 3.0), 0.0, a.grid);
  print_qg(out, "demo-l2", main);
  const QGReport unit = check_quasi_geodesic(curve, 1.0, 0.0, a.grid);
  print_qg(out, "demo-l2 (lambda = 1 is expected to fail)", unit);
  if (a.witness_csv) io::write_text_file(*a.witness_csv, io::violation_csv(unit));
  return main.pass && !unit.pass ? kExitOk : kExitCertificateFailed;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    const size_t comma = s.find(',', start);
    const std::string part = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!part.empty()) out.push_back(part);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

int sweep(const SweepArgs& a, std::ostream& out) {
  if (!a.seed) throw UsageError{"--seed is required"};
  const io::SetupFile setup = io::setup_from_json(io::read_json_file(a.config));
  const std::vector<std::string> men = split(a.men);
  if (men.empty()) throw UsageError{"--men lists no strategies"};
  const int directions = a.directions.value_or(setup.directions.value_or(16));
  for (const std::string& m : men) {
    if (m == "directional" || m == "scripted") {
      throw UsageError{"sweep draws random starts; strategy '" + m + "' is not supported"};
    }
    make_strategy(m, directions, setup, 1.0);
  }

  std::mt19937_64 rng(*a.seed);
  std::vector<SweepJob> jobs;
  for (int r = 0; r < a.runs; ++r) {
    GameConfig c = game_config(setup, a.D, a.N, a.tol);
    c.lion = random_domain_point(c.space, c.domain, rng);
    c.man = random_domain_point(c.space, c.domain, rng);
    c.seed = *a.seed + static_cast<std::uint64_t>(r);
    for (const std::string& m : men) {
      jobs.push_back({c, [m, directions, &setup] { return make_strategy(m, directions, setup, 1.0); }});
    }
  }
  const auto results = run_sweep(jobs, a.threads);
  std::string csv = "run,strategy,outcome,n0,steps,final_gap,clamps,error\n";
  int faults = 0;
  std::map<std::string, int> tally;
  for (size_t i = 0; i < jobs.size(); ++i) {
    const std::string strategy = men[i % men.size()];
    const std::string run = std::to_string(i / men.size());
    if (!results[i].transcript) {
      ++faults;
      ++tally["error"];
      csv += run + "," + strategy + ",error,,,,,\"" + results[i].error + "\"\n";
      continue;
    }
    const Transcript& t = *results[i].transcript;
    const Outcome o = classify_outcome(t, t.config.D, t.config.tol);
    ++tally[to_string(o.kind)];
    csv += run + "," + strategy + "," + to_string(o.kind) + "," + (o.n0 ? std::to_string(*o.n0) : "") +
           "," + std::to_string(t.steps.size()) + "," + num(t.steps.back().gap) + "," +
           std::to_string(t.clamp_count) + ",\n";
  }
  if (a.csv) io::write_text_file(*a.csv, csv);
  out << "sweep runs=" << jobs.size();
  for (const auto& [kind, count] : tally) out << " " << kind << "=" << count;
  out << "\n";
  return faults == 0 ? kExitOk : kExitStrategyFault;
}

int exit_code_for(const GeoError& e) {
  switch (e.code()) {
    case ErrorCode::strategy_fault: return kExitStrategyFault;
    case ErrorCode::threshold_not_met:
    case ErrorCode::insufficient_data:
    case ErrorCode::insufficient_curve: return kExitCertificateFailed;
    default: return kExitUsage;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Metric-geometry laboratory: hyperbolicity diagnostics, quasi-geodesics and the "
               "Lion-Man game",
               "geolab"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Run one game and write its transcript");
  s->add_option("--space", sim.config, "Config file: space, domain, start points")
      ->required()
      ->check(CLI::ExistingFile);
  s->add_option("--man", sim.man, "greedy | random | stationary | directional | scripted");
  s->add_option("--D", sim.D, "Step size");
  s->add_option("--N", sim.N, "Step budget");
  s->add_option("--tol", sim.tol, "Capture tolerance");
  s->add_option("--directions", sim.directions, "Candidate directions for greedy and random men");
  s->add_option("--seed", sim.seed, "Seed (required for random men)");
  s->add_flag("--continue-after-capture", sim.continue_after_capture, "Keep playing after capture");
  s->add_option("--out", sim.out, "Transcript file (JSON)");
  s->add_option("--csv", sim.csv, "Series n, D_n (CSV)");

  AnalyzeArgs an;
  auto* a = app.add_subcommand("analyze", "Angle sequence, man-wins certificate, capture audit");
  a->add_option("--transcript", an.transcript, "Transcript file")->required()->check(CLI::ExistingFile);
  a->add_option("--k", an.k, "Locality k of the man-wins certificate");
  a->add_option("--grid", an.grid, "Grid size of the certificate check");
  a->add_option("--audit-tol", an.audit_tol, "Tolerance of the tree capture audit");
  a->add_option("--report", an.report, "Report file (JSON)");
  a->add_option("--beta-csv", an.beta_csv, "Series n, beta_n, alpha_n (CSV)");
  a->add_option("--audit-csv", an.audit_csv, "Audit residuals (CSV)");

  VerifyArgs vc;
  auto* v = app.add_subcommand("verify-curve", "Quasi-geodesic check of a curve file");
  v->add_option("--curve", vc.curve, "Curve file")->required()->check(CLI::ExistingFile);
  v->add_option("--lambda", vc.lambda, "Multiplicative constant")->required();
  v->add_option("--epsilon", vc.epsilon, "Additive constant");
  v->add_option("--grid", vc.grid, "Uniform grid size");
  v->add_option("--k", vc.k, "Only pairs with |s - t| <= k");
  v->add_option("--witness-csv", vc.witness_csv, "Witness pairs (CSV)");

  ExtractArgs ex;
  auto* e = app.add_subcommand("extract-ray", "Geodesic-ray extraction");
  auto* ec = e->add_option("--curve", ex.curve, "Quasi-geodesic curve file")->check(CLI::ExistingFile);
  auto* ep = e->add_option("--points", ex.points, "Directional sequence file")->check(CLI::ExistingFile);
  ec->excludes(ep);
  e->add_option("--lambda", ex.lambda, "Quasi-geodesic constant of the curve");
  e->add_option("--alpha", ex.alpha, "Geometric sampling ratio");
  e->add_option("--delta-star", ex.delta_star, "Stability constant for the residual bounds");
  e->add_option("--b", ex.b, "Directional slack of the sequence");
  e->add_option("--k-max", ex.k_max, "Largest extracted distance");
  e->add_option("--csv", ex.csv, "Extracted points (CSV)");

  DeltaArgs de;
  auto* d = app.add_subcommand("estimate-delta", "Empirical slim-triangle constant");
  d->add_option("--space", de.config, "Config file")->required()->check(CLI::ExistingFile);
  d->add_option("--trials", de.trials, "Random triangles");
  d->add_option("--seed", de.seed, "Seed")->required();
  d->add_option("--scale", de.scale, "Sampling scale");
  d->add_option("--grid", de.grid, "Samples per side");

  DemoArgs dm;
  auto* l = app.add_subcommand("demo-l2", "Quasi-geodesic check of the l2 example curve");
  l->add_option("--N", dm.N, "Dimension");
  l->add_option("--base", dm.base, "Base of the breakpoints");
  l->add_option("--grid", dm.grid, "Uniform grid size");
  l->add_option("--witness-csv", dm.witness_csv, "Witness pairs of the lambda = 1 check (CSV)");

  SweepArgs sw;
  auto* w = app.add_subcommand("sweep", "Parallel games from random starts");
  w->add_option("--space", sw.config, "Config file")->required()->check(CLI::ExistingFile);
  w->add_option("--runs", sw.runs, "Random start pairs");
  w->add_option("--men", sw.men, "Comma-separated strategies");
  w->add_option("--D", sw.D, "Step size");
  w->add_option("--N", sw.N, "Step budget");
  w->add_option("--tol", sw.tol, "Capture tolerance");
  w->add_option("--directions", sw.directions, "Candidate directions");
  w->add_option("--seed", sw.seed, "Seed")->required();
  w->add_option("--threads", sw.threads, "Worker threads (0 = hardware)");
  w->add_option("--csv", sw.csv, "Outcome table (CSV)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (s->parsed()) return simulate(sim, out);
    if (a->parsed()) return analyze(an, out, err);
    if (v->parsed()) return verify_curve(vc, out);
    if (e->parsed()) {
      if (!ex.curve && !ex.points) throw UsageError{"extract-ray needs --curve or --points"};
      return extract_ray(ex, out);
    }
    if (d->parsed()) return estimate(de, out);
    if (l->parsed()) return demo_l2(dm, out);
    if (w->parsed()) return sweep(sw, out);
  } catch (const UsageError& u) {
    err << "usage error: " << u.message << "\n";
    return kExitUsage;
  } catch (const GeoError& g) {
    err << to_string(g.code()) << ": " << g.what() << "\n";
    return exit_code_for(g);
  }
  return kExitUsage;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"geolab"};
  for (const std::string& s : args) argv.push_back(s.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace geolab
