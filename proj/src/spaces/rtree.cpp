#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

#include "detail.hpp"

namespace geolab {

RTree::RTree(int vertex_count, std::vector<TreeEdge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  if (vertex_count_ < 1) fail(ErrorCode::invalid_input, "tree needs at least one vertex");
  incident_.assign(static_cast<size_t>(vertex_count_), {});
  int bounded = 0;
  for (size_t e = 0; e < edges_.size(); ++e) {
    const TreeEdge& edge = edges_[e];
    if (edge.from < 0 || edge.from >= vertex_count_ || edge.to >= vertex_count_) {
      fail(ErrorCode::invalid_input, "edge " + std::to_string(e) + " has an unknown endpoint");
    }
    if (edge.is_ray()) {
      if (ray_edge_) fail(ErrorCode::invalid_input, "at most one ray edge is allowed");
      ray_edge_ = static_cast<int>(e);
      edges_[e].length = std::numeric_limits<double>::infinity();
    } else {
      if (!(edge.length > 0.0) || !std::isfinite(edge.length)) {
        fail(ErrorCode::invalid_input, "edge " + std::to_string(e) + " needs a positive length");
      }
      if (edge.from == edge.to) fail(ErrorCode::invalid_input, "self-loop edge");
      incident_[static_cast<size_t>(edge.to)].push_back(static_cast<int>(e));
      ++bounded;
    }
    incident_[static_cast<size_t>(edge.from)].push_back(static_cast<int>(e));
  }
  if (bounded != vertex_count_ - 1) {
    fail(ErrorCode::invalid_input, "edge graph is not a tree (need vertex_count - 1 bounded edges)");
  }

  // Root at 0; BFS gives parents and levels, and fails on disconnection.
  parent_.assign(static_cast<size_t>(vertex_count_), -1);
  level_.assign(static_cast<size_t>(vertex_count_), -1);
  level_[0] = 0;
  std::queue<int> queue;
  queue.push(0);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int e : incident_[static_cast<size_t>(v)]) {
      if (edges_[static_cast<size_t>(e)].is_ray()) continue;
      const int w = other_end(e, v);
      if (level_[static_cast<size_t>(w)] >= 0) continue;
      level_[static_cast<size_t>(w)] = level_[static_cast<size_t>(v)] + 1;
      parent_[static_cast<size_t>(w)] = v;
      queue.push(w);
    }
  }
  if (std::any_of(level_.begin(), level_.end(), [](int l) { return l < 0; })) {
    fail(ErrorCode::invalid_input, "edge graph is not connected");
  }

  const auto n = static_cast<size_t>(vertex_count_);
  dist_.assign(n * n, 0.0);
  for (int source = 0; source < vertex_count_; ++source) {
    std::vector<bool> seen(n, false);
    std::vector<int> stack{source};
    seen[static_cast<size_t>(source)] = true;
    double* row = &dist_[static_cast<size_t>(source) * n];
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int e : incident_[static_cast<size_t>(v)]) {
        if (edges_[static_cast<size_t>(e)].is_ray()) continue;
        const int w = other_end(e, v);
        if (seen[static_cast<size_t>(w)]) continue;
        seen[static_cast<size_t>(w)] = true;
        row[w] = row[v] + edges_[static_cast<size_t>(e)].length;
        stack.push_back(w);
      }
    }
  }
}

std::vector<int> RTree::vertex_path(int u, int v) const {
  std::vector<int> front{u};
  std::vector<int> back{v};
  int a = u;
  int b = v;
  while (level_[static_cast<size_t>(a)] > level_[static_cast<size_t>(b)]) {
    a = parent_[static_cast<size_t>(a)];
    front.push_back(a);
  }
  while (level_[static_cast<size_t>(b)] > level_[static_cast<size_t>(a)]) {
    b = parent_[static_cast<size_t>(b)];
    back.push_back(b);
  }
  while (a != b) {
    a = parent_[static_cast<size_t>(a)];
    b = parent_[static_cast<size_t>(b)];
    front.push_back(a);
    back.push_back(b);
  }
  back.pop_back();  // the meeting vertex is already in `front`
  front.insert(front.end(), back.rbegin(), back.rend());
  return front;
}

int RTree::edge_between(int u, int v) const {
  for (int e : incident_[static_cast<size_t>(u)]) {
    const TreeEdge& edge = edges_[static_cast<size_t>(e)];
    if (!edge.is_ray() && other_end(e, u) == v) return e;
  }
  fail(ErrorCode::invalid_input, "vertices are not adjacent");
}

int RTree::other_end(int e, int v) const {
  const TreeEdge& edge = edges_[static_cast<size_t>(e)];
  return edge.from == v ? edge.to : edge.from;
}

RTree random_tree(std::uint64_t seed, int vertex_count, int max_length) {
  std::mt19937_64 rng(seed);
  std::vector<TreeEdge> edges;
  for (int v = 1; v < vertex_count; ++v) {
    std::uniform_int_distribution<int> parent(0, v - 1);
    std::uniform_int_distribution<int> length(1, max_length);
    const int p = parent(rng);
    edges.push_back({p, v, static_cast<double>(length(rng))});
  }
  return RTree(vertex_count, std::move(edges));
}

RTree tripod_tree() {
  return RTree(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
}

namespace detail::tree {

namespace {

struct Anchor {
  int vertex;
  double dist;
};

// Exits of a location: the vertex itself, or the edge endpoints with the
// distance needed to reach them.
int anchors(const RTree& t, const TreeLocation& loc, Anchor out[2]) {
  if (loc.on_vertex()) {
    out[0] = {loc.vertex, 0.0};
    return 1;
  }
  const TreeEdge& e = t.edge(loc.edge);
  out[0] = {e.from, loc.offset};
  if (e.is_ray()) return 1;
  out[1] = {e.to, e.length - loc.offset};
  return 2;
}

TreeLocation at_offset(const RTree& t, int edge, double offset) {
  return normalize(t, TreeLocation{-1, edge, offset});
}

// Location at distance s from vertex v along edge e.
TreeLocation along_from(const RTree& t, int e, int v, double s) {
  const TreeEdge& edge = t.edge(e);
  return at_offset(t, e, edge.from == v ? s : edge.length - s);
}

}  // namespace

TreeLocation normalize(const RTree& t, TreeLocation loc) {
  if (loc.on_vertex()) return TreeLocation{loc.vertex, -1, 0.0};
  const TreeEdge& e = t.edge(loc.edge);
  if (loc.offset == 0.0) return TreeLocation{e.from, -1, 0.0};
  if (!e.is_ray() && loc.offset == e.length) return TreeLocation{e.to, -1, 0.0};
  return loc;
}

void validate(const RTree& t, const TreeLocation& loc) {
  if (loc.on_vertex()) {
    if (loc.vertex >= t.vertex_count()) fail(ErrorCode::invalid_input, "unknown tree vertex");
    return;
  }
  if (loc.edge < 0 || loc.edge >= static_cast<int>(t.edges().size())) {
    fail(ErrorCode::invalid_input, "unknown tree edge");
  }
  const TreeEdge& e = t.edge(loc.edge);
  if (!(loc.offset >= 0.0) || !std::isfinite(loc.offset) || loc.offset > e.length) {
    fail(ErrorCode::invalid_input, "tree offset outside [0, edge length]");
  }
}

double distance(const RTree& t, const TreeLocation& a, const TreeLocation& b) {
  if (!a.on_vertex() && !b.on_vertex() && a.edge == b.edge) {
    return std::abs(a.offset - b.offset);
  }
  Anchor aa[2];
  Anchor bb[2];
  const int na = anchors(t, a, aa);
  const int nb = anchors(t, b, bb);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      best = std::min(best, aa[i].dist + t.vertex_distance(aa[i].vertex, bb[j].vertex) + bb[j].dist);
    }
  }
  return best;
}

TreeLocation toward(const RTree& t, const TreeLocation& a, const TreeLocation& b, double s) {
  const double d = distance(t, a, b);
  if (s <= 0.0 || d == 0.0) return normalize(t, a);
  if (s >= d) return normalize(t, b);
  if (!a.on_vertex() && !b.on_vertex() && a.edge == b.edge) {
    return at_offset(t, a.edge, b.offset > a.offset ? a.offset + s : a.offset - s);
  }

  Anchor aa[2];
  Anchor bb[2];
  const int na = anchors(t, a, aa);
  const int nb = anchors(t, b, bb);
  Anchor exit_a = aa[0];
  Anchor enter_b = bb[0];
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      const double len = aa[i].dist + t.vertex_distance(aa[i].vertex, bb[j].vertex) + bb[j].dist;
      if (len < best) {
        best = len;
        exit_a = aa[i];
        enter_b = bb[j];
      }
    }
  }

  if (!a.on_vertex() && exit_a.dist > 0.0) {
    if (s < exit_a.dist) {
      const bool to_from = exit_a.vertex == t.edge(a.edge).from;
      return at_offset(t, a.edge, to_from ? a.offset - s : a.offset + s);
    }
    s -= exit_a.dist;
  }
  const std::vector<int> path = t.vertex_path(exit_a.vertex, enter_b.vertex);
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    const int e = t.edge_between(path[i], path[i + 1]);
    const double len = t.edge(e).length;
    if (s < len) return along_from(t, e, path[i], s);
    s -= len;
  }
  if (b.on_vertex()) return normalize(t, b);
  return along_from(t, b.edge, enter_b.vertex, s);
}

std::vector<TreeLocation> walk_all(const RTree& t, const TreeLocation& from, double step,
                                   const std::function<bool(int)>& allowed) {
  std::vector<TreeLocation> out;
  // Walk along edge e starting at distance `pos` from vertex `start`, heading
  // away from `start`, with `remaining` length to go.
  std::function<void(int, int, double, double)> walk = [&](int e, int start, double pos,
                                                           double remaining) {
    const TreeEdge& edge = t.edge(e);
    const double left = edge.length - pos;
    if (remaining < left) {
      out.push_back(along_from(t, e, start, pos + remaining));
      return;
    }
    const int end = t.other_end(e, start);
    const double rest = remaining - left;
    bool branched = false;
    if (rest > 0.0) {
      for (int next : t.incident(end)) {
        if (next == e || !allowed(next)) continue;
        branched = true;
        walk(next, end, 0.0, rest);
      }
    }
    if (!branched) out.push_back(TreeLocation{end, -1, 0.0});
  };

  const TreeLocation start = normalize(t, from);
  if (start.on_vertex()) {
    for (int e : t.incident(start.vertex)) {
      if (allowed(e)) walk(e, start.vertex, 0.0, step);
    }
  } else {
    const TreeEdge& edge = t.edge(start.edge);
    if (!edge.is_ray()) walk(start.edge, edge.to, edge.length - start.offset, step);
    walk(start.edge, edge.from, start.offset, step);
  }
  return out;
}

bool location_on_edges(const RTree& t, const TreeLocation& loc, const std::vector<int>& edges) {
  const auto listed = [&](int e) { return std::find(edges.begin(), edges.end(), e) != edges.end(); };
  if (!loc.on_vertex()) return listed(loc.edge);
  return std::any_of(t.incident(loc.vertex).begin(), t.incident(loc.vertex).end(), listed);
}

}  // namespace detail::tree

}  // namespace geolab
