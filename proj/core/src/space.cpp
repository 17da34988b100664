#include "harnack/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace harnack {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool Ball::contains(int v) const {
  return std::binary_search(members.begin(), members.end(), v);
}

Space::Space(int vertex_count, std::vector<Edge> edges,
             std::vector<double> measure,
             std::vector<std::array<double, 2>> positions)
    : edges_(std::move(edges)),
      measure_(std::move(measure)),
      positions_(std::move(positions)) {
  if (vertex_count <= 0) throw std::invalid_argument("empty vertex set");
  if (static_cast<int>(measure_.size()) != vertex_count)
    measure_.resize(vertex_count, 1.0);
  for (double m : measure_)
    if (!(m > 0.0)) throw std::invalid_argument("nonpositive vertex measure");
  if (!positions_.empty() &&
      static_cast<int>(positions_.size()) != vertex_count)
    throw std::invalid_argument("positions size mismatch");

  adj_.resize(vertex_count);
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    const Edge& ed = edges_[e];
    if (ed.a < 0 || ed.a >= vertex_count || ed.b < 0 || ed.b >= vertex_count)
      throw std::invalid_argument("edge endpoint out of range");
    if (!(ed.length > 0.0))
      throw std::invalid_argument("nonpositive edge length");
    adj_[ed.a].push_back({ed.b, ed.length, e});
    adj_[ed.b].push_back({ed.a, ed.length, e});
  }
  for (double m : measure_) total_measure_ += m;

  // Connectivity ("supp m = X" and connectedness are both required).
  std::vector<char> seen(vertex_count, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (const Half& h : adj_[v])
      if (!seen[h.to]) {
        seen[h.to] = 1;
        ++reached;
        stack.push_back(h.to);
      }
  }
  if (reached != vertex_count)
    throw std::invalid_argument("space not connected");
}

Space Space::path(int n) {
  if (n < 1) throw std::invalid_argument("path needs n >= 1");
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  std::vector<std::array<double, 2>> pos(n);
  for (int i = 0; i < n; ++i) pos[i] = {static_cast<double>(i), 0.0};
  return Space(n, std::move(edges), std::vector<double>(n, 1.0),
               std::move(pos));
}

Space Space::grid2d(int n, bool periodic) {
  if (n < 2) throw std::invalid_argument("grid2d needs n >= 2");
  auto id = [n](int i, int j) { return i * n + j; };
  std::vector<Edge> edges;
  edges.reserve(2 * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i + 1 < n) edges.push_back({id(i, j), id(i + 1, j), 1.0});
      if (j + 1 < n) edges.push_back({id(i, j), id(i, j + 1), 1.0});
      if (periodic && i + 1 == n) edges.push_back({id(i, j), id(0, j), 1.0});
      if (periodic && j + 1 == n) edges.push_back({id(i, j), id(i, 0), 1.0});
    }
  // Coordinates span [-1, 1]^2; the graph metric stays unit-length.
  std::vector<std::array<double, 2>> pos(n * n);
  const double h = periodic ? 2.0 / n : 2.0 / (n - 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      pos[id(i, j)] = {-1.0 + h * i, -1.0 + h * j};
  return Space(n * n, std::move(edges), std::vector<double>(n * n, 1.0),
               std::move(pos));
}

std::vector<double> Space::dijkstra(int center) const {
  std::vector<double> dist(vertex_count(), kInf);
  dist[center] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  heap.push({0.0, center});
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (const Half& h : adj_[v]) {
      double nd = d + h.length;
      if (nd < dist[h.to]) {
        dist[h.to] = nd;
        heap.push({nd, h.to});
      }
    }
  }
  return dist;
}

std::shared_ptr<const std::vector<double>> Space::distances_from(
    int center) const {
  if (center < 0 || center >= vertex_count())
    throw std::invalid_argument("center out of range");
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = dist_cache_.find(center);
    if (it != dist_cache_.end()) return it->second;
  }
  auto dist = std::make_shared<const std::vector<double>>(dijkstra(center));
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto [it, inserted] = dist_cache_.emplace(center, dist);
  return it->second;
}

std::vector<double> Space::distances_nocache(int center) const {
  if (center < 0 || center >= vertex_count())
    throw std::invalid_argument("center out of range");
  return dijkstra(center);
}

double Space::distance(int a, int b) const { return (*distances_from(a))[b]; }

Ball Space::ball(int center, double radius) const {
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be > 0");
  auto dist = distances_from(center);
  Ball b;
  b.center = center;
  b.radius = radius;
  for (int v = 0; v < vertex_count(); ++v)
    if ((*dist)[v] < radius) {
      b.members.push_back(v);
      b.measure += measure_[v];
    }
  return b;
}

double Space::diameter() const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (diameter_ >= 0.0) return diameter_;
  }
  // One sweep over all centers; transient distance vectors (the per-center
  // cache would hold |X| vectors otherwise).
  double diam = 0.0;
  for (int v = 0; v < vertex_count(); ++v) {
    std::vector<double> dist = dijkstra(v);
    for (double d : dist) diam = std::max(diam, d);
  }
  std::lock_guard<std::mutex> lock(cache_mutex_);
  diameter_ = diam;
  return diam;
}

double Space::max_radius() const { return diameter() / 2.0; }

bool Space::is_proper(const Ball& b) const {
  return static_cast<int>(b.members.size()) < vertex_count();
}

int Space::central_vertex() const {
  if (has_positions()) {
    std::array<double, 2> c = {0.0, 0.0};
    for (const auto& p : positions_) {
      c[0] += p[0];
      c[1] += p[1];
    }
    c[0] /= vertex_count();
    c[1] /= vertex_count();
    int best = 0;
    double best_d = kInf;
    for (int v = 0; v < vertex_count(); ++v) {
      double dx = positions_[v][0] - c[0];
      double dy = positions_[v][1] - c[1];
      double d = dx * dx + dy * dy;
      if (d < best_d) {
        best_d = d;
        best = v;
      }
    }
    return best;
  }
  int best = 0;
  double best_ecc = kInf;
  for (int v = 0; v < vertex_count(); ++v) {
    std::vector<double> dist = dijkstra(v);
    double ecc = *std::max_element(dist.begin(), dist.end());
    if (ecc < best_ecc) {
      best_ecc = ecc;
      best = v;
    }
  }
  return best;
}

bool DoublingEstimate::revalidate() const {
  for (const DoublingCertificate& c : certificates) {
    double lhs = c0_field[c.center] * std::pow(c.r / c.R, nu_hat) * c.measure_R;
    if (!(lhs <= c.measure_r)) return false;
  }
  return true;
}

Space build_space(const SpaceDescriptor& d) {
  if (d.type == "path") return Space::path(d.n);
  if (d.type == "grid2d") return Space::grid2d(d.n, d.periodic);
  if (d.type == "edges") {
    std::vector<double> m = d.measure;
    if (m.empty()) m.assign(d.vertex_count, 1.0);
    return Space(d.vertex_count, d.edges, std::move(m), d.positions);
  }
  throw std::invalid_argument("unknown space descriptor type: " + d.type);
}

DoublingEstimate estimate_doubling(const Space& space,
                                   const std::vector<int>& sample_centers,
                                   const std::vector<double>& radii) {
  if (radii.size() < 2)
    throw std::invalid_argument("need at least two radii");
  if (!std::is_sorted(radii.begin(), radii.end()))
    throw std::invalid_argument("radii must be sorted ascending");
  const double r0 = space.max_radius();
  for (double r : radii)
    if (!(r > 0.0) || r > r0)
      throw std::invalid_argument("radius outside (0, R0]");
  if (sample_centers.empty())
    throw std::invalid_argument("need at least one sample center");

  const int nr = static_cast<int>(radii.size());
  auto ball_masses = [&](int x) {
    // One Dijkstra per vertex; counting all radii in a single pass.
    std::vector<double> masses(nr, 0.0);
    std::vector<double> dist = space.distances_nocache(x);
    for (int v = 0; v < space.vertex_count(); ++v)
      for (int k = 0; k < nr; ++k)
        if (dist[v] < radii[k]) masses[k] += space.measure(v);
    return masses;
  };

  DoublingEstimate est;
  est.r_min = radii.front();
  est.r_max = radii.back();

  // nu_hat: upper envelope over the sampled centers.
  double nu = 0.0;
  for (int x : sample_centers) {
    std::vector<double> masses = ball_masses(x);
    for (int i = 0; i < nr; ++i)
      for (int j = i + 1; j < nr; ++j) {
        double expnt =
            std::log(masses[j] / masses[i]) / std::log(radii[j] / radii[i]);
        nu = std::max(nu, expnt);
      }
  }
  est.nu_hat = nu;

  // c0(x) on every vertex, with stored certificates. The degenerate pair
  // r = R caps c0 at 1; strict pairs can push it below.
  est.c0_field.assign(space.vertex_count(), 1.0);
  for (int x = 0; x < space.vertex_count(); ++x) {
    std::vector<double> masses = ball_masses(x);
    double c0 = 1.0;
    for (int i = 0; i < nr; ++i)
      for (int j = i; j < nr; ++j) {
        double ratio =
            masses[i] / (masses[j] * std::pow(radii[i] / radii[j], nu));
        c0 = std::min(c0, ratio);
        est.certificates.push_back(
            {x, radii[i], radii[j], masses[i], masses[j]});
      }
    est.c0_field[x] = c0;
  }

  // Nudge each c0 down by ulps until its certificates re-check exactly
  // (float rounding can land one ulp above the stored quotient).
  for (const DoublingCertificate& c : est.certificates) {
    double& c0 = est.c0_field[c.center];
    while (!(c0 * std::pow(c.r / c.R, est.nu_hat) * c.measure_R <=
             c.measure_r)) {
      c0 = std::nextafter(c0, 0.0);
      if (c0 <= 0.0)
        throw std::runtime_error("doubling certificate cannot be satisfied");
    }
  }
  return est;
}

}  // namespace harnack
