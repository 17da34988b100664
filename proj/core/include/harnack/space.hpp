#ifndef HARNACK_SPACE_HPP
#define HARNACK_SPACE_HPP

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace harnack {

/// Open metric ball {y : d(center, y) < radius} of a Space, together with
/// its measure. Members are sorted vertex indices.
struct Ball {
  int center = -1;
  double radius = 0.0;
  std::vector<int> members;
  double measure = 0.0;

  bool contains(int v) const;
};

/// Finite metric measure space: a connected weighted graph with positive
/// edge lengths (shortest-path metric) and a positive vertex measure.
/// Immutable after construction; distance queries are cached per center
/// behind a mutex so concurrent reads stay safe.
class Space {
 public:
  struct Edge {
    int a = 0;
    int b = 0;
    double length = 1.0;
  };

  struct Half {  // adjacency entry: edge (v -> to) with its edge index
    int to;
    double length;
    int edge;
  };

  Space(int vertex_count, std::vector<Edge> edges, std::vector<double> measure,
        std::vector<std::array<double, 2>> positions = {});

  static Space path(int n);
  static Space grid2d(int n, bool periodic);

  int vertex_count() const { return static_cast<int>(measure_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Half>& adjacency(int v) const { return adj_[v]; }

  double measure(int v) const { return measure_[v]; }
  double total_measure() const { return total_measure_; }

  bool has_positions() const { return !positions_.empty(); }
  const std::array<double, 2>& position(int v) const { return positions_[v]; }

  /// Shortest-path distances from `center` to every vertex (Dijkstra),
  /// cached per center.
  std::shared_ptr<const std::vector<double>> distances_from(int center) const;
  /// Same, without populating the cache (for full-vertex sweeps).
  std::vector<double> distances_nocache(int center) const;
  double distance(int a, int b) const;

  Ball ball(int center, double radius) const;

  /// Largest usable radius R0 = diameter / 2. Lazily computed and cached.
  double max_radius() const;
  double diameter() const;

  /// True when the ball is a proper subset of the vertex set.
  bool is_proper(const Ball& b) const;

  /// Vertex nearest the coordinate centroid (grid center); falls back to
  /// the eccentricity-minimizing vertex for position-free spaces.
  int central_vertex() const;

 private:
  std::vector<double> dijkstra(int center) const;

  std::vector<Edge> edges_;
  std::vector<double> measure_;
  std::vector<std::array<double, 2>> positions_;
  std::vector<std::vector<Half>> adj_;
  double total_measure_ = 0.0;

  mutable std::mutex cache_mutex_;
  mutable std::map<int, std::shared_ptr<const std::vector<double>>> dist_cache_;
  mutable double diameter_ = -1.0;
};

/// One stored doubling certificate: at center x, radius pair r <= R with
/// the measured ball masses. Re-validation checks
///   c0(x) * (r/R)^nu_hat * m(B(x,R)) <= m(B(x,r))
/// with exactly these stored numbers.
struct DoublingCertificate {
  int center;
  double r;
  double R;
  double measure_r;
  double measure_R;
};

/// Estimated homogeneous-dimension data: a single exponent nu_hat (upper
/// envelope over sampled centers and radius pairs) and a per-vertex local
/// constant c0(x) in (0, 1].
struct DoublingEstimate {
  double nu_hat = 0.0;
  std::vector<double> c0_field;  // per vertex
  double r_min = 0.0;
  double r_max = 0.0;
  std::vector<DoublingCertificate> certificates;

  /// Exact re-check of every stored certificate (tolerance zero).
  bool revalidate() const;
};

/// Structured description of a space, mirrored by the text config.
struct SpaceDescriptor {
  std::string type;  // "grid2d" | "path" | "edges"
  int n = 0;
  bool periodic = false;
  int vertex_count = 0;                     // type == "edges"
  std::vector<Space::Edge> edges;           // type == "edges"
  std::vector<double> measure;              // optional, defaults to 1
  std::vector<std::array<double, 2>> positions;
};

Space build_space(const SpaceDescriptor& descriptor);

/// Fit nu_hat as the max over sampled centers and radius pairs r < R of
/// log(m(B_R)/m(B_r)) / log(R/r); then evaluate c0 on every vertex as the
/// min over pairs r <= R of m(B_r) / (m(B_R) (r/R)^nu_hat), nudged down a
/// few ulps if needed so every stored certificate re-validates exactly.
DoublingEstimate estimate_doubling(const Space& space,
                                   const std::vector<int>& sample_centers,
                                   const std::vector<double>& radii);

}  // namespace harnack

#endif
