#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace pdperm {

using VertexId = std::uint32_t;

/// A simplex given by its strictly increasing vertex list.
struct Simplex {
  std::vector<VertexId> vertices;

  int dimension() const { return static_cast<int>(vertices.size()) - 1; }

  friend bool operator==(const Simplex&, const Simplex&) = default;
  friend auto operator<=>(const Simplex&, const Simplex&) = default;
};

/// Simplices with filtration values, stored in canonical order:
/// (value, dimension, lexicographic vertices).
///
/// Construction only checks that every simplex is well formed and sorts. Monotonicity
/// (faces present with values no larger than their cofaces) is checked by validate(), which
/// compute_persistence calls before reducing.
class Filtration {
 public:
  Filtration() = default;
  Filtration(std::vector<Simplex> simplices, std::vector<double> values);

  std::size_t size() const { return simplices_.size(); }
  std::span<const Simplex> simplices() const { return simplices_; }
  std::span<const double> values() const { return values_; }
  int max_dimension() const;
  std::size_t count_of_dimension(int dim) const;

  /// Throws ValidationError if a face is missing or has a larger value than a coface.
  void validate() const;

 private:
  std::vector<Simplex> simplices_;
  std::vector<double> values_;
};

/// Undirected simple graph with optional per-node values.
struct Graph {
  std::size_t node_count = 0;
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::optional<std::vector<double>> node_values;

  /// Normalizes edges to (min, max), drops duplicates, and checks endpoints and self-loops.
  void validate_and_normalize();
};

using PointCloud = std::vector<std::vector<double>>;

inline constexpr std::size_t kDefaultSimplexCap = 2'000'000;

struct RipsOptions {
  int max_dim = 2;
  /// Scale cut-off; nullopt selects the enclosing radius of the cloud.
  std::optional<double> threshold;
  std::size_t simplex_cap = kDefaultSimplexCap;
};

/// min over points of the largest distance to any other point. Beyond this scale the Rips
/// complex is a cone, so classes below the top dimension have already died.
double enclosing_radius(const PointCloud& points);

/// Vietoris-Rips filtration: all simplices of dimension <= max_dim with diameter <= threshold,
/// valued by their diameter. Throws ValidationError for empty input or bad options and
/// ResourceError when the simplex count exceeds the cap.
Filtration build_rips(const PointCloud& points, const RipsOptions& options);

/// Lower-star filtration of a graph with node values; fills 3-cliques with triangles when
/// requested.
Filtration build_lower_star(const Graph& graph, bool fill_triangles);

/// Point-cloud CSV: one point per row, numeric columns, optional non-numeric header row.
PointCloud load_point_cloud(std::istream& in);
void write_point_cloud(std::ostream& out, const PointCloud& points);

/// Graph JSON: {"n": int, "edges": [[i, j], ...], "values": [f_1, ..., f_n]}.
Graph load_graph_json(std::istream& in);
void write_graph_json(std::ostream& out, const Graph& graph);

}  // namespace pdperm
