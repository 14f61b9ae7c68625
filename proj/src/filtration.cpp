#include "pdperm/filtration.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>

#include <json.hpp>

#include "pdperm/diagram.hpp"
#include "pdperm/errors.hpp"
#include "simplex_key.hpp"

namespace pdperm {

Filtration::Filtration(std::vector<Simplex> simplices, std::vector<double> values) {
  if (simplices.size() != values.size()) {
    throw ValidationError("filtration needs one value per simplex");
  }
  for (std::size_t i = 0; i < simplices.size(); ++i) {
    const auto& v = simplices[i].vertices;
    if (v.empty()) throw ValidationError("filtration contains an empty simplex");
    if (!std::is_sorted(v.begin(), v.end()) ||
        std::adjacent_find(v.begin(), v.end()) != v.end()) {
      throw ValidationError("simplex vertices must be strictly increasing");
    }
    if (!std::isfinite(values[i])) throw ValidationError("filtration values must be finite");
  }

  std::vector<std::size_t> order(simplices.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] < values[b];
    const int da = simplices[a].dimension();
    const int db = simplices[b].dimension();
    if (da != db) return da < db;
    return simplices[a].vertices < simplices[b].vertices;
  });

  simplices_.reserve(order.size());
  values_.reserve(order.size());
  for (std::size_t idx : order) {
    simplices_.push_back(std::move(simplices[idx]));
    values_.push_back(values[idx]);
  }
}

int Filtration::max_dimension() const {
  int m = -1;
  for (const auto& s : simplices_) m = std::max(m, s.dimension());
  return m;
}

std::size_t Filtration::count_of_dimension(int dim) const {
  return static_cast<std::size_t>(std::count_if(
      simplices_.begin(), simplices_.end(), [dim](const Simplex& s) { return s.dimension() == dim; }));
}

void Filtration::validate() const {
  detail::SimplexIndex index(simplices_);
  std::vector<VertexId> face;
  for (std::size_t i = 0; i < simplices_.size(); ++i) {
    const auto& v = simplices_[i].vertices;
    if (v.size() < 2) continue;
    for (std::size_t drop = 0; drop < v.size(); ++drop) {
      face.clear();
      for (std::size_t k = 0; k < v.size(); ++k)
        if (k != drop) face.push_back(v[k]);
      const auto pos = index.find(face);
      if (!pos) throw ValidationError("filtration is not closed under taking faces");
      if (values_[*pos] > values_[i]) {
        throw ValidationError("filtration is not monotone: a face has value " +
                              format_double(values_[*pos]) + " above its coface value " +
                              format_double(values_[i]));
      }
    }
  }
}

void Graph::validate_and_normalize() {
  if (node_count == 0) throw ValidationError("graph must have at least one node");
  std::set<std::pair<VertexId, VertexId>> unique;
  for (auto [a, b] : edges) {
    if (a >= node_count || b >= node_count) {
      throw ValidationError("graph edge endpoint out of range");
    }
    if (a == b) throw ValidationError("graph contains a self-loop");
    unique.emplace(std::min(a, b), std::max(a, b));
  }
  edges.assign(unique.begin(), unique.end());
  if (node_values && node_values->size() != node_count) {
    throw ValidationError("graph needs exactly one value per node");
  }
}

double enclosing_radius(const PointCloud& points) {
  double best = kInfinity;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double far = 0.0;
    for (std::size_t j = 0; j < points.size(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < points[i].size(); ++k) {
        const double diff = points[i][k] - points[j][k];
        s += diff * diff;
      }
      far = std::max(far, std::sqrt(s));
    }
    best = std::min(best, far);
  }
  return points.empty() ? 0.0 : best;
}

Filtration build_rips(const PointCloud& points, const RipsOptions& options) {
  if (points.empty()) throw ValidationError("Rips filtration needs at least one point");
  if (options.max_dim < 0 || options.max_dim > 3) {
    throw ValidationError("Rips max_dim must be in [0, 3]");
  }
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw ValidationError("all points must have the same dimension");
    for (double x : p)
      if (!std::isfinite(x)) throw ValidationError("point coordinates must be finite");
  }

  double threshold = kInfinity;
  if (options.threshold) {
    threshold = *options.threshold;
    if (!(threshold > 0.0)) throw ValidationError("Rips threshold must be positive");
  } else {
    const double r = enclosing_radius(points);
    if (r > 0.0) threshold = r;
  }

  const std::size_t n = points.size();
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double diff = points[i][k] - points[j][k];
        s += diff * diff;
      }
      dist[i * n + j] = dist[j * n + i] = std::sqrt(s);
    }
  }

  // Higher-index neighbours within the threshold; cliques are grown in increasing order.
  std::vector<std::vector<VertexId>> up(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (dist[i * n + j] <= threshold) up[i].push_back(static_cast<VertexId>(j));

  std::vector<Simplex> simplices;
  std::vector<double> values;
  auto emit = [&](std::vector<VertexId> verts, double value) {
    if (simplices.size() >= options.simplex_cap) {
      throw ResourceError("Rips filtration exceeds the simplex cap of " +
                          std::to_string(options.simplex_cap) + " simplices");
    }
    simplices.push_back(Simplex{std::move(verts)});
    values.push_back(value);
  };

  std::vector<VertexId> clique;
  auto extend = [&](auto&& self, std::vector<VertexId> candidates, double diameter) -> void {
    emit(clique, diameter);
    if (static_cast<int>(clique.size()) > options.max_dim) return;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const VertexId v = candidates[c];
      double diam = diameter;
      for (VertexId u : clique) diam = std::max(diam, dist[u * n + v]);
      std::vector<VertexId> next;
      for (std::size_t c2 = c + 1; c2 < candidates.size(); ++c2) {
        if (dist[v * n + candidates[c2]] <= threshold) next.push_back(candidates[c2]);
      }
      clique.push_back(v);
      self(self, std::move(next), diam);
      clique.pop_back();
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    clique.assign(1, static_cast<VertexId>(i));
    extend(extend, up[i], 0.0);
  }
  return Filtration(std::move(simplices), std::move(values));
}

Filtration build_lower_star(const Graph& input, bool fill_triangles) {
  Graph graph = input;
  graph.validate_and_normalize();
  if (!graph.node_values) throw ValidationError("lower-star filtration needs node values");
  const auto& f = *graph.node_values;
  for (double x : f)
    if (!std::isfinite(x)) throw ValidationError("node values must be finite");

  std::vector<Simplex> simplices;
  std::vector<double> values;
  for (std::size_t v = 0; v < graph.node_count; ++v) {
    simplices.push_back(Simplex{{static_cast<VertexId>(v)}});
    values.push_back(f[v]);
  }
  std::vector<std::vector<VertexId>> up(graph.node_count);
  for (auto [a, b] : graph.edges) {
    simplices.push_back(Simplex{{a, b}});
    values.push_back(std::max(f[a], f[b]));
    up[a].push_back(b);
  }
  if (fill_triangles) {
    for (auto& nb : up) std::sort(nb.begin(), nb.end());
    std::vector<VertexId> common;
    for (auto [a, b] : graph.edges) {
      common.clear();
      std::set_intersection(up[a].begin(), up[a].end(), up[b].begin(), up[b].end(),
                            std::back_inserter(common));
      for (VertexId c : common) {
        simplices.push_back(Simplex{{a, b, c}});
        values.push_back(std::max({f[a], f[b], f[c]}));
      }
    }
  }
  return Filtration(std::move(simplices), std::move(values));
}

PointCloud load_point_cloud(std::istream& in) {
  PointCloud cloud;
  std::string line;
  std::size_t line_no = 0;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> point;
    bool numeric = true;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      const auto a = cell.find_first_not_of(" \t\r");
      const auto b = cell.find_last_not_of(" \t\r");
      if (a == std::string::npos) {
        numeric = false;
        break;
      }
      const std::string_view token(cell.data() + a, b - a + 1);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        numeric = false;
        break;
      }
      point.push_back(value);
    }
    if (!numeric) {
      if (first_row) {
        first_row = false;
        continue;  // header
      }
      throw ParseError("line " + std::to_string(line_no) + ": non-numeric point coordinate");
    }
    first_row = false;
    if (!cloud.empty() && point.size() != cloud.front().size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(cloud.front().size()) + " columns");
    }
    cloud.push_back(std::move(point));
  }
  return cloud;
}

void write_point_cloud(std::ostream& out, const PointCloud& points) {
  for (const auto& p : points) {
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k) out << ',';
      out << format_double(p[k]);
    }
    out << '\n';
  }
}

Graph load_graph_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("graph JSON: ") + e.what());
  }
  Graph g;
  try {
    g.node_count = j.at("n").get<std::size_t>();
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("graph JSON: edges must be pairs");
      g.edges.emplace_back(e[0].get<VertexId>(), e[1].get<VertexId>());
    }
    if (j.contains("values")) g.node_values = j.at("values").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("graph JSON: ") + e.what());
  }
  g.validate_and_normalize();
  return g;
}

void write_graph_json(std::ostream& out, const Graph& graph) {
  nlohmann::json j;
  j["n"] = graph.node_count;
  j["edges"] = nlohmann::json::array();
  for (auto [a, b] : graph.edges) j["edges"].push_back({a, b});
  if (graph.node_values) j["values"] = *graph.node_values;
  out << j.dump() << '\n';
}

}  // namespace pdperm
