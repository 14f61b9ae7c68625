#include "pdperm/generators.hpp"

#include <cmath>
#include <numbers>

#include "pdperm/errors.hpp"
#include "pdperm/random.hpp"

namespace pdperm {

const char* to_string(Shape shape) {
  return shape == Shape::circle_ellipse ? "circle-ellipse" : "sphere-ellipsoid";
}

Shape parse_shape(const std::string& text) {
  if (text == "circle-ellipse" || text == "circle") return Shape::circle_ellipse;
  if (text == "sphere-ellipsoid" || text == "sphere") return Shape::sphere_ellipsoid;
  throw ValidationError("unknown shape '" + text + "'");
}

PointCloud sample_shape(const ShapeSpec& spec) {
  if (!(spec.r >= 0.0 && spec.r < 1.0)) throw ValidationError("shape compression r must be in [0, 1)");
  if (spec.n_points == 0) throw ValidationError("shape sample needs at least one point");
  if (!(spec.noise_sigma >= 0.0)) throw ValidationError("noise sigma must be nonnegative");

  Rng rng = make_rng(spec.seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double squash = 1.0 - spec.r;
  PointCloud cloud;
  cloud.reserve(spec.n_points);
  for (std::size_t i = 0; i < spec.n_points; ++i) {
    std::vector<double> p;
    if (spec.shape == Shape::circle_ellipse) {
      const double theta = angle(rng);
      p = {std::cos(theta), squash * std::sin(theta)};
    } else {
      double x = 0.0;
      double y = 0.0;
      double z = 0.0;
      double norm = 0.0;
      while (norm == 0.0) {
        x = standard_normal(rng);
        y = standard_normal(rng);
        z = standard_normal(rng);
        norm = std::sqrt(x * x + y * y + z * z);
      }
      p = {x / norm, y / norm, squash * z / norm};
    }
    cloud.push_back(std::move(p));
  }
  if (spec.noise_sigma > 0.0) {
    for (auto& p : cloud)
      for (double& c : p) c += spec.noise_sigma * standard_normal(rng);
  }
  return cloud;
}

PersistenceDiagram generate_pd_process(const PdProcessSpec& spec) {
  if (!(spec.alpha > 0.0) || !(spec.beta > 0.0)) {
    throw ValidationError("Beta parameters must be positive");
  }
  if (!(spec.noise_sigma >= 0.0)) throw ValidationError("noise sigma must be nonnegative");
  Rng rng = make_rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<DiagramPoint> points;
  points.reserve(spec.n_points);
  for (std::size_t i = 0; i < spec.n_points; ++i) {
    const double b = unit(rng);
    const double z = beta_draw(rng, spec.alpha, spec.beta);
    points.push_back({b, b + z});
  }
  PersistenceDiagram d(spec.hom_dim, std::move(points));
  if (spec.noise_sigma == 0.0) return d;
  return perturb_diagram(d, {spec.noise_sigma, spec.seed ^ 0x9e3779b97f4a7c15ULL});
}

double cross_entropy(std::span<const double> x) {
  double g = 0.0;
  for (double v : x)
    if (v > 0.0) g -= v * std::log(v);
  return g;
}

Graph generate_rdpg(const RdpgSpec& spec) {
  if (spec.n_nodes == 0) throw ValidationError("graph needs at least one node");
  for (double a : spec.dirichlet_alpha)
    if (!(a > 0.0)) throw ValidationError("Dirichlet parameters must be positive");
  if (!(spec.node_noise_sigma >= 0.0)) throw ValidationError("noise sigma must be nonnegative");

  Rng rng = make_rng(spec.seed);
  std::vector<std::array<double, 3>> x(spec.n_nodes);
  for (auto& node : x) {
    double total = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      std::gamma_distribution<double> gamma(spec.dirichlet_alpha[k], 1.0);
      node[k] = gamma(rng);
      total += node[k];
    }
    for (double& v : node) v /= total;
  }

  Graph g;
  g.node_count = spec.n_nodes;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < spec.n_nodes; ++i) {
    for (std::size_t j = i + 1; j < spec.n_nodes; ++j) {
      const double p = x[i][0] * x[j][0] + x[i][1] * x[j][1] + x[i][2] * x[j][2];
      if (unit(rng) < p) g.edges.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(j));
    }
  }
  std::vector<double> values(spec.n_nodes);
  for (std::size_t i = 0; i < spec.n_nodes; ++i) {
    values[i] = cross_entropy(x[i]);
    if (spec.node_noise_sigma > 0.0) values[i] += spec.node_noise_sigma * standard_normal(rng);
  }
  g.node_values = std::move(values);
  g.validate_and_normalize();
  return g;
}

}  // namespace pdperm
