#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "pdperm/diagram.hpp"
#include "pdperm/filtration.hpp"

namespace pdperm {

enum class Shape { circle_ellipse, sphere_ellipsoid };

const char* to_string(Shape shape);
Shape parse_shape(const std::string& text);

/// Unit circle or sphere compressed by (1 − r) along its last axis, plus Gaussian noise.
struct ShapeSpec {
  Shape shape = Shape::circle_ellipse;
  double r = 0.0;
  std::size_t n_points = 50;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Uniform-in-angle (circle) or normalized-Gaussian (sphere) samples, last coordinate scaled
/// by (1 − r), then N(0, sigma²) noise on every coordinate.
PointCloud sample_shape(const ShapeSpec& spec);

/// Diagram with b ~ Uniform(0, 1) and d = b + z, z ~ Beta(alpha, beta).
struct PdProcessSpec {
  std::size_t n_points = 50;
  double alpha = 1.0;
  double beta = 1.0;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  int hom_dim = 0;
};

PersistenceDiagram generate_pd_process(const PdProcessSpec& spec);

/// Random dot product graph on Dirichlet(alpha) latent positions. Node values are the
/// entropy −Σ x_i log x_i (0·log 0 = 0) plus optional Gaussian noise.
struct RdpgSpec {
  std::size_t n_nodes = 100;
  std::array<double, 3> dirichlet_alpha{1.5, 1.5, 1.5};
  double node_noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

Graph generate_rdpg(const RdpgSpec& spec);

/// −Σ x_i log x_i with 0·log 0 = 0.
double cross_entropy(std::span<const double> x);

}  // namespace pdperm
