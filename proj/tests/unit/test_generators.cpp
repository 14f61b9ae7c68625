#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "oracles.hpp"
#include "pdperm/errors.hpp"
#include "pdperm/generators.hpp"

using namespace pdperm;

TEST_CASE("circle samples lie on the ellipse") {
  for (double r : {0.0, 0.02, 0.08}) {
    const auto cloud = sample_shape({Shape::circle_ellipse, r, 500, 0.0, 3});
    CHECK(cloud.size() == 500);
    const double s = 1.0 - r;
    for (const auto& p : cloud) {
      REQUIRE(p.size() == 2);
      CHECK(std::abs(p[0] * p[0] + p[1] * p[1] / (s * s) - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("sphere samples lie on the ellipsoid") {
  for (double r : {0.0, 0.05}) {
    const auto cloud = sample_shape({Shape::sphere_ellipsoid, r, 500, 0.0, 4});
    const double s = 1.0 - r;
    for (const auto& p : cloud) {
      REQUIRE(p.size() == 3);
      CHECK(std::abs(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] / (s * s) - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("shape noise has the requested spread") {
  const ShapeSpec clean{Shape::circle_ellipse, 0.0, 10000, 0.0, 5};
  auto noisy_spec = clean;
  noisy_spec.noise_sigma = 0.05;
  const auto a = sample_shape(clean);
  const auto b = sample_shape(noisy_spec);
  for (std::size_t k = 0; k < 2; ++k) {
    double sum = 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = b[i][k] - a[i][k];
      sum += d;
      sq += d * d;
    }
    const double n = static_cast<double>(a.size());
    const double sd = std::sqrt((sq - sum * sum / n) / (n - 1));
    CHECK(sd >= 0.045);
    CHECK(sd <= 0.055);
  }
}

TEST_CASE("shape parameters are validated") {
  CHECK_THROWS_AS(sample_shape({Shape::circle_ellipse, 1.0, 10, 0.0, 0}), ValidationError);
  CHECK_THROWS_AS(sample_shape({Shape::circle_ellipse, 0.0, 0, 0.0, 0}), ValidationError);
  CHECK_THROWS_AS(sample_shape({Shape::circle_ellipse, 0.0, 10, -1.0, 0}), ValidationError);
  CHECK(parse_shape("circle") == Shape::circle_ellipse);
  CHECK(parse_shape("sphere-ellipsoid") == Shape::sphere_ellipsoid);
  CHECK_THROWS_AS(parse_shape("torus"), ValidationError);
}

TEST_CASE("pd-process diagrams") {
  const auto d = generate_pd_process({10000, 1.0, 1.0, 0.0, 6, 0});
  CHECK(d.size() == 10000);
  double total = 0.0;
  for (const auto& p : d.points()) {
    CHECK(p.death >= p.birth);
    CHECK(p.birth >= 0.0);
    CHECK(p.birth <= 1.0);
    total += p.persistence();
  }
  CHECK(total / 10000.0 >= 0.48);
  CHECK(total / 10000.0 <= 0.52);

  const auto skew = generate_pd_process({10000, 1.0, 1.8, 0.0, 7, 1});
  CHECK(skew.hom_dimension() == 1);
  double skew_total = 0.0;
  for (const auto& p : skew.points()) skew_total += p.persistence();
  CHECK(std::abs(skew_total / 10000.0 - 1.0 / 2.8) <= 0.02);

  const auto noisy = generate_pd_process({2000, 2.0, 3.0, 0.1, 8, 0});
  for (const auto& p : noisy.points()) CHECK(p.death >= p.birth);
  CHECK_THROWS_AS(generate_pd_process({10, 0.0, 1.0, 0.0, 0, 0}), ValidationError);
}

TEST_CASE("cross entropy") {
  const std::vector<double> uniform{1.0 / 3, 1.0 / 3, 1.0 / 3};
  CHECK(cross_entropy(uniform) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  const std::vector<double> vertex{1.0, 0.0, 0.0};
  CHECK(cross_entropy(vertex) == 0.0);
}

TEST_CASE("random dot product graphs") {
  const auto g = generate_rdpg({100, {1.5, 1.5, 1.5}, 0.0, 9});
  CHECK(g.node_count == 100);
  REQUIRE(g.node_values);
  for (double v : *g.node_values) {
    CHECK(v >= 0.0);
    CHECK(v <= std::log(3.0) + 1e-12);
  }
  for (auto [a, b] : g.edges) CHECK(a < b);

  const auto noisy = generate_rdpg({100, {1.5, 1.5, 1.5}, 0.1, 9});
  CHECK(noisy.edges == g.edges);
  CHECK(*noisy.node_values != *g.node_values);
  CHECK_THROWS_AS(generate_rdpg({10, {1.0, 0.0, 1.0}, 0.0, 0}), ValidationError);
}

TEST_CASE("rdpg edge density matches the Monte-Carlo dot product") {
  const std::array<double, 3> alpha{1.5, 1.5, 1.5};
  const double expected = oracle::monte_carlo_dot_product(alpha, 1000000, 10);
  CHECK(std::abs(expected - 1.0 / 3.0) < 0.005);
  double density = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto g = generate_rdpg({100, alpha, 0.0, s});
    density += static_cast<double>(g.edges.size()) / (100.0 * 99.0 / 2.0);
  }
  CHECK(std::abs(density / 100.0 - expected) <= 0.03);
}

TEST_CASE("generators are pure functions of the spec") {
  CHECK(sample_shape({Shape::sphere_ellipsoid, 0.1, 50, 0.05, 11}) ==
        sample_shape({Shape::sphere_ellipsoid, 0.1, 50, 0.05, 11}));
  CHECK(sample_shape({Shape::circle_ellipse, 0.1, 50, 0.05, 11}) !=
        sample_shape({Shape::circle_ellipse, 0.1, 50, 0.05, 12}));
  const auto a = generate_pd_process({50, 1.0, 1.4, 0.05, 12, 0});
  const auto b = generate_pd_process({50, 1.0, 1.4, 0.05, 12, 0});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.points()[i].birth == b.points()[i].birth);
    CHECK(a.points()[i].death == b.points()[i].death);
  }
  const auto g1 = generate_rdpg({60, {1.5, 1.5, 2.0}, 0.1, 13});
  const auto g2 = generate_rdpg({60, {1.5, 1.5, 2.0}, 0.1, 13});
  CHECK(g1.edges == g2.edges);
  CHECK(*g1.node_values == *g2.node_values);
}
