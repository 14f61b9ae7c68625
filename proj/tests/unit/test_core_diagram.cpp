#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "pdperm/diagram.hpp"
#include "pdperm/errors.hpp"

using namespace pdperm;

namespace {

std::vector<PersistenceDiagram> load(const std::string& text) {
  std::istringstream in(text);
  return load_diagrams(in);
}

}  // namespace

TEST_CASE("load single row") {
  const auto ds = load("dimension,birth,death\n1,0.0,1.0\n");
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].hom_dimension() == 1);
  REQUIRE(ds[0].size() == 1);
  CHECK(ds[0].points()[0] == DiagramPoint{0.0, 1.0});
}

TEST_CASE("load infinity literal") {
  const auto ds = load("dimension,birth,death\n0,0.0,inf\n");
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].infinite_count() == 1);
  CHECK(std::isinf(ds[0].points()[0].death));
}

TEST_CASE("birth above death is a validation error") {
  CHECK_THROWS_AS(load("dimension,birth,death\n0,2.0,1.0\n"), ValidationError);
}

TEST_CASE("non-finite birth is a validation error") {
  CHECK_THROWS_AS(load("dimension,birth,death\n0,inf,inf\n"), ValidationError);
}

TEST_CASE("malformed rows name the line") {
  try {
    load("dimension,birth,death\n0,0,1\n0,abc,1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(load("dimension,birth,death\n0,1\n"), ParseError);
  CHECK_THROWS_AS(load("dim,b,d\n0,0,1\n"), ParseError);
}

TEST_CASE("multiplicities and dimensions are preserved") {
  const auto ds = load("dimension,birth,death\n1,0,1\n0,0,2\n1,0,1\n");
  REQUIRE(ds.size() == 2);
  CHECK(ds[0].hom_dimension() == 0);
  CHECK(ds[1].size() == 2);
}

TEST_CASE("zero-persistence points are retained on load") {
  const auto ds = load("dimension,birth,death\n0,0.5,0.5\n");
  CHECK(ds[0].size() == 1);
}

TEST_CASE("round trip is bitwise") {
  std::mt19937_64 rng(7);
  std::vector<PersistenceDiagram> ds;
  for (int k = 0; k < 3; ++k) {
    auto d = oracle::random_diagram(rng, 30, 3.7, k);
    std::vector<DiagramPoint> pts(d.points().begin(), d.points().end());
    pts.push_back({0.1 * k, kInfinity});
    ds.emplace_back(k, pts);
  }
  std::ostringstream out;
  write_diagrams(out, ds);
  const auto back = load(out.str());
  REQUIRE(back.size() == ds.size());
  for (std::size_t k = 0; k < ds.size(); ++k) {
    REQUIRE(back[k].size() == ds[k].size());
    for (std::size_t i = 0; i < ds[k].size(); ++i) {
      CHECK(back[k].points()[i].birth == ds[k].points()[i].birth);
      CHECK(back[k].points()[i].death == ds[k].points()[i].death);
    }
  }
}

TEST_CASE("diagonal projection") {
  CHECK(diagonal_projection({0, 1}, Norm::l1) == 1.0);
  CHECK(diagonal_projection({0, 1}, Norm::linf) == 0.5);
  CHECK(diagonal_projection({0, 1}, Norm::l2) == doctest::Approx(1.0 / std::sqrt(2.0)));
  for (Norm p : {Norm::l1, Norm::l2, Norm::linf}) {
    CHECK(diagonal_projection({0.3, 0.3}, p) == 0.0);
  }
  CHECK_THROWS_AS(diagonal_projection({0, kInfinity}, Norm::l1), ValidationError);
}

TEST_CASE("diagonal projection is homogeneous") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double b = u(rng);
    const double d = b + u(rng);
    const double lambda = 0.1 + u(rng);
    for (Norm p : {Norm::l1, Norm::l2, Norm::linf}) {
      CHECK(diagonal_projection({lambda * b, lambda * d}, p) ==
            doctest::Approx(lambda * diagonal_projection({b, d}, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("perturb with zero sigma is the identity") {
  std::mt19937_64 rng(1);
  const auto d = oracle::random_diagram(rng, 20);
  CHECK(perturb_diagram(d, {0.0, 5}).same_multiset(d));
}

TEST_CASE("clamp replaces below-diagonal points with (b, b)") {
  CHECK(clamp_above_diagonal(0.7, 0.4) == DiagramPoint{0.7, 0.7});
  CHECK(clamp_above_diagonal(0.5, 0.6) == DiagramPoint{0.5, 0.6});
}

TEST_CASE("perturb keeps points above the diagonal and infinite points fixed") {
  std::vector<DiagramPoint> pts(1000, DiagramPoint{0.5, 0.6});
  pts.push_back({0.2, kInfinity});
  const PersistenceDiagram d(0, pts);
  const auto noisy = perturb_diagram(d, {0.1, 11});
  std::size_t infinite = 0;
  double s = 0.0;
  double s2 = 0.0;
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    const auto& p = noisy.points()[i];
    CHECK(p.birth <= p.death);
    if (!p.is_finite()) {
      ++infinite;
      CHECK(p.birth == 0.2);
      continue;
    }
    const double x = p.birth - 0.5;
    s += x;
    s2 += x * x;
  }
  CHECK(infinite == 1);
  const double n = 1000.0;
  const double sd = std::sqrt((s2 - s * s / n) / (n - 1.0));
  CHECK(sd >= 0.08);
  CHECK(sd <= 0.12);
}

TEST_CASE("perturb is deterministic given the seed") {
  std::mt19937_64 rng(2);
  const auto d = oracle::random_diagram(rng, 50);
  const auto a = perturb_diagram(d, {0.05, 99});
  const auto b = perturb_diagram(d, {0.05, 99});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.points()[i] == b.points()[i]);
}

TEST_CASE("truncation and finite part") {
  const PersistenceDiagram d(0, {{0, 1}, {0.5, kInfinity}, {3, kInfinity}});
  const auto t = d.truncated(2.0);
  CHECK(t.all_finite());
  CHECK(t.points()[1].death == 2.0);
  CHECK(t.points()[2].death == 3.0);
  CHECK(d.finite_part().size() == 1);
  CHECK(d.max_finite_death() == 1.0);
}

TEST_CASE("select_dimension returns an empty diagram when absent") {
  const std::vector<PersistenceDiagram> ds{PersistenceDiagram(0, {{0, 1}})};
  const auto d = select_dimension(ds, 2);
  CHECK(d.empty());
  CHECK(d.hom_dimension() == 2);
}
