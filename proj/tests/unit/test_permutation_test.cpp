#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "pdperm/errors.hpp"
#include "pdperm/permutation.hpp"

using namespace pdperm;

namespace {

DistanceMatrix from_rows(std::vector<std::vector<double>> rows) {
  DistanceMatrix m(rows.size(), DistanceMethod::wasserstein);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  return m;
}

DistanceMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DistanceMatrix m(n, DistanceMethod::vab);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m(i, j) = m(j, i) = u(rng);
  return m;
}

// two tight clusters, 0 within and 1 between
DistanceMatrix block_matrix(std::size_t n1, std::size_t n2) {
  DistanceMatrix m(n1 + n2, DistanceMethod::wasserstein);
  for (std::size_t i = 0; i < n1 + n2; ++i)
    for (std::size_t j = 0; j < n1 + n2; ++j) m(i, j) = ((i < n1) != (j < n1)) ? 1.0 : 0.0;
  return m;
}

std::size_t differing(const GroupLabels& a, const GroupLabels& b) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < a.size(); ++i) k += a[i] != b[i];
  return k;
}

}  // namespace

TEST_CASE("group labels") {
  const auto g = GroupLabels::contiguous(2, 3);
  CHECK(g.labels() == std::vector<int>{1, 1, 2, 2, 2});
  CHECK(g.n1() == 2);
  CHECK(g.n2() == 3);
  CHECK_THROWS_AS(GroupLabels({1, 3}), ValidationError);
  CHECK_THROWS_AS(GroupLabels({1, 1}), ValidationError);
  CHECK_THROWS_AS(GroupLabels({}), ValidationError);
}

TEST_CASE("joint loss examples") {
  auto m = from_rows({{0, 1, 5, 5}, {1, 0, 5, 5}, {5, 5, 0, 3}, {5, 5, 3, 0}});
  const auto g = GroupLabels::contiguous(2, 2);
  CHECK(joint_loss(m, g) == 2.0);
  CHECK(joint_loss(m, g, 2.0) == doctest::Approx(0.5 * 1 + 0.5 * 9));
  CHECK(joint_loss(m, GroupLabels({2, 2, 1, 1})) == 2.0);
  CHECK(joint_loss(DistanceMatrix(4, DistanceMethod::vab), g) == 0.0);
  CHECK_THROWS_AS(joint_loss(m, GroupLabels({1, 2, 2, 2})), ValidationError);
  CHECK_THROWS_AS(joint_loss(m, GroupLabels::contiguous(2, 3)), ValidationError);
  CHECK_THROWS_AS(joint_loss(m, g, 0.5), ValidationError);
}

TEST_CASE("joint loss is invariant under within-group permutations") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = random_matrix(rng, 9);
    std::vector<int> labels{1, 2, 1, 1, 2, 2, 1, 2, 2};
    const double base = joint_loss(m, GroupLabels(labels));
    // relabel items by a permutation that maps each group onto itself
    std::vector<std::size_t> g1;
    std::vector<std::size_t> g2;
    for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? g1 : g2).push_back(i);
    auto p1 = g1;
    auto p2 = g2;
    std::shuffle(p1.begin(), p1.end(), rng);
    std::shuffle(p2.begin(), p2.end(), rng);
    std::vector<std::size_t> perm(labels.size());
    for (std::size_t k = 0; k < g1.size(); ++k) perm[g1[k]] = p1[k];
    for (std::size_t k = 0; k < g2.size(); ++k) perm[g2[k]] = p2[k];
    DistanceMatrix pm(9, DistanceMethod::vab);
    for (std::size_t i = 0; i < 9; ++i)
      for (std::size_t j = 0; j < 9; ++j) pm(i, j) = m(perm[i], perm[j]);
    CHECK(joint_loss(pm, GroupLabels(labels)) == doctest::Approx(base).epsilon(1e-12));
    std::vector<int> swapped(labels);
    for (int& x : swapped) x = 3 - x;
    CHECK(joint_loss(m, GroupLabels(swapped)) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("standard shuffles preserve group sizes and are reproducible") {
  const auto g = GroupLabels::contiguous(10, 10);
  const auto a = standard_shuffles(g, 100, 7);
  const auto b = standard_shuffles(g, 100, 7);
  CHECK(a == b);
  for (const auto& s : a) {
    CHECK(s.n1() == 10);
    CHECK(s.n2() == 10);
  }
  CHECK(standard_shuffles(g, 1, 3) == standard_shuffles(g, 1, 3));
  CHECK(standard_shuffles(g, 5, 8) != a);
  CHECK(shuffle_labels(g, Mixing::standard, 7, 42) == a[42]);
}

TEST_CASE("standard shuffles are uniform over labelings") {
  const auto shuffles = standard_shuffles(GroupLabels::contiguous(2, 2), 10000, 11);
  std::map<std::vector<int>, std::size_t> counts;
  for (const auto& s : shuffles) ++counts[s.labels()];
  CHECK(counts.size() == 6);
  double chi2 = 0.0;
  for (const auto& [labels, c] : counts) {
    const double freq = static_cast<double>(c) / 10000.0;
    CHECK(std::abs(freq - 1.0 / 6.0) <= 0.02);
    const double e = 10000.0 / 6.0;
    chi2 += (static_cast<double>(c) - e) * (static_cast<double>(c) - e) / e;
  }
  // 99.9% quantile of chi-square with 5 degrees of freedom
  CHECK(chi2 < 20.52);
}

TEST_CASE("strong mixing swaps exactly k_max members each way") {
  const auto g = GroupLabels::contiguous(10, 10);
  CHECK(strong_mixing_k(g) == 5);
  for (const auto& s : strong_mixing_shuffles(g, 500, 5)) {
    CHECK(differing(s, g) == 10);
    CHECK(s.n1() == 10);
  }
  const auto uneven = GroupLabels::contiguous(4, 2);
  CHECK(strong_mixing_k(uneven) == 1);
  for (const auto& s : strong_mixing_shuffles(uneven, 200, 6)) {
    CHECK(differing(s, uneven) == 2);
    std::size_t moved_out = 0;
    for (std::size_t i = 0; i < 4; ++i) moved_out += s[i] == 2;
    CHECK(moved_out == 1);
  }
  const auto mixed = GroupLabels({2, 1, 2, 1, 1, 2, 2, 1});
  for (const auto& s : strong_mixing_shuffles(mixed, 200, 9)) CHECK(differing(s, mixed) == 4);
}

TEST_CASE("strong mixing support for four per group") {
  const auto g = GroupLabels::contiguous(4, 4);
  std::map<std::vector<int>, std::size_t> counts;
  for (const auto& s : strong_mixing_shuffles(g, 10000, 12)) ++counts[s.labels()];
  CHECK(counts.size() == 36);
  for (const auto& [labels, c] : counts) CHECK(std::abs(static_cast<double>(c) / 10000.0 - 1.0 / 36.0) < 0.01);
}

TEST_CASE("p-value examples") {
  DistanceMatrix equal(6, DistanceMethod::vab);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) equal(i, j) = i == j ? 0.0 : 1.0;
  for (auto mixing : {Mixing::standard, Mixing::strong}) {
    PermutationOptions opt;
    opt.n_permutations = 50;
    opt.mixing = mixing;
    const auto r = permutation_pvalue(equal, GroupLabels::contiguous(3, 3), opt);
    CHECK(r.p_value == 1.0);
  }

  const auto block = block_matrix(2, 2);
  const auto g = GroupLabels::contiguous(2, 2);
  const auto ex = exhaustive_pvalue(block, g);
  CHECK(ex.observed_loss == 0.0);
  CHECK(ex.n_permutations == 6);
  CHECK(ex.p_value == doctest::Approx(3.0 / 7.0));
  CHECK(exact_permutation_pvalue(block, g) == doctest::Approx(2.0 / 6.0));

  PermutationOptions opt;
  opt.n_permutations = 600;
  opt.seed = 4;
  opt.keep_losses = true;
  const auto r = permutation_pvalue(block, g, opt);
  const auto zeros = std::count(r.permutation_losses->begin(), r.permutation_losses->end(), 0.0);
  CHECK(r.p_value == doctest::Approx((1.0 + static_cast<double>(zeros)) / 601.0));
  CHECK(std::abs(r.p_value - 1.0 / 3.0) < 0.06);
}

TEST_CASE("p-value range and determinism") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = random_matrix(rng, 10);
    for (auto mixing : {Mixing::standard, Mixing::strong}) {
      PermutationOptions opt;
      opt.n_permutations = 99;
      opt.mixing = mixing;
      opt.seed = static_cast<std::uint64_t>(trial);
      const auto a = permutation_pvalue(m, GroupLabels::contiguous(5, 5), opt);
      opt.threads = 3;
      const auto b = permutation_pvalue(m, GroupLabels::contiguous(5, 5), opt);
      CHECK(a.p_value >= 1.0 / 100.0);
      CHECK(a.p_value <= 1.0);
      CHECK(a.p_value == b.p_value);
      CHECK(a.observed_loss == b.observed_loss);
      CHECK(a.mixing == mixing);
    }
  }
}

TEST_CASE("exhaustive enumeration matches the bitmask oracle") {
  CHECK(all_labelings(3, 3).size() == 20);
  CHECK(all_labelings(3, 3).front() == GroupLabels({1, 1, 1, 2, 2, 2}));
  std::set<std::vector<int>> unique;
  for (const auto& l : all_labelings(4, 3)) unique.insert(l.labels());
  CHECK(unique.size() == 35);

  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = random_matrix(rng, 7);
    const std::vector<int> labels{1, 2, 2, 1, 2, 1, 2};
    for (double q : {1.0, 2.0}) {
      CHECK(exact_permutation_pvalue(m, GroupLabels(labels), q) ==
            doctest::Approx(oracle::exact_pvalue_by_masks(m, labels, q)));
    }
  }
}

TEST_CASE("sampled p-value approaches the exact one") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = random_matrix(rng, 6);
    const auto g = GroupLabels::contiguous(3, 3);
    PermutationOptions opt;
    opt.n_permutations = 10000;
    opt.seed = static_cast<std::uint64_t>(trial);
    CHECK(std::abs(permutation_pvalue(m, g, opt).p_value - exact_permutation_pvalue(m, g)) <= 0.03);
  }
}

TEST_CASE("test result JSON") {
  TestResult r;
  r.observed_loss = 0.25;
  r.p_value = 0.5;
  r.n_permutations = 9;
  r.mixing = Mixing::strong;
  r.seed = 17;
  r.method = "vab";
  std::ostringstream out;
  write_test_result_json(out, r);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j.at("p_value").get<double>() == 0.5);
  CHECK(j.at("mixing").get<std::string>() == "strong");
  CHECK(j.at("seed").get<std::uint64_t>() == 17);
  CHECK(j.at("method").get<std::string>() == "vab");
  CHECK(out.str().find("\"p_value\"") < out.str().find("\"observed_loss\""));
  CHECK(parse_mixing("strong") == Mixing::strong);
  CHECK_THROWS_AS(parse_mixing("weak"), ValidationError);
}
