#include "pdperm/permutation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "pdperm/errors.hpp"
#include "pdperm/parallel.hpp"
#include "pdperm/random.hpp"

namespace pdperm {

GroupLabels::GroupLabels(std::vector<int> labels) : labels_(std::move(labels)) {
  for (int x : labels_) {
    if (x == 1) {
      ++n1_;
    } else if (x == 2) {
      ++n2_;
    } else {
      throw ValidationError("group labels must be 1 or 2");
    }
  }
  if (n1_ == 0 || n2_ == 0) throw ValidationError("both groups must be nonempty");
}

GroupLabels GroupLabels::contiguous(std::size_t n1, std::size_t n2) {
  std::vector<int> labels(n1, 1);
  labels.resize(n1 + n2, 2);
  return GroupLabels(std::move(labels));
}

const char* to_string(Mixing mixing) {
  return mixing == Mixing::strong ? "strong" : "standard";
}

Mixing parse_mixing(const std::string& text) {
  if (text == "standard") return Mixing::standard;
  if (text == "strong") return Mixing::strong;
  throw ValidationError("unknown mixing '" + text + "' (expected standard or strong)");
}

double joint_loss(const DistanceMatrix& m, const GroupLabels& labels, double q) {
  if (m.n != labels.size()) {
    throw ValidationError("distance matrix has " + std::to_string(m.n) + " rows but there are " +
                          std::to_string(labels.size()) + " labels");
  }
  if (labels.n1() < 2 || labels.n2() < 2) {
    throw ValidationError("each group needs at least two members");
  }
  if (!(q >= 1.0) || std::isinf(q)) throw ValidationError("loss exponent q must be finite and >= 1");
  double sums[2] = {0.0, 0.0};
  const std::size_t n = m.n;
  for (std::size_t i = 0; i < n; ++i) {
    const int g = labels[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (labels[j] != g) continue;
      const double d = m(i, j);
      sums[g - 1] += q == 1.0 ? d : std::pow(d, q);
    }
  }
  // Each unordered pair appears twice in the i ≠ j sum.
  const auto n1 = static_cast<double>(labels.n1());
  const auto n2 = static_cast<double>(labels.n2());
  return sums[0] / (n1 * (n1 - 1.0)) + sums[1] / (n2 * (n2 - 1.0));
}

std::size_t strong_mixing_k(const GroupLabels& labels) {
  return std::min(labels.n1(), labels.n2()) / 2;
}

namespace {

// Moves k uniformly chosen elements to the front of `items` (partial Fisher-Yates).
void choose_front(std::vector<std::size_t>& items, std::size_t k, Rng& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + uniform_index(rng, items.size() - i);
    std::swap(items[i], items[j]);
  }
}

}  // namespace

GroupLabels shuffle_labels(const GroupLabels& labels, Mixing mixing, std::uint64_t seed,
                           std::size_t index) {
  Rng rng = make_rng(seed, index);
  std::vector<int> out = labels.labels();
  if (mixing == Mixing::standard) {
    for (std::size_t i = out.size(); i > 1; --i) {
      std::swap(out[i - 1], out[uniform_index(rng, i)]);
    }
    return GroupLabels(std::move(out));
  }
  const std::size_t k = strong_mixing_k(labels);
  if (k == 0) throw ValidationError("strong mixing needs at least two members in each group");
  std::vector<std::size_t> first;
  std::vector<std::size_t> second;
  for (std::size_t i = 0; i < out.size(); ++i) (out[i] == 1 ? first : second).push_back(i);
  choose_front(first, k, rng);
  choose_front(second, k, rng);
  for (std::size_t i = 0; i < k; ++i) {
    out[first[i]] = 2;
    out[second[i]] = 1;
  }
  return GroupLabels(std::move(out));
}

std::vector<GroupLabels> standard_shuffles(const GroupLabels& labels, std::size_t count,
                                           std::uint64_t seed) {
  if (count == 0) throw ValidationError("shuffle count must be positive");
  std::vector<GroupLabels> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(shuffle_labels(labels, Mixing::standard, seed, i));
  }
  return out;
}

std::vector<GroupLabels> strong_mixing_shuffles(const GroupLabels& labels, std::size_t count,
                                                std::uint64_t seed) {
  if (count == 0) throw ValidationError("shuffle count must be positive");
  std::vector<GroupLabels> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(shuffle_labels(labels, Mixing::strong, seed, i));
  }
  return out;
}

TestResult permutation_pvalue(const DistanceMatrix& m, const GroupLabels& labels,
                              const PermutationOptions& options) {
  if (options.n_permutations == 0) throw ValidationError("n_permutations must be positive");
  TestResult result;
  result.observed_loss = joint_loss(m, labels, options.q);
  result.n_permutations = options.n_permutations;
  result.mixing = options.mixing;
  result.seed = options.seed;
  result.method = to_string(m.method);

  std::vector<double> losses(options.n_permutations);
  parallel_for(losses.size(), options.threads, [&](std::size_t i) {
    losses[i] = joint_loss(m, shuffle_labels(labels, options.mixing, options.seed, i), options.q);
  });
  const auto count = std::count_if(losses.begin(), losses.end(),
                                   [&](double x) { return x <= result.observed_loss; });
  result.p_value = static_cast<double>(1 + count) / static_cast<double>(losses.size() + 1);
  if (options.keep_losses) result.permutation_losses = std::move(losses);
  return result;
}

std::vector<GroupLabels> all_labelings(std::size_t n1, std::size_t n2) {
  const std::size_t n = n1 + n2;
  // Selection mask with group-1 members first, walked through every arrangement.
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(n1), true);
  std::vector<GroupLabels> out;
  do {
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = pick[i] ? 1 : 2;
    out.emplace_back(std::move(labels));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

TestResult exhaustive_pvalue(const DistanceMatrix& m, const GroupLabels& labels, double q) {
  TestResult result;
  result.observed_loss = joint_loss(m, labels, q);
  result.method = to_string(m.method);
  std::vector<double> losses;
  for (const auto& l : all_labelings(labels.n1(), labels.n2())) losses.push_back(joint_loss(m, l, q));
  const auto count = std::count_if(losses.begin(), losses.end(),
                                   [&](double x) { return x <= result.observed_loss; });
  result.n_permutations = losses.size();
  result.p_value = static_cast<double>(1 + count) / static_cast<double>(losses.size() + 1);
  result.permutation_losses = std::move(losses);
  return result;
}

double exact_permutation_pvalue(const DistanceMatrix& m, const GroupLabels& labels, double q) {
  const double observed = joint_loss(m, labels, q);
  std::size_t count = 0;
  std::size_t total = 0;
  for (const auto& l : all_labelings(labels.n1(), labels.n2())) {
    ++total;
    if (joint_loss(m, l, q) <= observed) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(total);
}

void write_test_result_json(std::ostream& out, const TestResult& result) {
  nlohmann::ordered_json j;
  j["p_value"] = result.p_value;
  j["observed_loss"] = result.observed_loss;
  j["n_permutations"] = result.n_permutations;
  j["mixing"] = to_string(result.mixing);
  j["seed"] = result.seed;
  j["method"] = result.method;
  out << j.dump(2) << '\n';
}

}  // namespace pdperm
