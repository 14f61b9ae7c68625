#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pdperm/distances.hpp"

namespace pdperm {

/// Group membership for a two-sample test. Labels are 1 or 2.
class GroupLabels {
 public:
  explicit GroupLabels(std::vector<int> labels);
  /// n1 ones followed by n2 twos.
  static GroupLabels contiguous(std::size_t n1, std::size_t n2);

  const std::vector<int>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  std::size_t n1() const { return n1_; }
  std::size_t n2() const { return n2_; }
  int operator[](std::size_t i) const { return labels_[i]; }

  friend bool operator==(const GroupLabels&, const GroupLabels&) = default;

 private:
  std::vector<int> labels_;
  std::size_t n1_ = 0;
  std::size_t n2_ = 0;
};

enum class Mixing { standard, strong };

const char* to_string(Mixing mixing);
Mixing parse_mixing(const std::string& text);

/// F = Σ_m [1/(2 n_m (n_m − 1))] Σ_{i≠j in group m} d(i, j)^q. Requires both groups to have
/// at least two members. Summation follows index order, so relabelings that induce the same
/// partition give bitwise-equal losses.
double joint_loss(const DistanceMatrix& m, const GroupLabels& labels, double q = 1.0);

/// floor(min(n1, n2) / 2).
std::size_t strong_mixing_k(const GroupLabels& labels);

/// Shuffle number `index` of the stream identified by `seed`.
GroupLabels shuffle_labels(const GroupLabels& labels, Mixing mixing, std::uint64_t seed,
                           std::size_t index);

/// Uniform relabelings preserving the group sizes, drawn with replacement.
std::vector<GroupLabels> standard_shuffles(const GroupLabels& labels, std::size_t count,
                                           std::uint64_t seed);

/// Relabelings that swap exactly k_max members of each group.
std::vector<GroupLabels> strong_mixing_shuffles(const GroupLabels& labels, std::size_t count,
                                                std::uint64_t seed);

struct TestResult {
  double observed_loss = 0.0;
  double p_value = 1.0;
  std::size_t n_permutations = 0;
  Mixing mixing = Mixing::standard;
  std::uint64_t seed = 0;
  std::string method;
  std::optional<std::vector<double>> permutation_losses;
};

struct PermutationOptions {
  std::size_t n_permutations = 1000;
  Mixing mixing = Mixing::standard;
  double q = 1.0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool keep_losses = false;
};

/// p = (1 + #{shuffled losses <= observed}) / (N + 1).
TestResult permutation_pvalue(const DistanceMatrix& m, const GroupLabels& labels,
                              const PermutationOptions& options);

/// Every labeling with the same group sizes, in lexicographic order of group-1 index sets.
std::vector<GroupLabels> all_labelings(std::size_t n1, std::size_t n2);

/// Add-one estimator over all labelings: (1 + #{<= observed}) / (C(n, n1) + 1).
TestResult exhaustive_pvalue(const DistanceMatrix& m, const GroupLabels& labels, double q = 1.0);

/// Exact permutation p-value #{labelings with loss <= observed} / C(n, n1). The identity
/// labeling is among those counted.
double exact_permutation_pvalue(const DistanceMatrix& m, const GroupLabels& labels,
                                double q = 1.0);

/// {p_value, observed_loss, n_permutations, mixing, seed, method}.
void write_test_result_json(std::ostream& out, const TestResult& result);

}  // namespace pdperm
