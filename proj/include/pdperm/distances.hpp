#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pdperm/diagram.hpp"
#include "pdperm/summaries.hpp"

namespace pdperm {

/// L_p q-Wasserstein parameters: p selects the ground norm, q >= 1 is the exponent.
struct WassersteinParams {
  Norm p = Norm::l1;
  double q = 1.0;
};

/// One pair of an optimal diagram matching. An index of nullopt stands for the diagonal.
struct MatchedPair {
  std::optional<std::size_t> first;
  std::optional<std::size_t> second;
};

/// Bijection between two diagrams augmented with diagonal points.
struct DiagramMatching {
  std::vector<MatchedPair> pairs;
};

/// Optimal matching for d_pq: finite points are matched through a (N1+N2)-square assignment
/// problem with diagonal slots; infinite-death points are matched among themselves in birth
/// order. Throws ValidationError for invalid params, mismatched dimensions, or unequal
/// numbers of infinite points.
DiagramMatching optimal_matching(const PersistenceDiagram& a, const PersistenceDiagram& b,
                                 const WassersteinParams& params);

/// (Σ cost^q)^(1/q) of `matching` under params. Infinite-death pairs cost |b1 − b2|.
double matching_cost(const DiagramMatching& matching, const PersistenceDiagram& a,
                     const PersistenceDiagram& b, const WassersteinParams& params);

/// Exact L_p q-Wasserstein distance. +infinity when the diagrams have different numbers of
/// infinite-death points.
double wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b,
                   const WassersteinParams& params = {});

/// Sliced Wasserstein distance over n_directions angles spaced uniformly in [0, π). Each
/// diagram is augmented with the diagonal projections of the other's points before the 1D
/// transport. Requires finite deaths.
double sliced_wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b,
                          int n_directions = 10);

/// p-norm (p >= 1, may be infinite) of v1 − v2. Throws for incompatible vectorizations.
double lp_vector_distance(const SummaryVector& v1, const SummaryVector& v2, double p = 1.0);

enum class DistanceMethod { wasserstein, vab, landscape, image, sliced };

/// Short tags: w, vab, pl, pi, sw.
const char* to_string(DistanceMethod method);
DistanceMethod parse_distance_method(const std::string& tag);

struct DistanceConfig {
  DistanceMethod method = DistanceMethod::vab;
  WassersteinParams wasserstein{};
  int directions = 10;
  double vector_p = 1.0;
  /// Scale points of the 1D grid (VAB and landscape).
  std::size_t grid_size = 100;
  /// Cells per axis of the persistence image.
  std::size_t image_grid = 20;
  int landscape_k = 1;
  std::optional<double> image_sigma;
  unsigned threads = 1;
};

/// Symmetric matrix of pairwise distances tagged with the method that produced it.
struct DistanceMatrix {
  std::size_t n = 0;
  std::vector<double> entries;
  DistanceMethod method = DistanceMethod::wasserstein;
  std::map<std::string, std::string> params;
  double elapsed_seconds = 0.0;

  DistanceMatrix() = default;
  DistanceMatrix(std::size_t size, DistanceMethod m)
      : n(size), entries(size * size, 0.0), method(m) {}

  double operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
  double& operator()(std::size_t i, std::size_t j) { return entries[i * n + j]; }

  /// Zero diagonal, symmetry to 1e-12, nonnegative entries.
  void validate() const;
};

/// Pooled scale range [min(0, min birth), max finite death] of a dataset, widened to
/// [lo, lo + 1] when degenerate.
std::pair<double, double> pooled_scale_range(std::span<const PersistenceDiagram> diagrams);

/// Vectorizations produced for the vector methods: a shared grid over the pooled range
/// [min(0, min birth), max finite death]; infinite deaths are truncated to that maximum for
/// landscapes, images and sliced Wasserstein, and kept for VAB.
std::vector<SummaryVector> vectorize_all(std::span<const PersistenceDiagram> diagrams,
                                         const DistanceConfig& config);

/// Pairwise distances between all diagrams. Vector methods vectorize once per diagram; the
/// elapsed time covers vectorization and comparison.
DistanceMatrix distance_matrix(std::span<const PersistenceDiagram> diagrams,
                               const DistanceConfig& config);

/// Square CSV with a `# method=... key=value` comment line.
void write_distance_matrix(std::ostream& out, const DistanceMatrix& matrix);
DistanceMatrix load_distance_matrix(std::istream& in);

}  // namespace pdperm
