#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pdperm/distances.hpp"
#include "pdperm/permutation.hpp"

namespace pdperm {

enum class Experiment { circle_ellipse, sphere_ellipsoid, pd_process, rdpg };

const char* to_string(Experiment experiment);
Experiment parse_experiment(const std::string& text);

/// Monte-Carlo power study. Group 1 is always generated at the baseline; group 2 at each
/// level, where the level is the compression r for the shape experiments, the second Beta
/// parameter of the persistence distribution for pd-process (baseline 1), and the increment
/// added to the third Dirichlet parameter for rdpg (baseline 1.5, 1.5, 1.5).
struct ExperimentConfig {
  Experiment experiment = Experiment::circle_ellipse;
  std::vector<double> levels{0.0};
  std::size_t reps = 200;
  std::size_t group_size = 10;
  std::vector<DistanceMethod> methods{DistanceMethod::vab};
  std::vector<Mixing> mixings{Mixing::standard};
  std::size_t n_perms = 1000;
  int hom_dim = 1;
  /// Points per cloud, points per diagram, or nodes per graph; 0 picks 50, 60, 50, 100.
  std::size_t n_points = 0;
  double noise_sigma = 0.0;
  std::optional<double> rips_threshold;
  DistanceConfig distance;
  double loss_q = 1.0;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  std::size_t points_per_item() const;
  void validate() const;
};

/// Reads a JSON object. Keys: experiment, levels, reps, group_size, method or methods,
/// mixing (standard, strong, both), n_perms, hom_dim, n_points, noise_sigma,
/// rips_threshold, grid_size, image_grid, p, q, directions, loss_q, alpha, seed. Unknown keys are
/// rejected.
ExperimentConfig parse_experiment_config(std::istream& in);

struct PowerRow {
  std::string experiment;
  std::string method;
  std::string mixing;
  double level = 0.0;
  double power = 0.0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
};

struct PowerReport {
  std::vector<PowerRow> rows;

  const PowerRow& find(DistanceMethod method, Mixing mixing, double level) const;
};

/// Diagram for one Monte-Carlo item. group is 1 or 2.
PersistenceDiagram experiment_diagram(const ExperimentConfig& cfg, int group, double level,
                                      std::uint64_t item_seed);

/// Power = fraction of repetitions with p < alpha, for each level, method and mixing. Data
/// seeds depend on (seed, repetition, item) only, so every level, method and mixing sees
/// the same draws; group-1 diagrams are shared across levels.
PowerReport run_power_experiment(const ExperimentConfig& cfg);

/// CSV: experiment,method,mixing,level,power,reps,seed.
void write_power_report(std::ostream& out, const PowerReport& report);

struct BenchmarkRow {
  std::string method;
  std::size_t n_diagrams = 0;
  std::size_t diagram_size = 0;
  std::size_t repeats = 0;
  double median_seconds = 0.0;
  /// FNV-1a hash of the distance matrices; identical across runs with the same seed.
  std::string checksum;
};

/// Times distance_matrix (vectorization included) on pd-process diagrams with Beta(1, 1)
/// persistence, regenerated for every repeat. Requires repeats >= 3.
BenchmarkRow run_benchmark(std::size_t n_diagrams, std::size_t diagram_size,
                           DistanceMethod method, std::size_t repeats, std::uint64_t seed,
                           const DistanceConfig& base = {});

/// CSV: method,n_diagrams,diagram_size,repeats,median_seconds,checksum.
void write_benchmark(std::ostream& out, const std::vector<BenchmarkRow>& rows);

/// {method, n, median_seconds}.
void write_timing_json(std::ostream& out, const std::string& method, std::size_t n,
                       double median_seconds);

/// Seed for item `item` of repetition `rep`.
std::uint64_t item_seed(std::uint64_t seed, std::size_t rep, std::size_t item);
/// Seed for the label shuffles of repetition `rep`.
std::uint64_t permutation_seed(std::uint64_t seed, std::size_t rep);

}  // namespace pdperm
