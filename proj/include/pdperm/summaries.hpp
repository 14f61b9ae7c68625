#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pdperm/diagram.hpp"

namespace pdperm {

/// Weight w(b, d) used by Betti functions and persistence images, with declared bounds
/// ‖w‖∞ and ‖∇w‖∞ that the stability bounds consume.
struct WeightFunction {
  std::function<double(double, double)> evaluate;
  double sup_bound = 0.0;
  double grad_bound = 0.0;

  double operator()(double birth, double death) const { return evaluate(birth, death); }

  /// w ≡ c; bounds |c| and 0.
  static WeightFunction constant(double c = 1.0);
  /// w(b, d) = d − b. Unbounded on the plane; the declared sup bound is `max_persistence`
  /// (valid on the region the caller restricts to) and ‖∇w‖∞ = √2.
  static WeightFunction persistence(double max_persistence);
  /// Smooth bounded test weight w(b, d) = 1 + a·sin(b)·cos(d); ‖w‖∞ = 1 + |a|,
  /// ‖∇w‖∞ = |a|.
  static WeightFunction sinusoidal(double amplitude = 0.5);
};

/// Strictly increasing scale values t_1 < ... < t_n (n >= 2).
class ScaleGrid {
 public:
  explicit ScaleGrid(std::vector<double> values);
  /// n equally spaced points from lo to hi inclusive.
  static ScaleGrid uniform(double lo, double hi, std::size_t n);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  std::size_t cell_count() const { return values_.size() - 1; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }
  double cell_width(std::size_t i) const { return values_[i + 1] - values_[i]; }
  bool is_uniform() const { return uniform_; }
  /// Common spacing; only meaningful when is_uniform().
  double spacing() const { return dt_; }

  friend bool operator==(const ScaleGrid& a, const ScaleGrid& b) { return a.values_ == b.values_; }

 private:
  std::vector<double> values_;
  bool uniform_ = false;
  double dt_ = 0.0;
};

enum class SummaryKind { vab, betti_samples, landscape, image };

const char* to_string(SummaryKind kind);
SummaryKind parse_summary_kind(const std::string& text);

/// Finite-dimensional vectorization of a diagram together with the grid that produced it.
/// Image vectors flatten (persistence row, birth column) with the birth axis fastest.
struct SummaryVector {
  std::vector<double> values;
  SummaryKind kind = SummaryKind::vab;
  std::vector<double> grid;    // 1D scale grid, or birth grid for images
  std::vector<double> grid_y;  // persistence grid for images, empty otherwise

  bool compatible_with(const SummaryVector& other) const {
    return kind == other.kind && grid == other.grid && grid_y == other.grid_y &&
           values.size() == other.values.size();
  }
};

struct ImageConfig {
  ScaleGrid birth_grid;
  ScaleGrid persistence_grid;
  double sigma = 1.0;
};

/// 0.5 × max persistence / grid size.
double default_image_sigma(double max_persistence, std::size_t grid_size);

/// β(t) = Σ w(b_i, d_i)·1[b_i <= t < d_i]; infinite deaths count for every t >= b_i.
double betti_eval(const PersistenceDiagram& diagram, const WeightFunction& w, double t);

/// Vector of averaged Bettis: component i is the mean of β over [t_i, t_{i+1}], computed
/// exactly from interval overlaps. Length n − 1.
SummaryVector vab(const PersistenceDiagram& diagram, const ScaleGrid& grid,
                  const WeightFunction& w = WeightFunction::constant());

/// β evaluated at each grid point. Length n.
SummaryVector betti_samples(const PersistenceDiagram& diagram, const ScaleGrid& grid,
                            const WeightFunction& w = WeightFunction::constant());

/// k-th landscape λ_k sampled on the grid. Requires finite deaths.
SummaryVector landscape_vector(const PersistenceDiagram& diagram, int k, const ScaleGrid& grid);

/// Cell averages of the Gaussian-smoothed weighted (birth, persistence) surface. Cell
/// integrals are exact products of normal CDF differences. Requires finite deaths.
SummaryVector persistence_image(const PersistenceDiagram& diagram, const ImageConfig& config,
                                const WeightFunction& w);

/// Exact ∫|β_1 − β_2| dt by sweeping the breakpoints of the piecewise-constant difference.
/// Infinite when the tails of the two Betti functions differ.
double betti_l1_distance(const PersistenceDiagram& a, const PersistenceDiagram& b,
                         const WeightFunction& w = WeightFunction::constant());

/// CSV export: a `# kind=... grid=...` comment line, then one vector per row. All vectors
/// must share kind and grid.
void write_summary_vectors(std::ostream& out, std::span<const SummaryVector> vectors);

}  // namespace pdperm
