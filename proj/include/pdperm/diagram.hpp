#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace pdperm {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A (birth, death) pair. Death may be +infinity for classes that never die.
struct DiagramPoint {
  double birth = 0.0;
  double death = 0.0;

  double persistence() const { return death - birth; }
  bool is_finite() const { return std::isfinite(death); }

  friend bool operator==(const DiagramPoint&, const DiagramPoint&) = default;
};

/// Norm on the (birth, death) plane.
enum class Norm { l1, l2, linf };

const char* to_string(Norm norm);
Norm parse_norm(const char* text);

/// Distance from a finite point to the diagonal under `norm`. The nearest diagonal point is
/// the orthogonal projection ((b+d)/2, (b+d)/2) for all three norms. Throws ValidationError
/// for an infinite death.
double diagonal_projection(const DiagramPoint& point, Norm norm);

/// ‖u − v‖ under `norm` for finite points.
double point_distance(const DiagramPoint& u, const DiagramPoint& v, Norm norm);

/// Returns (birth, death), or (birth, birth) when the pair would lie below the diagonal.
DiagramPoint clamp_above_diagonal(double birth, double death);

/// Multiset of diagram points for a single homological dimension. Immutable once built;
/// the constructor validates every point.
class PersistenceDiagram {
 public:
  PersistenceDiagram() = default;
  explicit PersistenceDiagram(int hom_dimension, std::vector<DiagramPoint> points = {});

  int hom_dimension() const { return hom_dimension_; }
  std::span<const DiagramPoint> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  std::size_t infinite_count() const;
  bool all_finite() const { return infinite_count() == 0; }

  /// Largest finite death, or -infinity when there are no finite points.
  double max_finite_death() const;
  /// Smallest birth, or +infinity for an empty diagram.
  double min_birth() const;
  /// Largest birth, or -infinity for an empty diagram.
  double max_birth() const;
  /// Largest finite persistence (0 for a diagram without finite points).
  double max_persistence() const;

  /// Copy with infinite-death points removed.
  PersistenceDiagram finite_part() const;
  /// Copy with infinite deaths replaced by max(cap, birth).
  PersistenceDiagram truncated(double cap) const;

  /// Exact multiset equality (order-insensitive).
  bool same_multiset(const PersistenceDiagram& other) const;

 private:
  int hom_dimension_ = 0;
  std::vector<DiagramPoint> points_;
};

/// Additive Gaussian noise on both coordinates of every finite point.
struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Perturbs each finite point by independent N(0, sigma^2) noise on birth and death; noisy
/// points that land below the diagonal are replaced with (b', b'). Infinite points are
/// copied unchanged. Deterministic given the seed.
PersistenceDiagram perturb_diagram(const PersistenceDiagram& diagram, const NoiseSpec& noise);

/// Reads diagram CSV (`dimension,birth,death`, death may be `inf`). Returns one diagram per
/// distinct dimension, sorted by dimension. Throws ParseError naming the line for malformed
/// rows and ValidationError for invariant violations.
std::vector<PersistenceDiagram> load_diagrams(std::istream& in);

/// Writes diagrams as CSV with round-trip precision.
void write_diagrams(std::ostream& out, std::span<const PersistenceDiagram> diagrams);

/// Selects the diagram of dimension `dim`, returning an empty one if absent.
PersistenceDiagram select_dimension(std::span<const PersistenceDiagram> diagrams, int dim);

/// Shortest decimal form that parses back to the same double ("inf" for +infinity).
std::string format_double(double value);

}  // namespace pdperm
