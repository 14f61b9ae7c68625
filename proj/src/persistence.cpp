#include "pdperm/persistence.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

#include "pdperm/errors.hpp"
#include "simplex_key.hpp"

namespace pdperm {

namespace {

using Index = std::uint32_t;
constexpr Index kNone = std::numeric_limits<Index>::max();

// Sparse GF(2) column; row indices kept ascending so the pivot (lowest one) is back().
using Column = std::vector<Index>;

void add_into(Column& target, const Column& source, Column& scratch) {
  scratch.clear();
  std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                std::back_inserter(scratch));
  target.swap(scratch);
}

}  // namespace

std::vector<PersistenceDiagram> compute_persistence(const Filtration& filtration,
                                                    int max_hom_dim) {
  if (max_hom_dim < 0) throw ValidationError("max_hom_dim must be nonnegative");
  filtration.validate();

  const auto simplices = filtration.simplices();
  const auto values = filtration.values();
  const std::size_t m = simplices.size();
  if (m >= kNone) throw ResourceError("filtration too large for 32-bit simplex indices");
  const int top = std::min(filtration.max_dimension(), max_hom_dim + 1);

  // Boundary columns for dimensions 1..top.
  detail::SimplexIndex index(simplices);
  std::vector<Column> columns(m);
  std::vector<std::vector<Index>> by_dim(static_cast<std::size_t>(std::max(top, 0)) + 1);
  std::vector<VertexId> face;
  for (std::size_t i = 0; i < m; ++i) {
    const int d = simplices[i].dimension();
    if (d > top) continue;
    by_dim[static_cast<std::size_t>(d)].push_back(static_cast<Index>(i));
    if (d == 0) continue;
    const auto& v = simplices[i].vertices;
    Column& col = columns[i];
    col.reserve(v.size());
    for (std::size_t drop = 0; drop < v.size(); ++drop) {
      face.clear();
      for (std::size_t k = 0; k < v.size(); ++k)
        if (k != drop) face.push_back(v[k]);
      col.push_back(static_cast<Index>(*index.find(face)));
    }
    std::sort(col.begin(), col.end());
  }

  // pivot_owner[row] = column whose reduced pivot is `row`.
  std::vector<Index> pivot_owner(m, kNone);
  std::vector<Index> partner(m, kNone);
  std::vector<bool> negative(m, false);
  Column scratch;

  // Clearing: reduce high dimensions first; a pivot row of dimension k is a positive
  // k-simplex, so its own column reduces to zero and can be skipped.
  for (int d = top; d >= 1; --d) {
    for (Index j : by_dim[static_cast<std::size_t>(d)]) {
      if (partner[j] != kNone) {
        columns[j].clear();
        continue;
      }
      Column& col = columns[j];
      while (!col.empty() && pivot_owner[col.back()] != kNone) {
        add_into(col, columns[pivot_owner[col.back()]], scratch);
      }
      if (col.empty()) continue;
      const Index low = col.back();
      pivot_owner[low] = j;
      partner[low] = j;
      partner[j] = low;
      negative[j] = true;
    }
  }

  std::vector<std::vector<DiagramPoint>> points(static_cast<std::size_t>(max_hom_dim) + 1);
  for (std::size_t i = 0; i < m; ++i) {
    const int d = simplices[i].dimension();
    if (d > max_hom_dim || d > top || negative[i]) continue;
    const Index killer = partner[i];
    if (killer == kNone) {
      points[static_cast<std::size_t>(d)].push_back({values[i], kInfinity});
    } else if (values[killer] > values[i]) {
      points[static_cast<std::size_t>(d)].push_back({values[i], values[killer]});
    }
  }

  std::vector<PersistenceDiagram> result;
  result.reserve(points.size());
  for (std::size_t d = 0; d < points.size(); ++d) {
    result.emplace_back(static_cast<int>(d), std::move(points[d]));
  }
  return result;
}

}  // namespace pdperm
