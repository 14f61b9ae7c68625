#pragma once

#include <vector>

#include "pdperm/diagram.hpp"
#include "pdperm/filtration.hpp"

namespace pdperm {

/// Persistence diagrams of dimensions 0..max_hom_dim by GF(2) column reduction of the
/// boundary matrix (with clearing). Classes alive at the end of the filtration get an infinite
/// death; zero-persistence pairs are dropped. Validates monotonicity first.
///
/// Dimension-k classes can only die through (k+1)-simplices, so a diagram for a dimension at
/// or above the filtration's top dimension contains only infinite points (or nothing).
std::vector<PersistenceDiagram> compute_persistence(const Filtration& filtration, int max_hom_dim);

}  // namespace pdperm
