#pragma once

#include "pdperm/diagram.hpp"
#include "pdperm/summaries.hpp"

namespace pdperm {

/// Both sides of the Betti-function stability inequality.
struct StabilityGap {
  double lhs = 0.0;  // exact ‖β1 − β2‖_L1
  double rhs = 0.0;  // ‖w‖∞·d11 + L·‖∇w‖∞·d21
};

/// Requires finite deaths and L >= the largest persistence in either diagram.
StabilityGap stability_gap(const PersistenceDiagram& a, const PersistenceDiagram& b,
                           const WeightFunction& w, double L);

/// Per-point bound for single intervals u, v:
/// ∫|w(u)1[b_u,d_u) − w(v)1[b_v,d_v)| dt  versus  ‖w‖∞‖u−v‖₁ + L‖∇w‖∞‖u−v‖₂.
StabilityGap point_stability_gap(const DiagramPoint& u, const DiagramPoint& v,
                                 const WeightFunction& w, double L);

}  // namespace pdperm
