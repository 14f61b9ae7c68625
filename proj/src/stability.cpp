#include "pdperm/stability.hpp"

#include <algorithm>

#include "pdperm/distances.hpp"
#include "pdperm/errors.hpp"

namespace pdperm {

namespace {

void check_L(double L, double max_persistence) {
  if (!(L >= max_persistence)) {
    throw ValidationError("L = " + format_double(L) + " is below the maximum persistence " +
                          format_double(max_persistence));
  }
}

}  // namespace

StabilityGap stability_gap(const PersistenceDiagram& a, const PersistenceDiagram& b,
                           const WeightFunction& w, double L) {
  if (!a.all_finite() || !b.all_finite()) {
    throw ValidationError("stability bound needs finite-death diagrams");
  }
  check_L(L, std::max(a.max_persistence(), b.max_persistence()));
  const double d11 = wasserstein(a, b, {Norm::l1, 1.0});
  const double d21 = wasserstein(a, b, {Norm::l2, 1.0});
  return {betti_l1_distance(a, b, w), w.sup_bound * d11 + L * w.grad_bound * d21};
}

StabilityGap point_stability_gap(const DiagramPoint& u, const DiagramPoint& v,
                                 const WeightFunction& w, double L) {
  if (!u.is_finite() || !v.is_finite()) {
    throw ValidationError("stability bound needs finite points");
  }
  check_L(L, std::max(u.persistence(), v.persistence()));
  const PersistenceDiagram du(0, {u});
  const PersistenceDiagram dv(0, {v});
  return {betti_l1_distance(du, dv, w),
          w.sup_bound * point_distance(u, v, Norm::l1) +
              L * w.grad_bound * point_distance(u, v, Norm::l2)};
}

}  // namespace pdperm
