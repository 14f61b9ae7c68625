#include "pdperm/distances.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "pdperm/assignment.hpp"
#include "pdperm/errors.hpp"
#include "pdperm/parallel.hpp"

namespace pdperm {

namespace {

void validate_params(const WassersteinParams& params) {
  if (std::isinf(params.q)) {
    throw ValidationError("q = infinity (bottleneck distance) is not supported");
  }
  if (!(params.q >= 1.0)) throw ValidationError("Wasserstein exponent q must be >= 1");
}

double power(double x, double q) { return q == 1.0 ? x : std::pow(x, q); }

double root(double x, double q) { return q == 1.0 ? x : std::pow(x, 1.0 / q); }

std::vector<std::size_t> indices_where(const PersistenceDiagram& d, bool finite) {
  std::vector<std::size_t> out;
  const auto pts = d.points();
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (pts[i].is_finite() == finite) out.push_back(i);
  return out;
}

}  // namespace

DiagramMatching optimal_matching(const PersistenceDiagram& a, const PersistenceDiagram& b,
                                 const WassersteinParams& params) {
  validate_params(params);
  if (a.hom_dimension() != b.hom_dimension()) {
    throw ValidationError("cannot match diagrams of different homological dimensions");
  }
  const auto fa = indices_where(a, true);
  const auto fb = indices_where(b, true);
  auto ia = indices_where(a, false);
  auto ib = indices_where(b, false);
  if (ia.size() != ib.size()) {
    throw ValidationError("diagrams have unequal numbers of infinite-death points");
  }

  DiagramMatching matching;
  const auto pa = a.points();
  const auto pb = b.points();

  const std::size_t n1 = fa.size();
  const std::size_t n2 = fb.size();
  if (n1 + n2 > 0) {
    std::vector<double> pair_cost(n1 * n2);
    std::vector<double> exit_a(n1);
    std::vector<double> exit_b(n2);
    for (std::size_t i = 0; i < n1; ++i) {
      const auto& u = pa[fa[i]];
      exit_a[i] = power(diagonal_projection(u, params.p), params.q);
      for (std::size_t j = 0; j < n2; ++j) {
        pair_cost[i * n2 + j] = power(point_distance(u, pb[fb[j]], params.p), params.q);
      }
    }
    for (std::size_t j = 0; j < n2; ++j) {
      exit_b[j] = power(diagonal_projection(pb[fb[j]], params.p), params.q);
    }
    const ExitAssignment solved = solve_exit_assignment(pair_cost, n1, n2, exit_a, exit_b);
    std::vector<char> matched(n2, 0);
    for (std::size_t i = 0; i < n1; ++i) {
      MatchedPair pair{fa[i], std::nullopt};
      if (const auto j = solved.row_to_col[i]) {
        pair.second = fb[*j];
        matched[*j] = 1;
      }
      matching.pairs.push_back(pair);
    }
    for (std::size_t j = 0; j < n2; ++j)
      if (!matched[j]) matching.pairs.push_back({std::nullopt, fb[j]});
  }

  // |b1 − b2|^q is convex in the difference, so matching sorted births is optimal.
  auto by_birth = [](std::span<const DiagramPoint> pts) {
    return [pts](std::size_t x, std::size_t y) { return pts[x].birth < pts[y].birth; };
  };
  std::sort(ia.begin(), ia.end(), by_birth(pa));
  std::sort(ib.begin(), ib.end(), by_birth(pb));
  for (std::size_t k = 0; k < ia.size(); ++k) matching.pairs.push_back({ia[k], ib[k]});
  return matching;
}

double matching_cost(const DiagramMatching& matching, const PersistenceDiagram& a,
                     const PersistenceDiagram& b, const WassersteinParams& params) {
  validate_params(params);
  const auto pa = a.points();
  const auto pb = b.points();
  double total = 0.0;
  for (const auto& pair : matching.pairs) {
    double c = 0.0;
    if (pair.first && pair.second) {
      const auto& u = pa[*pair.first];
      const auto& v = pb[*pair.second];
      if (!u.is_finite() && !v.is_finite()) {
        c = std::abs(u.birth - v.birth);
      } else if (!u.is_finite() || !v.is_finite()) {
        return kInfinity;
      } else {
        c = point_distance(u, v, params.p);
      }
    } else if (pair.first) {
      const auto& u = pa[*pair.first];
      if (!u.is_finite()) return kInfinity;
      c = diagonal_projection(u, params.p);
    } else if (pair.second) {
      const auto& v = pb[*pair.second];
      if (!v.is_finite()) return kInfinity;
      c = diagonal_projection(v, params.p);
    }
    total += power(c, params.q);
  }
  return root(total, params.q);
}

double wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b,
                   const WassersteinParams& params) {
  validate_params(params);
  if (a.hom_dimension() != b.hom_dimension()) {
    throw ValidationError("cannot compare diagrams of different homological dimensions");
  }
  if (a.infinite_count() != b.infinite_count()) return kInfinity;
  return matching_cost(optimal_matching(a, b, params), a, b, params);
}

double sliced_wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b,
                          int n_directions) {
  if (n_directions < 1) throw ValidationError("sliced Wasserstein needs at least one direction");
  if (!a.all_finite() || !b.all_finite()) {
    throw ValidationError("sliced Wasserstein needs finite deaths; truncate or drop infinite points");
  }
  const auto pa = a.points();
  const auto pb = b.points();
  const std::size_t total = pa.size() + pb.size();
  std::vector<double> xs(total);
  std::vector<double> ys(total);
  double sum = 0.0;
  for (int k = 0; k < n_directions; ++k) {
    const double theta = std::numbers::pi * k / n_directions;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    std::size_t ix = 0;
    std::size_t iy = 0;
    for (const auto& p : pa) {
      xs[ix++] = p.birth * c + p.death * s;
      const double mid = 0.5 * (p.birth + p.death);
      ys[iy++] = mid * (c + s);
    }
    for (const auto& p : pb) {
      ys[iy++] = p.birth * c + p.death * s;
      const double mid = 0.5 * (p.birth + p.death);
      xs[ix++] = mid * (c + s);
    }
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    double w1 = 0.0;
    for (std::size_t i = 0; i < total; ++i) w1 += std::abs(xs[i] - ys[i]);
    sum += w1;
  }
  return sum / n_directions;
}

double lp_vector_distance(const SummaryVector& v1, const SummaryVector& v2, double p) {
  if (!v1.compatible_with(v2)) {
    throw ValidationError("summary vectors have different kinds, grids or lengths");
  }
  if (!(p >= 1.0)) throw ValidationError("vector distance needs p >= 1");
  double acc = 0.0;
  if (std::isinf(p)) {
    for (std::size_t i = 0; i < v1.values.size(); ++i)
      acc = std::max(acc, std::abs(v1.values[i] - v2.values[i]));
    return acc;
  }
  for (std::size_t i = 0; i < v1.values.size(); ++i) {
    const double diff = std::abs(v1.values[i] - v2.values[i]);
    acc += p == 1.0 ? diff : std::pow(diff, p);
  }
  return p == 1.0 ? acc : std::pow(acc, 1.0 / p);
}

const char* to_string(DistanceMethod method) {
  switch (method) {
    case DistanceMethod::wasserstein: return "w";
    case DistanceMethod::vab: return "vab";
    case DistanceMethod::landscape: return "pl";
    case DistanceMethod::image: return "pi";
    case DistanceMethod::sliced: return "sw";
  }
  return "?";
}

DistanceMethod parse_distance_method(const std::string& tag) {
  if (tag == "w") return DistanceMethod::wasserstein;
  if (tag == "vab") return DistanceMethod::vab;
  if (tag == "pl") return DistanceMethod::landscape;
  if (tag == "pi") return DistanceMethod::image;
  if (tag == "sw") return DistanceMethod::sliced;
  throw ValidationError("unknown distance method '" + tag + "' (expected w, vab, pl, pi, sw)");
}

void DistanceMatrix::validate() const {
  if (entries.size() != n * n) throw ValidationError("distance matrix has wrong entry count");
  for (std::size_t i = 0; i < n; ++i) {
    if ((*this)(i, i) != 0.0) throw ValidationError("distance matrix diagonal must be zero");
    for (std::size_t j = 0; j < n; ++j) {
      const double x = (*this)(i, j);
      if (std::isnan(x) || x < 0.0) {
        throw ValidationError("distance matrix entries must be nonnegative");
      }
      if (std::abs(x - (*this)(j, i)) > 1e-12) {
        throw ValidationError("distance matrix must be symmetric");
      }
    }
  }
}

namespace {

struct PooledRange {
  double lo = 0.0;
  double hi = 1.0;
};

PooledRange pooled_range(std::span<const PersistenceDiagram> diagrams) {
  double lo = 0.0;
  double hi = -kInfinity;
  double max_birth = -kInfinity;
  for (const auto& d : diagrams) {
    if (d.empty()) continue;
    lo = std::min(lo, d.min_birth());
    hi = std::max(hi, d.max_finite_death());
    max_birth = std::max(max_birth, d.max_birth());
  }
  if (!std::isfinite(hi)) hi = max_birth;
  if (!(hi > lo)) hi = lo + 1.0;
  return {lo, hi};
}

}  // namespace

std::pair<double, double> pooled_scale_range(std::span<const PersistenceDiagram> diagrams) {
  const PooledRange range = pooled_range(diagrams);
  return {range.lo, range.hi};
}

std::vector<SummaryVector> vectorize_all(std::span<const PersistenceDiagram> diagrams,
                                         const DistanceConfig& config) {
  const PooledRange range = pooled_range(diagrams);
  std::vector<SummaryVector> out(diagrams.size());

  switch (config.method) {
    case DistanceMethod::vab: {
      const auto grid = ScaleGrid::uniform(range.lo, range.hi, config.grid_size);
      const auto w = WeightFunction::constant();
      parallel_for(diagrams.size(), config.threads,
                   [&](std::size_t i) { out[i] = vab(diagrams[i], grid, w); });
      break;
    }
    case DistanceMethod::landscape: {
      const auto grid = ScaleGrid::uniform(range.lo, range.hi, config.grid_size);
      parallel_for(diagrams.size(), config.threads, [&](std::size_t i) {
        out[i] = landscape_vector(diagrams[i].truncated(range.hi), config.landscape_k, grid);
      });
      break;
    }
    case DistanceMethod::image: {
      std::vector<PersistenceDiagram> truncated;
      truncated.reserve(diagrams.size());
      double bmin = kInfinity;
      double bmax = -kInfinity;
      double pmax = 0.0;
      for (const auto& d : diagrams) {
        truncated.push_back(d.truncated(range.hi));
        if (d.empty()) continue;
        bmin = std::min(bmin, d.min_birth());
        bmax = std::max(bmax, d.max_birth());
        pmax = std::max(pmax, truncated.back().max_persistence());
      }
      if (!(pmax > 0.0)) pmax = 1.0;
      if (!std::isfinite(bmin)) bmin = bmax = 0.0;
      if (!(bmax > bmin)) {
        bmin -= 0.5 * pmax;
        bmax += 0.5 * pmax;
      }
      ImageConfig image{ScaleGrid::uniform(bmin, bmax, config.image_grid + 1),
                        ScaleGrid::uniform(0.0, pmax, config.image_grid + 1),
                        config.image_sigma.value_or(default_image_sigma(pmax, config.image_grid))};
      const auto w = WeightFunction::persistence(pmax);
      parallel_for(diagrams.size(), config.threads,
                   [&](std::size_t i) { out[i] = persistence_image(truncated[i], image, w); });
      break;
    }
    default:
      throw ValidationError(std::string("method '") + to_string(config.method) +
                            "' is not a vectorization");
  }
  return out;
}

DistanceMatrix distance_matrix(std::span<const PersistenceDiagram> diagrams,
                               const DistanceConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  for (const auto& d : diagrams) {
    if (d.hom_dimension() != diagrams.front().hom_dimension()) {
      throw ValidationError("distance matrix inputs must share one homological dimension");
    }
  }
  const std::size_t n = diagrams.size();
  DistanceMatrix m(n, config.method);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n > 0 ? n - 1 : 0) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  auto fill = [&](auto&& metric) {
    parallel_for(pairs.size(), config.threads, [&](std::size_t k) {
      const auto [i, j] = pairs[k];
      const double value = metric(i, j);
      m(i, j) = value;
      m(j, i) = value;
    });
  };

  switch (config.method) {
    case DistanceMethod::wasserstein: {
      m.params["p"] = to_string(config.wasserstein.p);
      m.params["q"] = format_double(config.wasserstein.q);
      fill([&](std::size_t i, std::size_t j) {
        return wasserstein(diagrams[i], diagrams[j], config.wasserstein);
      });
      break;
    }
    case DistanceMethod::sliced: {
      const PooledRange range = pooled_range(diagrams);
      std::vector<PersistenceDiagram> truncated;
      truncated.reserve(n);
      for (const auto& d : diagrams) truncated.push_back(d.truncated(range.hi));
      m.params["directions"] = std::to_string(config.directions);
      m.params["infinite_deaths"] = "truncated:" + format_double(range.hi);
      fill([&](std::size_t i, std::size_t j) {
        return sliced_wasserstein(truncated[i], truncated[j], config.directions);
      });
      break;
    }
    default: {
      const auto vectors = vectorize_all(diagrams, config);
      const PooledRange range = pooled_range(diagrams);
      m.params["vector_p"] = format_double(config.vector_p);
      m.params["range"] = format_double(range.lo) + ":" + format_double(range.hi);
      if (config.method == DistanceMethod::image) {
        m.params["image_grid"] = std::to_string(config.image_grid);
        m.params["infinite_deaths"] = "truncated";
        m.params["weight"] = "persistence";
      } else {
        m.params["grid_size"] = std::to_string(config.grid_size);
        m.params["infinite_deaths"] =
            config.method == DistanceMethod::vab ? "kept" : "truncated";
      }
      if (config.method == DistanceMethod::landscape) {
        m.params["k"] = std::to_string(config.landscape_k);
      }
      fill([&](std::size_t i, std::size_t j) {
        return lp_vector_distance(vectors[i], vectors[j], config.vector_p);
      });
      break;
    }
  }
  m.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return m;
}

void write_distance_matrix(std::ostream& out, const DistanceMatrix& matrix) {
  out << "# method=" << to_string(matrix.method) << " n=" << matrix.n;
  for (const auto& [key, value] : matrix.params) out << ' ' << key << '=' << value;
  out << '\n';
  for (std::size_t i = 0; i < matrix.n; ++i) {
    for (std::size_t j = 0; j < matrix.n; ++j) {
      if (j) out << ',';
      out << format_double(matrix(i, j));
    }
    out << '\n';
  }
}

DistanceMatrix load_distance_matrix(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  DistanceMethod method = DistanceMethod::wasserstein;
  std::map<std::string, std::string> params;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line.front() == '#') {
      std::istringstream header(line.substr(1));
      std::string token;
      while (header >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "method") {
          method = parse_distance_method(value);
        } else if (key != "n") {
          params[key] = value;
        }
      }
      continue;
    }
    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      const auto a = cell.find_first_not_of(" \t\r");
      const auto b = cell.find_last_not_of(" \t\r");
      double value = 0.0;
      if (a == std::string::npos) throw ParseError("line " + std::to_string(line_no) + ": empty cell");
      const auto [ptr, ec] = std::from_chars(cell.data() + a, cell.data() + b + 1, value);
      if (ec != std::errc() || ptr != cell.data() + b + 1) {
        throw ParseError("line " + std::to_string(line_no) + ": invalid number '" + cell + "'");
      }
      row.push_back(value);
    }
    rows.push_back(std::move(row));
  }
  DistanceMatrix m(rows.size(), method);
  m.params = std::move(params);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      throw ParseError("distance matrix must be square (row " + std::to_string(i + 1) + ")");
    }
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  m.validate();
  return m;
}

}  // namespace pdperm
