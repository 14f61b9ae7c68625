#include "pdperm/summaries.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "pdperm/errors.hpp"

namespace pdperm {

WeightFunction WeightFunction::constant(double c) {
  return {[c](double, double) { return c; }, std::abs(c), 0.0};
}

WeightFunction WeightFunction::persistence(double max_persistence) {
  return {[](double b, double d) { return d - b; }, max_persistence, std::sqrt(2.0)};
}

WeightFunction WeightFunction::sinusoidal(double amplitude) {
  return {[amplitude](double b, double d) { return 1.0 + amplitude * std::sin(b) * std::cos(d); },
          1.0 + std::abs(amplitude), std::abs(amplitude)};
}

ScaleGrid::ScaleGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw ValidationError("scale grid needs at least two points");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw ValidationError("scale grid values must be finite");
    if (i > 0 && !(values_[i] > values_[i - 1])) {
      throw ValidationError("scale grid must be strictly increasing");
    }
  }
  dt_ = values_[1] - values_[0];
  uniform_ = true;
  for (std::size_t i = 1; i + 1 < values_.size(); ++i) {
    if (std::abs((values_[i + 1] - values_[i]) - dt_) > 1e-12) {
      uniform_ = false;
      break;
    }
  }
}

ScaleGrid ScaleGrid::uniform(double lo, double hi, std::size_t n) {
  if (n < 2) throw ValidationError("scale grid needs at least two points");
  if (!(hi > lo)) throw ValidationError("scale grid range must satisfy lo < hi");
  std::vector<double> v(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + step * static_cast<double>(i);
  v.back() = hi;
  return ScaleGrid(std::move(v));
}

const char* to_string(SummaryKind kind) {
  switch (kind) {
    case SummaryKind::vab: return "vab";
    case SummaryKind::betti_samples: return "betti";
    case SummaryKind::landscape: return "landscape";
    case SummaryKind::image: return "image";
  }
  return "?";
}

SummaryKind parse_summary_kind(const std::string& text) {
  if (text == "vab") return SummaryKind::vab;
  if (text == "betti" || text == "betti-samples") return SummaryKind::betti_samples;
  if (text == "landscape" || text == "pl") return SummaryKind::landscape;
  if (text == "image" || text == "pi") return SummaryKind::image;
  throw ValidationError("unknown summary kind '" + text + "'");
}

double default_image_sigma(double max_persistence, std::size_t grid_size) {
  if (grid_size == 0) throw ValidationError("image grid size must be positive");
  return 0.5 * max_persistence / static_cast<double>(grid_size);
}

double betti_eval(const PersistenceDiagram& diagram, const WeightFunction& w, double t) {
  double total = 0.0;
  for (const auto& p : diagram.points()) {
    if (p.birth <= t && t < p.death) total += w(p.birth, p.death);
  }
  return total;
}

SummaryVector vab(const PersistenceDiagram& diagram, const ScaleGrid& grid,
                  const WeightFunction& w) {
  const auto t = grid.values();
  const std::size_t cells = grid.cell_count();
  std::vector<double> integral(cells, 0.0);
  // Weight density of cells fully covered by an interval, as a difference array.
  std::vector<double> full(cells + 1, 0.0);

  for (const auto& p : diagram.points()) {
    const double lo = std::max(p.birth, t.front());
    const double hi = std::min(p.death, t.back());
    if (!(lo < hi)) continue;
    const double c = w(p.birth, p.death);
    // first cell with t_{i+1} > lo, last cell with t_i < hi
    const std::size_t i0 =
        static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), lo) - t.begin()) - 1;
    const std::size_t i1 =
        static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), hi) - t.begin()) - 1;
    if (i0 == i1) {
      integral[i0] += c * (hi - lo);
      continue;
    }
    integral[i0] += c * (t[i0 + 1] - lo);
    integral[i1] += c * (hi - t[i1]);
    full[i0 + 1] += c;
    full[i1] -= c;
  }

  SummaryVector out{std::vector<double>(cells), SummaryKind::vab,
                    std::vector<double>(t.begin(), t.end()), {}};
  double density = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    density += full[i];
    const double width = grid.cell_width(i);
    out.values[i] = density + integral[i] / width;
  }
  return out;
}

SummaryVector betti_samples(const PersistenceDiagram& diagram, const ScaleGrid& grid,
                            const WeightFunction& w) {
  const auto t = grid.values();
  std::vector<double> diff(t.size() + 1, 0.0);
  for (const auto& p : diagram.points()) {
    // grid indices with b <= t_i < d
    const auto first = std::lower_bound(t.begin(), t.end(), p.birth) - t.begin();
    const auto last = std::lower_bound(t.begin(), t.end(), p.death) - t.begin();
    if (first >= last) continue;
    const double c = w(p.birth, p.death);
    diff[static_cast<std::size_t>(first)] += c;
    diff[static_cast<std::size_t>(last)] -= c;
  }
  SummaryVector out{std::vector<double>(t.size()), SummaryKind::betti_samples,
                    std::vector<double>(t.begin(), t.end()), {}};
  double running = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    running += diff[i];
    out.values[i] = running;
  }
  return out;
}

SummaryVector landscape_vector(const PersistenceDiagram& diagram, int k, const ScaleGrid& grid) {
  if (k < 1) throw ValidationError("landscape order k must be at least 1");
  if (!diagram.all_finite()) {
    throw ValidationError("landscape needs finite deaths; truncate or drop infinite points");
  }
  const auto t = grid.values();
  const auto kk = static_cast<std::size_t>(k);
  SummaryVector out{std::vector<double>(t.size(), 0.0), SummaryKind::landscape,
                    std::vector<double>(t.begin(), t.end()), {}};
  if (diagram.size() < kk) return out;

  std::vector<double> tents(diagram.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::size_t positive = 0;
    for (const auto& p : diagram.points()) {
      const double tent = std::max(0.0, std::min(t[i] - p.birth, p.death - t[i]));
      if (tent > 0.0) tents[positive++] = tent;
    }
    if (positive < kk) continue;
    std::nth_element(tents.begin(), tents.begin() + static_cast<std::ptrdiff_t>(kk - 1),
                     tents.begin() + static_cast<std::ptrdiff_t>(positive), std::greater<>());
    out.values[i] = tents[kk - 1];
  }
  return out;
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Gaussian mass of N(mean, sigma^2) in each cell of the grid.
void cell_masses(std::span<const double> edges, double mean, double sigma,
                 std::vector<double>& out) {
  out.resize(edges.size() - 1);
  double prev = normal_cdf((edges[0] - mean) / sigma);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double next = normal_cdf((edges[i + 1] - mean) / sigma);
    out[i] = next - prev;
    prev = next;
  }
}

}  // namespace

SummaryVector persistence_image(const PersistenceDiagram& diagram, const ImageConfig& config,
                                const WeightFunction& w) {
  if (!(config.sigma > 0.0) || !std::isfinite(config.sigma)) {
    throw ValidationError("persistence image sigma must be positive");
  }
  if (!diagram.all_finite()) {
    throw ValidationError("persistence image needs finite deaths; truncate or drop infinite points");
  }
  const auto xs = config.birth_grid.values();
  const auto ys = config.persistence_grid.values();
  const std::size_t nx = xs.size() - 1;
  const std::size_t ny = ys.size() - 1;
  SummaryVector out{std::vector<double>(nx * ny, 0.0), SummaryKind::image,
                    std::vector<double>(xs.begin(), xs.end()),
                    std::vector<double>(ys.begin(), ys.end())};

  std::vector<double> mx;
  std::vector<double> my;
  for (const auto& p : diagram.points()) {
    const double weight = w(p.birth, p.death);
    if (weight == 0.0) continue;
    cell_masses(xs, p.birth, config.sigma, mx);
    cell_masses(ys, p.persistence(), config.sigma, my);
    for (std::size_t j = 0; j < ny; ++j) {
      const double row = weight * my[j];
      if (row == 0.0) continue;
      for (std::size_t i = 0; i < nx; ++i) out.values[j * nx + i] += row * mx[i];
    }
  }
  for (std::size_t j = 0; j < ny; ++j) {
    const double hy = config.persistence_grid.cell_width(j);
    for (std::size_t i = 0; i < nx; ++i) {
      out.values[j * nx + i] /= hy * config.birth_grid.cell_width(i);
    }
  }
  return out;
}

double betti_l1_distance(const PersistenceDiagram& a, const PersistenceDiagram& b,
                         const WeightFunction& w) {
  struct Event {
    double at;
    double delta;
  };
  std::vector<Event> events;
  events.reserve(2 * (a.size() + b.size()));
  double tail = 0.0;
  auto add = [&](const PersistenceDiagram& d, double sign) {
    for (const auto& p : d.points()) {
      if (p.birth == p.death) continue;
      const double c = sign * w(p.birth, p.death);
      events.push_back({p.birth, c});
      if (p.is_finite()) {
        events.push_back({p.death, -c});
      } else {
        tail += c;
      }
    }
  };
  add(a, 1.0);
  add(b, -1.0);
  if (std::abs(tail) > 1e-12) return kInfinity;

  std::sort(events.begin(), events.end(), [](const Event& x, const Event& y) { return x.at < y.at; });
  double total = 0.0;
  double level = 0.0;
  for (std::size_t i = 0; i < events.size();) {
    const double at = events[i].at;
    while (i < events.size() && events[i].at == at) level += events[i++].delta;
    if (i < events.size()) total += std::abs(level) * (events[i].at - at);
  }
  return total;
}

void write_summary_vectors(std::ostream& out, std::span<const SummaryVector> vectors) {
  if (vectors.empty()) return;
  const auto& first = vectors.front();
  for (const auto& v : vectors) {
    if (!v.compatible_with(first)) {
      throw ValidationError("summary vectors in one file must share kind and grid");
    }
  }
  auto join = [](const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) s += ';';
      s += format_double(xs[i]);
    }
    return s;
  };
  out << "# kind=" << to_string(first.kind) << " length=" << first.values.size()
      << " grid=" << join(first.grid);
  if (!first.grid_y.empty()) out << " grid_y=" << join(first.grid_y);
  out << '\n';
  for (const auto& v : vectors) {
    for (std::size_t i = 0; i < v.values.size(); ++i) {
      if (i) out << ',';
      out << format_double(v.values[i]);
    }
    out << '\n';
  }
}

}  // namespace pdperm
