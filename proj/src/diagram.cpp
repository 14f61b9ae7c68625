#include "pdperm/diagram.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>

#include "pdperm/errors.hpp"
#include "pdperm/random.hpp"

namespace pdperm {

namespace {

void validate_point(const DiagramPoint& p) {
  if (!std::isfinite(p.birth)) throw ValidationError("diagram point has non-finite birth");
  if (std::isnan(p.death)) throw ValidationError("diagram point has NaN death");
  if (p.birth > p.death) {
    throw ValidationError("diagram point has birth " + format_double(p.birth) +
                          " greater than death " + format_double(p.death));
  }
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view row) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto comma = row.find(',');
    fields.push_back(trim(row.substr(0, comma)));
    if (comma == std::string_view::npos) return fields;
    row.remove_prefix(comma + 1);
  }
}

bool is_infinity_literal(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.size() != 3 && s.size() != 8) return false;
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return lower == "inf" || lower == "infinity";
}

bool parse_real(std::string_view s, double& out) {
  if (is_infinity_literal(s)) {
    out = kInfinity;
    return true;
  }
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

}  // namespace

const char* to_string(Norm norm) {
  switch (norm) {
    case Norm::l1: return "1";
    case Norm::l2: return "2";
    case Norm::linf: return "inf";
  }
  return "?";
}

Norm parse_norm(const char* text) {
  const std::string s = text;
  if (s == "1") return Norm::l1;
  if (s == "2") return Norm::l2;
  if (s == "inf" || s == "Inf" || s == "infinity") return Norm::linf;
  throw ValidationError("norm must be one of 1, 2, inf (got '" + s + "')");
}

double diagonal_projection(const DiagramPoint& point, Norm norm) {
  if (!point.is_finite()) {
    throw ValidationError("diagonal projection is undefined for an infinite-death point");
  }
  const double pers = point.death - point.birth;
  switch (norm) {
    case Norm::l1: return pers;
    case Norm::l2: return pers / std::sqrt(2.0);
    case Norm::linf: return pers / 2.0;
  }
  return pers;
}

double point_distance(const DiagramPoint& u, const DiagramPoint& v, Norm norm) {
  const double db = std::abs(u.birth - v.birth);
  const double dd = std::abs(u.death - v.death);
  switch (norm) {
    case Norm::l1: return db + dd;
    case Norm::l2: return std::hypot(db, dd);
    case Norm::linf: return std::max(db, dd);
  }
  return db + dd;
}

DiagramPoint clamp_above_diagonal(double birth, double death) {
  if (birth > death) return {birth, birth};
  return {birth, death};
}

PersistenceDiagram::PersistenceDiagram(int hom_dimension, std::vector<DiagramPoint> points)
    : hom_dimension_(hom_dimension), points_(std::move(points)) {
  if (hom_dimension_ < 0) throw ValidationError("homological dimension must be nonnegative");
  for (const auto& p : points_) validate_point(p);
}

std::size_t PersistenceDiagram::infinite_count() const {
  return static_cast<std::size_t>(
      std::count_if(points_.begin(), points_.end(), [](const auto& p) { return !p.is_finite(); }));
}

double PersistenceDiagram::max_finite_death() const {
  double m = -kInfinity;
  for (const auto& p : points_)
    if (p.is_finite()) m = std::max(m, p.death);
  return m;
}

double PersistenceDiagram::min_birth() const {
  double m = kInfinity;
  for (const auto& p : points_) m = std::min(m, p.birth);
  return m;
}

double PersistenceDiagram::max_birth() const {
  double m = -kInfinity;
  for (const auto& p : points_) m = std::max(m, p.birth);
  return m;
}

double PersistenceDiagram::max_persistence() const {
  double m = 0.0;
  for (const auto& p : points_)
    if (p.is_finite()) m = std::max(m, p.persistence());
  return m;
}

PersistenceDiagram PersistenceDiagram::finite_part() const {
  std::vector<DiagramPoint> kept;
  kept.reserve(points_.size());
  for (const auto& p : points_)
    if (p.is_finite()) kept.push_back(p);
  return PersistenceDiagram(hom_dimension_, std::move(kept));
}

PersistenceDiagram PersistenceDiagram::truncated(double cap) const {
  std::vector<DiagramPoint> out(points_.begin(), points_.end());
  for (auto& p : out)
    if (!p.is_finite()) p.death = std::max(cap, p.birth);
  return PersistenceDiagram(hom_dimension_, std::move(out));
}

bool PersistenceDiagram::same_multiset(const PersistenceDiagram& other) const {
  if (points_.size() != other.points_.size()) return false;
  auto key = [](const DiagramPoint& a, const DiagramPoint& b) {
    return a.birth != b.birth ? a.birth < b.birth : a.death < b.death;
  };
  auto lhs = points_;
  auto rhs = other.points_;
  std::sort(lhs.begin(), lhs.end(), key);
  std::sort(rhs.begin(), rhs.end(), key);
  return lhs == rhs;
}

PersistenceDiagram perturb_diagram(const PersistenceDiagram& diagram, const NoiseSpec& noise) {
  if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma)) {
    throw ValidationError("noise sigma must be a finite nonnegative number");
  }
  if (noise.sigma == 0.0) return diagram;

  Rng rng = make_rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, noise.sigma);
  std::vector<DiagramPoint> out;
  out.reserve(diagram.size());
  for (const auto& p : diagram.points()) {
    if (!p.is_finite()) {
      out.push_back(p);
      continue;
    }
    const double b = p.birth + gauss(rng);
    const double d = p.death + gauss(rng);
    out.push_back(clamp_above_diagonal(b, d));
  }
  return PersistenceDiagram(diagram.hom_dimension(), std::move(out));
}

std::vector<PersistenceDiagram> load_diagrams(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::map<int, std::vector<DiagramPoint>> by_dim;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    if (!header_seen) {
      std::string compact;
      for (char c : row)
        if (c != ' ' && c != '\t') compact.push_back(c);
      if (compact != "dimension,birth,death") {
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected header 'dimension,birth,death'");
      }
      header_seen = true;
      continue;
    }

    const std::vector<std::string_view> fields = split_fields(row);
    if (fields.size() != 3) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 3 fields, got " +
                       std::to_string(fields.size()));
    }

    int dim = 0;
    const auto [dptr, dec] =
        std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), dim);
    if (dec != std::errc() || dptr != fields[0].data() + fields[0].size() || fields[0].empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": invalid dimension '" +
                       std::string(fields[0]) + "'");
    }
    if (dim < 0) {
      throw ValidationError("line " + std::to_string(line_no) + ": negative dimension");
    }
    DiagramPoint p;
    if (!parse_real(fields[1], p.birth)) {
      throw ParseError("line " + std::to_string(line_no) + ": invalid birth '" +
                       std::string(fields[1]) + "'");
    }
    if (!parse_real(fields[2], p.death)) {
      throw ParseError("line " + std::to_string(line_no) + ": invalid death '" +
                       std::string(fields[2]) + "'");
    }
    try {
      validate_point(p);
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
    by_dim[dim].push_back(p);
  }
  if (!header_seen) throw ParseError("line 1: missing header 'dimension,birth,death'");

  std::vector<PersistenceDiagram> result;
  for (auto& [dim, pts] : by_dim) result.emplace_back(dim, std::move(pts));
  return result;
}

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_diagrams(std::ostream& out, std::span<const PersistenceDiagram> diagrams) {
  out << "dimension,birth,death\n";
  for (const auto& d : diagrams) {
    for (const auto& p : d.points()) {
      out << d.hom_dimension() << ',' << format_double(p.birth) << ',' << format_double(p.death)
          << '\n';
    }
  }
}

PersistenceDiagram select_dimension(std::span<const PersistenceDiagram> diagrams, int dim) {
  for (const auto& d : diagrams)
    if (d.hom_dimension() == dim) return d;
  return PersistenceDiagram(dim);
}

}  // namespace pdperm
