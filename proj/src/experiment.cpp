#include "pdperm/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pdperm/errors.hpp"
#include "pdperm/generators.hpp"
#include "pdperm/parallel.hpp"
#include "pdperm/persistence.hpp"
#include "pdperm/random.hpp"

namespace pdperm {

const char* to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::circle_ellipse: return "circle-ellipse";
    case Experiment::sphere_ellipsoid: return "sphere-ellipsoid";
    case Experiment::pd_process: return "pd-process";
    case Experiment::rdpg: return "rdpg";
  }
  return "?";
}

Experiment parse_experiment(const std::string& text) {
  if (text == "circle-ellipse") return Experiment::circle_ellipse;
  if (text == "sphere-ellipsoid") return Experiment::sphere_ellipsoid;
  if (text == "pd-process") return Experiment::pd_process;
  if (text == "rdpg") return Experiment::rdpg;
  throw ValidationError("unknown experiment '" + text +
                        "' (expected circle-ellipse, sphere-ellipsoid, pd-process, rdpg)");
}

std::size_t ExperimentConfig::points_per_item() const {
  if (n_points > 0) return n_points;
  switch (experiment) {
    case Experiment::circle_ellipse: return 50;
    case Experiment::sphere_ellipsoid: return 60;
    case Experiment::pd_process: return 50;
    case Experiment::rdpg: return 100;
  }
  return 50;
}

void ExperimentConfig::validate() const {
  if (levels.empty()) throw ValidationError("levels must be nonempty");
  if (reps == 0) throw ValidationError("reps must be at least 1");
  if (n_perms == 0) throw ValidationError("n_perms must be at least 1");
  if (group_size < 2) throw ValidationError("group_size must be at least 2");
  if (methods.empty()) throw ValidationError("at least one method is required");
  if (mixings.empty()) throw ValidationError("at least one mixing is required");
  if (hom_dim < 0) throw ValidationError("hom_dim must be nonnegative");
  if (!(noise_sigma >= 0.0)) throw ValidationError("noise_sigma must be nonnegative");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must be in (0, 1)");
  for (double level : levels) {
    if (!std::isfinite(level)) throw ValidationError("levels must be finite");
    switch (experiment) {
      case Experiment::circle_ellipse:
      case Experiment::sphere_ellipsoid:
        if (!(level >= 0.0 && level < 1.0)) throw ValidationError("shape levels must be in [0, 1)");
        break;
      case Experiment::pd_process:
        if (!(level > 0.0)) throw ValidationError("pd-process levels must be positive");
        break;
      case Experiment::rdpg:
        if (!(level > -1.5)) throw ValidationError("rdpg levels must exceed -1.5");
        break;
    }
  }
  if ((experiment == Experiment::circle_ellipse || experiment == Experiment::sphere_ellipsoid) &&
      hom_dim > 2) {
    throw ValidationError("Rips experiments support hom_dim <= 2");
  }
}

ExperimentConfig parse_experiment_config(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config JSON must be an object");
  static const std::set<std::string> known = {
      "experiment", "levels",   "reps",       "group_size", "method",     "methods",
      "mixing",     "n_perms",  "hom_dim",    "n_points",   "noise_sigma", "rips_threshold",
      "grid_size",  "image_grid", "p",        "q",          "directions", "loss_q",
      "alpha",      "seed"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ValidationError("unknown config key '" + key + "'");
  }

  ExperimentConfig cfg;
  try {
    if (!j.contains("experiment")) throw ValidationError("config needs an 'experiment' key");
    cfg.experiment = parse_experiment(j.at("experiment").get<std::string>());
    if (j.contains("levels")) cfg.levels = j.at("levels").get<std::vector<double>>();
    if (j.contains("reps")) cfg.reps = j.at("reps").get<std::size_t>();
    if (j.contains("group_size")) cfg.group_size = j.at("group_size").get<std::size_t>();
    if (j.contains("method") && j.contains("methods")) {
      throw ValidationError("give either 'method' or 'methods', not both");
    }
    if (j.contains("method")) {
      cfg.methods = {parse_distance_method(j.at("method").get<std::string>())};
    }
    if (j.contains("methods")) {
      cfg.methods.clear();
      for (const auto& m : j.at("methods")) cfg.methods.push_back(parse_distance_method(m.get<std::string>()));
    }
    if (j.contains("mixing")) {
      const auto mixing = j.at("mixing").get<std::string>();
      if (mixing == "both") {
        cfg.mixings = {Mixing::standard, Mixing::strong};
      } else {
        cfg.mixings = {parse_mixing(mixing)};
      }
    }
    if (j.contains("n_perms")) cfg.n_perms = j.at("n_perms").get<std::size_t>();
    if (j.contains("hom_dim")) cfg.hom_dim = j.at("hom_dim").get<int>();
    if (j.contains("n_points")) cfg.n_points = j.at("n_points").get<std::size_t>();
    if (j.contains("noise_sigma")) cfg.noise_sigma = j.at("noise_sigma").get<double>();
    if (j.contains("rips_threshold")) cfg.rips_threshold = j.at("rips_threshold").get<double>();
    if (j.contains("grid_size")) cfg.distance.grid_size = j.at("grid_size").get<std::size_t>();
    if (j.contains("image_grid")) cfg.distance.image_grid = j.at("image_grid").get<std::size_t>();
    if (j.contains("p")) {
      const auto& p = j.at("p");
      cfg.distance.wasserstein.p =
          parse_norm(p.is_string() ? p.get<std::string>().c_str() : std::to_string(p.get<int>()).c_str());
    }
    if (j.contains("q")) cfg.distance.wasserstein.q = j.at("q").get<double>();
    if (j.contains("directions")) cfg.distance.directions = j.at("directions").get<int>();
    if (j.contains("loss_q")) cfg.loss_q = j.at("loss_q").get<double>();
    if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config JSON: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

const PowerRow& PowerReport::find(DistanceMethod method, Mixing mixing, double level) const {
  for (const auto& row : rows) {
    if (row.method == to_string(method) && row.mixing == to_string(mixing) && row.level == level) {
      return row;
    }
  }
  throw ValidationError("power report has no row for the requested method, mixing and level");
}

std::uint64_t item_seed(std::uint64_t seed, std::size_t rep, std::size_t item) {
  return make_rng(seed, 1, rep, item)();
}

std::uint64_t permutation_seed(std::uint64_t seed, std::size_t rep) {
  return make_rng(seed, 2, rep)();
}

PersistenceDiagram experiment_diagram(const ExperimentConfig& cfg, int group, double level,
                                      std::uint64_t seed) {
  const double effective = group == 1 ? (cfg.experiment == Experiment::pd_process ? 1.0 : 0.0)
                                      : level;
  const std::size_t n = cfg.points_per_item();
  switch (cfg.experiment) {
    case Experiment::circle_ellipse:
    case Experiment::sphere_ellipsoid: {
      const Shape shape = cfg.experiment == Experiment::circle_ellipse ? Shape::circle_ellipse
                                                                       : Shape::sphere_ellipsoid;
      const auto cloud = sample_shape({shape, effective, n, cfg.noise_sigma, seed});
      RipsOptions options;
      options.max_dim = std::min(cfg.hom_dim + 1, 3);
      options.threshold = cfg.rips_threshold;
      return select_dimension(compute_persistence(build_rips(cloud, options), cfg.hom_dim),
                              cfg.hom_dim);
    }
    case Experiment::pd_process:
      return generate_pd_process({n, 1.0, effective, cfg.noise_sigma, seed, cfg.hom_dim});
    case Experiment::rdpg: {
      RdpgSpec spec;
      spec.n_nodes = n;
      spec.dirichlet_alpha = {1.5, 1.5, 1.5 + effective};
      spec.node_noise_sigma = cfg.noise_sigma;
      spec.seed = seed;
      const Graph graph = generate_rdpg(spec);
      return select_dimension(compute_persistence(build_lower_star(graph, true), cfg.hom_dim),
                              cfg.hom_dim);
    }
  }
  throw ValidationError("unknown experiment");
}

PowerReport run_power_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t g = cfg.group_size;
  const std::size_t n_levels = cfg.levels.size();
  const std::size_t n_methods = cfg.methods.size();
  const std::size_t n_mixings = cfg.mixings.size();
  const std::size_t cells = n_levels * n_methods * n_mixings;
  auto cell = [&](std::size_t l, std::size_t m, std::size_t x) {
    return (l * n_methods + m) * n_mixings + x;
  };
  const GroupLabels labels = GroupLabels::contiguous(g, g);

  // rejected[rep * cells + cell]
  std::vector<char> rejected(cfg.reps * cells, 0);
  parallel_for(cfg.reps, resolve_threads(cfg.threads), [&](std::size_t rep) {
    try {
      std::vector<PersistenceDiagram> diagrams(2 * g);
      for (std::size_t item = 0; item < g; ++item) {
        diagrams[item] = experiment_diagram(cfg, 1, 0.0, item_seed(cfg.seed, rep, item));
      }
      const std::uint64_t perm_seed = permutation_seed(cfg.seed, rep);
      for (std::size_t l = 0; l < n_levels; ++l) {
        for (std::size_t item = g; item < 2 * g; ++item) {
          diagrams[item] =
              experiment_diagram(cfg, 2, cfg.levels[l], item_seed(cfg.seed, rep, item));
        }
        for (std::size_t m = 0; m < n_methods; ++m) {
          DistanceConfig dc = cfg.distance;
          dc.method = cfg.methods[m];
          dc.threads = 1;
          const DistanceMatrix matrix = distance_matrix(diagrams, dc);
          for (std::size_t x = 0; x < n_mixings; ++x) {
            PermutationOptions po;
            po.n_permutations = cfg.n_perms;
            po.mixing = cfg.mixings[x];
            po.q = cfg.loss_q;
            po.seed = perm_seed;
            const TestResult result = permutation_pvalue(matrix, labels, po);
            rejected[rep * cells + cell(l, m, x)] = result.p_value < cfg.alpha ? 1 : 0;
          }
        }
      }
    } catch (const ResourceError& e) {
      throw ResourceError("repetition " + std::to_string(rep) + ": " + e.what());
    }
  });

  PowerReport report;
  for (std::size_t l = 0; l < n_levels; ++l) {
    for (std::size_t m = 0; m < n_methods; ++m) {
      for (std::size_t x = 0; x < n_mixings; ++x) {
        std::size_t count = 0;
        for (std::size_t rep = 0; rep < cfg.reps; ++rep) count += rejected[rep * cells + cell(l, m, x)];
        report.rows.push_back({to_string(cfg.experiment), to_string(cfg.methods[m]),
                               to_string(cfg.mixings[x]), cfg.levels[l],
                               static_cast<double>(count) / static_cast<double>(cfg.reps), cfg.reps,
                               cfg.seed});
      }
    }
  }
  return report;
}

void write_power_report(std::ostream& out, const PowerReport& report) {
  out << "experiment,method,mixing,level,power,reps,seed\n";
  for (const auto& row : report.rows) {
    out << row.experiment << ',' << row.method << ',' << row.mixing << ','
        << format_double(row.level) << ',' << format_double(row.power) << ',' << row.reps << ','
        << row.seed << '\n';
  }
}

namespace {

class Fnv1a {
 public:
  void add(double x) {
    const std::string text = format_double(x);
    for (unsigned char c : text) {
      hash_ ^= c;
      hash_ *= 0x100000001b3ULL;
    }
    hash_ ^= ',';
    hash_ *= 0x100000001b3ULL;
  }
  std::string hex() const {
    std::ostringstream s;
    s << std::hex;
    s.width(16);
    s.fill('0');
    s << hash_;
    return s.str();
  }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

BenchmarkRow run_benchmark(std::size_t n_diagrams, std::size_t diagram_size,
                           DistanceMethod method, std::size_t repeats, std::uint64_t seed,
                           const DistanceConfig& base) {
  if (repeats < 3) throw ValidationError("benchmark needs at least 3 repeats for a median");
  if (n_diagrams == 0 || diagram_size == 0) {
    throw ValidationError("benchmark needs positive diagram count and size");
  }
  DistanceConfig config = base;
  config.method = method;
  std::vector<double> seconds;
  Fnv1a hash;
  for (std::size_t r = 0; r < repeats; ++r) {
    std::vector<PersistenceDiagram> diagrams;
    diagrams.reserve(n_diagrams);
    for (std::size_t i = 0; i < n_diagrams; ++i) {
      PdProcessSpec spec;
      spec.n_points = diagram_size;
      spec.seed = make_rng(seed, n_diagrams * 1'000'003ULL + diagram_size, r, i)();
      diagrams.push_back(generate_pd_process(spec));
    }
    const DistanceMatrix m = distance_matrix(diagrams, config);
    seconds.push_back(m.elapsed_seconds);
    for (double x : m.entries) hash.add(x);
  }
  std::sort(seconds.begin(), seconds.end());
  const std::size_t mid = seconds.size() / 2;
  const double median =
      seconds.size() % 2 ? seconds[mid] : 0.5 * (seconds[mid - 1] + seconds[mid]);
  return {to_string(method), n_diagrams, diagram_size, repeats, median, hash.hex()};
}

void write_benchmark(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
  out << "method,n_diagrams,diagram_size,repeats,median_seconds,checksum\n";
  for (const auto& row : rows) {
    out << row.method << ',' << row.n_diagrams << ',' << row.diagram_size << ',' << row.repeats
        << ',' << format_double(row.median_seconds) << ',' << row.checksum << '\n';
  }
}

void write_timing_json(std::ostream& out, const std::string& method, std::size_t n,
                       double median_seconds) {
  nlohmann::ordered_json j;
  j["method"] = method;
  j["n"] = n;
  j["median_seconds"] = median_seconds;
  out << j.dump(2) << '\n';
}

}  // namespace pdperm
