#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pdperm/diagram.hpp"
#include "pdperm/distances.hpp"
#include "pdperm/errors.hpp"
#include "pdperm/experiment.hpp"
#include "pdperm/filtration.hpp"
#include "pdperm/generators.hpp"
#include "pdperm/parallel.hpp"
#include "pdperm/permutation.hpp"
#include "pdperm/persistence.hpp"
#include "pdperm/summaries.hpp"

namespace {

using namespace pdperm;

struct Globals {
  std::uint64_t seed = 0;
  std::string output;
  unsigned threads = 1;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  return in;
}

void emit(const Globals& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.output, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file '" + g.output + "'");
  out << text;
}

PersistenceDiagram read_diagram(const std::string& path, int dim) {
  auto in = open_input(path);
  try {
    return select_dimension(load_diagrams(in), dim);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::vector<PersistenceDiagram> read_diagrams(const std::vector<std::string>& paths, int dim) {
  std::vector<PersistenceDiagram> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(read_diagram(p, dim));
  return out;
}

std::vector<int> parse_labels(const std::string& text) {
  std::string source = text;
  if (std::filesystem::is_regular_file(text)) {
    auto in = open_input(text);
    std::stringstream buffer;
    buffer << in.rdbuf();
    source = buffer.str();
  }
  std::vector<int> labels;
  std::string token;
  for (char c : source + ",") {
    if (c == ',' || c == '\n' || c == ' ' || c == '\t' || c == '\r') {
      if (!token.empty()) {
        if (token != "1" && token != "2") throw ParseError("labels must be 1 or 2, got '" + token + "'");
        labels.push_back(token == "1" ? 1 : 2);
        token.clear();
      }
    } else {
      token += c;
    }
  }
  return labels;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Persistence diagram distances, summaries and permutation tests"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--output,-o", g.output, "Output file (default: stdout)");
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")->capture_default_str();
  app.fallthrough();

  // ph
  auto* ph = app.add_subcommand("ph", "Point cloud CSV or graph JSON -> diagram CSV");
  std::string ph_input;
  int ph_max_dim = 1;
  std::optional<double> ph_threshold;
  std::size_t ph_cap = kDefaultSimplexCap;
  bool ph_no_fill = false;
  ph->add_option("input", ph_input, "Point cloud (.csv) or graph (.json)")->required();
  ph->add_option("--max-dim", ph_max_dim, "Largest homological dimension")->capture_default_str();
  ph->add_option("--threshold", ph_threshold, "Rips scale cut-off (default: enclosing radius)");
  ph->add_option("--simplex-cap", ph_cap, "Maximum number of simplices")->capture_default_str();
  ph->add_flag("--no-fill", ph_no_fill, "Do not add triangles to graph filtrations");

  // summarize
  auto* sm = app.add_subcommand("summarize", "Diagram CSVs -> summary vector CSV");
  std::vector<std::string> sm_inputs;
  int sm_dim = 0;
  std::string sm_kind = "vab";
  std::size_t sm_grid = 100;
  std::size_t sm_image_grid = 20;
  std::vector<double> sm_range;
  int sm_k = 1;
  std::optional<double> sm_sigma;
  sm->add_option("inputs", sm_inputs, "Diagram CSV files")->required();
  sm->add_option("--dim", sm_dim, "Homological dimension")->capture_default_str();
  sm->add_option("--kind", sm_kind, "vab, betti, landscape or image")->capture_default_str();
  sm->add_option("--grid-size", sm_grid, "Scale points of the 1D grid")->capture_default_str();
  sm->add_option("--image-grid", sm_image_grid, "Image cells per axis")->capture_default_str();
  sm->add_option("--range", sm_range, "lo,hi of the 1D grid")->delimiter(',')->expected(2);
  sm->add_option("--k", sm_k, "Landscape order")->capture_default_str();
  sm->add_option("--sigma", sm_sigma, "Image Gaussian sigma");

  // distmat
  auto* dm = app.add_subcommand("distmat", "Diagram CSVs -> distance matrix CSV");
  std::vector<std::string> dm_inputs;
  int dm_dim = 0;
  std::string dm_method = "w";
  std::string dm_p = "1";
  double dm_q = 1.0;
  int dm_directions = 10;
  std::size_t dm_grid = 100;
  std::size_t dm_image_grid = 20;
  int dm_k = 1;
  double dm_vector_p = 1.0;
  std::optional<double> dm_sigma;
  std::string dm_timing;
  dm->add_option("inputs", dm_inputs, "Diagram CSV files")->required();
  dm->add_option("--dim", dm_dim, "Homological dimension")->capture_default_str();
  dm->add_option("--method", dm_method, "w, vab, pl, pi or sw")->capture_default_str();
  dm->add_option("--p", dm_p, "Wasserstein ground norm: 1, 2 or inf")->capture_default_str();
  dm->add_option("--q", dm_q, "Wasserstein exponent")->capture_default_str();
  dm->add_option("--directions", dm_directions, "Sliced Wasserstein directions")->capture_default_str();
  dm->add_option("--grid-size", dm_grid, "Scale points of the 1D grid")->capture_default_str();
  dm->add_option("--image-grid", dm_image_grid, "Image cells per axis")->capture_default_str();
  dm->add_option("--k", dm_k, "Landscape order")->capture_default_str();
  dm->add_option("--vector-p", dm_vector_p, "p of the vector distance")->capture_default_str();
  dm->add_option("--sigma", dm_sigma, "Image Gaussian sigma");
  dm->add_option("--timing-json", dm_timing, "Write {method, n, median_seconds} here");

  // permtest
  auto* pt = app.add_subcommand("permtest", "Distance matrix + labels -> test result JSON");
  std::string pt_matrix;
  std::string pt_labels;
  std::size_t pt_perms = 1000;
  std::string pt_mixing = "standard";
  double pt_q = 1.0;
  bool pt_exhaustive = false;
  pt->add_option("--matrix", pt_matrix, "Distance matrix CSV")->required();
  pt->add_option("--labels", pt_labels, "Comma-separated 1/2 labels, or a file of them")->required();
  pt->add_option("--permutations", pt_perms, "Number of shuffles")->capture_default_str();
  pt->add_option("--mixing", pt_mixing, "standard or strong")->capture_default_str();
  pt->add_option("--q", pt_q, "Loss exponent")->capture_default_str();
  pt->add_flag("--exhaustive", pt_exhaustive, "Enumerate every labeling instead of sampling");

  // power
  auto* pw = app.add_subcommand("power", "Monte-Carlo power experiment -> CSV");
  std::string pw_config;
  pw->add_option("--config", pw_config, "Experiment JSON")->required();

  // bench
  auto* bn = app.add_subcommand("bench", "Distance-matrix run-time benchmark -> CSV");
  std::vector<std::size_t> bn_sizes{100};
  std::vector<std::size_t> bn_counts{10};
  std::vector<std::string> bn_methods{"w", "vab", "pl", "pi", "sw"};
  std::size_t bn_repeats = 3;
  bn->add_option("--sizes", bn_sizes, "Diagram sizes")->delimiter(',')->capture_default_str();
  bn->add_option("--counts", bn_counts, "Diagram counts")->delimiter(',')->capture_default_str();
  bn->add_option("--methods", bn_methods, "Methods")->delimiter(',')->capture_default_str();
  bn->add_option("--repeats", bn_repeats, "Repeats per cell (>= 3)")->capture_default_str();

  // generate
  auto* gn = app.add_subcommand("generate", "Synthetic point cloud, diagram or graph");
  std::string gn_kind = "circle";
  std::size_t gn_n = 50;
  double gn_r = 0.0;
  double gn_noise = 0.0;
  double gn_alpha = 1.0;
  double gn_beta = 1.0;
  std::vector<double> gn_dirichlet{1.5, 1.5, 1.5};
  int gn_dim = 0;
  gn->add_option("--kind", gn_kind, "circle, sphere, pd-process or rdpg")->capture_default_str();
  gn->add_option("--n", gn_n, "Points, diagram points or nodes")->capture_default_str();
  gn->add_option("--r", gn_r, "Shape compression")->capture_default_str();
  gn->add_option("--noise", gn_noise, "Gaussian noise sigma")->capture_default_str();
  gn->add_option("--alpha", gn_alpha, "Beta alpha of the persistence")->capture_default_str();
  gn->add_option("--beta", gn_beta, "Beta beta of the persistence")->capture_default_str();
  gn->add_option("--dirichlet", gn_dirichlet, "Dirichlet parameters")
      ->delimiter(',')
      ->expected(3)
      ->capture_default_str();
  gn->add_option("--dim", gn_dim, "Homological dimension tag of a generated diagram")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const unsigned threads = resolve_threads(g.threads);
    std::ostringstream out;

    if (*ph) {
      const bool graph_input = std::filesystem::path(ph_input).extension() == ".json";
      auto in = open_input(ph_input);
      Filtration f;
      if (graph_input) {
        f = build_lower_star(load_graph_json(in), !ph_no_fill);
      } else {
        const PointCloud cloud = load_point_cloud(in);
        if (ph_max_dim < 0 || ph_max_dim > 2) throw ValidationError("--max-dim must be in [0, 2] for Rips");
        RipsOptions options;
        options.max_dim = ph_max_dim + 1;
        options.threshold = ph_threshold;
        options.simplex_cap = ph_cap;
        f = build_rips(cloud, options);
      }
      if (ph_max_dim < 0) throw ValidationError("--max-dim must be nonnegative");
      const auto diagrams = compute_persistence(f, ph_max_dim);
      write_diagrams(out, diagrams);
    } else if (*sm) {
      const auto diagrams = read_diagrams(sm_inputs, sm_dim);
      const SummaryKind kind = parse_summary_kind(sm_kind);
      std::vector<SummaryVector> vectors;
      if (kind == SummaryKind::image) {
        DistanceConfig config;
        config.method = DistanceMethod::image;
        config.image_grid = sm_image_grid;
        config.image_sigma = sm_sigma;
        config.threads = threads;
        vectors = vectorize_all(diagrams, config);
      } else {
        auto [lo, hi] = pooled_scale_range(diagrams);
        if (!sm_range.empty()) {
          lo = sm_range[0];
          hi = sm_range[1];
        }
        const ScaleGrid grid = ScaleGrid::uniform(lo, hi, sm_grid);
        for (const auto& d : diagrams) {
          switch (kind) {
            case SummaryKind::vab: vectors.push_back(vab(d, grid)); break;
            case SummaryKind::betti_samples: vectors.push_back(betti_samples(d, grid)); break;
            default: vectors.push_back(landscape_vector(d.truncated(hi), sm_k, grid)); break;
          }
        }
      }
      write_summary_vectors(out, vectors);
    } else if (*dm) {
      const auto diagrams = read_diagrams(dm_inputs, dm_dim);
      DistanceConfig config;
      config.method = parse_distance_method(dm_method);
      config.wasserstein = {parse_norm(dm_p.c_str()), dm_q};
      config.directions = dm_directions;
      config.grid_size = dm_grid;
      config.image_grid = dm_image_grid;
      config.landscape_k = dm_k;
      config.vector_p = dm_vector_p;
      config.image_sigma = dm_sigma;
      config.threads = threads;
      const DistanceMatrix matrix = distance_matrix(diagrams, config);
      write_distance_matrix(out, matrix);
      if (!dm_timing.empty()) {
        std::ofstream timing(dm_timing);
        if (!timing) throw ValidationError("cannot open timing file '" + dm_timing + "'");
        write_timing_json(timing, dm_method, matrix.n, matrix.elapsed_seconds);
      }
    } else if (*pt) {
      auto in = open_input(pt_matrix);
      const DistanceMatrix matrix = load_distance_matrix(in);
      const GroupLabels labels(parse_labels(pt_labels));
      TestResult result;
      if (pt_exhaustive) {
        result = exhaustive_pvalue(matrix, labels, pt_q);
        result.seed = g.seed;
      } else {
        PermutationOptions options;
        options.n_permutations = pt_perms;
        options.mixing = parse_mixing(pt_mixing);
        options.q = pt_q;
        options.seed = g.seed;
        options.threads = threads;
        result = permutation_pvalue(matrix, labels, options);
      }
      write_test_result_json(out, result);
    } else if (*pw) {
      auto in = open_input(pw_config);
      ExperimentConfig cfg = parse_experiment_config(in);
      if (app.count("--seed") > 0) cfg.seed = g.seed;
      cfg.threads = threads;
      write_power_report(out, run_power_experiment(cfg));
    } else if (*bn) {
      std::vector<BenchmarkRow> rows;
      for (const auto& method : bn_methods) {
        DistanceConfig base;
        base.threads = threads;
        const DistanceMethod m = parse_distance_method(method);
        for (std::size_t count : bn_counts)
          for (std::size_t size : bn_sizes)
            rows.push_back(run_benchmark(count, size, m, bn_repeats, g.seed, base));
      }
      write_benchmark(out, rows);
    } else if (*gn) {
      if (gn_kind == "circle" || gn_kind == "sphere") {
        ShapeSpec spec{parse_shape(gn_kind), gn_r, gn_n, gn_noise, g.seed};
        write_point_cloud(out, sample_shape(spec));
      } else if (gn_kind == "pd-process") {
        const PersistenceDiagram d =
            generate_pd_process({gn_n, gn_alpha, gn_beta, gn_noise, g.seed, gn_dim});
        write_diagrams(out, std::span<const PersistenceDiagram>(&d, 1));
      } else if (gn_kind == "rdpg") {
        RdpgSpec spec;
        spec.n_nodes = gn_n;
        spec.dirichlet_alpha = {gn_dirichlet[0], gn_dirichlet[1], gn_dirichlet[2]};
        spec.node_noise_sigma = gn_noise;
        spec.seed = g.seed;
        write_graph_json(out, generate_rdpg(spec));
      } else {
        throw ValidationError("unknown --kind '" + gn_kind + "' (expected circle, sphere, pd-process, rdpg)");
      }
    }
    emit(g, out.str());
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
