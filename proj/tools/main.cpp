// corrmine command line: data/model generation, screening, CONCORD fits,
// design curves, Monte Carlo phase experiments, and regime tables.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "corrmine/ball_graph.hpp"
#include "corrmine/concord.hpp"
#include "corrmine/generators.hpp"
#include "corrmine/io.hpp"
#include "corrmine/regimes.hpp"
#include "corrmine/rng.hpp"
#include "corrmine/sample_stats.hpp"
#include "corrmine/screening.hpp"
#include "corrmine/version.hpp"

namespace fs = std::filesystem;
using namespace corrmine;

namespace {

struct Common {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--seed", common.seed, "RNG seed (recorded in the manifest)");
  cmd->add_option("--threads", common.threads,
                  "worker threads; <= 0 uses all cores; results do not depend on it");
  cmd->add_option("--out", common.out, "output directory")->required();
  cmd->add_option("--format", common.format, "table output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

/// Ordered key=value pairs describing a run; hashed into the manifest.
struct ConfigRecorder {
  std::vector<std::pair<std::string, std::string>> entries;

  void add(const std::string& key, const std::string& value) {
    entries.emplace_back(key, value);
  }
  void add(const std::string& key, double value) { add(key, format_double_17(value)); }
  void add(const std::string& key, long long value) { add(key, std::to_string(value)); }
  void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }
  void add(const std::string& key, int value) { add(key, std::to_string(value)); }
  void add(const std::string& key, Index value) {
    add(key, static_cast<long long>(value));
  }
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : s) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t v) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(v));
  return buffer;
}

/// The manifest intentionally omits --threads: identical configs must yield
/// byte-identical outputs for any worker count.
void write_manifest(const Common& common, const std::string& command,
                    const ConfigRecorder& config, std::vector<std::string> outputs,
                    Json constants) {
  std::string canonical = command + "\n";
  Json config_json = Json::object();
  for (const auto& [key, value] : config.entries) {
    canonical += key + "=" + value + "\n";
    config_json.set(key, Json::str(value));
  }

  Json manifest = Json::object();
  manifest.set("command", Json::str(command));
  manifest.set("version", Json::str(kVersion));
  manifest.set("seed", Json::integer(static_cast<long long>(common.seed)));
  manifest.set("format", Json::str(common.format));
  manifest.set("config", std::move(config_json));
  manifest.set("config_hash", Json::str(hex64(fnv1a(canonical))));
  manifest.set("constants", std::move(constants));
  std::sort(outputs.begin(), outputs.end());
  Json files = Json::array();
  for (const auto& f : outputs) files.push(Json::str(f));
  manifest.set("outputs", std::move(files));

  write_text_file((fs::path(common.out) / "manifest.json").string(), manifest.dump());
}

std::string table_extension(const Common& common) {
  return common.format == "json" ? ".json" : ".csv";
}

fs::path prepare_out_dir(const Common& common) {
  fs::path dir(common.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(errc::io_error, "cannot create output directory " + common.out);
  return dir;
}

Json default_constants() {
  Json constants = Json::object();
  constants.set("zero_tolerance_rel", Json::num(ZeroTolerance{}.relative));
  return constants;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  Common common;
  Index samples = 0;
  // poisson
  Index n1 = 0, n2 = 0;
  double delta1 = 1.0, delta2 = 1.0, sigma_w = 1.0;
  // sparse
  Index p = 0, s = 0;
  double min_mag = 0.3, max_mag = 1.0;
  // kronecker
  Index q = 0, r = 0, s_a = 1, s_b = 1;
  int k = 1;
  // sample
  std::string model_path;
  std::string model_role = "precision";
};

void run_generate_poisson(const GenerateArgs& args) {
  const fs::path dir = prepare_out_dir(args.common);
  PoissonFieldConfig cfg{args.n1, args.n2, args.delta1, args.delta2, args.sigma_w};
  cfg.validate();

  std::vector<std::string> outputs;
  save_triplet(poisson_field_precision_sparse(cfg), (dir / "model.triplet").string());
  outputs.push_back("model.triplet");
  if (args.samples > 0) {
    const DataMatrix data = poisson_field_data(cfg, args.samples, args.common.seed);
    save_data_csv(data, (dir / "data.csv").string());
    outputs.push_back("data.csv");
  }

  ConfigRecorder config;
  config.add("model", std::string("poisson"));
  config.add("n1", cfg.n1);
  config.add("n2", cfg.n2);
  config.add("delta1", cfg.delta1);
  config.add("delta2", cfg.delta2);
  config.add("sigma_w", cfg.sigma_w);
  config.add("samples", args.samples);
  config.add("seed", args.common.seed);
  write_manifest(args.common, "generate poisson", config, outputs, default_constants());
}

void run_generate_sparse(const GenerateArgs& args) {
  const fs::path dir = prepare_out_dir(args.common);
  SparsePrecisionConfig cfg{args.p, args.s, args.min_mag, args.max_mag, args.common.seed};
  const SymMatrix omega = sparse_random_precision(cfg);

  std::vector<std::string> outputs;
  save_triplet(omega, (dir / "model.triplet").string());
  outputs.push_back("model.triplet");
  if (args.samples > 0) {
    const DataMatrix data =
        sample_gaussian(omega, args.samples,
                        CounterRng::derive_seed(args.common.seed, 0x5a), args.common.threads);
    save_data_csv(data, (dir / "data.csv").string());
    outputs.push_back("data.csv");
  }

  ConfigRecorder config;
  config.add("model", std::string("sparse"));
  config.add("p", cfg.p);
  config.add("s", cfg.s);
  config.add("min_magnitude", cfg.min_magnitude);
  config.add("max_magnitude", cfg.max_magnitude);
  config.add("samples", args.samples);
  config.add("seed", args.common.seed);
  write_manifest(args.common, "generate sparse", config, outputs, default_constants());
}

void run_generate_kronecker(const GenerateArgs& args) {
  const fs::path dir = prepare_out_dir(args.common);
  KroneckerConfig cfg{args.q, args.r, args.k, args.s_a, args.s_b,
                      args.min_mag, args.max_mag, args.common.seed};
  const KroneckerModel model = kronecker_model(cfg);

  std::vector<std::string> outputs;
  save_triplet(model.omega, (dir / "model.triplet").string());
  outputs.push_back("model.triplet");
  save_triplet(SymMatrix(model.factor_a, MatrixRole::Precision),
               (dir / "factor_a.triplet").string());
  outputs.push_back("factor_a.triplet");
  save_triplet(SymMatrix(model.factor_b, MatrixRole::Precision),
               (dir / "factor_b.triplet").string());
  outputs.push_back("factor_b.triplet");
  if (args.samples > 0) {
    const DataMatrix data =
        sample_gaussian(model.omega, args.samples,
                        CounterRng::derive_seed(args.common.seed, 0x5a), args.common.threads);
    save_data_csv(data, (dir / "data.csv").string());
    outputs.push_back("data.csv");
  }

  ConfigRecorder config;
  config.add("model", std::string("kronecker"));
  config.add("q", cfg.q);
  config.add("r", cfg.r);
  config.add("k", cfg.k);
  config.add("s_a", cfg.s_a);
  config.add("s_b", cfg.s_b);
  config.add("min_magnitude", cfg.min_magnitude);
  config.add("max_magnitude", cfg.max_magnitude);
  config.add("samples", args.samples);
  config.add("seed", args.common.seed);
  write_manifest(args.common, "generate kronecker", config, outputs, default_constants());
}

void run_generate_sample(const GenerateArgs& args) {
  const fs::path dir = prepare_out_dir(args.common);
  if (args.samples < 2) fail(errc::config_error, "--samples must be >= 2");
  const MatrixRole role = args.model_role == "covariance" ? MatrixRole::Covariance
                                                          : MatrixRole::Precision;
  const SymMatrix model = load_triplet(args.model_path, role);
  const DataMatrix data =
      sample_gaussian(model, args.samples, args.common.seed, args.common.threads);
  save_data_csv(data, (dir / "data.csv").string());

  ConfigRecorder config;
  config.add("model", std::string("sample"));
  config.add("model_path", args.model_path);
  config.add("model_role", args.model_role);
  config.add("samples", args.samples);
  config.add("seed", args.common.seed);
  write_manifest(args.common, "generate sample", config, {"data.csv"}, default_constants());
}

// ---------------------------------------------------------------------------
// screen

struct ScreenArgs {
  Common common;
  std::string data_path;
  double rho = 0.5;
  std::string matrix = "parcorr";
  bool fast = false;
  double eps = 0.0;
  Index hub_degree = 1;
};

void run_screen(const ScreenArgs& args) {
  const fs::path dir = prepare_out_dir(args.common);
  const DataMatrix data = load_data_csv(args.data_path);
  const Index n = data.n();
  const Index p = data.p();

  Matrix frame;
  std::string path_name;
  std::optional<Index> rank;
  if (args.matrix == "corr") {
    frame = zscore_project(data).columns();
    path_name = "correlation";
  } else {
    ParcorFrame parcor = partial_correlation_frame(data);
    frame = std::move(parcor.columns);
    path_name = parcor.pseudo ? "pseudoinverse" : "inverse";
    rank = parcor.rank;
  }

  // Both routes compute edge weights with the same per-pair dot product, so
  // --fast changes only how candidate pairs are enumerated, not the output.
  const EdgeGraph graph =
      args.fast ? ball_graph(frame, args.rho,
                             args.eps > 0 ? BallGraphMode::Approx(args.eps)
                                          : BallGraphMode::Exact())
                : ball_graph_brute_force(frame, args.rho);

  std::vector<std::string> outputs;
  Table edges;
  edges.columns = {"i", "j", "weight"};
  for (const Edge& e : graph.edges) {
    edges.add_row({std::to_string(e.i), std::to_string(e.j), format_double(e.weight)});
  }
  const std::string edges_file = "edges" + table_extension(args.common);
  save_table(edges, (dir / edges_file).string(), args.common.format);
  outputs.push_back(edges_file);

  Table hubs;
  hubs.columns = {"vertex", "degree"};
  const auto degrees = graph.degrees();
  for (Index v = 0; v < p; ++v) {
    if (degrees[static_cast<std::size_t>(v)] >= args.hub_degree) {
      hubs.add_row({std::to_string(v),
                    std::to_string(degrees[static_cast<std::size_t>(v)])});
    }
  }
  const std::string hubs_file = "hubs" + table_extension(args.common);
  save_table(hubs, (dir / hubs_file).string(), args.common.format);
  outputs.push_back(hubs_file);

  Json law_json = Json::object();
  law_json.set("n", Json::integer(static_cast<long long>(n)));
  law_json.set("p", Json::integer(static_cast<long long>(p)));
  law_json.set("rho", Json::num(args.rho));
  law_json.set("path", Json::str(path_name));
  law_json.set("rank", rank ? Json::integer(static_cast<long long>(*rank)) : Json::raw_null());
  law_json.set("edges", Json::integer(static_cast<long long>(graph.edges.size())));
  law_json.set("threshold_used", Json::num(graph.threshold_used));
  if (args.rho > 0.0 && args.rho < 1.0 && n >= 3 && p >= 2) {
    const ScreeningLaw law = false_positive_prob(n, static_cast<double>(p), args.rho);
    law_json.set("a_n", Json::num(law.a_n));
    law_json.set("e_n", Json::num(law.e_n));
    law_json.set("log_e_n", Json::num(law.log_e_n));
    law_json.set("kappa_n", Json::num(law.kappa_n));
    law_json.set("log_kappa_n", Json::num(law.log_kappa_n));
    law_json.set("p_e", Json::num(law.p_e));
    law_json.set("rho_c", Json::num(law.rho_c));  // null for n in {3, 4}
  }
  write_text_file((dir / "law.json").string(), law_json.dump());
  outputs.push_back("law.json");

  ConfigRecorder config;
  config.add("data", args.data_path);
  config.add("rho", args.rho);
  config.add("matrix", args.matrix);
  config.add("fast", std::string(args.fast ? "true" : "false"));
  config.add("eps", args.eps);
  config.add("hub_degree", args.hub_degree);
  Json constants = default_constants();
  if (n >= 5 && p >= 2) {
    constants.set("rho_c", Json::num(critical_threshold(n, static_cast<double>(p))));
    constants.set("a_n", Json::num(sphere_constant(n)));
  }
  write_manifest(args.common, "screen", config, outputs, std::move(constants));
}

// ---------------------------------------------------------------------------
// concord

struct ConcordArgs {
  Common common;
  std::string data_path;
  std::vector<double> lambdas;
  int lambda_count = 10;
  double lambda_min_ratio = 0.01;
  double tol = 1e-6;
  int max_sweeps = 500;
  bool standardize = false;
  std::string truth_path;
};

void run_concord(const ConcordArgs& args) {
  const fs::path dir = prepare_out_dir(args.common);
  const DataMatrix data = load_data_csv(args.data_path);

  std::vector<double> grid = args.lambdas;
  if (grid.empty()) {
    if (args.lambda_count < 1) fail(errc::config_error, "--lambda-count must be >= 1");
    if (!(args.lambda_min_ratio > 0.0) || args.lambda_min_ratio >= 1.0) {
      fail(errc::config_error, "--lambda-min-ratio must lie in (0, 1)");
    }
    const double lambda_max = std::max(concord_lambda_max(data), 1e-12);
    for (int k = 0; k < args.lambda_count; ++k) {
      const double frac = args.lambda_count == 1
                              ? 0.0
                              : static_cast<double>(k) /
                                    static_cast<double>(args.lambda_count - 1);
      grid.push_back(lambda_max * std::pow(args.lambda_min_ratio, frac));
    }
  } else {
    std::sort(grid.begin(), grid.end(), std::greater<>());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  }

  ConcordOptions opts{args.tol, args.max_sweeps, args.standardize};
  const std::vector<ConcordState> states = concord_path(data, grid, opts);

  std::optional<SymMatrix> truth;
  if (!args.truth_path.empty()) {
    truth = load_triplet(args.truth_path, MatrixRole::Precision);
  }

  std::vector<std::string> outputs;
  Json metrics = Json::array();
  int best_index = -1;
  double best_f1 = -1.0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const ConcordState& state = states[k];
    char stem[32];
    std::snprintf(stem, sizeof(stem), "fit_%02zu", k);

    save_triplet(state.omega, (dir / (std::string(stem) + ".triplet")).string());
    outputs.push_back(std::string(stem) + ".triplet");

    Json sidecar = Json::object();
    sidecar.set("lambda", Json::num(state.lambda));
    sidecar.set("sweeps", Json::integer(state.sweeps));
    sidecar.set("converged", Json::boolean(state.converged));
    sidecar.set("kkt_residual", Json::num(state.kkt_residual));
    Json trace = Json::array();
    for (double v : state.objective_trace) trace.push(Json::num(v));
    sidecar.set("objective_trace", std::move(trace));
    write_text_file((dir / (std::string(stem) + ".json")).string(), sidecar.dump());
    outputs.push_back(std::string(stem) + ".json");

    if (truth) {
      const SupportMetrics m = support_metrics(state.omega, *truth);
      Json entry = Json::object();
      entry.set("lambda", Json::num(state.lambda));
      entry.set("f1", Json::num(m.f1));
      entry.set("true_positive", Json::integer(m.true_positive));
      entry.set("false_positive", Json::integer(m.false_positive));
      entry.set("false_negative", Json::integer(m.false_negative));
      entry.set("sign_agreement", Json::num(m.sign_agreement));
      metrics.push(std::move(entry));
      if (m.f1 > best_f1) {
        best_f1 = m.f1;
        best_index = static_cast<int>(k);
      }
    }
  }
  if (truth) {
    Json summary = Json::object();
    summary.set("per_lambda", std::move(metrics));
    summary.set("best_lambda", Json::num(states[static_cast<std::size_t>(best_index)].lambda));
    summary.set("best_f1", Json::num(best_f1));
    write_text_file((dir / "metrics.json").string(), summary.dump());
    outputs.push_back("metrics.json");
  }

  ConfigRecorder config;
  config.add("data", args.data_path);
  std::string grid_text;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (k > 0) grid_text += ',';
    grid_text += format_double_17(grid[k]);
  }
  config.add("lambda_grid", grid_text);
  config.add("tol", args.tol);
  config.add("max_sweeps", args.max_sweeps);
  config.add("standardize", std::string(args.standardize ? "true" : "false"));
  if (!args.truth_path.empty()) config.add("truth", args.truth_path);
  write_manifest(args.common, "concord", config, outputs, default_constants());
}

// ---------------------------------------------------------------------------
// design-curve

struct DesignCurveArgs {
  Common common;
  std::string mode = "samples";
  std::vector<double> p_grid;
  std::vector<double> rho_grid;
  std::vector<Index> n_grid;
  double fwer = 1e-4;
};

void run_design_curve(const DesignCurveArgs& args) {
  const fs::path dir = prepare_out_dir(args.common);
  Table table;
  if (args.mode == "samples") {
    if (args.p_grid.empty() || args.rho_grid.empty()) {
      fail(errc::config_error, "--p-grid and --rho-grid must be non-empty");
    }
    table.columns = {"p", "rho", "fwer", "n_required", "status"};
    table.numeric = {true, true, true, true, false};
    std::vector<double> p_sorted = args.p_grid;
    std::sort(p_sorted.begin(), p_sorted.end());
    std::vector<double> rho_sorted = args.rho_grid;
    std::sort(rho_sorted.begin(), rho_sorted.end());
    std::vector<std::vector<double>> solved(p_sorted.size());
    for (std::size_t a = 0; a < p_sorted.size(); ++a) {
      solved[a].assign(rho_sorted.size(), std::nan(""));
      for (std::size_t b = 0; b < rho_sorted.size(); ++b) {
        std::string status = "ok";
        std::string cell;
        try {
          const long long n = min_sample_size(p_sorted[a], rho_sorted[b], args.fwer);
          solved[a][b] = static_cast<double>(n);
          cell = std::to_string(n);
        } catch (const Error& e) {
          if (e.code() != errc::no_solution) throw;
          status = "no_solution";
        }
        table.add_row({format_double(p_sorted[a]), format_double(rho_sorted[b]),
                       format_double(args.fwer), cell, status});
      }
    }
    // sanity: n grows with p and shrinks as the detectable level rises
    for (std::size_t a = 0; a < p_sorted.size(); ++a) {
      for (std::size_t b = 1; b < rho_sorted.size(); ++b) {
        if (std::isfinite(solved[a][b - 1]) && std::isfinite(solved[a][b]) &&
            solved[a][b] > solved[a][b - 1]) {
          fail(errc::numerical_error, "design curve is not monotone in rho");
        }
      }
    }
    for (std::size_t b = 0; b < rho_sorted.size(); ++b) {
      for (std::size_t a = 1; a < p_sorted.size(); ++a) {
        if (std::isfinite(solved[a - 1][b]) && std::isfinite(solved[a][b]) &&
            solved[a][b] < solved[a - 1][b]) {
          fail(errc::numerical_error, "design curve is not monotone in p");
        }
      }
    }
  } else if (args.mode == "correlation") {
    if (args.p_grid.empty() || args.n_grid.empty()) {
      fail(errc::config_error, "--p-grid and --n-grid must be non-empty");
    }
    table.columns = {"n", "p", "fwer", "rho_min", "status"};
    table.numeric = {true, true, true, true, false};
    for (Index n : args.n_grid) {
      for (double p : args.p_grid) {
        std::string status = "ok";
        std::string cell;
        try {
          cell = format_double(min_detectable_correlation(n, p, args.fwer));
        } catch (const Error& e) {
          if (e.code() != errc::no_solution) throw;
          status = "no_solution";
        }
        table.add_row({std::to_string(n), format_double(p), format_double(args.fwer),
                       cell, status});
      }
    }
  } else {
    fail(errc::config_error, "--mode must be 'samples' or 'correlation'");
  }

  const std::string file = "design_curve" + table_extension(args.common);
  save_table(table, (dir / file).string(), args.common.format);

  ConfigRecorder config;
  config.add("mode", args.mode);
  config.add("fwer", args.fwer);
  auto grid_text = [](const auto& grid) {
    std::string text;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (k > 0) text += ',';
      text += format_double_17(static_cast<double>(grid[k]));
    }
    return text;
  };
  config.add("p_grid", grid_text(args.p_grid));
  config.add("rho_grid", grid_text(args.rho_grid));
  config.add("n_grid", grid_text(args.n_grid));
  write_manifest(args.common, "design-curve", config, {file}, default_constants());
}

// ---------------------------------------------------------------------------
// phase

struct PhaseArgs {
  Common common;
  Index n = 20;
  Index p = 100;
  std::vector<double> rhos;
  double rho_min = 0.0, rho_max = 0.0;
  int rho_steps = 0;
  int trials = 50;
  std::string null_path;  // empty = identity covariance
  std::string null_role = "covariance";
};

void run_phase(const PhaseArgs& args) {
  const fs::path dir = prepare_out_dir(args.common);
  std::vector<double> grid = args.rhos;
  if (grid.empty()) {
    if (args.rho_steps < 2 || !(args.rho_min < args.rho_max)) {
      fail(errc::config_error,
           "provide --rhos or a --rho-min/--rho-max/--rho-steps range");
    }
    for (int k = 0; k < args.rho_steps; ++k) {
      grid.push_back(args.rho_min + (args.rho_max - args.rho_min) * k /
                                        (args.rho_steps - 1));
    }
  }

  std::optional<SymMatrix> null_model;
  if (!args.null_path.empty()) {
    // the sampler accepts either role directly
    null_model = load_triplet(args.null_path, args.null_role == "precision"
                                                  ? MatrixRole::Precision
                                                  : MatrixRole::Covariance);
  }

  const PhaseCurve curve = phase_transition_curve(args.n, args.p, grid, args.trials,
                                                  null_model, args.common.seed,
                                                  args.common.threads);

  Table table;
  table.columns = {"rho", "mean_ne", "prob_positive", "analytic_pe"};
  for (const PhasePoint& point : curve.points) {
    table.add_row({format_double(point.rho), format_double(point.mean_ne),
                   format_double(point.prob_positive), format_double(point.analytic_pe)});
  }
  const std::string file = "phase" + table_extension(args.common);
  save_table(table, (dir / file).string(), args.common.format);

  std::vector<double> sorted_max = curve.trial_max;
  std::sort(sorted_max.begin(), sorted_max.end());
  const double median_max = sorted_max[sorted_max.size() / 2];

  Json constants = default_constants();
  constants.set("pseudo_path", Json::boolean(curve.pseudo_path));
  constants.set("empirical_half_crossing", Json::num(median_max));
  if (args.n >= 5) {
    constants.set("rho_c", Json::num(critical_threshold(args.n, static_cast<double>(args.p))));
  }

  ConfigRecorder config;
  config.add("n", args.n);
  config.add("p", args.p);
  std::string grid_text;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (k > 0) grid_text += ',';
    grid_text += format_double_17(grid[k]);
  }
  config.add("rho_grid", grid_text);
  config.add("trials", args.trials);
  config.add("null", args.null_path.empty() ? std::string("identity") : args.null_path);
  config.add("seed", args.common.seed);
  write_manifest(args.common, "phase", config, {file}, std::move(constants));
}

// ---------------------------------------------------------------------------
// regimes

struct RegimesArgs {
  Common common;
  std::string table = "tasks";
  double level = 0.5;
  std::vector<double> p_grid;
  double scale_m = 0.0;  // 0 = default max(q, r, n)
  double alpha = 1.0, beta = 1.0, nu = 0.5;
  Index screening_n = 5;
  std::vector<std::string> tasks;
};

void run_regimes(const RegimesArgs& args) {
  const fs::path dir = prepare_out_dir(args.common);
  if (args.p_grid.empty()) fail(errc::config_error, "--p-grid must be non-empty");

  Table table;
  table.columns = {"model_or_task", "level", "p", "n", "log10_n", "rho",
                   "alpha", "beta", "nu", "m", "status"};
  table.numeric = {false, true, true, true, true, true, true, true, true, true, false};

  auto blank = std::string();
  if (args.table == "contextual") {
    for (ContextualKind kind :
         {ContextualKind::Saturated, ContextualKind::Sparse, ContextualKind::Kronecker,
          ContextualKind::KroneckerSparse}) {
      for (double p : args.p_grid) {
        ContextualModel model{kind, 2.0, 2.0,
                              args.scale_m > 0 ? std::optional<double>(args.scale_m)
                                               : std::nullopt};
        std::string status = "ok";
        std::string n_cell, log_cell, m_cell;
        try {
          const auto points = contextual_isocline(model, args.level, {p});
          n_cell = format_double(points[0].n);
          log_cell = format_double(points[0].log10_n);
          model.q = model.r = std::sqrt(p);
          m_cell = format_double(model.m_for(points[0].n));
        } catch (const Error& e) {
          if (e.code() != errc::infeasible_level) throw;
          status = "infeasible";
        }
        table.add_row({contextual_name(kind), format_double(args.level), format_double(p),
                       n_cell, log_cell, blank, blank, blank, blank, m_cell, status});
      }
    }
  } else if (args.table == "tasks") {
    std::vector<Task> selected;
    if (args.tasks.empty()) {
      selected = {Task::Screening, Task::Detection, Task::SupportRecovery,
                  Task::ParamEstimation, Task::PerformanceEstimation};
    } else {
      for (const std::string& name : args.tasks) {
        if (name == "screening") selected.push_back(Task::Screening);
        else if (name == "detection") selected.push_back(Task::Detection);
        else if (name == "support_recovery") selected.push_back(Task::SupportRecovery);
        else if (name == "param_estimation") selected.push_back(Task::ParamEstimation);
        else if (name == "performance_estimation")
          selected.push_back(Task::PerformanceEstimation);
        else
          fail(errc::config_error, "unknown task '" + name + "'");
      }
    }
    for (Task task : selected) {
      TaskRegime regime{task, args.alpha, args.beta, args.nu};
      for (double p : args.p_grid) {
        std::string status = "ok";
        std::string n_cell, log_cell, rho_cell;
        try {
          const auto points =
              task_isocline(regime, args.level, {p}, TaskIsoclineOptions{args.screening_n});
          n_cell = format_double(points[0].n);
          log_cell = format_double(points[0].log10_n);
          if (points[0].rho) rho_cell = format_double(*points[0].rho);
        } catch (const Error& e) {
          if (e.code() != errc::infeasible_level) throw;
          status = "infeasible";
        }
        table.add_row({task_name(task), format_double(args.level), format_double(p),
                       n_cell, log_cell, rho_cell, format_double(args.alpha),
                       format_double(args.beta), format_double(args.nu), blank, status});
      }
    }
  } else {
    fail(errc::config_error, "--table must be 'contextual' or 'tasks'");
  }

  const std::string file = "regimes" + table_extension(args.common);
  save_table(table, (dir / file).string(), args.common.format);

  ConfigRecorder config;
  config.add("table", args.table);
  config.add("level", args.level);
  std::string grid_text;
  for (std::size_t k = 0; k < args.p_grid.size(); ++k) {
    if (k > 0) grid_text += ',';
    grid_text += format_double_17(args.p_grid[k]);
  }
  config.add("p_grid", grid_text);
  config.add("scale_m", args.scale_m);
  config.add("alpha", args.alpha);
  config.add("beta", args.beta);
  config.add("nu", args.nu);
  config.add("screening_n", args.screening_n);
  write_manifest(args.common, "regimes", config, {file}, default_constants());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"correlation mining toolkit"};
  app.require_subcommand(1);

  GenerateArgs gen;
  ScreenArgs screen;
  ConcordArgs concord;
  DesignCurveArgs design;
  PhaseArgs phase;
  RegimesArgs regimes;

  auto* generate = app.add_subcommand("generate", "emit synthetic models and data");
  generate->require_subcommand(1);

  auto* poisson = generate->add_subcommand("poisson", "finite-difference field model");
  add_common(poisson, gen.common);
  poisson->add_option("--n1", gen.n1, "grid rows")->required();
  poisson->add_option("--n2", gen.n2, "grid columns")->required();
  poisson->add_option("--delta1", gen.delta1, "u1 increment");
  poisson->add_option("--delta2", gen.delta2, "u2 increment");
  poisson->add_option("--sigma-w", gen.sigma_w, "driving noise standard deviation");
  poisson->add_option("--samples", gen.samples, "realizations to write as data.csv");
  poisson->callback([&] { run_generate_poisson(gen); });

  auto* sparse = generate->add_subcommand("sparse", "sparse random precision model");
  add_common(sparse, gen.common);
  sparse->add_option("--p", gen.p, "dimension")->required();
  sparse->add_option("--s", gen.s, "max off-diagonal nonzeros per row")->required();
  sparse->add_option("--min-mag", gen.min_mag, "min off-diagonal magnitude");
  sparse->add_option("--max-mag", gen.max_mag, "max off-diagonal magnitude");
  sparse->add_option("--samples", gen.samples, "Gaussian samples to draw");
  sparse->callback([&] { run_generate_sparse(gen); });

  auto* kronecker = generate->add_subcommand("kronecker", "Kronecker precision model");
  add_common(kronecker, gen.common);
  kronecker->add_option("--q", gen.q, "spatial factor dimension")->required();
  kronecker->add_option("--r", gen.r, "temporal factor dimension")->required();
  kronecker->add_option("--k", gen.k, "Kronecker rank (must be 1)");
  kronecker->add_option("--sa", gen.s_a, "factor A row sparsity");
  kronecker->add_option("--sb", gen.s_b, "factor B row sparsity");
  kronecker->add_option("--min-mag", gen.min_mag, "min off-diagonal magnitude");
  kronecker->add_option("--max-mag", gen.max_mag, "max off-diagonal magnitude");
  kronecker->add_option("--samples", gen.samples, "Gaussian samples to draw");
  kronecker->callback([&] { run_generate_kronecker(gen); });

  auto* sample = generate->add_subcommand("sample", "draw Gaussian data from a model file");
  add_common(sample, gen.common);
  sample->add_option("--model", gen.model_path, "sym-triplet model file")->required();
  sample->add_option("--role", gen.model_role, "model role")
      ->check(CLI::IsMember({"precision", "covariance"}));
  sample->add_option("--samples", gen.samples, "sample count")->required();
  sample->callback([&] { run_generate_sample(gen); });

  auto* screen_cmd = app.add_subcommand("screen", "threshold a sample (partial) correlation");
  add_common(screen_cmd, screen.common);
  screen_cmd->add_option("--data", screen.data_path, "data CSV")->required();
  screen_cmd->add_option("--rho", screen.rho, "threshold in [0, 1]")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  screen_cmd->add_option("--matrix", screen.matrix, "matrix to threshold")
      ->check(CLI::IsMember({"parcorr", "corr"}));
  screen_cmd->add_flag("--fast", screen.fast, "k-d tree ball-graph path");
  screen_cmd->add_option("--eps", screen.eps, "approximation slack for --fast (0 = exact)");
  screen_cmd->add_option("--hub-degree", screen.hub_degree, "degree for the hub list");
  screen_cmd->callback([&] { run_screen(screen); });

  auto* concord_cmd = app.add_subcommand("concord", "pseudo-likelihood precision fit");
  add_common(concord_cmd, concord.common);
  concord_cmd->add_option("--data", concord.data_path, "data CSV")->required();
  concord_cmd->add_option("--lambdas", concord.lambdas, "explicit penalty grid")
      ->delimiter(',');
  concord_cmd->add_option("--lambda-count", concord.lambda_count,
                          "auto grid size from lambda_max");
  concord_cmd->add_option("--lambda-min-ratio", concord.lambda_min_ratio,
                          "auto grid floor as a fraction of lambda_max");
  concord_cmd->add_option("--tol", concord.tol, "convergence tolerance");
  concord_cmd->add_option("--max-sweeps", concord.max_sweeps, "sweep cap");
  concord_cmd->add_flag("--standardize", concord.standardize, "unit-variance columns");
  concord_cmd->add_option("--truth", concord.truth_path,
                          "sym-triplet truth for support metrics");
  concord_cmd->callback([&] { run_concord(concord); });

  auto* design_cmd = app.add_subcommand("design-curve", "sample-size design tables");
  add_common(design_cmd, design.common);
  design_cmd->add_option("--mode", design.mode, "samples | correlation")
      ->check(CLI::IsMember({"samples", "correlation"}));
  design_cmd->add_option("--p-grid", design.p_grid, "dimensions")->delimiter(',');
  design_cmd->add_option("--rho-grid", design.rho_grid, "correlation levels")
      ->delimiter(',');
  design_cmd->add_option("--n-grid", design.n_grid, "sample counts")->delimiter(',');
  design_cmd->add_option("--fwer", design.fwer, "familywise error rate");
  design_cmd->callback([&] { run_design_curve(design); });

  auto* phase_cmd = app.add_subcommand("phase", "Monte Carlo phase-transition experiment");
  add_common(phase_cmd, phase.common);
  phase_cmd->add_option("--n", phase.n, "samples per trial")->required();
  phase_cmd->add_option("--p", phase.p, "variables")->required();
  phase_cmd->add_option("--rhos", phase.rhos, "explicit threshold grid")->delimiter(',');
  phase_cmd->add_option("--rho-min", phase.rho_min, "range start");
  phase_cmd->add_option("--rho-max", phase.rho_max, "range end");
  phase_cmd->add_option("--rho-steps", phase.rho_steps, "range size");
  phase_cmd->add_option("--trials", phase.trials, "Monte Carlo trials");
  phase_cmd->add_option("--null", phase.null_path, "null model triplet (default identity)");
  phase_cmd->add_option("--null-role", phase.null_role, "null model role")
      ->check(CLI::IsMember({"precision", "covariance"}));
  phase_cmd->callback([&] { run_phase(phase); });

  auto* regimes_cmd = app.add_subcommand("regimes", "sample-complexity tables");
  add_common(regimes_cmd, regimes.common);
  regimes_cmd->add_option("--table", regimes.table, "contextual | tasks")
      ->check(CLI::IsMember({"contextual", "tasks"}));
  regimes_cmd->add_option("--level", regimes.level, "bound level")->required();
  regimes_cmd->add_option("--p-grid", regimes.p_grid, "dimensions")->delimiter(',');
  regimes_cmd->add_option("--scale-m", regimes.scale_m, "override M (0 = max(q, r, n))");
  regimes_cmd->add_option("--alpha", regimes.alpha, "regime constant alpha");
  regimes_cmd->add_option("--beta", regimes.beta, "regime constant beta");
  regimes_cmd->add_option("--nu", regimes.nu, "support recovery exponent");
  regimes_cmd->add_option("--screening-n", regimes.screening_n,
                          "fixed n of the screening row");
  regimes_cmd->add_option("--tasks", regimes.tasks, "task subset")->delimiter(',');
  regimes_cmd->callback([&] { run_regimes(regimes); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_config_error(e.code()) ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
