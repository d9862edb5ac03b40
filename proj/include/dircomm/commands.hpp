#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dircomm/dynamics.hpp"
#include "dircomm/graph.hpp"
#include "dircomm/io.hpp"
#include "dircomm/meanfield.hpp"
#include "dircomm/metrics.hpp"
#include "dircomm/parallel.hpp"
#include "dircomm/phase.hpp"
#include "dircomm/rng.hpp"

#ifndef DIRCOMM_VERSION
#define DIRCOMM_VERSION "0.1.0"
#endif

namespace dircomm {

/// Bad command-line or configuration input.
class UsageError : public Error {
 public:
  using Error::Error;
};

inline std::string build_id() {
  std::string id = "dircomm " DIRCOMM_VERSION;
#ifdef __VERSION__
  id += " (" __VERSION__ ")";
#endif
  return id;
}

/// Every configurable key with its default. Config files and flags may only
/// set keys listed here.
inline Json default_settings() {
  return Json{
      // model
      {"n0", 67}, {"n1", 33},
      {"ps0", 0.7}, {"ps1", 0.5},
      {"pa0", 0.9}, {"pa1", 0.8},
      {"alpha0", 0.2}, {"alpha1", 0.1},
      {"pr0", 0.5}, {"pr1", 0.5},
      {"q", nullptr},  // initial edge probability; null: equilibrium mean degree / (N - 1)
      // simulation
      {"sweeps", 500}, {"sample_every", 1}, {"seed", 1}, {"replicas", 1}, {"window", 0.2},
      // scans
      {"b", 0.5}, {"c", 2.0}, {"ps", Json::array({1.0})}, {"pr", 0.5}, {"resolution", 201},
      {"tol", 1e-10},
      // classify input
      {"omega", nullptr}, {"omega_file", nullptr}, {"graph", nullptr},
      // io
      {"out", nullptr}, {"jobs", 1},
  };
}

/// Overlays `patch` onto `settings`, rejecting unknown keys.
inline void merge_settings(Json& settings, const Json& patch, const std::string& origin) {
  if (!patch.is_object()) throw UsageError(origin + ": expected a JSON object");
  for (const auto& [key, value] : patch.items()) {
    if (!settings.contains(key)) throw UsageError(origin + ": unknown key '" + key + "'");
    settings[key] = value;
  }
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

/// Fully resolved settings: defaults, then the config file, then flags.
struct RunConfig {
  std::string mode;
  Json settings = default_settings();

  template <class T>
  T get(const std::string& key) const {
    try {
      return settings.at(key).get<T>();
    } catch (const Json::exception&) {
      throw UsageError("setting '" + key + "' has the wrong type");
    }
  }
  bool has(const std::string& key) const { return !settings.at(key).is_null(); }
};

inline ModelParams model_params(const RunConfig& cfg) {
  ModelParams p;
  p.p_swap = {cfg.get<double>("ps0"), cfg.get<double>("ps1")};
  p.p_assort = {cfg.get<double>("pa0"), cfg.get<double>("pa1")};
  p.alpha = {cfg.get<double>("alpha0"), cfg.get<double>("alpha1")};
  p.p_remove = {cfg.get<double>("pr0"), cfg.get<double>("pr1")};
  const auto n0 = cfg.get<std::int64_t>("n0"), n1 = cfg.get<std::int64_t>("n1");
  if (n0 < 1 || n1 < 1) throw UsageError("group sizes n0, n1 must be >= 1");
  p.group_sizes = {static_cast<double>(n0), static_cast<double>(n1)};
  try {
    p.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return p;
}

inline std::filesystem::path output_dir(const RunConfig& cfg) {
  if (!cfg.has("out")) throw UsageError(cfg.mode + " needs an output directory (--out)");
  std::filesystem::path dir = cfg.get<std::string>("out");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw Error("cannot create output directory " + dir.string());
  return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  os << body;
  os.close();
  if (!os) throw Error("write failed for " + path.string());
}

/// config.json next to single-file outputs: mode, build and resolved settings.
inline void write_config_sidecar(const std::filesystem::path& dir, const RunConfig& cfg) {
  const Json meta{{"mode", cfg.mode}, {"build", build_id()}, {"config", cfg.settings}};
  write_file(dir / "config.json", meta.dump(2) + "\n");
}

inline std::uint64_t replica_seed(std::uint64_t base, std::size_t replica) { return base + replica; }

/// Initial Erdos-Renyi probability: configured q, or the mean equilibrium
/// in-degree over N - 1 clamped into the admissible interval.
inline double initial_edge_probability(const RunConfig& cfg, const ModelParams& p) {
  if (cfg.has("q")) return cfg.get<double>("q");
  const double n = p.total_size();
  const double z = (p.group_sizes[0] * z_fixed_point(p.alpha[0], p.p_remove[0]) +
                    p.group_sizes[1] * z_fixed_point(p.alpha[1], p.p_remove[1])) /
                   n;
  double q = z / (n - 1.0);
  if (n > 4.0) {
    const double lo = 2.0 / n, hi = 1.0 - lo;
    q = std::clamp(q, std::nextafter(lo, 1.0), std::nextafter(hi, 0.0));
  } else {
    q = std::clamp(q, 0.01, 0.99);
  }
  return q;
}

struct SimulationResult {
  std::vector<TrajectoryRecord> trajectories;
  std::vector<WindowAverage> averages;
  Json summary;
};

/// Runs all replicas and writes trajectory_<k>.csv, graph_<k>.edges,
/// metadata.json, classification.json and summary.json into the output dir.
inline SimulationResult cmd_simulate(const RunConfig& cfg) {
  const auto params = model_params(cfg);
  const auto sweeps = cfg.get<std::int64_t>("sweeps");
  const auto sample_every = cfg.get<std::int64_t>("sample_every");
  const auto replicas = cfg.get<std::int64_t>("replicas");
  const auto window = cfg.get<double>("window");
  const auto seed = cfg.get<std::uint64_t>("seed");
  const auto jobs = cfg.get<std::int64_t>("jobs");
  if (sweeps < 1) throw UsageError("sweeps must be >= 1");
  if (sample_every < 1) throw UsageError("sample_every must be >= 1");
  if (replicas < 1) throw UsageError("replicas must be >= 1");
  if (jobs < 1) throw UsageError("jobs must be >= 1");
  if (!(window > 0.0 && window <= 1.0)) throw UsageError("window must lie in (0, 1]");
  const double q = initial_edge_probability(cfg, params);
  const auto dir = output_dir(cfg);

  SimulationResult res;
  const auto n_rep = static_cast<std::size_t>(replicas);
  res.trajectories.resize(n_rep);
  res.averages.resize(n_rep);
  parallel_for(n_rep, static_cast<std::size_t>(jobs), [&](std::size_t k) {
    Rng rng(replica_seed(seed, k));
    auto g = new_erdos_renyi(static_cast<std::size_t>(params.group_sizes[0]),
                             static_cast<std::size_t>(params.group_sizes[1]), q, rng);
    res.trajectories[k] = run(g, params, static_cast<std::size_t>(sweeps),
                              static_cast<std::size_t>(sample_every), rng);
    res.averages[k] = window_average(res.trajectories[k], window);
    std::ostringstream csv, edges;
    write_trajectory_csv(csv, res.trajectories[k]);
    write_edge_list(edges, g);
    write_file(dir / ("trajectory_" + std::to_string(k) + ".csv"), csv.str());
    write_file(dir / ("graph_" + std::to_string(k) + ".edges"), edges.str());
  });

  Matrix2 mean{};
  std::array<double, 2> z{};
  Json per_replica = Json::array();
  for (std::size_t k = 0; k < n_rep; ++k) {
    const auto& a = res.averages[k];
    for (int r = 0; r < 2; ++r) {
      z[r] += a.z[r] / static_cast<double>(n_rep);
      for (int s = 0; s < 2; ++s) mean[r][s] += a.omega[r][s] / static_cast<double>(n_rep);
    }
    auto beta_json = [](const std::optional<double>& b) { return b ? Json(*b) : Json(nullptr); };
    per_replica.push_back({{"seed", replica_seed(seed, k)},
                           {"omega", to_json(a.omega)},
                           {"z", {a.z[0], a.z[1]}},
                           {"beta", {beta_json(a.beta[0]), beta_json(a.beta[1])}},
                           {"type", to_json(classify(a.omega))}});
  }
  const auto predicted = omega_predicted(params);
  double max_dev = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s) max_dev = std::max(max_dev, std::abs(mean[r][s] - predicted.omega.w[r][s]));

  Json seeds = Json::array();
  for (std::size_t k = 0; k < n_rep; ++k) seeds.push_back(replica_seed(seed, k));
  const Json classification{{"empirical", to_json(classify(mean))},
                            {"predicted", to_json(classify(predicted.omega))}};
  res.summary = Json{{"window", window},
                     {"samples_per_replica", res.averages.front().samples},
                     {"time_averaged", {{"omega", to_json(mean)}, {"z", {z[0], z[1]}}}},
                     {"predicted", to_json(predicted)},
                     {"max_abs_deviation", max_dev},
                     {"classification", classification},
                     {"replicas", per_replica}};
  const Json metadata{{"mode", "simulate"},
                      {"build", build_id()},
                      {"config", cfg.settings},
                      {"params", to_json(params)},
                      {"initial_edge_probability", q},
                      {"replica_seeds", seeds}};
  write_file(dir / "metadata.json", metadata.dump(2) + "\n");
  write_file(dir / "classification.json", classification.dump(2) + "\n");
  write_file(dir / "summary.json", res.summary.dump(2) + "\n");
  return res;
}

inline Json cmd_meanfield(const RunConfig& cfg) {
  auto out = to_json(omega_predicted(model_params(cfg)));
  if (cfg.has("out")) {
    const auto dir = output_dir(cfg);
    write_file(dir / "meanfield.json", out.dump(2) + "\n");
    write_config_sidecar(dir, cfg);
  }
  return out;
}

/// Classifies an omega matrix given inline, from a JSON file ({"omega": [[..],[..]]}
/// or a bare 2x2 array), or computed from an edge-list snapshot.
inline Json cmd_classify(const RunConfig& cfg) {
  const int sources = int(cfg.has("omega")) + int(cfg.has("omega_file")) + int(cfg.has("graph"));
  if (sources != 1) throw UsageError("classify needs exactly one of --omega, --omega-file, --graph");
  Matrix2 w;
  try {
    if (cfg.has("omega")) {
      const auto& o = cfg.settings.at("omega");
      if (o.is_array() && o.size() == 4) {
        w = {{{o[0].get<double>(), o[1].get<double>()}, {o[2].get<double>(), o[3].get<double>()}}};
      } else {
        w = matrix_from_json(o);
      }
    } else if (cfg.has("omega_file")) {
      const auto j = load_json_file(cfg.get<std::string>("omega_file"));
      w = matrix_from_json(j.is_object() ? j.at("omega") : j);
    } else {
      const auto path = cfg.get<std::string>("graph");
      std::ifstream in(path);
      if (!in) throw UsageError("cannot open " + path);
      w = density(read_edge_list(in)).w;
    }
  } catch (const Json::exception& e) {
    throw UsageError(std::string("omega input: ") + e.what());
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(std::string("omega input: ") + e.what());
  }
  auto out = to_json(classify(w));
  if (cfg.has("out")) {
    const auto dir = output_dir(cfg);
    write_file(dir / "classification.json", out.dump(2) + "\n");
    write_config_sidecar(dir, cfg);
  }
  return out;
}

inline PhaseFixed phase_fixed(const RunConfig& cfg, double ps) {
  PhaseFixed f{cfg.get<double>("b"), cfg.get<double>("c"), ps, cfg.get<double>("pr")};
  try {
    f.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return f;
}

/// One phase_<k>.csv per P^S value plus boundaries_<k>.json and phase.json.
inline std::vector<PhaseGrid> cmd_phase(const RunConfig& cfg) {
  const auto resolution = cfg.get<std::int64_t>("resolution");
  const auto jobs = cfg.get<std::int64_t>("jobs");
  if (resolution < 2) throw UsageError("resolution must be >= 2");
  if (jobs < 1) throw UsageError("jobs must be >= 1");
  const auto ps_list = cfg.get<std::vector<double>>("ps");
  if (ps_list.empty()) throw UsageError("ps list is empty");
  std::vector<PhaseFixed> fixed;
  for (double ps : ps_list) fixed.push_back(phase_fixed(cfg, ps));
  const auto dir = output_dir(cfg);

  std::vector<PhaseGrid> grids;
  Json files = Json::array();
  for (std::size_t k = 0; k < fixed.size(); ++k) {
    grids.push_back(scan_grid(fixed[k], static_cast<std::size_t>(resolution),
                              static_cast<std::size_t>(jobs)));
    std::ostringstream csv;
    write_phase_csv(csv, grids.back());
    const std::string stem = "phase_" + std::to_string(k);
    write_file(dir / (stem + ".csv"), csv.str());
    write_file(dir / ("boundaries_" + std::to_string(k) + ".json"),
               to_json(extract_boundaries(grids.back())).dump() + "\n");
    Json counts;
    for (Kind kind : {Kind::Assortative, Kind::CorePeriphery, Kind::Disassortative,
                      Kind::SourceBasin, Kind::Unclassified})
      counts[std::string(kind_code(kind))] = grids.back().count(kind);
    files.push_back({{"csv", stem + ".csv"},
                     {"boundaries", "boundaries_" + std::to_string(k) + ".json"},
                     {"fixed", to_json(fixed[k])},
                     {"counts", counts}});
  }
  const Json meta{{"mode", "phase"},
                  {"build", build_id()},
                  {"config", cfg.settings},
                  {"reference_scale", {{"z1", kReferenceInDegree}, {"n1", kReferenceGroupSize}}},
                  {"grids", files}};
  write_file(dir / "phase.json", meta.dump(2) + "\n");
  return grids;
}

inline Json cmd_psstar(const RunConfig& cfg) {
  const double b = cfg.get<double>("b"), c = cfg.get<double>("c"), tol = cfg.get<double>("tol");
  if (!(b > 0.0 && c > 0.0)) throw UsageError("b and c must be positive");
  if (!(tol > 0.0)) throw UsageError("tol must be positive");
  auto out = to_json(critical_swap(b, c, tol));
  if (cfg.has("out")) {
    const auto dir = output_dir(cfg);
    write_file(dir / "psstar.json", out.dump(2) + "\n");
    write_config_sidecar(dir, cfg);
  }
  return out;
}

}  // namespace dircomm
