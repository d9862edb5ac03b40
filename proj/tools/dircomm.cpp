// Command-line front end: simulate, meanfield, classify, phase, psstar.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dircomm/commands.hpp"

namespace {

using dircomm::Json;

struct Subcommand {
  explicit Subcommand(CLI::App* sub) : app(sub) {}
  CLI::App* app;
  std::string config_path;
  Json overrides = Json::object();
};

template <class T>
void flag(Subcommand& sc, const std::string& name, const std::string& key, const std::string& help) {
  sc.app->add_option_function<T>(name, [&sc, key](const T& v) { sc.overrides[key] = v; }, help);
}

void common_flags(Subcommand& sc) {
  sc.app->add_option("--config", sc.config_path, "JSON file with flat key-value settings");
  flag<std::string>(sc, "--out", "out", "output directory");
  flag<std::uint64_t>(sc, "--seed", "seed", "base seed (replica k uses seed + k)");
  flag<long long>(sc, "--jobs", "jobs", "worker threads");
}

void model_flags(Subcommand& sc) {
  flag<long long>(sc, "--n0", "n0", "size of group 0");
  flag<long long>(sc, "--n1", "n1", "size of group 1");
  for (std::string g : {"0", "1"}) {
    flag<double>(sc, "--ps" + g, "ps" + g, "swap probability of group " + g);
    flag<double>(sc, "--pa" + g, "pa" + g, "assortative preference of group " + g);
    flag<double>(sc, "--alpha" + g, "alpha" + g, "in-edge removal probability of group " + g);
    flag<double>(sc, "--pr" + g, "pr" + g, "remove-move probability of group " + g);
  }
}

void error_line(const std::string& kind, const std::string& message) {
  std::cerr << Json{{"error", kind}, {"message", message}}.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-group directed network model: simulation, mean-field theory, phase maps"};
  app.require_subcommand(1);

  Subcommand simulate(app.add_subcommand("simulate", "evolve networks and record trajectories"));
  Subcommand meanfield(app.add_subcommand("meanfield", "equilibrium mean-field prediction"));
  Subcommand classify(app.add_subcommand("classify", "classify a density matrix"));
  Subcommand phase(app.add_subcommand("phase", "classify the (P^A_0, P^A_1) square"));
  Subcommand psstar(app.add_subcommand("psstar", "critical swap probability"));

  for (Subcommand* sc : {&simulate, &meanfield, &classify, &phase, &psstar}) common_flags(*sc);
  model_flags(simulate);
  model_flags(meanfield);
  flag<double>(simulate, "--q", "q", "initial Erdos-Renyi edge probability");
  flag<long long>(simulate, "--sweeps", "sweeps", "number of sweeps (N steps each)");
  flag<long long>(simulate, "--sample-every", "sample_every", "sampling interval in sweeps");
  flag<long long>(simulate, "--replicas", "replicas", "independent replicas");
  flag<double>(simulate, "--window", "window", "trailing fraction of sweeps to average");

  flag<std::vector<double>>(classify, "--omega", "omega", "w00 w01 w10 w11");
  flag<std::string>(classify, "--omega-file", "omega_file", "JSON file with an omega matrix");
  flag<std::string>(classify, "--graph", "graph", "edge-list snapshot");

  for (Subcommand* sc : {&phase, &psstar}) {
    flag<double>(*sc, "--b", "b", "in-degree ratio <z>_0/<z>_1");
    flag<double>(*sc, "--c", "c", "group size ratio N_0/N_1");
  }
  flag<std::vector<double>>(phase, "--ps", "ps", "swap probabilities, one grid each");
  flag<double>(phase, "--pr", "pr", "remove-move probability");
  flag<long long>(phase, "--resolution", "resolution", "cells per axis");
  flag<double>(psstar, "--tol", "tol", "root tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    error_line("usage", e.what());
    return 2;
  }

  try {
    Subcommand* active = nullptr;
    for (Subcommand* sc : {&simulate, &meanfield, &classify, &phase, &psstar})
      if (sc->app->parsed()) active = sc;

    dircomm::RunConfig cfg;
    cfg.mode = active->app->get_name();
    if (!active->config_path.empty())
      dircomm::merge_settings(cfg.settings, dircomm::load_json_file(active->config_path),
                              active->config_path);
    dircomm::merge_settings(cfg.settings, active->overrides, "flags");

    if (cfg.mode == "simulate") {
      auto res = dircomm::cmd_simulate(cfg);
      std::cout << res.summary.at("classification").dump() << '\n';
    } else if (cfg.mode == "meanfield") {
      std::cout << dircomm::cmd_meanfield(cfg).dump(2) << '\n';
    } else if (cfg.mode == "classify") {
      std::cout << dircomm::cmd_classify(cfg).dump() << '\n';
    } else if (cfg.mode == "phase") {
      auto grids = dircomm::cmd_phase(cfg);
      std::cout << Json{{"grids", grids.size()}, {"out", cfg.get<std::string>("out")}}.dump() << '\n';
    } else {
      std::cout << dircomm::cmd_psstar(cfg).dump(2) << '\n';
    }
  } catch (const dircomm::UsageError& e) {
    error_line("usage", e.what());
    return 2;
  } catch (const std::exception& e) {
    error_line("runtime", e.what());
    return 1;
  }
  std::cout.flush();
  return std::cout ? 0 : 1;
}
