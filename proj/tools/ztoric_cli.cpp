/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

// ztoric: command-line runs over the Z3 toric-code simulator.
//
// Exit codes: 0 success, 2 configuration error, 3 invariant failure.
// Precedence: flags > --config JSON > built-in defaults.
// Output goes to --out, else $ZTORIC_OUT_DIR/<command>.json, else stdout.
// Run metadata (timestamp, threads) is written next to the result as
// <out>.meta.json so the result itself stays byte-identical across runs.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "cli_runs.hpp"

using namespace ztoric;
using namespace ztoric::cli;

namespace {

struct Binding {
  CLI::Option *opt;
  std::function<void(RunConfig &, const RunConfig &)> copy;
};

template <class T>
CLI::Option *bind_opt(CLI::App *app, std::vector<Binding> &b, RunConfig &flags,
                      const std::string &name, T RunConfig::*m, const std::string &help) {
  CLI::Option *o = app->add_option(name, flags.*m, help);
  b.push_back({o, [m](RunConfig &dst, const RunConfig &src) { dst.*m = src.*m; }});
  return o;
}

void write_file(const std::string &path, const std::string &text) {
  std::filesystem::path p(path);
  if (p.has_parent_path())
    std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ConfigError("cannot write " + path);
  out << text;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Z3 toric-code stabilizer simulator"};
  app.require_subcommand(1);
  RunConfig flags;
  std::string config_path;
  std::string noise_flag;
  std::vector<Binding> binds;
  std::vector<CLI::Option *> noise_opts, herald_opts, mitigate_opts;
  bool herald_flag = true, mitigate_flag = false;

  const std::vector<std::pair<std::string, std::string>> help = {
      {"prepare", "ground state on an Lx x Ly torus (Fig. 2)"},
      {"braid-pf", "charge braided through a PF defect (Fig. 3)"},
      {"braid-cc", "flux braided through a CC ribbon (Fig. 4a-h)"},
      {"fuse-pf-pfstar", "PF x PF* fusion against the CC ribbon (Fig. 4i-j)"},
      {"topo-qutrit", "topological qutrit from two CC pairs (Fig. 5)"},
      {"compile", "two-qubit encoding and gate counts"},
      {"verify", "oracle suites: conjugation, encoder, oracle"},
      {"bounds", "fidelity bounds from projector expectations"}};

  for (const auto &[name, text] : help) {
    CLI::App *sub = app.add_subcommand(name, text);
    sub->add_option("--config", config_path, "JSON config file");
    bind_opt(sub, binds, flags, "--out,-o", &RunConfig::out, "result JSON path");
    bind_opt(sub, binds, flags, "--csv", &RunConfig::csv, "CSV table path");
    bind_opt(sub, binds, flags, "--seed", &RunConfig::seed, "base seed");
    bind_opt(sub, binds, flags, "--threads", &RunConfig::threads, "worker threads");
    bind_opt(sub, binds, flags, "--shots", &RunConfig::shots, "shots");
    if (name == "prepare" || name == "topo-qutrit" || name.rfind("braid", 0) == 0 ||
        name == "fuse-pf-pfstar") {
      noise_opts.push_back(sub->add_option("--noise", noise_flag, "on or off")
                               ->check(CLI::IsMember({"on", "off"})));
      bind_opt(sub, binds, flags, "--backend", &RunConfig::backend,
               "qutrit or encoded");
      bind_opt(sub, binds, flags, "--p1", &RunConfig::p1, "one-qudit depolarizing");
      bind_opt(sub, binds, flags, "--p2", &RunConfig::p2, "two-qudit depolarizing");
      bind_opt(sub, binds, flags, "--p-meas", &RunConfig::p_meas,
               "qutrit measurement error");
      bind_opt(sub, binds, flags, "--bitflip", &RunConfig::bitflip,
               "native bit flip per qubit-gate (encoded)");
      bind_opt(sub, binds, flags, "--p01", &RunConfig::p01, "P(read 0 | 1)");
      bind_opt(sub, binds, flags, "--p10", &RunConfig::p10, "P(read 1 | 0)");
      herald_opts.push_back(sub->add_flag("--herald,!--no-herald", herald_flag,
                                          "discard shots with a leaked pair"));
      mitigate_opts.push_back(sub->add_flag("--mitigate,!--no-mitigate",
                                            mitigate_flag,
                                            "invert readout confusion"));
    }
    if (name == "prepare") {
      bind_opt(sub, binds, flags, "--lx", &RunConfig::lx, "lattice width");
      bind_opt(sub, binds, flags, "--ly", &RunConfig::ly, "lattice height");
      bind_opt(sub, binds, flags, "--policy", &RunConfig::policy, "schedule policy");
    }
    if (name == "topo-qutrit")
      bind_opt(sub, binds, flags, "--variant,--preset", &RunConfig::preset,
               "6x4 or 6x2");
    if (name == "compile") {
      bind_opt(sub, binds, flags, "--preset", &RunConfig::preset, "prepare-<Lx>x<Ly>");
      bind_opt(sub, binds, flags, "--circuit", &RunConfig::circuit_file,
               "circuit JSON file");
      bind_opt(sub, binds, flags, "--basis", &RunConfig::basis, "z or x");
      bind_opt(sub, binds, flags, "--policy", &RunConfig::policy,
               "asap or plaquette-serial");
      bind_opt(sub, binds, flags, "--emit", &RunConfig::emit, "compiled circuit path");
      bind_opt(sub, binds, flags, "--emit-format", &RunConfig::emit_format,
               "json or qasm");
    }
    if (name == "verify") {
      bind_opt(sub, binds, flags, "--suite", &RunConfig::suites, "suite names");
      bind_opt(sub, binds, flags, "--circuits", &RunConfig::oracle_circuits,
               "oracle circuits");
    }
    if (name == "bounds") {
      bind_opt(sub, binds, flags, "--trp", &RunConfig::trp, "Tr[rho P]");
      bind_opt(sub, binds, flags, "--trq", &RunConfig::trq, "Tr[rho Q]");
      bind_opt(sub, binds, flags, "--sep", &RunConfig::sep, "SE of P");
      bind_opt(sub, binds, flags, "--seq", &RunConfig::seq, "SE of Q");
      bind_opt(sub, binds, flags, "--sites", &RunConfig::sites, "number of sites");
      bind_opt(sub, binds, flags, "--x-triple", &RunConfig::x_triple,
               "charge-loop sectors")->expected(3);
      bind_opt(sub, binds, flags, "--z-triple", &RunConfig::z_triple,
               "flux-pair sectors")->expected(3);
      bind_opt(sub, binds, flags, "--outcome", &RunConfig::outcome, "ancilla outcome");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  try {
    RunConfig cfg;
    cfg.command = app.get_subcommands().front()->get_name();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in)
        throw ConfigError("cannot read config " + config_path);
      json j;
      try {
        j = json::parse(in);
      } catch (const json::exception &e) {
        throw ConfigError(std::string("config is not JSON: ") + e.what());
      }
      const std::string cmd = cfg.command;
      apply_config_json(cfg, j);
      if (cfg.command != cmd)
        throw ConfigError("config names command '" + cfg.command + "'");
    }
    for (const auto &b : binds)
      if (b.opt->count())
        b.copy(cfg, flags);
    for (auto *o : noise_opts)
      if (o->count())
        cfg.noise = noise_flag == "on";
    for (auto *o : herald_opts)
      if (o->count())
        cfg.herald = herald_flag;
    for (auto *o : mitigate_opts)
      if (o->count())
        cfg.mitigate = mitigate_flag;
    finalize(cfg);

    std::string csv, emitted;
    const auto t0 = std::chrono::steady_clock::now();
    json doc = run_command(cfg, cfg.csv.empty() ? nullptr : &csv,
                           cfg.emit.empty() ? nullptr : &emitted);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::string out = cfg.out;
    if (out.empty())
      if (const char *dir = std::getenv("ZTORIC_OUT_DIR"); dir && *dir)
        out = (std::filesystem::path(dir) / (cfg.command + ".json")).string();
    const std::string text = doc.dump(2) + "\n";
    if (out.empty()) {
      std::cout << text;
    } else {
      write_file(out, text);
      json meta = {{"timestamp_utc", utc_now()},
                   {"wall_seconds", secs},
                   {"threads", cfg.threads},
                   {"result", std::filesystem::path(out).filename().string()}};
      write_file(out + ".meta.json", meta.dump(2) + "\n");
    }
    if (!cfg.csv.empty() && !csv.empty())
      write_file(cfg.csv, csv);
    if (!cfg.emit.empty())
      write_file(cfg.emit, emitted);
    const json &res = doc["results"];
    if (res.contains("ok") && !res["ok"].get<bool>()) {
      std::cerr << "ztoric: verification failed\n";
      return 3;
    }
    return 0;
  } catch (const ConfigError &e) {
    std::cerr << "ztoric: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "ztoric: internal error: " << e.what() << "\n";
    return 3;
  }
}
