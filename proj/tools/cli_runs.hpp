/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ztoric/json_io.hpp"

namespace ztoric::cli {

inline constexpr int kResultSchemaVersion = 1;

/// Exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Exit code 3.
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  int lx = 6, ly = 4;
  /// compile: prepare-<Lx>x<Ly>; topo-qutrit: 6x4 or 6x2.
  std::string preset;
  std::string circuit_file;
  long shots = 0;
  uint64_t seed = 1;
  int threads = 1;

  bool noise = false;
  /// "qutrit" (stochastic Weyl noise) or "encoded" (native-gate noise).
  std::string backend = "qutrit";
  double p1 = 0.0;
  double p2 = 2e-3;
  double p_meas = 0.0;
  double bitflip = 0.0;
  double p01 = 2.37e-3;
  double p10 = 0.82e-3;
  bool herald = true;
  bool mitigate = false;

  std::string basis = "z";
  std::string policy = "asap";
  std::string emit_format;

  double trp = -1, trq = -1, sep = 0, seq = 0;
  int sites = 24;
  std::vector<double> x_triple, z_triple;
  int outcome = -1;

  std::vector<std::string> suites;
  long oracle_circuits = 100;

  /// Not echoed: they do not change the results.
  std::string out, csv, emit;
};

/// Overlays keys of a config document onto `cfg`. Unknown keys or wrong
/// types raise ConfigError.
void apply_config_json(RunConfig &cfg, const json &j);
/// Fills command defaults (e.g. shots) and validates ranges.
void finalize(RunConfig &cfg);
json config_to_json(const RunConfig &cfg);

const std::vector<std::string> &commands();
/// Figure tag for figure presets, empty otherwise.
std::string citation_for(const RunConfig &cfg);

/// Result document without metadata. `csv` receives a table when the
/// command has one; `emitted` the compiled circuit for `compile --emit`.
json run_command(const RunConfig &cfg, std::string *csv,
                 std::string *emitted);

} // namespace ztoric::cli
