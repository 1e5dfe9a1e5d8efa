/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#pragma once

#include <array>
#include <string>
#include <vector>

#include "ztoric/circuit.hpp"
#include "ztoric/encoding.hpp"
#include "ztoric/json_io.hpp"

namespace ztoric {

/// Per-qubit readout confusion: p01 = P(read 0 | 1), p10 = P(read 1 | 0).
struct ConfusionMatrix {
  double p01 = 0.0;
  double p10 = 0.0;

  /// Rates reported for the hardware readout.
  static ConfusionMatrix device() { return {2.37e-3, 0.82e-3}; }
  bool identity() const { return p01 == 0.0 && p10 == 0.0; }
  /// Throws std::invalid_argument outside [0, 0.5) or when singular.
  void validate() const;
};

// ---------------------------------------------------------------- bounds

struct FidelityBound {
  double trP = 0.0, trQ = 0.0;
  double lower = 0.0, upper = 0.0;
  double per_site_lower = 0.0, per_site_upper = 0.0;
  int n_sites = 1;
  /// Standard errors; zero when the inputs carry none.
  double lower_se = 0.0, upper_se = 0.0;
  double per_site_lower_se = 0.0, per_site_upper_se = 0.0;
  /// An input lay outside [0, 1] and was clamped.
  bool clamped = false;
};

/// lower = max(0, trP + trQ - 1), upper = min(trP, trQ); per-site values are
/// the n_sites-th roots. SEs add in quadrature for the lower bound, follow
/// the smaller input for the upper one, and pass through the root by the
/// delta method. Throws std::invalid_argument for n_sites < 1.
FidelityBound fidelity_bounds(double trP, double trQ, int n_sites,
                              double seP = 0.0, double seQ = 0.0);

/// Topological-qutrit bound for ancilla outcome j: P is the omega^j sector
/// of the charge loop, Q the trivial sector of the flux loop pair. Triples
/// are (Pi^1, Pi^w, Pi^w2). Throws for j outside {0, 1, 2}.
FidelityBound topological_qutrit_bounds(const std::array<double, 3> &x_triple,
                                        const std::array<double, 3> &z_triple,
                                        int j,
                                        const std::array<double, 3> &x_se = {},
                                        const std::array<double, 3> &z_se = {});

// ------------------------------------------------------------------ SPAM

/// Forward readout noise on a distribution over `width` bits (bit i of the
/// index is qubit i).
std::vector<double> spam_forward(const std::vector<double> &dist, int width,
                                 const ConfusionMatrix &cm);

struct MitigatedDistribution {
  int width = 0;
  std::vector<double> p;
  /// Entries below zero are kept; these record that they exist.
  bool has_negative = false;
  double min_value = 0.0;
};

/// Applies the tensor-product inverse of the confusion matrix.
/// Throws std::invalid_argument when p01 + p10 >= 1 or on a size mismatch.
MitigatedDistribution spam_mitigate(const std::vector<double> &dist, int width,
                                    const ConfusionMatrix &cm);

/// Empirical distribution of the listed raw qubits (qubit_bits indices).
std::vector<double> marginal_distribution(const std::vector<ShotRecord> &records,
                                          const std::vector<int> &qubits);

/// Projector estimate for sum_i e_i * creg[c_i] from raw qubit pairs of the
/// encoded backend. Records flagged herald_discard are skipped. With a
/// non-identity confusion matrix the pair marginal is mitigated and then
/// restricted to code patterns (no pair reading 01) and renormalized.
PlaquetteSnapshot
plaquette_from_qubits(const std::vector<ShotRecord> &records,
                      const std::vector<std::pair<int, int>> &terms,
                      const ConfusionMatrix &cm, const std::string &label,
                      const std::string &type);

// ---------------------------------------------------------------- energy

struct EnergyEstimate {
  double value = 0.0;
  double se = 0.0;
  int n_plaquettes = 0;
};

/// -(mean Pi^1) over the snapshots. With `expected` non-empty every listed
/// label must be present. Throws std::invalid_argument when empty, when a
/// snapshot has no Pi^1, or when a label is missing.
EnergyEstimate energy_density(const std::vector<PlaquetteSnapshot> &snaps,
                              const std::vector<std::string> &expected = {});

/// sqrt(p (1 - p) / n) per entry; throws for n = 0.
std::vector<double> binomial_se(const std::vector<double> &p, long n);
double max_standard_error(const std::vector<PlaquetteSnapshot> &snaps);
/// Standard deviation of the resampled mean of 0/1 samples.
double bootstrap_se(const std::vector<uint8_t> &samples, int resamples,
                    uint64_t seed);

// ------------------------------------------------------------------ I/O

PlaquetteSnapshot snapshot_from_json(const json &j);
/// Accepts an array of snapshots or an object with a "snapshots" array.
std::vector<PlaquetteSnapshot> snapshots_from_json(const json &j);

struct TopoRow {
  int outcome = 0;
  std::array<double, 3> x_triple{}, z_triple{};
  FidelityBound bound;
};

/// label,type,pi1,pi_w,pi_w2,se1,samples
std::string snapshot_table_csv(const std::vector<PlaquetteSnapshot> &snaps);
/// outcome,x_pi1,x_pi_w,x_pi_w2,z_pi1,z_pi_w,z_pi_w2,lower,upper,lower_se,
/// upper_se
std::string topo_table_csv(const std::vector<TopoRow> &rows);
json fidelity_bound_to_json(const FidelityBound &b);

} // namespace ztoric
