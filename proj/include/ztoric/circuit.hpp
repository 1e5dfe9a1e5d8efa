/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ztoric/tableau.hpp"
#include "ztoric/weyl.hpp"

namespace ztoric {

enum class NoiseKind { Depolarizing1, Depolarizing2, WeylCustom };

struct NoiseChannel {
  NoiseKind kind = NoiseKind::Depolarizing1;
  double p = 0.0;
  /// WeylCustom only: local labels (see WeylOp::parse) -> probability.
  std::map<std::string, double> weights;

  static NoiseChannel depolarizing1(double p) {
    return {NoiseKind::Depolarizing1, p, {}};
  }
  static NoiseChannel depolarizing2(double p) {
    return {NoiseKind::Depolarizing2, p, {}};
  }
  int arity() const;
  void validate(int d, int n_sites) const;
  /// Sampled local error on the channel's sites, or nullopt for identity.
  std::optional<WeylOp> sample(Rng &rng, int d, int n_sites) const;
};

struct GateInstr {
  CliffordGate gate;
  /// Scheduling group (e.g. plaquette index); -1 when ungrouped.
  int group = -1;
};

struct MeasureInstr {
  WeylOp obs;
  int creg = 0;
};

/// One outcome branch of a conditional: gates then an optional Weyl
/// operator; an empty branch is a skip.
struct Branch {
  std::vector<CliffordGate> gates;
  std::optional<WeylOp> pauli;
  bool empty() const { return gates.empty() && !pauli; }
};

struct CondInstr {
  int creg = 0;
  std::vector<Branch> branches; // indexed by outcome, size d
};

struct NoiseInstr {
  NoiseChannel channel;
  std::vector<int> sites;
};

/// Unconditional Weyl operator applied as a unitary.
struct PauliInstr {
  WeylOp op;
};

struct BarrierInstr {};

using Instruction = std::variant<GateInstr, MeasureInstr, CondInstr,
                                 NoiseInstr, PauliInstr, BarrierInstr>;

class Circuit {
public:
  Circuit() = default;
  Circuit(int d, int n_qudits, int n_cregs = 0);

  int d() const { return d_; }
  int n_qudits() const { return n_; }
  int n_cregs() const { return n_cregs_; }
  const std::vector<Instruction> &instructions() const { return ins_; }
  size_t size() const { return ins_.size(); }

  int add_creg() { return n_cregs_++; }
  void set_n_cregs(int k) { n_cregs_ = k; }

  Circuit &gate(GateKind k, int a, int b = -1, int group = -1);
  Circuit &gate(const CliffordGate &g, int group = -1);
  Circuit &measure(const WeylOp &obs, int creg);
  Circuit &cond(int creg, std::vector<Branch> branches);
  Circuit &noise(const NoiseChannel &ch, std::vector<int> sites);
  Circuit &pauli(const WeylOp &op);
  Circuit &barrier();
  Circuit &push(Instruction ins);
  /// Appends another circuit over the same register (its cregs shifted).
  Circuit &append(const Circuit &other);
  /// Measures every qudit in the X or Z basis into cregs first..first+n-1,
  /// preceded by a barrier. Returns the first creg used.
  int measure_all(char basis);

  /// Throws std::invalid_argument describing the first violation.
  void validate() const;

private:
  int d_ = 3;
  int n_ = 0;
  int n_cregs_ = 0;
  std::vector<Instruction> ins_;
};

struct ShotRecord {
  std::vector<int> creg_values;
  bool herald_discard = false;
  uint64_t seed = 0;
  /// Two bits per measured qutrit (encoded backend only).
  std::vector<uint8_t> qubit_bits;
};

/// Runs the instructions on an existing tableau; `cregs` must have
/// circuit.n_cregs() entries.
void execute(const Circuit &c, StabilizerTableau &t, std::vector<int> &cregs);
ShotRecord run_shot(const Circuit &c, uint64_t seed);

/// Calls fn(i) for i in [0, n) over `threads` workers; results keep index
/// order so aggregation does not depend on scheduling.
std::vector<ShotRecord>
run_parallel(long n, int threads, const std::function<ShotRecord(long)> &fn);
std::vector<ShotRecord> run_shots(const Circuit &c, long n_shots,
                                  uint64_t base_seed, int threads = 1);

/// Per-observable summary; pi[a] is the weight of the omega^a sector.
struct PlaquetteSnapshot {
  std::string label;
  std::string type;
  std::complex<double> expectation;
  std::vector<double> pi;
  std::optional<double> arg_deg;
  std::vector<double> se;
  long samples = 0;
};

double arg_degrees(std::complex<double> z);
PlaquetteSnapshot snapshot_exact(const StabilizerTableau &t, const WeylOp &w,
                                 const std::string &label,
                                 const std::string &type);
/// Histogram of k = sum_i e_i * creg[c_i] over records, turned into
/// projector estimates with binomial standard errors. Records flagged
/// herald_discard are skipped.
PlaquetteSnapshot
estimate_from_records(const std::vector<ShotRecord> &records, int d,
                      const std::vector<std::pair<int, int>> &terms,
                      const std::string &label, const std::string &type);
/// Snapshot from an outcome histogram (counts[k] for k in Z_d), possibly
/// with non-integer (mitigated) weights.
PlaquetteSnapshot snapshot_from_histogram(const std::vector<double> &counts,
                                          double n_eff,
                                          const std::string &label,
                                          const std::string &type);

} // namespace ztoric
