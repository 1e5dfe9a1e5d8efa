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
#include <random>
#include <vector>

#include "ztoric/weyl.hpp"

namespace ztoric {

/// Seeded random stream. Bounded draws use rejection sampling on the raw
/// 64-bit engine output so results do not depend on the standard library's
/// distribution implementations.
class Rng {
public:
  explicit Rng(uint64_t seed = 0) : eng_(seed) {}
  uint64_t next() { return eng_(); }
  int uniform_int(int bound);
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return p > 0 && uniform01() < p; }

private:
  std::mt19937_64 eng_;
};

/// splitmix64 finaliser, used for stable seed derivation.
uint64_t mix64(uint64_t x);
uint64_t stable_hash(uint64_t base, uint64_t index);

struct MeasurementOutcome {
  int value = 0;
  bool deterministic = false;
};

class StabilizerTableau {
public:
  StabilizerTableau(int d, int n, uint64_t seed = 0);
  static StabilizerTableau new_computational(int d, int n, uint64_t seed = 0) {
    return StabilizerTableau(d, n, seed);
  }

  int d() const { return d_; }
  int n() const { return n_; }
  const std::vector<WeylOp> &stabilizers() const { return stab_; }
  const std::vector<WeylOp> &destabilizers() const { return destab_; }
  Rng &rng() { return rng_; }

  void apply_gate(const CliffordGate &g);
  /// Applies a Weyl operator as a unitary (Pauli frame update).
  void apply_weyl(const WeylOp &w);
  MeasurementOutcome measure_weyl(const WeylOp &w);
  /// Measurement with a forced outcome for random cases (used by oracle
  /// tests to walk every branch). Returns false if the forced value is
  /// impossible because the outcome is deterministic and differs.
  bool measure_weyl_forced(const WeylOp &w, int value,
                           MeasurementOutcome *out = nullptr);

  /// 0 or omega^k.
  std::complex<double> expectation_weyl(const WeylOp &w) const;
  /// -1 when the expectation is 0, otherwise k with <w> = omega^k.
  int expectation_exponent(const WeylOp &w) const;
  /// (1/d) sum_k omega^{-ak} <w^k>, i.e. the weight of the omega^a sector.
  double projector_expectation(const WeylOp &w, int a) const;

  /// Throws InvariantError when commutation, pairing or rank fails.
  void check_invariants() const;
  /// True when both tableaus stabilize the same state.
  bool same_state(const StabilizerTableau &o) const;

private:
  MeasurementOutcome measure_impl(const WeylOp &w, int forced);
  void check_op(const WeylOp &w) const;

  int d_;
  int n_;
  std::vector<WeylOp> stab_;
  std::vector<WeylOp> destab_;
  Rng rng_;
};

/// Rank of a list of Weyl exponent vectors over Z_d.
int weyl_rank(const std::vector<WeylOp> &ops);

/// Solves for c with sum_j c_j * sp(ops_j, constraint_k) = 0 for all k,
/// returning a basis of the solution space over Z_d.
std::vector<std::vector<int>>
commuting_combinations(const std::vector<WeylOp> &ops,
                       const std::vector<WeylOp> &constraints);

/// Product ops_0^{c_0} ops_1^{c_1} ... in list order.
WeylOp weyl_product(const std::vector<WeylOp> &ops, const std::vector<int> &c);

} // namespace ztoric
