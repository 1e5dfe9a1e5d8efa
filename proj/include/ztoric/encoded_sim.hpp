/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#pragma once

#include <vector>

#include "ztoric/analysis.hpp"
#include "ztoric/encoder.hpp"

namespace ztoric {

/// Noise on native gates. Depolarizing p1 after each U1q, p2 after each
/// ZZPhase (15 two-qubit Paulis), and an independent X flip with
/// probability `bitflip` on every qubit of every U1q and ZZPhase. RZ is
/// virtual and noiseless.
struct NativeNoise {
  double p1 = 0.0;
  double p2 = 0.0;
  double bitflip = 0.0;
  ConfusionMatrix readout;
  bool any() const {
    return p1 > 0 || p2 > 0 || bitflip > 0 || !readout.identity();
  }
};

/// Shot simulator for compiled circuits. The qutrit state is a stabilizer
/// tableau; a native error is carried to the end of its block, split into
/// the part that leaves the code space (the affected qutrits are flagged as
/// leaked) and a Pauli-twirled qutrit Weyl error. Leaked qutrits read out
/// as |01> before readout confusion.
class EncodedSimulator {
public:
  EncodedSimulator(EncodedCircuit ec, NativeNoise noise);

  const EncodedCircuit &circuit() const { return ec_; }
  const NativeNoise &noise() const { return noise_; }

  /// creg_values are decoded outcomes (0 where the pair read |01>);
  /// qubit_bits hold the raw pair of each creg.
  ShotRecord run_shot(uint64_t seed) const;
  std::vector<ShotRecord> run(long shots, uint64_t base_seed,
                              int threads = 1) const;

  /// Leading-order discard probability: the summed leak probability of
  /// every noisy location, plus readout of |00> as 01 and |11> as 01 with
  /// the values taken as uniformly distributed.
  double first_order_discard() const;

  struct Outcome {
    double p = 0.0;
    /// Bit i set: cluster qutrit i leaked.
    int leak_mask = 0;
    /// Weyl exponents per cluster qutrit (ignored when leaking).
    std::vector<uint8_t> x, z;
  };
  struct Location {
    std::vector<int> qutrits;
    double p_event = 0.0;
    std::vector<Outcome> outcomes;
    std::vector<double> cumulative;
    double leak_probability() const;
  };

private:
  std::vector<Location> locations_for(const NativeSeq &s) const;
  void apply_seq(const NativeSeq &s, const std::vector<Location> &locs,
                 StabilizerTableau &t, std::vector<bool> &leaked,
                 Rng &rng) const;

  EncodedCircuit ec_;
  NativeNoise noise_;
  /// Per block; Cond blocks use branch_locs_.
  std::vector<std::vector<Location>> locs_;
  std::vector<std::vector<std::vector<Location>>> branch_locs_;
};

struct HeraldResult {
  std::vector<ShotRecord> retained;
  long discarded = 0;
  double discard_fraction = 0.0;
};

/// Drops shots in which any qutrit read |01>. Every record must carry two
/// bits per creg; throws std::invalid_argument otherwise.
HeraldResult herald_filter(const std::vector<ShotRecord> &records,
                           int n_cregs);

} // namespace ztoric
