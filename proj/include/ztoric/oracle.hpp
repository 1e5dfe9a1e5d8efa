/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ztoric {

// Randomized tableau-vs-dense sampling suite. Each program is random gates
// with measurements of random one- or two-site Weyl observables inserted;
// the exact outcome distribution is enumerated on the dense oracle and
// compared with tableau samples.
struct OracleConfig {
  int circuits = 100;
  int max_qutrits = 5;
  int max_measurements = 4;
  int max_depth = 30;
  long shots = 10000;
  uint64_t seed = 12345;
  int d = 3;
};

struct OracleCase {
  int n = 0;
  int depth = 0;
  int measurements = 0;
  double tvd = 0.0;
  /// Sum over outcomes of 3 sigma binomial deviations, halved like the TVD.
  double tolerance = 0.0;
  /// Tableau returned an outcome with zero dense probability.
  bool impossible = false;
  bool pass() const { return !impossible && tvd <= tolerance + 1e-12; }
};

struct OracleReport {
  std::vector<OracleCase> cases;
  int failures() const;
  bool pass() const { return failures() == 0; }
};

OracleReport run_oracle_suite(const OracleConfig &cfg);

/// Largest deviation between the tabulated Weyl conjugation of every gate
/// kind and U W U^dag computed densely, over all local Weyl operators.
double conjugation_table_deviation(int d = 3);

} // namespace ztoric
