/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ztoric/tableau.hpp"
#include "ztoric/weyl.hpp"

namespace ztoric {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Reference statevector over d-level sites; site 0 is the fastest-varying
/// index. Sizes are capped: d^n <= 3^10 for qutrits, 2^20 for qubits.
class DenseState {
public:
  DenseState(int d, int n);
  static constexpr long kMaxDim = 1L << 20;

  int d() const { return d_; }
  int n() const { return n_; }
  long dim() const { return static_cast<long>(amp_.size()); }
  const CVector &amplitudes() const { return amp_; }
  CVector &amplitudes() { return amp_; }

  void apply_matrix(const CMatrix &u, const std::vector<int> &sites);
  void apply_gate(const CliffordGate &g);
  void apply_weyl(const WeylOp &w);
  double norm() const { return amp_.norm(); }

  /// Probability of each outcome s (eigenvalue omega^s) of w.
  std::vector<double> outcome_probabilities(const WeylOp &w) const;
  /// Born-rule sample; collapses onto the outcome eigenspace.
  int measure_projective(const WeylOp &w, Rng &rng);
  void project(const WeylOp &w, int outcome);
  cplx expectation(const WeylOp &w) const;

private:
  int d_;
  int n_;
  CVector amp_;
};

/// Dense matrix of w on d^n amplitudes (site 0 least significant).
CMatrix weyl_matrix(const WeylOp &w);
/// Local d x d or d^2 x d^2 matrix of a Clifford gate (site q0 least
/// significant for two-qudit gates).
CMatrix gate_matrix(GateKind k, int d);
/// Full-register matrix of a gate on n sites.
CMatrix gate_matrix_full(const CliffordGate &g, int d, int n);

double fidelity(const DenseState &a, const DenseState &b);
/// Dense vector of the state stabilized by the tableau.
DenseState dense_from_tableau(const StabilizerTableau &t);

} // namespace ztoric
