/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#pragma once

#include <map>
#include <string>
#include <vector>

#include "ztoric/dense.hpp"
#include "ztoric/encoding.hpp"
#include "ztoric/json_io.hpp"

namespace ztoric {

enum class NativeKind { U1q, RZ, ZZPhase, MeasureZ };
std::string native_name(NativeKind k);

/// Angles in half turns: RZ(t) = exp(-i pi t Z / 2),
/// ZZPhase(t) = exp(-i pi t ZZ / 2),
/// U1q(t, f) = exp(-i pi t (cos(pi f) X + sin(pi f) Y) / 2).
struct NativeGate {
  NativeKind kind = NativeKind::RZ;
  double theta = 0.0;
  double phi = 0.0;
  int q0 = 0;
  int q1 = -1;

  static NativeGate u1q(int q, double t, double f) {
    return {NativeKind::U1q, t, f, q, -1};
  }
  static NativeGate rz(int q, double t) { return {NativeKind::RZ, t, 0, q, -1}; }
  static NativeGate zz(int a, int b, double t) {
    return {NativeKind::ZZPhase, t, 0, a, b};
  }
  bool two_qubit() const { return kind == NativeKind::ZZPhase; }
};

/// Gate-level primitives the encoder decomposes.
enum class QutritPrim {
  Z,
  Zdag,
  X,
  Xdag,
  C,
  H,
  Hdag,
  CX,
  CXdag,
  CZ,
  CZdag,
  Mprep
};
std::string prim_name(QutritPrim p);
QutritPrim prim_from_name(const std::string &s);
const std::vector<QutritPrim> &all_prims();
int prim_arity(QutritPrim p);
/// Throws std::invalid_argument for gates without an encoded form.
QutritPrim prim_from_gate(GateKind k);

/// Native sequence for one primitive on qutrits a (and b), using qubits
/// 2a, 2a+1 (2b, 2b+1). Mprep only has to map |00> to H|00>.
std::vector<NativeGate> decompose(QutritPrim p, int a, int b = -1);
int zz_budget(QutritPrim p);

/// Inverse sequence.
std::vector<NativeGate> dagger(const std::vector<NativeGate> &seq);

/// Dense matrix of a native sequence on n qubits (qubit 0 least
/// significant, matching the dense oracle).
CMatrix native_unitary(const std::vector<NativeGate> &seq, int n_qubits);
/// 2x2 or 4x4 matrix of one gate.
CMatrix native_local_matrix(const NativeGate &g);

/// Target for a primitive on the encoded pairs: the qutrit gate on the
/// computational triple; H and Hdag fix |nc>.
CMatrix prim_target(QutritPrim p);

/// Largest entrywise deviation between the built and target matrices on
/// the encoded columns after global-phase alignment (state vectors for
/// Mprep). `perturb` is added to the first native angle.
double verify_decomposition(QutritPrim p, double perturb = 0.0);
/// Same check for an explicit sequence on one or two qutrits.
double encoded_deviation(const std::vector<NativeGate> &seq,
                         const CMatrix &target_on_encoded, int n_qutrits,
                         bool state_only = false);

// --------------------------------------------------------------- compile

enum class SchedulePolicy {
  /// Native gates placed as early as their qubits allow.
  Asap,
  /// Barrier whenever the scheduling group (plaquette) changes.
  PlaquetteSerial
};
std::string policy_name(SchedulePolicy p);
SchedulePolicy policy_from_name(const std::string &s);

/// Native gates with the qutrit action they implement.
struct NativeSeq {
  std::vector<int> qutrits;
  std::vector<NativeGate> natives;
  /// Ideal qutrit-level action, applied in order.
  std::vector<CliffordGate> ideal;
  /// Primitive labels, e.g. {"H", "Z"}.
  std::vector<std::string> prims;
};

enum class BlockKind { Unitary, Measure, Cond, Barrier };

struct EncodedBlock {
  BlockKind kind = BlockKind::Unitary;
  NativeSeq seq;
  /// Measure: creg receives offset + scale * (Z outcome) mod 3.
  int creg = -1;
  int scale = 1;
  int offset = 0;
  /// Cond: branch per creg value.
  std::vector<NativeSeq> branches;
};

struct CompileReport {
  long two_qubit_count = 0;
  long u1q_count = 0;
  long rz_count = 0;
  long measure_count = 0;
  /// Longest chain of native gates sharing a qubit, barriers cutting
  /// layers; RZ and measurements included.
  long depth = 0;
  long two_qubit_depth = 0;
  std::map<std::string, long> prim_counts;
  std::map<std::string, int> budgets;
  /// Two-qubit gates inside conditional branches (not in the totals).
  long conditional_two_qubit = 0;
  SchedulePolicy policy = SchedulePolicy::Asap;
};

struct EncodedCircuit {
  int n_qutrits = 0;
  int n_qubits = 0;
  int n_cregs = 0;
  std::vector<EncodedBlock> blocks;
  CompileReport report;

  /// Unconditional natives in order, barriers dropped.
  std::vector<NativeGate> flat() const;
};

/// Peephole compile: runs of single-qutrit gates on a qutrit are merged to
/// X^a Z^b H^k and emitted once; H on a fresh |0> becomes Mprep; CX is
/// H^dag CZ H on the target. Measurements must be single-site Z- or X-type.
/// With zero_inputs false no qutrit is assumed to start in |0>, so every
/// primitive is emitted with its full budget.
/// Throws std::invalid_argument for unsupported instructions.
EncodedCircuit encode_circuit(const Circuit &c,
                              SchedulePolicy policy = SchedulePolicy::Asap,
                              bool zero_inputs = true);

json compile_report_to_json(const CompileReport &r);
/// Qubit-flavor circuit document.
json encoded_to_json(const EncodedCircuit &e);
/// Plain-text dump, one statement per line:
///   ZTQASM 1; qubits N; cregs M;
///   u1q(t,f) q[i]; rz(t) q[i]; zzphase(t) q[i],q[j];
///   measure q[i],q[j] -> c[k] scale s; barrier;
///   if (c[k]==v) { ... }
std::string encoded_to_qasm(const EncodedCircuit &e);

} // namespace ztoric
