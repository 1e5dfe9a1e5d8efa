/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#include "ztoric/encoder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ztoric {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Qutrit Fourier gate on one encoded pair, three ZZPhase. Per layer:
// U1q(t, f) RZ(t) on q0, the same on q1, then ZZPhase (absent after the
// last layer). Found by least-squares fit to the target and locked by the
// verify_decomposition tests.
constexpr std::array<double, 27> kHAngles = {
    0.15490648561403744,  1.6552718488703864,   -1.5377705589922142,
    1.2979484602545686,   -0.76906835187421652, 0.72941372458861908,
    0.35778523698317349,  -0.27382023108532122, 0.83173522646026732,
    -1.5407506137794815,  0.54771091759486956,  0.26153187601806149,
    -0.92086352314901099, 0.64125688991754304,  -0.73199906484248367,
    -1.2330530519796552,  -0.6582745850735392,  0.53311203290882103,
    -0.47617148974242118, 0.42148220505683298,  0.59137917989488198,
    -0.96194625553917779, -1.0487580433738442,  1.7143605267608233,
    1.4222931803207151,   1.1554656946553719,   -0.36940538281794305};

using Seq = std::vector<NativeGate>;

void cat(Seq &a, const Seq &b) { a.insert(a.end(), b.begin(), b.end()); }

// Qubit-level building blocks, all exact up to global phase.
Seq q_z(int q) { return {NativeGate::rz(q, 1.0)}; }
Seq q_s(int q, int sign = 1) { return {NativeGate::rz(q, 0.5 * sign)}; }
Seq q_x(int q) { return {NativeGate::u1q(q, 1.0, 0.0)}; }
Seq q_h(int q) { return {NativeGate::rz(q, 1.0), NativeGate::u1q(q, 0.5, 0.5)}; }
Seq q_ry(int q, double turns) { return {NativeGate::u1q(q, turns, 0.5)}; }
// exp(i 2 pi f n_a n_b)
Seq q_cphase(int a, int b, double f) {
  return {NativeGate::rz(a, f), NativeGate::rz(b, f), NativeGate::zz(a, b, -f)};
}
Seq q_cnot(int c, int t) {
  Seq s = q_h(t);
  cat(s, q_cphase(c, t, 0.5));
  cat(s, q_h(t));
  return s;
}

Seq fourier(int a) {
  Seq s;
  const int q[2] = {enc_q0(a), enc_q1(a)};
  size_t k = 0;
  for (int layer = 0; layer < 4; ++layer) {
    for (int i = 0; i < 2; ++i) {
      s.push_back(NativeGate::u1q(q[i], kHAngles[k], kHAngles[k + 1]));
      s.push_back(NativeGate::rz(q[i], kHAngles[k + 2]));
      k += 3;
    }
    if (layer < 3)
      s.push_back(NativeGate::zz(q[0], q[1], kHAngles[k++]));
  }
  return s;
}

Seq clock(int a, int sign) {
  return {NativeGate::rz(enc_q0(a), sign * 2.0 / 3),
          NativeGate::rz(enc_q1(a), sign * 2.0 / 3)};
}

Seq controlled_clock(int a, int b, int sign) {
  // omega^{(a0 + a1)(b0 + b1)}: four controlled phases, local parts merged
  Seq s;
  for (int q : {enc_q0(a), enc_q1(a), enc_q0(b), enc_q1(b)})
    s.push_back(NativeGate::rz(q, sign * 2.0 / 3));
  for (int qa : {enc_q0(a), enc_q1(a)})
    for (int qb : {enc_q0(b), enc_q1(b)})
      s.push_back(NativeGate::zz(qa, qb, -sign / 3.0));
  return s;
}

Seq shift(int a) {
  // |q0 q1> -> |not q1, q0 xor q1>
  const int q0 = enc_q0(a), q1 = enc_q1(a);
  Seq s = q_cnot(q0, q1);
  cat(s, q_cnot(q1, q0));
  cat(s, q_x(q0));
  return s;
}

Seq conj(int a) {
  // |0><0| (x) Z + |1><1| (x) X on (q0, q1): S_q0 Z_q1 CY, CY = S CNOT S^dag
  const int q0 = enc_q0(a), q1 = enc_q1(a);
  Seq s = q_s(q1, -1);
  cat(s, q_cnot(q0, q1));
  cat(s, q_s(q1));
  cat(s, q_s(q0));
  cat(s, q_z(q1));
  return s;
}

Seq mprep(int a) {
  // RY on q0 to weights (1/3, 2/3), then RY(pi/2) on q1 controlled by q0
  const int q0 = enc_q0(a), q1 = enc_q1(a);
  Seq s = q_ry(q0, 2.0 * std::acos(1.0 / std::sqrt(3.0)) / kPi);
  cat(s, q_ry(q1, -0.25));
  cat(s, q_cphase(q0, q1, 0.5));
  cat(s, q_ry(q1, 0.25));
  return s;
}

cplx omega(int k) {
  return std::polar(1.0, 2 * kPi * mod(k, 3) / 3.0);
}

Eigen::Matrix3cd qutrit_matrix(GateKind k) {
  return gate_matrix(k, 3);
}

Eigen::Matrix3cd weyl3(int a, int b) {
  // X^a Z^b
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
  for (int i = 0; i < 3; ++i)
    m((i + a) % 3, i) = omega(b * i);
  return m;
}

// Canonical X^a Z^b F^k forms of the single-qutrit gates reachable from
// the supported set.
struct Canon {
  int a = 0, b = 0, k = 0;
};

const std::vector<std::pair<Canon, Eigen::Matrix3cd>> &canon_table() {
  static const auto table = [] {
    std::vector<std::pair<Canon, Eigen::Matrix3cd>> t;
    Eigen::Matrix3cd f = qutrit_matrix(GateKind::Fourier);
    Eigen::Matrix3cd fk = Eigen::Matrix3cd::Identity();
    for (int k = 0; k < 4; ++k) {
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          t.push_back({Canon{a, b, k}, weyl3(a, b) * fk});
      fk = f * fk;
    }
    return t;
  }();
  return table;
}

bool proportional(const Eigen::Matrix3cd &u, const Eigen::Matrix3cd &v) {
  Eigen::Index r = 0, c = 0;
  v.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(u(r, c)) < 1e-9)
    return false;
  cplx ph = u(r, c) / v(r, c);
  return (u - ph * v).cwiseAbs().maxCoeff() < 1e-9;
}

Canon canonical(const Eigen::Matrix3cd &u) {
  for (const auto &[c, m] : canon_table())
    if (proportional(u, m))
      return c;
  throw std::logic_error("single-qutrit gate outside the encoded group");
}

} // namespace

std::string native_name(NativeKind k) {
  switch (k) {
  case NativeKind::U1q: return "U1q";
  case NativeKind::RZ: return "RZ";
  case NativeKind::ZZPhase: return "ZZPhase";
  case NativeKind::MeasureZ: return "MeasureZ";
  }
  return "?";
}

std::string prim_name(QutritPrim p) {
  switch (p) {
  case QutritPrim::Z: return "Z";
  case QutritPrim::Zdag: return "Zdag";
  case QutritPrim::X: return "X";
  case QutritPrim::Xdag: return "Xdag";
  case QutritPrim::C: return "C";
  case QutritPrim::H: return "H";
  case QutritPrim::Hdag: return "Hdag";
  case QutritPrim::CX: return "CX";
  case QutritPrim::CXdag: return "CXdag";
  case QutritPrim::CZ: return "CZ";
  case QutritPrim::CZdag: return "CZdag";
  case QutritPrim::Mprep: return "Mprep";
  }
  return "?";
}

const std::vector<QutritPrim> &all_prims() {
  static const std::vector<QutritPrim> v = {
      QutritPrim::Z,  QutritPrim::Zdag,  QutritPrim::X,  QutritPrim::Xdag,
      QutritPrim::C,  QutritPrim::H,     QutritPrim::Hdag, QutritPrim::CX,
      QutritPrim::CXdag, QutritPrim::CZ, QutritPrim::CZdag, QutritPrim::Mprep};
  return v;
}

QutritPrim prim_from_name(const std::string &s) {
  for (auto p : all_prims())
    if (prim_name(p) == s)
      return p;
  throw std::invalid_argument("unknown encoded primitive '" + s + "'");
}

int prim_arity(QutritPrim p) {
  switch (p) {
  case QutritPrim::CX:
  case QutritPrim::CXdag:
  case QutritPrim::CZ:
  case QutritPrim::CZdag:
    return 2;
  default:
    return 1;
  }
}

QutritPrim prim_from_gate(GateKind k) {
  switch (k) {
  case GateKind::ShiftX: return QutritPrim::X;
  case GateKind::ShiftXdag: return QutritPrim::Xdag;
  case GateKind::ClockZ: return QutritPrim::Z;
  case GateKind::ClockZdag: return QutritPrim::Zdag;
  case GateKind::Conj: return QutritPrim::C;
  case GateKind::Fourier: return QutritPrim::H;
  case GateKind::FourierDag: return QutritPrim::Hdag;
  case GateKind::CX: return QutritPrim::CX;
  case GateKind::CXdag: return QutritPrim::CXdag;
  case GateKind::CZ: return QutritPrim::CZ;
  case GateKind::CZdag: return QutritPrim::CZdag;
  }
  throw std::invalid_argument("gate has no encoded form");
}

std::vector<NativeGate> dagger(const std::vector<NativeGate> &seq) {
  std::vector<NativeGate> out(seq.rbegin(), seq.rend());
  for (auto &g : out)
    if (g.kind != NativeKind::MeasureZ)
      g.theta = -g.theta;
  return out;
}

std::vector<NativeGate> decompose(QutritPrim p, int a, int b) {
  if (prim_arity(p) == 2 && (b < 0 || b == a))
    throw std::invalid_argument("two-qutrit primitive needs distinct qutrits");
  switch (p) {
  case QutritPrim::Z: return clock(a, 1);
  case QutritPrim::Zdag: return clock(a, -1);
  case QutritPrim::X: return shift(a);
  case QutritPrim::Xdag: return dagger(shift(a));
  case QutritPrim::C: return conj(a);
  case QutritPrim::H: return fourier(a);
  case QutritPrim::Hdag: return dagger(fourier(a));
  case QutritPrim::CZ: return controlled_clock(a, b, 1);
  case QutritPrim::CZdag: return controlled_clock(a, b, -1);
  case QutritPrim::CX:
  case QutritPrim::CXdag: {
    // F^dag Z^a F = X^a on the target
    Seq s = fourier(b);
    cat(s, controlled_clock(a, b, p == QutritPrim::CX ? 1 : -1));
    cat(s, dagger(fourier(b)));
    return s;
  }
  case QutritPrim::Mprep: return mprep(a);
  }
  throw std::invalid_argument("unsupported primitive");
}

int zz_budget(QutritPrim p) {
  int n = 0;
  for (const auto &g : decompose(p, 0, prim_arity(p) == 2 ? 1 : -1))
    n += g.two_qubit();
  return n;
}

CMatrix native_local_matrix(const NativeGate &g) {
  const double h = kPi * g.theta / 2;
  const cplx i(0, 1);
  switch (g.kind) {
  case NativeKind::RZ: {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = std::exp(-i * h);
    m(1, 1) = std::exp(i * h);
    return m;
  }
  case NativeKind::U1q: {
    const cplx n01 = std::cos(kPi * g.phi) - i * std::sin(kPi * g.phi);
    CMatrix m(2, 2);
    m(0, 0) = std::cos(h);
    m(1, 1) = std::cos(h);
    m(0, 1) = -i * std::sin(h) * n01;
    m(1, 0) = -i * std::sin(h) * std::conj(n01);
    return m;
  }
  case NativeKind::ZZPhase: {
    CMatrix m = CMatrix::Zero(4, 4);
    for (int k = 0; k < 4; ++k) {
      const int par = ((k & 1) ^ (k >> 1)) ? -1 : 1;
      m(k, k) = std::exp(-i * h * double(par));
    }
    return m;
  }
  case NativeKind::MeasureZ:
    break;
  }
  throw std::invalid_argument("measurement has no unitary");
}

CMatrix native_unitary(const std::vector<NativeGate> &seq, int n_qubits) {
  DenseState probe(2, n_qubits);
  const long dim = probe.dim();
  CMatrix u(dim, dim);
  for (long c = 0; c < dim; ++c) {
    probe.amplitudes().setZero();
    probe.amplitudes()(c) = 1.0;
    for (const auto &g : seq) {
      if (g.q0 >= n_qubits || g.q1 >= n_qubits)
        throw std::invalid_argument("native gate outside register");
      if (g.two_qubit())
        probe.apply_matrix(native_local_matrix(g), {g.q0, g.q1});
      else
        probe.apply_matrix(native_local_matrix(g), {g.q0});
    }
    u.col(c) = probe.amplitudes();
  }
  return u;
}

CMatrix prim_target(QutritPrim p) {
  const int m = prim_arity(p);
  const long dim = m == 1 ? 4 : 16;
  CMatrix t = CMatrix::Identity(dim, dim);
  if (p == QutritPrim::Mprep) {
    t.setZero();
    CMatrix f = gate_matrix(GateKind::Fourier, 3);
    for (int j = 0; j < 3; ++j)
      t(kEncodedIndex[j], 0) = f(j, 0);
    return t;
  }
  static const std::map<QutritPrim, GateKind> kind = {
      {QutritPrim::Z, GateKind::ClockZ},     {QutritPrim::Zdag, GateKind::ClockZdag},
      {QutritPrim::X, GateKind::ShiftX},     {QutritPrim::Xdag, GateKind::ShiftXdag},
      {QutritPrim::C, GateKind::Conj},       {QutritPrim::H, GateKind::Fourier},
      {QutritPrim::Hdag, GateKind::FourierDag}, {QutritPrim::CX, GateKind::CX},
      {QutritPrim::CXdag, GateKind::CXdag},  {QutritPrim::CZ, GateKind::CZ},
      {QutritPrim::CZdag, GateKind::CZdag}};
  CMatrix g = gate_matrix(kind.at(p), 3);
  if (m == 1) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        t(kEncodedIndex[i], kEncodedIndex[j]) = g(i, j);
    return t;
  }
  auto idx = [](int v0, int v1) {
    return kEncodedIndex[v0] + 4 * kEncodedIndex[v1];
  };
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j)
      t(idx(i % 3, i / 3), idx(j % 3, j / 3)) = g(i, j);
  return t;
}

double encoded_deviation(const std::vector<NativeGate> &seq,
                         const CMatrix &target, int n_qutrits,
                         bool state_only) {
  CMatrix u = native_unitary(seq, 2 * n_qutrits);
  std::vector<long> cols;
  if (state_only)
    cols.push_back(0);
  else if (n_qutrits == 1)
    cols = {0, 1, 3};
  else
    for (int v1 = 0; v1 < 3; ++v1)
      for (int v0 = 0; v0 < 3; ++v0)
        cols.push_back(kEncodedIndex[v0] + 4 * kEncodedIndex[v1]);
  // align global phase on the largest target entry
  double best = -1;
  cplx ph = 1.0;
  for (long c : cols)
    for (long r = 0; r < target.rows(); ++r)
      if (std::abs(target(r, c)) > best) {
        best = std::abs(target(r, c));
        ph = u(r, c) / target(r, c);
      }
  ph /= std::abs(ph);
  double dev = 0;
  for (long c : cols)
    dev = std::max(dev, (u.col(c) - ph * target.col(c)).cwiseAbs().maxCoeff());
  return dev;
}

double verify_decomposition(QutritPrim p, double perturb) {
  const int m = prim_arity(p);
  auto seq = decompose(p, 0, m == 2 ? 1 : -1);
  seq.front().theta += perturb;
  return encoded_deviation(seq, prim_target(p), m, p == QutritPrim::Mprep);
}

// ---------------------------------------------------------------- compile

std::string policy_name(SchedulePolicy p) {
  return p == SchedulePolicy::Asap ? "asap" : "plaquette-serial";
}

SchedulePolicy policy_from_name(const std::string &s) {
  if (s == "asap")
    return SchedulePolicy::Asap;
  if (s == "plaquette-serial")
    return SchedulePolicy::PlaquetteSerial;
  throw std::invalid_argument("unknown schedule policy '" + s + "'");
}

std::vector<NativeGate> EncodedCircuit::flat() const {
  std::vector<NativeGate> out;
  for (const auto &b : blocks)
    if (b.kind == BlockKind::Unitary || b.kind == BlockKind::Measure)
      cat(out, b.seq.natives);
  return out;
}

namespace {

void add_prim(NativeSeq &s, QutritPrim p, int a, int b = -1) {
  cat(s.natives, decompose(p, a, b));
  s.prims.push_back(prim_name(p));
}

class Compiler {
public:
  Compiler(const Circuit &c, SchedulePolicy pol, bool zero_inputs)
      : c_(c), pol_(pol), pending_(c.n_qudits(), Eigen::Matrix3cd::Identity()),
        fresh_(c.n_qudits(), zero_inputs), post_meas_(c.n_qudits(), false) {
    if (c.d() != 3)
      throw std::invalid_argument("the two-qubit encoding is for qutrits");
    out_.n_qutrits = c.n_qudits();
    out_.n_qubits = 2 * c.n_qudits();
    out_.n_cregs = c.n_cregs();
  }

  EncodedCircuit run() {
    for (const auto &ins : c_.instructions())
      std::visit([this](const auto &x) { on(x); }, ins);
    for (int q = 0; q < c_.n_qudits(); ++q)
      if (!post_meas_[q])
        flush(q);
    report();
    return std::move(out_);
  }

private:
  void touch(int q) {
    fresh_[q] = false;
    post_meas_[q] = false;
  }

  void left_mul(int q, const Eigen::Matrix3cd &m) {
    pending_[q] = m * pending_[q];
  }

  void flush(int q) {
    const Canon cn = canonical(pending_[q]);
    pending_[q].setIdentity();
    NativeSeq s;
    s.qutrits = {q};
    const bool fresh = fresh_[q];
    if (cn.k % 2 == 1) {
      if (fresh) {
        add_prim(s, QutritPrim::Mprep, q);
        s.ideal.emplace_back(GateKind::Fourier, q);
      } else {
        const bool h = cn.k == 1;
        add_prim(s, h ? QutritPrim::H : QutritPrim::Hdag, q);
        s.ideal.emplace_back(h ? GateKind::Fourier : GateKind::FourierDag, q);
      }
    } else if (cn.k == 2 && !fresh) {
      add_prim(s, QutritPrim::C, q);
      s.ideal.emplace_back(GateKind::Conj, q);
    }
    // Z^b acts trivially on a fresh |0> that was not rotated
    if (cn.b && !(fresh && cn.k % 2 == 0)) {
      add_prim(s, cn.b == 1 ? QutritPrim::Z : QutritPrim::Zdag, q);
      s.ideal.emplace_back(cn.b == 1 ? GateKind::ClockZ : GateKind::ClockZdag,
                           q);
    }
    if (cn.a) {
      add_prim(s, cn.a == 1 ? QutritPrim::X : QutritPrim::Xdag, q);
      s.ideal.emplace_back(cn.a == 1 ? GateKind::ShiftX : GateKind::ShiftXdag,
                           q);
    }
    if (s.natives.empty())
      return;
    touch(q);
    EncodedBlock b;
    b.seq = std::move(s);
    out_.blocks.push_back(std::move(b));
  }

  void barrier_block() {
    EncodedBlock b;
    b.kind = BlockKind::Barrier;
    out_.blocks.push_back(std::move(b));
  }

  void on(const GateInstr &g) {
    if (pol_ == SchedulePolicy::PlaquetteSerial && g.group >= 0 &&
        last_group_ >= 0 && g.group != last_group_)
      barrier_block();
    if (g.group >= 0)
      last_group_ = g.group;
    const CliffordGate &cg = g.gate;
    if (cg.arity() == 1) {
      prim_from_gate(cg.kind);
      left_mul(cg.q0, qutrit_matrix(cg.kind));
      post_meas_[cg.q0] = false;
      return;
    }
    const QutritPrim p = prim_from_gate(cg.kind);
    const bool is_cx = p == QutritPrim::CX || p == QutritPrim::CXdag;
    if (is_cx)
      left_mul(cg.q1, qutrit_matrix(GateKind::Fourier));
    flush(cg.q0);
    flush(cg.q1);
    const bool dag = p == QutritPrim::CXdag || p == QutritPrim::CZdag;
    NativeSeq s;
    s.qutrits = {cg.q0, cg.q1};
    add_prim(s, dag ? QutritPrim::CZdag : QutritPrim::CZ, cg.q0, cg.q1);
    s.ideal.emplace_back(dag ? GateKind::CZdag : GateKind::CZ, cg.q0, cg.q1);
    touch(cg.q0);
    touch(cg.q1);
    EncodedBlock b;
    b.seq = std::move(s);
    out_.blocks.push_back(std::move(b));
    if (is_cx)
      pending_[cg.q1] = qutrit_matrix(GateKind::FourierDag);
  }

  void on(const PauliInstr &p) {
    for (int s : p.op.support()) {
      left_mul(s, weyl3(p.op.x[s], p.op.z[s]));
      post_meas_[s] = false;
    }
  }

  void on(const MeasureInstr &m) {
    auto sup = m.obs.support();
    if (sup.size() != 1)
      throw std::invalid_argument(
          "encoded measurements must act on a single qutrit");
    const int q = sup[0];
    const int xe = m.obs.x[q], ze = m.obs.z[q];
    if (xe && ze)
      throw std::invalid_argument(
          "encoded measurements must be Z- or X-type");
    if (xe)
      left_mul(q, qutrit_matrix(GateKind::Fourier));
    flush(q);
    EncodedBlock b;
    b.kind = BlockKind::Measure;
    b.seq.qutrits = {q};
    b.seq.natives = {{NativeKind::MeasureZ, 0, 0, enc_q0(q), -1},
                     {NativeKind::MeasureZ, 0, 0, enc_q1(q), -1}};
    b.creg = m.creg;
    b.scale = xe ? xe : ze;
    b.offset = mod(m.obs.phase, 3);
    out_.blocks.push_back(std::move(b));
    touch(q);
    post_meas_[q] = true;
    if (xe)
      pending_[q] = qutrit_matrix(GateKind::FourierDag);
  }

  void on(const CondInstr &ci) {
    EncodedBlock b;
    b.kind = BlockKind::Cond;
    b.creg = ci.creg;
    std::set<int> all;
    for (const auto &br : ci.branches) {
      NativeSeq s;
      std::set<int> qs;
      for (const auto &g : br.gates) {
        const QutritPrim p = prim_from_gate(g.kind);
        add_prim(s, p, g.q0, g.q1);
        s.ideal.push_back(g);
        for (int q : g.targets())
          qs.insert(q);
      }
      if (br.pauli)
        for (int q : br.pauli->support()) {
          const int ze = br.pauli->z[q], xe = br.pauli->x[q];
          if (ze) {
            add_prim(s, ze == 1 ? QutritPrim::Z : QutritPrim::Zdag, q);
            s.ideal.emplace_back(ze == 1 ? GateKind::ClockZ
                                         : GateKind::ClockZdag,
                                 q);
          }
          if (xe) {
            add_prim(s, xe == 1 ? QutritPrim::X : QutritPrim::Xdag, q);
            s.ideal.emplace_back(xe == 1 ? GateKind::ShiftX
                                         : GateKind::ShiftXdag,
                                 q);
          }
          qs.insert(q);
        }
      s.qutrits.assign(qs.begin(), qs.end());
      all.insert(qs.begin(), qs.end());
      b.branches.push_back(std::move(s));
    }
    for (int q : all)
      flush(q);
    for (int q : all)
      touch(q);
    out_.blocks.push_back(std::move(b));
  }

  void on(const NoiseInstr &) {
    throw std::invalid_argument(
        "qutrit-level noise has no encoded form; use native noise");
  }

  // Pending single-qutrit gates move past the barrier; a final H^dag then
  // cancels against the H of an X-basis readout.
  void on(const BarrierInstr &) { barrier_block(); }

  void report() {
    CompileReport &r = out_.report;
    r.policy = pol_;
    for (auto p : all_prims())
      r.budgets[prim_name(p)] = zz_budget(p);
    const int n = out_.n_qubits;
    std::vector<long> t(n, 0), t2(n, 0);
    auto place = [&](const NativeGate &g) {
      std::vector<int> qs = {g.q0};
      if (g.q1 >= 0)
        qs.push_back(g.q1);
      long s = 0, s2 = 0;
      for (int q : qs) {
        s = std::max(s, t[q]);
        s2 = std::max(s2, t2[q]);
      }
      for (int q : qs) {
        t[q] = s + 1;
        if (g.two_qubit())
          t2[q] = s2 + 1;
        else
          t2[q] = s2;
      }
    };
    for (const auto &b : out_.blocks) {
      switch (b.kind) {
      case BlockKind::Barrier: {
        long m = *std::max_element(t.begin(), t.end());
        long m2 = *std::max_element(t2.begin(), t2.end());
        std::fill(t.begin(), t.end(), m);
        std::fill(t2.begin(), t2.end(), m2);
        break;
      }
      case BlockKind::Cond: {
        const NativeSeq *longest = nullptr;
        for (const auto &br : b.branches) {
          for (const auto &g : br.natives)
            r.conditional_two_qubit += g.two_qubit();
          if (!longest || br.natives.size() > longest->natives.size())
            longest = &br;
        }
        if (longest)
          for (const auto &g : longest->natives)
            place(g);
        break;
      }
      default:
        for (const auto &g : b.seq.natives) {
          switch (g.kind) {
          case NativeKind::ZZPhase: ++r.two_qubit_count; break;
          case NativeKind::U1q: ++r.u1q_count; break;
          case NativeKind::RZ: ++r.rz_count; break;
          case NativeKind::MeasureZ: ++r.measure_count; break;
          }
          place(g);
        }
        for (const auto &p : b.seq.prims)
          ++r.prim_counts[p];
      }
    }
    if (n > 0) {
      r.depth = *std::max_element(t.begin(), t.end());
      r.two_qubit_depth = *std::max_element(t2.begin(), t2.end());
    }
  }

  const Circuit &c_;
  SchedulePolicy pol_;
  std::vector<Eigen::Matrix3cd> pending_;
  std::vector<bool> fresh_, post_meas_;
  int last_group_ = -1;
  EncodedCircuit out_;
};

json native_to_json(const NativeGate &g) {
  json j{{"gate", native_name(g.kind)}};
  if (g.kind == NativeKind::U1q) {
    j["theta"] = g.theta;
    j["phi"] = g.phi;
  } else if (g.kind != NativeKind::MeasureZ) {
    j["theta"] = g.theta;
  }
  j["qubits"] = g.q1 < 0 ? json::array({g.q0}) : json::array({g.q0, g.q1});
  return j;
}

json seq_to_json(const NativeSeq &s) {
  json n = json::array();
  for (const auto &g : s.natives)
    n.push_back(native_to_json(g));
  return json{{"qutrits", s.qutrits}, {"prims", s.prims}, {"natives", n}};
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void qasm_gate(std::ostream &os, const NativeGate &g, const std::string &ind) {
  switch (g.kind) {
  case NativeKind::U1q:
    os << ind << "u1q(" << fmt(g.theta) << "," << fmt(g.phi) << ") q["
       << g.q0 << "];\n";
    break;
  case NativeKind::RZ:
    os << ind << "rz(" << fmt(g.theta) << ") q[" << g.q0 << "];\n";
    break;
  case NativeKind::ZZPhase:
    os << ind << "zzphase(" << fmt(g.theta) << ") q[" << g.q0 << "],q["
       << g.q1 << "];\n";
    break;
  case NativeKind::MeasureZ:
    break;
  }
}

} // namespace

EncodedCircuit encode_circuit(const Circuit &c, SchedulePolicy policy,
                              bool zero_inputs) {
  c.validate();
  return Compiler(c, policy, zero_inputs).run();
}

json compile_report_to_json(const CompileReport &r) {
  json pc = json::object(), bu = json::object();
  for (const auto &[k, v] : r.prim_counts)
    pc[k] = v;
  for (const auto &[k, v] : r.budgets)
    bu[k] = v;
  return json{{"policy", policy_name(r.policy)},
              {"two_qubit_count", r.two_qubit_count},
              {"u1q_count", r.u1q_count},
              {"rz_count", r.rz_count},
              {"measure_count", r.measure_count},
              {"depth", r.depth},
              {"two_qubit_depth", r.two_qubit_depth},
              {"conditional_two_qubit", r.conditional_two_qubit},
              {"primitive_counts", pc},
              {"zz_budgets", bu}};
}

json encoded_to_json(const EncodedCircuit &e) {
  json ins = json::array();
  for (const auto &b : e.blocks) {
    switch (b.kind) {
    case BlockKind::Barrier:
      ins.push_back(json{{"op", "barrier"}});
      break;
    case BlockKind::Unitary: {
      json j = seq_to_json(b.seq);
      j["op"] = "block";
      ins.push_back(j);
      break;
    }
    case BlockKind::Measure:
      ins.push_back(json{{"op", "measure"},
                         {"qutrit", b.seq.qutrits[0]},
                         {"qubits", json::array({enc_q0(b.seq.qutrits[0]),
                                                 enc_q1(b.seq.qutrits[0])})},
                         {"creg", b.creg},
                         {"scale", b.scale},
                         {"offset", b.offset}});
      break;
    case BlockKind::Cond: {
      json br = json::array();
      for (const auto &s : b.branches)
        br.push_back(seq_to_json(s));
      ins.push_back(json{{"op", "cond"}, {"creg", b.creg}, {"branches", br}});
      break;
    }
    }
  }
  return json{{"schema", "ztoric.circuit"},
              {"schema_version", kCircuitSchemaVersion},
              {"flavor", "qubit"},
              {"header",
               {{"n_qubits", e.n_qubits},
                {"n_qutrits", e.n_qutrits},
                {"n_cregs", e.n_cregs},
                {"encoding",
                 {{"0", "00"}, {"1", "10"}, {"2", "11"}, {"nc", "01"}}},
                {"angle_unit", "half-turns"}}},
              {"report", compile_report_to_json(e.report)},
              {"instructions", ins}};
}

std::string encoded_to_qasm(const EncodedCircuit &e) {
  std::ostringstream os;
  os << "ZTQASM 1;\nqubits " << e.n_qubits << ";\ncregs " << e.n_cregs
     << ";\n";
  for (const auto &b : e.blocks) {
    switch (b.kind) {
    case BlockKind::Barrier:
      os << "barrier;\n";
      break;
    case BlockKind::Unitary:
      for (const auto &g : b.seq.natives)
        qasm_gate(os, g, "");
      break;
    case BlockKind::Measure: {
      const int q = b.seq.qutrits[0];
      os << "measure q[" << enc_q0(q) << "],q[" << enc_q1(q) << "] -> c["
         << b.creg << "] scale " << b.scale;
      if (b.offset)
        os << " offset " << b.offset;
      os << ";\n";
      break;
    }
    case BlockKind::Cond:
      for (size_t v = 0; v < b.branches.size(); ++v) {
        if (b.branches[v].natives.empty())
          continue;
        os << "if (c[" << b.creg << "]==" << v << ") {\n";
        for (const auto &g : b.branches[v].natives)
          qasm_gate(os, g, "  ");
        os << "}\n";
      }
      break;
    }
  }
  return os.str();
}

} // namespace ztoric
