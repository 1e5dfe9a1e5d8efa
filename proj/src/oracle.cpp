/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#include "ztoric/oracle.hpp"

#include <cmath>
#include <map>

#include "ztoric/dense.hpp"
#include "ztoric/tableau.hpp"

namespace ztoric {

namespace {

struct Step {
  bool is_measure = false;
  CliffordGate gate;
  WeylOp obs;
};

const std::vector<GateKind> kKinds = {
    GateKind::ShiftX,    GateKind::ShiftXdag,  GateKind::ClockZ,
    GateKind::ClockZdag, GateKind::Conj,       GateKind::Fourier,
    GateKind::FourierDag, GateKind::CX,        GateKind::CXdag,
    GateKind::CZ,        GateKind::CZdag};

CliffordGate random_gate(Rng &rng, int n) {
  GateKind k = kKinds[rng.uniform_int(static_cast<int>(kKinds.size()))];
  if (gate_arity(k) == 1)
    return CliffordGate(k, rng.uniform_int(n));
  if (n < 2)
    return CliffordGate(GateKind::Fourier, 0);
  int a = rng.uniform_int(n);
  int b = rng.uniform_int(n - 1);
  if (b >= a)
    ++b;
  return CliffordGate(k, a, b);
}

std::vector<Step> random_program(Rng &rng, int d, int n, int depth,
                                 int n_meas) {
  std::vector<Step> prog;
  for (int i = 0; i < depth; ++i) {
    Step s;
    s.gate = random_gate(rng, n);
    prog.push_back(s);
  }
  for (int m = 0; m < n_meas; ++m) {
    Step s;
    s.is_measure = true;
    WeylOp w(d, n);
    int a = rng.uniform_int(n);
    w.set(a, rng.uniform_int(d), rng.uniform_int(d));
    if (rng.uniform_int(2) && n > 1)
      w.set((a + 1) % n, rng.uniform_int(d), rng.uniform_int(d));
    w.phase = rng.uniform_int(d);
    s.obs = w;
    int pos = rng.uniform_int(static_cast<int>(prog.size()) + 1);
    prog.insert(prog.begin() + pos, s);
  }
  return prog;
}

using Key = std::vector<int>;

void dense_distribution(const std::vector<Step> &prog, size_t at,
                        DenseState st, double p, Key key,
                        std::map<Key, double> &out) {
  for (size_t i = at; i < prog.size(); ++i) {
    if (!prog[i].is_measure) {
      st.apply_gate(prog[i].gate);
      continue;
    }
    auto probs = st.outcome_probabilities(prog[i].obs);
    for (int s = 0; s < st.d(); ++s) {
      if (probs[s] < 1e-10)
        continue;
      DenseState b = st;
      b.project(prog[i].obs, s);
      Key k2 = key;
      k2.push_back(s);
      dense_distribution(prog, i + 1, b, p * probs[s], k2, out);
    }
    return;
  }
  out[key] += p;
}

Key tableau_run(const std::vector<Step> &prog, int d, int n, uint64_t seed) {
  StabilizerTableau t(d, n, seed);
  Key k;
  for (const auto &s : prog) {
    if (s.is_measure)
      k.push_back(t.measure_weyl(s.obs).value);
    else
      t.apply_gate(s.gate);
  }
  return k;
}

} // namespace

int OracleReport::failures() const {
  int f = 0;
  for (const auto &c : cases)
    f += !c.pass();
  return f;
}

OracleReport run_oracle_suite(const OracleConfig &cfg) {
  Rng rng(cfg.seed);
  OracleReport rep;
  for (int c = 0; c < cfg.circuits; ++c) {
    OracleCase oc;
    oc.n = 1 + rng.uniform_int(cfg.max_qutrits);
    oc.depth = 1 + rng.uniform_int(cfg.max_depth);
    oc.measurements = 1 + rng.uniform_int(cfg.max_measurements);
    auto prog = random_program(rng, cfg.d, oc.n, oc.depth, oc.measurements);
    std::map<Key, double> exact;
    dense_distribution(prog, 0, DenseState(cfg.d, oc.n), 1.0, {}, exact);
    std::map<Key, long> counts;
    for (long s = 0; s < cfg.shots; ++s)
      ++counts[tableau_run(prog, cfg.d, oc.n,
                           stable_hash(cfg.seed + c, static_cast<uint64_t>(s)))];
    double tvd = 0, bound = 0;
    const double shots = static_cast<double>(cfg.shots);
    for (const auto &[k, p] : exact) {
      auto it = counts.find(k);
      const double f = it == counts.end() ? 0.0 : it->second / shots;
      tvd += std::abs(f - p);
      bound += 3.0 * std::sqrt(std::max(0.0, p * (1 - p)) / shots);
    }
    for (const auto &[k, cnt] : counts)
      oc.impossible |= !exact.count(k);
    oc.tvd = 0.5 * tvd;
    oc.tolerance = 0.5 * bound;
    rep.cases.push_back(oc);
  }
  return rep;
}

double conjugation_table_deviation(int d) {
  double worst = 0;
  for (GateKind k : kKinds) {
    const int a = gate_arity(k);
    CliffordGate g = a == 1 ? CliffordGate(k, 0) : CliffordGate(k, 0, 1);
    const CMatrix u = gate_matrix(k, d);
    const int count = a == 1 ? d * d : d * d * d * d;
    for (int idx = 0; idx < count; ++idx) {
      WeylOp w(d, a);
      int rem = idx;
      for (int s = a - 1; s >= 0; --s) {
        const int z = rem % d;
        rem /= d;
        const int x = rem % d;
        rem /= d;
        w.set(s, x, z);
      }
      const CMatrix want = u * weyl_matrix(w) * u.adjoint();
      const CMatrix got = weyl_matrix(conjugate_by_gate(g, w));
      worst = std::max(worst, (want - got).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

} // namespace ztoric
