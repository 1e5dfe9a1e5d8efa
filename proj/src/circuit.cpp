/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#include "ztoric/circuit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace ztoric {

int NoiseChannel::arity() const {
  switch (kind) {
  case NoiseKind::Depolarizing1: return 1;
  case NoiseKind::Depolarizing2: return 2;
  case NoiseKind::WeylCustom: return -1;
  }
  return -1;
}

void NoiseChannel::validate(int d, int n_sites) const {
  if (kind != NoiseKind::WeylCustom) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("noise probability outside [0,1]");
    if (n_sites != arity())
      throw std::invalid_argument("depolarizing channel site count mismatch");
    return;
  }
  double tot = 0;
  for (const auto &[label, w] : weights) {
    if (!(w >= 0.0 && w <= 1.0))
      throw std::invalid_argument("noise weight outside [0,1]");
    WeylOp op = WeylOp::parse(d, label);
    if (op.n() != n_sites)
      throw std::invalid_argument("noise label '" + label +
                                  "' does not match site count");
    if (op.weight() == 0)
      throw std::invalid_argument("noise label '" + label + "' is identity");
    tot += w;
  }
  if (tot > 1.0 + 1e-12)
    throw std::invalid_argument("noise weights sum above 1");
}

std::optional<WeylOp> NoiseChannel::sample(Rng &rng, int d,
                                           int n_sites) const {
  if (kind == NoiseKind::WeylCustom) {
    double r = rng.uniform01(), c = 0;
    for (const auto &[label, w] : weights) {
      c += w;
      if (r < c)
        return WeylOp::parse(d, label);
    }
    return std::nullopt;
  }
  if (!rng.bernoulli(p))
    return std::nullopt;
  int count = 1;
  for (int i = 0; i < 2 * n_sites; ++i)
    count *= d;
  int idx = 1 + rng.uniform_int(count - 1);
  WeylOp w(d, n_sites);
  for (int s = 0; s < n_sites; ++s) {
    int x = idx % d;
    idx /= d;
    int z = idx % d;
    idx /= d;
    w.set(s, x, z);
  }
  return w;
}

Circuit::Circuit(int d, int n_qudits, int n_cregs)
    : d_(d), n_(n_qudits), n_cregs_(n_cregs) {
  require_odd_prime(d);
  if (n_qudits < 1)
    throw std::invalid_argument("circuit needs at least one qudit");
  if (n_cregs < 0)
    throw std::invalid_argument("negative creg count");
}

Circuit &Circuit::gate(GateKind k, int a, int b, int group) {
  return gate(CliffordGate(k, a, b), group);
}

Circuit &Circuit::gate(const CliffordGate &g, int group) {
  ins_.push_back(GateInstr{g, group});
  return *this;
}

Circuit &Circuit::measure(const WeylOp &obs, int creg) {
  ins_.push_back(MeasureInstr{obs, creg});
  return *this;
}

Circuit &Circuit::cond(int creg, std::vector<Branch> branches) {
  ins_.push_back(CondInstr{creg, std::move(branches)});
  return *this;
}

Circuit &Circuit::noise(const NoiseChannel &ch, std::vector<int> sites) {
  ins_.push_back(NoiseInstr{ch, std::move(sites)});
  return *this;
}

Circuit &Circuit::pauli(const WeylOp &op) {
  ins_.push_back(PauliInstr{op});
  return *this;
}

Circuit &Circuit::barrier() {
  ins_.push_back(BarrierInstr{});
  return *this;
}

Circuit &Circuit::push(Instruction ins) {
  ins_.push_back(std::move(ins));
  return *this;
}

Circuit &Circuit::append(const Circuit &other) {
  if (other.d_ != d_ || other.n_ != n_)
    throw std::invalid_argument("append: register mismatch");
  const int shift = n_cregs_;
  for (Instruction ins : other.ins_) {
    if (auto *m = std::get_if<MeasureInstr>(&ins))
      m->creg += shift;
    if (auto *c = std::get_if<CondInstr>(&ins))
      c->creg += shift;
    ins_.push_back(std::move(ins));
  }
  n_cregs_ += other.n_cregs_;
  return *this;
}

int Circuit::measure_all(char basis) {
  if (basis != 'X' && basis != 'Z')
    throw std::invalid_argument("measure_all basis must be X or Z");
  barrier();
  const int first = n_cregs_;
  for (int q = 0; q < n_; ++q) {
    int c = add_creg();
    measure(basis == 'X' ? WeylOp::X(d_, n_, q) : WeylOp::Z(d_, n_, q), c);
  }
  return first;
}

void Circuit::validate() const {
  std::vector<bool> written(n_cregs_, false);
  auto check_gate = [&](const CliffordGate &g) {
    for (int q : g.targets())
      if (q < 0 || q >= n_)
        throw std::invalid_argument("gate target out of range");
  };
  auto check_op = [&](const WeylOp &w) {
    if (w.d != d_ || w.n() != n_)
      throw std::invalid_argument("observable size mismatch");
  };
  for (size_t i = 0; i < ins_.size(); ++i) {
    const auto &ins = ins_[i];
    std::string where = " (instruction " + std::to_string(i) + ")";
    if (auto *g = std::get_if<GateInstr>(&ins)) {
      check_gate(g->gate);
    } else if (auto *m = std::get_if<MeasureInstr>(&ins)) {
      check_op(m->obs);
      if (m->creg < 0 || m->creg >= n_cregs_)
        throw std::invalid_argument("measure creg out of range" + where);
      written[m->creg] = true;
    } else if (auto *c = std::get_if<CondInstr>(&ins)) {
      if (c->creg < 0 || c->creg >= n_cregs_)
        throw std::invalid_argument("condition creg out of range" + where);
      if (!written[c->creg])
        throw std::invalid_argument("creg read before written" + where);
      if (static_cast<int>(c->branches.size()) != d_)
        throw std::invalid_argument("predicate must cover all d outcomes" +
                                    where);
      for (const auto &b : c->branches) {
        for (const auto &g : b.gates)
          check_gate(g);
        if (b.pauli)
          check_op(*b.pauli);
      }
    } else if (auto *nz = std::get_if<NoiseInstr>(&ins)) {
      nz->channel.validate(d_, static_cast<int>(nz->sites.size()));
      std::vector<int> s = nz->sites;
      std::sort(s.begin(), s.end());
      if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw std::invalid_argument("noise sites repeat" + where);
      for (int q : s)
        if (q < 0 || q >= n_)
          throw std::invalid_argument("noise site out of range" + where);
    } else if (auto *p = std::get_if<PauliInstr>(&ins)) {
      check_op(p->op);
    }
  }
}

void execute(const Circuit &c, StabilizerTableau &t, std::vector<int> &cregs) {
  if (static_cast<int>(cregs.size()) != c.n_cregs())
    throw std::invalid_argument("creg vector size mismatch");
  for (const auto &ins : c.instructions()) {
    if (auto *g = std::get_if<GateInstr>(&ins)) {
      t.apply_gate(g->gate);
    } else if (auto *m = std::get_if<MeasureInstr>(&ins)) {
      cregs[m->creg] = t.measure_weyl(m->obs).value;
    } else if (auto *cd = std::get_if<CondInstr>(&ins)) {
      const Branch &b = cd->branches.at(cregs[cd->creg]);
      for (const auto &g : b.gates)
        t.apply_gate(g);
      if (b.pauli)
        t.apply_weyl(*b.pauli);
    } else if (auto *nz = std::get_if<NoiseInstr>(&ins)) {
      const int k = static_cast<int>(nz->sites.size());
      if (auto e = nz->channel.sample(t.rng(), c.d(), k))
        t.apply_weyl(embed(*e, c.n_qudits(), nz->sites));
    } else if (auto *p = std::get_if<PauliInstr>(&ins)) {
      t.apply_weyl(p->op);
    }
  }
}

ShotRecord run_shot(const Circuit &c, uint64_t seed) {
  StabilizerTableau t(c.d(), c.n_qudits(), seed);
  ShotRecord r;
  r.seed = seed;
  r.creg_values.assign(c.n_cregs(), 0);
  execute(c, t, r.creg_values);
  return r;
}

std::vector<ShotRecord>
run_parallel(long n, int threads, const std::function<ShotRecord(long)> &fn) {
  std::vector<ShotRecord> out(std::max(0L, n));
  if (n <= 0)
    return out;
  int workers = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (workers == 1) {
    for (long i = 0; i < n; ++i)
      out[i] = fn(i);
    return out;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&]() {
      try {
        for (long i = next++; i < n && !failed; i = next++)
          out[i] = fn(i);
      } catch (...) {
        if (!failed.exchange(true))
          err = std::current_exception();
      }
    });
  for (auto &th : pool)
    th.join();
  if (err)
    std::rethrow_exception(err);
  return out;
}

std::vector<ShotRecord> run_shots(const Circuit &c, long n_shots,
                                  uint64_t base_seed, int threads) {
  c.validate();
  return run_parallel(n_shots, threads, [&](long i) {
    return run_shot(c, stable_hash(base_seed, static_cast<uint64_t>(i)));
  });
}

double arg_degrees(std::complex<double> z) {
  double a = std::atan2(z.imag(), z.real()) * 180.0 / M_PI;
  if (a < 0)
    a += 360.0;
  if (a >= 360.0 - 1e-9)
    a = 0.0;
  return a;
}

namespace {

std::complex<double> omega(int k, int d) {
  return std::polar(1.0, 2.0 * M_PI * k / d);
}

} // namespace

PlaquetteSnapshot snapshot_exact(const StabilizerTableau &t, const WeylOp &w,
                                 const std::string &label,
                                 const std::string &type) {
  PlaquetteSnapshot s;
  s.label = label;
  s.type = type;
  s.expectation = t.expectation_weyl(w);
  const int d = t.d();
  s.pi.resize(d);
  for (int a = 0; a < d; ++a)
    s.pi[a] = t.projector_expectation(w, a);
  s.se.assign(d, 0.0);
  if (std::abs(s.expectation) > 1e-9)
    s.arg_deg = arg_degrees(s.expectation);
  return s;
}

PlaquetteSnapshot snapshot_from_histogram(const std::vector<double> &counts,
                                          double n_eff,
                                          const std::string &label,
                                          const std::string &type) {
  const int d = static_cast<int>(counts.size());
  PlaquetteSnapshot s;
  s.label = label;
  s.type = type;
  s.samples = static_cast<long>(std::llround(n_eff));
  s.pi.assign(d, 0.0);
  s.se.assign(d, 0.0);
  if (n_eff <= 0)
    throw std::invalid_argument("estimate needs at least one retained shot");
  for (int k = 0; k < d; ++k) {
    double p = counts[k] / n_eff;
    s.pi[k] = p;
    double q = std::clamp(p, 0.0, 1.0);
    s.se[k] = std::sqrt(q * (1 - q) / n_eff);
    s.expectation += p * omega(k, d);
  }
  if (std::abs(s.expectation) > 1e-9)
    s.arg_deg = arg_degrees(s.expectation);
  return s;
}

PlaquetteSnapshot
estimate_from_records(const std::vector<ShotRecord> &records, int d,
                      const std::vector<std::pair<int, int>> &terms,
                      const std::string &label, const std::string &type) {
  std::vector<double> counts(d, 0.0);
  long n = 0;
  for (const auto &r : records) {
    if (r.herald_discard)
      continue;
    long long k = 0;
    for (const auto &[creg, e] : terms)
      k += static_cast<long long>(e) * r.creg_values.at(creg);
    counts[mod(k, d)] += 1.0;
    ++n;
  }
  return snapshot_from_histogram(counts, static_cast<double>(n), label, type);
}

} // namespace ztoric
