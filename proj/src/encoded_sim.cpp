/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#include "ztoric/encoded_sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace ztoric {

namespace {

using PauliTerm = std::vector<std::pair<int, char>>; // (qubit, 'X'|'Y'|'Z')

CMatrix pauli2(char c) {
  CMatrix m = CMatrix::Zero(2, 2);
  switch (c) {
  case 'X':
    m(0, 1) = m(1, 0) = 1.0;
    break;
  case 'Y':
    m(0, 1) = cplx(0, -1);
    m(1, 0) = cplx(0, 1);
    break;
  case 'Z':
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    break;
  default:
    m.setIdentity();
  }
  return m;
}

CMatrix kron(const CMatrix &a, const CMatrix &b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Operator on n_qubits with the listed single-qubit Paulis (qubit 0 least
// significant).
CMatrix pauli_string(const PauliTerm &t, int n_qubits) {
  std::vector<char> per(n_qubits, 'I');
  for (auto [q, c] : t)
    per[q] = c;
  CMatrix m = CMatrix::Identity(1, 1);
  for (int q = n_qubits - 1; q >= 0; --q)
    m = kron(m, pauli2(per[q]));
  return m;
}

CMatrix weyl_qutrits(const std::vector<uint8_t> &x,
                     const std::vector<uint8_t> &z) {
  CMatrix m = CMatrix::Identity(1, 1);
  for (int i = static_cast<int>(x.size()) - 1; i >= 0; --i) {
    CMatrix w = CMatrix::Zero(3, 3);
    for (int v = 0; v < 3; ++v)
      w((v + x[i]) % 3, v) = std::polar(1.0, 2 * M_PI * ((z[i] * v) % 3) / 3);
    m = kron(m, w);
  }
  return m;
}

struct Channel {
  double p = 0.0;
  std::vector<std::pair<double, PauliTerm>> terms;
};

std::vector<Channel> channels_for(const NativeGate &g, const NativeNoise &nm) {
  std::vector<Channel> out;
  if (g.kind == NativeKind::U1q && nm.p1 > 0) {
    Channel c{nm.p1, {}};
    for (char a : {'X', 'Y', 'Z'})
      c.terms.push_back({1.0 / 3, {{g.q0, a}}});
    out.push_back(c);
  }
  if (g.kind == NativeKind::ZZPhase && nm.p2 > 0) {
    Channel c{nm.p2, {}};
    const char ps[4] = {'I', 'X', 'Y', 'Z'};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        if (!a && !b)
          continue;
        PauliTerm t;
        if (a)
          t.push_back({g.q0, ps[a]});
        if (b)
          t.push_back({g.q1, ps[b]});
        c.terms.push_back({1.0 / 15, t});
      }
    out.push_back(c);
  }
  if ((g.kind == NativeKind::U1q || g.kind == NativeKind::ZZPhase) &&
      nm.bitflip > 0) {
    out.push_back({nm.bitflip, {{1.0, {{g.q0, 'X'}}}}});
    if (g.q1 >= 0)
      out.push_back({nm.bitflip, {{1.0, {{g.q1, 'X'}}}}});
  }
  return out;
}

std::vector<int> gate_qutrits(const NativeGate &g) {
  std::vector<int> q = {g.q0 / 2};
  if (g.q1 >= 0 && g.q1 / 2 != g.q0 / 2)
    q.push_back(g.q1 / 2);
  return q;
}

} // namespace

double EncodedSimulator::Location::leak_probability() const {
  double s = 0;
  for (const auto &o : outcomes)
    if (o.leak_mask)
      s += o.p;
  return s;
}

std::vector<EncodedSimulator::Location>
EncodedSimulator::locations_for(const NativeSeq &s) const {
  std::vector<Location> out;
  const auto &nat = s.natives;
  for (size_t l = 0; l < nat.size(); ++l) {
    auto chans = channels_for(nat[l], noise_);
    if (chans.empty())
      continue;
    // qutrits the error can reach before the block ends
    std::set<int> cl;
    for (int q : gate_qutrits(nat[l]))
      cl.insert(q);
    for (size_t k = l + 1; k < nat.size(); ++k) {
      auto gq = gate_qutrits(nat[k]);
      bool hit = false;
      for (int q : gq)
        hit |= cl.count(q) > 0;
      if (hit)
        cl.insert(gq.begin(), gq.end());
    }
    if (cl.size() > 2)
      throw std::logic_error("native error spreads over more than 2 qutrits");
    std::vector<int> qt(cl.begin(), cl.end());
    const int m = static_cast<int>(qt.size());
    auto local = [&](int q) {
      const int i = static_cast<int>(
          std::find(qt.begin(), qt.end(), q / 2) - qt.begin());
      return 2 * i + (q % 2);
    };
    std::vector<NativeGate> suffix;
    for (size_t k = l + 1; k < nat.size(); ++k) {
      bool inside = true;
      for (int q : gate_qutrits(nat[k]))
        inside &= cl.count(q) > 0;
      if (!inside || nat[k].kind == NativeKind::MeasureZ)
        continue;
      NativeGate g = nat[k];
      g.q0 = local(g.q0);
      if (g.q1 >= 0)
        g.q1 = local(g.q1);
      suffix.push_back(g);
    }
    const CMatrix v = native_unitary(suffix, 2 * m);
    const int dcode = m == 1 ? 3 : 9;
    std::vector<long> codes(dcode);
    for (int c = 0; c < dcode; ++c)
      codes[c] = m == 1 ? kEncodedIndex[c]
                        : kEncodedIndex[c % 3] + 4 * kEncodedIndex[c / 3];
    std::set<long> code_set(codes.begin(), codes.end());

    // enumerate Weyl operators on the cluster once
    std::vector<std::pair<std::vector<uint8_t>, std::vector<uint8_t>>> weyls;
    std::vector<CMatrix> wmats;
    const int nw = m == 1 ? 9 : 81;
    for (int w = 0; w < nw; ++w) {
      std::vector<uint8_t> x(m), z(m);
      int r = w;
      for (int i = 0; i < m; ++i) {
        x[i] = r % 3;
        r /= 3;
        z[i] = r % 3;
        r /= 3;
      }
      weyls.push_back({x, z});
      wmats.push_back(weyl_qutrits(x, z).adjoint());
    }

    for (const auto &ch : chans) {
      std::map<std::tuple<int, std::vector<uint8_t>, std::vector<uint8_t>>,
               double>
          acc;
      for (const auto &[wt, term] : ch.terms) {
        PauliTerm lt;
        for (auto [q, c] : term)
          lt.push_back({local(q), c});
        const CMatrix e = v * pauli_string(lt, 2 * m) * v.adjoint();
        std::map<int, double> leak;
        CMatrix k(dcode, dcode);
        for (int cj = 0; cj < dcode; ++cj) {
          for (long r = 0; r < e.rows(); ++r) {
            if (code_set.count(r))
              continue;
            int mask = 0;
            for (int i = 0; i < m; ++i)
              if (((r >> (2 * i)) & 3) == kLeakIndex)
                mask |= 1 << i;
            leak[mask] += std::norm(e(r, codes[cj])) / dcode;
          }
          for (int ci = 0; ci < dcode; ++ci)
            k(ci, cj) = e(codes[ci], codes[cj]);
        }
        for (auto [mask, p] : leak)
          acc[{mask, {}, {}}] += wt * p;
        for (int w = 0; w < nw; ++w) {
          const cplx tr = (wmats[w] * k).trace();
          acc[{0, weyls[w].first, weyls[w].second}] +=
              wt * std::norm(tr) / double(dcode * dcode);
        }
      }
      Location loc;
      for (int q : qt)
        loc.qutrits.push_back(q);
      loc.p_event = ch.p;
      double total = 0;
      for (const auto &[key, p] : acc) {
        if (p < 1e-14)
          continue;
        Outcome o;
        o.p = p;
        o.leak_mask = std::get<0>(key);
        o.x = std::get<1>(key);
        o.z = std::get<2>(key);
        total += p;
        loc.outcomes.push_back(o);
      }
      double run = 0;
      for (auto &o : loc.outcomes) {
        o.p /= total;
        run += o.p;
        loc.cumulative.push_back(run);
      }
      out.push_back(std::move(loc));
    }
  }
  return out;
}

EncodedSimulator::EncodedSimulator(EncodedCircuit ec, NativeNoise noise)
    : ec_(std::move(ec)), noise_(noise) {
  noise_.readout.validate();
  if (noise_.p1 < 0 || noise_.p1 > 1 || noise_.p2 < 0 || noise_.p2 > 1 ||
      noise_.bitflip < 0 || noise_.bitflip > 1)
    throw std::invalid_argument("native noise rates must lie in [0, 1]");
  locs_.resize(ec_.blocks.size());
  branch_locs_.resize(ec_.blocks.size());
  for (size_t i = 0; i < ec_.blocks.size(); ++i) {
    const auto &b = ec_.blocks[i];
    if (b.kind == BlockKind::Unitary)
      locs_[i] = locations_for(b.seq);
    else if (b.kind == BlockKind::Cond)
      for (const auto &br : b.branches)
        branch_locs_[i].push_back(locations_for(br));
  }
}

void EncodedSimulator::apply_seq(const NativeSeq &s,
                                 const std::vector<Location> &locs,
                                 StabilizerTableau &t,
                                 std::vector<bool> &leaked, Rng &rng) const {
  for (const auto &g : s.ideal)
    t.apply_gate(g);
  const int n = ec_.n_qutrits;
  for (const auto &loc : locs) {
    if (!rng.bernoulli(loc.p_event))
      continue;
    const double u = rng.uniform01();
    size_t i = std::upper_bound(loc.cumulative.begin(), loc.cumulative.end(),
                                u) -
               loc.cumulative.begin();
    if (i >= loc.outcomes.size())
      i = loc.outcomes.size() - 1;
    const Outcome &o = loc.outcomes[i];
    if (o.leak_mask) {
      for (size_t k = 0; k < loc.qutrits.size(); ++k)
        if (o.leak_mask & (1 << k))
          leaked[loc.qutrits[k]] = true;
      continue;
    }
    WeylOp w(3, n);
    bool any = false;
    for (size_t k = 0; k < loc.qutrits.size(); ++k) {
      w.set(loc.qutrits[k], o.x[k], o.z[k]);
      any |= o.x[k] || o.z[k];
    }
    if (any)
      t.apply_weyl(w);
  }
}

ShotRecord EncodedSimulator::run_shot(uint64_t seed) const {
  const int n = ec_.n_qutrits;
  StabilizerTableau t(3, n, seed);
  Rng rng(stable_hash(seed, 0x6e6f697365ULL));
  std::vector<bool> leaked(n, false);
  ShotRecord rec;
  rec.seed = seed;
  rec.creg_values.assign(ec_.n_cregs, 0);
  rec.qubit_bits.assign(2 * ec_.n_cregs, 0);
  for (size_t i = 0; i < ec_.blocks.size(); ++i) {
    const auto &b = ec_.blocks[i];
    switch (b.kind) {
    case BlockKind::Barrier:
      break;
    case BlockKind::Unitary:
      apply_seq(b.seq, locs_[i], t, leaked, rng);
      break;
    case BlockKind::Cond: {
      const int v = rec.creg_values.at(b.creg);
      if (v < static_cast<int>(b.branches.size()))
        apply_seq(b.branches[v], branch_locs_[i][v], t, leaked, rng);
      break;
    }
    case BlockKind::Measure: {
      const int q = b.seq.qutrits[0];
      const int val = t.measure_weyl(WeylOp::Z(3, n, q)).value;
      auto [b0, b1] = encode_value(val);
      if (leaked[q]) {
        b0 = 0;
        b1 = 1;
      }
      auto flip = [&](int bit) {
        const double p = bit ? noise_.readout.p01 : noise_.readout.p10;
        return rng.bernoulli(p) ? 1 - bit : bit;
      };
      b0 = flip(b0);
      b1 = flip(b1);
      rec.qubit_bits[2 * b.creg] = static_cast<uint8_t>(b0);
      rec.qubit_bits[2 * b.creg + 1] = static_cast<uint8_t>(b1);
      const int dec = decode_bits(b0, b1);
      if (dec < 0) {
        rec.herald_discard = true;
        rec.creg_values[b.creg] = 0;
      } else {
        rec.creg_values[b.creg] = mod(b.offset + b.scale * dec, 3);
      }
      break;
    }
    }
  }
  return rec;
}

std::vector<ShotRecord> EncodedSimulator::run(long shots, uint64_t base_seed,
                                              int threads) const {
  return run_parallel(shots, threads, [&](long i) {
    return run_shot(stable_hash(base_seed, static_cast<uint64_t>(i)));
  });
}

double EncodedSimulator::first_order_discard() const {
  double s = 0;
  for (size_t i = 0; i < ec_.blocks.size(); ++i) {
    for (const auto &l : locs_[i])
      s += l.p_event * l.leak_probability();
    if (ec_.blocks[i].kind == BlockKind::Measure)
      s += (noise_.readout.p01 + noise_.readout.p10) / 3;
  }
  return s;
}

HeraldResult herald_filter(const std::vector<ShotRecord> &records,
                           int n_cregs) {
  HeraldResult h;
  for (const auto &r : records) {
    if (static_cast<int>(r.qubit_bits.size()) != 2 * n_cregs)
      throw std::invalid_argument("record does not hold two bits per creg");
    bool leak = false;
    for (int c = 0; c < n_cregs; ++c)
      leak |= decode_bits(r.qubit_bits[2 * c], r.qubit_bits[2 * c + 1]) < 0;
    if (leak)
      ++h.discarded;
    else
      h.retained.push_back(r);
  }
  h.discard_fraction =
      records.empty() ? 0.0 : double(h.discarded) / double(records.size());
  return h;
}

} // namespace ztoric
