/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#include "ztoric/dense.hpp"

#include <cmath>
#include <stdexcept>

namespace ztoric {

namespace {

cplx omega_pow(int k, int d) {
  double a = 2.0 * M_PI * mod(k, d) / d;
  return {std::cos(a), std::sin(a)};
}

long ipow(int b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) {
    r *= b;
    if (r > DenseState::kMaxDim)
      throw std::length_error("dense state too large");
  }
  return r;
}

} // namespace

DenseState::DenseState(int d, int n) : d_(d), n_(n) {
  if (d != 2)
    require_odd_prime(d);
  if (n < 1)
    throw std::invalid_argument("dense state needs at least one site");
  if (d == 3 && n > 10)
    throw std::length_error("dense oracle limited to 10 qutrits");
  long dim = ipow(d, n);
  amp_ = CVector::Zero(dim);
  amp_(0) = 1.0;
}

void DenseState::apply_matrix(const CMatrix &u, const std::vector<int> &sites) {
  const int k = static_cast<int>(sites.size());
  const long ld = ipow(d_, k);
  if (u.rows() != ld || u.cols() != ld)
    throw std::invalid_argument("matrix size does not match site count");
  std::vector<long> stride(k);
  for (int s = 0; s < k; ++s) {
    if (sites[s] < 0 || sites[s] >= n_)
      throw std::out_of_range("site out of range");
    stride[s] = ipow(d_, sites[s]);
  }
  std::vector<long> offs(ld);
  for (long l = 0; l < ld; ++l) {
    long rem = l, off = 0;
    for (int s = 0; s < k; ++s) {
      off += (rem % d_) * stride[s];
      rem /= d_;
    }
    offs[l] = off;
  }
  CVector in(ld), out(ld);
  const long dim = this->dim();
  for (long base = 0; base < dim; ++base) {
    bool is_base = true;
    for (int s = 0; s < k; ++s)
      if ((base / stride[s]) % d_ != 0) {
        is_base = false;
        break;
      }
    if (!is_base)
      continue;
    for (long l = 0; l < ld; ++l)
      in(l) = amp_(base + offs[l]);
    out.noalias() = u * in;
    for (long l = 0; l < ld; ++l)
      amp_(base + offs[l]) = out(l);
  }
}

void DenseState::apply_gate(const CliffordGate &g) {
  apply_matrix(gate_matrix(g.kind, d_), g.targets());
}

void DenseState::apply_weyl(const WeylOp &w) {
  if (w.d != d_ || w.n() != n_)
    throw std::invalid_argument("Weyl size mismatch");
  CVector out = CVector::Zero(dim());
  for (long i = 0; i < dim(); ++i) {
    if (amp_(i) == cplx(0.0))
      continue;
    long rem = i, j = 0, p = 1;
    long long ph = w.phase;
    for (int s = 0; s < n_; ++s) {
      int v = static_cast<int>(rem % d_);
      rem /= d_;
      ph += static_cast<long long>(w.z[s]) * v;
      j += ((v + w.x[s]) % d_) * p;
      p *= d_;
    }
    out(j) += omega_pow(mod(ph, d_), d_) * amp_(i);
  }
  amp_ = std::move(out);
}

cplx DenseState::expectation(const WeylOp &w) const {
  DenseState t = *this;
  t.apply_weyl(w);
  return amp_.dot(t.amp_);
}

std::vector<double> DenseState::outcome_probabilities(const WeylOp &w) const {
  // P_s = (1/d) sum_k omega^{-sk} w^k.
  std::vector<cplx> ex(d_);
  for (int k = 0; k < d_; ++k)
    ex[k] = expectation(power(w, k));
  std::vector<double> p(d_);
  for (int s = 0; s < d_; ++s) {
    cplx acc = 0;
    for (int k = 0; k < d_; ++k)
      acc += omega_pow(-s * k, d_) * ex[k];
    p[s] = std::max(0.0, acc.real() / d_);
  }
  return p;
}

void DenseState::project(const WeylOp &w, int outcome) {
  CVector acc = CVector::Zero(dim());
  for (int k = 0; k < d_; ++k) {
    DenseState t = *this;
    t.apply_weyl(power(w, k));
    acc += omega_pow(-outcome * k, d_) * t.amp_;
  }
  acc /= static_cast<double>(d_);
  double nr = acc.norm();
  if (nr < 1e-12)
    throw std::runtime_error("projection onto an empty outcome");
  amp_ = acc / nr;
}

int DenseState::measure_projective(const WeylOp &w, Rng &rng) {
  auto p = outcome_probabilities(w);
  double r = rng.uniform01(), c = 0;
  int s = d_ - 1;
  for (int k = 0; k < d_; ++k) {
    c += p[k];
    if (r < c) {
      s = k;
      break;
    }
  }
  while (p[s] < 1e-12)
    s = (s + d_ - 1) % d_;
  project(w, s);
  return s;
}

CMatrix weyl_matrix(const WeylOp &w) {
  DenseState probe(w.d, w.n());
  const long dim = probe.dim();
  CMatrix m = CMatrix::Zero(dim, dim);
  for (long i = 0; i < dim; ++i) {
    probe.amplitudes().setZero();
    probe.amplitudes()(i) = 1.0;
    probe.apply_weyl(w);
    m.col(i) = probe.amplitudes();
  }
  return m;
}

CMatrix gate_matrix(GateKind k, int d) {
  const int a = gate_arity(k);
  const long dim = a == 1 ? d : d * d;
  CMatrix u = CMatrix::Zero(dim, dim);
  auto idx2 = [d](int c, int t) { return c + d * t; };
  switch (k) {
  case GateKind::ShiftX:
  case GateKind::ShiftXdag: {
    int s = k == GateKind::ShiftX ? 1 : d - 1;
    for (int i = 0; i < d; ++i)
      u((i + s) % d, i) = 1.0;
    break;
  }
  case GateKind::ClockZ:
  case GateKind::ClockZdag: {
    int s = k == GateKind::ClockZ ? 1 : -1;
    for (int i = 0; i < d; ++i)
      u(i, i) = omega_pow(s * i, d);
    break;
  }
  case GateKind::Conj:
    for (int i = 0; i < d; ++i)
      u(mod(-i, d), i) = 1.0;
    break;
  case GateKind::Fourier:
  case GateKind::FourierDag: {
    int s = k == GateKind::Fourier ? 1 : -1;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        u(j, i) = omega_pow(s * i * j, d) / std::sqrt(static_cast<double>(d));
    break;
  }
  case GateKind::CX:
  case GateKind::CXdag: {
    int s = k == GateKind::CX ? 1 : -1;
    for (int c = 0; c < d; ++c)
      for (int t = 0; t < d; ++t)
        u(idx2(c, mod(t + s * c, d)), idx2(c, t)) = 1.0;
    break;
  }
  case GateKind::CZ:
  case GateKind::CZdag: {
    int s = k == GateKind::CZ ? 1 : -1;
    for (int c = 0; c < d; ++c)
      for (int t = 0; t < d; ++t)
        u(idx2(c, t), idx2(c, t)) = omega_pow(s * c * t, d);
    break;
  }
  }
  return u;
}

CMatrix gate_matrix_full(const CliffordGate &g, int d, int n) {
  DenseState probe(d, n);
  const long dim = probe.dim();
  CMatrix m(dim, dim);
  CMatrix local = gate_matrix(g.kind, d);
  for (long i = 0; i < dim; ++i) {
    probe.amplitudes().setZero();
    probe.amplitudes()(i) = 1.0;
    probe.apply_matrix(local, g.targets());
    m.col(i) = probe.amplitudes();
  }
  return m;
}

double fidelity(const DenseState &a, const DenseState &b) {
  if (a.dim() != b.dim() || a.d() != b.d())
    throw std::invalid_argument("fidelity: shape mismatch");
  return std::norm(b.amplitudes().dot(a.amplitudes()));
}

DenseState dense_from_tableau(const StabilizerTableau &t) {
  DenseState s(t.d(), t.n());
  for (long seed = 0; seed < s.dim(); ++seed) {
    s.amplitudes().setZero();
    s.amplitudes()(seed) = 1.0;
    bool ok = true;
    for (const auto &g : t.stabilizers()) {
      CVector acc = CVector::Zero(s.dim());
      for (int k = 0; k < t.d(); ++k) {
        DenseState tmp = s;
        tmp.apply_weyl(power(g, k));
        acc += tmp.amplitudes();
      }
      double nr = acc.norm();
      if (nr < 1e-9) {
        ok = false;
        break;
      }
      s.amplitudes() = acc / nr;
    }
    if (ok)
      return s;
  }
  throw InvariantError("tableau has no dense representative");
}

} // namespace ztoric
