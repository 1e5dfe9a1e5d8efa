/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#include "ztoric/tableau.hpp"

#include <cmath>

namespace ztoric {

int Rng::uniform_int(int bound) {
  if (bound <= 0)
    throw std::invalid_argument("uniform_int: bound must be positive");
  const uint64_t b = static_cast<uint64_t>(bound);
  const uint64_t limit = UINT64_MAX - UINT64_MAX % b;
  uint64_t r;
  do {
    r = eng_();
  } while (r >= limit);
  return static_cast<int>(r % b);
}

uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t stable_hash(uint64_t base, uint64_t index) {
  return mix64(mix64(base) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

StabilizerTableau::StabilizerTableau(int d, int n, uint64_t seed)
    : d_(d), n_(n), rng_(seed) {
  require_odd_prime(d);
  if (n < 1)
    throw std::invalid_argument("tableau needs at least one qudit");
  stab_.reserve(n);
  destab_.reserve(n);
  for (int i = 0; i < n; ++i) {
    stab_.push_back(WeylOp::Z(d, n, i));
    destab_.push_back(WeylOp::X(d, n, i));
  }
}

void StabilizerTableau::check_op(const WeylOp &w) const {
  if (w.d != d_ || w.n() != n_)
    throw std::invalid_argument("observable dimension mismatch");
}

void StabilizerTableau::apply_gate(const CliffordGate &g) {
  const LocalTable &t = gate_table(g.kind, d_);
  for (auto &row : stab_)
    conjugate_inplace(g, t, row);
  for (auto &row : destab_)
    conjugate_inplace(g, t, row);
}

void StabilizerTableau::apply_weyl(const WeylOp &w) {
  check_op(w);
  // w s w^-1 = omega^{-sp(w,s)} s.
  for (auto &row : stab_)
    row.phase = mod(row.phase - symplectic_product(w, row), d_);
}

MeasurementOutcome StabilizerTableau::measure_weyl(const WeylOp &w) {
  return measure_impl(w, -1);
}

bool StabilizerTableau::measure_weyl_forced(const WeylOp &w, int value,
                                            MeasurementOutcome *out) {
  int k = expectation_exponent(w);
  if (k >= 0 && k != mod(value, d_))
    return false;
  MeasurementOutcome o = measure_impl(w, mod(value, d_));
  if (out)
    *out = o;
  return true;
}

MeasurementOutcome StabilizerTableau::measure_impl(const WeylOp &w,
                                                   int forced) {
  check_op(w);
  if (!power(w, d_).is_identity())
    throw std::invalid_argument("observable does not satisfy w^d = 1");
  int p = -1;
  for (int j = 0; j < n_; ++j)
    if (symplectic_product(stab_[j], w) != 0) {
      p = j;
      break;
    }
  if (p < 0) {
    MeasurementOutcome o;
    o.value = expectation_exponent(w);
    o.deterministic = true;
    return o;
  }
  const WeylOp sp_row = stab_[p];
  const int t = symplectic_product(sp_row, w);
  const int tinv = inv_mod(t, d_);
  for (int j = 0; j < n_; ++j) {
    if (j == p)
      continue;
    int c = symplectic_product(stab_[j], w);
    if (c)
      compose_into(stab_[j], power(sp_row, mod(-c * tinv, d_)));
    c = symplectic_product(destab_[j], w);
    if (c)
      compose_into(destab_[j], power(sp_row, mod(-c * tinv, d_)));
  }
  MeasurementOutcome o;
  o.deterministic = false;
  o.value = forced >= 0 ? forced : rng_.uniform_int(d_);
  destab_[p] = power(sp_row, tinv);
  WeylOp ns = w;
  ns.phase = mod(w.phase - o.value, d_);
  stab_[p] = ns;
  return o;
}

int StabilizerTableau::expectation_exponent(const WeylOp &w) const {
  check_op(w);
  for (int j = 0; j < n_; ++j)
    if (symplectic_product(stab_[j], w) != 0)
      return -1;
  // w is proportional to prod_j stab_j^{k_j} with k_j = sp(destab_j, w).
  WeylOp prod(d_, n_);
  for (int j = 0; j < n_; ++j) {
    int k = symplectic_product(destab_[j], w);
    if (k)
      compose_into(prod, power(stab_[j], k));
  }
  if (!prod.same_support_exponents(w))
    throw InvariantError("stabilizer group is not maximal");
  return mod(w.phase - prod.phase, d_);
}

std::complex<double>
StabilizerTableau::expectation_weyl(const WeylOp &w) const {
  int k = expectation_exponent(w);
  if (k < 0)
    return {0.0, 0.0};
  if (k == 0)
    return {1.0, 0.0};
  double a = 2.0 * M_PI * k / d_;
  return {std::cos(a), std::sin(a)};
}

double StabilizerTableau::projector_expectation(const WeylOp &w, int a) const {
  int k = expectation_exponent(w);
  if (k < 0) {
    // An identity-proportional w always has a definite value, so here every
    // nonzero power of w also has expectation 0.
    return 1.0 / d_;
  }
  return k == mod(a, d_) ? 1.0 : 0.0;
}

void StabilizerTableau::check_invariants() const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      if (symplectic_product(stab_[i], stab_[j]) != 0)
        throw InvariantError("stabilizers do not commute");
      if (symplectic_product(destab_[i], stab_[j]) != (i == j ? 1 : 0))
        throw InvariantError("destabilizer pairing broken");
      if (symplectic_product(destab_[i], destab_[j]) != 0)
        throw InvariantError("destabilizers do not commute");
    }
  if (weyl_rank(stab_) != n_)
    throw InvariantError("stabilizers are not independent");
}

bool StabilizerTableau::same_state(const StabilizerTableau &o) const {
  if (o.d_ != d_ || o.n_ != n_)
    return false;
  for (const auto &s : stab_)
    if (o.expectation_exponent(s) != 0)
      return false;
  return true;
}

namespace {

// Row-reduces rows (each of width cols) in place, returning the rank.
int row_reduce(std::vector<std::vector<int>> &rows, int cols, int d,
               std::vector<int> *pivots = nullptr) {
  int r = 0;
  for (int c = 0; c < cols && r < static_cast<int>(rows.size()); ++c) {
    int piv = -1;
    for (int i = r; i < static_cast<int>(rows.size()); ++i)
      if (rows[i][c]) {
        piv = i;
        break;
      }
    if (piv < 0)
      continue;
    std::swap(rows[r], rows[piv]);
    int inv = inv_mod(rows[r][c], d);
    for (int k = 0; k < cols; ++k)
      rows[r][k] = rows[r][k] * inv % d;
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      if (i == r || !rows[i][c])
        continue;
      int f = rows[i][c];
      for (int k = 0; k < cols; ++k)
        rows[i][k] = mod(rows[i][k] - f * rows[r][k], d);
    }
    if (pivots)
      pivots->push_back(c);
    ++r;
  }
  return r;
}

} // namespace

int weyl_rank(const std::vector<WeylOp> &ops) {
  if (ops.empty())
    return 0;
  const int n = ops[0].n();
  const int d = ops[0].d;
  std::vector<std::vector<int>> rows;
  for (const auto &w : ops) {
    std::vector<int> r(2 * n);
    for (int i = 0; i < n; ++i) {
      r[i] = w.x[i];
      r[n + i] = w.z[i];
    }
    rows.push_back(std::move(r));
  }
  return row_reduce(rows, 2 * n, d);
}

std::vector<std::vector<int>>
commuting_combinations(const std::vector<WeylOp> &ops,
                       const std::vector<WeylOp> &constraints) {
  const int m = static_cast<int>(ops.size());
  if (m == 0)
    return {};
  const int d = ops[0].d;
  // Matrix M[k][j] = sp(ops_j, constraint_k); kernel of M.
  std::vector<std::vector<int>> rows;
  for (const auto &c : constraints) {
    std::vector<int> r(m);
    for (int j = 0; j < m; ++j)
      r[j] = symplectic_product(ops[j], c);
    rows.push_back(std::move(r));
  }
  std::vector<int> pivots;
  row_reduce(rows, m, d, &pivots);
  std::vector<bool> is_pivot(m, false);
  for (int c : pivots)
    is_pivot[c] = true;
  std::vector<std::vector<int>> basis;
  for (int f = 0; f < m; ++f) {
    if (is_pivot[f])
      continue;
    std::vector<int> v(m, 0);
    v[f] = 1;
    for (size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = mod(-rows[r][f], d);
    basis.push_back(std::move(v));
  }
  return basis;
}

WeylOp weyl_product(const std::vector<WeylOp> &ops, const std::vector<int> &c) {
  if (ops.empty())
    throw std::invalid_argument("weyl_product: empty list");
  WeylOp r(ops[0].d, ops[0].n());
  for (size_t j = 0; j < ops.size(); ++j)
    if (mod(c.at(j), ops[j].d))
      compose_into(r, power(ops[j], c[j]));
  return r;
}

} // namespace ztoric
