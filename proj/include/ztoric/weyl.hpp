/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ztoric {

/// Thrown when an internal consistency check fails (CLI exit code 3).
class InvariantError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

bool is_odd_prime(int d);
void require_odd_prime(int d);

inline int mod(long long a, int d) {
  long long r = a % d;
  return static_cast<int>(r < 0 ? r + d : r);
}
int inv_mod(int a, int d);

/// omega^phase * prod_i X_i^{x_i} Z_i^{z_i}, X before Z on every site.
struct WeylOp {
  int d = 3;
  std::vector<uint8_t> x;
  std::vector<uint8_t> z;
  int phase = 0;

  WeylOp() = default;
  WeylOp(int d, int n);

  static WeylOp identity(int d, int n) { return WeylOp(d, n); }
  static WeylOp single(int d, int n, int site, int xe, int ze);
  static WeylOp X(int d, int n, int site, int power = 1) {
    return single(d, n, site, power, 0);
  }
  static WeylOp Z(int d, int n, int site, int power = 1) {
    return single(d, n, site, 0, power);
  }
  /// Parses per-site tokens such as "X", "Z2", "XZ2", "I" separated by
  /// commas or spaces, with an optional "w<k>:" phase prefix.
  static WeylOp parse(int d, const std::string &label);

  int n() const { return static_cast<int>(x.size()); }
  bool is_identity() const;
  bool same_support_exponents(const WeylOp &o) const {
    return x == o.x && z == o.z;
  }
  int weight() const;
  std::vector<int> support() const;
  void set(int site, int xe, int ze);
  std::string to_string() const;

  bool operator==(const WeylOp &o) const {
    return d == o.d && phase == o.phase && x == o.x && z == o.z;
  }
  bool operator!=(const WeylOp &o) const { return !(*this == o); }
};

WeylOp compose(const WeylOp &a, const WeylOp &b);
/// In-place a <- a * b.
void compose_into(WeylOp &a, const WeylOp &b);
WeylOp power(const WeylOp &a, long long k);
WeylOp inverse(const WeylOp &a);
/// s with a*b = omega^{-s} b*a.
int symplectic_product(const WeylOp &a, const WeylOp &b);
inline bool commutes(const WeylOp &a, const WeylOp &b) {
  return symplectic_product(a, b) == 0;
}
/// Tensor-places a k-site operator onto `sites` of an n-site register.
WeylOp embed(const WeylOp &local, int n, const std::vector<int> &sites);
/// Restriction to `sites` (phase kept).
WeylOp restrict_to(const WeylOp &w, const std::vector<int> &sites);
/// Appends m identity sites.
WeylOp extend(const WeylOp &w, int extra);

enum class GateKind {
  ShiftX,
  ShiftXdag,
  ClockZ,
  ClockZdag,
  Conj,
  Fourier,
  FourierDag,
  CX,
  CXdag,
  CZ,
  CZdag
};

int gate_arity(GateKind k);
std::string gate_name(GateKind k);
GateKind gate_from_name(const std::string &name);
GateKind gate_inverse(GateKind k);

struct CliffordGate {
  GateKind kind = GateKind::ShiftX;
  int q0 = 0;
  int q1 = -1;

  CliffordGate() = default;
  CliffordGate(GateKind k, int a, int b = -1);

  int arity() const { return gate_arity(kind); }
  std::vector<int> targets() const {
    return q1 < 0 ? std::vector<int>{q0} : std::vector<int>{q0, q1};
  }
  bool operator==(const CliffordGate &o) const {
    return kind == o.kind && q0 == o.q0 && q1 == o.q1;
  }
};

/// Images of every local Weyl operator under one gate kind, indexed by the
/// packed local exponent vector.
class LocalTable {
public:
  LocalTable(GateKind kind, int d);
  int arity() const { return arity_; }
  /// Local exponents (x0,z0[,x1,z1]) and phase of the image.
  const uint8_t *image(int index) const { return &data_[index * stride_]; }
  int index_of(int x0, int z0) const { return x0 * d_ + z0; }
  int index_of(int x0, int z0, int x1, int z1) const {
    return ((x0 * d_ + z0) * d_ + x1) * d_ + z1;
  }

private:
  int d_;
  int arity_;
  int stride_;
  std::vector<uint8_t> data_;
};

const LocalTable &gate_table(GateKind kind, int d);

/// Conjugation g w g^dagger, applied in place.
void conjugate_inplace(const CliffordGate &g, const LocalTable &table,
                       WeylOp &w);
WeylOp conjugate_by_gate(const CliffordGate &g, const WeylOp &w);

} // namespace ztoric
