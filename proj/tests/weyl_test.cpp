/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "ztoric/dense.hpp"
#include "ztoric/weyl.hpp"

using namespace ztoric;
using ztoric::testing::all_gate_kinds;
using ztoric::testing::random_weyl;

namespace {

cplx omega(int k, int d) { return std::polar(1.0, 2.0 * M_PI * k / d); }

double max_abs(const CMatrix &m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST(Weyl, RejectsBadDimensions) {
  EXPECT_THROW(WeylOp(2, 1), std::invalid_argument);
  EXPECT_THROW(WeylOp(9, 1), std::invalid_argument);
  EXPECT_NO_THROW(WeylOp(7, 1));
}

TEST(Weyl, ComposeNormalOrdering) {
  WeylOp X = WeylOp::X(3, 1, 0), Z = WeylOp::Z(3, 1, 0);
  WeylOp xz = compose(X, Z);
  EXPECT_EQ(xz.x[0], 1);
  EXPECT_EQ(xz.z[0], 1);
  EXPECT_EQ(xz.phase, 0);
  WeylOp zx = compose(Z, X);
  EXPECT_EQ(zx.x[0], 1);
  EXPECT_EQ(zx.z[0], 1);
  EXPECT_EQ(zx.phase, 1);
}

TEST(Weyl, ComposeMatchesDenseMatrices) {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    int d = trial % 2 ? 5 : 3;
    int n = 1 + rng.uniform_int(d == 3 ? 4 : 3);
    WeylOp a = random_weyl(rng, d, n), b = random_weyl(rng, d, n);
    CMatrix lhs = weyl_matrix(compose(a, b));
    CMatrix rhs = weyl_matrix(a) * weyl_matrix(b);
    EXPECT_LT(max_abs(lhs - rhs), 1e-12);
  }
}

TEST(Weyl, InverseAndPower) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    int d = trial % 2 ? 5 : 3;
    int n = 1 + rng.uniform_int(4);
    WeylOp w = random_weyl(rng, d, n);
    EXPECT_TRUE(compose(w, inverse(w)).is_identity());
    EXPECT_TRUE(compose(inverse(w), w).is_identity());
    EXPECT_TRUE(power(w, d).is_identity());
    WeylOp acc = WeylOp::identity(d, n);
    for (int k = 0; k < 2 * d; ++k) {
      EXPECT_EQ(power(w, k), acc);
      acc = compose(acc, w);
    }
  }
}

TEST(Weyl, SymplecticFollowsFormulaAndCommutation) {
  WeylOp X = WeylOp::X(3, 1, 0), Z = WeylOp::Z(3, 1, 0);
  // s = x_a z_b - z_a x_b.
  EXPECT_EQ(symplectic_product(X, Z), 1);
  EXPECT_EQ(symplectic_product(Z, X), 2);
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    int d = trial % 2 ? 5 : 3;
    int n = 1 + rng.uniform_int(d == 3 ? 4 : 3);
    WeylOp a = random_weyl(rng, d, n), b = random_weyl(rng, d, n);
    int s = symplectic_product(a, b);
    CMatrix ab = weyl_matrix(a) * weyl_matrix(b);
    CMatrix ba = weyl_matrix(b) * weyl_matrix(a);
    EXPECT_LT(max_abs(ab - omega(-s, d) * ba), 1e-12);
    WeylOp lhs = compose(a, b), rhs = compose(b, a);
    rhs.phase = mod(rhs.phase - s, d);
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(Weyl, SymplecticAntisymmetricBilinear) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    int d = 3 + 2 * (trial % 2);
    int n = 1 + rng.uniform_int(5);
    WeylOp a = random_weyl(rng, d, n), b = random_weyl(rng, d, n),
           c = random_weyl(rng, d, n);
    EXPECT_EQ(mod(symplectic_product(a, b) + symplectic_product(b, a), d), 0);
    EXPECT_EQ(symplectic_product(compose(a, b), c),
              mod(symplectic_product(a, c) + symplectic_product(b, c), d));
    EXPECT_EQ(compose(compose(a, b), c), compose(a, compose(b, c)));
  }
}

TEST(Weyl, GeneratorImagesPinned) {
  auto conj1 = [](GateKind k, const char *label) {
    return conjugate_by_gate(CliffordGate(k, 0), WeylOp::parse(3, label));
  };
  EXPECT_EQ(conj1(GateKind::Conj, "X"), WeylOp::parse(3, "X2"));
  EXPECT_EQ(conj1(GateKind::Conj, "Z"), WeylOp::parse(3, "Z2"));
  EXPECT_EQ(conj1(GateKind::Fourier, "X"), WeylOp::parse(3, "Z"));
  EXPECT_EQ(conj1(GateKind::Fourier, "Z"), WeylOp::parse(3, "X2"));
  EXPECT_EQ(conj1(GateKind::ShiftX, "Z"), WeylOp::parse(3, "w2:Z"));
  EXPECT_EQ(conj1(GateKind::ClockZ, "X"), WeylOp::parse(3, "w1:X"));
  auto conj2 = [](GateKind k, const char *label) {
    return conjugate_by_gate(CliffordGate(k, 0, 1), WeylOp::parse(3, label));
  };
  EXPECT_EQ(conj2(GateKind::CX, "X,I"), WeylOp::parse(3, "X,X"));
  EXPECT_EQ(conj2(GateKind::CX, "I,X"), WeylOp::parse(3, "I,X"));
  EXPECT_EQ(conj2(GateKind::CX, "Z,I"), WeylOp::parse(3, "Z,I"));
  EXPECT_EQ(conj2(GateKind::CX, "I,Z"), WeylOp::parse(3, "Z2,Z"));
  EXPECT_EQ(conj2(GateKind::CZ, "X,I"), WeylOp::parse(3, "X,Z"));
  EXPECT_EQ(conj2(GateKind::CZ, "I,X"), WeylOp::parse(3, "Z,X"));
}

// Every local Weyl operator, every gate kind, d = 3 and 5, against dense
// conjugation with the exact stored phase.
TEST(Weyl, ConjugationTablesMatchDense) {
  for (int d : {3, 5}) {
    for (GateKind k : all_gate_kinds()) {
      int a = gate_arity(k);
      CliffordGate g = a == 1 ? CliffordGate(k, 0) : CliffordGate(k, 0, 1);
      CMatrix U = gate_matrix(k, d);
      int count = a == 1 ? d * d : d * d * d * d;
      for (int idx = 0; idx < count; ++idx) {
        WeylOp w(d, a);
        int rem = idx;
        for (int s = a - 1; s >= 0; --s) {
          int z = rem % d;
          rem /= d;
          int x = rem % d;
          rem /= d;
          w.set(s, x, z);
        }
        CMatrix expect = U * weyl_matrix(w) * U.adjoint();
        CMatrix got = weyl_matrix(conjugate_by_gate(g, w));
        ASSERT_LT(max_abs(expect - got), 1e-10)
            << gate_name(k) << " d=" << d << " w=" << w.to_string();
      }
    }
  }
}

TEST(Weyl, ConjugationPreservesSymplectic) {
  Rng rng(21);
  for (GateKind k : all_gate_kinds()) {
    for (int trial = 0; trial < 30; ++trial) {
      int n = 4;
      WeylOp a = random_weyl(rng, 3, n), b = random_weyl(rng, 3, n);
      CliffordGate g = gate_arity(k) == 1 ? CliffordGate(k, 1)
                                          : CliffordGate(k, 2, 0);
      EXPECT_EQ(symplectic_product(conjugate_by_gate(g, a),
                                   conjugate_by_gate(g, b)),
                symplectic_product(a, b));
    }
  }
}

TEST(Weyl, GateValidation) {
  EXPECT_THROW(CliffordGate(GateKind::CX, 1, 1), std::invalid_argument);
  EXPECT_THROW(CliffordGate(GateKind::Fourier, 0, 1), std::invalid_argument);
  EXPECT_THROW(conjugate_by_gate(CliffordGate(GateKind::CX, 0, 3),
                                 WeylOp(3, 2)),
               std::out_of_range);
}

TEST(Weyl, ParseRoundTrip) {
  WeylOp w = WeylOp::parse(3, "w2:X,Z2,I,XZ2");
  EXPECT_EQ(w.n(), 4);
  EXPECT_EQ(w.phase, 2);
  EXPECT_EQ(WeylOp::parse(3, w.to_string()), w);
  EXPECT_EQ(w.weight(), 3);
}
