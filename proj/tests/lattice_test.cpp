/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#include <gtest/gtest.h>

#include "ztoric/lattice.hpp"

using namespace ztoric;

namespace {

StabilizerTableau ground_state(const TorusLattice &lat, uint64_t seed = 1) {
  StabilizerTableau t(lat.d(), lat.n_sites(), seed);
  std::vector<int> cregs;
  execute(ground_state_circuit(lat), t, cregs);
  return t;
}

/// Exponent k of every plaquette with <S> = omega^k, or -1 if not definite.
std::vector<int> pattern(const TorusLattice &lat, const StabilizerTableau &t) {
  std::vector<int> out;
  for (const auto &p : lat.plaquettes())
    out.push_back(t.expectation_exponent(p.op));
  return out;
}

} // namespace

TEST(Lattice, GeometryAndCommutation) {
  TorusLattice lat(6, 4);
  EXPECT_EQ(lat.n_sites(), 24);
  EXPECT_EQ(lat.plaquettes_of(PlaqType::A).size(), 12u);
  EXPECT_EQ(lat.plaquettes_of(PlaqType::B).size(), 12u);
  const auto &p = lat.plaquette(5, 3);
  EXPECT_EQ(p.type, PlaqType::A);
  EXPECT_EQ(p.corners[0], lat.site(5, 3));
  EXPECT_EQ(p.corners[1], lat.site(0, 3));
  EXPECT_EQ(p.corners[2], lat.site(5, 0));
  EXPECT_EQ(p.corners[3], lat.site(0, 0));
  // A = X X X^dag X^dag
  const auto &a = lat.plaquette(0, 0);
  EXPECT_EQ(a.op.x[lat.site(0, 0)], 1);
  EXPECT_EQ(a.op.x[lat.site(1, 0)], 1);
  EXPECT_EQ(a.op.x[lat.site(0, 1)], 2);
  EXPECT_EQ(a.op.x[lat.site(1, 1)], 2);
  const auto &b = lat.plaquette(1, 0);
  EXPECT_EQ(b.op.z[lat.site(1, 0)], 2);
  EXPECT_EQ(b.op.z[lat.site(2, 0)], 1);
  EXPECT_EQ(b.op.z[lat.site(1, 1)], 2);
  EXPECT_EQ(b.op.z[lat.site(2, 1)], 1);

  for (const auto &p1 : lat.plaquettes())
    for (const auto &p2 : lat.plaquettes())
      EXPECT_TRUE(commutes(p1.op, p2.op)) << p1.label << " " << p2.label;

  for (PlaqType ty : {PlaqType::A, PlaqType::B}) {
    WeylOp prod = WeylOp::identity(3, 24);
    for (int i : lat.plaquettes_of(ty))
      compose_into(prod, lat.plaquettes()[i].op);
    EXPECT_TRUE(prod.is_identity());
    EXPECT_EQ(prod.phase, 0);
  }
  // logicals commute with all plaquettes, conjugate pairs anticommute
  std::vector<WeylOp> logs = {lat.logical_z_hori(0), lat.logical_z_vert(0),
                              lat.logical_x_hori(0), lat.logical_x_vert(0)};
  for (const auto &l : logs)
    for (const auto &p1 : lat.plaquettes())
      EXPECT_TRUE(commutes(l, p1.op));
  EXPECT_NE(symplectic_product(logs[0], logs[3]), 0);
  EXPECT_NE(symplectic_product(logs[1], logs[2]), 0);
  EXPECT_EQ(symplectic_product(logs[0], logs[2]), 0);
  EXPECT_EQ(symplectic_product(logs[1], logs[3]), 0);
}

TEST(Lattice, RejectsBadSizes) {
  EXPECT_THROW(TorusLattice(5, 4), std::invalid_argument);
  EXPECT_THROW(TorusLattice(6, 0), std::invalid_argument);
  EXPECT_THROW(TorusLattice(6, 4, 2), std::invalid_argument);
}

TEST(Lattice, DefaultOrderingShape) {
  TorusLattice lat(6, 4);
  auto ord = default_ordering(lat);
  EXPECT_EQ(ord.implicit_plaquette, lat.plaquette_index(5, 3));
  EXPECT_EQ(ord.steps.size(), 11u);
  EXPECT_NO_THROW(validate_ordering(lat, ord));
  auto c = ground_state_circuit(lat);
  int h = 0, cx = 0;
  for (const auto &i : c.instructions()) {
    const auto &g = std::get<GateInstr>(i).gate;
    if (g.kind == GateKind::Fourier)
      ++h;
    else if (g.kind == GateKind::CX || g.kind == GateKind::CXdag)
      ++cx;
  }
  EXPECT_EQ(h, 11);
  EXPECT_EQ(cx, 33);
}

TEST(Lattice, OrderingValidatorRejects) {
  TorusLattice lat(6, 4);
  auto ord = default_ordering(lat);
  auto missing = ord;
  missing.steps.pop_back();
  EXPECT_THROW(validate_ordering(lat, missing), std::invalid_argument);
  auto reversed = ord;
  std::reverse(reversed.steps.begin(), reversed.steps.end());
  EXPECT_THROW(validate_ordering(lat, reversed), std::invalid_argument);
  auto notcorner = ord;
  notcorner.steps[0].representative =
      (notcorner.steps[0].representative + 3) % lat.n_sites();
  if (lat.corner_slot(notcorner.steps[0].plaquette,
                      notcorner.steps[0].representative) < 0) {
    EXPECT_THROW(validate_ordering(lat, notcorner), std::invalid_argument);
  }
}

class GroundState : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(GroundState, PlaquettesAndLogicals) {
  auto [Lx, Ly] = GetParam();
  TorusLattice lat(Lx, Ly);
  auto t = ground_state(lat);
  t.check_invariants();
  for (const auto &p : lat.plaquettes()) {
    EXPECT_EQ(t.expectation_exponent(p.op), 0) << p.label;
    EXPECT_NEAR(t.projector_expectation(p.op, 0), 1.0, 1e-12);
  }
  for (int r = 0; r < Ly; ++r) {
    EXPECT_EQ(t.expectation_exponent(lat.logical_z_hori(r)), 0);
    EXPECT_NEAR(t.projector_expectation(lat.logical_x_hori(r), 0), 1.0 / 3,
                1e-12);
  }
  for (int col = 0; col < Lx; ++col) {
    EXPECT_EQ(t.expectation_exponent(lat.logical_z_vert(col)), 0);
    EXPECT_NEAR(t.projector_expectation(lat.logical_x_vert(col), 1), 1.0 / 3,
                1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Sizes, GroundState,
                         ::testing::Values(std::pair{6, 4}, std::pair{6, 2},
                                           std::pair{4, 4}, std::pair{2, 2},
                                           std::pair{8, 6}));

TEST(Lattice, GroundStateIndependentOfOrderingSeed) {
  TorusLattice lat(6, 4);
  auto a = ground_state(lat, 1), b = ground_state(lat, 99);
  EXPECT_TRUE(a.same_state(b));
}

TEST(Anyons, SingleSiteCharges) {
  TorusLattice lat(6, 4);
  for (Species sp : {Species::e, Species::ebar}) {
    auto t = ground_state(lat);
    int s = lat.site(2, 2);
    auto str = anyon_string(lat, sp, {s});
    t.apply_weyl(str.op);
    auto pat = pattern(lat, t);
    // end plaquette has s in its top row
    EXPECT_EQ(str.end_plaquette, lat.plaquette_index(2, 2));
    EXPECT_EQ(str.start_plaquette, lat.plaquette_index(1, 1));
    EXPECT_EQ(pat[str.end_plaquette], species_exponent(sp));
    EXPECT_EQ(pat[str.start_plaquette], 3 - species_exponent(sp));
    int excited = 0;
    for (int k : pat)
      excited += k != 0;
    EXPECT_EQ(excited, 2);
  }
  // a bare Z on a site excites an e on the A below-right and ebar above-left
  auto t = ground_state(lat);
  t.apply_weyl(WeylOp::Z(3, 24, lat.site(2, 2)));
  EXPECT_EQ(t.expectation_exponent(lat.plaquette(2, 2).op), 2);
  EXPECT_EQ(t.expectation_exponent(lat.plaquette(1, 1).op), 1);
}

TEST(Anyons, StringsMoveOnlyEndpoints) {
  TorusLattice lat(6, 4);
  struct Case {
    Species sp;
    std::vector<std::pair<int, int>> xy;
  };
  std::vector<Case> cases = {
      {Species::e, {{0, 0}, {1, 1}, {2, 2}, {3, 3}}},
      {Species::e, {{1, 1}, {2, 1}, {3, 1}, {3, 2}}},
      {Species::ebar, {{5, 2}, {4, 3}, {3, 0}}},
      {Species::m, {{1, 0}, {2, 1}, {3, 2}}},
      {Species::mbar, {{2, 2}, {3, 1}, {4, 0}, {5, 0}, {5, 1}}},
  };
  for (const auto &c : cases) {
    std::vector<int> path;
    for (auto [x, y] : c.xy)
      path.push_back(lat.site(x, y));
    auto str = anyon_string(lat, c.sp, path);
    auto t = ground_state(lat);
    t.apply_weyl(str.op);
    auto pat = pattern(lat, t);
    for (const auto &p : lat.plaquettes()) {
      int want = 0;
      if (p.index == str.end_plaquette)
        want = species_exponent(c.sp);
      else if (p.index == str.start_plaquette)
        want = 3 - species_exponent(c.sp);
      EXPECT_EQ(pat[p.index], want) << species_name(c.sp) << " " << p.label;
    }
    auto want_type = is_charge(c.sp) ? PlaqType::A : PlaqType::B;
    EXPECT_EQ(lat.plaquettes()[str.end_plaquette].type, want_type);
  }
}

TEST(Anyons, ClosedContractibleLoopIsInvisible) {
  TorusLattice lat(6, 4);
  // charge loop around B(1,0), flux loop around A(2,0)
  std::vector<std::pair<Species, std::vector<int>>> loops = {
      {Species::e,
       {lat.site(1, 0), lat.site(2, 0), lat.site(2, 1), lat.site(1, 1)}},
      {Species::m,
       {lat.site(2, 0), lat.site(3, 0), lat.site(3, 1), lat.site(2, 1)}}};
  for (const auto &[sp, loop] : loops) {
    auto str = anyon_string(lat, sp, loop, true);
    EXPECT_EQ(str.start_plaquette, -1);
    auto t = ground_state(lat);
    t.apply_weyl(str.op);
    for (int k : pattern(lat, t))
      EXPECT_EQ(k, 0);
  }
}

TEST(Anyons, RejectsBadPaths) {
  TorusLattice lat(6, 4);
  EXPECT_THROW(anyon_string(lat, Species::e, {}), std::invalid_argument);
  EXPECT_THROW(anyon_string(lat, Species::e, {0, 2}), std::invalid_argument);
  // (0,0)-(1,1) only share A(0,0); a flux cannot use it
  EXPECT_THROW(anyon_string(lat, Species::m, {lat.site(0, 0), lat.site(1, 1)}),
               std::invalid_argument);
  EXPECT_THROW(anyon_string(lat, Species::e, {lat.site(0, 0), lat.site(1, 0),
                                              lat.site(1, 1)}),
               std::invalid_argument);
  EXPECT_EQ(species_from_name("mbar"), Species::mbar);
  EXPECT_THROW(species_from_name("q"), std::invalid_argument);
}
