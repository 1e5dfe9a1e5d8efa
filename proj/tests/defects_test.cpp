/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#include <gtest/gtest.h>

#include <map>
#include <set>

#include "test_util.hpp"
#include "ztoric/dense.hpp"
#include "ztoric/experiments.hpp"

using namespace ztoric;

namespace {

const Frame &frame(const Experiment &e, const std::string &label) {
  for (const auto &f : e.frames())
    if (f.label == label)
      return f;
  throw std::out_of_range(label);
}

std::map<std::string, int> excited(const Experiment &e,
                                   const std::string &label,
                                   bool nonlocal = false) {
  return frame_excitations(frame(e, label), nonlocal);
}

int local_count(const StabilizerBook &b) {
  int n = 0;
  for (const auto &s : b.entries())
    n += s.local;
  return n;
}

} // namespace

// ------------------------------------------------------------------ book

TEST(Book, GroundBookMatchesPlaquettes) {
  TorusLattice lat(6, 4);
  StabilizerBook b(lat);
  EXPECT_EQ(b.size(), lat.plaquettes().size());
  EXPECT_NO_THROW(b.check_commuting());
  EXPECT_EQ(b.find("A(0,0)"), 0);
  EXPECT_EQ(b.find("B(1,0)"), 1);
  EXPECT_THROW(b.find("A(9,9)"), std::invalid_argument);
}

TEST(Book, ConjugationRoundTripRestoresLabels) {
  TorusLattice lat(4, 4);
  StabilizerBook b(lat);
  std::vector<CliffordGate> u = {CliffordGate(GateKind::CX, 5, 6),
                                 CliffordGate(GateKind::Fourier, 9)};
  b.conjugate(u);
  EXPECT_NO_THROW(b.check_commuting());
  bool primed = false;
  for (const auto &s : b.entries())
    primed |= s.label.back() == '\'';
  EXPECT_TRUE(primed);
  std::vector<CliffordGate> inv = {CliffordGate(GateKind::FourierDag, 9),
                                   CliffordGate(GateKind::CXdag, 5, 6)};
  b.conjugate(inv);
  StabilizerBook ref(lat);
  ASSERT_EQ(b.size(), ref.size());
  for (size_t i = 0; i < b.size(); ++i) {
    EXPECT_EQ(b.entries()[i].label, ref.entries()[i].label);
    EXPECT_EQ(b.entries()[i].op, ref.entries()[i].op);
    EXPECT_TRUE(b.entries()[i].local);
  }
}

// -------------------------------------------------------------------- PF

TEST(PF, MeasurementObservableAlternates) {
  TorusLattice lat(6, 4);
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 4; ++y) {
      int s = lat.site(x, y);
      WeylOp p = pf_measurement_op(lat, s, DefectKind::PF);
      WeylOp q = pf_measurement_op(lat, s, DefectKind::PFstar);
      int zp = (x + y) % 2 ? 1 : 2;
      EXPECT_EQ(p.x[s], 1);
      EXPECT_EQ(p.z[s], zp);
      EXPECT_EQ(q.z[s], 3 - zp);
      EXPECT_EQ(p.weight(), 1);
    }
}

TEST(PF, KernelDimensionAndDominos) {
  TorusLattice lat(6, 4);
  for (int k = 1; k <= 3; ++k) {
    std::vector<int> sites;
    for (int i = 0; i < k; ++i)
      sites.push_back(lat.site(1 + i, 2));
    StabilizerBook b(lat);
    auto frag = pf_defect_circuit(lat, b, sites, DefectKind::PF, 0);
    const auto &sp = frag.spec;
    EXPECT_EQ(sp.measured.size(), size_t(k));
    EXPECT_EQ(sp.cregs.size(), size_t(k));
    // fused set spans the k + 2 dimensional kernel: locals plus one
    // nonlocal; the measured observables themselves are listed as well
    size_t fused = sp.endpoint_stabilizers.size() +
                   sp.nonlocal_stabilizers.size(), sigmas = 0;
    for (const auto &s : sp.other_stabilizers)
      (s.label.find(":s") != std::string::npos ? sigmas : fused) += 1;
    EXPECT_EQ(fused, size_t(k + 2)) << "k=" << k;
    EXPECT_EQ(sigmas, size_t(k));
    EXPECT_EQ(sp.nonlocal_stabilizers.size(), 1u);
    EXPECT_EQ(sp.endpoint_stabilizers.size(), 2u);
    for (const auto &s : sp.endpoint_stabilizers) {
      EXPECT_EQ(s.origin.size(), 2u) << s.label;
      EXPECT_EQ(s.label.rfind("pf:", 0), 0u);
    }
    // every fused operator avoids the measured sites and commutes with them
    for (const auto *v : {&sp.endpoint_stabilizers, &sp.nonlocal_stabilizers,
                          &sp.other_stabilizers})
      for (const auto &s : *v) {
        if (s.label.find(":s") != std::string::npos)
          continue;
        for (int site : sites)
          EXPECT_TRUE(s.op.x[site] == 0 && s.op.z[site] == 0) << s.label;
        for (const auto &m : sp.measured)
          EXPECT_TRUE(commutes(s.op, m));
      }
    update_book_pf(b, sp);
    EXPECT_NO_THROW(b.check_commuting());
  }
}

TEST(PF, FeedForwardIsDeterministicOverSeeds) {
  TorusLattice lat(6, 4);
  std::vector<int> line = {lat.site(1, 2), lat.site(2, 2), lat.site(3, 2)};
  for (uint64_t seed = 1; seed <= 25; ++seed) {
    Experiment e(lat, 0, seed);
    e.prepare();
    e.add_pf(line, DefectKind::PF, "pf");
    for (const auto &s : e.book().entries())
      EXPECT_EQ(e.exponent(s.label), 0) << s.label << " seed " << seed;
    for (const auto &m : e.defect("pf").measured)
      EXPECT_EQ(e.state().expectation_exponent(m), 0);
  }
}

TEST(PF, InvalidSites) {
  TorusLattice lat(6, 4);
  StabilizerBook b(lat);
  EXPECT_THROW(pf_defect_circuit(lat, b, {}, DefectKind::PF, 0),
               std::invalid_argument);
  EXPECT_THROW(pf_defect_circuit(lat, b, {3, 3}, DefectKind::PF, 0),
               std::invalid_argument);
}

TEST(PF, DenseOracleAgreesOnSmallTorus) {
  // 4x2 torus: the tableau after the defect, densified, must give the
  // same stabilizer values as an independent dense replay of its gates
  TorusLattice lat(4, 2);
  for (uint64_t seed = 1; seed <= 4; ++seed) {
    Experiment e(lat, 0, seed);
    e.prepare();
    e.add_pf({lat.site(1, 0)}, DefectKind::PF, "pf");
    DenseState ds = dense_from_tableau(e.state());
    EXPECT_NEAR(ds.norm(), 1.0, 1e-9);
    for (const auto &s : e.book().entries()) {
      cplx v = ds.expectation(s.op);
      EXPECT_NEAR(std::abs(v - cplx(1, 0)), 0.0, 1e-9) << s.label;
    }
    for (const auto &m : e.defect("pf").measured)
      EXPECT_NEAR(std::abs(ds.expectation(m) - cplx(1, 0)), 0.0, 1e-9);
  }
}

// -------------------------------------------------------------------- CC

TEST(CC, RibbonGeometry) {
  TorusLattice lat(6, 4);
  CCRibbon r = make_ribbon(lat, 1, 2, 2);
  ASSERT_EQ(r.s.size(), 2u);
  EXPECT_EQ(r.s[0], lat.site(1, 2));
  EXPECT_EQ(r.s[1], lat.site(2, 1));
  EXPECT_EQ(r.sigma[0], lat.site(1, 1));
  EXPECT_EQ(r.sigma[1], lat.site(2, 0));
  CCRibbon h = make_ribbon(lat, 1, 0, 1, true);
  EXPECT_EQ(h.sigma[0], lat.site(2, 0));
  EXPECT_THROW(make_ribbon(lat, 1, 1, 1), std::invalid_argument);
  EXPECT_THROW(make_ribbon(lat, 1, 2, 0), std::invalid_argument);
}

TEST(CC, UnitarySquaresToIdentityOnRandomStates) {
  TorusLattice lat(6, 4);
  CCRibbon r = make_ribbon(lat, 1, 2, 2);
  auto u = cc_unitary(r);
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    StabilizerTableau t(3, lat.n_sites(), trial);
    for (int g = 0; g < 80; ++g)
      t.apply_gate(ztoric::testing::random_gate(rng, lat.n_sites()));
    StabilizerTableau ref = t;
    for (int rep = 0; rep < 2; ++rep)
      for (const auto &g : u)
        t.apply_gate(g);
    EXPECT_TRUE(t.same_state(ref));
  }
}

TEST(CC, UnitarySquaresToIdentityDense) {
  // the ribbon touches 2k sites; compress them onto a small register
  TorusLattice lat(6, 4);
  CCRibbon r = make_ribbon(lat, 1, 2, 2);
  auto u = cc_unitary(r);
  std::map<int, int> idx;
  for (const auto &g : u)
    for (int q : g.targets())
      idx.emplace(q, int(idx.size()));
  const int n = int(idx.size());
  ASSERT_EQ(n, 4);
  DenseState ds(3, n);
  Rng rng(17);
  for (long i = 0; i < ds.dim(); ++i)
    ds.amplitudes()[i] = cplx(rng.uniform01() - 0.5, rng.uniform01() - 0.5);
  ds.amplitudes().normalize();
  CVector ref = ds.amplitudes();
  DenseState once = ds;
  for (int rep = 0; rep < 2; ++rep)
    for (const auto &g : u) {
      CliffordGate h(g.kind, idx[g.q0], g.q1 < 0 ? -1 : idx[g.q1]);
      ds.apply_gate(h);
      if (rep == 0)
        once.apply_gate(h);
    }
  EXPECT_LT((ds.amplitudes() - ref).norm(), 1e-10);
  EXPECT_GT((once.amplitudes() - ref).norm(), 1e-3);
}

TEST(CC, EndpointsFollowRibbon) {
  TorusLattice lat(8, 8);
  for (int k = 1; k <= 4; ++k) {
    const int x0 = 2, y0 = 5;
    StabilizerBook b(lat);
    auto frag = cc_defect_circuit(lat, b, make_ribbon(lat, x0, y0, k));
    ASSERT_EQ(frag.spec.endpoint_stabilizers.size(), 2u);
    std::set<int> origins;
    for (const auto &s : frag.spec.endpoint_stabilizers) {
      EXPECT_FALSE(s.local);
      EXPECT_GT(s.op.weight(), 4);
      origins.insert(s.origin.begin(), s.origin.end());
    }
    int start = lat.plaquette_index(x0 - 1, y0);
    int end = lat.plaquette_index(x0 + k - 1, y0 - k - 1);
    EXPECT_TRUE(origins.count(start)) << "k=" << k;
    EXPECT_TRUE(origins.count(end)) << "k=" << k;
    update_book_cc(b, frag.spec);
    EXPECT_NO_THROW(b.check_commuting());
  }
}

TEST(CC, FuseRestoresPlainBook) {
  TorusLattice lat(4, 4);
  Experiment e(lat, 0, 5);
  e.prepare();
  e.add_cc(make_ribbon(lat, 1, 2, 2), "cc");
  EXPECT_LT(local_count(e.book()), int(lat.plaquettes().size()));
  e.fuse_cc("cc");
  StabilizerBook ref(lat);
  for (const auto &s : ref.entries()) {
    int i = e.book().find(s.label);
    ASSERT_GE(i, 0) << s.label;
    EXPECT_EQ(e.exponent(s.label), 0);
  }
}

// --------------------------------------------------------------- presets

TEST(Presets, AllRunAndStayCommuting) {
  for (const auto &name : preset_names()) {
    auto s = preset(name);
    EXPECT_FALSE(s.citation.empty());
    auto e = run_script(s, 1);
    EXPECT_FALSE(e.frames().empty()) << name;
    EXPECT_NO_THROW(e.book().check_commuting());
    EXPECT_NO_THROW(e.circuit().validate());
  }
  EXPECT_THROW(preset("nope"), std::invalid_argument);
}

TEST(Presets, ChargeBecomesDyonAcrossPF) {
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    auto e = run_script(preset("fig3-pf-braid"), seed);
    EXPECT_TRUE(excited(e, "ground").empty());
    EXPECT_TRUE(excited(e, "defect").empty());
    auto pair = excited(e, "pair");
    EXPECT_EQ(pair.at("A(4,0)"), 1);
    EXPECT_EQ(pair.at("A(5,1)"), 2);
    auto dyon = excited(e, "dyon", true);
    EXPECT_EQ(dyon.at("A(5,1)"), 2);
    EXPECT_EQ(dyon.at("B(5,2)"), 1);
    EXPECT_EQ(dyon.at("pf:NL"), 1);
  }
}

TEST(Presets, FluxRelabelledAfterCCFuse) {
  auto e = run_script(preset("fig4-cc-braid"), 1);
  auto s1 = excited(e, "step1");
  EXPECT_EQ(s1.at("B(3,0)"), 1);
  auto fused = excited(e, "fused");
  // the carried mbar returns as m
  EXPECT_EQ(fused.at("B(3,0)"), 2);
  auto rev = excited(e, "revealed");
  EXPECT_EQ(rev.at("B(2,3)"), 1);
  EXPECT_EQ(rev.at("B(3,0)"), 2);
}

TEST(Presets, CCAndPFPairAgreeForEverySpecies) {
  for (Species sp : {Species::e, Species::ebar, Species::m, Species::mbar}) {
    auto a = run_script(fig4_script(true, sp), 2);
    auto b = run_script(fig4_script(false, sp), 2);
    auto fa = excited(a, "fused"), fb = excited(b, "fused");
    std::string p = is_charge(sp) ? "A(3,1)" : "B(3,0)";
    ASSERT_TRUE(fa.count(p)) << species_name(sp);
    ASSERT_TRUE(fb.count(p)) << species_name(sp);
    EXPECT_EQ(fa.at(p), fb.at(p));
    EXPECT_EQ(fa.at(p), species_exponent(sp));
  }
}

TEST(Presets, ConjugatedStringSwapsSpecies) {
  auto e = run_script(preset("figS6-pf-conjugate"), 1);
  auto s = excited(e, "string", true);
  EXPECT_EQ(s.at("A(2,0)"), 1);
  EXPECT_EQ(s.at("B(2,3)"), 2);
  EXPECT_EQ(s.at("pf:NL"), 2);
  EXPECT_TRUE(excited(e, "undone").empty());
  EXPECT_TRUE(excited(e, "deformed").empty());
  auto c = excited(e, "conjugated-string", true);
  EXPECT_EQ(c.at("A(2,0)'"), 2);
  EXPECT_EQ(c.at("B(2,3)'"), 1);
  EXPECT_EQ(c.at("pf:NL'"), 1);
}

TEST(Presets, ZeroNoiseSamplingMatchesExact) {
  auto e = run_script(preset("fig3-pf-braid"), 1);
  auto sf = sampled_frames(e, NoiseModel{}, 40, 9, 2);
  ASSERT_EQ(sf.size(), e.frames().size());
  for (size_t i = 0; i < sf.size(); ++i)
    EXPECT_EQ(frame_excitations(sf[i], true),
              frame_excitations(e.frames()[i], true))
        << sf[i].label;
}

TEST(Presets, NoiseBlursFrames) {
  auto e = run_script(preset("fig3-pf-braid"), 1);
  auto sf = sampled_frames(e, NoiseModel{0.05, 0.1, 0.05}, 200, 9, 2);
  double worst = 1.0;
  for (const auto &s : sf.back().snapshots)
    worst = std::min(worst, *std::max_element(s.pi.begin(), s.pi.end()));
  EXPECT_LT(worst, 0.99);
}

// --------------------------------------------------------------- scripts

TEST(Scripts, JsonRoundTrip) {
  for (const auto &name : preset_names()) {
    auto s = preset(name);
    json j = script_to_json(s);
    auto back = script_from_json(j);
    EXPECT_EQ(script_to_json(back).dump(), j.dump());
    auto a = run_script(s, 3), b = run_script(back, 3);
    ASSERT_EQ(a.frames().size(), b.frames().size());
    for (size_t i = 0; i < a.frames().size(); ++i)
      EXPECT_EQ(frame_excitations(a.frames()[i], true),
                frame_excitations(b.frames()[i], true));
  }
}

TEST(Scripts, BadStepsRejected) {
  json j = script_to_json(preset("fig3-pf-braid"));
  json bad = j;
  bad["steps"].push_back(json{{"op", "teleport"}});
  EXPECT_THROW(run_script(script_from_json(bad)), std::invalid_argument);
  bad = j;
  bad["schema_version"] = 7;
  EXPECT_THROW(script_from_json(bad), std::invalid_argument);
  bad = j;
  bad["steps"].push_back(
      json{{"op", "move"}, {"path", json::array({"A(0,0)", "B(3,2)"})}});
  EXPECT_ANY_THROW(run_script(script_from_json(bad)));
}

// --------------------------------------------------------- topo qutrit

class Topo : public ::testing::TestWithParam<std::string> {};

TEST_P(Topo, LoopAlgebra) {
  for (uint64_t seed = 1; seed <= 3; ++seed) {
    auto q = build_topo_qutrit(GetParam(), seed);
    const auto &book = q.exp.book();
    for (const auto &s : book.entries())
      if (s.local) {
        EXPECT_TRUE(commutes(q.L, s.op)) << s.label;
        EXPECT_TRUE(commutes(q.XL, s.op)) << s.label;
        EXPECT_TRUE(commutes(q.ZZ, s.op)) << s.label;
      }
    ASSERT_EQ(q.a_endpoints.size(), 2u);
    const auto &a1 = book.entries()[book.find(q.a_endpoints[0])].op;
    EXPECT_EQ(symplectic_product(q.L, a1), 1);
    EXPECT_EQ(symplectic_product(q.XL, q.L), 1);
    EXPECT_TRUE(commutes(q.ZZ, q.L));
    // vacuum pairs: both ZZ and the endpoint correlator are +1
    EXPECT_EQ(q.exp.state().expectation_exponent(q.ZZ), 0);
    EXPECT_EQ(q.exp.state().expectation_exponent(q.correlator), 0);
  }
}

TEST_P(Topo, InjectionSetsLoopSector) {
  std::set<int> seen;
  for (uint64_t seed = 1; seed <= 12; ++seed) {
    auto q = build_topo_qutrit(GetParam(), seed);
    int cr = topo_injection(q);
    ASSERT_GE(cr, 0);
    // the ancilla outcome fixes the L sector
    int j = q.exp.cregs().at(cr);
    StabilizerTableau t = q.exp.state();
    EXPECT_EQ(t.expectation_exponent(q.L), j);
    seen.insert(j);
    // XL shifts the sector by one unit
    t.apply_weyl(q.XL);
    EXPECT_EQ(t.expectation_exponent(q.L), mod(j + 1, 3));
  }
  EXPECT_GE(seen.size(), 2u);
}

INSTANTIATE_TEST_SUITE_P(Variants, Topo, ::testing::Values("6x4", "6x2"));
