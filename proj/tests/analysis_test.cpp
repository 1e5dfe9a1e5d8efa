/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "ztoric/analysis.hpp"
#include "ztoric/encoded_sim.hpp"
#include "ztoric/experiments.hpp"
#include "ztoric/lattice.hpp"

#ifndef ZTORIC_TEST_DATA
#define ZTORIC_TEST_DATA "tests/data"
#endif

using namespace ztoric;

namespace {

std::vector<double> random_distribution(Rng &rng, int width) {
  std::vector<double> p(size_t{1} << width);
  double s = 0;
  for (double &v : p) {
    v = rng.uniform01();
    s += v;
  }
  for (double &v : p)
    v /= s;
  return p;
}

PlaquetteSnapshot flat_snapshot(const std::string &label, double pi1) {
  const double r = (1 - pi1) / 2;
  return snapshot_from_histogram({pi1, r, r}, 1.0, label, "A");
}

std::vector<std::pair<int, int>> terms_of(const Plaquette &p, int first) {
  std::vector<std::pair<int, int>> t;
  for (int k = 0; k < 4; ++k)
    t.emplace_back(first + p.corners[k], p.exps[k]);
  return t;
}

} // namespace

TEST(Bounds, GroundStateRow) {
  auto b = fidelity_bounds(0.75, 0.68, 24);
  EXPECT_NEAR(b.lower, 0.43, 1e-12);
  EXPECT_NEAR(b.upper, 0.68, 1e-12);
  EXPECT_NEAR(b.per_site_lower, 0.9654, 5e-5);
  EXPECT_NEAR(b.per_site_upper, 0.9841, 5e-5);
  // the published per-site figures and their quoted uncertainties
  EXPECT_NEAR(b.per_site_lower, 0.965, 0.003);
  EXPECT_NEAR(b.per_site_upper, 0.984, 0.002);
  EXPECT_FALSE(b.clamped);
}

TEST(Bounds, TrivialAndClamped) {
  auto one = fidelity_bounds(1, 1, 7);
  EXPECT_DOUBLE_EQ(one.lower, 1);
  EXPECT_DOUBLE_EQ(one.upper, 1);
  EXPECT_DOUBLE_EQ(one.per_site_lower, 1);
  EXPECT_DOUBLE_EQ(one.per_site_upper, 1);
  auto low = fidelity_bounds(0.5, 0.4, 10);
  EXPECT_DOUBLE_EQ(low.lower, 0);
  EXPECT_DOUBLE_EQ(low.upper, 0.4);
  EXPECT_DOUBLE_EQ(low.per_site_lower, 0);
  auto over = fidelity_bounds(1.002, 0.9, 4);
  EXPECT_TRUE(over.clamped);
  EXPECT_DOUBLE_EQ(over.trP, 1.0);
  EXPECT_THROW(fidelity_bounds(0.9, 0.9, 0), std::invalid_argument);
}

TEST(Bounds, ErrorsPropagate) {
  auto b = fidelity_bounds(0.75, 0.68, 24, 0.03, 0.03);
  EXPECT_NEAR(b.lower_se, std::hypot(0.03, 0.03), 1e-15);
  EXPECT_DOUBLE_EQ(b.upper_se, 0.03);
  // delta method through the 24th root
  const double h = 1e-6;
  const double d = (std::pow(0.43 + h, 1.0 / 24) - std::pow(0.43 - h, 1.0 / 24)) / (2 * h);
  EXPECT_NEAR(b.per_site_lower_se, d * b.lower_se, 1e-9);
  // quoted as 0.42(4) and 0.965(3)
  EXPECT_NEAR(b.lower_se, 0.04, 0.005);
  EXPECT_NEAR(b.per_site_lower_se, 0.003, 0.0015);
}

TEST(Bounds, MonotoneInInputs) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const double p = rng.uniform01(), q = rng.uniform01();
    const double dp = 0.05 * rng.uniform01(), dq = 0.05 * rng.uniform01();
    auto a = fidelity_bounds(p, q, 6);
    auto b = fidelity_bounds(std::min(1.0, p + dp), std::min(1.0, q + dq), 6);
    EXPECT_LE(a.lower, b.lower + 1e-15);
    EXPECT_LE(a.upper, b.upper + 1e-15);
    EXPECT_LE(a.lower, a.upper + 1e-15);
  }
}

TEST(Bounds, TopologicalQutritRow) {
  auto b = topological_qutrit_bounds({0.92, 0.05, 0.03}, {0.80, 0.1, 0.1}, 0,
                                     {0.03, 0, 0}, {0.04, 0, 0});
  EXPECT_NEAR(b.lower, 0.72, 1e-12);
  EXPECT_NEAR(b.upper, 0.80, 1e-12);
  EXPECT_NEAR(b.lower_se, 0.05, 1e-12);
  EXPECT_NEAR(b.upper_se, 0.04, 1e-12);
  auto ideal = topological_qutrit_bounds({0, 1, 0}, {1, 0, 0}, 1);
  EXPECT_DOUBLE_EQ(ideal.lower, 1);
  EXPECT_DOUBLE_EQ(ideal.upper, 1);
  EXPECT_THROW(topological_qutrit_bounds({1, 0, 0}, {1, 0, 0}, 3),
               std::invalid_argument);
}

// Noiseless protocol: the charge loop sits in the sector of the ancilla
// outcome and the flux pair is trivial, so the bound collapses to [1, 1].
TEST(Bounds, NoiselessTopologicalQutrit) {
  for (uint64_t seed = 1; seed <= 6; ++seed) {
    TopoQutrit q = build_topo_qutrit("6x4", seed);
    const int cr = topo_injection(q);
    const int j = q.exp.cregs().at(cr);
    std::array<double, 3> x{}, z{};
    const auto sx = snapshot_exact(q.exp.state(), q.L, "L", "loop");
    const auto sz = snapshot_exact(q.exp.state(), q.ZZ, "ZZ", "loop");
    for (int k = 0; k < 3; ++k) {
      x[k] = sx.pi[k];
      z[k] = sz.pi[k];
    }
    auto b = topological_qutrit_bounds(x, z, j);
    EXPECT_NEAR(b.lower, 1, 1e-12) << seed;
    EXPECT_NEAR(b.upper, 1, 1e-12) << seed;
  }
}

TEST(Spam, IdentityLeavesDistribution) {
  Rng rng(1);
  auto p = random_distribution(rng, 5);
  auto m = spam_mitigate(p, 5, ConfusionMatrix{});
  for (size_t i = 0; i < p.size(); ++i)
    EXPECT_DOUBLE_EQ(m.p[i], p[i]);
  EXPECT_FALSE(m.has_negative);
}

TEST(Spam, ForwardThenInvertIsExact) {
  Rng rng(2);
  for (int width : {1, 4, 8, 12}) {
    auto p = random_distribution(rng, width);
    for (auto cm : {ConfusionMatrix::device(), ConfusionMatrix{0.1, 0.2}}) {
      auto m = spam_mitigate(spam_forward(p, width, cm), width, cm);
      double dev = 0;
      for (size_t i = 0; i < p.size(); ++i)
        dev = std::max(dev, std::abs(m.p[i] - p[i]));
      EXPECT_LT(dev, 1e-12) << width;
    }
  }
}

TEST(Spam, NegativesAreFlaggedNotClipped) {
  // a point mass on 00 already reads out with flips; inverting the clean
  // distribution pushes mass negative
  std::vector<double> p = {1, 0, 0, 0};
  auto m = spam_mitigate(p, 2, ConfusionMatrix::device());
  EXPECT_TRUE(m.has_negative);
  EXPECT_LT(m.min_value, 0);
  double s = 0;
  for (double v : m.p)
    s += v;
  EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(Spam, Errors) {
  std::vector<double> p = {0.5, 0.5};
  EXPECT_THROW(spam_mitigate(p, 1, ConfusionMatrix{0.5, 0.5}),
               std::invalid_argument);
  EXPECT_THROW(spam_mitigate(p, 1, ConfusionMatrix{0.6, 0.45}),
               std::invalid_argument);
  EXPECT_THROW(spam_mitigate(p, 2, ConfusionMatrix::device()),
               std::invalid_argument);
}

TEST(Spam, MitigationRaisesNoisyPlaquettes) {
  TorusLattice lat(4, 4);
  for (char basis : {'Z', 'X'}) {
    Circuit c = ground_state_circuit(lat);
    const int first = c.measure_all(basis);
    NativeNoise nm;
    nm.p2 = 2e-3;
    nm.readout = ConfusionMatrix::device();
    EncodedSimulator sim(encode_circuit(c), nm);
    auto recs = sim.run(3000, 21, 4);
    double raw = 0, mit = 0;
    for (int p : lat.plaquettes_of(basis == 'Z' ? PlaqType::B : PlaqType::A)) {
      const auto &pl = lat.plaquettes()[p];
      auto a = plaquette_from_qubits(recs, terms_of(pl, first), {}, pl.label, "");
      auto b = plaquette_from_qubits(recs, terms_of(pl, first),
                                     ConfusionMatrix::device(), pl.label, "");
      EXPECT_GT(b.pi[0], a.pi[0]) << pl.label;
      raw += a.pi[0];
      mit += b.pi[0];
    }
    EXPECT_GT(mit, raw);
  }
}

TEST(Spam, QubitEstimateMatchesCregEstimate) {
  TorusLattice lat(4, 4);
  Circuit c = ground_state_circuit(lat);
  const int first = c.measure_all('X');
  NativeNoise nm;
  nm.p2 = 5e-3;
  EncodedSimulator sim(encode_circuit(c), nm);
  auto recs = sim.run(500, 4, 2);
  const auto &pl = lat.plaquettes()[lat.plaquettes_of(PlaqType::A)[0]];
  auto a = plaquette_from_qubits(recs, terms_of(pl, first), {}, pl.label, "");
  auto b = estimate_from_records(recs, 3, terms_of(pl, first), pl.label, "");
  for (int k = 0; k < 3; ++k)
    EXPECT_NEAR(a.pi[k], b.pi[k], 1e-12);
  EXPECT_EQ(a.samples, b.samples);
}

TEST(Energy, IdealAndUniform) {
  std::vector<PlaquetteSnapshot> ideal, flat;
  for (int i = 0; i < 6; ++i) {
    ideal.push_back(flat_snapshot("p" + std::to_string(i), 1.0));
    flat.push_back(flat_snapshot("p" + std::to_string(i), 1.0 / 3));
  }
  EXPECT_DOUBLE_EQ(energy_density(ideal).value, -1.0);
  EXPECT_NEAR(energy_density(flat).value, -1.0 / 3, 1e-15);
}

TEST(Energy, RelabelInvariantAndMissing) {
  std::vector<PlaquetteSnapshot> s = {flat_snapshot("a", 0.9),
                                      flat_snapshot("b", 0.8),
                                      flat_snapshot("c", 0.95)};
  const double e = energy_density(s).value;
  std::swap(s[0].label, s[2].label);
  std::reverse(s.begin(), s.end());
  EXPECT_DOUBLE_EQ(energy_density(s).value, e);
  EXPECT_NEAR(e, -(0.9 + 0.8 + 0.95) / 3, 1e-15);
  EXPECT_THROW(energy_density(s, {"a", "d"}), std::invalid_argument);
  EXPECT_THROW(energy_density({}), std::invalid_argument);
}

TEST(Energy, FixtureIngest) {
  std::ifstream in(std::string(ZTORIC_TEST_DATA) + "/energy_6x4.json");
  ASSERT_TRUE(in.good());
  const json j = json::parse(in);
  auto snaps = snapshots_from_json(j);
  ASSERT_EQ(snaps.size(), 24u);
  std::vector<std::string> labels;
  for (const auto &s : snaps)
    labels.push_back(s.label);
  auto e = energy_density(snaps, labels);
  EXPECT_NEAR(e.value, -0.945, 1e-12);
  EXPECT_NEAR(e.se, 0.003, 0.0015);
  EXPECT_LE(max_standard_error(snaps), 0.022);
  // round trip through the writer
  json back = json::array();
  for (const auto &s : snaps)
    back.push_back(snapshot_to_json(s));
  EXPECT_NEAR(energy_density(snapshots_from_json(back)).value, -0.945, 1e-12);
}

TEST(Errors, BinomialSE) {
  EXPECT_NEAR(binomial_se({0.5}, 517)[0], 0.0220, 5e-5);
  auto z = binomial_se({0.0, 1.0}, 100);
  EXPECT_DOUBLE_EQ(z[0], 0);
  EXPECT_DOUBLE_EQ(z[1], 0);
  EXPECT_THROW(binomial_se({0.5}, 0), std::invalid_argument);
}

TEST(Errors, BootstrapAgreesWithBinomial) {
  Rng rng(17);
  for (double p : {0.5, 0.8, 0.95}) {
    std::vector<uint8_t> s(517);
    long hits = 0;
    for (auto &v : s) {
      v = rng.bernoulli(p);
      hits += v;
    }
    const double phat = double(hits) / s.size();
    const double se = binomial_se({phat}, static_cast<long>(s.size()))[0];
    EXPECT_NEAR(bootstrap_se(s, 1000, 3), se, 0.1 * se) << p;
  }
}

TEST(Tables, Csv) {
  auto b = fidelity_bounds(0.92, 0.80, 1);
  std::string t = topo_table_csv({{0, {0.92, 0.05, 0.03}, {0.80, 0.1, 0.1}, b}});
  EXPECT_EQ(t.substr(0, t.find('\n')),
            "outcome,x_pi1,x_pi_w,x_pi_w2,z_pi1,z_pi_w,z_pi_w2,lower,upper,"
            "lower_se,upper_se");
  EXPECT_NE(t.find("0,0.920000,0.050000,0.030000,0.800000"), std::string::npos);
  std::string s = snapshot_table_csv({flat_snapshot("A(0,0)", 0.9)});
  EXPECT_NE(s.find("A(0,0),A,0.900000,0.050000,0.050000"), std::string::npos);
  json jb = fidelity_bound_to_json(b);
  EXPECT_DOUBLE_EQ(jb["lower"].get<double>(), 0.72);
}
