/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#include "ztoric/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ztoric {

void ConfusionMatrix::validate() const {
  if (!(p01 >= 0 && p01 < 0.5 && p10 >= 0 && p10 < 0.5))
    throw std::invalid_argument("readout rates must lie in [0, 0.5)");
  if (p01 + p10 >= 1)
    throw std::invalid_argument("readout confusion matrix is singular");
}

// ---------------------------------------------------------------- bounds

FidelityBound fidelity_bounds(double trP, double trQ, int n_sites, double seP,
                              double seQ) {
  if (n_sites < 1)
    throw std::invalid_argument("fidelity bound needs n_sites >= 1");
  FidelityBound b;
  b.n_sites = n_sites;
  b.clamped = trP < 0 || trP > 1 || trQ < 0 || trQ > 1;
  b.trP = std::clamp(trP, 0.0, 1.0);
  b.trQ = std::clamp(trQ, 0.0, 1.0);
  const double raw_lower = b.trP + b.trQ - 1;
  b.lower = std::max(0.0, raw_lower);
  b.upper = std::min(b.trP, b.trQ);
  b.lower_se = raw_lower > 0 ? std::hypot(seP, seQ) : 0.0;
  b.upper_se = b.trP <= b.trQ ? seP : seQ;
  const double inv = 1.0 / n_sites;
  auto root = [&](double f, double se, double &v, double &v_se) {
    v = std::pow(f, inv);
    v_se = f > 0 ? se * inv * std::pow(f, inv - 1) : 0.0;
  };
  root(b.lower, b.lower_se, b.per_site_lower, b.per_site_lower_se);
  root(b.upper, b.upper_se, b.per_site_upper, b.per_site_upper_se);
  return b;
}

FidelityBound topological_qutrit_bounds(const std::array<double, 3> &x_triple,
                                        const std::array<double, 3> &z_triple,
                                        int j,
                                        const std::array<double, 3> &x_se,
                                        const std::array<double, 3> &z_se) {
  if (j < 0 || j > 2)
    throw std::invalid_argument("ancilla outcome must be 0, 1 or 2");
  return fidelity_bounds(x_triple[j], z_triple[0], 1, x_se[j], z_se[0]);
}

// ------------------------------------------------------------------ SPAM

namespace {

// Applies the 2x2 matrix m (m[read][true]) on every bit.
std::vector<double> per_bit(const std::vector<double> &dist, int width,
                            const double m[2][2]) {
  if (width < 0 || width > 30 || dist.size() != (size_t{1} << width))
    throw std::invalid_argument("distribution size does not match its width");
  std::vector<double> p = dist;
  for (int b = 0; b < width; ++b) {
    const size_t bit = size_t{1} << b;
    for (size_t i = 0; i < p.size(); ++i) {
      if (i & bit)
        continue;
      const double v0 = p[i], v1 = p[i | bit];
      p[i] = m[0][0] * v0 + m[0][1] * v1;
      p[i | bit] = m[1][0] * v0 + m[1][1] * v1;
    }
  }
  return p;
}

} // namespace

std::vector<double> spam_forward(const std::vector<double> &dist, int width,
                                 const ConfusionMatrix &cm) {
  cm.validate();
  const double m[2][2] = {{1 - cm.p10, cm.p01}, {cm.p10, 1 - cm.p01}};
  return per_bit(dist, width, m);
}

MitigatedDistribution spam_mitigate(const std::vector<double> &dist, int width,
                                    const ConfusionMatrix &cm) {
  cm.validate();
  const double det = 1 - cm.p01 - cm.p10;
  const double m[2][2] = {{(1 - cm.p01) / det, -cm.p01 / det},
                          {-cm.p10 / det, (1 - cm.p10) / det}};
  MitigatedDistribution out;
  out.width = width;
  out.p = per_bit(dist, width, m);
  out.min_value = out.p.empty() ? 0.0 : *std::min_element(out.p.begin(), out.p.end());
  out.has_negative = out.min_value < 0;
  return out;
}

std::vector<double> marginal_distribution(const std::vector<ShotRecord> &records,
                                          const std::vector<int> &qubits) {
  const int w = static_cast<int>(qubits.size());
  if (w > 30)
    throw std::invalid_argument("marginal over more than 30 qubits");
  std::vector<double> p(size_t{1} << w, 0.0);
  if (records.empty())
    return p;
  for (const auto &r : records) {
    size_t idx = 0;
    for (int i = 0; i < w; ++i)
      if (r.qubit_bits.at(qubits[i]))
        idx |= size_t{1} << i;
    p[idx] += 1.0;
  }
  for (double &v : p)
    v /= static_cast<double>(records.size());
  return p;
}

PlaquetteSnapshot
plaquette_from_qubits(const std::vector<ShotRecord> &records,
                      const std::vector<std::pair<int, int>> &terms,
                      const ConfusionMatrix &cm, const std::string &label,
                      const std::string &type) {
  std::vector<ShotRecord> kept;
  for (const auto &r : records)
    if (!r.herald_discard)
      kept.push_back(r);
  if (kept.empty())
    throw std::invalid_argument("estimate needs at least one retained shot");
  std::vector<int> qubits;
  for (auto [c, e] : terms) {
    qubits.push_back(2 * c);
    qubits.push_back(2 * c + 1);
  }
  std::vector<double> dist = marginal_distribution(kept, qubits);
  if (!cm.identity())
    dist = spam_mitigate(dist, static_cast<int>(qubits.size()), cm).p;
  std::vector<double> counts(3, 0.0);
  double valid = 0;
  for (size_t idx = 0; idx < dist.size(); ++idx) {
    long long k = 0;
    bool ok = true;
    for (size_t t = 0; t < terms.size() && ok; ++t) {
      const int v = decode_bits((idx >> (2 * t)) & 1, (idx >> (2 * t + 1)) & 1);
      ok = v >= 0;
      k += static_cast<long long>(terms[t].second) * v;
    }
    if (!ok)
      continue;
    counts[mod(k, 3)] += dist[idx];
    valid += dist[idx];
  }
  if (valid <= 0)
    throw std::invalid_argument("no weight on code patterns");
  const double n = static_cast<double>(kept.size());
  for (double &c : counts)
    c *= n / valid;
  return snapshot_from_histogram(counts, n, label, type);
}

// ---------------------------------------------------------------- energy

EnergyEstimate energy_density(const std::vector<PlaquetteSnapshot> &snaps,
                              const std::vector<std::string> &expected) {
  if (snaps.empty())
    throw std::invalid_argument("energy density needs at least one plaquette");
  std::set<std::string> have;
  EnergyEstimate e;
  double var = 0;
  for (const auto &s : snaps) {
    if (s.pi.empty())
      throw std::invalid_argument("snapshot " + s.label + " has no Pi^1");
    have.insert(s.label);
    e.value -= s.pi[0];
    if (!s.se.empty())
      var += s.se[0] * s.se[0];
  }
  for (const auto &l : expected)
    if (!have.count(l))
      throw std::invalid_argument("missing plaquette " + l);
  e.n_plaquettes = static_cast<int>(snaps.size());
  e.value /= e.n_plaquettes;
  e.se = std::sqrt(var) / e.n_plaquettes;
  return e;
}

std::vector<double> binomial_se(const std::vector<double> &p, long n) {
  if (n <= 0)
    throw std::invalid_argument("standard error needs N > 0");
  std::vector<double> out;
  for (double v : p) {
    const double q = std::clamp(v, 0.0, 1.0);
    out.push_back(std::sqrt(q * (1 - q) / n));
  }
  return out;
}

double max_standard_error(const std::vector<PlaquetteSnapshot> &snaps) {
  double m = 0;
  for (const auto &s : snaps)
    for (double v : s.se)
      m = std::max(m, v);
  return m;
}

double bootstrap_se(const std::vector<uint8_t> &samples, int resamples,
                    uint64_t seed) {
  if (samples.empty() || resamples < 2)
    throw std::invalid_argument("bootstrap needs samples and >= 2 resamples");
  Rng rng(seed);
  const int n = static_cast<int>(samples.size());
  double s1 = 0, s2 = 0;
  for (int r = 0; r < resamples; ++r) {
    long hits = 0;
    for (int i = 0; i < n; ++i)
      hits += samples[rng.uniform_int(n)];
    const double m = double(hits) / n;
    s1 += m;
    s2 += m * m;
  }
  const double mean = s1 / resamples;
  return std::sqrt(std::max(0.0, (s2 - resamples * mean * mean) / (resamples - 1)));
}

// ------------------------------------------------------------------ I/O

PlaquetteSnapshot snapshot_from_json(const json &j) {
  PlaquetteSnapshot s;
  s.label = j.at("label").get<std::string>();
  s.type = j.value("type", std::string());
  s.pi = j.at("pi").get<std::vector<double>>();
  if (s.pi.empty())
    throw std::invalid_argument("snapshot " + s.label + " has an empty pi");
  if (j.contains("se"))
    s.se = j.at("se").get<std::vector<double>>();
  s.samples = j.value("samples", 0L);
  if (j.contains("expectation")) {
    const auto &e = j.at("expectation");
    s.expectation = {e.at(0).get<double>(), e.at(1).get<double>()};
  } else {
    for (size_t k = 0; k < s.pi.size(); ++k)
      s.expectation +=
          std::polar(s.pi[k], 2 * M_PI * double(k) / double(s.pi.size()));
  }
  if (j.contains("arg_deg") && !j.at("arg_deg").is_null())
    s.arg_deg = j.at("arg_deg").get<double>();
  return s;
}

std::vector<PlaquetteSnapshot> snapshots_from_json(const json &j) {
  const json &arr = j.is_array() ? j : j.at("snapshots");
  std::vector<PlaquetteSnapshot> out;
  for (const auto &s : arr)
    out.push_back(snapshot_from_json(s));
  return out;
}

std::string snapshot_table_csv(const std::vector<PlaquetteSnapshot> &snaps) {
  std::ostringstream os;
  os << std::setprecision(6) << std::fixed;
  os << "label,type,pi1,pi_w,pi_w2,se1,samples\n";
  for (const auto &s : snaps) {
    os << s.label << ',' << s.type;
    for (int k = 0; k < 3; ++k)
      os << ',' << (k < static_cast<int>(s.pi.size()) ? s.pi[k] : 0.0);
    os << ',' << (s.se.empty() ? 0.0 : s.se[0]) << ',' << s.samples << '\n';
  }
  return os.str();
}

std::string topo_table_csv(const std::vector<TopoRow> &rows) {
  std::ostringstream os;
  os << std::setprecision(6) << std::fixed;
  os << "outcome,x_pi1,x_pi_w,x_pi_w2,z_pi1,z_pi_w,z_pi_w2,lower,upper,"
        "lower_se,upper_se\n";
  for (const auto &r : rows) {
    os << r.outcome;
    for (double v : r.x_triple)
      os << ',' << v;
    for (double v : r.z_triple)
      os << ',' << v;
    os << ',' << r.bound.lower << ',' << r.bound.upper << ','
       << r.bound.lower_se << ',' << r.bound.upper_se << '\n';
  }
  return os.str();
}

json fidelity_bound_to_json(const FidelityBound &b) {
  auto tidy = [](double v) { return std::round(v * 1e12) / 1e12; };
  return json{{"trP", tidy(b.trP)},
              {"trQ", tidy(b.trQ)},
              {"n_sites", b.n_sites},
              {"lower", tidy(b.lower)},
              {"upper", tidy(b.upper)},
              {"lower_se", tidy(b.lower_se)},
              {"upper_se", tidy(b.upper_se)},
              {"per_site_lower", tidy(b.per_site_lower)},
              {"per_site_upper", tidy(b.per_site_upper)},
              {"per_site_lower_se", tidy(b.per_site_lower_se)},
              {"per_site_upper_se", tidy(b.per_site_upper_se)},
              {"clamped", b.clamped}};
}

} // namespace ztoric
