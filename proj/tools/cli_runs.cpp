/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#include "cli_runs.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <regex>
#include <sstream>

#include "ztoric/analysis.hpp"
#include "ztoric/encoded_sim.hpp"
#include "ztoric/experiments.hpp"
#include "ztoric/lattice.hpp"
#include "ztoric/oracle.hpp"

namespace ztoric::cli {

namespace {

using Setter = std::function<void(RunConfig &, const json &)>;

template <class T> Setter field(T RunConfig::*m) {
  return [m](RunConfig &c, const json &v) { c.*m = v.get<T>(); };
}

const std::map<std::string, Setter> &setters() {
  static const std::map<std::string, Setter> s = {
      {"command", field(&RunConfig::command)},
      {"lx", field(&RunConfig::lx)},
      {"ly", field(&RunConfig::ly)},
      {"preset", field(&RunConfig::preset)},
      {"circuit_file", field(&RunConfig::circuit_file)},
      {"shots", field(&RunConfig::shots)},
      {"seed", field(&RunConfig::seed)},
      {"threads", field(&RunConfig::threads)},
      {"noise",
       [](RunConfig &c, const json &v) {
         c.noise = v.is_string() ? v.get<std::string>() == "on" : v.get<bool>();
       }},
      {"backend", field(&RunConfig::backend)},
      {"p1", field(&RunConfig::p1)},
      {"p2", field(&RunConfig::p2)},
      {"p_meas", field(&RunConfig::p_meas)},
      {"bitflip", field(&RunConfig::bitflip)},
      {"p01", field(&RunConfig::p01)},
      {"p10", field(&RunConfig::p10)},
      {"herald", field(&RunConfig::herald)},
      {"mitigate", field(&RunConfig::mitigate)},
      {"basis", field(&RunConfig::basis)},
      {"policy", field(&RunConfig::policy)},
      {"emit_format", field(&RunConfig::emit_format)},
      {"trp", field(&RunConfig::trp)},
      {"trq", field(&RunConfig::trq)},
      {"sep", field(&RunConfig::sep)},
      {"seq", field(&RunConfig::seq)},
      {"sites", field(&RunConfig::sites)},
      {"x_triple", field(&RunConfig::x_triple)},
      {"z_triple", field(&RunConfig::z_triple)},
      {"outcome", field(&RunConfig::outcome)},
      {"suites", field(&RunConfig::suites)},
      {"oracle_circuits", field(&RunConfig::oracle_circuits)},
      {"out", field(&RunConfig::out)},
      {"csv", field(&RunConfig::csv)},
      {"emit", field(&RunConfig::emit)}};
  return s;
}

bool is_braid(const std::string &c) {
  return c == "braid-pf" || c == "braid-cc" || c == "fuse-pf-pfstar";
}

std::string braid_preset(const std::string &c) {
  if (c == "braid-pf")
    return "fig3-pf-braid";
  if (c == "braid-cc")
    return "fig4-cc-braid";
  return "fig4-pf-pfstar";
}

// ------------------------------------------------------------ sampling

std::vector<std::pair<int, int>> terms_for(const WeylOp &op, int first,
                                           char basis) {
  std::vector<std::pair<int, int>> t;
  for (int i = 0; i < op.n(); ++i) {
    const int e = basis == 'Z' ? op.z[i] : op.x[i];
    if (e)
      t.emplace_back(first + i, e);
  }
  return t;
}

struct Sampled {
  std::vector<ShotRecord> records;
  double discard_fraction = 0.0;
  json compile;
};

Sampled sample(const Circuit &c, const RunConfig &cfg, uint64_t seed) {
  Sampled s;
  if (cfg.backend == "encoded") {
    NativeNoise nm;
    nm.p1 = cfg.p1;
    nm.p2 = cfg.p2;
    nm.bitflip = cfg.bitflip;
    nm.readout = {cfg.p01, cfg.p10};
    auto ec = encode_circuit(c, policy_from_name(cfg.policy));
    s.compile = compile_report_to_json(ec.report);
    EncodedSimulator sim(std::move(ec), nm);
    s.records = sim.run(cfg.shots, seed, cfg.threads);
    if (cfg.herald) {
      s.discard_fraction = herald_filter(s.records, c.n_cregs()).discard_fraction;
    } else {
      for (auto &r : s.records)
        r.herald_discard = false;
    }
    return s;
  }
  NoiseModel nm{cfg.p1, cfg.p2, cfg.p_meas};
  s.records = run_shots(with_noise(c, nm), cfg.shots, seed, cfg.threads);
  return s;
}

PlaquetteSnapshot estimate(const Sampled &s, const RunConfig &cfg,
                           const std::vector<std::pair<int, int>> &terms,
                           const std::string &label, const std::string &type) {
  if (cfg.backend == "encoded" && cfg.mitigate)
    return plaquette_from_qubits(s.records, terms, {cfg.p01, cfg.p10}, label,
                                 type);
  return estimate_from_records(s.records, 3, terms, label, type);
}

// Fraction of retained shots in which every listed product is trivial.
std::pair<double, double>
all_trivial(const std::vector<ShotRecord> &recs,
            const std::vector<std::vector<std::pair<int, int>>> &checks) {
  long n = 0, ok = 0;
  for (const auto &r : recs) {
    if (r.herald_discard)
      continue;
    ++n;
    bool good = true;
    for (const auto &t : checks) {
      long long k = 0;
      for (auto [c, e] : t)
        k += static_cast<long long>(e) * r.creg_values[c];
      good &= mod(k, 3) == 0;
    }
    ok += good;
  }
  if (n == 0)
    throw InvariantError("every shot was discarded");
  const double p = double(ok) / n;
  return {p, std::sqrt(p * (1 - p) / n)};
}

json pi_json(const std::vector<double> &v) {
  json a = json::array();
  for (double x : v)
    a.push_back(std::round(x * 1e12) / 1e12);
  return a;
}

// -------------------------------------------------------------- prepare

struct LogicalSet {
  std::string name;
  char basis;
  std::vector<WeylOp> ops;
};

std::vector<LogicalSet> logical_sets(const TorusLattice &lat) {
  LogicalSet zh{"z_hori", 'Z', {}}, zv{"z_vert", 'Z', {}};
  LogicalSet xh{"x_hori", 'X', {}}, xv{"x_vert", 'X', {}};
  for (int r = 0; r < lat.Ly(); ++r) {
    zh.ops.push_back(lat.logical_z_hori(r));
    xh.ops.push_back(lat.logical_x_hori(r));
  }
  for (int c = 0; c < lat.Lx(); ++c) {
    zv.ops.push_back(lat.logical_z_vert(c));
    xv.ops.push_back(lat.logical_x_vert(c));
  }
  return {zh, zv, xh, xv};
}

json logical_summary(const std::vector<PlaquetteSnapshot> &per_line) {
  double m = 0;
  json lines = json::array();
  for (const auto &s : per_line) {
    m += s.pi[0];
    lines.push_back(snapshot_to_json(s));
  }
  m /= per_line.size();
  return json{{"mean_pi1", std::round(m * 1e12) / 1e12}, {"lines", lines}};
}

json run_prepare(const RunConfig &cfg, std::string *csv) {
  TorusLattice lat(cfg.lx, cfg.ly);
  const Circuit prep = ground_state_circuit(lat);
  json res;
  res["lattice"] = {cfg.lx, cfg.ly};
  std::vector<PlaquetteSnapshot> plaq;
  json logicals = json::object();
  if (!cfg.noise) {
    res["mode"] = "exact";
    StabilizerTableau t(3, lat.n_sites(), cfg.seed);
    std::vector<int> cregs(prep.n_cregs());
    execute(prep, t, cregs);
    for (const auto &p : lat.plaquettes())
      plaq.push_back(snapshot_exact(t, p.op, p.label,
                                    p.type == PlaqType::A ? "A" : "B"));
    for (const auto &ls : logical_sets(lat)) {
      std::vector<PlaquetteSnapshot> lines;
      for (size_t i = 0; i < ls.ops.size(); ++i)
        lines.push_back(snapshot_exact(t, ls.ops[i], ls.name + std::to_string(i),
                                       "logical"));
      logicals[ls.name] = logical_summary(lines);
    }
    res["bound"] = fidelity_bound_to_json(fidelity_bounds(1, 1, lat.n_sites()));
  } else {
    res["mode"] = "sampled";
    res["backend"] = cfg.backend;
    std::map<char, std::pair<double, double>> tr;
    json herald = json::object();
    for (char basis : {'Z', 'X'}) {
      Circuit c = prep;
      const int first = c.measure_all(basis);
      const Sampled s = sample(c, cfg, stable_hash(cfg.seed, basis));
      if (!s.compile.is_null())
        res["compile"][std::string(1, basis)] = s.compile;
      herald[std::string(1, basis)] = s.discard_fraction;
      const PlaqType want = basis == 'Z' ? PlaqType::B : PlaqType::A;
      std::vector<std::vector<std::pair<int, int>>> checks;
      for (int p : lat.plaquettes_of(want)) {
        const auto &pl = lat.plaquettes()[p];
        auto t = terms_for(pl.op, first, basis);
        checks.push_back(t);
        plaq.push_back(estimate(s, cfg, t, pl.label, want == PlaqType::A ? "A" : "B"));
      }
      for (const auto &ls : logical_sets(lat)) {
        if (ls.basis != basis)
          continue;
        std::vector<PlaquetteSnapshot> lines;
        for (size_t i = 0; i < ls.ops.size(); ++i)
          lines.push_back(estimate(s, cfg, terms_for(ls.ops[i], first, basis),
                                   ls.name + std::to_string(i), "logical"));
        logicals[ls.name] = logical_summary(lines);
      }
      if (basis == 'Z') {
        checks.push_back(terms_for(lat.logical_z_hori(0), first, 'Z'));
        checks.push_back(terms_for(lat.logical_z_vert(0), first, 'Z'));
      }
      tr[basis] = all_trivial(s.records, checks);
    }
    if (cfg.backend == "encoded")
      res["herald_discard_fraction"] = herald;
    res["bound"] = fidelity_bound_to_json(
        fidelity_bounds(tr['Z'].first, tr['X'].first, lat.n_sites(),
                        tr['Z'].second, tr['X'].second));
  }
  std::sort(plaq.begin(), plaq.end(),
            [](const auto &a, const auto &b) { return a.label < b.label; });
  json pj = json::array();
  for (const auto &s : plaq)
    pj.push_back(snapshot_to_json(s));
  res["plaquettes"] = pj;
  res["logicals"] = logicals;
  const auto e = energy_density(plaq);
  res["energy_density"] = {{"value", std::round(e.value * 1e12) / 1e12},
                           {"se", std::round(e.se * 1e12) / 1e12}};
  res["max_se"] = std::round(max_standard_error(plaq) * 1e12) / 1e12;
  if (csv)
    *csv = snapshot_table_csv(plaq);
  return res;
}

// --------------------------------------------------------------- braids

json run_braid(const RunConfig &cfg, std::string *csv) {
  if (cfg.backend != "qutrit")
    throw ConfigError("defect presets run on the qutrit backend only");
  const ExperimentScript script = preset(braid_preset(cfg.command));
  Experiment e = run_script(script, cfg.seed);
  std::vector<Frame> frames =
      cfg.noise ? sampled_frames(e, NoiseModel{cfg.p1, cfg.p2, cfg.p_meas},
                                 cfg.shots, cfg.seed, cfg.threads)
                : e.frames();
  json res;
  res["mode"] = cfg.noise ? "sampled" : "exact";
  res["preset"] = script_to_json(script);
  json fj = json::array();
  std::ostringstream os;
  os << "frame,stabilizer,exponent\n";
  for (const auto &f : frames) {
    fj.push_back(frame_to_json(f));
    if (!cfg.noise)
      for (const auto &[label, k] : frame_excitations(f, true))
        os << f.label << ',' << label << ',' << k << '\n';
  }
  res["frames"] = fj;
  if (cfg.command == "fuse-pf-pfstar") {
    // the same trajectory through a CC ribbon, for every carried species
    json cmp = json::array();
    for (Species sp : {Species::e, Species::ebar, Species::m, Species::mbar}) {
      auto a = run_script(fig4_script(false, sp), cfg.seed);
      auto b = run_script(fig4_script(true, sp), cfg.seed);
      auto fused = [](const Experiment &x) {
        for (const auto &f : x.frames())
          if (f.label == "fused")
            return frame_excitations(f, false);
        throw InvariantError("preset has no fused frame");
      };
      cmp.push_back({{"species", species_name(sp)},
                     {"equal", fused(a) == fused(b)}});
    }
    res["cc_comparison"] = cmp;
  }
  if (csv && !cfg.noise)
    *csv = os.str();
  return res;
}

// ----------------------------------------------------------------- topo

struct TopoObservables {
  std::vector<std::pair<std::string, WeylOp>> ops;
};

TopoObservables topo_observables(const TopoQutrit &q) {
  TopoObservables o;
  o.ops.push_back({"L", q.L});
  o.ops.push_back({"ZZ", q.ZZ});
  const auto &book = q.exp.book();
  for (size_t i = 0; i < q.a_endpoints.size(); ++i)
    o.ops.push_back({"pair" + std::to_string(i + 1),
                     book.entries()[book.find(q.a_endpoints[i])].op});
  o.ops.push_back({"correlator", q.correlator});
  return o;
}

json run_topo(const RunConfig &cfg, std::string *csv) {
  if (cfg.backend != "qutrit")
    throw ConfigError("topo-qutrit runs on the qutrit backend only");
  const std::string variant = cfg.preset.empty() ? "6x4" : cfg.preset;
  // per outcome, per observable: summed sector weights and counts
  std::map<int, std::map<std::string, std::vector<double>>> acc;
  std::map<int, long> count;
  std::vector<std::string> names;
  if (!cfg.noise) {
    for (long i = 0; i < cfg.shots; ++i) {
      TopoQutrit q = build_topo_qutrit(variant, stable_hash(cfg.seed, i));
      const int cr = topo_injection(q);
      const int j = q.exp.cregs().at(cr);
      ++count[j];
      names.clear();
      for (const auto &[name, op] : topo_observables(q).ops) {
        names.push_back(name);
        auto &v = acc[j][name];
        v.resize(3, 0.0);
        for (int a = 0; a < 3; ++a)
          v[a] += q.exp.state().projector_expectation(op, a);
      }
    }
  } else {
    TopoQutrit q = build_topo_qutrit(variant, cfg.seed);
    const int cr = topo_injection(q);
    const Circuit noisy = with_noise(q.exp.circuit(),
                                     NoiseModel{cfg.p1, cfg.p2, cfg.p_meas});
    int idx = 0;
    for (const auto &[name, op] : topo_observables(q).ops) {
      names.push_back(name);
      Circuit c = noisy;
      const int out = c.add_creg();
      c.measure(op, out);
      auto recs = run_shots(c, cfg.shots, stable_hash(cfg.seed, ++idx),
                            cfg.threads);
      std::map<int, long> seen;
      for (const auto &r : recs) {
        const int j = r.creg_values[cr];
        auto &v = acc[j][name];
        v.resize(3, 0.0);
        v[r.creg_values[out]] += 1.0;
        ++seen[j];
      }
      if (name == "L")
        count = seen;
    }
  }
  json rows = json::array();
  std::vector<TopoRow> table;
  for (const auto &[j, per] : acc) {
    json row;
    row["outcome"] = j;
    row["count"] = count[j];
    std::map<std::string, std::vector<double>> mean;
    for (const auto &n : names) {
      std::vector<double> v = per.at(n);
      double tot = 0;
      for (double x : v)
        tot += x;
      if (cfg.noise)
        for (double &x : v)
          x /= tot;
      else
        for (double &x : v)
          x /= count[j];
      mean[n] = v;
      row[n] = pi_json(v);
    }
    TopoRow tr;
    tr.outcome = j;
    for (int a = 0; a < 3; ++a) {
      tr.x_triple[a] = mean["L"][a];
      tr.z_triple[a] = mean["ZZ"][a];
    }
    std::array<double, 3> xse{}, zse{};
    if (cfg.noise) {
      const long n = count[j];
      for (int a = 0; a < 3; ++a) {
        xse[a] = binomial_se({tr.x_triple[a]}, n)[0];
        zse[a] = binomial_se({tr.z_triple[a]}, n)[0];
      }
    }
    tr.bound = topological_qutrit_bounds(tr.x_triple, tr.z_triple, j, xse, zse);
    row["bound"] = fidelity_bound_to_json(tr.bound);
    rows.push_back(row);
    table.push_back(tr);
  }
  json res;
  res["variant"] = variant;
  res["mode"] = cfg.noise ? "sampled" : "exact";
  res["rows"] = rows;
  if (csv)
    *csv = topo_table_csv(table);
  return res;
}

// -------------------------------------------------------------- compile

json run_compile(const RunConfig &cfg, std::string *emitted) {
  Circuit c;
  json source;
  if (!cfg.circuit_file.empty()) {
    std::ifstream in(cfg.circuit_file);
    if (!in)
      throw ConfigError("cannot read " + cfg.circuit_file);
    try {
      c = circuit_from_json(json::parse(in));
    } catch (const json::exception &e) {
      throw ConfigError(std::string("bad circuit file: ") + e.what());
    }
    source = {{"circuit_file", cfg.circuit_file}};
  } else {
    std::smatch m;
    const std::string p = cfg.preset.empty() ? "prepare-6x4" : cfg.preset;
    if (!std::regex_match(p, m, std::regex(R"(prepare-(\d+)x(\d+))")))
      throw ConfigError("unknown compile preset '" + p + "'");
    TorusLattice lat(std::stoi(m[1]), std::stoi(m[2]));
    c = ground_state_circuit(lat);
    c.measure_all(cfg.basis == "x" ? 'X' : 'Z');
    source = {{"preset", p}, {"basis", cfg.basis}};
  }
  const auto ec = encode_circuit(c, policy_from_name(cfg.policy));
  json res;
  res["source"] = source;
  res["report"] = compile_report_to_json(ec.report);
  json budgets = json::object();
  for (auto p : all_prims())
    budgets[prim_name(p)] = zz_budget(p);
  res["zz_budgets"] = budgets;
  if (emitted) {
    if (cfg.emit_format == "qasm")
      *emitted = encoded_to_qasm(ec);
    else if (cfg.emit_format == "json" || cfg.emit_format.empty())
      *emitted = encoded_to_json(ec).dump(1) + "\n";
  }
  return res;
}

// --------------------------------------------------------------- verify

json run_verify(const RunConfig &cfg) {
  std::vector<std::string> suites = cfg.suites;
  if (suites.empty())
    suites = {"conjugation", "encoder", "oracle"};
  json res = json::object();
  bool ok = true;
  for (const auto &s : suites) {
    if (s == "conjugation") {
      const double dev = conjugation_table_deviation(3);
      const bool pass = dev <= 1e-10;
      res["conjugation"] = {{"max_deviation", std::round(dev * 1e12) / 1e12},
                            {"tolerance", 1e-10},
                            {"pass", pass}};
      ok &= pass;
    } else if (s == "encoder") {
      json gates = json::array();
      bool pass = true;
      for (auto p : all_prims()) {
        const double dev = verify_decomposition(p);
        const double bad = verify_decomposition(p, 0.01);
        const bool g = dev <= 1e-10 && bad > 1e-3;
        pass &= g;
        gates.push_back({{"gate", prim_name(p)},
                         {"zz_budget", zz_budget(p)},
                         {"within_1e-10", dev <= 1e-10},
                         {"perturbation_detected", bad > 1e-3},
                         {"pass", g}});
      }
      res["encoder"] = {{"gates", gates}, {"pass", pass}};
      ok &= pass;
    } else if (s == "oracle") {
      OracleConfig oc;
      oc.circuits = static_cast<int>(cfg.oracle_circuits);
      oc.shots = cfg.shots;
      oc.seed = cfg.seed;
      const auto rep = run_oracle_suite(oc);
      json cases = json::array();
      for (const auto &c : rep.cases)
        cases.push_back({{"n", c.n},
                         {"depth", c.depth},
                         {"measurements", c.measurements},
                         {"tvd", std::round(c.tvd * 1e12) / 1e12},
                         {"tolerance", std::round(c.tolerance * 1e12) / 1e12},
                         {"pass", c.pass()}});
      res["oracle"] = {{"circuits", oc.circuits},
                       {"shots", oc.shots},
                       {"failures", rep.failures()},
                       {"cases", cases},
                       {"pass", rep.pass()}};
      ok &= rep.pass();
    } else {
      throw ConfigError("unknown verify suite '" + s + "'");
    }
  }
  res["ok"] = ok;
  return res;
}

// --------------------------------------------------------------- bounds

json run_bounds(const RunConfig &cfg, std::string *csv) {
  json res;
  if (!cfg.x_triple.empty() || !cfg.z_triple.empty()) {
    if (cfg.x_triple.size() != 3 || cfg.z_triple.size() != 3)
      throw ConfigError("--x-triple and --z-triple take three values each");
    std::array<double, 3> x{}, z{};
    std::copy(cfg.x_triple.begin(), cfg.x_triple.end(), x.begin());
    std::copy(cfg.z_triple.begin(), cfg.z_triple.end(), z.begin());
    std::vector<TopoRow> rows;
    json jr = json::array();
    for (int j = 0; j < 3; ++j) {
      if (cfg.outcome >= 0 && j != cfg.outcome)
        continue;
      std::array<double, 3> xse{}, zse{};
      xse[j] = cfg.sep;
      zse[0] = cfg.seq;
      TopoRow r{j, x, z, topological_qutrit_bounds(x, z, j, xse, zse)};
      rows.push_back(r);
      jr.push_back({{"outcome", j}, {"bound", fidelity_bound_to_json(r.bound)}});
    }
    res["kind"] = "topological-qutrit";
    res["rows"] = jr;
    if (csv)
      *csv = topo_table_csv(rows);
    return res;
  }
  if (cfg.trp < 0 || cfg.trq < 0)
    throw ConfigError("bounds needs --trp and --trq (or the triple form)");
  const auto b = fidelity_bounds(cfg.trp, cfg.trq, cfg.sites, cfg.sep, cfg.seq);
  res["kind"] = "ground-state";
  res["bound"] = fidelity_bound_to_json(b);
  if (csv) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6)
       << "trP,trQ,n_sites,lower,upper,per_site_lower,per_site_upper\n"
       << b.trP << ',' << b.trQ << ',' << b.n_sites << ',' << b.lower << ','
       << b.upper << ',' << b.per_site_lower << ',' << b.per_site_upper << '\n';
    *csv = os.str();
  }
  return res;
}

} // namespace

const std::vector<std::string> &commands() {
  static const std::vector<std::string> c = {
      "prepare", "braid-pf", "braid-cc", "fuse-pf-pfstar",
      "topo-qutrit", "compile", "verify", "bounds"};
  return c;
}

std::string citation_for(const RunConfig &cfg) {
  if (cfg.command == "prepare")
    return "Fig. 2";
  if (is_braid(cfg.command))
    return preset(braid_preset(cfg.command)).citation;
  if (cfg.command == "topo-qutrit")
    return "Fig. 5";
  return "";
}

void apply_config_json(RunConfig &cfg, const json &j) {
  if (!j.is_object())
    throw ConfigError("config must be a JSON object");
  for (const auto &[k, v] : j.items()) {
    auto it = setters().find(k);
    if (it == setters().end())
      throw ConfigError("unknown config key '" + k + "'");
    try {
      it->second(cfg, v);
    } catch (const json::exception &e) {
      throw ConfigError("config key '" + k + "': " + e.what());
    }
  }
}

void finalize(RunConfig &cfg) {
  if (std::find(commands().begin(), commands().end(), cfg.command) ==
      commands().end())
    throw ConfigError("unknown command '" + cfg.command + "'");
  auto prob = [](double p, const char *name) {
    if (!(p >= 0 && p <= 1))
      throw ConfigError(std::string(name) + " must lie in [0, 1]");
  };
  prob(cfg.p1, "p1");
  prob(cfg.p2, "p2");
  prob(cfg.p_meas, "p_meas");
  prob(cfg.bitflip, "bitflip");
  try {
    ConfusionMatrix{cfg.p01, cfg.p10}.validate();
    policy_from_name(cfg.policy);
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  if (cfg.backend != "qutrit" && cfg.backend != "encoded")
    throw ConfigError("backend must be qutrit or encoded");
  std::transform(cfg.basis.begin(), cfg.basis.end(), cfg.basis.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  if (cfg.basis != "z" && cfg.basis != "x")
    throw ConfigError("basis must be z or x");
  if (!cfg.emit_format.empty() && cfg.emit_format != "json" &&
      cfg.emit_format != "qasm")
    throw ConfigError("emit format must be json or qasm");
  if (cfg.threads < 1)
    throw ConfigError("threads must be >= 1");
  if (cfg.shots < 0)
    throw ConfigError("shots must be >= 0");
  if (cfg.shots == 0) {
    if (cfg.command == "verify")
      cfg.shots = 10000;
    else if (cfg.command == "topo-qutrit")
      cfg.shots = cfg.noise ? 2000 : 30;
    else if (cfg.command == "prepare")
      cfg.shots = cfg.noise ? 10000 : 0;
    else if (is_braid(cfg.command))
      cfg.shots = cfg.noise ? 2000 : 0;
  }
  if (cfg.outcome > 2)
    throw ConfigError("outcome must be 0, 1 or 2");
}

json config_to_json(const RunConfig &c) {
  json j = {{"command", c.command},
            {"lx", c.lx},
            {"ly", c.ly},
            {"preset", c.preset},
            {"circuit_file", c.circuit_file},
            {"shots", c.shots},
            {"seed", c.seed},
            {"noise", c.noise},
            {"backend", c.backend},
            {"p1", c.p1},
            {"p2", c.p2},
            {"p_meas", c.p_meas},
            {"bitflip", c.bitflip},
            {"p01", c.p01},
            {"p10", c.p10},
            {"herald", c.herald},
            {"mitigate", c.mitigate},
            {"basis", c.basis},
            {"policy", c.policy},
            {"emit_format", c.emit_format},
            {"trp", c.trp},
            {"trq", c.trq},
            {"sep", c.sep},
            {"seq", c.seq},
            {"sites", c.sites},
            {"x_triple", c.x_triple},
            {"z_triple", c.z_triple},
            {"outcome", c.outcome},
            {"suites", c.suites},
            {"oracle_circuits", c.oracle_circuits}};
  return j;
}

json run_command(const RunConfig &cfg, std::string *csv, std::string *emitted) {
  json results;
  try {
    if (cfg.command == "prepare")
      results = run_prepare(cfg, csv);
    else if (is_braid(cfg.command))
      results = run_braid(cfg, csv);
    else if (cfg.command == "topo-qutrit")
      results = run_topo(cfg, csv);
    else if (cfg.command == "compile")
      results = run_compile(cfg, emitted);
    else if (cfg.command == "verify")
      results = run_verify(cfg);
    else
      results = run_bounds(cfg, csv);
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  json doc;
  doc["schema"] = "ztoric.result";
  doc["schema_version"] = kResultSchemaVersion;
  doc["command"] = cfg.command;
  const std::string cite = citation_for(cfg);
  doc["citation"] = cite.empty() ? json(nullptr) : json(cite);
  doc["config"] = config_to_json(cfg);
  doc["results"] = results;
  return doc;
}

} // namespace ztoric::cli
