/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#include "ztoric/experiments.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace ztoric {

std::map<std::string, int> frame_excitations(const Frame &f,
                                             bool include_nonlocal) {
  std::map<std::string, int> out;
  for (size_t i = 0; i < f.book.size(); ++i) {
    if (!f.book[i].local && !include_nonlocal)
      continue;
    const auto &s = f.snapshots[i];
    for (int k = 1; k < static_cast<int>(s.pi.size()); ++k)
      if (s.pi[k] > 1 - 1e-9)
        out[f.book[i].label] = k;
  }
  return out;
}

Experiment::Experiment(const TorusLattice &lat, int ancillas, uint64_t seed)
    : lat_(lat), n_(lat.n_sites() + ancillas), book_(lat, n_),
      circ_(lat.d(), n_), state_(lat.d(), n_, seed) {
  if (ancillas < 0)
    throw std::invalid_argument("negative ancilla count");
}

const DefectSpec &Experiment::defect(const std::string &name) const {
  for (const auto &d : defects_)
    if (d.name == name)
      return d;
  throw std::invalid_argument("no defect named '" + name + "'");
}

void Experiment::run(const Circuit &fragment) {
  std::vector<int> local(fragment.n_cregs(), 0);
  execute(fragment, state_, local);
  cregs_.insert(cregs_.end(), local.begin(), local.end());
  circ_.append(fragment);
}

void Experiment::prepare() {
  run(ground_state_circuit(lat_, default_ordering(lat_), n_));
}

const DefectSpec &Experiment::add_pf(const std::vector<int> &sites,
                                     DefectKind kind, const std::string &name) {
  for (const auto &d : defects_)
    if (d.name == name)
      throw std::invalid_argument("defect name '" + name + "' reused");
  auto frag = pf_defect_circuit(lat_, book_, sites, kind, 0, name);
  const int base = circ_.n_cregs();
  run(frag.circuit);
  for (auto &c : frag.spec.cregs)
    c += base;
  update_book_pf(book_, frag.spec);
  defects_.push_back(std::move(frag.spec));
  return defects_.back();
}

const DefectSpec &Experiment::add_cc(const CCRibbon &r,
                                     const std::string &name) {
  for (const auto &d : defects_)
    if (d.name == name)
      throw std::invalid_argument("defect name '" + name + "' reused");
  auto frag = cc_defect_circuit(lat_, book_, r, name);
  run(frag.circuit);
  update_book_cc(book_, frag.spec);
  defects_.push_back(std::move(frag.spec));
  return defects_.back();
}

void Experiment::fuse_cc(const std::string &name) {
  const DefectSpec &d = defect(name);
  run(fuse_cc_pair(lat_, d, n_));
  book_.conjugate(d.unitary);
}

void Experiment::apply(const WeylOp &w) {
  Circuit c(lat_.d(), n_);
  c.pauli(w);
  run(c);
}

void Experiment::apply_gates(const std::vector<CliffordGate> &gates,
                             bool conjugate_book) {
  Circuit c(lat_.d(), n_);
  for (const auto &g : gates)
    c.gate(g);
  run(c);
  if (conjugate_book)
    book_.conjugate(gates);
}

int Experiment::exponent(const std::string &label) const {
  return state_.expectation_exponent(book_.entries()[book_.find(label)].op);
}

WeylOp Experiment::find_hop(const std::string &a, const std::string &b,
                            int delta_a) const {
  const int d = lat_.d();
  const int ia = book_.find(a), ib = book_.find(b);
  if (ia == ib)
    throw std::invalid_argument("hop endpoints coincide");
  const auto &ea = book_.entries()[ia], &eb = book_.entries()[ib];
  // a charge cannot hop onto a bare flux plaquette or back; type changes
  // only happen inside defects
  if (ea.type != "defect" && eb.type != "defect" && ea.type != eb.type)
    throw std::invalid_argument("cannot hop from " + ea.label + " to " +
                                eb.label);
  std::vector<int> sites;
  for (int s : ea.op.support())
    if (eb.op.x[s] || eb.op.z[s])
      sites.push_back(s);
  for (int s : sites)
    for (int xe = 0; xe < d; ++xe)
      for (int ze = 0; ze < d; ++ze) {
        if (!xe && !ze)
          continue;
        WeylOp w = WeylOp::single(d, n_, s, xe, ze);
        if (symplectic_product(w, ea.op) != mod(delta_a, d) ||
            symplectic_product(w, eb.op) == 0)
          continue;
        bool ok = true;
        for (size_t i = 0; i < book_.size() && ok; ++i) {
          const auto &e = book_.entries()[i];
          if (static_cast<int>(i) == ia || static_cast<int>(i) == ib || !e.local)
            continue;
          ok = commutes(w, e.op);
        }
        if (ok)
          return w;
      }
  throw std::invalid_argument("no single-site operator moves " + ea.label +
                              " to " + eb.label);
}

WeylOp Experiment::move(const std::string &from, const std::string &to) {
  int k = exponent(from);
  if (k <= 0)
    throw std::invalid_argument("nothing to move at " + from);
  WeylOp w = find_hop(from, to, lat_.d() - k);
  apply(w);
  return w;
}

WeylOp Experiment::create(const std::string &at, const std::string &partner,
                          int exponent_at) {
  int k = exponent(at);
  if (k < 0)
    throw std::invalid_argument("stabilizer " + at + " is not definite");
  WeylOp w = find_hop(at, partner, exponent_at - k);
  apply(w);
  return w;
}

const Frame &Experiment::snapshot(const std::string &label) {
  Frame f;
  f.label = label;
  f.circuit_length = circ_.size();
  f.book = book_.entries();
  for (const auto &e : f.book)
    f.snapshots.push_back(snapshot_exact(state_, e.op, e.label, e.type));
  frames_.push_back(std::move(f));
  return frames_.back();
}

// ---------------------------------------------------------------- noise

Circuit with_noise(const Circuit &c, const NoiseModel &nm) {
  Circuit out(c.d(), c.n_qudits(), c.n_cregs());
  for (const auto &ins : c.instructions()) {
    if (auto *m = std::get_if<MeasureInstr>(&ins); m && nm.p_meas > 0)
      for (int s : m->obs.support())
        out.noise(NoiseChannel::depolarizing1(nm.p_meas), {s});
    out.push(ins);
    if (auto *g = std::get_if<GateInstr>(&ins)) {
      if (g->gate.arity() == 2 && nm.p2 > 0)
        out.noise(NoiseChannel::depolarizing2(nm.p2), g->gate.targets());
      else if (g->gate.arity() == 1 && nm.p1 > 0)
        out.noise(NoiseChannel::depolarizing1(nm.p1), g->gate.targets());
    }
  }
  return out;
}

std::vector<Frame> sampled_frames(const Experiment &e, const NoiseModel &nm,
                                  long shots, uint64_t seed, int threads) {
  std::vector<Frame> out;
  const Circuit &full = e.circuit();
  for (const auto &f : e.frames()) {
    Circuit c(full.d(), full.n_qudits(), full.n_cregs());
    for (size_t i = 0; i < f.circuit_length; ++i)
      c.push(full.instructions()[i]);
    c = with_noise(c, nm);
    c.barrier();
    std::vector<int> cr;
    for (const auto &s : f.book) {
      cr.push_back(c.add_creg());
      c.measure(s.op, cr.back());
    }
    auto recs = run_shots(c, shots, seed, threads);
    Frame g;
    g.label = f.label;
    g.circuit_length = f.circuit_length;
    g.book = f.book;
    for (size_t i = 0; i < f.book.size(); ++i)
      g.snapshots.push_back(estimate_from_records(
          recs, full.d(), {{cr[i], 1}}, f.book[i].label, f.book[i].type));
    out.push_back(std::move(g));
  }
  return out;
}

json frame_to_json(const Frame &f) {
  json st = json::array();
  for (size_t i = 0; i < f.book.size(); ++i) {
    json s = snapshot_to_json(f.snapshots[i]);
    s["local"] = f.book[i].local;
    st.push_back(s);
  }
  json ex = json::object();
  for (auto &[k, v] : frame_excitations(f, true))
    ex[k] = v;
  return json{{"label", f.label}, {"stabilizers", st}, {"excitations", ex}};
}

// ---------------------------------------------------------------- scripts

namespace {

int site_of(const TorusLattice &lat, const json &xy) {
  if (!xy.is_array() || xy.size() != 2)
    throw std::invalid_argument("site must be [x, y]");
  return lat.site(xy[0].get<int>(), xy[1].get<int>());
}

json xy(int x, int y) { return json::array({x, y}); }

json step(const std::string &op) { return json{{"op", op}}; }

json snap(const std::string &label) {
  return json{{"op", "snapshot"}, {"label", label}};
}

json move(std::vector<std::string> path) {
  return json{{"op", "move"}, {"path", path}};
}

json weyl_step(std::vector<std::array<int, 4>> terms) {
  json t = json::array();
  for (auto [x, y, xe, ze] : terms)
    t.push_back({{"site", xy(x, y)}, {"x", xe}, {"z", ze}});
  return json{{"op", "weyl"}, {"terms", t}};
}

void run_step(Experiment &e, const json &st) {
  const auto &lat = e.lattice();
  const std::string op = st.at("op").get<std::string>();
  if (op == "prepare") {
    e.prepare();
  } else if (op == "pf") {
    std::vector<int> sites;
    for (const auto &p : st.at("sites"))
      sites.push_back(site_of(lat, p));
    e.add_pf(sites, defect_kind_from_name(st.value("kind", "PF")),
             st.value("name", "pf"));
  } else if (op == "cc") {
    const auto &p = st.at("start");
    e.add_cc(make_ribbon(lat, p.at(0).get<int>(), p.at(1).get<int>(),
                         st.value("length", 1), st.value("horizontal", false)),
             st.value("name", "cc"));
  } else if (op == "fuse") {
    e.fuse_cc(st.at("name").get<std::string>());
  } else if (op == "create") {
    e.create(st.at("at").get<std::string>(),
             st.at("partner").get<std::string>(),
             species_exponent(species_from_name(st.at("species").get<std::string>())));
  } else if (op == "move") {
    auto path = st.at("path").get<std::vector<std::string>>();
    if (path.size() < 2)
      throw std::invalid_argument("move path needs two labels");
    for (size_t i = 0; i + 1 < path.size(); ++i)
      e.move(path[i], path[i + 1]);
  } else if (op == "weyl") {
    WeylOp w(lat.d(), e.n_total());
    for (const auto &t : st.at("terms")) {
      int s = site_of(lat, t.at("site"));
      w.set(s, mod(t.value("x", 0), lat.d()), mod(t.value("z", 0), lat.d()));
    }
    e.apply(w);
  } else if (op == "gates") {
    std::vector<CliffordGate> g;
    for (const auto &x : st.at("gates")) {
      GateKind k = gate_from_name(x.at("gate").get<std::string>());
      std::vector<int> t;
      for (const auto &p : x.at("targets"))
        t.push_back(site_of(lat, p));
      if (static_cast<int>(t.size()) != gate_arity(k))
        throw std::invalid_argument("wrong target count for " + gate_name(k));
      g.push_back(t.size() == 1 ? CliffordGate(k, t[0])
                                : CliffordGate(k, t[0], t[1]));
    }
    e.apply_gates(g, st.value("conjugate_book", true));
  } else if (op == "snapshot") {
    e.snapshot(st.at("label").get<std::string>());
  } else {
    throw std::invalid_argument("unknown script step '" + op + "'");
  }
}

ExperimentScript fig3_script() {
  ExperimentScript s{"fig3-pf-braid", "Fig. 3", 6, 4, 0, {}};
  s.steps = {step("prepare"),
             snap("ground"),
             {{"op", "pf"}, {"sites", {xy(3, 2)}}, {"kind", "PF"}, {"name", "pf"}},
             snap("defect"),
             {{"op", "create"}, {"at", "A(4,0)"}, {"partner", "A(5,1)"},
              {"species", "e"}},
             snap("pair"),
             move({"A(4,0)", "A(3,1)"}),
             snap("enter"),
             move({"A(3,1)", "B(4,3)"}),
             snap("cross"),
             move({"B(4,3)", "B(5,2)"}),
             snap("dyon")};
  return s;
}

ExperimentScript figs6_script() {
  ExperimentScript s{"figS6-pf-conjugate", "Fig. S6", 6, 4, 0, {}};
  json gates = json::array();
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 6; ++x)
      gates.push_back({{"gate", "C"}, {"targets", {xy(x, y)}}});
  s.steps = {step("prepare"),
             {{"op", "pf"},
              {"sites", {xy(1, 2), xy(2, 2), xy(3, 2)}},
              {"kind", "PF"},
              {"name", "pf"}},
             snap("line"),
             weyl_step({{2, 1, 0, 1}, {2, 3, 1, 0}}),
             snap("string"),
             weyl_step({{2, 1, 0, 2}, {2, 3, 2, 0}}),
             snap("undone"),
             {{"op", "gates"}, {"gates", gates}, {"conjugate_book", true}},
             snap("deformed"),
             weyl_step({{2, 1, 0, 1}, {2, 3, 2, 0}}),
             snap("conjugated-string")};
  return s;
}

} // namespace

ExperimentScript fig4_script(bool cc, Species moved) {
  ExperimentScript s;
  s.name = cc ? "fig4-cc-braid" : "fig4-pf-pfstar";
  s.citation = cc ? "Fig. 4a-h" : "Fig. 4i-j";
  s.Lx = s.Ly = 4;
  const bool charge = is_charge(moved);
  const std::string q = charge ? "A(2,0)" : "B(2,1)";
  const std::string p = charge ? "A(3,1)" : "B(3,0)";
  s.steps = {step("prepare"), snap("ground")};
  std::vector<std::string> route;
  if (cc) {
    s.steps.push_back({{"op", "cc"}, {"start", xy(1, 2)}, {"length", 2},
                       {"name", "cc"}});
    route = charge ? std::vector<std::string>{q, "A(1,1)", "A(0,0)", p}
                   : std::vector<std::string>{q, "B(1,0)", "B(0,1)", p};
  } else {
    s.steps.push_back(
        {{"op", "pf"}, {"sites", {xy(1, 1)}}, {"kind", "PF"}, {"name", "pf"}});
    s.steps.push_back({{"op", "pf"},
                       {"sites", {xy(1, 3)}},
                       {"kind", "PF*"},
                       {"name", "pfs"}});
    route = charge ? std::vector<std::string>{q, "B(1,0)", "A(0,2)", p}
                   : std::vector<std::string>{q, "B(1,2)", "B(0,1)", p};
  }
  s.steps.push_back(snap("defect"));
  s.steps.push_back({{"op", "create"},
                     {"at", q},
                     {"partner", p},
                     {"species", species_name(moved)}});
  s.steps.push_back(snap("pair"));
  for (size_t i = 0; i + 1 < route.size(); ++i) {
    s.steps.push_back(move({route[i], route[i + 1]}));
    s.steps.push_back(snap(i + 2 < route.size() ? "step" + std::to_string(i + 1)
                                                : "fused"));
  }
  if (cc) {
    s.steps.push_back({{"op", "fuse"}, {"name", "cc"}});
    s.steps.push_back(snap("revealed"));
  }
  return s;
}

std::vector<std::string> preset_names() {
  return {"fig3-pf-braid", "fig4-cc-braid", "fig4-pf-pfstar",
          "figS6-pf-conjugate"};
}

ExperimentScript preset(const std::string &name) {
  if (name == "fig3-pf-braid")
    return fig3_script();
  if (name == "fig4-cc-braid")
    return fig4_script(true, Species::mbar);
  if (name == "fig4-pf-pfstar")
    return fig4_script(false, Species::mbar);
  if (name == "figS6-pf-conjugate")
    return figs6_script();
  throw std::invalid_argument("unknown preset '" + name + "'");
}

json script_to_json(const ExperimentScript &s) {
  return json{{"schema", "ztoric.script"},
              {"schema_version", 1},
              {"name", s.name},
              {"citation", s.citation},
              {"lattice", {{"Lx", s.Lx}, {"Ly", s.Ly}, {"d", 3}}},
              {"ancillas", s.ancillas},
              {"steps", s.steps}};
}

ExperimentScript script_from_json(const json &j) {
  try {
    if (j.value("schema", "") != "ztoric.script")
      throw std::invalid_argument("not a ztoric.script document");
    if (j.at("schema_version").get<int>() != 1)
      throw std::invalid_argument("unsupported script schema version");
    ExperimentScript s;
    s.name = j.at("name").get<std::string>();
    s.citation = j.value("citation", "");
    s.Lx = j.at("lattice").at("Lx").get<int>();
    s.Ly = j.at("lattice").at("Ly").get<int>();
    if (j.at("lattice").value("d", 3) != 3)
      throw std::invalid_argument("scripts run on qutrits only");
    s.ancillas = j.value("ancillas", 0);
    for (const auto &st : j.at("steps")) {
      if (!st.is_object() || !st.contains("op"))
        throw std::invalid_argument("script step without 'op'");
      s.steps.push_back(st);
    }
    return s;
  } catch (const json::exception &ex) {
    throw std::invalid_argument(std::string("malformed script JSON: ") +
                                ex.what());
  }
}

Experiment run_script(const ExperimentScript &s, uint64_t seed) {
  Experiment e(TorusLattice(s.Lx, s.Ly), s.ancillas, seed);
  for (size_t i = 0; i < s.steps.size(); ++i) {
    try {
      run_step(e, s.steps[i]);
    } catch (const json::exception &ex) {
      throw std::invalid_argument("step " + std::to_string(i) + ": " + ex.what());
    }
  }
  e.book().check_commuting();
  return e;
}

// ------------------------------------------------------- topological qutrit

namespace {

struct TopoLayout {
  int Lx, Ly;
  std::array<std::array<int, 2>, 2> ribbons; // (x0, y0), length 1
  bool horizontal;
  int loop_row;
  int rows_lo, rows_hi; // plaquette rows enclosed by the flux loops
};

TopoLayout topo_layout(const std::string &variant) {
  if (variant == "6x4")
    return {6, 4, {{{1, 2}, {3, 2}}}, false, 1, 0, 2};
  if (variant == "6x2")
    return {6, 2, {{{1, 0}, {4, 1}}}, true, 0, 0, 1};
  throw std::invalid_argument("unknown topological qutrit variant '" +
                              variant + "'");
}

// Product of A-derived book entries whose origin plaquette lies in the box.
WeylOp a_region_product(const Experiment &e, int px_lo, int px_hi, int py_lo,
                        int py_hi) {
  const auto &lat = e.lattice();
  WeylOp w(lat.d(), e.n_total());
  for (const auto &s : e.book().entries()) {
    if (s.origin.size() != 1)
      continue;
    const auto &p = lat.plaquettes()[s.origin[0]];
    if (p.type != PlaqType::A)
      continue;
    int px = mod(p.px - px_lo, lat.Lx()) + px_lo;
    if (px <= px_hi && p.py >= py_lo && p.py <= py_hi)
      compose_into(w, s.op);
  }
  return w;
}

} // namespace

TopoQutrit build_topo_qutrit(const std::string &variant, uint64_t seed) {
  TopoLayout lay = topo_layout(variant);
  TorusLattice lat(lay.Lx, lay.Ly);
  TopoQutrit q{Experiment(lat, 1, seed), lat.n_sites(), {}, {}, {}, {}, {}};
  Experiment &e = q.exp;
  e.prepare();
  for (int i = 0; i < 2; ++i) {
    auto [x0, y0] = lay.ribbons[i];
    const auto &d = e.add_cc(make_ribbon(lat, x0, y0, 1, lay.horizontal),
                             "cc" + std::to_string(i + 1));
    for (const auto &s : d.endpoint_stabilizers)
      if (lat.plaquettes()[s.origin[0]].type == PlaqType::A)
        q.a_endpoints.push_back(s.label);
  }
  if (q.a_endpoints.size() != 2)
    throw std::logic_error("topological qutrit needs two A endpoints");

  // charge loop along one row that commutes with every local stabilizer
  std::vector<WeylOp> zs;
  for (int x = 0; x < lat.Lx(); ++x)
    zs.push_back(WeylOp::Z(lat.d(), e.n_total(), lat.site(x, lay.loop_row)));
  std::vector<WeylOp> locals;
  for (const auto &s : e.book().entries())
    if (s.local)
      locals.push_back(s.op);
  const WeylOp &a1 = e.book().entries()[e.book().find(q.a_endpoints[0])].op;
  bool found = false;
  for (const auto &v : commuting_combinations(zs, locals)) {
    WeylOp l = weyl_product(zs, v);
    int s = symplectic_product(l, a1);
    if (s) {
      // normalise so that moving along L adds one unit of charge to pair 1
      q.L = power(l, inv_mod(s, lat.d()));
      found = true;
      break;
    }
  }
  if (!found)
    throw std::logic_error("no charge loop links the defect pairs");

  auto [x1, y1] = lay.ribbons[0];
  auto [x2, y2] = lay.ribbons[1];
  (void)y1;
  (void)y2;
  q.XL = a_region_product(e, x1 - 1, x1, lay.rows_lo, lay.rows_hi);
  int s = symplectic_product(q.XL, q.L);
  if (!s)
    throw std::logic_error("flux loop does not link the charge loop");
  q.XL = power(q.XL, inv_mod(s, lat.d()));
  q.ZZ = a_region_product(e, x1 - 1, x2, lay.rows_lo, lay.rows_hi);
  q.correlator =
      compose(a1, e.book().entries()[e.book().find(q.a_endpoints[1])].op);
  return q;
}

int topo_injection(TopoQutrit &q) {
  Experiment &e = q.exp;
  const int d = e.lattice().d(), n = e.n_total();
  Circuit c(d, n, 1);
  c.gate(GateKind::Fourier, q.ancilla);
  for (int s = 0; s < e.lattice().n_sites(); ++s)
    if (q.L.z[s])
      for (int r = 0; r < q.L.z[s]; ++r)
        c.gate(GateKind::CZ, q.ancilla, s);
  c.gate(GateKind::FourierDag, q.ancilla);
  c.measure(WeylOp::Z(d, n, q.ancilla), 0);
  const int base = e.circuit().n_cregs();
  e.run(c);
  return base;
}

} // namespace ztoric
