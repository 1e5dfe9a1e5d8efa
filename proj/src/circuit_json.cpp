/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#include "ztoric/json_io.hpp"

#include <cmath>

namespace ztoric {

namespace {

const char *noise_kind_name(NoiseKind k) {
  switch (k) {
  case NoiseKind::Depolarizing1: return "depolarizing1";
  case NoiseKind::Depolarizing2: return "depolarizing2";
  case NoiseKind::WeylCustom: return "weyl_custom";
  }
  return "?";
}

NoiseKind noise_kind_from(const std::string &s) {
  if (s == "depolarizing1")
    return NoiseKind::Depolarizing1;
  if (s == "depolarizing2")
    return NoiseKind::Depolarizing2;
  if (s == "weyl_custom")
    return NoiseKind::WeylCustom;
  throw std::invalid_argument("unknown noise kind '" + s + "'");
}

json gate_to_json(const CliffordGate &g) {
  return json{{"gate", gate_name(g.kind)}, {"targets", g.targets()}};
}

CliffordGate gate_from_json(const json &j) {
  GateKind k = gate_from_name(j.at("gate").get<std::string>());
  auto t = j.at("targets").get<std::vector<int>>();
  if (static_cast<int>(t.size()) != gate_arity(k))
    throw std::invalid_argument("gate '" + gate_name(k) +
                                "' has wrong target count");
  return t.size() == 1 ? CliffordGate(k, t[0]) : CliffordGate(k, t[0], t[1]);
}

} // namespace

json weyl_to_json(const WeylOp &w) {
  json terms = json::array();
  for (int i = 0; i < w.n(); ++i)
    if (w.x[i] || w.z[i])
      terms.push_back({{"site", i}, {"x", w.x[i]}, {"z", w.z[i]}});
  return json{{"phase", w.phase}, {"terms", terms}};
}

WeylOp weyl_from_json(const json &j, int d, int n) {
  WeylOp w(d, n);
  for (const auto &t : j.at("terms")) {
    int s = t.at("site").get<int>();
    if (s < 0 || s >= n)
      throw std::invalid_argument("observable site out of range");
    w.set(s, t.value("x", 0), t.value("z", 0));
  }
  w.phase = mod(j.value("phase", 0), d);
  return w;
}

json circuit_to_json(const Circuit &c) {
  json ins = json::array();
  for (const auto &i : c.instructions()) {
    if (auto *g = std::get_if<GateInstr>(&i)) {
      json e = {{"kind", "gate"}};
      e.update(gate_to_json(g->gate));
      if (g->group >= 0)
        e["group"] = g->group;
      ins.push_back(e);
    } else if (auto *m = std::get_if<MeasureInstr>(&i)) {
      ins.push_back({{"kind", "measure"},
                     {"observable", weyl_to_json(m->obs)},
                     {"creg", m->creg}});
    } else if (auto *cd = std::get_if<CondInstr>(&i)) {
      json br = json::array();
      for (const auto &b : cd->branches) {
        json e = json::object();
        if (!b.gates.empty()) {
          json gs = json::array();
          for (const auto &g : b.gates)
            gs.push_back(gate_to_json(g));
          e["gates"] = gs;
        }
        if (b.pauli)
          e["pauli"] = weyl_to_json(*b.pauli);
        br.push_back(e);
      }
      ins.push_back({{"kind", "cond"}, {"creg", cd->creg}, {"branches", br}});
    } else if (auto *nz = std::get_if<NoiseInstr>(&i)) {
      json ch = {{"kind", noise_kind_name(nz->channel.kind)},
                 {"p", nz->channel.p}};
      if (!nz->channel.weights.empty())
        ch["weights"] = nz->channel.weights;
      ins.push_back({{"kind", "noise"}, {"channel", ch}, {"sites", nz->sites}});
    } else if (auto *p = std::get_if<PauliInstr>(&i)) {
      ins.push_back({{"kind", "pauli"}, {"op", weyl_to_json(p->op)}});
    } else {
      ins.push_back({{"kind", "barrier"}});
    }
  }
  return json{{"schema", "ztoric.circuit"},
              {"schema_version", kCircuitSchemaVersion},
              {"flavor", "qutrit"},
              {"header",
               {{"d", c.d()}, {"n_qudits", c.n_qudits()}, {"n_cregs", c.n_cregs()}}},
              {"instructions", ins}};
}

Circuit circuit_from_json(const json &j) {
  try {
    if (j.value("schema", "") != "ztoric.circuit")
      throw std::invalid_argument("not a ztoric.circuit document");
    if (j.at("schema_version").get<int>() != kCircuitSchemaVersion)
      throw std::invalid_argument("unsupported circuit schema version");
    if (j.value("flavor", "qutrit") != "qutrit")
      throw std::invalid_argument("expected a qutrit-flavor circuit");
    const auto &h = j.at("header");
    const int d = h.at("d").get<int>();
    const int n = h.at("n_qudits").get<int>();
    Circuit c(d, n, h.at("n_cregs").get<int>());
    for (const auto &e : j.at("instructions")) {
      std::string kind = e.at("kind").get<std::string>();
      if (kind == "gate") {
        c.gate(gate_from_json(e), e.value("group", -1));
      } else if (kind == "measure") {
        c.measure(weyl_from_json(e.at("observable"), d, n),
                  e.at("creg").get<int>());
      } else if (kind == "cond") {
        std::vector<Branch> br;
        for (const auto &b : e.at("branches")) {
          Branch x;
          if (b.contains("gates"))
            for (const auto &g : b.at("gates"))
              x.gates.push_back(gate_from_json(g));
          if (b.contains("pauli"))
            x.pauli = weyl_from_json(b.at("pauli"), d, n);
          br.push_back(std::move(x));
        }
        c.cond(e.at("creg").get<int>(), std::move(br));
      } else if (kind == "noise") {
        const auto &ch = e.at("channel");
        NoiseChannel nc;
        nc.kind = noise_kind_from(ch.at("kind").get<std::string>());
        nc.p = ch.value("p", 0.0);
        if (ch.contains("weights"))
          nc.weights = ch.at("weights").get<std::map<std::string, double>>();
        c.noise(nc, e.at("sites").get<std::vector<int>>());
      } else if (kind == "pauli") {
        c.pauli(weyl_from_json(e.at("op"), d, n));
      } else if (kind == "barrier") {
        c.barrier();
      } else {
        throw std::invalid_argument("unknown instruction kind '" + kind + "'");
      }
    }
    c.validate();
    return c;
  } catch (const json::exception &ex) {
    throw std::invalid_argument(std::string("malformed circuit JSON: ") +
                                ex.what());
  }
}

json snapshot_to_json(const PlaquetteSnapshot &s) {
  auto tidy = [](double v) { return std::round(v * 1e12) / 1e12; };
  json pi = json::array(), se = json::array();
  for (double v : s.pi)
    pi.push_back(tidy(v));
  for (double v : s.se)
    se.push_back(tidy(v));
  json j = {{"label", s.label},
            {"type", s.type},
            {"expectation", {tidy(s.expectation.real()), tidy(s.expectation.imag())}},
            {"pi", pi}};
  j["arg_deg"] = s.arg_deg ? json(tidy(*s.arg_deg)) : json(nullptr);
  j["se"] = se;
  j["samples"] = s.samples;
  return j;
}

} // namespace ztoric
