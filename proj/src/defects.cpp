/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#include "ztoric/defects.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ztoric {

namespace {

// Rank of integer vectors over Z_d (d prime).
int rank_mod(std::vector<std::vector<int>> rows, int d) {
  if (rows.empty())
    return 0;
  const int cols = static_cast<int>(rows[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < static_cast<int>(rows.size()); ++c) {
    int p = -1;
    for (int i = r; i < static_cast<int>(rows.size()); ++i)
      if (mod(rows[i][c], d)) {
        p = i;
        break;
      }
    if (p < 0)
      continue;
    std::swap(rows[r], rows[p]);
    int iv = inv_mod(rows[r][c], d);
    for (auto &v : rows[r])
      v = mod(v * iv, d);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i)
      if (i != r && mod(rows[i][c], d)) {
        int f = rows[i][c];
        for (int j = 0; j < cols; ++j)
          rows[i][j] = mod(rows[i][j] - f * rows[r][j], d);
      }
    ++r;
  }
  return r;
}

// Solves M c = b over Z_d for square invertible M.
std::vector<int> solve_mod(std::vector<std::vector<int>> m, std::vector<int> b,
                           int d) {
  const int n = static_cast<int>(m.size());
  for (int i = 0; i < n; ++i)
    m[i].push_back(b[i]);
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (mod(m[i][c], d)) {
        p = i;
        break;
      }
    if (p < 0)
      throw std::invalid_argument("singular feed-forward system");
    std::swap(m[c], m[p]);
    int iv = inv_mod(m[c][c], d);
    for (auto &v : m[c])
      v = mod(v * iv, d);
    for (int i = 0; i < n; ++i)
      if (i != c && mod(m[i][c], d)) {
        int f = m[i][c];
        for (int j = 0; j <= n; ++j)
          m[i][j] = mod(m[i][j] - f * m[c][j], d);
      }
  }
  std::vector<int> x(n);
  for (int i = 0; i < n; ++i)
    x[i] = m[i][n];
  return x;
}

int pad_n(const TorusLattice &lat, int n_total) {
  return n_total < 0 ? lat.n_sites() : n_total;
}

} // namespace

// ---------------------------------------------------------------- book

StabilizerBook::StabilizerBook(const TorusLattice &lat, int n_total)
    : n_(pad_n(lat, n_total)) {
  if (n_ < lat.n_sites())
    throw std::invalid_argument("book register smaller than lattice");
  for (const auto &p : lat.plaquettes()) {
    plabels_.push_back(p.label);
    pops_.push_back(lat.plaquette_op(p.index, n_));
    e_.push_back({p.label, p.type == PlaqType::A ? "A" : "B", pops_.back(),
                  true, {p.index}});
  }
}

int StabilizerBook::find(const std::string &label) const {
  for (size_t i = 0; i < e_.size(); ++i)
    if (e_[i].label == label)
      return static_cast<int>(i);
  auto it = std::find(plabels_.begin(), plabels_.end(), label);
  if (it != plabels_.end()) {
    int p = static_cast<int>(it - plabels_.begin());
    std::vector<int> hit;
    for (size_t i = 0; i < e_.size(); ++i)
      if (e_[i].local && std::count(e_[i].origin.begin(), e_[i].origin.end(), p))
        hit.push_back(static_cast<int>(i));
    if (hit.size() == 1)
      return hit[0];
    if (hit.size() > 1)
      throw std::invalid_argument("stabilizer '" + label + "' is ambiguous");
  }
  throw std::invalid_argument("no monitored stabilizer '" + label + "'");
}

std::vector<int>
StabilizerBook::touching(const std::vector<int> &plaquettes) const {
  std::vector<int> out;
  for (size_t i = 0; i < e_.size(); ++i)
    for (int p : e_[i].origin)
      if (std::count(plaquettes.begin(), plaquettes.end(), p)) {
        out.push_back(static_cast<int>(i));
        break;
      }
  return out;
}

void StabilizerBook::remove(std::vector<int> idx) {
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  for (auto it = idx.rbegin(); it != idx.rend(); ++it)
    e_.erase(e_.begin() + *it);
}

void StabilizerBook::add(MonitoredStabilizer s) {
  if (s.op.n() != n_)
    throw std::invalid_argument("stabilizer width does not match the book");
  e_.push_back(std::move(s));
}

void StabilizerBook::conjugate(const std::vector<CliffordGate> &gates) {
  for (auto &e : e_) {
    WeylOp w = e.op;
    for (const auto &g : gates)
      w = conjugate_by_gate(g, w);
    if (w == e.op)
      continue;
    e.op = std::move(w);
    if (e.origin.size() == 1 && e.op == pops_[e.origin[0]]) {
      e.label = plabels_[e.origin[0]];
      e.type = e.label.substr(0, 1);
      e.local = true;
    } else if (e.label.empty() || e.label.back() != '\'') {
      e.label += "'";
      e.type = "defect";
    }
  }
}

void StabilizerBook::check_commuting() const {
  for (size_t i = 0; i < e_.size(); ++i)
    for (size_t j = i + 1; j < e_.size(); ++j)
      if (!commutes(e_[i].op, e_[j].op))
        throw std::logic_error("monitored stabilizers " + e_[i].label + " and " +
                               e_[j].label + " do not commute");
}

// ---------------------------------------------------------------- PF

std::string defect_kind_name(DefectKind k) {
  switch (k) {
  case DefectKind::PF: return "PF";
  case DefectKind::PFstar: return "PF*";
  case DefectKind::CC: return "CC";
  }
  return "?";
}

DefectKind defect_kind_from_name(const std::string &s) {
  if (s == "PF" || s == "pf")
    return DefectKind::PF;
  if (s == "PF*" || s == "pfstar" || s == "PFstar")
    return DefectKind::PFstar;
  if (s == "CC" || s == "cc")
    return DefectKind::CC;
  throw std::invalid_argument("unknown defect kind '" + s + "'");
}

WeylOp pf_measurement_op(const TorusLattice &lat, int site, DefectKind kind,
                         int n_total) {
  if (kind == DefectKind::CC)
    throw std::invalid_argument("CC defects are not measured");
  if (site < 0 || site >= lat.n_sites())
    throw std::invalid_argument("PF site out of range");
  bool odd = (lat.sx(site) + lat.sy(site)) % 2 == 1;
  bool plain = odd != (kind == DefectKind::PFstar);
  return WeylOp::single(lat.d(), pad_n(lat, n_total), site, 1,
                        plain ? 1 : lat.d() - 1);
}

DefectFragment pf_defect_circuit(const TorusLattice &lat,
                                 const StabilizerBook &book,
                                 const std::vector<int> &sites, DefectKind kind,
                                 int creg_base, const std::string &name) {
  const int d = lat.d(), n = book.n_total();
  if (sites.empty())
    throw std::invalid_argument("PF defect needs at least one site");
  if (std::set<int>(sites.begin(), sites.end()).size() != sites.size())
    throw std::invalid_argument("PF sites repeat");
  const int k = static_cast<int>(sites.size());

  DefectFragment out;
  DefectSpec &spec = out.spec;
  spec.kind = kind;
  spec.name = name;
  spec.sites = sites;
  for (int s : sites)
    spec.measured.push_back(pf_measurement_op(lat, s, kind, n));

  // entries acting on a measured site
  std::vector<int> touched;
  for (size_t i = 0; i < book.size(); ++i) {
    const auto &op = book.entries()[i].op;
    for (int s : sites)
      if (op.x[s] || op.z[s]) {
        touched.push_back(static_cast<int>(i));
        break;
      }
  }
  if (touched.empty())
    throw std::invalid_argument("PF sites touch no monitored stabilizer");
  std::vector<WeylOp> tops;
  for (int i : touched)
    tops.push_back(book.entries()[i].op);
  const int m = static_cast<int>(touched.size());
  const int kernel_dim =
      static_cast<int>(commuting_combinations(tops, spec.measured).size());

  // feed-forward: k touched stabilizers G with invertible sp(G_i, sigma_j)
  std::vector<int> gsel;
  std::vector<std::vector<int>> cols;
  for (int i = 0; i < m && static_cast<int>(gsel.size()) < k; ++i) {
    std::vector<int> col(k);
    for (int j = 0; j < k; ++j)
      col[j] = symplectic_product(tops[i], spec.measured[j]);
    auto trial = cols;
    trial.push_back(col);
    if (rank_mod(trial, d) > static_cast<int>(cols.size())) {
      cols = std::move(trial);
      gsel.push_back(i);
    }
  }
  if (static_cast<int>(gsel.size()) < k)
    throw std::invalid_argument("PF measurements are not independent of the "
                                "stabilizers; cannot build feed-forward");
  std::vector<std::vector<int>> M(k, std::vector<int>(k));
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i)
      M[j][i] = cols[i][j];

  Circuit &c = out.circuit;
  c = Circuit(d, n, creg_base + k);
  for (int j = 0; j < k; ++j) {
    spec.cregs.push_back(creg_base + j);
    c.measure(spec.measured[j], creg_base + j);
  }
  for (int j = 0; j < k; ++j) {
    // outcome s on sigma_j is cancelled by F_j^s with sp(F_j, sigma) = -e_j
    std::vector<int> rhs(k, 0);
    rhs[j] = d - 1;
    auto coef = solve_mod(M, rhs, d);
    WeylOp f(d, n);
    for (int i = 0; i < k; ++i)
      compose_into(f, power(tops[gsel[i]], coef[i]));
    f.phase = 0;
    std::vector<Branch> br(d);
    for (int s = 1; s < d; ++s)
      br[s].pauli = power(f, s);
    c.cond(creg_base + j, std::move(br));
  }

  // fused stabilizers
  auto strip = [&](WeylOp w) {
    for (int j = 0; j < k; ++j) {
      int s = sites[j];
      const auto &sg = spec.measured[j];
      int t = -1;
      for (int a = 0; a < d; ++a)
        if (mod(a * sg.x[s], d) == w.x[s] && mod(a * sg.z[s], d) == w.z[s])
          t = a;
      if (t < 0)
        throw std::logic_error("fused stabilizer does not reduce on a site");
      if (t)
        compose_into(w, power(sg, -t));
    }
    return w;
  };
  auto count_sites = [&](int plaquette) {
    int cnt = 0;
    for (int s : sites)
      cnt += lat.corner_slot(plaquette, s) >= 0;
    return cnt;
  };

  std::vector<std::vector<int>> chosen;
  struct Cand {
    std::vector<int> coef;
  };
  std::vector<Cand> locals;
  // singletons, then vertically stacked pairs (the dominos of a horizontal
  // line); whatever the kernel still lacks is nonlocal
  auto stacked = [&](int a, int b) {
    const auto &oa = book.entries()[touched[a]].origin;
    const auto &ob = book.entries()[touched[b]].origin;
    if (oa.size() != 1 || ob.size() != 1)
      return false;
    const auto &pa = lat.plaquettes()[oa[0]], &pb = lat.plaquettes()[ob[0]];
    return pa.px == pb.px && (mod(pa.py - pb.py, lat.Ly()) == 1 ||
                              mod(pb.py - pa.py, lat.Ly()) == 1);
  };
  std::vector<std::pair<int, int>> order;
  for (int pass = 0; pass < 2; ++pass)
    for (int a = 0; a < m; ++a)
      for (int b = a; b < m; ++b) {
        int cls = a == b ? 0 : (stacked(a, b) ? 1 : 2);
        if (cls == pass)
          order.emplace_back(a, b);
      }
  for (auto [a, b] : order) {
    std::vector<WeylOp> pair = {tops[a]};
    if (b != a)
      pair.push_back(tops[b]);
    for (const auto &v : commuting_combinations(pair, spec.measured)) {
      bool full = true;
      for (int x : v)
        full &= x != 0;
      if (!full)
        continue;
      std::vector<int> coef(m, 0);
      coef[a] = v[0];
      if (b != a)
        coef[b] = v[1];
      auto trial = chosen;
      trial.push_back(coef);
      if (rank_mod(trial, d) > static_cast<int>(chosen.size())) {
        chosen = std::move(trial);
        locals.push_back({coef});
      }
    }
  }
  auto origin_of = [&](const std::vector<int> &coef) {
    std::vector<int> o;
    for (int i = 0; i < m; ++i)
      if (coef[i])
        for (int p : book.entries()[touched[i]].origin)
          o.push_back(p);
    std::sort(o.begin(), o.end());
    return o;
  };
  for (const auto &cd : locals) {
    MonitoredStabilizer ms;
    ms.op = strip(weyl_product(tops, cd.coef));
    ms.type = "defect";
    ms.origin = origin_of(cd.coef);
    ms.label = name + ":";
    bool endpoint = true;
    for (size_t i = 0; i < ms.origin.size(); ++i) {
      ms.label += (i ? "+" : "") + lat.plaquettes()[ms.origin[i]].label;
      endpoint &= count_sites(ms.origin[i]) <= 1;
    }
    (endpoint ? spec.endpoint_stabilizers : spec.other_stabilizers)
        .push_back(std::move(ms));
  }
  for (const auto &v : commuting_combinations(tops, spec.measured)) {
    auto trial = chosen;
    trial.push_back(v);
    if (rank_mod(trial, d) == static_cast<int>(chosen.size()))
      continue;
    chosen = std::move(trial);
    MonitoredStabilizer ms;
    ms.op = strip(weyl_product(tops, v));
    ms.type = "defect";
    ms.local = false;
    ms.origin = origin_of(v);
    ms.label = name + ":NL" + (spec.nonlocal_stabilizers.empty()
                                    ? ""
                                    : std::to_string(
                                          spec.nonlocal_stabilizers.size()));
    spec.nonlocal_stabilizers.push_back(std::move(ms));
  }
  if (static_cast<int>(chosen.size()) != kernel_dim)
    throw std::logic_error("PF fused stabilizers do not span the kernel");
  for (int j = 0; j < k; ++j) {
    MonitoredStabilizer ms;
    ms.op = spec.measured[j];
    ms.type = "defect";
    ms.label = name + ":s" + std::to_string(j);
    spec.other_stabilizers.push_back(std::move(ms));
  }
  for (int i : touched)
    for (int p : book.entries()[i].origin)
      spec.removed_plaquettes.push_back(p);
  return out;
}

void update_book_pf(StabilizerBook &book, const DefectSpec &spec) {
  std::vector<int> idx;
  for (size_t i = 0; i < book.size(); ++i) {
    const auto &op = book.entries()[i].op;
    for (int s : spec.sites)
      if (op.x[s] || op.z[s]) {
        idx.push_back(static_cast<int>(i));
        break;
      }
  }
  book.remove(idx);
  for (const auto *v : {&spec.endpoint_stabilizers, &spec.other_stabilizers,
                        &spec.nonlocal_stabilizers})
    for (const auto &s : *v)
      book.add(s);
}

// ---------------------------------------------------------------- CC

CCRibbon make_ribbon(const TorusLattice &lat, int x0, int y0, int length,
                     bool horizontal) {
  if (length < 1)
    throw std::invalid_argument("ribbon length must be >= 1");
  if (((x0 + y0) % 2 + 2) % 2 != 1)
    throw std::invalid_argument("ribbon must start on a site with x+y odd");
  CCRibbon r{x0, y0, length, horizontal, {}, {}};
  std::set<int> seen;
  for (int i = 0; i < length; ++i) {
    r.s.push_back(lat.site(x0 + i, y0 - i));
    r.sigma.push_back(horizontal ? lat.site(x0 + i + 1, y0 - i)
                                 : lat.site(x0 + i, y0 - i - 1));
    seen.insert(r.s.back());
    seen.insert(r.sigma.back());
  }
  if (static_cast<int>(seen.size()) != 2 * length)
    throw std::invalid_argument("ribbon wraps onto itself");
  return r;
}

std::vector<CliffordGate> cc_unitary(const CCRibbon &r) {
  std::vector<CliffordGate> u;
  const int k = static_cast<int>(r.s.size());
  for (int i = 0; i + 1 < k; ++i)
    u.emplace_back(GateKind::CX, r.s[i], r.s[i + 1]);
  for (int i = 0; i < k; ++i) {
    u.emplace_back(GateKind::Conj, r.sigma[i]);
    u.emplace_back(GateKind::CX, r.s[i], r.sigma[i]);
  }
  for (int i = k - 2; i >= 0; --i)
    u.emplace_back(GateKind::CXdag, r.s[i], r.s[i + 1]);
  return u;
}

DefectFragment cc_defect_circuit(const TorusLattice &lat,
                                 const StabilizerBook &book, const CCRibbon &r,
                                 const std::string &name) {
  DefectFragment out;
  DefectSpec &spec = out.spec;
  spec.kind = DefectKind::CC;
  spec.name = name;
  spec.sites = r.s;
  spec.sigma = r.sigma;
  spec.unitary = cc_unitary(r);
  out.circuit = Circuit(lat.d(), book.n_total());
  for (const auto &g : spec.unitary)
    out.circuit.gate(g);

  StabilizerBook after = book;
  after.conjugate(spec.unitary);
  std::vector<size_t> changed;
  int heavy[2] = {-1, -1};
  for (size_t i = 0; i < book.size(); ++i) {
    if (after.entries()[i].op == book.entries()[i].op)
      continue;
    changed.push_back(i);
    const auto &o = book.entries()[i].origin;
    if (o.size() != 1)
      continue;
    int t = lat.plaquettes()[o[0]].type == PlaqType::A ? 0 : 1;
    int w = after.entries()[i].op.weight();
    if (w > 4 && (heavy[t] < 0 || w > after.entries()[heavy[t]].op.weight()))
      heavy[t] = static_cast<int>(i);
  }
  if (heavy[0] < 0 || heavy[1] < 0)
    throw std::invalid_argument("ribbon has no A and B endpoint on this "
                                "lattice");
  for (size_t i : changed) {
    const auto &b = book.entries()[i];
    auto a = after.entries()[i];
    spec.removed_plaquettes.insert(spec.removed_plaquettes.end(),
                                   b.origin.begin(), b.origin.end());
    if (static_cast<int>(i) == heavy[0] || static_cast<int>(i) == heavy[1]) {
      a.local = false;
      spec.endpoint_stabilizers.push_back(a);
      spec.nonlocal_stabilizers.push_back(a);
    } else {
      spec.other_stabilizers.push_back(a);
    }
  }
  return out;
}

Circuit fuse_cc_pair(const TorusLattice &lat, const DefectSpec &spec,
                     int n_total) {
  if (spec.kind != DefectKind::CC)
    throw std::invalid_argument("fuse_cc_pair needs a CC defect");
  Circuit c(lat.d(), pad_n(lat, n_total));
  for (const auto &g : spec.unitary)
    c.gate(g);
  return c;
}

void update_book_cc(StabilizerBook &book, const DefectSpec &spec) {
  book.conjugate(spec.unitary);
  for (size_t i = 0; i < book.size(); ++i)
    for (const auto &ep : spec.endpoint_stabilizers)
      if (book.entries()[i].op == ep.op)
        book.set_local(static_cast<int>(i), false);
}

} // namespace ztoric
