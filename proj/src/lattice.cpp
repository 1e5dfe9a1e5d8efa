/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#include "ztoric/lattice.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace ztoric {

namespace {

constexpr std::array<int, 4> kAExps = {1, 1, -1, -1};
constexpr std::array<int, 4> kBExps = {-1, 1, -1, 1};

int pad(const TorusLattice &lat, int n_total) {
  if (n_total < 0)
    return lat.n_sites();
  if (n_total < lat.n_sites())
    throw std::invalid_argument("register smaller than the lattice");
  return n_total;
}

} // namespace

TorusLattice::TorusLattice(int Lx, int Ly, int d) : Lx_(Lx), Ly_(Ly), d_(d) {
  require_odd_prime(d);
  if (Lx < 2 || Ly < 2 || Lx % 2 || Ly % 2)
    throw std::invalid_argument("lattice dimensions must be even and >= 2");
  for (int py = 0; py < Ly; ++py)
    for (int px = 0; px < Lx; ++px) {
      Plaquette p;
      p.index = py * Lx + px;
      p.px = px;
      p.py = py;
      p.type = (px + py) % 2 == 0 ? PlaqType::A : PlaqType::B;
      p.corners = {site(px, py), site(px + 1, py), site(px, py + 1),
                   site(px + 1, py + 1)};
      p.exps = p.type == PlaqType::A ? kAExps : kBExps;
      p.op = WeylOp(d, n_sites());
      for (int k = 0; k < 4; ++k) {
        int e = mod(p.exps[k], d);
        if (p.type == PlaqType::A)
          p.op.set(p.corners[k], e, 0);
        else
          p.op.set(p.corners[k], 0, e);
      }
      p.label = std::string(p.type == PlaqType::A ? "A" : "B") + "(" +
                std::to_string(px) + "," + std::to_string(py) + ")";
      plaq_.push_back(std::move(p));
    }
}

TorusLattice build_lattice(int Lx, int Ly, int d) {
  return TorusLattice(Lx, Ly, d);
}

int TorusLattice::site(int x, int y) const {
  return mod(y, Ly_) * Lx_ + mod(x, Lx_);
}

int TorusLattice::plaquette_index(int px, int py) const {
  return mod(py, Ly_) * Lx_ + mod(px, Lx_);
}

const Plaquette &TorusLattice::plaquette(int px, int py) const {
  return plaq_[plaquette_index(px, py)];
}

std::vector<int> TorusLattice::plaquettes_of(PlaqType t) const {
  std::vector<int> out;
  for (const auto &p : plaq_)
    if (p.type == t)
      out.push_back(p.index);
  return out;
}

std::vector<std::pair<int, int>> TorusLattice::plaquettes_at_site(int s) const {
  const int x = sx(s), y = sy(s);
  // slot k of plaquette (x - dx, y - dy) holds site s
  const int offs[4][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  std::vector<std::pair<int, int>> out;
  for (int k = 0; k < 4; ++k)
    out.emplace_back(plaquette_index(x - offs[k][0], y - offs[k][1]), k);
  return out;
}

int TorusLattice::corner_slot(int p, int s) const {
  const auto &c = plaq_.at(p).corners;
  for (int k = 0; k < 4; ++k)
    if (c[k] == s)
      return k;
  return -1;
}

WeylOp TorusLattice::plaquette_op(int p, int n_total) const {
  int n = pad(*this, n_total);
  return n == n_sites() ? plaq_.at(p).op
                        : extend(plaq_.at(p).op, n - n_sites());
}

WeylOp TorusLattice::logical_z_hori(int row, int n_total) const {
  WeylOp w(d_, pad(*this, n_total));
  for (int x = 0; x < Lx_; ++x)
    w.set(site(x, row), 0, x % 2 == 0 ? 1 : d_ - 1);
  return w;
}

WeylOp TorusLattice::logical_z_vert(int col, int n_total) const {
  WeylOp w(d_, pad(*this, n_total));
  for (int y = 0; y < Ly_; ++y)
    w.set(site(col, y), 0, 1);
  return w;
}

WeylOp TorusLattice::logical_x_hori(int row, int n_total) const {
  WeylOp w(d_, pad(*this, n_total));
  for (int x = 0; x < Lx_; ++x)
    w.set(site(x, row), 1, 0);
  return w;
}

WeylOp TorusLattice::logical_x_vert(int col, int n_total) const {
  WeylOp w(d_, pad(*this, n_total));
  for (int y = 0; y < Ly_; ++y)
    w.set(site(col, y), y % 2 == 0 ? 1 : d_ - 1, 0);
  return w;
}

PrepOrdering default_ordering(const TorusLattice &lat) {
  const int Lx = lat.Lx(), Ly = lat.Ly();
  PrepOrdering ord;
  // bottom-right A plaquette
  int root = -1;
  for (int py = Ly - 1; py >= 0 && root < 0; --py)
    for (int px = Lx - 1; px >= 0; --px)
      if (lat.plaquette(px, py).type == PlaqType::A) {
        root = lat.plaquette_index(px, py);
        break;
      }
  ord.implicit_plaquette = root;

  const int np = static_cast<int>(lat.plaquettes().size());
  std::vector<int> dist(np, -1), parent(np, -1);
  std::deque<int> q{root};
  dist[root] = 0;
  const int nb[4][2] = {{-1, -1}, {1, -1}, {-1, 1}, {1, 1}};
  while (!q.empty()) {
    int p = q.front();
    q.pop_front();
    const auto &P = lat.plaquettes()[p];
    for (const auto &o : nb) {
      int r = lat.plaquette_index(P.px + o[0], P.py + o[1]);
      if (dist[r] < 0) {
        dist[r] = dist[p] + 1;
        parent[r] = p;
        q.push_back(r);
      }
    }
  }

  auto serp = [&](int p) {
    const auto &P = lat.plaquettes()[p];
    return P.py * Lx + (P.py % 2 == 0 ? P.px : Lx - 1 - P.px);
  };
  std::vector<int> todo;
  for (int p : lat.plaquettes_of(PlaqType::A))
    if (p != root)
      todo.push_back(p);
  std::sort(todo.begin(), todo.end(), [&](int a, int b) {
    if (dist[a] != dist[b])
      return dist[a] > dist[b];
    return serp(a) < serp(b);
  });
  for (int p : todo) {
    const auto &P = lat.plaquettes()[p];
    const auto &Q = lat.plaquettes()[parent[p]];
    int rep = -1;
    for (int c : P.corners)
      if (std::find(Q.corners.begin(), Q.corners.end(), c) != Q.corners.end()) {
        rep = c;
        break;
      }
    ord.steps.push_back({p, rep});
  }
  return ord;
}

void validate_ordering(const TorusLattice &lat, const PrepOrdering &ord) {
  auto as = lat.plaquettes_of(PlaqType::A);
  std::set<int> need(as.begin(), as.end());
  if (!need.count(ord.implicit_plaquette))
    throw std::invalid_argument("implicit plaquette is not an A plaquette");
  need.erase(ord.implicit_plaquette);
  std::set<int> touched;
  for (const auto &st : ord.steps) {
    if (!need.count(st.plaquette))
      throw std::invalid_argument("ordering lists plaquette " +
                                  std::to_string(st.plaquette) +
                                  " twice or it is not an explicit A");
    need.erase(st.plaquette);
    int slot = lat.corner_slot(st.plaquette, st.representative);
    if (slot < 0)
      throw std::invalid_argument("representative is not a corner of " +
                                  lat.plaquettes()[st.plaquette].label);
    if (touched.count(st.representative))
      throw std::invalid_argument("representative of " +
                                  lat.plaquettes()[st.plaquette].label +
                                  " was touched by an earlier plaquette");
    for (int c : lat.plaquettes()[st.plaquette].corners)
      touched.insert(c);
  }
  if (!need.empty())
    throw std::invalid_argument("ordering misses " + std::to_string(need.size()) +
                                " A plaquette(s)");
}

Circuit ground_state_circuit(const TorusLattice &lat, const PrepOrdering &ord,
                             int n_total) {
  validate_ordering(lat, ord);
  Circuit c(lat.d(), pad(lat, n_total));
  for (const auto &st : ord.steps) {
    const auto &P = lat.plaquettes()[st.plaquette];
    const int r = st.representative;
    const int er = P.exps[lat.corner_slot(st.plaquette, r)];
    c.gate(GateKind::Fourier, r, -1, st.plaquette);
    for (int k = 0; k < 4; ++k) {
      if (P.corners[k] == r)
        continue;
      GateKind g = P.exps[k] * er > 0 ? GateKind::CX : GateKind::CXdag;
      c.gate(g, r, P.corners[k], st.plaquette);
    }
  }
  return c;
}

Circuit ground_state_circuit(const TorusLattice &lat) {
  return ground_state_circuit(lat, default_ordering(lat));
}

std::string species_name(Species s) {
  switch (s) {
  case Species::e: return "e";
  case Species::ebar: return "ebar";
  case Species::m: return "m";
  case Species::mbar: return "mbar";
  }
  return "?";
}

Species species_from_name(const std::string &s) {
  if (s == "e")
    return Species::e;
  if (s == "ebar" || s == "e_bar")
    return Species::ebar;
  if (s == "m")
    return Species::m;
  if (s == "mbar" || s == "m_bar")
    return Species::mbar;
  throw std::invalid_argument("unknown anyon species '" + s + "'");
}

AnyonString anyon_string(const TorusLattice &lat, Species species,
                         const std::vector<int> &path, bool closed,
                         int n_total) {
  if (path.empty())
    throw std::invalid_argument("anyon path is empty");
  const int d = lat.d();
  const PlaqType want = is_charge(species) ? PlaqType::A : PlaqType::B;
  for (int s : path)
    if (s < 0 || s >= lat.n_sites())
      throw std::invalid_argument("anyon path site out of range");

  // the single plaquette of the wanted type holding both a and b
  auto link = [&](int a, int b) {
    int found = -1, count = 0;
    for (auto [q, k] : lat.plaquettes_at_site(a))
      if (lat.plaquettes()[q].type == want && lat.corner_slot(q, b) >= 0) {
        found = q;
        ++count;
      }
    if (count != 1)
      throw std::invalid_argument(
          "consecutive path sites must share exactly one plaquette of the "
          "anyon's type");
    return found;
  };
  auto sign = [&](int p, int s) { return lat.plaquettes()[p].exps[lat.corner_slot(p, s)]; };
  auto other = [&](int s, int p) {
    for (auto [q, k] : lat.plaquettes_at_site(s))
      if (q != p && lat.plaquettes()[q].type == want)
        return q;
    return -1;
  };

  const int n = static_cast<int>(path.size());
  std::vector<int> links;
  for (int i = 0; i + 1 < n; ++i)
    links.push_back(link(path[i], path[i + 1]));
  if (closed) {
    if (n < 3)
      throw std::invalid_argument("closed loop needs at least three sites");
    links.push_back(link(path[n - 1], path[0]));
  }
  for (size_t i = 0; i + 1 < links.size(); ++i)
    if (links[i] == links[i + 1])
      throw std::invalid_argument("anyon path stays inside one plaquette");
  if (closed && links.front() == links.back())
    throw std::invalid_argument("anyon path stays inside one plaquette");

  // exponent chain: e_p(s) a_s + e_p(s') a_s' = 0 on every shared plaquette
  std::vector<int> a(n);
  a[0] = 1;
  for (int i = 0; i + 1 < n; ++i)
    a[i + 1] = mod(-static_cast<long long>(sign(links[i], path[i])) *
                       sign(links[i], path[i + 1]) * a[i],
                   d);

  AnyonString out;
  out.species = species;
  out.path = path;
  if (closed) {
    int p = links.back();
    if (mod(sign(p, path[n - 1]) * a[n - 1] + sign(p, path[0]) * a[0], d))
      throw std::invalid_argument("loop does not close consistently");
  } else {
    int last = path[n - 1];
    int end = n >= 2 ? other(last, links.back()) : -1;
    if (n == 1) {
      for (auto [q, k] : lat.plaquettes_at_site(last))
        if (lat.plaquettes()[q].type == want && k < 2)
          end = q;
    }
    int start = n >= 2 ? other(path[0], links.front()) : other(last, end);
    // <S_end> = omega^{sp(W, S_end)}
    int e = sign(end, last);
    int need = species_exponent(species);
    int have = is_charge(species) ? mod(-static_cast<long long>(a[n - 1]) * e, d)
                                  : mod(static_cast<long long>(a[n - 1]) * e, d);
    int scale = mod(static_cast<long long>(need) * inv_mod(have, d), d);
    for (int &v : a)
      v = mod(static_cast<long long>(v) * scale, d);
    out.start_plaquette = start;
    out.end_plaquette = end;
  }

  out.op = WeylOp(d, pad(lat, n_total));
  std::vector<int> seen(lat.n_sites(), 0);
  for (int i = 0; i < n; ++i) {
    if (seen[path[i]]++)
      throw std::invalid_argument("anyon path revisits a site");
    if (is_charge(species))
      out.op.set(path[i], 0, a[i]);
    else
      out.op.set(path[i], a[i], 0);
  }
  return out;
}

} // namespace ztoric
