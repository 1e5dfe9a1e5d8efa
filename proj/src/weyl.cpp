/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#include "ztoric/weyl.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace ztoric {

bool is_odd_prime(int d) {
  if (d < 3 || d % 2 == 0)
    return false;
  for (int f = 3; f * f <= d; f += 2)
    if (d % f == 0)
      return false;
  return true;
}

void require_odd_prime(int d) {
  if (d == 2)
    throw std::invalid_argument(
        "d = 2 is not supported: qubit phases need fourth roots of unity");
  if (!is_odd_prime(d) || d > 251)
    throw std::invalid_argument("dimension must be an odd prime <= 251, got " +
                                std::to_string(d));
}

int inv_mod(int a, int d) {
  a = mod(a, d);
  if (a == 0)
    throw std::invalid_argument("zero has no inverse mod d");
  // Fermat: a^(d-2).
  long long r = 1, b = a;
  for (int e = d - 2; e > 0; e >>= 1) {
    if (e & 1)
      r = r * b % d;
    b = b * b % d;
  }
  return static_cast<int>(r);
}

WeylOp::WeylOp(int d_, int n) : d(d_), x(n, 0), z(n, 0), phase(0) {
  require_odd_prime(d_);
  if (n < 0)
    throw std::invalid_argument("negative qudit count");
}

WeylOp WeylOp::single(int d, int n, int site, int xe, int ze) {
  WeylOp w(d, n);
  if (site < 0 || site >= n)
    throw std::out_of_range("site out of range");
  w.set(site, xe, ze);
  return w;
}

void WeylOp::set(int site, int xe, int ze) {
  x.at(site) = static_cast<uint8_t>(mod(xe, d));
  z.at(site) = static_cast<uint8_t>(mod(ze, d));
}

bool WeylOp::is_identity() const {
  if (phase != 0)
    return false;
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] || z[i])
      return false;
  return true;
}

int WeylOp::weight() const {
  int w = 0;
  for (size_t i = 0; i < x.size(); ++i)
    w += (x[i] || z[i]) ? 1 : 0;
  return w;
}

std::vector<int> WeylOp::support() const {
  std::vector<int> s;
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] || z[i])
      s.push_back(static_cast<int>(i));
  return s;
}

static std::string site_token(int xe, int ze) {
  if (!xe && !ze)
    return "I";
  std::string t;
  if (xe)
    t += xe == 1 ? "X" : "X" + std::to_string(xe);
  if (ze)
    t += ze == 1 ? "Z" : "Z" + std::to_string(ze);
  return t;
}

std::string WeylOp::to_string() const {
  std::ostringstream os;
  if (phase)
    os << "w" << phase << ":";
  for (size_t i = 0; i < x.size(); ++i) {
    if (i)
      os << ',';
    os << site_token(x[i], z[i]);
  }
  return os.str();
}

WeylOp WeylOp::parse(int d, const std::string &label) {
  std::string body = label;
  int ph = 0;
  auto colon = body.find(':');
  if (colon != std::string::npos) {
    std::string pre = body.substr(0, colon);
    if (pre.empty() || (pre[0] != 'w' && pre[0] != 'W'))
      throw std::invalid_argument("bad phase prefix in '" + label + "'");
    ph = std::stoi(pre.substr(1));
    body = body.substr(colon + 1);
  }
  std::vector<std::pair<int, int>> sites;
  std::string tok;
  auto flush = [&]() {
    if (tok.empty())
      return;
    int xe = 0, ze = 0;
    size_t i = 0;
    while (i < tok.size()) {
      char c = static_cast<char>(std::toupper(static_cast<unsigned char>(tok[i])));
      ++i;
      int e = 1;
      size_t j = i;
      while (j < tok.size() && std::isdigit(static_cast<unsigned char>(tok[j])))
        ++j;
      if (j > i)
        e = std::stoi(tok.substr(i, j - i));
      i = j;
      if (c == 'X')
        xe += e;
      else if (c == 'Z')
        ze += e;
      else if (c == 'I')
        ;
      else
        throw std::invalid_argument("bad Weyl token '" + tok + "'");
    }
    sites.emplace_back(xe, ze);
    tok.clear();
  };
  for (char c : body) {
    if (c == ',' || c == ' ' || c == '.')
      flush();
    else
      tok += c;
  }
  flush();
  WeylOp w(d, static_cast<int>(sites.size()));
  for (size_t i = 0; i < sites.size(); ++i)
    w.set(static_cast<int>(i), sites[i].first, sites[i].second);
  w.phase = mod(ph, d);
  return w;
}

static void check_pair(const WeylOp &a, const WeylOp &b) {
  if (a.d != b.d)
    throw std::invalid_argument("Weyl dimension mismatch");
  if (a.x.size() != b.x.size())
    throw std::invalid_argument("Weyl arity mismatch");
}

void compose_into(WeylOp &a, const WeylOp &b) {
  check_pair(a, b);
  const int d = a.d;
  long long ph = a.phase + b.phase;
  const size_t n = a.x.size();
  for (size_t i = 0; i < n; ++i) {
    // Z^{z_a} X^{x_b} = omega^{z_a x_b} X^{x_b} Z^{z_a}.
    ph += static_cast<long long>(a.z[i]) * b.x[i];
    a.x[i] = static_cast<uint8_t>((a.x[i] + b.x[i]) % d);
    a.z[i] = static_cast<uint8_t>((a.z[i] + b.z[i]) % d);
  }
  a.phase = mod(ph, d);
}

WeylOp compose(const WeylOp &a, const WeylOp &b) {
  WeylOp r = a;
  compose_into(r, b);
  return r;
}

WeylOp power(const WeylOp &a, long long k) {
  const int d = a.d;
  int kk = mod(k, d);
  WeylOp r(d, a.n());
  long long zx = 0;
  for (int i = 0; i < a.n(); ++i) {
    r.x[i] = static_cast<uint8_t>(a.x[i] * kk % d);
    r.z[i] = static_cast<uint8_t>(a.z[i] * kk % d);
    zx += static_cast<long long>(a.z[i]) * a.x[i];
  }
  // (X^x Z^z)^k = omega^{k(k-1)/2 z.x} X^{kx} Z^{kz}; k(k-1)/2 is taken as an
  // integer before reduction so the rule holds for every residue k.
  long long tri = static_cast<long long>(kk) * (kk - 1) / 2;
  r.phase = mod(static_cast<long long>(a.phase) * kk + mod(tri, d) * mod(zx, d), d);
  return r;
}

WeylOp inverse(const WeylOp &a) { return power(a, a.d - 1); }

int symplectic_product(const WeylOp &a, const WeylOp &b) {
  check_pair(a, b);
  long long s = 0;
  for (size_t i = 0; i < a.x.size(); ++i)
    s += static_cast<long long>(a.x[i]) * b.z[i] -
         static_cast<long long>(a.z[i]) * b.x[i];
  return mod(s, a.d);
}

WeylOp embed(const WeylOp &local, int n, const std::vector<int> &sites) {
  if (static_cast<int>(sites.size()) != local.n())
    throw std::invalid_argument("embed: site count mismatch");
  WeylOp w(local.d, n);
  for (size_t k = 0; k < sites.size(); ++k) {
    if (sites[k] < 0 || sites[k] >= n)
      throw std::out_of_range("embed: site out of range");
    if (w.x[sites[k]] || w.z[sites[k]])
      throw std::invalid_argument("embed: repeated site");
    w.x[sites[k]] = local.x[k];
    w.z[sites[k]] = local.z[k];
  }
  w.phase = local.phase;
  return w;
}

WeylOp restrict_to(const WeylOp &w, const std::vector<int> &sites) {
  WeylOp r(w.d, static_cast<int>(sites.size()));
  for (size_t k = 0; k < sites.size(); ++k) {
    r.x[k] = w.x.at(sites[k]);
    r.z[k] = w.z.at(sites[k]);
  }
  r.phase = w.phase;
  return r;
}

WeylOp extend(const WeylOp &w, int extra) {
  WeylOp r = w;
  r.x.resize(w.x.size() + extra, 0);
  r.z.resize(w.z.size() + extra, 0);
  return r;
}

int gate_arity(GateKind k) {
  switch (k) {
  case GateKind::CX:
  case GateKind::CXdag:
  case GateKind::CZ:
  case GateKind::CZdag:
    return 2;
  default:
    return 1;
  }
}

namespace {
const std::pair<GateKind, const char *> kGateNames[] = {
    {GateKind::ShiftX, "X"},       {GateKind::ShiftXdag, "Xdag"},
    {GateKind::ClockZ, "Z"},       {GateKind::ClockZdag, "Zdag"},
    {GateKind::Conj, "C"},         {GateKind::Fourier, "H"},
    {GateKind::FourierDag, "Hdag"}, {GateKind::CX, "CX"},
    {GateKind::CXdag, "CXdag"},    {GateKind::CZ, "CZ"},
    {GateKind::CZdag, "CZdag"}};
}

std::string gate_name(GateKind k) {
  for (auto &p : kGateNames)
    if (p.first == k)
      return p.second;
  return "?";
}

GateKind gate_from_name(const std::string &name) {
  for (auto &p : kGateNames)
    if (name == p.second)
      return p.first;
  throw std::invalid_argument("unknown gate '" + name + "'");
}

GateKind gate_inverse(GateKind k) {
  switch (k) {
  case GateKind::ShiftX: return GateKind::ShiftXdag;
  case GateKind::ShiftXdag: return GateKind::ShiftX;
  case GateKind::ClockZ: return GateKind::ClockZdag;
  case GateKind::ClockZdag: return GateKind::ClockZ;
  case GateKind::Conj: return GateKind::Conj;
  case GateKind::Fourier: return GateKind::FourierDag;
  case GateKind::FourierDag: return GateKind::Fourier;
  case GateKind::CX: return GateKind::CXdag;
  case GateKind::CXdag: return GateKind::CX;
  case GateKind::CZ: return GateKind::CZdag;
  case GateKind::CZdag: return GateKind::CZ;
  }
  return k;
}

CliffordGate::CliffordGate(GateKind k, int a, int b) : kind(k), q0(a), q1(b) {
  if (gate_arity(k) == 2) {
    if (b < 0 || a < 0 || a == b)
      throw std::invalid_argument(gate_name(k) +
                                  ": needs two distinct qudit indices");
  } else if (b >= 0 || a < 0) {
    throw std::invalid_argument(gate_name(k) + ": needs one qudit index");
  }
}

namespace {

// Generator images (x0,z0,x1,z1,phase) of X_0, Z_0, X_1, Z_1.
struct Gens {
  WeylOp img[4];
};

Gens generator_images(GateKind k, int d) {
  const int n = gate_arity(k);
  auto op = [&](int x0, int z0, int x1 = 0, int z1 = 0, int ph = 0) {
    WeylOp w(d, n);
    w.set(0, x0, z0);
    if (n == 2)
      w.set(1, x1, z1);
    w.phase = mod(ph, d);
    return w;
  };
  Gens g;
  switch (k) {
  case GateKind::ShiftX: // X Z X^-1 = omega^-1 Z
    g.img[0] = op(1, 0);
    g.img[1] = op(0, 1, 0, 0, -1);
    break;
  case GateKind::ShiftXdag:
    g.img[0] = op(1, 0);
    g.img[1] = op(0, 1, 0, 0, 1);
    break;
  case GateKind::ClockZ: // Z X Z^-1 = omega X
    g.img[0] = op(1, 0, 0, 0, 1);
    g.img[1] = op(0, 1);
    break;
  case GateKind::ClockZdag:
    g.img[0] = op(1, 0, 0, 0, -1);
    g.img[1] = op(0, 1);
    break;
  case GateKind::Conj:
    g.img[0] = op(-1, 0);
    g.img[1] = op(0, -1);
    break;
  case GateKind::Fourier:
    g.img[0] = op(0, 1);
    g.img[1] = op(-1, 0);
    break;
  case GateKind::FourierDag:
    g.img[0] = op(0, -1);
    g.img[1] = op(1, 0);
    break;
  case GateKind::CX:
    g.img[0] = op(1, 0, 1, 0);
    g.img[1] = op(0, 1, 0, 0);
    g.img[2] = op(0, 0, 1, 0);
    g.img[3] = op(0, -1, 0, 1);
    break;
  case GateKind::CXdag:
    g.img[0] = op(1, 0, -1, 0);
    g.img[1] = op(0, 1, 0, 0);
    g.img[2] = op(0, 0, 1, 0);
    g.img[3] = op(0, 1, 0, 1);
    break;
  case GateKind::CZ:
    g.img[0] = op(1, 0, 0, 1);
    g.img[1] = op(0, 1, 0, 0);
    g.img[2] = op(0, 1, 1, 0);
    g.img[3] = op(0, 0, 0, 1);
    break;
  case GateKind::CZdag:
    g.img[0] = op(1, 0, 0, -1);
    g.img[1] = op(0, 1, 0, 0);
    g.img[2] = op(0, -1, 1, 0);
    g.img[3] = op(0, 0, 0, 1);
    break;
  }
  return g;
}

} // namespace

LocalTable::LocalTable(GateKind kind, int d)
    : d_(d), arity_(gate_arity(kind)), stride_(2 * gate_arity(kind) + 1) {
  require_odd_prime(d);
  Gens g = generator_images(kind, d);
  const int count = arity_ == 1 ? d * d : d * d * d * d;
  data_.resize(static_cast<size_t>(count) * stride_);
  for (int idx = 0; idx < count; ++idx) {
    int e[4] = {0, 0, 0, 0};
    int rem = idx;
    for (int k = 2 * arity_ - 1; k >= 0; --k) {
      e[k] = rem % d;
      rem /= d;
    }
    // X_0^{e0} Z_0^{e1} X_1^{e2} Z_1^{e3} maps to the ordered product of the
    // generator images raised to the same powers.
    WeylOp r(d, arity_);
    for (int k = 0; k < 2 * arity_; ++k)
      compose_into(r, power(g.img[k], e[k]));
    uint8_t *out = &data_[static_cast<size_t>(idx) * stride_];
    for (int s = 0; s < arity_; ++s) {
      out[2 * s] = r.x[s];
      out[2 * s + 1] = r.z[s];
    }
    out[2 * arity_] = static_cast<uint8_t>(r.phase);
  }
}

const LocalTable &gate_table(GateKind kind, int d) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<LocalTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(static_cast<int>(kind), d);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<LocalTable>(kind, d)).first;
  return *it->second;
}

void conjugate_inplace(const CliffordGate &g, const LocalTable &table,
                       WeylOp &w) {
  const int n = w.n();
  if (g.q0 >= n || (g.q1 >= 0 && g.q1 >= n))
    throw std::out_of_range("gate target out of range");
  const int d = w.d;
  if (table.arity() == 1) {
    const uint8_t *im = table.image(table.index_of(w.x[g.q0], w.z[g.q0]));
    w.x[g.q0] = im[0];
    w.z[g.q0] = im[1];
    w.phase = (w.phase + im[2]) % d;
  } else {
    const uint8_t *im = table.image(
        table.index_of(w.x[g.q0], w.z[g.q0], w.x[g.q1], w.z[g.q1]));
    w.x[g.q0] = im[0];
    w.z[g.q0] = im[1];
    w.x[g.q1] = im[2];
    w.z[g.q1] = im[3];
    w.phase = (w.phase + im[4]) % d;
  }
}

WeylOp conjugate_by_gate(const CliffordGate &g, const WeylOp &w) {
  WeylOp r = w;
  conjugate_inplace(g, gate_table(g.kind, w.d), r);
  return r;
}

} // namespace ztoric
