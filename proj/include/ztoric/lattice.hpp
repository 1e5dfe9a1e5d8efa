/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#pragma once

#include <array>
#include <string>
#include <vector>

#include "ztoric/circuit.hpp"
#include "ztoric/weyl.hpp"

namespace ztoric {

enum class PlaqType { A, B };

/// Corner order is TL, TR, BL, BR with y growing downwards.
struct Plaquette {
  int index = 0;
  int px = 0, py = 0;
  PlaqType type = PlaqType::A;
  std::array<int, 4> corners{};
  /// X exponents (A) or Z exponents (B) per corner.
  std::array<int, 4> exps{};
  WeylOp op;
  std::string label;
};

class TorusLattice {
public:
  /// Lx x Ly qutrits on a torus; both even and >= 2.
  TorusLattice(int Lx, int Ly, int d = 3);

  int Lx() const { return Lx_; }
  int Ly() const { return Ly_; }
  int d() const { return d_; }
  int n_sites() const { return Lx_ * Ly_; }
  int site(int x, int y) const;
  int sx(int s) const { return s % Lx_; }
  int sy(int s) const { return s / Lx_; }

  const std::vector<Plaquette> &plaquettes() const { return plaq_; }
  const Plaquette &plaquette(int px, int py) const;
  int plaquette_index(int px, int py) const;
  std::vector<int> plaquettes_of(PlaqType t) const;
  /// Plaquettes having s as a corner, with the corner slot (0..3).
  std::vector<std::pair<int, int>> plaquettes_at_site(int s) const;
  /// Corner slot of s in plaquette p, or -1.
  int corner_slot(int p, int s) const;

  /// Plaquette operator padded to n_total >= n_sites qudits.
  WeylOp plaquette_op(int p, int n_total = -1) const;

  WeylOp logical_z_hori(int row, int n_total = -1) const;
  WeylOp logical_z_vert(int col, int n_total = -1) const;
  WeylOp logical_x_hori(int row, int n_total = -1) const;
  WeylOp logical_x_vert(int col, int n_total = -1) const;

private:
  int Lx_, Ly_, d_;
  std::vector<Plaquette> plaq_;
};

TorusLattice build_lattice(int Lx, int Ly, int d = 3);

struct PrepStep {
  int plaquette = 0;
  int representative = 0;
};

struct PrepOrdering {
  int implicit_plaquette = -1;
  std::vector<PrepStep> steps;
};

/// Bottom-right A plaquette left implicit; the others prepared from the
/// farthest (diagonal BFS distance) inwards, ties broken by serpentine row
/// order; each representative is the corner shared with its BFS parent.
PrepOrdering default_ordering(const TorusLattice &lat);
/// Throws std::invalid_argument when the ordering misses a plaquette or a
/// representative was already touched.
void validate_ordering(const TorusLattice &lat, const PrepOrdering &ord);
/// H on each representative then CX^{e_t e_r} to the other corners. Gates
/// carry the plaquette index as their scheduling group.
Circuit ground_state_circuit(const TorusLattice &lat, const PrepOrdering &ord,
                             int n_total = -1);
Circuit ground_state_circuit(const TorusLattice &lat);

enum class Species { e, ebar, m, mbar };
std::string species_name(Species s);
Species species_from_name(const std::string &s);
inline bool is_charge(Species s) { return s == Species::e || s == Species::ebar; }
/// Species signature exponent k with <S> = omega^k on the excited plaquette.
inline int species_exponent(Species s) {
  return (s == Species::e || s == Species::m) ? 1 : 2;
}

struct AnyonString {
  Species species = Species::e;
  std::vector<int> path;
  WeylOp op;
  int start_plaquette = -1;
  int end_plaquette = -1;
};

/// Z/Z^dag (charges) or X/X^dag (fluxes) along a walk whose consecutive
/// sites share exactly one plaquette of the anyon's type. The moved
/// anyon `species` sits on the plaquette beyond the last site and its
/// antiparticle beyond the first. For a one-site path the end plaquette is
/// the one with the site in its top row. With closed = true the walk must
/// close through a plaquette onto its first site and nothing is excited.
AnyonString anyon_string(const TorusLattice &lat, Species species,
                         const std::vector<int> &path, bool closed = false,
                         int n_total = -1);

} // namespace ztoric
