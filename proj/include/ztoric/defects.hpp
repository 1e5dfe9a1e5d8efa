/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#pragma once

#include <string>
#include <vector>

#include "ztoric/lattice.hpp"

namespace ztoric {

/// One stabilizer tracked while anyons and defects are manipulated.
struct MonitoredStabilizer {
  std::string label;
  /// "A", "B", or "defect" for fused or transformed operators.
  std::string type;
  WeylOp op;
  /// Nonlocal stabilizers (defect internal states) may change freely when
  /// anyons are moved.
  bool local = true;
  /// Lattice plaquettes the operator was built from.
  std::vector<int> origin;
};

/// The commuting set of stabilizers that currently describes the vacuum.
class StabilizerBook {
public:
  StabilizerBook() = default;
  StabilizerBook(const TorusLattice &lat, int n_total = -1);

  const std::vector<MonitoredStabilizer> &entries() const { return e_; }
  size_t size() const { return e_.size(); }
  int n_total() const { return n_; }

  /// Index of the entry with this label, else of the unique local entry
  /// whose origin contains the named plaquette "A(x,y)"/"B(x,y)".
  int find(const std::string &label) const;
  /// Entries whose origin intersects the given plaquettes.
  std::vector<int> touching(const std::vector<int> &plaquettes) const;
  void remove(std::vector<int> entry_indices);
  void add(MonitoredStabilizer s);
  void set_local(int i, bool local) { e_.at(i).local = local; }
  /// Heisenberg update S -> U S U^dag for U = gates applied in order.
  /// Entries that return to a bare plaquette get their original label back.
  void conjugate(const std::vector<CliffordGate> &gates);
  /// Throws std::logic_error if two entries fail to commute.
  void check_commuting() const;

private:
  int n_ = 0;
  std::vector<std::string> plabels_;
  std::vector<WeylOp> pops_;
  std::vector<MonitoredStabilizer> e_;
};

enum class DefectKind { PF, PFstar, CC };
std::string defect_kind_name(DefectKind k);
DefectKind defect_kind_from_name(const std::string &s);

/// Observable measured on a PF line site: XZ or XZ^dag depending on site
/// parity, swapped for PF*.
WeylOp pf_measurement_op(const TorusLattice &lat, int site, DefectKind kind,
                         int n_total = -1);

/// Sites of a CC ribbon. s_i = (x0+i, y0-i); sigma_i sits above s_i, or
/// to its right for a horizontal ribbon. x0+y0 must be odd.
struct CCRibbon {
  int x0 = 0, y0 = 0, length = 1;
  bool horizontal = false;
  std::vector<int> s, sigma;
};
CCRibbon make_ribbon(const TorusLattice &lat, int x0, int y0, int length,
                     bool horizontal = false);

struct DefectSpec {
  DefectKind kind = DefectKind::PF;
  std::string name;
  /// Measured sites (PF) or the ribbon s-sites (CC).
  std::vector<int> sites;
  std::vector<int> sigma;
  std::vector<WeylOp> measured;
  std::vector<int> cregs;
  /// Plaquettes whose stabilizers were replaced.
  std::vector<int> removed_plaquettes;
  std::vector<MonitoredStabilizer> endpoint_stabilizers;
  std::vector<MonitoredStabilizer> nonlocal_stabilizers;
  /// Remaining fused (PF interior) or transformed (CC) stabilizers.
  std::vector<MonitoredStabilizer> other_stabilizers;
  /// CC unitary, in application order.
  std::vector<CliffordGate> unitary;
};

struct DefectFragment {
  Circuit circuit;
  DefectSpec spec;
};

/// Measures the PF (or PF*) observable on each site, then applies the
/// stabilizer-valued feed-forward that maps every outcome onto the zero
/// sector. New cregs start at creg_base. Fused stabilizers are the minimal
/// commuting products of the touched book entries with the measured site
/// factors stripped; the leftover kernel direction is the nonlocal one.
DefectFragment pf_defect_circuit(const TorusLattice &lat,
                                 const StabilizerBook &book,
                                 const std::vector<int> &sites, DefectKind kind,
                                 int creg_base, const std::string &name = "pf");

/// KW, then C and CX(s_i -> sigma_i) per site, then KW^dag. U^2 = 1.
std::vector<CliffordGate> cc_unitary(const CCRibbon &r);
/// Gates plus the transformed stabilizers. The heaviest transformed A and
/// B become the nonlocal endpoints; they are the only ones that grow with
/// the ribbon length.
DefectFragment cc_defect_circuit(const TorusLattice &lat,
                                 const StabilizerBook &book, const CCRibbon &r,
                                 const std::string &name = "cc");
/// Re-applies U, which removes the pair and reveals its internal charge.
Circuit fuse_cc_pair(const TorusLattice &lat, const DefectSpec &spec,
                     int n_total = -1);

/// Applies a PF fragment's stabilizer update to the book.
void update_book_pf(StabilizerBook &book, const DefectSpec &spec);
/// Applies the CC conjugation to the book and flags its endpoints.
void update_book_cc(StabilizerBook &book, const DefectSpec &spec);

} // namespace ztoric
