/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#pragma once

#include <map>
#include <string>
#include <vector>

#include "ztoric/defects.hpp"
#include "ztoric/json_io.hpp"

namespace ztoric {

struct Frame {
  std::string label;
  /// Circuit length when the frame was taken.
  size_t circuit_length = 0;
  std::vector<MonitoredStabilizer> book;
  std::vector<PlaquetteSnapshot> snapshots;
};

/// Exponent of each local stabilizer that is definitely excited in a
/// noiseless frame, keyed by label.
std::map<std::string, int> frame_excitations(const Frame &f,
                                             bool include_nonlocal = false);

/// A circuit built step by step alongside its noiseless tableau, with the
/// stabilizer book kept in sync.
class Experiment {
public:
  explicit Experiment(const TorusLattice &lat, int ancillas = 0,
                      uint64_t seed = 1);

  const TorusLattice &lattice() const { return lat_; }
  int n_total() const { return n_; }
  const StabilizerBook &book() const { return book_; }
  const Circuit &circuit() const { return circ_; }
  const StabilizerTableau &state() const { return state_; }
  const std::vector<int> &cregs() const { return cregs_; }
  const std::vector<Frame> &frames() const { return frames_; }
  const std::vector<DefectSpec> &defects() const { return defects_; }
  const DefectSpec &defect(const std::string &name) const;

  void prepare();
  const DefectSpec &add_pf(const std::vector<int> &sites, DefectKind kind,
                           const std::string &name);
  const DefectSpec &add_cc(const CCRibbon &r, const std::string &name);
  /// Re-applies the named CC unitary; its endpoints become plain again.
  void fuse_cc(const std::string &name);
  void apply(const WeylOp &w);
  /// Runs a fragment (cregs numbered from 0) and appends it.
  void run(const Circuit &fragment);
  /// Gates without feed-forward; with conjugate_book the monitored set is
  /// carried along.
  void apply_gates(const std::vector<CliffordGate> &gates,
                   bool conjugate_book);

  /// <S> = omega^k for a monitored stabilizer; -1 when not definite.
  int exponent(const std::string &label) const;
  /// Single-site Weyl operator that shifts `a` by delta_a, changes `b`, and
  /// commutes with every other local monitored stabilizer. Throws if none.
  WeylOp find_hop(const std::string &a, const std::string &b,
                  int delta_a) const;
  /// Moves the excitation of `from` onto `to`.
  WeylOp move(const std::string &from, const std::string &to);
  /// Creates `species_exponent` at `at` and its partner at `partner`.
  WeylOp create(const std::string &at, const std::string &partner,
                int exponent);

  const Frame &snapshot(const std::string &label);

private:
  TorusLattice lat_;
  int n_;
  StabilizerBook book_;
  Circuit circ_;
  StabilizerTableau state_;
  std::vector<int> cregs_;
  std::vector<Frame> frames_;
  std::vector<DefectSpec> defects_;
};

/// Named, serializable step list. Steps are JSON objects keyed by "op":
///  prepare | pf {sites, kind, name} | cc {start, length, name} |
///  fuse {name} | create {at, partner, species} | move {path} |
///  weyl {terms: [{site: [x,y], x, z}]} | gates {gates, conjugate_book} |
///  snapshot {label}
struct ExperimentScript {
  std::string name;
  /// Figure tag the preset reproduces.
  std::string citation;
  int Lx = 6, Ly = 4;
  int ancillas = 0;
  std::vector<json> steps;
};

json script_to_json(const ExperimentScript &s);
ExperimentScript script_from_json(const json &j);
Experiment run_script(const ExperimentScript &s, uint64_t seed = 1);

std::vector<std::string> preset_names();
/// The 4x4 braid shared by the two Fig. 4 presets: the partner of a fixed
/// anyon is carried once through a CC ribbon (cc = true) or through a PF
/// and a PF* defect, then fused back. `moved` is the carried species.
ExperimentScript fig4_script(bool cc, Species moved);
/// Throws std::invalid_argument for unknown names.
ExperimentScript preset(const std::string &name);

struct NoiseModel {
  double p1 = 0.0;
  double p2 = 0.0;
  double p_meas = 0.0;
  bool any() const { return p1 > 0 || p2 > 0 || p_meas > 0; }
};

/// Depolarizing noise after every gate; measurement error as a one-site
/// depolarizing channel just before each measurement.
Circuit with_noise(const Circuit &c, const NoiseModel &nm);

/// Frames re-estimated from shots: the circuit prefix of each frame, with
/// noise, followed by a measurement of every monitored stabilizer.
std::vector<Frame> sampled_frames(const Experiment &e, const NoiseModel &nm,
                                  long shots, uint64_t seed, int threads);

json frame_to_json(const Frame &f);

// ------------------------------------------------------- topological qutrit

struct TopoQutrit {
  Experiment exp;
  int ancilla = -1;
  /// Charge loop crossing both defect lines (X_ent X_ent^dag).
  WeylOp L;
  /// Flux loop around one pair; shifts the L sector by one.
  WeylOp XL;
  /// Flux loop around both pairs (Z_ent Z_ent).
  WeylOp ZZ;
  /// Nonlocal A endpoints of the two pairs and their product.
  std::vector<std::string> a_endpoints;
  WeylOp correlator;
};

/// Two CC pairs on 6x4 ("6x4") or 6x2 ("6x2") plus one ancilla.
TopoQutrit build_topo_qutrit(const std::string &variant, uint64_t seed = 1);
/// Ancilla H, controlled transport of a charge along L, H^dag, ancilla Z
/// measurement into a new creg. Returns that creg.
int topo_injection(TopoQutrit &q);

} // namespace ztoric
