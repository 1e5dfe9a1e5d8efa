/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#pragma once

#include "json.hpp"
#include "ztoric/circuit.hpp"

namespace ztoric {

using json = nlohmann::ordered_json;

inline constexpr int kCircuitSchemaVersion = 1;

/// Sparse form {"phase": k, "terms": [{"site": i, "x": a, "z": b}, ...]}.
json weyl_to_json(const WeylOp &w);
WeylOp weyl_from_json(const json &j, int d, int n);

json circuit_to_json(const Circuit &c);
/// Throws std::invalid_argument on schema violations.
Circuit circuit_from_json(const json &j);

json snapshot_to_json(const PlaquetteSnapshot &s);

} // namespace ztoric
