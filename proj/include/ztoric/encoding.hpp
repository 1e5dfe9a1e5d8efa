/*******************************************************************************
 * Copyright (c) 2026 The ztoric Authors.                                      *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

#pragma once

#include <utility>

namespace ztoric {

// Two-qubit encoding of a qutrit: |0> = |00>, |1> = |10>, |2> = |11>,
// |nc> = |01>, written |q0 q1>. Inside a pair q0 is the low bit, so the
// local basis index is q0 + 2 q1.
inline constexpr int kEncodedIndex[3] = {0, 1, 3};
inline constexpr int kLeakIndex = 2;
/// Qubits of qutrit k.
inline int enc_q0(int k) { return 2 * k; }
inline int enc_q1(int k) { return 2 * k + 1; }
/// Qubit bits (q0, q1) of a qutrit value.
inline std::pair<int, int> encode_value(int v) {
  return {v > 0 ? 1 : 0, v > 1 ? 1 : 0};
}
/// Qutrit value of a bit pair, or -1 for |nc>.
inline int decode_bits(int q0, int q1) {
  if (q0 == 0)
    return q1 == 0 ? 0 : -1;
  return q1 == 0 ? 1 : 2;
}

} // namespace ztoric
