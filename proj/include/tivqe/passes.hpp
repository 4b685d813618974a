#pragma once

#include <cstdint>

#include "tivqe/circuit.hpp"

namespace tivqe {

/// Fixed-point peephole simplification: inverse-pair removal (CNOT pairs,
/// HH, S/Sdg, XX), z-rotation merging across CNOT controls, CNOT-pair
/// cancellation through commuting gates (z-diagonals on the control wire,
/// x-type blocks such as H S H on the target wire, star-mates sharing the
/// control or target), and the two-CNOT-with-interposed-Hadamard identity
///   CNOT(c,t) H(c) CNOT(c,t) = S(c) H(t) CNOT(t,c) Sdg(c) S(t)
/// which also absorbs surrounding z rotations. Unitary preserved up to
/// global phase; never adds entanglers.
Circuit cancel_pass(const Circuit& c);

/// Rewrite CNOT / small-rotation motifs into arbitrary-angle XX gates:
///   CNOT(a,t) Rz(x)@t CNOT(b,t) Rz(-x)@t CNOT(a,t)
///     -> H(a)H(t) XX(a,t;x) H(t) CNOT(b,t) H(t) XX(a,t;-x) H(t)H(a)
/// and the empty-middle form CNOT(a,t) Rz(x)@t [G(a)] CNOT(a,t) where the
/// interposed control-wire gates are diagonal or reduce to z.H.z, which
/// extracts one XX(x) plus a single remaining CNOT. Parameter bindings ride
/// along onto the XX angles.
Circuit convert_cnot_to_xx(const Circuit& c);

/// Commute the reference-preparation X gates through the whole circuit and
/// record them as classical bit flips, so filled orbitals start in |0>.
/// Rotation angles flip sign where the frame anticommutes; a leftover Z
/// frame is deposited as trailing Rz(pi) gates.
Circuit encode_filled_as_zero(const Circuit& c, uint32_t reference_wires);

}  // namespace tivqe
