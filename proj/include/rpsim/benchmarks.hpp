#pragma once

#include "rpsim/circuit.hpp"

namespace rpsim {

/*
 * Ripple-carry adder (in-place, one carry ancilla). Qubits: a[0..n),
 * b[0..n), one incoming-carry ancilla and one carry-out qubit; b ends up
 * holding the low n sum bits and the carry-out qubit the top bit. Uses
 * exactly 2n Toffoli and 5n+1 CNOT gates (plus 2n X gates), with strictly
 * nearest-neighbour operand structure.
 */
LogicalCircuit gen_qrca(uint32_t n);

/*
 * Carry-lookahead adder. Qubits: a[0..n), b[0..n), n carry qubits and the
 * propagate-product ancillas of the prefix tree (about 4n qubits in total).
 * The carry network is a logarithmic-depth prefix computation: generate
 * layer, propagate layer, fan-in product rounds, carry-merge rounds and a
 * back-fill round for the remaining carries, then the sum layer. No
 * uncomputation pass: ancillas are left dirty, which keeps the gate total at
 * 6n - 2*floor(log2 n) - 4 (power-of-two n) for a depth of ~3*log2 n.
 */
LogicalCircuit gen_qcla(uint32_t n);

struct AqftParams {
    uint32_t k_max = 8;     // retain controlled rotations down to angle pi/2^k_max
    uint32_t seq_len = 375; // gates per rotation-approximation sequence
    uint32_t t_count = 150; // T/Tdg gates within each sequence
};

/*
 * Truncated Fourier transform on n qubits. Each qubit gets a Hadamard
 * followed by controlled rotations to its k_max nearest predecessors; each
 * controlled rotation is emitted in decomposed form, two CNOTs around two
 * half-angle single-qubit rotations, and each such rotation expands to a
 * placeholder Clifford+T approximation sequence of seq_len gates containing
 * t_count T gates. Rotation sequences per controlled rotation: 2, so the
 * sequence count approaches 2*k_max*n for large n.
 */
LogicalCircuit gen_aqft(uint32_t n, const AqftParams& params = {});

/*
 * Rewrites Toffoli and T gates into fault-tolerant form: a magic-state
 * preparation with no data dependencies plus a teleport of the operands into
 * the prepared state. Clifford gates pass through unchanged.
 */
LogicalCircuit expand_fault_tolerant(const LogicalCircuit& circuit);

} // namespace rpsim
