#pragma once

#include "rpsim/common.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace rpsim {

enum class GateKind : uint8_t {
    X,
    Z,
    H,
    CNOT,
    Toffoli,
    T,
    TDagger,
    Measure,
    PrepMagicT,
    PrepMagicToffoli,
    TeleportIntoMagic,
    ECRound,
};
inline constexpr int kGateKindCount = 12;

const char* gate_kind_name(GateKind k);
GateKind gate_kind_from_name(const std::string& name);
bool is_clifford(GateKind k);

struct LogicalGate {
    uint32_t id;
    GateKind kind;
    std::array<uint32_t, 3> q; // operands, first n_ops valid
    uint8_t n_ops;
};

/*
 * A DAG of logical gates over logical-qubit operands. Gates are stored in
 * topological order; dependencies are kept as a CSR list of immediate
 * predecessors (two gates sharing an operand are ordered by an edge, and a
 * magic-state teleport depends on its preparation). Immutable once built.
 */
struct LogicalCircuit {
    uint32_t n_qubits = 0;
    std::vector<LogicalGate> gates;
    std::vector<uint32_t> pred_offsets; // size gates+1
    std::vector<uint32_t> preds;

    // Register annotations used by the classical adder oracle.
    std::vector<uint32_t> reg_a, reg_b, reg_sum;

    // Generator bookkeeping (zero when not applicable).
    uint64_t controlled_rotation_count = 0;
    uint64_t rotation_count = 0; // small-angle rotation sequences emitted

    size_t size() const { return gates.size(); }
    std::vector<uint32_t> preds_of(uint32_t gate_index) const;
    std::vector<std::pair<uint32_t, uint32_t>> edges() const; // (pred, succ)

    uint64_t count_kind(GateKind k) const;
    uint32_t depth() const; // longest path, unit gate weights

    // Throws CircuitError when operands are out of range, arity is wrong,
    // or an edge points forward.
    void validate() const;

    void serialize(std::ostream& out) const;
    std::string serialize() const;
    static LogicalCircuit parse(std::istream& in);
    static LogicalCircuit parse_string(const std::string& text);
};

/*
 * Incremental builder. add() appends a gate, wiring dependency edges to the
 * previous gate touching each operand; extra predecessors can be attached
 * explicitly (preparation -> teleport links).
 */
class CircuitBuilder {
public:
    explicit CircuitBuilder(uint32_t n_qubits);

    uint32_t add(GateKind kind, std::initializer_list<uint32_t> ops);
    uint32_t add(GateKind kind, const uint32_t* ops, int n_ops, uint32_t extra_pred = kNoPred);

    LogicalCircuit take();

    static constexpr uint32_t kNoPred = UINT32_MAX;

private:
    LogicalCircuit circ_;
    std::vector<uint32_t> last_touch_;
};

// Simulates a classical reversible circuit (X/CNOT/Toffoli only) on basis
// states and returns the decoded sum register. Throws CircuitError for
// non-classical gates or missing register annotations.
uint64_t verify_adder_semantics(const LogicalCircuit& circuit, uint64_t a, uint64_t b);

} // namespace rpsim
