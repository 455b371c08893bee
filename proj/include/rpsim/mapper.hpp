#pragma once

#include "rpsim/arch.hpp"
#include "rpsim/circuit.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rpsim {

/*
 * Weighted interaction graph: edge weight counts the multi-qubit gates
 * joining each qubit pair (a three-qubit gate contributes to all three
 * pairs).
 */
struct InteractionGraph {
    uint32_t n = 0;
    // CSR adjacency, symmetric.
    std::vector<uint32_t> offsets;
    std::vector<uint32_t> nbr;
    std::vector<double> weight;

    double edge_weight(uint32_t u, uint32_t v) const;
    std::vector<std::vector<uint32_t>> components() const;
};

InteractionGraph build_interaction_graph(const LogicalCircuit& circuit);

// Arrangement cost: sum over edges of w(u,v) * |pi(u) - pi(v)|.
double arrangement_cost(const InteractionGraph& g, const std::vector<uint32_t>& order);

/*
 * Linear-arrangement heuristic: spectral seeding refined by swap
 * hill-climbing, disconnected components arranged independently and
 * concatenated by descending size. Deterministic; ties break toward lower
 * qubit ids. Returns qubit ids in arrangement order.
 */
std::vector<uint32_t> linear_arrange(const InteractionGraph& g);

struct TilePos {
    int32_t seg = -1;
    int32_t slot = -1;
    bool operator==(const TilePos&) const = default;
};

struct QubitMap {
    std::vector<TilePos> position; // by qubit id

    std::string to_json() const;
    static QubitMap from_json(const std::string& text);
};

/*
 * Fills data tiles with qubits in arrangement order, computational segments
 * first, and marks the machine's occupancy. Throws InsufficientDataTiles
 * reporting the shortfall.
 */
QubitMap assign_tiles(const std::vector<uint32_t>& ordering, Machine& machine);

} // namespace rpsim
