#pragma once

#include "rpsim/common.hpp"
#include "rpsim/tile.hpp"

#include <string>
#include <vector>

namespace rpsim {

struct CsConfig {
    int n_data = 3;
    int n_anc = 4;
    int n_comm = 1;
};

struct SsConfig {
    int n_data = 0; // 0: derive as cs.n_data + 2 * cs.n_anc
    int n_comm = 0; // 0: derive as cs.n_comm
};

/*
 * Architecture parameters: segment counts, per-segment tile allocation, the
 * per-segment qubit cap and the total physical-qubit budget. Storage
 * segments carry no ancilla tiles; by default their data allocation absorbs
 * the computational segments' ancilla share at the 1:2 conversion ratio.
 */
struct ArchConfig {
    int n_seg = 1;
    int n_cs = 1;
    CsConfig cs;
    SsConfig ss;
    int n_ec = 1;                  // values other than 1 are rejected
    int seg_qubit_cap = 5000;      // 5,000 (small) or 10,000 (large) segments
    long long budget_ntq = 1'500'000;

    SsConfig effective_ss() const;
    void validate() const; // structural checks only, no budget arithmetic

    std::string to_json() const;
    static ArchConfig from_json(const std::string& text);
    static ArchConfig load(const std::string& path);
};

// Total physical qubits the configuration consumes.
long long qubit_count(const ArchConfig& cfg);
long long segment_qubit_count(const ArchConfig& cfg, bool computational);

struct Segment {
    bool computational;
    int n_data;
    int n_anc;
    int n_comm;
    // Physical qubits per tile; reallocation-aware.
    std::vector<int> data_tile_qubits;
    std::vector<int> anc_tile_qubits;

    // Linear in-segment tile positions: data tiles first, then ancilla,
    // communication, error correction.
    int tile_pos_data(int i) const { return i; }
    int tile_pos_anc(int i) const { return n_data + i; }
};

enum class ReallocDirection { AncToData, DataToAnc };

/*
 * A fully built machine: segments of tiles plus the optical switch tree.
 * Mutated only by the scheduler that owns it; independent runs build
 * independent machines against the shared (read-only) tile database.
 */
struct Machine {
    ArchConfig cfg;
    int switch_height = 1;
    std::vector<Segment> segments;
    const TilePerfDatabase* db = nullptr;

    // Global data-tile rows (for mapping and timeline rendering).
    std::vector<int> data_row_base; // per segment
    int total_data_tiles = 0;

    // Occupancy used by the reallocation precondition; set by assign_tiles.
    std::vector<std::vector<int>> data_occupant; // qubit id or -1

    int data_row(int seg, int slot) const { return data_row_base[seg] + slot; }
    long long physical_qubits() const;
};

Machine build_machine(const ArchConfig& cfg, const TilePerfDatabase& db);

// Converts one idle ancilla tile into two data tiles or two idle data tiles
// back into one ancilla tile. Physical qubit count is preserved.
void reallocate_tile(Machine& machine, int segment_id, ReallocDirection direction);

int switch_height_for(int n_seg);

} // namespace rpsim
