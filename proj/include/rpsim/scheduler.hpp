#pragma once

#include "rpsim/arch.hpp"
#include "rpsim/circuit.hpp"
#include "rpsim/device.hpp"
#include "rpsim/mapper.hpp"
#include "rpsim/tile.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace rpsim {

enum class NoiseSource : uint8_t { Shuttling, Teleportation, Memory, Gate };
inline constexpr int kNoiseSourceCount = 4;
const char* noise_source_name(NoiseSource s);

/*
 * One scheduled operation. t_ready is when the gate became executable
 * (dependencies satisfied), t_start when operands and resources were
 * actually available, and the four delay fields decompose the difference:
 * t_start - t_ready = d_anc + d_shut + d_tel + d_swp.
 *
 * Primary operations are the gates of the circuit and carry the
 * critical-path accounting; auxiliary operations (shuttle transits, EPR
 * generations, relocation teleports, magic-state preparations, error
 * correction, idle exposure) carry noise but do not commit to the breakdown.
 */
struct ScheduledOp {
    uint32_t gate_id = UINT32_MAX;
    LogicalOp op{};
    usec t_ready = 0, t_start = 0, t_finish = 0;
    usec d_anc = 0, d_shut = 0, d_tel = 0, d_swp = 0;
    prob p_fail = 0;
    NoiseSource source = NoiseSource::Gate;
    int32_t seg = -1;
    int32_t row = -1;     // data-tile row of the primary operand, -1 if none
    int32_t src_row = -1; // relocations: origin row
    int32_t dst_row = -1; // relocations: destination row
    bool primary = false;
};

struct CriticalPathBreakdown {
    usec t_anc = 0, t_shut = 0, t_tel = 0, t_swp = 0, t_gate = 0;
    usec t_total = 0;
    usec sum() const { return t_anc + t_shut + t_tel + t_swp + t_gate; }
};

/*
 * Proportional-split update: when an operation extends the critical path by
 * dT, each component gains its share (delay or execution time) over
 * (total delay + execution time) of dT. Returns the input unchanged when the
 * operation does not extend the path.
 */
CriticalPathBreakdown update_critical_path(const CriticalPathBreakdown& b, const ScheduledOp& op);

struct SchedulerOptions {
    // Idle threshold that triggers an error-correction round; <= 0 derives
    // one error-correction latency at the run's device parameters.
    usec ec_idle_threshold = -1.0;
};

struct Schedule {
    std::vector<ScheduledOp> ops;
    CriticalPathBreakdown breakdown;
    int total_rows = 0;
    usec t_total() const { return breakdown.t_total; }

    // Occupancy spans per data row, for error-correction insertion and
    // memory-exposure accounting: (start, end) with end < 0 meaning "until
    // the end of the run".
    std::vector<std::vector<std::pair<usec, usec>>> row_occupied;

    bool memory_charged = false;
    bool clamped = false; // some probability was clamped into [0, 1)

    void serialize(std::ostream& out) const;
    std::string serialize() const;
    static Schedule parse(std::istream& in);
};

/*
 * Resource-constrained list scheduling of a fault-tolerantly expanded
 * circuit. Ready gates are ordered by longest remaining downstream latency
 * (ties toward lower gate id). Non-Clifford teleports gather their operands
 * into one computational segment, paying relocation and magic-state waits;
 * Clifford two-qubit gates run in place (intra-segment shuttle) or across
 * segments over an entanglement link. Deterministic for fixed inputs.
 */
Schedule schedule(const LogicalCircuit& circuit, Machine& machine, const QubitMap& map,
                  const DeviceParams& params, const SchedulerOptions& options = {});

/*
 * Inserts error-correction rounds into data-tile idle gaps longer than the
 * threshold, serialized on each segment's single error-correction tile.
 * Never extends the schedule.
 */
void insert_error_correction(Schedule& schedule, Machine& machine, const DeviceParams& params,
                             const SchedulerOptions& options = {});

} // namespace rpsim
