#pragma once

#include "rpsim/common.hpp"
#include "rpsim/device.hpp"

#include <array>
#include <map>
#include <string>
#include <utility>

namespace rpsim {

enum class TileType { Data, Ancilla, ErrorCorrection, Communication };

// An L2 functional unit assembled from L1 code blocks.
struct TileSpec {
    TileType type;
    int l1_tiles;
    int physical_qubits;
    int cells; // trap cells, at most 600 per tile
};

TileSpec build_tile(TileType type);
const char* tile_type_name(TileType type);

// Logical operations the database prices.
enum class LogicalOp : uint8_t {
    PauliXZ,
    Hadamard,
    CNOT,
    TransversalToffoli,
    CatStatePrep7,
    Measurement,
    L2ErrorCorrection,
    L1ErrorCorrection,
    PrepZeroPlus,
    PrepTMagic,
    PrepToffoliMagic,
    EPRGeneration,
    TeleportData,
    // Schedule-record kinds with no database entry; not part of the
    // calibrated table.
    ShuttleMove,
    MemoryIdle,
};
inline constexpr int kLogicalOpCount = 13;
inline constexpr int kScheduleOpKindCount = 15;

const char* logical_op_name(LogicalOp op);
LogicalOp logical_op_from_name(const std::string& name);

// Physical-operation classes the latency model is linear in.
enum class PhysClass : uint8_t {
    OneQubit,
    TwoQubit,
    ThreeQubit,
    Meas,
    EprGen,
    ShuttleCell,
    ShuttleTile,
};
inline constexpr int kPhysClassCount = 7;

// Physical error channels the failure model is quadratic in.
enum class ErrClass : uint8_t { Gate, Epr };

/*
 * Per-operation performance entry. Latency is a declared composition of
 * physical-operation counts; failure is a second-order (error-pair) model,
 * one coefficient per error channel:
 *
 *   latency(params) = sum_k latency_coeffs[k] * t_k(params)
 *   p_fail(params)  = sum_c fail_coeffs[c] * p_c(params)^2
 *
 * A distance-3 code corrects any single fault, so no first-order term.
 */
struct TilePerfEntry {
    LogicalOp op{};
    std::array<double, kPhysClassCount> latency_coeffs{};
    double fail_gate_coeff = 0.0;
    double fail_epr_coeff = 0.0;

    // tree_height scales the EPR-generation term by 2^(h-1); it is ignored
    // by every operation that has no such term.
    usec latency(const DeviceParams& params, int tree_height = 1) const;
    prob failure(const DeviceParams& params) const;
};

struct TilePerfDatabase {
    std::map<LogicalOp, TilePerfEntry> entries;
    DeviceParams calibration_params;

    const TilePerfEntry& at(LogicalOp op) const;

    std::string to_json() const;
    static TilePerfDatabase from_json(const std::string& text);
};

/*
 * Builds the database whose coefficients reproduce the reference performance
 * table at the given baseline: latencies exactly, failure probabilities
 * within 1% relative. Throws CalibrationError when the composition cannot
 * meet a target at the supplied baseline.
 */
TilePerfDatabase calibrate_database(const DeviceParams& baseline);

// (latency, p_fail) of one logical operation at the given parameters.
std::pair<usec, prob> logical_perf(const TilePerfDatabase& db, LogicalOp op,
                                   const DeviceParams& params);

// EPR-pair generation through a switch tree of the given height (1..3).
std::pair<usec, prob> logical_epr_perf(const TilePerfDatabase& db, const DeviceParams& params,
                                       int tree_height);

// Reference values the calibration must reproduce (latency_us, p_fail).
// Exposed so tests and the CLI table printer share one source.
struct TileCalibrationTarget {
    LogicalOp op;
    usec latency_us;   // at baseline, height-1 tree for EPR generation
    prob p_fail;
    bool is_reference; // false for entries priced by declared composition only
};
const std::array<TileCalibrationTarget, kLogicalOpCount>& tile_calibration_targets();

// Failure coefficient of a logical shuttle, per tile crossed:
// p = kShuttleFailCoeffPerTile * p_gate^2 per crossing.
inline constexpr double kShuttleFailCoeffPerTile = 60.0;

} // namespace rpsim
