#pragma once

#include "rpsim/device.hpp"
#include "rpsim/scheduler.hpp"
#include "rpsim/tile.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <utility>

namespace rpsim {

/*
 * Circuit failure probability and its decomposition by noise source.
 * Components compose multiplicatively with the total:
 *   1 - p_fail = prod_source (1 - component[source]).
 */
struct FailureReport {
    prob p_fail = 0.0;
    std::array<prob, kNoiseSourceCount> component{};     // by NoiseSource
    std::array<uint64_t, kNoiseSourceCount> op_count{};  // by NoiseSource

    prob comp(NoiseSource s) const { return component[static_cast<int>(s)]; }
    uint64_t count(NoiseSource s) const { return op_count[static_cast<int>(s)]; }
};

/*
 * Folds per-operation failure probabilities into the circuit failure
 * probability, tracking each operation's noise source. Memory exposure is
 * charged on first call: one record per idle window of an occupied data tile
 * (between consecutive operations or error-correction rounds, and up to the
 * end of the run).
 */
FailureReport circuit_failure(Schedule& schedule, const TilePerfDatabase& db,
                              const DeviceParams& params);

// Largest component and its share of the component sum; empty when the
// failure probability is zero.
std::optional<std::pair<NoiseSource, double>> dominant_source(const FailureReport& report);

} // namespace rpsim
