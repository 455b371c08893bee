#pragma once

#include "rpsim/common.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace rpsim {

/*
 * Physical device parameters. Latencies of the elementary trapped-ion
 * operations, their failure probabilities, the shuttling constants and the
 * qubit coherence time. Everything logical is derived from these.
 *
 * The defaults are the baseline technology point used throughout the tool.
 * Immutable after load; safe to share between concurrent runs.
 */
struct DeviceParams {
    usec t_1q = 1.0;          // single-qubit gate
    usec t_2q = 10.0;         // two-qubit (CNOT) gate
    usec t_3q = 100.0;        // three-qubit (Toffoli) gate
    usec t_meas = 100.0;      // measurement
    usec t_epr_gen = 5000.0;  // physical EPR-pair generation
    prob p_gate = 1e-7;       // gate/measurement failure probability
    prob p_epr = 1e-4;        // physical EPR-pair infidelity
    usec t_shutt_cell = 1.0;  // shuttle through one trap cell
    usec t_shutt_tile = 60.0; // logical-qubit shuttle across one tile
    usec t_coh = 1e10;        // coherence time (default applied when absent)

    // Optional per-class failure overrides for parameter-tuning studies.
    // When any is present the quadratic failure model uses the largest of
    // the per-class values as the effective gate error rate.
    std::optional<prob> p_gate_1q;
    std::optional<prob> p_gate_2q;
    std::optional<prob> p_gate_3q;
    std::optional<prob> p_gate_meas;

    static DeviceParams baseline() { return DeviceParams{}; }

    prob effective_p_gate() const;

    // Throws ConfigError naming the offending field.
    void validate() const;

    std::string to_json() const;
    static DeviceParams from_json(const std::string& text);
};

// F = exp(-t / t_coh). Rejects negative t.
double memory_fidelity(usec t, const DeviceParams& params);

// p = 1 - exp(-t / t_coh), a depolarizing channel split equally among
// bit-flip, phase-flip and combined errors. Rejects negative t.
prob memory_error_prob(usec t, const DeviceParams& params);

DeviceParams load_device_params(const std::string& path);
void save_device_params(const DeviceParams& params, const std::string& path);

} // namespace rpsim
