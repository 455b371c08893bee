#pragma once

#include "rpsim/arch.hpp"
#include "rpsim/benchmarks.hpp"
#include "rpsim/device.hpp"
#include "rpsim/error_analysis.hpp"
#include "rpsim/mapper.hpp"
#include "rpsim/scheduler.hpp"

#include <string>

namespace rpsim {

inline constexpr const char* kToolVersion = "0.1.0";

struct BenchmarkSpec {
    enum class Kind { QRCA, QCLA, AQFT } kind = Kind::QRCA;
    uint32_t bits = 16;
    AqftParams aqft;

    std::string name() const;
    static BenchmarkSpec::Kind kind_from_name(const std::string& name);
};

LogicalCircuit generate_benchmark(const BenchmarkSpec& spec);

struct RunOptions {
    SchedulerOptions sched;
};

struct RunResult {
    BenchmarkSpec bench;
    ArchConfig cfg;
    DeviceParams params;
    uint32_t n_qubits = 0;
    uint64_t n_gates = 0;        // fault-tolerant gate stream length
    uint32_t circuit_depth = 0;  // dependency depth of the expanded stream
    QubitMap map;
    Schedule schedule;
    FailureReport failure;
    double wall_seconds = 0.0;
    bool clamped = false; // true when a probability had to be clamped

    std::string report_json() const;
};

/*
 * The full pipeline: generate -> expand -> map -> schedule -> insert error
 * correction -> analyze. Errors from each stage are rethrown with the stage
 * name prepended.
 */
RunResult run_pipeline(const BenchmarkSpec& bench, const ArchConfig& cfg,
                       const DeviceParams& params, const RunOptions& options = {});

// As above but with a pre-built circuit (shared across explorer points).
RunResult run_pipeline_on(const LogicalCircuit& expanded, const BenchmarkSpec& bench,
                          const ArchConfig& cfg, const DeviceParams& params,
                          const RunOptions& options = {});

// A single-run default machine: all segments computational, enough data
// tiles for the circuit, respecting the segment cap and budget.
ArchConfig default_config_for(uint32_t n_qubits, int seg_cap = 10000,
                              long long budget = 1'500'000);

} // namespace rpsim
