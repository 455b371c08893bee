#pragma once

#include "rpsim/report.hpp"

#include <string>
#include <vector>

namespace rpsim {

struct SweepGrid {
    std::vector<int> n_data{3, 6};
    std::vector<int> n_anc{2, 4};
    std::vector<int> n_comm{1, 2};
    std::vector<int> n_cs{1, 2};
};

struct SweepRow {
    ArchConfig cfg;
    bool feasible = false;
    std::string violation; // set when infeasible
    usec t_total = 0;
    prob p_fail = 0;
    CriticalPathBreakdown breakdown;
    std::array<prob, kNoiseSourceCount> components{};
    long long qubits = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;

    std::string to_csv() const;
    std::string to_json() const;
};

/*
 * One full pipeline run per feasible grid point; infeasible points are
 * recorded with their violation. Storage segments are appended as needed to
 * hold the circuit's qubits. Points run in parallel; rows come back sorted
 * by configuration key.
 */
SweepResult sweep(const BenchmarkSpec& bench, const SweepGrid& grid, long long budget,
                  int seg_cap, const DeviceParams& params, int threads = 0);

// Feasible configuration with minimal execution time; ties break toward
// fewer qubits, then the lexicographically smaller configuration. Throws
// NoFeasibleConfig when nothing fits.
std::pair<ArchConfig, SweepRow> optimize(const BenchmarkSpec& bench, const SweepGrid& grid,
                                         long long budget, int seg_cap,
                                         const DeviceParams& params, int threads = 0);

// Derives a full architecture from one grid point, appending storage
// segments for the remaining qubits. Throws ConfigError subclasses on caps.
ArchConfig derive_config(int n_data, int n_anc, int n_comm, int n_cs, uint32_t n_qubits,
                         long long budget, int seg_cap);

struct ShorEstimate {
    long long adder_calls = 0;
    double total_seconds = 0.0;
    double total_days = 0.0;
    bool feasible_5_months = false;
};

// Modular-exponentiation adder calls per problem size: 512 -> 1e6,
// 1024 -> 4e6, 2048 -> 16e6, sequential execution, plus one closing
// transform run. The feasibility budget is five 30-day months less a fixed
// 160,000 s reserve for that closing run.
ShorEstimate estimate_shor_runtime(int n_bits, double adder_seconds, double aqft_seconds);

inline constexpr double kFiveMonthsSeconds = 5.0 * 30.0 * 86400.0; // 12.96e6
inline constexpr double kTransformReserveSeconds = 160000.0;
inline constexpr double kShorDefaultAqftSeconds = 86400.0; // one day

} // namespace rpsim
