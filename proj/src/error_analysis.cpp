#include "rpsim/error_analysis.hpp"

#include <algorithm>
#include <cmath>

namespace rpsim {

namespace {

prob idle_error(usec window, usec t_coh) {
    const double raw = -std::expm1(-window / t_coh);
    return raw * raw;
}

// Appends one Memory record per idle window of each occupied data row.
void charge_memory_exposure(Schedule& sched, const DeviceParams& params) {
    std::vector<std::vector<std::pair<usec, usec>>> busy(sched.total_rows);
    for (const auto& op : sched.ops)
        if (op.row >= 0 && op.source != NoiseSource::Memory)
            busy[op.row].push_back({op.t_start, op.t_finish});

    for (int row = 0; row < sched.total_rows; ++row) {
        auto& b = busy[row];
        std::sort(b.begin(), b.end());
        for (const auto& span : sched.row_occupied[row]) {
            usec cursor = span.first;
            auto emit = [&](usec from, usec to) {
                if (to - from <= 0)
                    return;
                ScheduledOp mem;
                mem.gate_id = UINT32_MAX;
                mem.op = LogicalOp::MemoryIdle;
                mem.t_ready = from;
                mem.t_start = from;
                mem.t_finish = to;
                mem.p_fail = idle_error(to - from, params.t_coh);
                mem.source = NoiseSource::Memory;
                mem.row = row;
                sched.ops.push_back(mem);
            };
            for (const auto& iv : b) {
                if (iv.second <= span.first || iv.first >= span.second)
                    continue;
                if (iv.first > cursor)
                    emit(cursor, iv.first);
                cursor = std::max(cursor, iv.second);
            }
            if (span.second > cursor)
                emit(cursor, span.second);
        }
    }
    sched.memory_charged = true;
}

} // namespace

FailureReport circuit_failure(Schedule& schedule, const TilePerfDatabase&,
                              const DeviceParams& params) {
    if (!schedule.memory_charged)
        charge_memory_exposure(schedule, params);

    // log(1-p) sums per source; the total composes from the same sums so
    // the product identity holds by construction.
    std::array<double, kNoiseSourceCount> logsum{};
    FailureReport rep;
    for (const auto& op : schedule.ops) {
        if (!(op.p_fail >= 0.0 && op.p_fail < 1.0))
            throw SimError("operation failure probability outside [0, 1)");
        const int s = static_cast<int>(op.source);
        logsum[s] += std::log1p(-op.p_fail);
        ++rep.op_count[s];
    }
    double total_log = 0.0;
    for (int s = 0; s < kNoiseSourceCount; ++s) {
        rep.component[s] = -std::expm1(logsum[s]);
        total_log += logsum[s];
    }
    rep.p_fail = -std::expm1(total_log);
    return rep;
}

std::optional<std::pair<NoiseSource, double>> dominant_source(const FailureReport& report) {
    if (report.p_fail <= 0.0)
        return std::nullopt;
    int best = 0;
    double sum = 0.0;
    for (int s = 0; s < kNoiseSourceCount; ++s) {
        sum += report.component[s];
        if (report.component[s] > report.component[best])
            best = s;
    }
    if (sum <= 0.0)
        return std::nullopt;
    return std::make_pair(static_cast<NoiseSource>(best), report.component[best] / sum);
}

} // namespace rpsim
