#include "rpsim/explorer.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <sstream>
#include <thread>
#include <tuple>

namespace rpsim {

using nlohmann::json;

ArchConfig derive_config(int n_data, int n_anc, int n_comm, int n_cs, uint32_t n_qubits,
                         long long budget, int seg_cap) {
    ArchConfig cfg;
    cfg.cs = CsConfig{n_data, n_anc, n_comm};
    cfg.n_cs = n_cs;
    cfg.seg_qubit_cap = seg_cap;
    cfg.budget_ntq = budget;

    const SsConfig ss = cfg.effective_ss();
    const long long cs_capacity = static_cast<long long>(n_cs) * n_data;
    long long extra = static_cast<long long>(n_qubits) - cs_capacity;
    const int n_ss = extra > 0 ? static_cast<int>((extra + ss.n_data - 1) / ss.n_data) : 0;
    cfg.n_seg = n_cs + n_ss;
    cfg.validate();
    return cfg;
}

namespace {

std::tuple<int, int, int, int> config_key(const ArchConfig& c) {
    return {c.n_cs, c.cs.n_data, c.cs.n_anc, c.cs.n_comm};
}

} // namespace

SweepResult sweep(const BenchmarkSpec& bench, const SweepGrid& grid, long long budget,
                  int seg_cap, const DeviceParams& params, int threads) {
    SweepResult result;
    if (grid.n_data.empty() || grid.n_anc.empty() || grid.n_comm.empty() || grid.n_cs.empty())
        return result;

    const LogicalCircuit circuit = generate_benchmark(bench);
    const LogicalCircuit expanded = expand_fault_tolerant(circuit);

    struct Point {
        int n_data, n_anc, n_comm, n_cs;
    };
    std::vector<Point> points;
    for (int nd : grid.n_data)
        for (int na : grid.n_anc)
            for (int nc : grid.n_comm)
                for (int cs : grid.n_cs)
                    points.push_back({nd, na, nc, cs});

    result.rows.resize(points.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= points.size())
                return;
            const Point& pt = points[i];
            SweepRow& row = result.rows[i];
            try {
                row.cfg = derive_config(pt.n_data, pt.n_anc, pt.n_comm, pt.n_cs,
                                        expanded.n_qubits, budget, seg_cap);
                row.qubits = qubit_count(row.cfg);
                RunResult run = run_pipeline_on(expanded, bench, row.cfg, params);
                row.feasible = true;
                row.t_total = run.schedule.t_total();
                row.p_fail = run.failure.p_fail;
                row.breakdown = run.schedule.breakdown;
                row.components = run.failure.component;
            } catch (const SimError& e) {
                row.cfg.cs = CsConfig{pt.n_data, pt.n_anc, pt.n_comm};
                row.cfg.n_cs = pt.n_cs;
                row.cfg.n_seg = std::max(row.cfg.n_seg, pt.n_cs);
                row.feasible = false;
                row.violation = e.what();
            }
        }
    };

    int n_threads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::max(1, std::min<int>(n_threads, static_cast<int>(points.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }

    std::sort(result.rows.begin(), result.rows.end(),
              [](const SweepRow& a, const SweepRow& b) { return config_key(a.cfg) < config_key(b.cfg); });
    return result;
}

std::pair<ArchConfig, SweepRow> optimize(const BenchmarkSpec& bench, const SweepGrid& grid,
                                         long long budget, int seg_cap,
                                         const DeviceParams& params, int threads) {
    SweepResult res = sweep(bench, grid, budget, seg_cap, params, threads);
    const SweepRow* best = nullptr;
    for (const auto& row : res.rows) {
        if (!row.feasible)
            continue;
        if (!best || row.t_total < best->t_total ||
            (row.t_total == best->t_total &&
             (row.qubits < best->qubits ||
              (row.qubits == best->qubits && config_key(row.cfg) < config_key(best->cfg)))))
            best = &row;
    }
    if (!best)
        throw NoFeasibleConfig("no feasible configuration within the budget of " +
                               std::to_string(budget) + " qubits");
    return {best->cfg, *best};
}

std::string SweepResult::to_csv() const {
    std::ostringstream out;
    out << "n_cs,n_seg,n_data,n_anc,n_comm,n_ec,qubits,t_total_us,p_fail,"
           "t_anc_us,t_shut_us,t_tel_us,t_swp_us,t_gate_us,"
           "p_shut,p_tel,p_mem,p_gate,feasible,violation\n";
    char buf[512];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf,
                      "%d,%d,%d,%d,%d,%d,%lld,%.6f,%.17g,%.6f,%.6f,%.6f,%.6f,%.6f,"
                      "%.17g,%.17g,%.17g,%.17g,%d,",
                      r.cfg.n_cs, r.cfg.n_seg, r.cfg.cs.n_data, r.cfg.cs.n_anc, r.cfg.cs.n_comm,
                      r.cfg.n_ec, r.qubits, r.t_total, r.p_fail, r.breakdown.t_anc,
                      r.breakdown.t_shut, r.breakdown.t_tel, r.breakdown.t_swp,
                      r.breakdown.t_gate,
                      r.components[static_cast<int>(NoiseSource::Shuttling)],
                      r.components[static_cast<int>(NoiseSource::Teleportation)],
                      r.components[static_cast<int>(NoiseSource::Memory)],
                      r.components[static_cast<int>(NoiseSource::Gate)], r.feasible ? 1 : 0);
        out << buf;
        std::string v = r.violation;
        std::replace(v.begin(), v.end(), ',', ';');
        out << '"' << v << "\"\n";
    }
    return out.str();
}

std::string SweepResult::to_json() const {
    json rows_j = json::array();
    for (const auto& r : rows) {
        json row;
        row["config"] = json::parse(r.cfg.to_json());
        row["qubits"] = r.qubits;
        row["feasible"] = r.feasible;
        if (!r.feasible) {
            row["violation"] = r.violation;
        } else {
            row["t_total_us"] = r.t_total;
            row["p_fail"] = r.p_fail;
            row["breakdown_us"] = {{"t_anc", r.breakdown.t_anc},
                                   {"t_shut", r.breakdown.t_shut},
                                   {"t_tel", r.breakdown.t_tel},
                                   {"t_swp", r.breakdown.t_swp},
                                   {"t_gate", r.breakdown.t_gate}};
            row["failure_components"] = {
                {"Shuttling", r.components[static_cast<int>(NoiseSource::Shuttling)]},
                {"Teleportation", r.components[static_cast<int>(NoiseSource::Teleportation)]},
                {"Memory", r.components[static_cast<int>(NoiseSource::Memory)]},
                {"Gate", r.components[static_cast<int>(NoiseSource::Gate)]}};
        }
        rows_j.push_back(row);
    }
    return json{{"rows", rows_j}}.dump(2);
}

ShorEstimate estimate_shor_runtime(int n_bits, double adder_seconds, double aqft_seconds) {
    if (adder_seconds < 0 || aqft_seconds < 0)
        throw ConfigError("durations must be non-negative");
    ShorEstimate e;
    switch (n_bits) {
    case 512: e.adder_calls = 1'000'000; break;
    case 1024: e.adder_calls = 4'000'000; break;
    case 2048: e.adder_calls = 16'000'000; break;
    default:
        throw ConfigError("unsupported problem size: " + std::to_string(n_bits) +
                          " (expected 512, 1024 or 2048)");
    }
    e.total_seconds = static_cast<double>(e.adder_calls) * adder_seconds + aqft_seconds;
    e.total_days = e.total_seconds / 86400.0;
    e.feasible_5_months = e.total_seconds < (kFiveMonthsSeconds - kTransformReserveSeconds);
    return e;
}

} // namespace rpsim
