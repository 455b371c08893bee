#include "rpsim/report.hpp"

#include <json.hpp>

#include <chrono>

namespace rpsim {

using nlohmann::json;

std::string BenchmarkSpec::name() const {
    switch (kind) {
    case Kind::QRCA: return "qrca";
    case Kind::QCLA: return "qcla";
    case Kind::AQFT: return "aqft";
    }
    return "?";
}

BenchmarkSpec::Kind BenchmarkSpec::kind_from_name(const std::string& name) {
    if (name == "qrca")
        return Kind::QRCA;
    if (name == "qcla")
        return Kind::QCLA;
    if (name == "aqft")
        return Kind::AQFT;
    throw ConfigError("unknown benchmark: " + name + " (expected qcla, qrca or aqft)");
}

LogicalCircuit generate_benchmark(const BenchmarkSpec& spec) {
    switch (spec.kind) {
    case BenchmarkSpec::Kind::QRCA: return gen_qrca(spec.bits);
    case BenchmarkSpec::Kind::QCLA: return gen_qcla(spec.bits);
    case BenchmarkSpec::Kind::AQFT: return gen_aqft(spec.bits, spec.aqft);
    }
    throw ConfigError("unknown benchmark kind");
}

namespace {

// Prefixes errors with the pipeline stage, keeping their class so callers
// can still tell infeasibility from malfunction.
template <typename F>
auto stage(const char* name, F&& f) {
    auto tag = [&](const char* what) { return std::string(name) + ": " + what; };
    try {
        return f();
    } catch (const BudgetExceeded& e) {
        throw BudgetExceeded(tag(e.what()));
    } catch (const SegmentCapExceeded& e) {
        throw SegmentCapExceeded(tag(e.what()));
    } catch (const TooManySegments& e) {
        throw TooManySegments(tag(e.what()));
    } catch (const InsufficientDataTiles& e) {
        throw InsufficientDataTiles(tag(e.what()));
    } catch (const SimError& e) {
        throw SimError(tag(e.what()));
    }
}

} // namespace

RunResult run_pipeline_on(const LogicalCircuit& expanded, const BenchmarkSpec& bench,
                          const ArchConfig& cfg, const DeviceParams& params,
                          const RunOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();

    RunResult r;
    r.bench = bench;
    r.cfg = cfg;
    r.params = params;
    r.n_qubits = expanded.n_qubits;
    r.n_gates = expanded.gates.size();

    const TilePerfDatabase db =
        stage("calibrate", [&] { return calibrate_database(DeviceParams::baseline()); });
    Machine machine = stage("build-machine", [&] { return build_machine(cfg, db); });
    const auto graph = stage("map", [&] { return build_interaction_graph(expanded); });
    const auto order = stage("map", [&] { return linear_arrange(graph); });
    // Every circuit qubit gets a tile, interacting or not.
    std::vector<uint32_t> full_order = order;
    {
        std::vector<bool> seen(expanded.n_qubits, false);
        for (uint32_t q : order)
            seen[q] = true;
        for (uint32_t q = 0; q < expanded.n_qubits; ++q)
            if (!seen[q])
                full_order.push_back(q);
    }
    r.map = stage("map", [&] { return assign_tiles(full_order, machine); });
    r.schedule = stage("schedule",
                       [&] { return schedule(expanded, machine, r.map, params, options.sched); });
    stage("error-correction", [&] {
        insert_error_correction(r.schedule, machine, params, options.sched);
        return 0;
    });
    r.failure = stage("analyze", [&] { return circuit_failure(r.schedule, db, params); });
    r.clamped = r.schedule.clamped;

    r.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

RunResult run_pipeline(const BenchmarkSpec& bench, const ArchConfig& cfg,
                       const DeviceParams& params, const RunOptions& options) {
    const LogicalCircuit circuit = stage("generate", [&] { return generate_benchmark(bench); });
    const LogicalCircuit expanded =
        stage("expand", [&] { return expand_fault_tolerant(circuit); });
    RunResult r = run_pipeline_on(expanded, bench, cfg, params, options);
    r.circuit_depth = expanded.depth();
    return r;
}

ArchConfig default_config_for(uint32_t n_qubits, int seg_cap, long long budget) {
    ArchConfig cfg;
    cfg.seg_qubit_cap = seg_cap;
    cfg.budget_ntq = budget;
    cfg.cs.n_anc = 4;
    cfg.cs.n_comm = 1;

    // Largest single computational segment that fits the cap.
    const long long fixed = build_tile(TileType::Ancilla).physical_qubits * 4 +
                            build_tile(TileType::Communication).physical_qubits +
                            build_tile(TileType::ErrorCorrection).physical_qubits;
    const int max_data = static_cast<int>((seg_cap - fixed) / build_tile(TileType::Data).physical_qubits);
    if (max_data < 1)
        throw ConfigError("segment cap too small for a default machine");

    if (static_cast<int>(n_qubits) <= max_data) {
        cfg.n_seg = cfg.n_cs = 1;
        cfg.cs.n_data = std::max(1, static_cast<int>(n_qubits));
    } else {
        cfg.cs.n_data = max_data;
        cfg.n_seg = cfg.n_cs = static_cast<int>((n_qubits + max_data - 1) / max_data);
    }
    return cfg;
}

std::string RunResult::report_json() const {
    json j;
    j["tool_version"] = kToolVersion;
    j["benchmark"] = {{"name", bench.name()},
                      {"bits", bench.bits},
                      {"qubits", n_qubits},
                      {"gates", n_gates},
                      {"depth", circuit_depth}};
    if (bench.kind == BenchmarkSpec::Kind::AQFT)
        j["benchmark"]["aqft"] = {{"k_max", bench.aqft.k_max},
                                  {"seq_len", bench.aqft.seq_len},
                                  {"t_count", bench.aqft.t_count}};
    j["arch"] = json::parse(cfg.to_json());
    j["arch"]["physical_qubits"] = qubit_count(cfg);
    j["device_params"] = json::parse(params.to_json());

    const auto& b = schedule.breakdown;
    j["t_total_us"] = b.t_total;
    j["breakdown_us"] = {{"t_anc", b.t_anc},
                         {"t_shut", b.t_shut},
                         {"t_tel", b.t_tel},
                         {"t_swp", b.t_swp},
                         {"t_gate", b.t_gate}};

    json comp, counts, shares;
    double sum = 0.0;
    for (int s = 0; s < kNoiseSourceCount; ++s)
        sum += failure.component[s];
    for (int s = 0; s < kNoiseSourceCount; ++s) {
        const char* name = noise_source_name(static_cast<NoiseSource>(s));
        comp[name] = failure.component[s];
        counts[name] = failure.op_count[s];
        shares[name] = sum > 0.0 ? failure.component[s] / sum : 0.0;
    }
    j["p_fail"] = failure.p_fail;
    j["failure_components"] = comp;
    j["failure_shares"] = shares;
    j["op_counts"] = counts;
    j["wall_seconds"] = wall_seconds;
    if (clamped)
        j["warning"] = "probabilities clamped to [0,1)";
    return j.dump(2);
}

} // namespace rpsim
