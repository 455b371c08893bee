#include "rpsim/benchmarks.hpp"
#include "rpsim/error_analysis.hpp"
#include "rpsim/explorer.hpp"
#include "rpsim/report.hpp"
#include "rpsim/timeline_svg.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace rpsim;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n')
            std::cout << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write output file: " + path);
    out << text;
}

struct RunArgs {
    std::string circuit = "qrca";
    uint32_t bits = 16;
    std::string circuit_file;
    std::string arch_file;
    std::string dp_file;
    std::string out;
    std::string schedule_out;
    std::string map_out;
    std::string circuit_out;
    int ncs_override = 0;
    std::vector<int> cs_override;
    double ec_threshold = -1.0;
    int seg_cap = 10000;
    long long budget = 1'500'000;
    uint64_t seed = 0; // reserved; the pipeline is deterministic
    uint32_t aqft_kmax = 8, aqft_seq = 375, aqft_tcount = 150;
};

void add_run_flags(CLI::App* cmd, RunArgs& a, bool with_outputs, bool with_overrides = true) {
    cmd->add_option("--circuit", a.circuit, "Benchmark: qcla, qrca or aqft");
    cmd->add_option("--bits,-n", a.bits, "Benchmark bit width");
    cmd->add_option("--circuit-file", a.circuit_file, "Load a serialized circuit instead");
    cmd->add_option("--arch", a.arch_file, "Architecture configuration (JSON)");
    cmd->add_option("--dp", a.dp_file, "Device parameters (JSON)");
    cmd->add_option("--seg-cap", a.seg_cap, "Per-segment qubit cap (5000 or 10000)");
    cmd->add_option("--budget", a.budget, "Total physical-qubit budget");
    cmd->add_option("--seed", a.seed, "Reserved; runs are deterministic");
    cmd->add_option("--aqft-kmax", a.aqft_kmax, "Smallest retained rotation: pi/2^k");
    cmd->add_option("--aqft-seq-len", a.aqft_seq, "Rotation approximation sequence length");
    cmd->add_option("--aqft-t-count", a.aqft_tcount, "T gates per approximation sequence");
    if (with_overrides) {
        cmd->add_option("--ncs", a.ncs_override, "Override the computational segment count");
        cmd->add_option("--cs-config", a.cs_override,
                        "Override the segment tile mix as n_data,n_anc,n_comm")
            ->delimiter(',')
            ->expected(3);
    }
    cmd->add_option("--ec-threshold", a.ec_threshold,
                    "Idle microseconds before an error-correction round");
    if (with_outputs) {
        cmd->add_option("--out,-o", a.out, "Report output path (default stdout)");
        cmd->add_option("--schedule-out", a.schedule_out, "Also write the full schedule");
        cmd->add_option("--map-out", a.map_out, "Also write the qubit map");
        cmd->add_option("--circuit-out", a.circuit_out, "Also write the generated circuit");
    }
}

DeviceParams device_params_from(const RunArgs& a) {
    return a.dp_file.empty() ? DeviceParams::baseline() : load_device_params(a.dp_file);
}

BenchmarkSpec bench_from(const RunArgs& a) {
    BenchmarkSpec spec;
    spec.kind = BenchmarkSpec::kind_from_name(a.circuit);
    spec.bits = a.bits;
    spec.aqft = AqftParams{a.aqft_kmax, a.aqft_seq, a.aqft_tcount};
    return spec;
}

RunResult execute_run(const RunArgs& a) {
    const DeviceParams params = device_params_from(a);

    LogicalCircuit circuit;
    BenchmarkSpec spec;
    try {
        if (!a.circuit_file.empty()) {
            std::ifstream in(a.circuit_file);
            if (!in)
                throw IoError("cannot open circuit file: " + a.circuit_file);
            circuit = LogicalCircuit::parse(in);
            spec.bits = 0;
        } else {
            spec = bench_from(a);
            circuit = generate_benchmark(spec);
        }
    } catch (const SimError& e) {
        throw SimError(std::string("generate: ") + e.what());
    }
    if (!a.circuit_out.empty()) {
        std::ofstream out(a.circuit_out);
        if (!out)
            throw IoError("cannot write circuit file: " + a.circuit_out);
        circuit.serialize(out);
    }

    LogicalCircuit expanded;
    try {
        expanded = expand_fault_tolerant(circuit);
    } catch (const SimError& e) {
        throw SimError(std::string("expand: ") + e.what());
    }

    ArchConfig cfg;
    if (!a.arch_file.empty()) {
        cfg = ArchConfig::load(a.arch_file);
    } else {
        cfg = default_config_for(expanded.n_qubits, a.seg_cap, a.budget);
    }
    if (a.ncs_override > 0)
        cfg.n_cs = a.ncs_override;
    if (a.cs_override.size() == 3)
        cfg.cs = CsConfig{a.cs_override[0], a.cs_override[1], a.cs_override[2]};

    RunOptions options;
    options.sched.ec_idle_threshold = a.ec_threshold;
    RunResult r = run_pipeline_on(expanded, spec, cfg, params, options);
    r.circuit_depth = expanded.depth();
    return r;
}

int cmd_tiles(const std::string& dp_file, const std::string& out_file) {
    const DeviceParams baseline =
        dp_file.empty() ? DeviceParams::baseline() : load_device_params(dp_file);
    const TilePerfDatabase db = calibrate_database(baseline);

    std::ostringstream table;
    table << "logical operation      latency_us      p_fail\n";
    char buf[160];
    for (const auto& t : tile_calibration_targets()) {
        auto [lat, fail] = logical_perf(db, t.op, baseline);
        std::snprintf(buf, sizeof buf, "%-22s %12.1f      %.3e\n", logical_op_name(t.op), lat,
                      fail);
        table << buf;
    }
    for (int h = 1; h <= 3; ++h) {
        auto [lat, fail] = logical_epr_perf(db, baseline, h);
        std::snprintf(buf, sizeof buf, "EPRGeneration (h=%d)    %12.1f      %.3e\n", h, lat,
                      fail);
        table << buf;
    }
    std::cout << table.str();
    if (!out_file.empty())
        write_text(out_file, db.to_json());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Performance simulator for modular trapped-ion architectures"};
    app.require_subcommand(1);

    // tiles
    auto* tiles = app.add_subcommand("tiles", "Calibrate and print the tile database");
    std::string tiles_dp, tiles_out;
    tiles->add_option("--dp", tiles_dp, "Device parameters (JSON)");
    tiles->add_option("--out,-o", tiles_out, "Write the database as JSON");

    // run
    auto* run = app.add_subcommand("run", "Run the full pipeline on one benchmark");
    RunArgs run_args;
    add_run_flags(run, run_args, true);

    // viz
    auto* viz = app.add_subcommand("viz", "Render the utilization timeline as SVG");
    RunArgs viz_args;
    add_run_flags(viz, viz_args, false);
    std::string viz_out = "timeline.svg";
    std::string viz_schedule;
    viz->add_option("--out,-o", viz_out, "SVG output path");
    viz->add_option("--schedule", viz_schedule, "Render a serialized schedule instead");

    // sweep / optimize
    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep architecture configurations");
    auto* opt_cmd = app.add_subcommand("optimize", "Pick the fastest feasible configuration");
    RunArgs sweep_args, opt_args;
    std::vector<int> g_ndata{3, 6, 12}, g_nanc{2, 4, 8}, g_ncomm{1, 2, 4}, g_ncs{1, 2, 4};
    std::string sweep_csv;
    for (auto* cmd : {sweep_cmd, opt_cmd}) {
        RunArgs& a = cmd == sweep_cmd ? sweep_args : opt_args;
        add_run_flags(cmd, a, true, false);
        cmd->add_option("--ndata", g_ndata, "Data tiles per segment grid")->delimiter(',');
        cmd->add_option("--nanc", g_nanc, "Ancilla tiles per segment grid")->delimiter(',');
        cmd->add_option("--ncomm", g_ncomm, "Communication tiles per segment grid")
            ->delimiter(',');
        cmd->add_option("--ncs", g_ncs, "Computational segment count grid")->delimiter(',');
    }
    sweep_cmd->add_option("--csv", sweep_csv, "Also write the sweep as CSV");

    // shor-estimate
    auto* shor = app.add_subcommand("shor-estimate", "Factoring runtime estimate");
    int shor_bits = 2048;
    double shor_adder_s = 0.68;
    double shor_aqft_s = kShorDefaultAqftSeconds;
    shor->add_option("bits", shor_bits, "Problem size: 512, 1024 or 2048")->required();
    shor->add_option("adder_seconds", shor_adder_s, "Execution time of one adder call (s)")
        ->required();
    shor->add_option("--aqft-seconds", shor_aqft_s,
                     "Closing transform time (s, default one day)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (tiles->parsed())
            return cmd_tiles(tiles_dp, tiles_out);

        if (run->parsed()) {
            RunResult r = execute_run(run_args);
            write_text(run_args.out, r.report_json());
            if (!run_args.schedule_out.empty())
                write_text(run_args.schedule_out, r.schedule.serialize());
            if (!run_args.map_out.empty())
                write_text(run_args.map_out, r.map.to_json());
            return kExitOk;
        }

        if (viz->parsed()) {
            Schedule sched;
            if (!viz_schedule.empty()) {
                std::ifstream in(viz_schedule);
                if (!in)
                    throw IoError("cannot open schedule file: " + viz_schedule);
                sched = Schedule::parse(in);
            } else {
                sched = execute_run(viz_args).schedule;
            }
            std::ofstream out(viz_out);
            if (!out)
                throw IoError("cannot write timeline file: " + viz_out);
            render_timeline(sched, out);
            std::cout << "wrote " << viz_out << "\n";
            return kExitOk;
        }

        if (sweep_cmd->parsed() || opt_cmd->parsed()) {
            const RunArgs& a = sweep_cmd->parsed() ? sweep_args : opt_args;
            const BenchmarkSpec spec = bench_from(a);
            const DeviceParams params = device_params_from(a);
            SweepGrid grid{g_ndata, g_nanc, g_ncomm, g_ncs};
            if (sweep_cmd->parsed()) {
                SweepResult res = sweep(spec, grid, a.budget, a.seg_cap, params);
                write_text(a.out, res.to_json());
                if (!sweep_csv.empty())
                    write_text(sweep_csv, res.to_csv());
                return kExitOk;
            }
            auto [cfg, row] = optimize(spec, grid, a.budget, a.seg_cap, params);
            nlohmann::json j;
            j["config"] = nlohmann::json::parse(cfg.to_json());
            j["t_total_us"] = row.t_total;
            j["p_fail"] = row.p_fail;
            j["qubits"] = row.qubits;
            write_text(a.out, j.dump(2));
            return kExitOk;
        }

        if (shor->parsed()) {
            ShorEstimate e = estimate_shor_runtime(shor_bits, shor_adder_s, shor_aqft_s);
            nlohmann::json j;
            j["bits"] = shor_bits;
            j["adder_calls"] = e.adder_calls;
            j["total_seconds"] = e.total_seconds;
            j["total_days"] = e.total_days;
            j["feasible_5_months"] = e.feasible_5_months;
            std::cout << j.dump(2) << "\n";
            return e.feasible_5_months ? kExitOk : kExitInfeasible;
        }
    } catch (const NoFeasibleConfig& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const BudgetExceeded& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const SegmentCapExceeded& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const TooManySegments& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const InsufficientDataTiles& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
