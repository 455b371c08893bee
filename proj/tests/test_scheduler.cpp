#include "rpsim/benchmarks.hpp"
#include "rpsim/error_analysis.hpp"
#include "rpsim/report.hpp"
#include "rpsim/scheduler.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace rpsim;

namespace {

TilePerfDatabase& shared_db() {
    static TilePerfDatabase db = calibrate_database(DeviceParams::baseline());
    return db;
}

Machine one_segment(int n_data, int n_anc, int n_comm = 1) {
    ArchConfig cfg;
    cfg.n_seg = cfg.n_cs = 1;
    cfg.cs = {n_data, n_anc, n_comm};
    cfg.seg_qubit_cap = 10000;
    return build_machine(cfg, shared_db());
}

QubitMap identity_map(uint32_t n_qubits, const Machine& m) {
    QubitMap map;
    map.position.resize(n_qubits);
    uint32_t q = 0;
    for (int seg = 0; seg < static_cast<int>(m.segments.size()) && q < n_qubits; ++seg)
        for (int slot = 0; slot < m.segments[seg].n_data && q < n_qubits; ++slot)
            map.position[q++] = TilePos{seg, slot};
    REQUIRE(q == n_qubits);
    return map;
}

// Latency-weighted longest dependency path of an expanded circuit.
usec dependency_critical_path(const LogicalCircuit& c, const TilePerfDatabase& db,
                              const DeviceParams& params) {
    auto own = [&](const LogicalGate& g) -> usec {
        switch (g.kind) {
        case GateKind::X:
        case GateKind::Z: return db.at(LogicalOp::PauliXZ).latency(params);
        case GateKind::H: return db.at(LogicalOp::Hadamard).latency(params);
        case GateKind::CNOT: return db.at(LogicalOp::CNOT).latency(params);
        case GateKind::Measure: return db.at(LogicalOp::Measurement).latency(params);
        case GateKind::PrepMagicT: return db.at(LogicalOp::PrepTMagic).latency(params);
        case GateKind::PrepMagicToffoli:
            return db.at(LogicalOp::PrepToffoliMagic).latency(params);
        case GateKind::TeleportIntoMagic: return db.at(LogicalOp::TeleportData).latency(params);
        default: return 0.0;
        }
    };
    std::vector<usec> finish(c.gates.size(), 0.0);
    usec best = 0.0;
    for (const auto& g : c.gates) {
        usec start = 0.0;
        for (uint32_t i = c.pred_offsets[g.id]; i < c.pred_offsets[g.id + 1]; ++i)
            start = std::max(start, finish[c.preds[i]]);
        finish[g.id] = start + own(g);
        best = std::max(best, finish[g.id]);
    }
    return best;
}

Schedule run_bench(const BenchmarkSpec& spec, const ArchConfig& cfg,
                   const DeviceParams& params) {
    RunResult r = run_pipeline(spec, cfg, params);
    return std::move(r.schedule);
}

} // namespace

TEST_CASE("empty circuit schedules to zero") {
    Machine m = one_segment(2, 1);
    CircuitBuilder b(2);
    const LogicalCircuit c = b.take();
    QubitMap map = identity_map(2, m);
    const Schedule s = schedule(c, m, map, DeviceParams::baseline());
    CHECK(s.t_total() == 0.0);
    CHECK(s.breakdown.sum() == 0.0);
    CHECK(s.ops.empty());
}

TEST_CASE("adjacent-tile CNOT pays one tile shuttle") {
    Machine m = one_segment(2, 1);
    CircuitBuilder b(2);
    b.add(GateKind::CNOT, {0, 1});
    const LogicalCircuit c = b.take();
    QubitMap map = identity_map(2, m);
    const Schedule s = schedule(c, m, map, DeviceParams::baseline());

    CHECK(s.t_total() == doctest::Approx(70.0));
    CHECK(s.breakdown.t_shut == doctest::Approx(60.0));
    CHECK(s.breakdown.t_gate == doctest::Approx(10.0));
    CHECK(s.breakdown.t_anc == 0.0);
    CHECK(s.breakdown.t_tel == 0.0);

    REQUIRE(s.ops.size() == 2);
    CHECK(s.ops[0].source == NoiseSource::Shuttling);
    CHECK(s.ops[0].t_finish - s.ops[0].t_start == doctest::Approx(60.0));
    CHECK(s.ops[1].primary);
    CHECK(s.ops[1].d_shut == doctest::Approx(60.0));
}

TEST_CASE("magic-state pipelining shrinks the second teleport's ancilla wait") {
    CircuitBuilder b(1);
    b.add(GateKind::T, {0});
    b.add(GateKind::T, {0});
    const LogicalCircuit expanded = expand_fault_tolerant(b.take());
    const DeviceParams params = DeviceParams::baseline();
    const usec prep_lat = shared_db().at(LogicalOp::PrepTMagic).latency(params);

    auto second_teleport_danc = [&](int n_anc) {
        Machine m = one_segment(1, n_anc);
        QubitMap map = identity_map(1, m);
        const Schedule s = schedule(expanded, m, map, params);
        usec last = -1.0;
        for (const auto& op : s.ops)
            if (op.primary)
                last = op.d_anc;
        return last;
    };

    const usec one_tile = second_teleport_danc(1);
    const usec two_tiles = second_teleport_danc(2);
    CHECK(two_tiles == 0.0);
    CHECK(one_tile > 0.9 * prep_lat - 100.0);
    CHECK(one_tile - two_tiles == doctest::Approx(prep_lat - 60.0).epsilon(0.01));
}

TEST_CASE("critical path split follows the proportional rule") {
    SUBCASE("delays and execution share the extension") {
        CriticalPathBreakdown b;
        ScheduledOp op;
        op.t_ready = 0;
        op.t_start = 40; // d_anc 30 + d_tel 10
        op.t_finish = 50;
        op.d_anc = 30;
        op.d_tel = 10;
        const auto out = update_critical_path(b, op);
        CHECK(out.t_anc == doctest::Approx(30.0));
        CHECK(out.t_tel == doctest::Approx(10.0));
        CHECK(out.t_gate == doctest::Approx(10.0));
        CHECK(out.t_shut == 0.0);
        CHECK(out.t_swp == 0.0);
        CHECK(out.t_total == 50.0);
        CHECK(out.sum() == doctest::Approx(out.t_total));
    }
    SUBCASE("non-extending operations leave the breakdown unchanged") {
        CriticalPathBreakdown b;
        b.t_gate = b.t_total = 100.0;
        ScheduledOp op;
        op.t_start = 10;
        op.t_finish = 90;
        const auto out = update_critical_path(b, op);
        CHECK(out.t_total == 100.0);
        CHECK(out.t_gate == 100.0);
    }
    SUBCASE("zero delay attributes everything to execution") {
        CriticalPathBreakdown b;
        ScheduledOp op;
        op.t_ready = op.t_start = 0;
        op.t_finish = 25;
        const auto out = update_critical_path(b, op);
        CHECK(out.t_gate == doctest::Approx(25.0));
        CHECK(out.t_total == 25.0);
    }
}

TEST_CASE("plain cross-segment operand fetch is teleport delay") {
    ArchConfig cfg;
    cfg.n_seg = cfg.n_cs = 2;
    cfg.cs = {3, 2, 1};
    Machine m = build_machine(cfg, shared_db());
    QubitMap map;
    map.position = {TilePos{0, 0}, TilePos{0, 1}, TilePos{1, 0}};

    CircuitBuilder b(3);
    b.add(GateKind::Toffoli, {0, 1, 2});
    const LogicalCircuit expanded = expand_fault_tolerant(b.take());
    const Schedule s = schedule(expanded, m, map, DeviceParams::baseline());

    const ScheduledOp* gate = nullptr;
    for (const auto& op : s.ops)
        if (op.primary)
            gate = &op;
    REQUIRE(gate != nullptr);
    CHECK(gate->d_tel > 0.0);
    CHECK(gate->d_swp == 0.0);
    CHECK(gate->d_shut > 0.0);
    CHECK(gate->t_start - gate->t_ready ==
          doctest::Approx(gate->d_anc + gate->d_shut + gate->d_tel + gate->d_swp));
}

TEST_CASE("full host segments evict through cross-segment swaps") {
    ArchConfig cfg;
    cfg.n_seg = cfg.n_cs = 2;
    cfg.cs = {3, 2, 1};
    Machine m = build_machine(cfg, shared_db());
    QubitMap map;
    map.position = {TilePos{0, 0}, TilePos{0, 1}, TilePos{0, 2}, TilePos{1, 0}};

    CircuitBuilder b(4);
    b.add(GateKind::Toffoli, {0, 1, 3}); // q2 must leave seg 0 to admit q3
    const LogicalCircuit expanded = expand_fault_tolerant(b.take());
    const Schedule s = schedule(expanded, m, map, DeviceParams::baseline());

    const ScheduledOp* gate = nullptr;
    int teleports = 0, eprs = 0;
    for (const auto& op : s.ops) {
        if (op.primary)
            gate = &op;
        if (op.op == LogicalOp::TeleportData && !op.primary)
            ++teleports;
        if (op.op == LogicalOp::EPRGeneration)
            ++eprs;
    }
    REQUIRE(gate != nullptr);
    CHECK(teleports == 2); // operand in, victim out
    CHECK(eprs == 2);
    CHECK(gate->d_swp > 0.0);
    CHECK(gate->d_tel == 0.0);
}

TEST_CASE("breakdown conservation and lower bound on benchmark runs") {
    const DeviceParams params = DeviceParams::baseline();
    for (auto kind : {BenchmarkSpec::Kind::QRCA, BenchmarkSpec::Kind::QCLA}) {
        BenchmarkSpec spec;
        spec.kind = kind;
        spec.bits = 8;
        const LogicalCircuit expanded = expand_fault_tolerant(generate_benchmark(spec));

        ArchConfig cfg;
        cfg.n_cs = 2;
        cfg.cs = {6, 3, 2};
        cfg.seg_qubit_cap = 10000;
        const int need = static_cast<int>(expanded.n_qubits);
        cfg.n_seg = cfg.n_cs + std::max(0, (need - 12 + 11) / 12);

        RunResult r = run_pipeline(spec, cfg, params);
        const auto& b = r.schedule.breakdown;
        CHECK(std::abs(b.sum() - b.t_total) <= 1e-9 * std::max(1.0, b.t_total));
        CHECK(b.t_total >= dependency_critical_path(expanded, shared_db(), params) - 1e-6);

        for (const auto& op : r.schedule.ops)
            if (op.primary)
                CHECK(op.t_start - op.t_ready ==
                      doctest::Approx(op.d_anc + op.d_shut + op.d_tel + op.d_swp)
                          .epsilon(1e-12));
    }
}

TEST_CASE("unconstrained motion-free chains meet the dependency bound exactly") {
    const DeviceParams params = DeviceParams::baseline();
    Machine m = one_segment(4, 2);
    CircuitBuilder b(4);
    for (int rep = 0; rep < 10; ++rep)
        for (uint32_t q = 0; q < 4; ++q)
            b.add(GateKind::H, {q});
    const LogicalCircuit c = b.take();
    QubitMap map = identity_map(4, m);
    const Schedule s = schedule(c, m, map, params);
    const usec bound = dependency_critical_path(c, shared_db(), params);
    CHECK(s.t_total() == doctest::Approx(bound).epsilon(0.01));
    CHECK(s.t_total() == doctest::Approx(40.0));
}

TEST_CASE("more resources never slow a small adder down") {
    // Fixed segment count and uniform data density: raising the
    // computational segment count flips storage segments to computational
    // ones without moving the qubit layout.
    const DeviceParams params = DeviceParams::baseline();
    BenchmarkSpec spec;
    spec.kind = BenchmarkSpec::Kind::QCLA;
    spec.bits = 16;
    const LogicalCircuit ex = expand_fault_tolerant(generate_benchmark(spec));
    const int n_seg = (static_cast<int>(ex.n_qubits) + 3) / 4;

    auto total_for = [&](int ncs, int nanc, int ncomm) {
        ArchConfig cfg;
        cfg.n_seg = n_seg;
        cfg.n_cs = ncs;
        cfg.cs = {4, nanc, ncomm};
        cfg.ss = {4, ncomm};
        cfg.seg_qubit_cap = 10000;
        return run_pipeline(spec, cfg, params).schedule.t_total();
    };

    for (int nanc : {2, 4})
        for (int ncomm : {1, 2})
            CHECK(total_for(2, nanc, ncomm) >= total_for(4, nanc, ncomm) - 1e-6);
    for (int ncs : {2, 4})
        for (int ncomm : {1, 2})
            CHECK(total_for(ncs, 2, ncomm) >= total_for(ncs, 4, ncomm) - 1e-6);
    for (int ncs : {2, 4})
        for (int nanc : {2, 4})
            CHECK(total_for(ncs, nanc, 1) >= total_for(ncs, nanc, 2) - 1e-6);
}

TEST_CASE("schedules are deterministic and byte-stable") {
    BenchmarkSpec spec;
    spec.kind = BenchmarkSpec::Kind::QRCA;
    spec.bits = 6;
    ArchConfig cfg;
    cfg.n_seg = cfg.n_cs = 2;
    cfg.cs = {7, 2, 1};

    const std::string a = run_bench(spec, cfg, DeviceParams::baseline()).serialize();
    const std::string b = run_bench(spec, cfg, DeviceParams::baseline()).serialize();
    CHECK(a == b);
    CHECK(!a.empty());

    std::istringstream in(a);
    const Schedule parsed = Schedule::parse(in);
    CHECK(parsed.breakdown.t_total ==
          run_bench(spec, cfg, DeviceParams::baseline()).breakdown.t_total);
    CHECK(parsed.serialize() == a);
}

TEST_CASE("absurd error rates clamp instead of overflowing") {
    DeviceParams params = DeviceParams::baseline();
    params.p_gate = 0.5;
    Machine m = one_segment(12, 1);
    CircuitBuilder b(2);
    b.add(GateKind::CNOT, {0, 1});
    const LogicalCircuit c = b.take();
    QubitMap map;
    map.position = {TilePos{0, 0}, TilePos{0, 11}};
    const Schedule s = schedule(c, m, map, params);
    CHECK(s.clamped);
    for (const auto& op : s.ops)
        CHECK(op.p_fail < 1.0);
}

TEST_CASE("unexpanded circuits are rejected") {
    Machine m = one_segment(3, 1);
    CircuitBuilder b(3);
    b.add(GateKind::Toffoli, {0, 1, 2});
    const LogicalCircuit c = b.take();
    QubitMap map = identity_map(3, m);
    CHECK_THROWS_WITH_AS(schedule(c, m, map, DeviceParams::baseline()),
                         doctest::Contains("expanded"), ScheduleError);
}

TEST_CASE("three-operand teleports need a wide enough computational segment") {
    Machine m = one_segment(2, 1);
    CircuitBuilder b(3);
    b.add(GateKind::Toffoli, {0, 1, 2});
    const LogicalCircuit expanded = expand_fault_tolerant(b.take());
    QubitMap map;
    map.position = {TilePos{0, 0}, TilePos{0, 1}, TilePos{0, 1}};
    CHECK_THROWS_AS(schedule(expanded, m, map, DeviceParams::baseline()), ScheduleError);
}

TEST_CASE("unmapped qubits are rejected") {
    Machine m = one_segment(2, 1);
    CircuitBuilder b(2);
    b.add(GateKind::X, {1});
    const LogicalCircuit c = b.take();
    QubitMap map;
    map.position = {TilePos{0, 0}}; // qubit 1 missing
    CHECK_THROWS_WITH_AS(schedule(c, m, map, DeviceParams::baseline()),
                         doctest::Contains("unmapped"), ScheduleError);
}

TEST_CASE("error-correction rounds fill idle gaps") {
    const DeviceParams params = DeviceParams::baseline();
    const usec ec_lat = shared_db().at(LogicalOp::L2ErrorCorrection).latency(params);

    SUBCASE("a gap of ten thresholds takes ten rounds") {
        Machine m = one_segment(2, 1);
        Schedule s;
        s.total_rows = 2;
        s.row_occupied.resize(2);
        s.row_occupied[0] = {{0.0, 10.0 * ec_lat + 2.0}};
        ScheduledOp head, tail;
        head.row = 0;
        head.t_start = 0;
        head.t_finish = 1;
        tail.row = 0;
        tail.t_start = 10.0 * ec_lat + 1.0;
        tail.t_finish = 10.0 * ec_lat + 2.0;
        s.ops = {head, tail};
        insert_error_correction(s, m, params);
        int rounds = 0;
        for (const auto& op : s.ops)
            if (op.op == LogicalOp::L2ErrorCorrection)
                ++rounds;
        CHECK(rounds == 10);
    }
    SUBCASE("no idle gap, no rounds") {
        Machine m = one_segment(1, 1);
        Schedule s;
        s.total_rows = 1;
        s.row_occupied.resize(1);
        s.row_occupied[0] = {{0.0, 100.0}};
        ScheduledOp busy;
        busy.row = 0;
        busy.t_start = 0;
        busy.t_finish = 100.0;
        s.ops = {busy};
        const size_t before = s.ops.size();
        insert_error_correction(s, m, params);
        CHECK(s.ops.size() == before);
    }
    SUBCASE("simultaneous idle tiles serialize on the shared tile") {
        Machine m = one_segment(2, 1);
        Schedule s;
        s.total_rows = 2;
        s.row_occupied.resize(2);
        s.row_occupied[0] = {{0.0, 2.5 * ec_lat}};
        s.row_occupied[1] = {{0.0, 2.5 * ec_lat}};
        insert_error_correction(s, m, params);
        std::vector<std::pair<usec, usec>> rounds;
        for (const auto& op : s.ops)
            if (op.op == LogicalOp::L2ErrorCorrection)
                rounds.push_back({op.t_start, op.t_finish});
        CHECK(rounds.size() >= 2);
        std::sort(rounds.begin(), rounds.end());
        for (size_t i = 1; i < rounds.size(); ++i)
            CHECK(rounds[i].first >= rounds[i - 1].second - 1e-9);
    }
}
