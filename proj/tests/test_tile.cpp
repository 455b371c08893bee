#include "rpsim/tile.hpp"

#include <doctest.h>

#include <cmath>

using namespace rpsim;

TEST_CASE("tile compositions") {
    CHECK(build_tile(TileType::Data).l1_tiles == 7);
    CHECK(build_tile(TileType::Data).physical_qubits == 154);
    CHECK(build_tile(TileType::Ancilla).l1_tiles == 15);
    CHECK(build_tile(TileType::Ancilla).physical_qubits == 330);
    CHECK(build_tile(TileType::ErrorCorrection).physical_qubits == 330);
    CHECK(build_tile(TileType::Communication).l1_tiles == 22);
    CHECK(build_tile(TileType::Communication).physical_qubits == 533);
    for (auto t : {TileType::Data, TileType::Ancilla, TileType::ErrorCorrection,
                   TileType::Communication})
        CHECK(build_tile(t).cells <= 600);
}

TEST_CASE("calibration reproduces the reference table") {
    const DeviceParams baseline = DeviceParams::baseline();
    const TilePerfDatabase db = calibrate_database(baseline);

    for (const auto& t : tile_calibration_targets()) {
        CAPTURE(logical_op_name(t.op));
        auto [lat, fail] = logical_perf(db, t.op, baseline);
        CHECK(lat == doctest::Approx(t.latency_us).epsilon(1e-12));
        CHECK(fail == doctest::Approx(t.p_fail).epsilon(0.01));
    }
}

TEST_CASE("reference examples") {
    const DeviceParams baseline = DeviceParams::baseline();
    const TilePerfDatabase db = calibrate_database(baseline);

    SUBCASE("two-qubit gate") {
        auto [lat, fail] = logical_perf(db, LogicalOp::CNOT, baseline);
        CHECK(lat == 10.0);
        CHECK(fail == doctest::Approx(4.74e-18).epsilon(1e-9));
    }
    SUBCASE("Pauli") {
        auto [lat, fail] = logical_perf(db, LogicalOp::PauliXZ, baseline);
        CHECK(lat == 1.0);
        CHECK(fail == doctest::Approx(1.15e-18).epsilon(1e-9));
    }
    SUBCASE("T magic-state preparation") {
        auto [lat, fail] = logical_perf(db, LogicalOp::PrepTMagic, baseline);
        CHECK(lat == 78100.0);
        CHECK(fail == doctest::Approx(4.23e-16).epsilon(1e-9));
    }
    SUBCASE("entanglement generation carries the fixed purification tail") {
        auto [lat, fail] = logical_perf(db, LogicalOp::EPRGeneration, baseline);
        CHECK(lat == doctest::Approx(5000.0 + 50800.0).epsilon(1e-12));
        CHECK(fail == doctest::Approx(1.08e-11).epsilon(1e-9));
    }
    SUBCASE("halving the gate error quarters the failure probability") {
        DeviceParams tuned = baseline;
        tuned.p_gate = 0.5e-7;
        auto [lat, fail] = logical_perf(db, LogicalOp::CNOT, tuned);
        CHECK(lat == 10.0);
        CHECK(fail == doctest::Approx(4.74e-18 / 4.0).epsilon(1e-9));
    }
}

TEST_CASE("generation time scales with the switch-tree height") {
    const DeviceParams baseline = DeviceParams::baseline();
    const TilePerfDatabase db = calibrate_database(baseline);

    auto [l1, f1] = logical_epr_perf(db, baseline, 1);
    auto [l2, f2] = logical_epr_perf(db, baseline, 2);
    auto [l3, f3] = logical_epr_perf(db, baseline, 3);
    CHECK(l1 - 50800.0 == doctest::Approx(5000.0));
    CHECK(l2 - 50800.0 == doctest::Approx(10000.0));
    CHECK(l3 - 50800.0 == doctest::Approx(20000.0));
    CHECK(f1 == f2);
    CHECK(f2 == f3);
    CHECK_THROWS_AS(logical_epr_perf(db, baseline, 0), ConfigError);
    CHECK_THROWS_AS(logical_epr_perf(db, baseline, 4), ConfigError);
}

TEST_CASE("latency model is linear in device times; failure model quadratic in rates") {
    const DeviceParams baseline = DeviceParams::baseline();
    const TilePerfDatabase db = calibrate_database(baseline);

    DeviceParams doubled = baseline;
    doubled.t_1q *= 2;
    doubled.t_2q *= 2;
    doubled.t_3q *= 2;
    doubled.t_meas *= 2;
    doubled.t_epr_gen *= 2;
    doubled.t_shutt_cell *= 2;
    doubled.t_shutt_tile *= 2;

    DeviceParams tuned = baseline;
    tuned.p_epr = baseline.p_epr / 10.0;

    for (const auto& t : tile_calibration_targets()) {
        CAPTURE(logical_op_name(t.op));
        CHECK(logical_perf(db, t.op, doubled).first ==
              doctest::Approx(2.0 * logical_perf(db, t.op, baseline).first).epsilon(1e-12));
    }
    // Tenfold cleaner pairs give a hundredfold cleaner links.
    CHECK(logical_perf(db, LogicalOp::EPRGeneration, tuned).second ==
          doctest::Approx(logical_perf(db, LogicalOp::EPRGeneration, baseline).second / 100.0)
              .epsilon(1e-9));
}

TEST_CASE("database round-trips through JSON") {
    const DeviceParams baseline = DeviceParams::baseline();
    const TilePerfDatabase db = calibrate_database(baseline);
    const TilePerfDatabase db2 = TilePerfDatabase::from_json(db.to_json());
    for (const auto& t : tile_calibration_targets()) {
        CHECK(logical_perf(db2, t.op, baseline).first ==
              logical_perf(db, t.op, baseline).first);
        CHECK(logical_perf(db2, t.op, baseline).second ==
              logical_perf(db, t.op, baseline).second);
    }
}

TEST_CASE("calibration rejects baselines its compositions cannot meet") {
    DeviceParams off = DeviceParams::baseline();
    off.t_meas = 90.0;
    CHECK_THROWS_AS(calibrate_database(off), CalibrationError);

    DeviceParams zero = DeviceParams::baseline();
    zero.p_gate = 0.0;
    CHECK_THROWS_AS(calibrate_database(zero), CalibrationError);
}

TEST_CASE("unknown operation is a named error") {
    TilePerfDatabase empty;
    CHECK_THROWS_AS(empty.at(LogicalOp::CNOT), UnknownOpError);
}
