#include "rpsim/arch.hpp"

#include <doctest.h>

using namespace rpsim;

namespace {

TilePerfDatabase& shared_db() {
    static TilePerfDatabase db = calibrate_database(DeviceParams::baseline());
    return db;
}

} // namespace

TEST_CASE("qubit accounting sums tile compositions") {
    ArchConfig cfg;
    cfg.n_seg = cfg.n_cs = 1;
    cfg.cs = {3, 4, 1};
    CHECK(qubit_count(cfg) == 3 * 154 + 4 * 330 + 1 * 533 + 330); // 2645

    ArchConfig ss;
    ss.n_seg = 2;
    ss.n_cs = 1;
    ss.cs = {3, 4, 1};
    ss.ss = {1, 1};
    CHECK(segment_qubit_count(ss, false) == 154 + 533 + 330); // 1017

    ArchConfig none;
    none.n_seg = 0;
    CHECK(qubit_count(none) == 0);
}

TEST_CASE("storage segments absorb the ancilla share as data tiles") {
    ArchConfig cfg;
    cfg.n_seg = 2;
    cfg.n_cs = 1;
    cfg.cs = {3, 4, 1};
    const SsConfig ss = cfg.effective_ss();
    CHECK(ss.n_data == 3 + 2 * 4);
    CHECK(ss.n_comm == 1);
}

TEST_CASE("switch height grows logarithmically and saturates at 3") {
    CHECK(switch_height_for(1) == 1);
    CHECK(switch_height_for(20) == 1);
    CHECK(switch_height_for(21) == 2);
    CHECK(switch_height_for(400) == 2);
    CHECK(switch_height_for(401) == 3);
    CHECK(switch_height_for(8000) == 3);
    CHECK_THROWS_AS(switch_height_for(8001), TooManySegments);

    int prev = 1;
    for (int n = 1; n <= 8000; n += 97) {
        const int h = switch_height_for(n);
        CHECK(h >= prev);
        CHECK(h <= 3);
        prev = h;
    }
}

TEST_CASE("machine construction and named failures") {
    ArchConfig cfg;
    cfg.n_seg = cfg.n_cs = 20;
    cfg.cs = {3, 4, 1};

    SUBCASE("height-1 tree for up to 20 segments") {
        const Machine m = build_machine(cfg, shared_db());
        CHECK(m.switch_height == 1);
        CHECK(m.segments.size() == 20);
        CHECK(m.total_data_tiles == 60);
        CHECK(m.physical_qubits() == qubit_count(cfg));
    }
    SUBCASE("400 segments reach height 2") {
        ArchConfig big = cfg;
        big.n_seg = 400;
        big.n_cs = 4;
        const Machine m = build_machine(big, shared_db());
        CHECK(m.switch_height == 2);
    }
    SUBCASE("budget violations name the overage") {
        ArchConfig over = cfg;
        over.n_seg = over.n_cs = 600; // 600 * 2645 > 1.5e6
        CHECK_THROWS_WITH_AS(build_machine(over, shared_db()), doctest::Contains("exceeding"),
                             BudgetExceeded);
    }
    SUBCASE("segment cap") {
        ArchConfig fat = cfg;
        fat.n_seg = fat.n_cs = 1;
        fat.cs = {40, 8, 2}; // 40*154 + 8*330 + 2*533 + 330 = 10,196 > 10,000
        fat.seg_qubit_cap = 10000;
        CHECK_THROWS_AS(build_machine(fat, shared_db()), SegmentCapExceeded);
    }
    SUBCASE("multiple error-correction tiles are rejected") {
        ArchConfig ec = cfg;
        ec.n_ec = 2;
        CHECK_THROWS_AS(build_machine(ec, shared_db()), ConfigError);
    }
    SUBCASE("deterministic construction") {
        const Machine a = build_machine(cfg, shared_db());
        const Machine b = build_machine(cfg, shared_db());
        CHECK(a.switch_height == b.switch_height);
        CHECK(a.total_data_tiles == b.total_data_tiles);
        REQUIRE(a.segments.size() == b.segments.size());
        for (size_t i = 0; i < a.segments.size(); ++i) {
            CHECK(a.segments[i].n_data == b.segments[i].n_data);
            CHECK(a.segments[i].n_anc == b.segments[i].n_anc);
        }
    }
}

TEST_CASE("tile reallocation preserves qubit count and round-trips") {
    ArchConfig cfg;
    cfg.n_seg = cfg.n_cs = 1;
    cfg.cs = {3, 4, 1};
    Machine m = build_machine(cfg, shared_db());
    const long long before = m.physical_qubits();

    reallocate_tile(m, 0, ReallocDirection::AncToData);
    CHECK(m.segments[0].n_data == 5);
    CHECK(m.segments[0].n_anc == 3);
    CHECK(std::llabs(m.physical_qubits() - before) <= 2);

    reallocate_tile(m, 0, ReallocDirection::DataToAnc);
    CHECK(m.segments[0].n_data == 3);
    CHECK(m.segments[0].n_anc == 4);
    CHECK(m.physical_qubits() == before);

    SUBCASE("occupied data tiles refuse conversion") {
        m.data_occupant[0][2] = 7;
        CHECK_THROWS_WITH_AS(reallocate_tile(m, 0, ReallocDirection::DataToAnc),
                             doctest::Contains("live"), ConfigError);
    }
    SUBCASE("missing source tiles") {
        ArchConfig lean = cfg;
        lean.cs = {1, 1, 1};
        Machine small = build_machine(lean, shared_db());
        CHECK_THROWS_AS(reallocate_tile(small, 0, ReallocDirection::DataToAnc), ConfigError);
        reallocate_tile(small, 0, ReallocDirection::AncToData);
        CHECK_THROWS_AS(reallocate_tile(small, 0, ReallocDirection::AncToData), ConfigError);
    }
}

TEST_CASE("architecture files round-trip") {
    ArchConfig cfg;
    cfg.n_seg = 7;
    cfg.n_cs = 2;
    cfg.cs = {5, 3, 2};
    cfg.seg_qubit_cap = 10000;
    const ArchConfig back = ArchConfig::from_json(cfg.to_json());
    CHECK(back.n_seg == 7);
    CHECK(back.n_cs == 2);
    CHECK(back.cs.n_data == 5);
    CHECK(back.effective_ss().n_data == cfg.effective_ss().n_data);
    CHECK_THROWS_AS(ArchConfig::from_json("{}"), IoError);
    CHECK_THROWS_AS(ArchConfig::from_json("{bad"), IoError);
}
