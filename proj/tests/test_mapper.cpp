#include "rpsim/benchmarks.hpp"
#include "rpsim/mapper.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

using namespace rpsim;

namespace {

InteractionGraph graph_from_edges(uint32_t n,
                                  const std::vector<std::tuple<uint32_t, uint32_t, double>>& es) {
    CircuitBuilder b(n);
    for (const auto& [u, v, w] : es)
        for (int i = 0; i < static_cast<int>(w); ++i)
            b.add(GateKind::CNOT, {u, v});
    return build_interaction_graph(b.take());
}

double brute_force_optimum(const InteractionGraph& g) {
    std::vector<uint32_t> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    double best = arrangement_cost(g, order);
    while (std::next_permutation(order.begin(), order.end()))
        best = std::min(best, arrangement_cost(g, order));
    return best;
}

TilePerfDatabase& shared_db() {
    static TilePerfDatabase db = calibrate_database(DeviceParams::baseline());
    return db;
}

} // namespace

TEST_CASE("interaction graph counts multi-qubit couplings") {
    SUBCASE("one CNOT, one edge") {
        const auto g = graph_from_edges(2, {{0, 1, 1}});
        CHECK(g.edge_weight(0, 1) == 1.0);
        CHECK(g.edge_weight(1, 0) == 1.0);
    }
    SUBCASE("a three-qubit gate touches three pairs") {
        CircuitBuilder b(3);
        b.add(GateKind::Toffoli, {0, 1, 2});
        const auto g = build_interaction_graph(b.take());
        CHECK(g.edge_weight(0, 1) == 1.0);
        CHECK(g.edge_weight(0, 2) == 1.0);
        CHECK(g.edge_weight(1, 2) == 1.0);
    }
    SUBCASE("adder couplings concentrate on adjacent bit positions") {
        const LogicalCircuit c = gen_qrca(4);
        const auto g = build_interaction_graph(c);
        // The strongest edge weight involves a_i/b_i of one bit position.
        double best_w = 0;
        uint32_t bu = 0, bv = 0;
        for (uint32_t u = 0; u < g.n; ++u)
            for (uint32_t i = g.offsets[u]; i < g.offsets[u + 1]; ++i)
                if (g.weight[i] > best_w) {
                    best_w = g.weight[i];
                    bu = u;
                    bv = g.nbr[i];
                }
        const auto bit = [&](uint32_t q) { return q >= 4 ? q - 4 : q; };
        CHECK(std::abs(static_cast<int>(bit(bu)) - static_cast<int>(bit(bv))) <= 1);
    }
    SUBCASE("empty circuit rejected") {
        CircuitBuilder b(1);
        CHECK_THROWS_AS(build_interaction_graph(b.take()), CircuitError);
    }
}

TEST_CASE("arrangement on a path graph is optimal") {
    const auto g = graph_from_edges(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}});
    const auto order = linear_arrange(g);
    CHECK(arrangement_cost(g, order) == 3.0);
}

TEST_CASE("arrangement on a star matches the enumerated optimum") {
    const auto g = graph_from_edges(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}});
    const auto order = linear_arrange(g);
    CHECK(arrangement_cost(g, order) <= 4.0);
    CHECK(brute_force_optimum(g) == 4.0);
}

TEST_CASE("single node arranges trivially") {
    CircuitBuilder b(1);
    b.add(GateKind::H, {0});
    const auto g = build_interaction_graph(b.take());
    CHECK(linear_arrange(g) == std::vector<uint32_t>{0});
}

TEST_CASE("heuristic stays within 1.5x of the optimum on small graphs") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const uint32_t n = 4 + rng() % 5; // 4..8 nodes
        std::vector<std::tuple<uint32_t, uint32_t, double>> es;
        for (uint32_t u = 0; u < n; ++u)
            for (uint32_t v = u + 1; v < n; ++v)
                if (rng() % 3 != 0)
                    es.push_back({u, v, 1.0 + rng() % 3});
        if (es.empty())
            es.push_back({0, 1, 1.0});
        const auto g = graph_from_edges(n, es);
        const double got = arrangement_cost(g, linear_arrange(g));
        const double opt = brute_force_optimum(g);
        CAPTURE(trial);
        CHECK(got <= 1.5 * opt + 1e-9);
    }
}

TEST_CASE("heuristic beats identity and random orders") {
    const LogicalCircuit c = gen_qcla(16);
    const auto g = build_interaction_graph(c);
    const auto order = linear_arrange(g);
    const double got = arrangement_cost(g, order);

    std::vector<uint32_t> ident(g.n);
    std::iota(ident.begin(), ident.end(), 0);
    CHECK(got <= arrangement_cost(g, ident));

    std::mt19937 rng(99);
    int wins = 0;
    for (int t = 0; t < 100; ++t) {
        std::vector<uint32_t> shuffled = ident;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        if (got <= arrangement_cost(g, shuffled))
            ++wins;
    }
    CHECK(wins >= 95);
}

TEST_CASE("disconnected components concatenate by size") {
    // 3-node path plus an isolated pair.
    const auto g = graph_from_edges(5, {{0, 1, 1}, {1, 2, 1}, {3, 4, 1}});
    const auto order = linear_arrange(g);
    REQUIRE(order.size() == 5);
    // Big component first.
    std::vector<uint32_t> head(order.begin(), order.begin() + 3);
    std::sort(head.begin(), head.end());
    CHECK(head == std::vector<uint32_t>{0, 1, 2});
}

TEST_CASE("tile assignment fills computational segments first") {
    ArchConfig cfg;
    cfg.n_seg = 2;
    cfg.n_cs = 2;
    cfg.cs = {3, 1, 1};
    Machine m = build_machine(cfg, shared_db());

    const std::vector<uint32_t> order{0, 1, 2, 3, 4, 5};
    const QubitMap map = assign_tiles(order, m);
    for (uint32_t q = 0; q < 3; ++q)
        CHECK(map.position[q].seg == 0);
    for (uint32_t q = 3; q < 6; ++q)
        CHECK(map.position[q].seg == 1);

    // Bijection onto used slots.
    std::set<std::pair<int, int>> slots;
    for (const auto& p : map.position)
        slots.insert({p.seg, p.slot});
    CHECK(slots.size() == 6);

    SUBCASE("shortfall is reported") {
        Machine m2 = build_machine(cfg, shared_db());
        std::vector<uint32_t> seven(7);
        std::iota(seven.begin(), seven.end(), 0);
        CHECK_THROWS_WITH_AS(assign_tiles(seven, m2), doctest::Contains("short by 1"),
                             InsufficientDataTiles);
    }
}

TEST_CASE("qubit map serialization round-trips") {
    QubitMap m;
    m.position = {TilePos{0, 1}, TilePos{2, 0}};
    const QubitMap back = QubitMap::from_json(m.to_json());
    REQUIRE(back.position.size() == 2);
    CHECK(back.position[0] == TilePos{0, 1});
    CHECK(back.position[1] == TilePos{2, 0});
}
