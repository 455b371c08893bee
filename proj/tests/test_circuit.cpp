#include "rpsim/circuit.hpp"

#include <doctest.h>

#include <sstream>

using namespace rpsim;

TEST_CASE("builder wires operand dependencies") {
    CircuitBuilder b(3);
    const uint32_t g0 = b.add(GateKind::H, {0});
    const uint32_t g1 = b.add(GateKind::CNOT, {0, 1});
    const uint32_t g2 = b.add(GateKind::X, {2});
    const uint32_t g3 = b.add(GateKind::Toffoli, {0, 1, 2});
    LogicalCircuit c = b.take();
    c.validate();

    CHECK(c.preds_of(g0).empty());
    CHECK(c.preds_of(g1) == std::vector<uint32_t>{g0});
    CHECK(c.preds_of(g2).empty());
    CHECK(c.preds_of(g3) == std::vector<uint32_t>{g1, g2});
    CHECK(c.depth() == 3);
}

TEST_CASE("validation rejects malformed gates") {
    CircuitBuilder b(2);
    CHECK_THROWS_AS(b.add(GateKind::CNOT, {0, 5}), CircuitError);

    CircuitBuilder b2(3);
    b2.add(GateKind::CNOT, {0, 1});
    LogicalCircuit c = b2.take();
    c.gates[0].q[1] = 0; // duplicate operand
    CHECK_THROWS_AS(c.validate(), CircuitError);
}

TEST_CASE("classical oracle rejects non-classical gates") {
    CircuitBuilder b(2);
    b.add(GateKind::H, {0});
    LogicalCircuit c = b.take();
    c.reg_a = {0};
    c.reg_b = {1};
    c.reg_sum = {1};
    CHECK_THROWS_AS(verify_adder_semantics(c, 0, 0), CircuitError);
}

TEST_CASE("serialization round-trips") {
    CircuitBuilder b(4);
    b.add(GateKind::H, {0});
    b.add(GateKind::CNOT, {0, 1});
    b.add(GateKind::Toffoli, {0, 1, 2});
    b.add(GateKind::T, {3});
    LogicalCircuit c = b.take();
    c.reg_a = {0, 1};
    c.reg_b = {2, 3};
    c.reg_sum = {2, 3};

    const std::string text = c.serialize();
    LogicalCircuit d = LogicalCircuit::parse_string(text);
    CHECK(d.n_qubits == c.n_qubits);
    CHECK(d.gates.size() == c.gates.size());
    CHECK(d.reg_sum == c.reg_sum);
    CHECK(d.edges() == c.edges());
    CHECK(d.serialize() == text);
}

TEST_CASE("parse rejects corrupt input") {
    CHECK_THROWS_AS(LogicalCircuit::parse_string("nonsense"), IoError);
    CHECK_THROWS_AS(LogicalCircuit::parse_string("circuit v1\nnqubits 2\ngates 1\n0 Nope 0\n"),
                    CircuitError);
}
