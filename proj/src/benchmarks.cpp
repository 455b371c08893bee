#include "rpsim/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rpsim {

namespace {

uint32_t floor_log2(uint32_t n) {
    uint32_t l = 0;
    while ((2u << l) <= n)
        ++l;
    return l;
}

} // namespace

LogicalCircuit gen_qrca(uint32_t n) {
    if (n == 0)
        throw CircuitError("ripple-carry adder needs at least one bit");

    // Layout: a_i = i, b_i = n+i, incoming carry = 2n, carry-out = 2n+1.
    const uint32_t c0 = 2 * n;
    const uint32_t z = 2 * n + 1;
    CircuitBuilder bld(2 * n + 2);

    auto a = [&](uint32_t i) { return i; };
    auto b = [&](uint32_t i) { return n + i; };
    auto carry = [&](uint32_t i) { return i == 0 ? c0 : a(i - 1); };

    // Forward majority cascade: carry rides on the a register.
    for (uint32_t i = 0; i < n; ++i) {
        bld.add(GateKind::CNOT, {a(i), b(i)});
        bld.add(GateKind::CNOT, {a(i), carry(i)});
        bld.add(GateKind::Toffoli, {carry(i), b(i), a(i)});
    }
    bld.add(GateKind::CNOT, {a(n - 1), z});

    // Unmajority-and-add, the three-CNOT variant.
    for (uint32_t ii = n; ii-- > 0;) {
        const uint32_t c = carry(ii);
        bld.add(GateKind::X, {b(ii)});
        bld.add(GateKind::CNOT, {c, b(ii)});
        bld.add(GateKind::Toffoli, {c, b(ii), a(ii)});
        bld.add(GateKind::X, {b(ii)});
        bld.add(GateKind::CNOT, {a(ii), c});
        bld.add(GateKind::CNOT, {a(ii), b(ii)});
    }

    LogicalCircuit circ = bld.take();
    for (uint32_t i = 0; i < n; ++i) {
        circ.reg_a.push_back(a(i));
        circ.reg_b.push_back(b(i));
        circ.reg_sum.push_back(b(i));
    }
    circ.reg_sum.push_back(z);
    return circ;
}

LogicalCircuit gen_qcla(uint32_t n) {
    if (n < 2)
        throw CircuitError("carry-lookahead adder needs at least two bits");

    const uint32_t L = floor_log2(n);

    // Propagate-product ancilla indices: level t (1 <= t < L) holds blocks
    // m in [1, n/2^t); level 0 lives in the b register.
    std::vector<std::vector<uint32_t>> pidx(L);
    uint32_t next = 3 * n; // after a, b and the carry array
    for (uint32_t t = 1; t < L; ++t) {
        const uint32_t blocks = n >> t;
        pidx[t].assign(blocks, UINT32_MAX);
        for (uint32_t m = 1; m < blocks; ++m)
            pidx[t][m] = next++;
    }
    const uint32_t n_qubits = next;

    CircuitBuilder bld(n_qubits);
    auto a = [&](uint32_t i) { return i; };
    auto b = [&](uint32_t i) { return n + i; };
    auto c = [&](uint32_t i) { return 2 * n + (i - 1); }; // carries c_1..c_n
    auto p = [&](uint32_t t, uint32_t m) -> uint32_t {
        return t == 0 ? b(m) : pidx[t][m];
    };

    // Generate and propagate layers.
    for (uint32_t i = 0; i < n; ++i)
        bld.add(GateKind::Toffoli, {a(i), b(i), c(i + 1)});
    for (uint32_t i = 0; i < n; ++i)
        bld.add(GateKind::CNOT, {a(i), b(i)});

    // Fan-in rounds: products of adjacent propagate blocks.
    for (uint32_t t = 1; t < L; ++t)
        for (uint32_t m = 1; m < (n >> t); ++m)
            bld.add(GateKind::Toffoli, {p(t - 1, 2 * m), p(t - 1, 2 * m + 1), p(t, m)});

    // Carry-merge rounds: carries at block boundaries.
    for (uint32_t t = 1; t <= L; ++t)
        for (uint32_t m = 0; m < (n >> t); ++m)
            bld.add(GateKind::Toffoli,
                    {c((m << t) + (1u << (t - 1))), p(t - 1, 2 * m + 1), c((m + 1) << t)});

    // Back-fill rounds: carries interior to the blocks.
    const uint32_t t_top = floor_log2(std::max(2u, (2 * n) / 3));
    for (uint32_t t = t_top; t >= 1; --t) {
        for (uint32_t m = 1; (m << t) + (1u << (t - 1)) <= n; ++m)
            bld.add(GateKind::Toffoli, {c(m << t), p(t - 1, 2 * m), c((m << t) + (1u << (t - 1)))});
        if (t == 1)
            break;
    }

    // Sum layer: b_i ^= c_i; bit 0 needs no carry, the top carry is bit n.
    for (uint32_t i = 1; i < n; ++i)
        bld.add(GateKind::CNOT, {c(i), b(i)});

    LogicalCircuit circ = bld.take();
    for (uint32_t i = 0; i < n; ++i) {
        circ.reg_a.push_back(a(i));
        circ.reg_b.push_back(b(i));
        circ.reg_sum.push_back(b(i));
    }
    circ.reg_sum.push_back(c(n));
    return circ;
}

LogicalCircuit gen_aqft(uint32_t n, const AqftParams& params) {
    if (n == 0)
        throw CircuitError("transform needs at least one qubit");
    if (params.k_max == 0)
        throw CircuitError("k_max must be positive");
    if (params.t_count == 0 || params.t_count > params.seq_len)
        throw CircuitError("rotation sequence needs 0 < t_count <= seq_len");

    CircuitBuilder bld(n);
    uint64_t cr_count = 0;
    uint64_t rot_count = 0;

    const uint32_t n_cliff = params.seq_len - params.t_count;
    // Clifford separators per T slot, distributed as evenly as possible.
    const uint32_t base = n_cliff / params.t_count;
    const uint32_t extra = n_cliff % params.t_count;

    auto emit_rotation = [&](uint32_t q, bool dagger) {
        static constexpr GateKind cliffs[3] = {GateKind::H, GateKind::X, GateKind::Z};
        for (uint32_t i = 0; i < params.t_count; ++i) {
            uint32_t seps = base + (i < extra ? 1 : 0);
            for (uint32_t s = 0; s < seps; ++s)
                bld.add(cliffs[(i + s) % 3], {q});
            bld.add(dagger ? GateKind::TDagger : GateKind::T, {q});
        }
        ++rot_count;
    };

    for (uint32_t j = 0; j < n; ++j) {
        bld.add(GateKind::H, {j});
        const uint32_t reach = std::min(j, params.k_max);
        // The controlled rotations on one target commute; farthest control
        // first lets each qubit's ladder overlap its neighbours'.
        for (uint32_t k = reach; k >= 1; --k) {
            const uint32_t ctrl = j - k;
            // Controlled rotation of angle pi/2^k on (ctrl, j): two CNOTs
            // around two half-angle rotations on the target.
            bld.add(GateKind::CNOT, {ctrl, j});
            emit_rotation(j, true);
            bld.add(GateKind::CNOT, {ctrl, j});
            emit_rotation(j, false);
            ++cr_count;
        }
    }

    LogicalCircuit circ = bld.take();
    circ.controlled_rotation_count = cr_count;
    circ.rotation_count = rot_count;
    return circ;
}

LogicalCircuit expand_fault_tolerant(const LogicalCircuit& circuit) {
    CircuitBuilder bld(circuit.n_qubits);
    for (const auto& g : circuit.gates) {
        switch (g.kind) {
        case GateKind::X:
        case GateKind::Z:
        case GateKind::H:
        case GateKind::CNOT:
        case GateKind::Measure:
        case GateKind::ECRound:
            bld.add(g.kind, g.q.data(), g.n_ops);
            break;
        case GateKind::Toffoli: {
            uint32_t prep = bld.add(GateKind::PrepMagicToffoli, nullptr, 0);
            bld.add(GateKind::TeleportIntoMagic, g.q.data(), 3, prep);
            break;
        }
        case GateKind::T:
        case GateKind::TDagger: {
            uint32_t prep = bld.add(GateKind::PrepMagicT, nullptr, 0);
            bld.add(GateKind::TeleportIntoMagic, g.q.data(), 1, prep);
            break;
        }
        default:
            throw CircuitError(std::string("cannot expand gate kind ") +
                               gate_kind_name(g.kind));
        }
    }
    LogicalCircuit out = bld.take();
    out.reg_a = circuit.reg_a;
    out.reg_b = circuit.reg_b;
    out.reg_sum = circuit.reg_sum;
    out.controlled_rotation_count = circuit.controlled_rotation_count;
    out.rotation_count = circuit.rotation_count;
    return out;
}

} // namespace rpsim
