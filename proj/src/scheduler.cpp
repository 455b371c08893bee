#include "rpsim/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>

namespace rpsim {

const char* noise_source_name(NoiseSource s) {
    switch (s) {
    case NoiseSource::Shuttling: return "Shuttling";
    case NoiseSource::Teleportation: return "Teleportation";
    case NoiseSource::Memory: return "Memory";
    case NoiseSource::Gate: return "Gate";
    }
    return "?";
}

CriticalPathBreakdown update_critical_path(const CriticalPathBreakdown& b, const ScheduledOp& op) {
    if (op.t_finish <= b.t_total)
        return b;
    const usec dT = op.t_finish - b.t_total;
    const usec exec = op.t_finish - op.t_start;
    const usec dD = op.d_anc + op.d_shut + op.d_tel + op.d_swp;
    const usec denom = dD + exec;
    CriticalPathBreakdown out = b;
    if (denom <= 0.0) {
        out.t_gate += dT;
    } else {
        out.t_anc += dT * op.d_anc / denom;
        out.t_shut += dT * op.d_shut / denom;
        out.t_tel += dT * op.d_tel / denom;
        out.t_swp += dT * op.d_swp / denom;
        out.t_gate += dT * exec / denom;
    }
    out.t_total = op.t_finish;
    return out;
}

namespace {

struct PerfCache {
    std::array<usec, kLogicalOpCount> lat{};
    std::array<prob, kLogicalOpCount> fail{};
    usec epr_lat = 0; // at the machine's switch height
    prob epr_fail = 0;
    usec tile_shuttle = 0;
    prob shuttle_fail_per_tile = 0;
    usec t_coh = 0;

    usec l(LogicalOp op) const { return lat[static_cast<int>(op)]; }
    prob f(LogicalOp op) const { return fail[static_cast<int>(op)]; }
};

PerfCache make_cache(const TilePerfDatabase& db, const DeviceParams& params, int height) {
    PerfCache c;
    for (int i = 0; i < kLogicalOpCount; ++i) {
        const auto op = static_cast<LogicalOp>(i);
        c.lat[i] = db.at(op).latency(params, 1);
        c.fail[i] = db.at(op).failure(params);
    }
    auto [el, ef] = logical_epr_perf(db, params, height);
    c.epr_lat = el;
    c.epr_fail = ef;
    c.tile_shuttle = params.t_shutt_tile;
    const prob pg = params.effective_p_gate();
    c.shuttle_fail_per_tile = kShuttleFailCoeffPerTile * pg * pg;
    c.t_coh = params.t_coh;
    return c;
}

prob idle_error(usec window, usec t_coh) {
    // Residual after the code absorbs single faults: an uncorrectable pair
    // of decoherence events within one exposure window.
    const double raw = -std::expm1(-window / t_coh);
    return raw * raw;
}

LogicalOp primary_op_for(GateKind k, uint8_t) {
    switch (k) {
    case GateKind::X:
    case GateKind::Z:
        return LogicalOp::PauliXZ;
    case GateKind::H:
        return LogicalOp::Hadamard;
    case GateKind::CNOT:
        return LogicalOp::CNOT;
    case GateKind::Measure:
        return LogicalOp::Measurement;
    case GateKind::TeleportIntoMagic:
        return LogicalOp::TeleportData;
    case GateKind::PrepMagicT:
        return LogicalOp::PrepTMagic;
    case GateKind::PrepMagicToffoli:
        return LogicalOp::PrepToffoliMagic;
    case GateKind::ECRound:
        return LogicalOp::L2ErrorCorrection;
    default:
        throw ScheduleError(std::string("circuit is not fault-tolerantly expanded: found ") +
                            gate_kind_name(k));
    }
}

bool is_prep(GateKind k) {
    return k == GateKind::PrepMagicT || k == GateKind::PrepMagicToffoli;
}

struct HeapEntry {
    double priority;
    uint32_t id;
    bool operator<(const HeapEntry& o) const {
        if (priority != o.priority)
            return priority < o.priority; // max-heap on downstream length
        return id > o.id;                 // then lowest id first
    }
};

class SchedulerState {
public:
    SchedulerState(const LogicalCircuit& c, Machine& m, const QubitMap& map,
                   const DeviceParams& params)
        : circ_(c), machine_(m), cache_(make_cache(*m.db, params, m.switch_height)) {
        avail_.assign(c.n_qubits, 0.0);
        pos_.resize(c.n_qubits);
        for (auto& occ : m.data_occupant)
            std::fill(occ.begin(), occ.end(), -1);
        for (uint32_t q = 0; q < c.n_qubits; ++q) {
            if (q >= map.position.size() || map.position[q].seg < 0)
                throw ScheduleError("unmapped qubit " + std::to_string(q));
            pos_[q] = map.position[q];
            const auto [seg, slot] = map.position[q];
            if (seg >= static_cast<int32_t>(m.segments.size()) || slot < 0 ||
                slot >= m.segments[seg].n_data)
                throw ScheduleError("qubit " + std::to_string(q) + " mapped off the machine");
            if (m.data_occupant[seg][slot] != -1)
                throw ScheduleError("two qubits mapped to one data tile");
            m.data_occupant[seg][slot] = static_cast<int>(q);
        }
        comm_free_.resize(m.segments.size());
        anc_free_.resize(m.segments.size());
        for (size_t s = 0; s < m.segments.size(); ++s) {
            comm_free_[s].assign(m.segments[s].n_comm, 0.0);
            anc_free_[s].assign(m.segments[s].n_anc, 0.0);
        }
        sched_.total_rows = m.total_data_tiles;
        sched_.row_occupied.assign(m.total_data_tiles, {});
        for (uint32_t q = 0; q < c.n_qubits; ++q)
            sched_.row_occupied[row_of(q)].push_back({0.0, -1.0});
    }

    Schedule run();

private:
    int row_of(uint32_t q) const { return machine_.data_row(pos_[q].seg, pos_[q].slot); }

    int tile_pos_of_slot(int slot) const { return slot; }
    // Magic-state teleports shuttle to the ancilla region entrance; which
    // factory inside serves them does not change the travel.
    int anc_region_pos(int seg) const { return machine_.segments[seg].n_data; }

    void push_op(ScheduledOp op) {
        if (op.p_fail >= 1.0) {
            op.p_fail = std::nextafter(1.0, 0.0);
            sched_.clamped = true;
        }
        sched_.ops.push_back(op);
    }

    // Books a logical entanglement link between two segments; returns its
    // completion time. Emits the generation record.
    usec book_epr(uint32_t gate_id, int seg_a, int seg_b, usec ready) {
        auto pick = [&](int seg) {
            auto& frees = comm_free_[seg];
            size_t best = 0;
            for (size_t i = 1; i < frees.size(); ++i)
                if (frees[i] < frees[best])
                    best = i;
            return best;
        };
        const size_t ta = pick(seg_a);
        const size_t tb = pick(seg_b);
        const usec start = std::max({ready, comm_free_[seg_a][ta], comm_free_[seg_b][tb]});
        const usec done = start + cache_.epr_lat;
        comm_free_[seg_a][ta] = done;
        comm_free_[seg_b][tb] = done;

        ScheduledOp op;
        op.gate_id = gate_id;
        op.op = LogicalOp::EPRGeneration;
        op.t_ready = ready;
        op.t_start = start;
        op.t_finish = done;
        op.p_fail = cache_.epr_fail;
        op.source = NoiseSource::Teleportation;
        op.seg = seg_a;
        push_op(op);
        return done;
    }

    // Closes the current occupancy span of a row and opens one elsewhere.
    void move_occupancy(uint32_t q, TilePos to, usec depart, usec arrive) {
        auto& spans_from = sched_.row_occupied[row_of(q)];
        if (!spans_from.empty() && spans_from.back().second < 0)
            spans_from.back().second = depart;
        machine_.data_occupant[pos_[q].seg][pos_[q].slot] = -1;
        pos_[q] = to;
        machine_.data_occupant[to.seg][to.slot] = static_cast<int>(q);
        sched_.row_occupied[machine_.data_row(to.seg, to.slot)].push_back({arrive, -1.0});
    }

    int find_free_slot(int seg) const {
        const auto& occ = machine_.data_occupant[seg];
        for (int i = 0; i < static_cast<int>(occ.size()); ++i)
            if (occ[i] == -1)
                return i;
        return -1;
    }

    // One-way teleport of q into a free slot of to_seg. Returns arrival time.
    usec relocate(uint32_t gate_id, uint32_t q, int to_seg, int to_slot) {
        const usec ready = avail_[q];
        const int from_seg = pos_[q].seg;
        const int from_row = row_of(q);
        const usec epr_done = book_epr(gate_id, from_seg, to_seg, ready);
        const usec arrive = epr_done + cache_.l(LogicalOp::TeleportData);

        ScheduledOp op;
        op.gate_id = gate_id;
        op.op = LogicalOp::TeleportData;
        op.t_ready = ready;
        op.t_start = epr_done;
        op.t_finish = arrive;
        op.p_fail = cache_.f(LogicalOp::TeleportData);
        op.source = NoiseSource::Gate;
        op.seg = to_seg;
        op.src_row = from_row;
        op.dst_row = machine_.data_row(to_seg, to_slot);
        op.row = op.dst_row;
        push_op(op);

        move_occupancy(q, TilePos{to_seg, to_slot}, epr_done, arrive);
        avail_[q] = arrive;
        return arrive;
    }

    // Evicting exchange: the victim v leaves the host for a free slot
    // elsewhere (storage-side first) or, when the machine is packed, for
    // q's own origin; q takes the vacated host tile. Two entanglement
    // links, two teleports.
    usec swap_relocate(uint32_t gate_id, uint32_t q, uint32_t v) {
        const usec ready = std::max(avail_[q], avail_[v]);
        const int seg_q = pos_[q].seg;
        const int seg_v = pos_[v].seg;

        TilePos victim_dest = pos_[q]; // packed machine: plain exchange
        for (int seg = static_cast<int>(machine_.segments.size()); seg-- > 0;) {
            if (seg == seg_v)
                continue;
            const int slot = find_free_slot(seg);
            if (slot >= 0) {
                victim_dest = TilePos{seg, slot};
                break;
            }
        }

        const bool packed_exchange = victim_dest == pos_[q];

        const usec e_out = book_epr(gate_id, seg_v, victim_dest.seg, ready);
        const usec e_in = book_epr(gate_id, seg_q, seg_v, ready);
        const usec tele = cache_.l(LogicalOp::TeleportData);
        // q lands once its link is ready and the victim has left the tile;
        // a packed exchange completes atomically over both links.
        const usec in_done = std::max(e_in, e_out) + tele;
        const usec out_done = packed_exchange ? in_done : e_out + tele;

        const TilePos host_slot = pos_[v];
        const TilePos q_origin = pos_[q];
        auto emit_leg = [&](usec done, int from_row, int to_row, int seg) {
            ScheduledOp op;
            op.gate_id = gate_id;
            op.op = LogicalOp::TeleportData;
            op.t_ready = ready;
            op.t_start = done - tele;
            op.t_finish = done;
            op.p_fail = cache_.f(LogicalOp::TeleportData);
            op.source = NoiseSource::Gate;
            op.seg = seg;
            op.src_row = from_row;
            op.dst_row = to_row;
            op.row = to_row;
            push_op(op);
        };
        const int row_q = row_of(q);
        const int row_v = row_of(v);
        const int row_dest = machine_.data_row(victim_dest.seg, victim_dest.slot);
        emit_leg(out_done, row_v, row_dest, victim_dest.seg);
        emit_leg(in_done, row_q, row_v, seg_v);

        auto close_span = [&](int row, usec at) {
            auto& spans = sched_.row_occupied[row];
            if (!spans.empty() && spans.back().second < 0)
                spans.back().second = at;
        };
        close_span(row_v, out_done - tele);
        close_span(row_q, in_done - tele);
        sched_.row_occupied[row_dest].push_back({out_done, -1.0});
        sched_.row_occupied[row_v].push_back({in_done, -1.0});

        machine_.data_occupant[host_slot.seg][host_slot.slot] = -1;
        machine_.data_occupant[q_origin.seg][q_origin.slot] = -1;
        machine_.data_occupant[victim_dest.seg][victim_dest.slot] = static_cast<int>(v);
        machine_.data_occupant[host_slot.seg][host_slot.slot] = static_cast<int>(q);
        pos_[v] = victim_dest;
        pos_[q] = host_slot;
        avail_[v] = out_done;
        avail_[q] = in_done;
        return in_done;
    }

    usec shuttle(uint32_t gate_id, uint32_t q, int to_tile_pos, usec from_time) {
        const int from_tile = tile_pos_of_slot(pos_[q].slot);
        const int dist = std::abs(from_tile - to_tile_pos);
        if (dist == 0)
            return from_time;
        const usec arrive = from_time + dist * cache_.tile_shuttle;
        ScheduledOp op;
        op.gate_id = gate_id;
        op.op = LogicalOp::ShuttleMove;
        op.t_ready = from_time;
        op.t_start = from_time;
        op.t_finish = arrive;
        op.p_fail = cache_.shuttle_fail_per_tile * dist;
        op.source = NoiseSource::Shuttling;
        op.seg = pos_[q].seg;
        op.row = row_of(q);
        push_op(op);
        return arrive;
    }

    // First use of q that has not been scheduled yet (excluding the gate
    // currently being placed, which marks itself scheduled first).
    uint32_t next_use_after(uint32_t q, uint32_t) const {
        const auto& uses = uses_[q];
        uint32_t& ptr = use_ptr_[q];
        while (ptr < uses.size() && scheduled_[uses[ptr]])
            ++ptr;
        return ptr == uses.size() ? UINT32_MAX : uses[ptr];
    }

    void schedule_gate(uint32_t gid);
    void schedule_teleport(uint32_t gid);

    const LogicalCircuit& circ_;
    Machine& machine_;
    PerfCache cache_;

    std::vector<usec> avail_;
    std::vector<TilePos> pos_;
    std::vector<std::vector<usec>> comm_free_;
    std::vector<std::vector<usec>> anc_free_;
    std::vector<std::vector<uint32_t>> uses_; // gate ids touching each qubit
    mutable std::vector<uint32_t> use_ptr_;   // per-qubit cursor into uses_
    std::vector<bool> scheduled_;
    std::vector<uint32_t> prep_of_;           // teleport gate -> prep gate
    Schedule sched_;

public:
    void prepare_static_tables();
    std::vector<double> downstream_;
};

void SchedulerState::prepare_static_tables() {
    const size_t n = circ_.gates.size();
    uses_.assign(circ_.n_qubits, {});
    use_ptr_.assign(circ_.n_qubits, 0);
    scheduled_.assign(n, false);
    prep_of_.assign(n, UINT32_MAX);
    for (const auto& g : circ_.gates) {
        for (int i = 0; i < g.n_ops; ++i)
            uses_[g.q[i]].push_back(g.id);
        if (g.kind == GateKind::TeleportIntoMagic) {
            for (uint32_t i = circ_.pred_offsets[g.id]; i < circ_.pred_offsets[g.id + 1]; ++i)
                if (is_prep(circ_.gates[circ_.preds[i]].kind))
                    prep_of_[g.id] = circ_.preds[i];
            if (prep_of_[g.id] == UINT32_MAX)
                throw ScheduleError("teleport without a magic-state preparation");
        }
    }

    // Longest downstream latency, for the list-scheduling priority.
    downstream_.assign(n, 0.0);
    std::vector<double> own(n, 0.0);
    for (const auto& g : circ_.gates)
        own[g.id] = cache_.l(primary_op_for(g.kind, g.n_ops));
    for (size_t gi = n; gi-- > 0;) {
        downstream_[gi] += own[gi];
        for (uint32_t i = circ_.pred_offsets[gi]; i < circ_.pred_offsets[gi + 1]; ++i) {
            const uint32_t p = circ_.preds[i];
            downstream_[p] = std::max(downstream_[p], downstream_[gi]);
        }
    }
}

void SchedulerState::schedule_teleport(uint32_t gid) {
    const LogicalGate& g = circ_.gates[gid];
    const uint32_t prep_gid = prep_of_[gid];
    const GateKind prep_kind = circ_.gates[prep_gid].kind;
    const LogicalOp prep_op = prep_kind == GateKind::PrepMagicT ? LogicalOp::PrepTMagic
                                                                : LogicalOp::PrepToffoliMagic;

    usec t_ready = 0;
    for (int i = 0; i < g.n_ops; ++i)
        t_ready = std::max(t_ready, avail_[g.q[i]]);

    // Host: computational segment holding the most operands; when none
    // does, the one with the most free data capacity.
    int host = -1;
    {
        std::vector<int> count(machine_.cfg.n_cs, 0);
        for (int i = 0; i < g.n_ops; ++i)
            if (pos_[g.q[i]].seg < machine_.cfg.n_cs)
                ++count[pos_[g.q[i]].seg];
        int best = 0;
        for (int s = 0; s < machine_.cfg.n_cs; ++s)
            if (count[s] > best) {
                best = count[s];
                host = s;
            }
        if (host < 0) {
            int best_free = -1;
            for (int s = 0; s < machine_.cfg.n_cs; ++s) {
                int free = 0;
                for (int x : machine_.data_occupant[s])
                    free += (x == -1) ? 1 : 0;
                if (free > best_free) {
                    best_free = free;
                    host = s;
                }
            }
        }
    }

    // Magic state: ancilla tile with the earliest completion.
    auto& anc = anc_free_[host];
    if (anc.empty())
        throw ScheduleError("host segment has no ancilla tile");
    size_t tile = 0;
    for (size_t i = 1; i < anc.size(); ++i)
        if (anc[i] < anc[tile])
            tile = i;
    const usec prep_start = anc[tile];
    const usec magic_ready = prep_start + cache_.l(prep_op);

    {
        ScheduledOp op;
        op.gate_id = prep_gid;
        op.op = prep_op;
        op.t_ready = 0;
        op.t_start = prep_start;
        op.t_finish = magic_ready;
        op.p_fail = cache_.f(prep_op);
        op.source = NoiseSource::Gate;
        op.seg = host;
        push_op(op);
    }

    const int anc_pos = anc_region_pos(host);

    // Stage 1: operands already hosted shuttle to the ancilla tile.
    usec m1 = t_ready;
    for (int i = 0; i < g.n_ops; ++i) {
        const uint32_t q = g.q[i];
        if (pos_[q].seg == host)
            m1 = std::max(m1, shuttle(gid, q, anc_pos, avail_[q]));
    }

    // Stage 2: plain teleport-ins into free slots.
    usec m2 = m1;
    std::vector<uint32_t> needs_swap;
    for (int i = 0; i < g.n_ops; ++i) {
        const uint32_t q = g.q[i];
        if (pos_[q].seg == host)
            continue;
        const int slot = find_free_slot(host);
        if (slot < 0) {
            needs_swap.push_back(q);
            continue;
        }
        usec arrive = relocate(gid, q, host, slot);
        arrive = shuttle(gid, q, anc_pos, arrive);
        avail_[q] = arrive;
        m2 = std::max(m2, arrive);
    }

    // Stage 3: evicting exchanges when the host is full.
    usec m3 = m2;
    for (uint32_t q : needs_swap) {
        // Victim: the resident needed again latest; among those, the one
        // free earliest, so the exchange is not held up by a busy ion.
        int victim = -1;
        uint32_t victim_next = 0;
        const auto& occ = machine_.data_occupant[host];
        for (int slot = 0; slot < static_cast<int>(occ.size()); ++slot) {
            const int cand = occ[slot];
            if (cand < 0)
                continue;
            bool is_operand = false;
            for (int i = 0; i < g.n_ops; ++i)
                if (g.q[i] == static_cast<uint32_t>(cand))
                    is_operand = true;
            if (is_operand)
                continue;
            const uint32_t nu = next_use_after(static_cast<uint32_t>(cand), gid);
            const bool better =
                victim < 0 || nu > victim_next ||
                (nu == victim_next &&
                 (avail_[cand] < avail_[victim] ||
                  (avail_[cand] == avail_[victim] && cand < victim)));
            if (better) {
                victim = cand;
                victim_next = nu;
            }
        }
        if (victim < 0)
            throw ScheduleError("no data tile available in host segment for teleport operands");
        usec arrive = swap_relocate(gid, q, static_cast<uint32_t>(victim));
        arrive = shuttle(gid, q, anc_pos, arrive);
        avail_[q] = arrive;
        m3 = std::max(m3, arrive);
    }

    // Stage 4: wait for the magic state.
    const usec m4 = std::max(m3, magic_ready);

    ScheduledOp op;
    op.gate_id = gid;
    op.op = LogicalOp::TeleportData;
    op.t_ready = t_ready;
    op.t_start = m4;
    op.t_finish = m4 + cache_.l(LogicalOp::TeleportData);
    op.d_shut = m1 - t_ready;
    op.d_tel = m2 - m1;
    op.d_swp = m3 - m2;
    op.d_anc = m4 - m3;
    op.p_fail = cache_.f(LogicalOp::TeleportData);
    op.source = NoiseSource::Gate;
    op.seg = host;
    op.row = row_of(g.q[0]);
    op.primary = true;
    push_op(op);

    // Queued magic states decohere while waiting for consumption.
    if (m4 > magic_ready) {
        ScheduledOp mem;
        mem.gate_id = prep_gid;
        mem.op = LogicalOp::MemoryIdle;
        mem.t_ready = magic_ready;
        mem.t_start = magic_ready;
        mem.t_finish = m4;
        mem.p_fail = idle_error(m4 - magic_ready, cache_.t_coh);
        mem.source = NoiseSource::Memory;
        mem.seg = host;
        push_op(mem);
    }

    anc[tile] = op.t_finish;
    for (int i = 0; i < g.n_ops; ++i)
        avail_[g.q[i]] = op.t_finish;
    sched_.breakdown = update_critical_path(sched_.breakdown, op);
}

void SchedulerState::schedule_gate(uint32_t gid) {
    scheduled_[gid] = true;
    const LogicalGate& g = circ_.gates[gid];
    if (g.kind == GateKind::TeleportIntoMagic) {
        schedule_teleport(gid);
        return;
    }

    usec t_ready = 0;
    for (int i = 0; i < g.n_ops; ++i)
        t_ready = std::max(t_ready, avail_[g.q[i]]);

    ScheduledOp op;
    op.gate_id = gid;
    op.t_ready = t_ready;
    op.source = NoiseSource::Gate;
    op.primary = true;

    if (g.kind == GateKind::CNOT && pos_[g.q[0]].seg != pos_[g.q[1]].seg) {
        // Remote gate over an entanglement link; operands stay put.
        const usec epr_done =
            book_epr(gid, pos_[g.q[0]].seg, pos_[g.q[1]].seg, t_ready);
        op.op = LogicalOp::CNOT;
        op.t_start = std::max(t_ready, epr_done);
        op.d_tel = op.t_start - t_ready;
        op.t_finish = op.t_start + cache_.l(LogicalOp::TeleportData) + cache_.l(LogicalOp::CNOT);
        op.p_fail = cache_.f(LogicalOp::TeleportData) + cache_.f(LogicalOp::CNOT);
        op.seg = pos_[g.q[1]].seg;
        op.row = row_of(g.q[1]);
    } else if (g.kind == GateKind::CNOT) {
        // In-segment two-qubit gate: the control streams through the
        // shuttling channel to the target's tile.
        const usec arrive = shuttle(gid, g.q[0], tile_pos_of_slot(pos_[g.q[1]].slot),
                                    avail_[g.q[0]]);
        op.op = LogicalOp::CNOT;
        op.t_start = std::max(t_ready, arrive);
        op.d_shut = op.t_start - t_ready;
        op.t_finish = op.t_start + cache_.l(LogicalOp::CNOT);
        op.p_fail = cache_.f(LogicalOp::CNOT);
        op.seg = pos_[g.q[1]].seg;
        op.row = row_of(g.q[1]);
    } else {
        op.op = primary_op_for(g.kind, g.n_ops);
        op.t_start = t_ready;
        op.t_finish = t_ready + cache_.l(op.op);
        op.p_fail = cache_.f(op.op);
        op.seg = pos_[g.q[0]].seg;
        op.row = row_of(g.q[0]);
    }

    push_op(op);
    for (int i = 0; i < g.n_ops; ++i)
        avail_[g.q[i]] = op.t_finish;
    sched_.breakdown = update_critical_path(sched_.breakdown, op);
}

Schedule SchedulerState::run() {
    prepare_static_tables();
    const size_t n = circ_.gates.size();

    // Readiness counts exclude preparation edges: preparations are placed
    // lazily when their teleport schedules.
    std::vector<uint32_t> indegree(n, 0);
    std::vector<uint32_t> succ_offsets(n + 1, 0);
    std::vector<uint32_t> succs(circ_.preds.size());
    for (size_t gi = 0; gi < n; ++gi)
        for (uint32_t i = circ_.pred_offsets[gi]; i < circ_.pred_offsets[gi + 1]; ++i)
            ++succ_offsets[circ_.preds[i] + 1];
    for (size_t i = 0; i < n; ++i)
        succ_offsets[i + 1] += succ_offsets[i];
    {
        std::vector<uint32_t> cursor(succ_offsets.begin(), succ_offsets.end() - 1);
        for (size_t gi = 0; gi < n; ++gi)
            for (uint32_t i = circ_.pred_offsets[gi]; i < circ_.pred_offsets[gi + 1]; ++i)
                succs[cursor[circ_.preds[i]]++] = static_cast<uint32_t>(gi);
    }
    for (size_t gi = 0; gi < n; ++gi) {
        uint32_t d = 0;
        for (uint32_t i = circ_.pred_offsets[gi]; i < circ_.pred_offsets[gi + 1]; ++i)
            if (!is_prep(circ_.gates[circ_.preds[i]].kind))
                ++d;
        indegree[gi] = d;
    }

    std::priority_queue<HeapEntry> heap;
    for (size_t gi = 0; gi < n; ++gi)
        if (indegree[gi] == 0 && !is_prep(circ_.gates[gi].kind))
            heap.push({downstream_[gi], static_cast<uint32_t>(gi)});

    size_t scheduled = 0, preps = 0;
    for (const auto& g : circ_.gates)
        preps += is_prep(g.kind) ? 1 : 0;

    while (!heap.empty()) {
        const uint32_t gid = heap.top().id;
        heap.pop();
        schedule_gate(gid);
        ++scheduled;
        for (uint32_t i = succ_offsets[gid]; i < succ_offsets[gid + 1]; ++i) {
            const uint32_t s = succs[i];
            if (--indegree[s] == 0 && !is_prep(circ_.gates[s].kind))
                heap.push({downstream_[s], s});
        }
    }
    if (scheduled + preps != n)
        throw ScheduleError("scheduling stalled with gates remaining"); // unreachable by construction

    // Close occupancy spans at the end of the run.
    for (auto& spans : sched_.row_occupied)
        for (auto& sp : spans)
            if (sp.second < 0)
                sp.second = sched_.breakdown.t_total;
    return std::move(sched_);
}

} // namespace

Schedule schedule(const LogicalCircuit& circuit, Machine& machine, const QubitMap& map,
                  const DeviceParams& params, const SchedulerOptions&) {
    for (const auto& g : circuit.gates) {
        if (g.kind == GateKind::Toffoli || g.kind == GateKind::T || g.kind == GateKind::TDagger)
            throw ScheduleError("circuit is not fault-tolerantly expanded");
        if (g.kind == GateKind::TeleportIntoMagic && g.n_ops == 3) {
            bool ok = false;
            for (int s = 0; s < machine.cfg.n_cs; ++s)
                ok = ok || machine.segments[s].n_data >= 3;
            if (!ok)
                throw ScheduleError(
                    "three-operand teleports need a computational segment with >= 3 data tiles");
        }
    }
    SchedulerState st(circuit, machine, map, params);
    return st.run();
}

void insert_error_correction(Schedule& sched, Machine& machine, const DeviceParams& params,
                             const SchedulerOptions& options) {
    const auto& db = *machine.db;
    const usec ec_lat = db.at(LogicalOp::L2ErrorCorrection).latency(params, 1);
    const prob ec_fail = db.at(LogicalOp::L2ErrorCorrection).failure(params);
    const usec threshold = options.ec_idle_threshold > 0 ? options.ec_idle_threshold : ec_lat;

    // Busy intervals per data row.
    std::vector<std::vector<std::pair<usec, usec>>> busy(sched.total_rows);
    for (const auto& op : sched.ops)
        if (op.row >= 0)
            busy[op.row].push_back({op.t_start, op.t_finish});

    struct Gap {
        usec start, end;
        int row, seg;
    };
    std::vector<Gap> gaps;
    for (int row = 0; row < sched.total_rows; ++row) {
        auto& b = busy[row];
        std::sort(b.begin(), b.end());
        int seg = 0;
        while (seg + 1 < static_cast<int>(machine.data_row_base.size()) &&
               machine.data_row_base[seg + 1] <= row)
            ++seg;
        for (const auto& span : sched.row_occupied[row]) {
            usec cursor = span.first;
            for (const auto& iv : b) {
                if (iv.second <= span.first || iv.first >= span.second)
                    continue;
                if (iv.first > cursor)
                    gaps.push_back({cursor, iv.first, row, seg});
                cursor = std::max(cursor, iv.second);
            }
            if (span.second > cursor)
                gaps.push_back({cursor, span.second, row, seg});
        }
    }
    std::sort(gaps.begin(), gaps.end(), [](const Gap& a, const Gap& b) {
        if (a.start != b.start)
            return a.start < b.start;
        return a.row < b.row;
    });

    std::vector<usec> ec_free(machine.segments.size(), 0.0);
    for (const auto& gap : gaps) {
        const usec length = gap.end - gap.start;
        if (length <= threshold)
            continue;
        long long rounds = static_cast<long long>(length / threshold);
        usec t = std::max(gap.start, ec_free[gap.seg]);
        while (rounds-- > 0 && t + ec_lat <= gap.end) {
            ScheduledOp op;
            op.gate_id = UINT32_MAX;
            op.op = LogicalOp::L2ErrorCorrection;
            op.t_ready = gap.start;
            op.t_start = t;
            op.t_finish = t + ec_lat;
            op.p_fail = ec_fail;
            op.source = NoiseSource::Gate;
            op.seg = gap.seg;
            op.row = gap.row;
            sched.ops.push_back(op);
            ec_free[gap.seg] = t + ec_lat;
            t = std::max(t + threshold, ec_free[gap.seg]);
        }
    }
}

void Schedule::serialize(std::ostream& out) const {
    char buf[512];
    size_t n_spans = 0;
    for (const auto& spans : row_occupied)
        n_spans += spans.size();
    out << "schedule v1\n";
    std::snprintf(buf, sizeof buf, "total %.6f rows %d ops %zu spans %zu memcharged %d clamped %d\n",
                  breakdown.t_total, total_rows, ops.size(), n_spans, memory_charged ? 1 : 0,
                  clamped ? 1 : 0);
    out << buf;
    std::snprintf(buf, sizeof buf, "breakdown anc %.6f shut %.6f tel %.6f swp %.6f gate %.6f\n",
                  breakdown.t_anc, breakdown.t_shut, breakdown.t_tel, breakdown.t_swp,
                  breakdown.t_gate);
    out << buf;
    for (const auto& op : ops) {
        std::snprintf(buf, sizeof buf,
                      "op %u %s %s ready %.6f start %.6f finish %.6f danc %.6f dshut %.6f "
                      "dtel %.6f dswp %.6f pfail %.17g src %s seg %d row %d from %d to %d\n",
                      op.gate_id, logical_op_name(op.op), op.primary ? "primary" : "aux",
                      op.t_ready, op.t_start, op.t_finish, op.d_anc, op.d_shut, op.d_tel,
                      op.d_swp, op.p_fail, noise_source_name(op.source), op.seg, op.row,
                      op.src_row, op.dst_row);
        out << buf;
    }
    for (int row = 0; row < total_rows; ++row)
        for (const auto& span : row_occupied[row]) {
            std::snprintf(buf, sizeof buf, "occ %d %.6f %.6f\n", row, span.first, span.second);
            out << buf;
        }
}

std::string Schedule::serialize() const {
    std::ostringstream ss;
    serialize(ss);
    return ss.str();
}

Schedule Schedule::parse(std::istream& in) {
    Schedule s;
    std::string word;
    in >> word;
    std::string version;
    in >> version;
    if (word != "schedule" || version != "v1")
        throw IoError("unrecognized schedule file header");
    size_t n_ops = 0, n_spans = 0;
    int memcharged = 0, clamped = 0;
    in >> word >> s.breakdown.t_total >> word >> s.total_rows >> word >> n_ops >> word >>
        n_spans >> word >> memcharged >> word >> clamped;
    s.memory_charged = memcharged != 0;
    s.clamped = clamped != 0;
    s.row_occupied.resize(std::max(0, s.total_rows));
    in >> word >> word >> s.breakdown.t_anc >> word >> s.breakdown.t_shut >> word >>
        s.breakdown.t_tel >> word >> s.breakdown.t_swp >> word >> s.breakdown.t_gate;
    s.ops.reserve(n_ops);
    for (size_t i = 0; i < n_ops; ++i) {
        ScheduledOp op;
        std::string kind, primary, source;
        in >> word >> op.gate_id >> kind >> primary;
        op.op = logical_op_from_name(kind);
        op.primary = primary == "primary";
        in >> word >> op.t_ready >> word >> op.t_start >> word >> op.t_finish;
        in >> word >> op.d_anc >> word >> op.d_shut >> word >> op.d_tel >> word >> op.d_swp;
        in >> word >> op.p_fail >> word >> source >> word >> op.seg >> word >> op.row;
        in >> word >> op.src_row >> word >> op.dst_row;
        for (int k = 0; k < kNoiseSourceCount; ++k)
            if (source == noise_source_name(static_cast<NoiseSource>(k)))
                op.source = static_cast<NoiseSource>(k);
        if (!in)
            throw IoError("truncated schedule file");
        s.ops.push_back(op);
    }
    for (size_t i = 0; i < n_spans; ++i) {
        int row;
        double a, b;
        in >> word >> row >> a >> b;
        if (!in || word != "occ" || row < 0 || row >= s.total_rows)
            throw IoError("truncated schedule file");
        s.row_occupied[row].push_back({a, b});
    }
    return s;
}

} // namespace rpsim
