#include "rpsim/arch.hpp"

#include <json.hpp>

#include <fstream>
#include <numeric>
#include <sstream>

namespace rpsim {

using nlohmann::json;

SsConfig ArchConfig::effective_ss() const {
    SsConfig out = ss;
    if (out.n_data <= 0)
        out.n_data = cs.n_data + 2 * cs.n_anc;
    if (out.n_comm <= 0)
        out.n_comm = cs.n_comm;
    return out;
}

void ArchConfig::validate() const {
    if (n_seg < 1)
        throw ConfigError("architecture needs at least one segment");
    if (n_cs < 1 || n_cs > n_seg)
        throw ConfigError("computational segment count must satisfy 1 <= n_cs <= n_seg");
    if (n_ec != 1)
        throw ConfigError("exactly one error-correction tile per segment is supported");
    const SsConfig ess = effective_ss();
    if (cs.n_data < 1 || cs.n_comm < 1 || ess.n_data < 1 || ess.n_comm < 1)
        throw ConfigError("every segment must hold at least one data and one communication tile");
    if (cs.n_anc < 1)
        throw ConfigError("computational segments need at least one ancilla tile");
    if (seg_qubit_cap != 5000 && seg_qubit_cap != 10000)
        throw ConfigError("segment qubit cap must be 5000 or 10000");
    if (budget_ntq < 1)
        throw ConfigError("qubit budget must be positive");
}

namespace {

long long tile_qubits(TileType t) { return build_tile(t).physical_qubits; }

} // namespace

long long segment_qubit_count(const ArchConfig& cfg, bool computational) {
    const SsConfig ess = cfg.effective_ss();
    long long q = tile_qubits(TileType::ErrorCorrection) * cfg.n_ec;
    if (computational) {
        q += cfg.cs.n_data * tile_qubits(TileType::Data);
        q += cfg.cs.n_anc * tile_qubits(TileType::Ancilla);
        q += cfg.cs.n_comm * tile_qubits(TileType::Communication);
    } else {
        q += ess.n_data * tile_qubits(TileType::Data);
        q += ess.n_comm * tile_qubits(TileType::Communication);
    }
    return q;
}

long long qubit_count(const ArchConfig& cfg) {
    if (cfg.n_seg == 0)
        return 0;
    return cfg.n_cs * segment_qubit_count(cfg, true) +
           (cfg.n_seg - cfg.n_cs) * segment_qubit_count(cfg, false);
}

int switch_height_for(int n_seg) {
    // One switch connects up to 20 segments; trees of height h reach 20^h.
    int h = 1;
    long long reach = 20;
    while (reach < n_seg && h < 3) {
        reach *= 20;
        ++h;
    }
    if (reach < n_seg)
        throw TooManySegments("segment count " + std::to_string(n_seg) +
                              " exceeds the reach of a height-3 switch tree (8000)");
    return h;
}

long long Machine::physical_qubits() const {
    long long q = 0;
    for (const auto& s : segments) {
        q += std::accumulate(s.data_tile_qubits.begin(), s.data_tile_qubits.end(), 0ll);
        q += std::accumulate(s.anc_tile_qubits.begin(), s.anc_tile_qubits.end(), 0ll);
        q += s.n_comm * tile_qubits(TileType::Communication);
        q += tile_qubits(TileType::ErrorCorrection);
    }
    return q;
}

Machine build_machine(const ArchConfig& cfg, const TilePerfDatabase& db) {
    cfg.validate();

    const long long per_cs = segment_qubit_count(cfg, true);
    const long long per_ss = segment_qubit_count(cfg, false);
    if (per_cs > cfg.seg_qubit_cap)
        throw SegmentCapExceeded("computational segment holds " + std::to_string(per_cs) +
                                 " qubits, cap is " + std::to_string(cfg.seg_qubit_cap));
    if (cfg.n_seg > cfg.n_cs && per_ss > cfg.seg_qubit_cap)
        throw SegmentCapExceeded("storage segment holds " + std::to_string(per_ss) +
                                 " qubits, cap is " + std::to_string(cfg.seg_qubit_cap));
    const long long total = qubit_count(cfg);
    if (total > cfg.budget_ntq)
        throw BudgetExceeded("configuration needs " + std::to_string(total) +
                             " qubits, exceeding the budget of " +
                             std::to_string(cfg.budget_ntq) + " by " +
                             std::to_string(total - cfg.budget_ntq));

    Machine m;
    m.cfg = cfg;
    m.db = &db;
    m.switch_height = switch_height_for(cfg.n_seg);
    const SsConfig ess = cfg.effective_ss();
    m.segments.reserve(cfg.n_seg);
    for (int s = 0; s < cfg.n_seg; ++s) {
        Segment seg;
        seg.computational = s < cfg.n_cs;
        seg.n_data = seg.computational ? cfg.cs.n_data : ess.n_data;
        seg.n_anc = seg.computational ? cfg.cs.n_anc : 0;
        seg.n_comm = seg.computational ? cfg.cs.n_comm : ess.n_comm;
        seg.data_tile_qubits.assign(seg.n_data, build_tile(TileType::Data).physical_qubits);
        seg.anc_tile_qubits.assign(seg.n_anc, build_tile(TileType::Ancilla).physical_qubits);
        m.data_row_base.push_back(m.total_data_tiles);
        m.total_data_tiles += seg.n_data;
        m.segments.push_back(std::move(seg));
    }
    m.data_occupant.resize(cfg.n_seg);
    for (int s = 0; s < cfg.n_seg; ++s)
        m.data_occupant[s].assign(m.segments[s].n_data, -1);
    return m;
}

void reallocate_tile(Machine& machine, int segment_id, ReallocDirection direction) {
    if (segment_id < 0 || segment_id >= static_cast<int>(machine.segments.size()))
        throw ConfigError("reallocate_tile: no such segment");
    Segment& seg = machine.segments[segment_id];
    auto& occ = machine.data_occupant[segment_id];

    if (direction == ReallocDirection::AncToData) {
        if (seg.n_anc < 1)
            throw ConfigError("reallocate_tile: segment has no ancilla tile to convert");
        const int phys = seg.anc_tile_qubits.back();
        seg.anc_tile_qubits.pop_back();
        --seg.n_anc;
        seg.data_tile_qubits.push_back(phys / 2);
        seg.data_tile_qubits.push_back(phys - phys / 2);
        seg.n_data += 2;
        occ.push_back(-1);
        occ.push_back(-1);
    } else {
        if (seg.n_data < 2)
            throw ConfigError("reallocate_tile: need two data tiles to form an ancilla tile");
        if (occ[seg.n_data - 1] != -1 || occ[seg.n_data - 2] != -1)
            throw ConfigError("reallocate_tile: data tile holds a live qubit");
        const int phys = seg.data_tile_qubits[seg.n_data - 1] +
                         seg.data_tile_qubits[seg.n_data - 2];
        seg.data_tile_qubits.pop_back();
        seg.data_tile_qubits.pop_back();
        seg.n_data -= 2;
        occ.pop_back();
        occ.pop_back();
        seg.anc_tile_qubits.push_back(phys);
        ++seg.n_anc;
    }

    // Rebuild global row numbering.
    machine.data_row_base.clear();
    machine.total_data_tiles = 0;
    for (const auto& s : machine.segments) {
        machine.data_row_base.push_back(machine.total_data_tiles);
        machine.total_data_tiles += s.n_data;
    }
}

std::string ArchConfig::to_json() const {
    json j;
    j["n_seg"] = n_seg;
    j["n_cs"] = n_cs;
    j["cs_config"] = {{"n_data", cs.n_data}, {"n_anc", cs.n_anc}, {"n_comm", cs.n_comm}};
    const SsConfig ess = effective_ss();
    j["ss_config"] = {{"n_data", ess.n_data}, {"n_comm", ess.n_comm}};
    j["n_ec"] = n_ec;
    j["seg_qubit_cap"] = seg_qubit_cap;
    j["budget_ntq"] = budget_ntq;
    return j.dump(2);
}

ArchConfig ArchConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed architecture file: ") + e.what());
    }
    ArchConfig c;
    try {
        c.n_seg = j.at("n_seg").get<int>();
        c.n_cs = j.at("n_cs").get<int>();
        const auto& cs = j.at("cs_config");
        c.cs.n_data = cs.at("n_data").get<int>();
        c.cs.n_anc = cs.at("n_anc").get<int>();
        c.cs.n_comm = cs.at("n_comm").get<int>();
        if (j.contains("ss_config")) {
            c.ss.n_data = j["ss_config"].value("n_data", 0);
            c.ss.n_comm = j["ss_config"].value("n_comm", 0);
        }
        if (j.contains("n_ec"))
            c.n_ec = j["n_ec"].get<int>();
        if (j.contains("seg_qubit_cap"))
            c.seg_qubit_cap = j["seg_qubit_cap"].get<int>();
        if (j.contains("budget_ntq"))
            c.budget_ntq = j["budget_ntq"].get<long long>();
    } catch (const json::exception& e) {
        throw IoError(std::string("architecture file missing field: ") + e.what());
    }
    c.validate();
    return c;
}

ArchConfig ArchConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open architecture file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

} // namespace rpsim
