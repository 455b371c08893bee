#include "rpsim/mapper.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace rpsim {

using nlohmann::json;

InteractionGraph build_interaction_graph(const LogicalCircuit& circuit) {
    if (circuit.gates.empty())
        throw CircuitError("cannot build an interaction graph from an empty circuit");

    std::map<std::pair<uint32_t, uint32_t>, double> w;
    for (const auto& g : circuit.gates) {
        for (int i = 0; i < g.n_ops; ++i)
            for (int j = i + 1; j < g.n_ops; ++j) {
                auto key = std::minmax(g.q[i], g.q[j]);
                w[{key.first, key.second}] += 1.0;
            }
    }

    InteractionGraph ig;
    ig.n = circuit.n_qubits;
    std::vector<uint32_t> degree(ig.n, 0);
    for (const auto& [e, _] : w) {
        ++degree[e.first];
        ++degree[e.second];
    }
    ig.offsets.assign(ig.n + 1, 0);
    for (uint32_t u = 0; u < ig.n; ++u)
        ig.offsets[u + 1] = ig.offsets[u] + degree[u];
    ig.nbr.resize(ig.offsets[ig.n]);
    ig.weight.resize(ig.offsets[ig.n]);
    std::vector<uint32_t> cursor(ig.offsets.begin(), ig.offsets.end() - 1);
    for (const auto& [e, wt] : w) {
        ig.nbr[cursor[e.first]] = e.second;
        ig.weight[cursor[e.first]++] = wt;
        ig.nbr[cursor[e.second]] = e.first;
        ig.weight[cursor[e.second]++] = wt;
    }
    return ig;
}

double InteractionGraph::edge_weight(uint32_t u, uint32_t v) const {
    for (uint32_t i = offsets[u]; i < offsets[u + 1]; ++i)
        if (nbr[i] == v)
            return weight[i];
    return 0.0;
}

std::vector<std::vector<uint32_t>> InteractionGraph::components() const {
    std::vector<int32_t> comp(n, -1);
    std::vector<std::vector<uint32_t>> out;
    std::vector<uint32_t> stack;
    for (uint32_t s = 0; s < n; ++s) {
        if (comp[s] != -1)
            continue;
        const int32_t id = static_cast<int32_t>(out.size());
        out.emplace_back();
        stack.push_back(s);
        comp[s] = id;
        while (!stack.empty()) {
            uint32_t u = stack.back();
            stack.pop_back();
            out[id].push_back(u);
            for (uint32_t i = offsets[u]; i < offsets[u + 1]; ++i)
                if (comp[nbr[i]] == -1) {
                    comp[nbr[i]] = id;
                    stack.push_back(nbr[i]);
                }
        }
        std::sort(out[id].begin(), out[id].end());
    }
    return out;
}

double arrangement_cost(const InteractionGraph& g, const std::vector<uint32_t>& order) {
    std::vector<uint32_t> pos(g.n, 0);
    for (uint32_t i = 0; i < order.size(); ++i)
        pos[order[i]] = i;
    double cost = 0.0;
    for (uint32_t u = 0; u < g.n; ++u)
        for (uint32_t i = g.offsets[u]; i < g.offsets[u + 1]; ++i) {
            uint32_t v = g.nbr[i];
            if (u < v)
                cost += g.weight[i] * std::abs(static_cast<double>(pos[u]) - pos[v]);
        }
    return cost;
}

namespace {

// Fiedler-style ordering of one component: power iteration on
// (shift*I - L) with the constant vector deflated, nodes sorted by the
// resulting eigenvector entry.
std::vector<uint32_t> spectral_order(const InteractionGraph& g,
                                     const std::vector<uint32_t>& nodes) {
    const size_t m = nodes.size();
    if (m <= 2)
        return nodes;

    std::vector<uint32_t> local(g.n, UINT32_MAX);
    for (size_t i = 0; i < m; ++i)
        local[nodes[i]] = static_cast<uint32_t>(i);

    std::vector<double> deg(m, 0.0);
    for (size_t i = 0; i < m; ++i) {
        uint32_t u = nodes[i];
        for (uint32_t k = g.offsets[u]; k < g.offsets[u + 1]; ++k)
            deg[i] += g.weight[k];
    }
    const double shift = 2.0 * (*std::max_element(deg.begin(), deg.end())) + 1.0;

    // Deterministic seed, orthogonal to the constant vector.
    std::vector<double> x(m), y(m);
    for (size_t i = 0; i < m; ++i)
        x[i] = static_cast<double>(i) - 0.5 * (m - 1);

    const int iters = 120;
    for (int it = 0; it < iters; ++it) {
        // y = (shift*I - L) x = shift*x - deg.*x + A x
        for (size_t i = 0; i < m; ++i)
            y[i] = (shift - deg[i]) * x[i];
        for (size_t i = 0; i < m; ++i) {
            uint32_t u = nodes[i];
            for (uint32_t k = g.offsets[u]; k < g.offsets[u + 1]; ++k) {
                uint32_t lv = local[g.nbr[k]];
                if (lv != UINT32_MAX)
                    y[i] += g.weight[k] * x[lv];
            }
        }
        double mean = std::accumulate(y.begin(), y.end(), 0.0) / m;
        double norm = 0.0;
        for (size_t i = 0; i < m; ++i) {
            y[i] -= mean;
            norm += y[i] * y[i];
        }
        norm = std::sqrt(norm);
        if (norm < 1e-30)
            break;
        for (size_t i = 0; i < m; ++i)
            x[i] = y[i] / norm;
    }

    std::vector<uint32_t> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](uint32_t a, uint32_t b) {
        if (x[a] != x[b])
            return x[a] < x[b];
        return nodes[a] < nodes[b];
    });
    std::vector<uint32_t> out(m);
    for (size_t i = 0; i < m; ++i)
        out[i] = nodes[idx[i]];
    return out;
}

double swap_delta(const InteractionGraph& g, const std::vector<uint32_t>& order,
                  std::vector<uint32_t>& pos, uint32_t i, uint32_t j) {
    // Cost change of swapping positions i and j.
    auto contrib = [&](uint32_t u, uint32_t pu) {
        double c = 0.0;
        for (uint32_t k = g.offsets[u]; k < g.offsets[u + 1]; ++k) {
            uint32_t v = g.nbr[k];
            if (v == order[i] || v == order[j])
                continue;
            c += g.weight[k] * std::abs(static_cast<double>(pu) - pos[v]);
        }
        return c;
    };
    const uint32_t u = order[i], v = order[j];
    double before = contrib(u, i) + contrib(v, j);
    double after = contrib(u, j) + contrib(v, i);
    return after - before;
}

void hill_climb(const InteractionGraph& g, std::vector<uint32_t>& order, bool pairwise) {
    std::vector<uint32_t> pos(g.n, 0);
    for (uint32_t i = 0; i < order.size(); ++i)
        pos[order[i]] = i;

    const size_t m = order.size();
    const int max_passes = 24;
    for (int pass = 0; pass < max_passes; ++pass) {
        bool improved = false;
        for (size_t i = 0; i + 1 < m; ++i) {
            size_t limit = pairwise ? m : i + 2;
            for (size_t j = i + 1; j < limit; ++j) {
                if (swap_delta(g, order, pos, static_cast<uint32_t>(i),
                               static_cast<uint32_t>(j)) < -1e-12) {
                    std::swap(order[i], order[j]);
                    pos[order[i]] = static_cast<uint32_t>(i);
                    pos[order[j]] = static_cast<uint32_t>(j);
                    improved = true;
                }
            }
        }
        if (!improved)
            break;
    }
}

} // namespace

std::vector<uint32_t> linear_arrange(const InteractionGraph& g) {
    auto comps = g.components();
    // Largest components first; ties toward the lower smallest id.
    std::stable_sort(comps.begin(), comps.end(),
                     [](const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
                         if (a.size() != b.size())
                             return a.size() > b.size();
                         return a.front() < b.front();
                     });

    std::vector<uint32_t> result;
    result.reserve(g.n);
    for (const auto& nodes : comps) {
        std::vector<uint32_t> best = spectral_order(g, nodes);
        hill_climb(g, best, nodes.size() <= 256);

        // The identity order occasionally beats the spectral seed on
        // structured circuits; keep whichever refines better.
        std::vector<uint32_t> ident = nodes;
        hill_climb(g, ident, nodes.size() <= 256);
        if (arrangement_cost(g, ident) < arrangement_cost(g, best))
            best = ident;

        result.insert(result.end(), best.begin(), best.end());
    }
    return result;
}

QubitMap assign_tiles(const std::vector<uint32_t>& ordering, Machine& machine) {
    long long capacity = 0;
    for (const auto& s : machine.segments)
        capacity += s.n_data;
    if (static_cast<long long>(ordering.size()) > capacity)
        throw InsufficientDataTiles(
            "need " + std::to_string(ordering.size()) + " data tiles, machine has " +
            std::to_string(capacity) + " (short by " +
            std::to_string(static_cast<long long>(ordering.size()) - capacity) + ")");

    uint32_t n_qubits = 0;
    for (uint32_t q : ordering)
        n_qubits = std::max(n_qubits, q + 1);

    QubitMap map;
    map.position.assign(n_qubits, TilePos{});

    // Computational segments first, then storage, slots in order.
    std::vector<int> seg_order;
    for (int s = 0; s < static_cast<int>(machine.segments.size()); ++s)
        if (machine.segments[s].computational)
            seg_order.push_back(s);
    for (int s = 0; s < static_cast<int>(machine.segments.size()); ++s)
        if (!machine.segments[s].computational)
            seg_order.push_back(s);

    size_t next = 0;
    for (int seg : seg_order) {
        auto& occ = machine.data_occupant[seg];
        for (int slot = 0; slot < machine.segments[seg].n_data && next < ordering.size();
             ++slot) {
            const uint32_t q = ordering[next++];
            map.position[q] = TilePos{seg, slot};
            occ[slot] = static_cast<int>(q);
        }
        if (next == ordering.size())
            break;
    }
    return map;
}

std::string QubitMap::to_json() const {
    json rows = json::array();
    for (uint32_t q = 0; q < position.size(); ++q)
        rows.push_back({{"qubit", q}, {"seg", position[q].seg}, {"slot", position[q].slot}});
    return json{{"assignment", rows}}.dump(2);
}

QubitMap QubitMap::from_json(const std::string& text) {
    json j = json::parse(text);
    QubitMap m;
    for (const auto& row : j.at("assignment")) {
        uint32_t q = row.at("qubit").get<uint32_t>();
        if (q >= m.position.size())
            m.position.resize(q + 1);
        m.position[q] = TilePos{row.at("seg").get<int32_t>(), row.at("slot").get<int32_t>()};
    }
    return m;
}

} // namespace rpsim
