#include "rpsim/circuit.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace rpsim {

namespace {

constexpr const char* kKindNames[kGateKindCount] = {
    "X",          "Z",          "H",        "CNOT",
    "Toffoli",    "T",          "TDagger",  "Measure",
    "PrepMagicT", "PrepMagicToffoli", "TeleportIntoMagic", "ECRound",
};

// Expected operand counts; -1 means variable (teleports take 1 or 3).
constexpr int kArity[kGateKindCount] = {1, 1, 1, 2, 3, 1, 1, 1, 0, 0, -1, 1};

} // namespace

const char* gate_kind_name(GateKind k) { return kKindNames[static_cast<int>(k)]; }

GateKind gate_kind_from_name(const std::string& name) {
    for (int i = 0; i < kGateKindCount; ++i)
        if (name == kKindNames[i])
            return static_cast<GateKind>(i);
    throw CircuitError("unknown gate kind: " + name);
}

bool is_clifford(GateKind k) {
    switch (k) {
    case GateKind::X:
    case GateKind::Z:
    case GateKind::H:
    case GateKind::CNOT:
        return true;
    default:
        return false;
    }
}

std::vector<uint32_t> LogicalCircuit::preds_of(uint32_t gate_index) const {
    return {preds.begin() + pred_offsets[gate_index], preds.begin() + pred_offsets[gate_index + 1]};
}

std::vector<std::pair<uint32_t, uint32_t>> LogicalCircuit::edges() const {
    std::vector<std::pair<uint32_t, uint32_t>> es;
    es.reserve(preds.size());
    for (uint32_t g = 0; g < gates.size(); ++g)
        for (uint32_t i = pred_offsets[g]; i < pred_offsets[g + 1]; ++i)
            es.emplace_back(preds[i], g);
    return es;
}

uint64_t LogicalCircuit::count_kind(GateKind k) const {
    uint64_t n = 0;
    for (const auto& g : gates)
        n += (g.kind == k) ? 1 : 0;
    return n;
}

uint32_t LogicalCircuit::depth() const {
    std::vector<uint32_t> d(gates.size(), 1);
    uint32_t best = gates.empty() ? 0 : 1;
    for (uint32_t g = 0; g < gates.size(); ++g) {
        for (uint32_t i = pred_offsets[g]; i < pred_offsets[g + 1]; ++i)
            d[g] = std::max(d[g], d[preds[i]] + 1);
        best = std::max(best, d[g]);
    }
    return best;
}

void LogicalCircuit::validate() const {
    if (pred_offsets.size() != gates.size() + 1)
        throw CircuitError("dependency index size mismatch");
    for (uint32_t g = 0; g < gates.size(); ++g) {
        const auto& gate = gates[g];
        if (gate.id != g)
            throw CircuitError("gate ids must be dense and ordered");
        const int arity = kArity[static_cast<int>(gate.kind)];
        if (arity >= 0 && gate.n_ops != arity)
            throw CircuitError(std::string("bad operand count for ") + gate_kind_name(gate.kind));
        if (gate.kind == GateKind::TeleportIntoMagic && gate.n_ops != 1 && gate.n_ops != 3)
            throw CircuitError("teleport takes one or three operands");
        for (int i = 0; i < gate.n_ops; ++i) {
            if (gate.q[i] >= n_qubits)
                throw CircuitError("operand qubit out of range");
            for (int j = i + 1; j < gate.n_ops; ++j)
                if (gate.q[i] == gate.q[j])
                    throw CircuitError("duplicate operand within a gate");
        }
        for (uint32_t i = pred_offsets[g]; i < pred_offsets[g + 1]; ++i)
            if (preds[i] >= g)
                throw CircuitError("dependency edge violates topological order");
    }
}

CircuitBuilder::CircuitBuilder(uint32_t n_qubits) : last_touch_(n_qubits, kNoPred) {
    circ_.n_qubits = n_qubits;
    circ_.pred_offsets.push_back(0);
}

uint32_t CircuitBuilder::add(GateKind kind, std::initializer_list<uint32_t> ops) {
    return add(kind, ops.begin(), static_cast<int>(ops.size()));
}

uint32_t CircuitBuilder::add(GateKind kind, const uint32_t* ops, int n_ops, uint32_t extra_pred) {
    LogicalGate g{};
    g.id = static_cast<uint32_t>(circ_.gates.size());
    g.kind = kind;
    g.n_ops = static_cast<uint8_t>(n_ops);
    uint32_t ps[4];
    int np = 0;
    for (int i = 0; i < n_ops; ++i) {
        g.q[i] = ops[i];
        if (ops[i] >= circ_.n_qubits)
            throw CircuitError("operand qubit out of range");
        if (last_touch_[ops[i]] != kNoPred)
            ps[np++] = last_touch_[ops[i]];
        last_touch_[ops[i]] = g.id;
    }
    if (extra_pred != kNoPred)
        ps[np++] = extra_pred;
    std::sort(ps, ps + np);
    np = static_cast<int>(std::unique(ps, ps + np) - ps);
    for (int i = 0; i < np; ++i)
        circ_.preds.push_back(ps[i]);
    circ_.pred_offsets.push_back(static_cast<uint32_t>(circ_.preds.size()));
    circ_.gates.push_back(g);
    return g.id;
}

LogicalCircuit CircuitBuilder::take() { return std::move(circ_); }

uint64_t verify_adder_semantics(const LogicalCircuit& circuit, uint64_t a, uint64_t b) {
    if (circuit.reg_a.empty() || circuit.reg_b.empty() || circuit.reg_sum.empty())
        throw CircuitError("circuit carries no adder register annotations");
    if (circuit.reg_a.size() < 64 && a >= (1ull << circuit.reg_a.size()))
        throw CircuitError("input a does not fit the a register");
    if (circuit.reg_b.size() < 64 && b >= (1ull << circuit.reg_b.size()))
        throw CircuitError("input b does not fit the b register");

    std::vector<uint8_t> bits(circuit.n_qubits, 0);
    for (size_t i = 0; i < circuit.reg_a.size(); ++i)
        bits[circuit.reg_a[i]] = (a >> i) & 1;
    for (size_t i = 0; i < circuit.reg_b.size(); ++i)
        bits[circuit.reg_b[i]] = (b >> i) & 1;

    for (const auto& g : circuit.gates) {
        switch (g.kind) {
        case GateKind::X:
            bits[g.q[0]] ^= 1;
            break;
        case GateKind::CNOT:
            bits[g.q[1]] ^= bits[g.q[0]];
            break;
        case GateKind::Toffoli:
            bits[g.q[2]] ^= bits[g.q[0]] & bits[g.q[1]];
            break;
        default:
            throw CircuitError(std::string("non-classical gate in adder circuit: ") +
                               gate_kind_name(g.kind));
        }
    }

    uint64_t sum = 0;
    for (size_t i = 0; i < circuit.reg_sum.size(); ++i)
        sum |= static_cast<uint64_t>(bits[circuit.reg_sum[i]]) << i;
    return sum;
}

void LogicalCircuit::serialize(std::ostream& out) const {
    out << "circuit v1\n";
    out << "nqubits " << n_qubits << "\n";
    auto reg = [&](const char* name, const std::vector<uint32_t>& r) {
        if (r.empty())
            return;
        out << "reg " << name;
        for (uint32_t q : r)
            out << ' ' << q;
        out << "\n";
    };
    reg("a", reg_a);
    reg("b", reg_b);
    reg("sum", reg_sum);
    out << "gates " << gates.size() << "\n";
    for (const auto& g : gates) {
        out << g.id << ' ' << gate_kind_name(g.kind);
        for (int i = 0; i < g.n_ops; ++i)
            out << ' ' << g.q[i];
        out << "\n";
    }
    out << "deps " << preds.size() << "\n";
    for (uint32_t g = 0; g < gates.size(); ++g)
        for (uint32_t i = pred_offsets[g]; i < pred_offsets[g + 1]; ++i)
            out << g << ' ' << preds[i] << "\n";
}

std::string LogicalCircuit::serialize() const {
    std::ostringstream ss;
    serialize(ss);
    return ss.str();
}

LogicalCircuit LogicalCircuit::parse(std::istream& in) {
    LogicalCircuit c;
    std::string word;
    std::string version;
    in >> word >> version;
    if (word != "circuit" || version != "v1")
        throw IoError("unrecognized circuit file header");
    in >> word >> c.n_qubits;
    if (word != "nqubits")
        throw IoError("circuit file: expected nqubits");

    in >> word;
    while (word == "reg") {
        std::string name;
        in >> name;
        std::string line;
        std::getline(in, line);
        std::istringstream ls(line);
        std::vector<uint32_t> ids;
        uint32_t q;
        while (ls >> q)
            ids.push_back(q);
        if (name == "a")
            c.reg_a = ids;
        else if (name == "b")
            c.reg_b = ids;
        else if (name == "sum")
            c.reg_sum = ids;
        else
            throw IoError("circuit file: unknown register " + name);
        in >> word;
    }

    if (word != "gates")
        throw IoError("circuit file: expected gates section");
    size_t n_gates;
    in >> n_gates;
    std::getline(in, word);
    c.gates.reserve(n_gates);
    std::vector<std::vector<uint32_t>> extra(n_gates);
    for (size_t i = 0; i < n_gates; ++i) {
        std::string line;
        if (!std::getline(in, line))
            throw IoError("circuit file: truncated gate list");
        std::istringstream ls(line);
        LogicalGate g{};
        std::string kind;
        ls >> g.id >> kind;
        g.kind = gate_kind_from_name(kind);
        uint32_t q;
        while (ls >> q) {
            if (g.n_ops >= 3)
                throw IoError("circuit file: too many operands");
            g.q[g.n_ops++] = q;
        }
        if (g.id != i)
            throw IoError("circuit file: gate ids must be dense and ordered");
        c.gates.push_back(g);
    }

    in >> word;
    if (word != "deps")
        throw IoError("circuit file: expected deps section");
    size_t n_edges;
    in >> n_edges;
    for (size_t i = 0; i < n_edges; ++i) {
        uint32_t g, p;
        if (!(in >> g >> p))
            throw IoError("circuit file: truncated dependency list");
        if (g >= n_gates || p >= g)
            throw IoError("circuit file: bad dependency edge");
        extra[g].push_back(p);
    }
    c.pred_offsets.assign(1, 0);
    for (size_t g = 0; g < n_gates; ++g) {
        auto& ps = extra[g];
        std::sort(ps.begin(), ps.end());
        ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
        c.preds.insert(c.preds.end(), ps.begin(), ps.end());
        c.pred_offsets.push_back(static_cast<uint32_t>(c.preds.size()));
    }
    c.validate();
    return c;
}

LogicalCircuit LogicalCircuit::parse_string(const std::string& text) {
    std::istringstream ss(text);
    return parse(ss);
}

} // namespace rpsim
