#include "rpsim/device.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace rpsim {

using nlohmann::json;

prob DeviceParams::effective_p_gate() const {
    prob p = p_gate;
    for (const auto& o : {p_gate_1q, p_gate_2q, p_gate_3q, p_gate_meas}) {
        if (o && *o > p)
            p = *o;
    }
    return p;
}

void DeviceParams::validate() const {
    auto check_duration = [](const char* name, usec v) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError(std::string("device parameter out of range: ") + name +
                              " must be a positive duration");
    };
    auto check_prob = [](const char* name, prob v) {
        if (!(v >= 0.0 && v < 1.0) || !std::isfinite(v))
            throw ConfigError(std::string("device parameter out of range: ") + name +
                              " must lie in [0, 1)");
    };
    check_duration("t_1q", t_1q);
    check_duration("t_2q", t_2q);
    check_duration("t_3q", t_3q);
    check_duration("t_meas", t_meas);
    check_duration("t_epr_gen", t_epr_gen);
    check_duration("t_shutt_cell", t_shutt_cell);
    check_duration("t_shutt_tile", t_shutt_tile);
    check_duration("t_coh", t_coh);
    check_prob("p_gate", p_gate);
    check_prob("p_epr", p_epr);
    if (p_gate_1q) check_prob("p_gate_1q", *p_gate_1q);
    if (p_gate_2q) check_prob("p_gate_2q", *p_gate_2q);
    if (p_gate_3q) check_prob("p_gate_3q", *p_gate_3q);
    if (p_gate_meas) check_prob("p_gate_meas", *p_gate_meas);
}

double memory_fidelity(usec t, const DeviceParams& params) {
    if (t < 0.0)
        throw ConfigError("memory_fidelity: negative duration");
    return std::exp(-t / params.t_coh);
}

prob memory_error_prob(usec t, const DeviceParams& params) {
    if (t < 0.0)
        throw ConfigError("memory_error_prob: negative duration");
    return -std::expm1(-t / params.t_coh);
}

std::string DeviceParams::to_json() const {
    json j;
    j["t_1q"] = t_1q;
    j["t_2q"] = t_2q;
    j["t_3q"] = t_3q;
    j["t_meas"] = t_meas;
    j["t_epr_gen"] = t_epr_gen;
    j["p_gate"] = p_gate;
    j["p_epr"] = p_epr;
    j["t_shutt_cell"] = t_shutt_cell;
    j["t_shutt_tile"] = t_shutt_tile;
    j["t_coh"] = t_coh;
    if (p_gate_1q) j["p_gate_1q"] = *p_gate_1q;
    if (p_gate_2q) j["p_gate_2q"] = *p_gate_2q;
    if (p_gate_3q) j["p_gate_3q"] = *p_gate_3q;
    if (p_gate_meas) j["p_gate_meas"] = *p_gate_meas;
    return j.dump(2);
}

DeviceParams DeviceParams::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed device parameter file: ") + e.what());
    }
    DeviceParams p;
    auto get = [&](const char* key, double& field, bool required) {
        if (j.contains(key)) {
            if (!j[key].is_number())
                throw IoError(std::string("device parameter ") + key + " is not numeric");
            field = j[key].get<double>();
        } else if (required) {
            throw IoError(std::string("device parameter file missing required field: ") + key);
        }
    };
    get("t_1q", p.t_1q, true);
    get("t_2q", p.t_2q, true);
    get("t_3q", p.t_3q, true);
    get("t_meas", p.t_meas, true);
    get("t_epr_gen", p.t_epr_gen, true);
    get("p_gate", p.p_gate, true);
    get("p_epr", p.p_epr, true);
    get("t_shutt_cell", p.t_shutt_cell, false);
    get("t_shutt_tile", p.t_shutt_tile, false);
    get("t_coh", p.t_coh, false); // defaults to 1e10 when absent

    auto get_opt = [&](const char* key, std::optional<prob>& field) {
        if (j.contains(key))
            field = j[key].get<double>();
    };
    get_opt("p_gate_1q", p.p_gate_1q);
    get_opt("p_gate_2q", p.p_gate_2q);
    get_opt("p_gate_3q", p.p_gate_3q);
    get_opt("p_gate_meas", p.p_gate_meas);

    p.validate();
    return p;
}

DeviceParams load_device_params(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open device parameter file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return DeviceParams::from_json(ss.str());
}

void save_device_params(const DeviceParams& params, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write device parameter file: " + path);
    out << params.to_json() << "\n";
}

} // namespace rpsim
