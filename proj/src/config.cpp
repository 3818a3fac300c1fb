#include "qdec/config.hpp"

#include <algorithm>
#include <array>

namespace qdec {

namespace {

constexpr std::array<const char*, 7> kCommands = {"entropy", "decouple", "code", "rate", "lock", "moments", "suite"};

template <class T>
T field(const io::json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const io::json::exception& e) {
        throw io::InputError(std::string("config: bad value for ") + key + ": " + e.what());
    }
}

}  // namespace

bool ExperimentConfig::stochastic() const {
    if (command == "entropy") return false;
    if (command == "rate") return params.value("optimize", false);
    return true;
}

void ExperimentConfig::validate() const {
    if (std::find_if(kCommands.begin(), kCommands.end(), [&](const char* c) { return command == c; }) ==
        kCommands.end())
        throw io::InputError("config: unknown command '" + command + "'");
    if (stochastic() && !seed) throw io::InputError("command '" + command + "' needs a seed (--seed or QDEC_SEED)");
    if (samples < 0) throw io::InputError("config: samples must be non-negative");
    if (eps < 0 || eps >= 1) throw io::InputError("config: eps must lie in [0, 1)");
    if (!(tolerance > 0)) throw io::InputError("config: tolerance must be positive");
    if (!params.is_object()) throw io::InputError("config: params must be an object");
}

io::json to_json(const ExperimentConfig& c) {
    io::json j;
    j["command"] = c.command;
    j["inputs"] = c.inputs;
    j["seed"] = c.seed ? io::json(*c.seed) : io::json(nullptr);
    j["samples"] = c.samples;
    j["eps"] = c.eps;
    j["tolerance"] = c.tolerance;
    j["out_dir"] = c.out_dir;
    j["params"] = c.params;
    return j;
}

ExperimentConfig config_from_json(const io::json& j) {
    if (!j.is_object()) throw io::InputError("config: expected an object");
    ExperimentConfig c;
    c.command = field<std::string>(j, "command", "");
    c.inputs = field<std::map<std::string, std::string>>(j, "inputs", {});
    if (j.contains("seed") && !j.at("seed").is_null()) {
        if (!j.at("seed").is_number_unsigned()) throw io::InputError("config: seed must be a non-negative integer");
        c.seed = j.at("seed").get<std::uint64_t>();
    }
    c.samples = field<int>(j, "samples", 0);
    c.eps = field<double>(j, "eps", 0.0);
    c.tolerance = field<double>(j, "tolerance", 1e-9);
    c.out_dir = field<std::string>(j, "out_dir", "");
    c.params = j.contains("params") ? j.at("params") : io::json::object();
    c.validate();
    return c;
}

}  // namespace qdec
