#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "qdec/io.hpp"

namespace qdec {

// Everything needed to rerun one command: identical config and seed give identical outputs.
struct ExperimentConfig {
    std::string command;
    std::map<std::string, std::string> inputs;  // role -> file path
    std::optional<std::uint64_t> seed;
    int samples = 0;  // 0 selects the command default
    double eps = 0;
    double tolerance = 1e-9;
    std::string out_dir;
    io::json params = io::json::object();  // command-specific settings

    bool stochastic() const;
    // Throws io::InputError for unknown commands or a missing seed on a stochastic command.
    void validate() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

io::json to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const io::json& j);

}  // namespace qdec
