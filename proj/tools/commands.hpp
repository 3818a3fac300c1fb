#pragma once

#include <map>
#include <string>
#include <vector>

#include "qdec/config.hpp"

namespace qdec::cli {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    bool empty() const { return rows.empty(); }
};

struct Outcome {
    io::json result;
    Table samples;                            // per-sample CSV
    std::string svg;                          // optional plot
    std::map<std::string, io::json> extras;   // further JSON files by name
    bool bounds_hold = true;
};

// Throws io::InputError (or std::invalid_argument from the library) on malformed input.
Outcome run(const ExperimentConfig& c);

}  // namespace qdec::cli
