#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qdec/channel.hpp"
#include "qdec/state.hpp"

namespace qdec::io {

using json = nlohmann::json;

// Malformed or inconsistent input files.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json matrix_to_json(const Mat& m);
Mat matrix_from_json(const json& j);
json space_to_json(const Space& s);
Space space_from_json(const json& j);

json to_json(const Ket& k);
json to_json(const Density& d);
json to_json(const Operator& o);
json to_json(const Channel& c);

// "pure" files give kets; density() also accepts pure files.
Ket ket_from_json(const json& j);
Density density_from_json(const json& j);
Operator operator_from_json(const json& j);
Channel channel_from_json(const json& j);

json read_file(const std::string& path);
void write_file(const std::string& path, const json& j);

}  // namespace qdec::io
