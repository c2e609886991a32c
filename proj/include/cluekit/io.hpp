#pragma once

#include <string>

#include <json.hpp>

#include "cluekit/core.hpp"

namespace cluekit {

// Function file interchange format:
//   {"n": int, "q": int, "measure": [[p_0..p_{q-1}] x n], "values": [q^n reals]}
// Values are in configuration-index order (coordinate 0 least significant).
nlohmann::json function_to_json(const FunctionTable& f);
FunctionTable function_from_json(const nlohmann::json& doc);

FunctionTable read_function_file(const std::string& path);
void write_function_file(const std::string& path, const FunctionTable& f);

}  // namespace cluekit
