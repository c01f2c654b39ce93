#pragma once

#include <string>

#include <json.hpp>

#include "jacobi/core.hpp"

namespace jacobi::io {

using json = nlohmann::json;

json to_json(const ComplexJacobiSpec& spec);
json to_json(const RealJacobiSpec& spec);
ComplexJacobiSpec complex_spec_from_json(const json& j);
RealJacobiSpec real_spec_from_json(const json& j);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// accepts either schema; a real spec is promoted to complex
ComplexJacobiSpec load_complex_spec(const std::string& path);
RealJacobiSpec load_real_spec(const std::string& path);
void save_spec(const std::string& path, const ComplexJacobiSpec& spec);
void save_spec(const std::string& path, const RealJacobiSpec& spec);

}  // namespace jacobi::io
