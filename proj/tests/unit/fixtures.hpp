#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tydp/typing.hpp"

namespace fixtures {

inline std::string read(const std::string& name) {
    std::ifstream in(std::string(TYDP_SYSTEMS_DIR) + "/" + name);
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline tydp::RewriteSystem system(const std::string& name) { return tydp::parse_system(read(name)); }

inline tydp::ValidatedSystem validated(const std::string& text) {
    auto v = tydp::validate_system(tydp::parse_system(text));
    if (!v.ok()) throw std::runtime_error("fixture does not validate: " + v.diagnostics.front().str());
    return *v.system;
}

inline tydp::ValidatedSystem validated_file(const std::string& name) { return validated(read(name)); }

} // namespace fixtures
