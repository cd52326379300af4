#pragma once

#include "json.hpp"

#include <stdexcept>
#include <string>

namespace nilact {

// Parse error with 1-based position information.
struct TomlError : std::runtime_error {
    int line;
    int column;
    TomlError(const std::string& msg, int line_, int column_)
        : std::runtime_error(msg + " at line " + std::to_string(line_) + ", column " +
                             std::to_string(column_)),
          line(line_), column(column_) {}
};

// Minimal TOML reader covering the subset used by the action files:
// key = value pairs, [table] headers, [[array-of-table]] headers, strings,
// integers, floats, booleans, (nested) inline arrays, and inline tables.
// Returns the document as a JSON tree.
nlohmann::json parse_toml(const std::string& text);

nlohmann::json parse_toml_file(const std::string& path);

// Dispatch on extension: .toml via parse_toml, anything else as JSON.
nlohmann::json load_config(const std::string& path);

} // namespace nilact
