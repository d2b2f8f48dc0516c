#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "stefanlie/material.hpp"

namespace stefanlie {

struct KeyValue {
    std::string key;
    std::string value;
    int line = 0;
};

// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
// Duplicate keys and malformed lines raise ConfigError.
std::vector<KeyValue> parse_key_value(std::istream& in, const std::string& source = "<input>");

// Builds a material from parsed entries. Every MaterialSpec field is a key;
// A, Pa and R may be omitted and keep their defaults. Unknown keys, missing
// keys and non-numeric values raise ConfigError.
MaterialSpec material_from_entries(const std::vector<KeyValue>& entries,
                                   const std::string& source = "<input>");

MaterialSpec load_material(const std::filesystem::path& path);

// Sets one MaterialSpec field by name; false when the name is unknown.
bool set_material_field(MaterialSpec& spec, const std::string& key, double value);

// Inverse of material_from_entries, one `key = value` per line.
std::string format_material(const MaterialSpec& spec);

}  // namespace stefanlie
