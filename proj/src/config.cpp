#include "stefanlie/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "stefanlie/errors.hpp"

namespace stefanlie {

namespace {

struct Field {
    const char* name;
    double MaterialSpec::*member;
    bool optional;
};

constexpr Field kFields[] = {
    {"lambda1", &MaterialSpec::lambda1, false}, {"lambda2", &MaterialSpec::lambda2, false},
    {"rho", &MaterialSpec::rho, false},         {"c1", &MaterialSpec::c1, false},
    {"c2_a", &MaterialSpec::c2_a, false},       {"c2_b", &MaterialSpec::c2_b, false},
    {"Lm", &MaterialSpec::Lm, false},           {"Lv", &MaterialSpec::Lv, false},
    {"Tv", &MaterialSpec::Tv, false},           {"Tm", &MaterialSpec::Tm, false},
    {"Tinf", &MaterialSpec::Tinf, false},       {"chi0", &MaterialSpec::chi0, false},
    {"chi_p", &MaterialSpec::chi_p, false},     {"chi_Tref", &MaterialSpec::chi_Tref, false},
    {"q0", &MaterialSpec::q0, false},           {"A", &MaterialSpec::A, true},
    {"Pa", &MaterialSpec::Pa, true},            {"R", &MaterialSpec::R, true},
};

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(const std::string& text, const std::string& where) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw ConfigError(where + ": '" + text + "' is not a finite number");
    }
    return value;
}

}  // namespace

std::vector<KeyValue> parse_key_value(std::istream& in, const std::string& source) {
    std::vector<KeyValue> entries;
    std::set<std::string> seen;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = source + ":" + std::to_string(line_no);
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        KeyValue kv{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
        if (kv.key.empty() || kv.value.empty()) throw ConfigError(where + ": empty key or value");
        if (!seen.insert(kv.key).second) throw ConfigError(where + ": duplicate key '" + kv.key + "'");
        entries.push_back(std::move(kv));
    }
    return entries;
}

bool set_material_field(MaterialSpec& spec, const std::string& key, double value) {
    for (const auto& field : kFields) {
        if (key == field.name) {
            spec.*(field.member) = value;
            return true;
        }
    }
    return false;
}

MaterialSpec material_from_entries(const std::vector<KeyValue>& entries, const std::string& source) {
    MaterialSpec spec;
    std::set<std::string> given;
    for (const auto& kv : entries) {
        const std::string where = source + ":" + std::to_string(kv.line);
        if (!set_material_field(spec, kv.key, parse_number(kv.value, where))) {
            throw ConfigError(where + ": unknown material key '" + kv.key + "'");
        }
        given.insert(kv.key);
    }
    for (const auto& field : kFields) {
        if (!field.optional && !given.contains(field.name)) {
            throw ConfigError(source + ": missing material key '" + field.name + "'");
        }
    }
    return spec;
}

MaterialSpec load_material(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open material file '" + path.string() + "'");
    return material_from_entries(parse_key_value(in, path.string()), path.string());
}

std::string format_material(const MaterialSpec& spec) {
    std::ostringstream os;
    for (const auto& field : kFields) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", spec.*(field.member));
        os << field.name << " = " << buf << "\n";
    }
    return os.str();
}

}  // namespace stefanlie
