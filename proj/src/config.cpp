#include "opticdp/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace opticdp {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

/// Drops a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

std::string where(const std::string& section, const std::string& key) { return "[" + section + "] " + key; }

double parse_number(const std::string& text, const std::string& at) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto* begin = t.data();
    const auto* end = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || t.empty() || !std::isfinite(v)) {
        throw ConfigError("invalid number for " + at + ": '" + t + "'");
    }
    return v;
}

}  // namespace

ConfigDocument ConfigDocument::parse(const std::string& text) {
    ConfigDocument doc;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
            doc.entries_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        if (section.empty()) throw ConfigError("line " + std::to_string(lineno) + ": key outside of any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": missing key");
        if (value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": missing value for " + key);
        if (!doc.entries_[section].emplace(key, value).second) {
            throw ConfigError("duplicate key " + where(section, key));
        }
    }
    return doc;
}

ConfigDocument ConfigDocument::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

bool ConfigDocument::has(const std::string& section, const std::string& key) const {
    auto s = entries_.find(section);
    return s != entries_.end() && s->second.count(key) > 0;
}

bool ConfigDocument::has_section(const std::string& section) const { return entries_.count(section) > 0; }

const std::string& ConfigDocument::raw(const std::string& section, const std::string& key) const {
    auto s = entries_.find(section);
    if (s == entries_.end()) throw ConfigError("missing section [" + section + "]");
    auto k = s->second.find(key);
    if (k == s->second.end()) throw ConfigError("missing field " + where(section, key));
    used_.emplace(section, key);
    return k->second;
}

std::string ConfigDocument::get_string(const std::string& section, const std::string& key) const {
    const std::string& v = raw(section, key);
    if (v.size() < 2 || v.front() != '"' || v.back() != '"') {
        throw ConfigError("field " + where(section, key) + " must be a quoted string");
    }
    return v.substr(1, v.size() - 2);
}

double ConfigDocument::get_double(const std::string& section, const std::string& key) const {
    return parse_number(raw(section, key), where(section, key));
}

std::uint64_t ConfigDocument::get_uint(const std::string& section, const std::string& key) const {
    const std::string& v = raw(section, key);
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw ConfigError("field " + where(section, key) + " must be a non-negative integer, got '" + v + "'");
    }
    return out;
}

bool ConfigDocument::get_bool(const std::string& section, const std::string& key) const {
    const std::string& v = raw(section, key);
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("field " + where(section, key) + " must be true or false");
}

std::vector<double> ConfigDocument::get_double_list(const std::string& section, const std::string& key) const {
    const std::string& v = raw(section, key);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
        throw ConfigError("field " + where(section, key) + " must be a list like [1, 2, 3]");
    }
    std::vector<double> out;
    std::stringstream items(v.substr(1, v.size() - 2));
    std::string item;
    while (std::getline(items, item, ',')) {
        if (trim(item).empty()) continue;
        out.push_back(parse_number(item, where(section, key)));
    }
    return out;
}

std::string ConfigDocument::get_string(const std::string& section, const std::string& key,
                                       const std::string& fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
}

double ConfigDocument::get_double(const std::string& section, const std::string& key, double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

std::uint64_t ConfigDocument::get_uint(const std::string& section, const std::string& key,
                                       std::uint64_t fallback) const {
    return has(section, key) ? get_uint(section, key) : fallback;
}

bool ConfigDocument::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    return has(section, key) ? get_bool(section, key) : fallback;
}

void ConfigDocument::check_all_used() const {
    for (const auto& [section, keys] : entries_) {
        for (const auto& [key, value] : keys) {
            if (!used_.count({section, key})) throw ConfigError("unknown field " + where(section, key));
        }
    }
}

}  // namespace opticdp
