#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace opticdp {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Minimal TOML-style document: `[section]` headers followed by
 * `key = value` lines, where a value is a number, a quoted string, a
 * boolean, or a bracketed list of numbers. `#` starts a comment.
 *
 * Every getter marks its key as used; `check_all_used` reports leftovers,
 * which catches misspelled keys.
 */
class ConfigDocument {
public:
    static ConfigDocument parse(const std::string& text);
    static ConfigDocument load(const std::filesystem::path& path);

    bool has(const std::string& section, const std::string& key) const;
    bool has_section(const std::string& section) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key) const;
    std::uint64_t get_uint(const std::string& section, const std::string& key) const;
    bool get_bool(const std::string& section, const std::string& key) const;
    std::vector<double> get_double_list(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    std::uint64_t get_uint(const std::string& section, const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

    void check_all_used() const;

private:
    const std::string& raw(const std::string& section, const std::string& key) const;

    std::map<std::string, std::map<std::string, std::string>> entries_;
    mutable std::set<std::pair<std::string, std::string>> used_;
};

}  // namespace opticdp
