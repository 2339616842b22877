#pragma once

// Flat key-value configuration text with optional [section] blocks:
//
//   # comment
//   model = quantum
//   kappa = 0.2
//   [axis1]
//   param = delta
//   min = 0
//
// Keys before the first section header belong to the unnamed top-level block.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qvdp/errors.hpp"

namespace qvdp {

struct ConfigEntry {
    std::string value;
    int line = 0;
    mutable bool used = false;
};

class ConfigBlock {
public:
    explicit ConfigBlock(std::string name = {}, int line = 0) : name_(std::move(name)), line_(line) {}

    const std::string& name() const noexcept { return name_; }
    int line() const noexcept { return line_; }
    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    void set(const std::string& key, std::string value, int line) {
        if (has(key)) throw ConfigError("duplicate key", line, key);
        entries_[key] = ConfigEntry{std::move(value), line};
    }

    const ConfigEntry& entry(const std::string& key) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) throw ConfigError("missing required key" + where(), 0, key);
        it->second.used = true;
        return it->second;
    }

    std::string get_string(const std::string& key) const { return entry(key).value; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        return has(key) ? get_string(key) : fallback;
    }

    double get_double(const std::string& key) const {
        const ConfigEntry& e = entry(key);
        double out = 0.0;
        const char* first = e.value.data();
        const char* last = first + e.value.size();
        auto [ptr, ec] = std::from_chars(first, last, out);
        if (ec != std::errc() || ptr != last || !std::isfinite(out)) {
            throw ConfigError("expected a finite number, got '" + e.value + "'", e.line, key);
        }
        return out;
    }

    double get_double(const std::string& key, double fallback) const { return has(key) ? get_double(key) : fallback; }

    long long get_int(const std::string& key) const {
        const ConfigEntry& e = entry(key);
        long long out = 0;
        const char* first = e.value.data();
        const char* last = first + e.value.size();
        auto [ptr, ec] = std::from_chars(first, last, out);
        if (ec != std::errc() || ptr != last) {
            throw ConfigError("expected an integer, got '" + e.value + "'", e.line, key);
        }
        return out;
    }

    long long get_int(const std::string& key, long long fallback) const { return has(key) ? get_int(key) : fallback; }

    bool get_bool(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const ConfigEntry& e = entry(key);
        if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
        if (e.value == "false" || e.value == "no" || e.value == "0") return false;
        throw ConfigError("expected true/false, got '" + e.value + "'", e.line, key);
    }

    std::vector<std::string> get_list(const std::string& key) const {
        std::vector<std::string> out;
        std::stringstream ss(entry(key).value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) out.push_back(item);
        }
        return out;
    }

    int line_of(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    // Rejects keys that were never read.
    void check_all_used() const {
        for (const auto& [key, e] : entries_) {
            if (!e.used) throw ConfigError("unknown key" + where(), e.line, key);
        }
    }

    static std::string trim(const std::string& s) {
        auto begin = std::find_if_not(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
        auto end = std::find_if_not(s.rbegin(), s.rend(), [](unsigned char c) { return std::isspace(c); }).base();
        return begin < end ? std::string(begin, end) : std::string{};
    }

private:
    std::string where() const { return name_.empty() ? std::string{} : " in [" + name_ + "]"; }

    std::string name_;
    int line_;
    std::map<std::string, ConfigEntry> entries_;
};

struct ConfigDocument {
    ConfigBlock top;
    std::vector<ConfigBlock> sections;

    const ConfigBlock* section(const std::string& name) const {
        for (const auto& s : sections)
            if (s.name() == name) return &s;
        return nullptr;
    }
};

inline ConfigDocument parse_config(const std::string& text) {
    ConfigDocument doc;
    ConfigBlock* current = &doc.top;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = ConfigBlock::trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("malformed section header '" + line + "'", line_no);
            const std::string name = ConfigBlock::trim(line.substr(1, line.size() - 2));
            if (name.empty()) throw ConfigError("empty section name", line_no);
            if (doc.section(name)) throw ConfigError("duplicate section [" + name + "]", line_no);
            doc.sections.emplace_back(name, line_no);
            current = &doc.sections.back();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value', got '" + line + "'", line_no);
        const std::string key = ConfigBlock::trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("empty key", line_no);
        current->set(key, ConfigBlock::trim(line.substr(eq + 1)), line_no);
    }
    return doc;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace qvdp
