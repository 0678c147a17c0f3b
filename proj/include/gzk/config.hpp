#pragma once

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gzk {

/// Flat "section.key" -> string store with file < flag precedence and a
/// single aggregated validation report.
class ConfigStore {
  public:
    /// Parse INI-style text: [section] headers, key = value lines,
    /// '#' or ';' comments.
    void load_ini(const std::string& text) {
        std::istringstream is(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const auto hash = line.find_first_of("#;");
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw std::invalid_argument("config line " + std::to_string(lineno) + ": unterminated section");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            set_from_file(section.empty() ? key : section + "." + key, value);
        }
    }

    void set_from_file(const std::string& key, const std::string& value) {
        file_values_[key] = value;
        if (!overrides_.count(key)) values_[key] = value;
    }

    /// Flag overrides win over file values; both are echoed.
    void set_override(const std::string& key, const std::string& value) {
        overrides_[key] = value;
        values_[key] = value;
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& def) {
        consumed_.insert(key);
        auto it = values_.find(key);
        return it == values_.end() ? def : it->second;
    }

    double get_double(const std::string& key, double def) {
        consumed_.insert(key);
        auto it = values_.find(key);
        if (it == values_.end()) return def;
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            errors_.push_back(key + ": not a number ('" + it->second + "')");
            return def;
        }
    }

    long get_long(const std::string& key, long def) {
        consumed_.insert(key);
        auto it = values_.find(key);
        if (it == values_.end()) return def;
        try {
            std::size_t pos = 0;
            const long v = std::stol(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            errors_.push_back(key + ": not an integer ('" + it->second + "')");
            return def;
        }
    }

    bool get_bool(const std::string& key, bool def) {
        consumed_.insert(key);
        auto it = values_.find(key);
        if (it == values_.end()) return def;
        if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
        if (it->second == "false" || it->second == "0" || it->second == "no") return false;
        errors_.push_back(key + ": not a boolean ('" + it->second + "')");
        return def;
    }

    void require(bool condition, const std::string& message) {
        if (!condition) errors_.push_back(message);
    }

    /// One aggregated report naming each offense: range violations
    /// collected via require() plus any unconsumed (unknown) keys.
    void finish_validation() const {
        std::vector<std::string> all = errors_;
        for (const auto& [key, value] : values_)
            if (!consumed_.count(key)) all.push_back(key + ": unknown key");
        if (all.empty()) return;
        std::string msg = "invalid configuration (" + std::to_string(all.size()) + " problem(s)):";
        for (const auto& e : all) msg += "\n  - " + e;
        throw std::invalid_argument(msg);
    }

    /// Every key/value as finally resolved, for the manifest echo.
    const std::map<std::string, std::string>& resolved() const { return values_; }
    const std::map<std::string, std::string>& file_values() const { return file_values_; }
    const std::map<std::string, std::string>& flag_overrides() const { return overrides_; }

  private:
    static std::string trim(const std::string& s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return "";
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }

    std::map<std::string, std::string> values_;
    std::map<std::string, std::string> file_values_;
    std::map<std::string, std::string> overrides_;
    std::vector<std::string> errors_;
    mutable std::set<std::string> consumed_;
};

}  // namespace gzk
