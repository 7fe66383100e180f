#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace garchboot {

/// Raised for malformed configuration files or values; maps to the
/// usage/validation exit code in the CLI.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace detail

/**
 * Flat key=value configuration. '#' starts a comment, blank lines are
 * ignored. Values are kept as text and converted on access, so the CLI
 * can layer flag overrides on top with set().
 */
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path);
        KeyValueConfig cfg;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = detail::trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
            const std::string key = detail::trim(line.substr(0, eq));
            const std::string value = detail::trim(line.substr(eq + 1));
            if (key.empty())
                throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
            cfg.values_[key] = value;
        }
        return cfg;
    }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) > 0; }

    [[nodiscard]] std::string get_string(const std::string& key, const std::string& fallback) const {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    [[nodiscard]] double get_double(const std::string& key, double fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        return parse_double(key, it->second);
    }

    [[nodiscard]] std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        try {
            std::size_t pos = 0;
            const std::uint64_t v = std::stoull(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "': expected unsigned integer, got '" +
                              it->second + "'");
        }
    }

    [[nodiscard]] std::vector<double> get_double_list(const std::string& key,
                                                      std::vector<double> fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        return parse_double_list(key, it->second);
    }

    [[nodiscard]] std::vector<std::string> get_string_list(const std::string& key,
                                                           std::vector<std::string> fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        std::vector<std::string> out;
        for (const auto& tok : split(it->second)) out.push_back(tok);
        return out;
    }

    [[nodiscard]] const std::map<std::string, std::string>& entries() const { return values_; }

    /// Rejects keys outside the known set (catches config typos early).
    void validate_keys(const std::vector<std::string>& known) const {
        for (const auto& [key, value] : values_) {
            (void)value;
            if (std::find(known.begin(), known.end(), key) == known.end())
                throw ConfigError("unknown config key: '" + key + "'");
        }
    }

    static double parse_double(const std::string& key, const std::string& text) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(text, &pos);
            if (pos != text.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "': expected number, got '" + text + "'");
        }
    }

    static std::vector<double> parse_double_list(const std::string& key, const std::string& text) {
        std::vector<double> out;
        for (const auto& tok : split(text)) out.push_back(parse_double(key, tok));
        return out;
    }

    static std::vector<std::string> split(const std::string& text, char sep = ',') {
        std::vector<std::string> out;
        std::stringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, sep)) {
            tok = detail::trim(tok);
            if (!tok.empty()) out.push_back(tok);
        }
        return out;
    }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace garchboot
