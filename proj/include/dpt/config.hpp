#pragma once

// Key-value run configuration: one `key = value` per line, `#` comments,
// lists separated by commas or spaces, groups separated by ';'. Reads are
// tracked so a caller can reject keys that no code path consumed, and the
// effective map hashes to a stable fingerprint that reports embed.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dpt/errors.hpp"

namespace dpt {

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!(std::islower(static_cast<unsigned char>(c)) ||
              std::isdigit(static_cast<unsigned char>(c)) || c == '_'))
            return false;
    return true;
}

} // namespace detail

class Config {
public:
    static Config from_text(const std::string& text, std::string source = "<inline>") {
        Config c;
        c.source_ = std::move(source);
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            // a '#' at start of line or after whitespace opens a comment
            std::size_t cut = std::string::npos;
            for (std::size_t i = 0; i < line.size(); ++i)
                if (line[i] == '#' &&
                    (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))) {
                    cut = i;
                    break;
                }
            if (cut != std::string::npos) line.resize(cut);
            std::string body = detail::trim(line);
            if (body.empty()) continue;
            std::size_t eq = body.find('=');
            if (eq == std::string::npos)
                throw ConfigError(c.source_ + ":" + std::to_string(lineno) +
                                  ": expected `key = value`, got `" + body + "`");
            std::string key = detail::trim(body.substr(0, eq));
            std::string value = detail::trim(body.substr(eq + 1));
            if (!detail::valid_key(key))
                throw ConfigError(c.source_ + ":" + std::to_string(lineno) + ": bad key `" +
                                  key + "` (lowercase letters, digits, underscores)");
            if (c.kv_.count(key))
                throw ConfigError(c.source_ + ":" + std::to_string(lineno) +
                                  ": duplicate key `" + key + "`");
            c.kv_[key] = value;
        }
        return c;
    }

    static Config from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return from_text(buf.str(), path);
    }

    const std::string& source() const { return source_; }
    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    // Flag overrides; a set key counts as consumed by whoever set it.
    void set(const std::string& key, const std::string& value) {
        if (!detail::valid_key(key)) throw ConfigError("bad config key `" + key + "`");
        kv_[key] = value;
    }

    std::string require_string(const std::string& key) const {
        auto it = kv_.find(key);
        if (it == kv_.end())
            throw ConfigError(source_ + ": missing required key `" + key + "`");
        used_.insert(key);
        return it->second;
    }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        if (!has(key)) return fallback;
        return require_string(key);
    }

    double require_double(const std::string& key) const {
        return parse_double(key, require_string(key));
    }

    double get_double(const std::string& key, double fallback) const {
        if (!has(key)) return fallback;
        return require_double(key);
    }

    long long require_int(const std::string& key) const {
        const std::string v = require_string(key);
        std::size_t pos = 0;
        long long out = 0;
        try {
            out = std::stoll(v, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != v.size() || v.empty())
            throw ConfigError(source_ + ": key `" + key + "` needs an integer, got `" + v + "`");
        return out;
    }

    long long get_int(const std::string& key, long long fallback) const {
        if (!has(key)) return fallback;
        return require_int(key);
    }

    bool get_bool(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        std::string v = require_string(key);
        for (char& c : v) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
        if (v == "false" || v == "no" || v == "off" || v == "0") return false;
        throw ConfigError(source_ + ": key `" + key + "` needs a boolean, got `" + v + "`");
    }

    std::vector<double> require_list(const std::string& key) const {
        return parse_list(key, require_string(key));
    }

    std::vector<double> get_list(const std::string& key, std::vector<double> fallback) const {
        if (!has(key)) return fallback;
        return require_list(key);
    }

    // `a b c ; d e f` -> rows of numbers, one row per ';'-separated group.
    std::vector<std::vector<double>> require_groups(const std::string& key) const {
        const std::string raw = require_string(key);
        std::vector<std::vector<double>> rows;
        std::string part;
        std::istringstream in(raw);
        while (std::getline(in, part, ';')) {
            std::string body = detail::trim(part);
            if (body.empty())
                throw ConfigError(source_ + ": key `" + key + "` has an empty group");
            rows.push_back(parse_list(key, body));
        }
        if (rows.empty())
            throw ConfigError(source_ + ": key `" + key + "` needs at least one group");
        return rows;
    }

    // Keys present in the file that nothing read: almost always a typo.
    std::vector<std::string> unused_keys() const {
        std::vector<std::string> out;
        for (const auto& [k, v] : kv_)
            if (!used_.count(k)) out.push_back(k);
        return out;
    }

    // FNV-1a over the sorted effective map; stable against line order.
    std::string hash() const {
        std::uint64_t h = 1469598103934665603ull;
        auto feed = [&](const std::string& s) {
            for (unsigned char c : s) {
                h ^= c;
                h *= 1099511628211ull;
            }
        };
        for (const auto& [k, v] : kv_) {
            feed(k);
            feed("=");
            feed(v);
            feed("\n");
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return std::string(buf);
    }

    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    double parse_double(const std::string& key, const std::string& v) const {
        std::size_t pos = 0;
        double out = 0.0;
        try {
            out = std::stod(v, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != v.size() || v.empty())
            throw ConfigError(source_ + ": key `" + key + "` needs a number, got `" + v + "`");
        return out;
    }

    std::vector<double> parse_list(const std::string& key, const std::string& raw) const {
        std::string body = raw;
        for (char& c : body)
            if (c == ',') c = ' ';
        std::istringstream in(body);
        std::vector<double> out;
        std::string tok;
        while (in >> tok) out.push_back(parse_double(key, tok));
        if (out.empty())
            throw ConfigError(source_ + ": key `" + key + "` needs a list of numbers");
        return out;
    }

    std::string source_ = "<inline>";
    std::map<std::string, std::string> kv_;
    mutable std::set<std::string> used_;
};

} // namespace dpt
