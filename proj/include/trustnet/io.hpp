#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "trustnet/dynamics.hpp"
#include "trustnet/errors.hpp"
#include "trustnet/network.hpp"

namespace trustnet {

// Flat key = value configuration files. '#' starts a comment, blank lines
// are skipped, keys are single tokens.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::istream& in) {
        KeyValueConfig cfg;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                if (line.find_first_not_of(" \t\r") != std::string::npos)
                    throw ParseError("expected 'key = value'", line_no);
                continue;
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw ParseError("empty key", line_no);
            cfg.entries_[key] = value;
        }
        return cfg;
    }

    static KeyValueConfig parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open config file: " + path);
        return parse(in);
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    const std::string& require(const std::string& key) const {
        auto it = entries_.find(key);
        if (it == entries_.end())
            throw ConfigError("missing required config key: " + key);
        return it->second;
    }

    std::string get_or(const std::string& key, const std::string& fallback) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? fallback : it->second;
    }

    double require_double(const std::string& key) const { return to_double(key, require(key)); }

    double double_or(const std::string& key, double fallback) const {
        return has(key) ? to_double(key, require(key)) : fallback;
    }

    std::uint64_t require_u64(const std::string& key) const { return to_u64(key, require(key)); }

    std::uint64_t u64_or(const std::string& key, std::uint64_t fallback) const {
        return has(key) ? to_u64(key, require(key)) : fallback;
    }

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    static std::string trim(std::string s) {
        const auto first = s.find_first_not_of(" \t\r");
        const auto last = s.find_last_not_of(" \t\r");
        if (first == std::string::npos) return "";
        return s.substr(first, last - first + 1);
    }

    static double to_double(const std::string& key, const std::string& value) {
        double v = 0.0;
        const char* first = value.data();
        const char* last = value.data() + value.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last)
            throw ConfigError("config key '" + key + "': bad numeric value '" + value + "'");
        return v;
    }

    static std::uint64_t to_u64(const std::string& key, const std::string& value) {
        std::uint64_t v = 0;
        const char* first = value.data();
        const char* last = value.data() + value.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last)
            throw ConfigError("config key '" + key + "': bad integer value '" + value + "'");
        return v;
    }

    std::map<std::string, std::string> entries_;
};

// Writes a file atomically: the content lands under a temporary name in
// the same directory and is renamed over the target, so readers never see
// a half-written file.
inline void atomic_write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write file: " + tmp.string());
        out << content;
        if (!out) throw ConfigError("short write: " + tmp.string());
    }
    fs::rename(tmp, target);
}

// Comma-separated doubles ("0.1,0.2,0.5").
inline std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        double v = 0.0;
        const char* first = item.data();
        const char* last = item.data() + item.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last)
            throw ConfigError("bad numeric list element '" + item + "'");
        out.push_back(v);
    }
    return out;
}

// Histogram CSV: `rating,count` rows, optionally prefixed by a snapshot
// column (`snapshot_t,rating,count`); with snapshots present only the last
// snapshot is returned unless `want_t` selects one.
inline RatingHistogram parse_histogram_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool three_columns = false;
    bool header_seen = false;
    std::map<std::uint64_t, std::map<std::uint64_t, std::uint64_t>> by_snapshot;
    RatingHistogram flat;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::vector<std::string> fields;
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (!header_seen) {
            header_seen = true;
            if (fields.size() == 3 && fields[0] == "snapshot_t") {
                three_columns = true;
                continue;
            }
            if (fields.size() == 2 && fields[0] == "rating") continue;
            // fall through: headerless data row
        }
        auto parse_u64 = [&](const std::string& s) {
            std::uint64_t v = 0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || ptr != s.data() + s.size())
                throw ParseError("bad integer '" + s + "'", line_no);
            return v;
        };
        if (three_columns || fields.size() == 3) {
            if (fields.size() != 3) throw ParseError("expected 3 columns", line_no);
            three_columns = true;
            by_snapshot[parse_u64(fields[0])][parse_u64(fields[1])] += parse_u64(fields[2]);
        } else if (fields.size() == 2) {
            flat.counts[parse_u64(fields[0])] += parse_u64(fields[1]);
        } else {
            throw ParseError("expected 'rating,count' or 'snapshot_t,rating,count'", line_no);
        }
    }
    if (three_columns) {
        if (by_snapshot.empty()) throw ParseError("no histogram rows found");
        flat.counts = by_snapshot.rbegin()->second; // final snapshot
    }
    flat.total = 0;
    for (const auto& [rating, count] : flat.counts) flat.total += count;
    if (flat.counts.empty()) throw ParseError("no histogram rows found");
    return flat;
}

inline RatingHistogram parse_histogram_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open histogram file: " + path);
    return parse_histogram_csv(in);
}

inline std::string format_param_header(const std::string& tool,
                                       const std::vector<std::pair<std::string, std::string>>& params) {
    std::string line = "# trustnet " + tool;
    for (const auto& [k, v] : params) line += " " + k + "=" + v;
    line += "\n";
    return line;
}

} // namespace trustnet
