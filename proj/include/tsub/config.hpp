#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tsub/errors.hpp"

// Sectioned key=value run configuration. Entries keep their order so a
// parsed config serializes back byte-identically (comments excluded).
namespace tsub {

struct RunConfig {
    struct Entry {
        std::string section;  // "" for the top level
        std::string key;
        std::string value;
    };
    std::vector<Entry> entries;

    const std::string* find(const std::string& section, const std::string& key) const {
        for (const auto& e : entries)
            if (e.section == section && e.key == key) return &e.value;
        return nullptr;
    }

    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const {
        const std::string* v = find(section, key);
        return v ? *v : fallback;
    }

    long long get_int(const std::string& section, const std::string& key,
                      long long fallback) const {
        const std::string* v = find(section, key);
        if (!v) return fallback;
        try {
            return std::stoll(*v);
        } catch (...) {
            throw ParseError("config value " + section + "." + key + " is not an integer: " + *v);
        }
    }

    bool get_bool(const std::string& section, const std::string& key, bool fallback) const {
        const std::string* v = find(section, key);
        if (!v) return fallback;
        if (*v == "true" || *v == "1" || *v == "on" || *v == "yes") return true;
        if (*v == "false" || *v == "0" || *v == "off" || *v == "no") return false;
        throw ParseError("config value " + section + "." + key + " is not a boolean: " + *v);
    }

    std::string serialize() const {
        std::ostringstream os;
        std::string section;
        bool first = true;
        for (const auto& e : entries) {
            if (e.section != section || first) {
                if (!e.section.empty()) os << "[" << e.section << "]\n";
                section = e.section;
            }
            first = false;
            os << e.key << " = " << e.value << "\n";
        }
        return os.str();
    }

    static RunConfig parse(std::istream& in) {
        RunConfig cfg;
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto trim = [](std::string s) {
                size_t a = s.find_first_not_of(" \t\r");
                size_t b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            std::string t = trim(line);
            if (t.empty()) continue;
            if (t.front() == '[') {
                if (t.back() != ']') throw ParseError("config line " + std::to_string(lineno) +
                                                      ": unterminated section header");
                section = trim(t.substr(1, t.size() - 2));
                continue;
            }
            auto eq = t.find('=');
            if (eq == std::string::npos)
                throw ParseError("config line " + std::to_string(lineno) + ": expected key = value");
            cfg.entries.push_back({section, trim(t.substr(0, eq)), trim(t.substr(eq + 1))});
        }
        return cfg;
    }

    static RunConfig parse(const std::string& text) {
        std::istringstream is(text);
        return parse(is);
    }

    static RunConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open config file: " + path);
        return parse(in);
    }
};

// Environment overrides for the two globally relevant knobs.
inline const char* env_seed_override() { return std::getenv("TSUB_SEED"); }
inline const char* env_artifact_dir_override() { return std::getenv("TSUB_ARTIFACT_DIR"); }

}  // namespace tsub
