#pragma once

/*
 * Flat key-value experiment configs.
 *
 * Format: one `section.key = value` per line, `#` starts a comment, blank
 * lines ignored. Entries keep their file order so the JSON summary can embed
 * the resolved config verbatim, and every typed getter records which keys it
 * consumed so strict mode can flag the ones nothing read (usually typos).
 * All diagnostics carry file:line and the offending key.
 */

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dinls {

struct ConfigEntry {
    std::string key;
    std::string raw;
    int line = 0;
};

class Config {
public:
    static Config from_string(const std::string& text, std::string name = "<string>") {
        Config cfg;
        cfg.name_ = std::move(name);
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string trimmed = trim(line);
            if (trimmed.empty()) continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                cfg.fail(lineno, "expected 'key = value', got '" + trimmed + "'");
            ConfigEntry e;
            e.key = trim(trimmed.substr(0, eq));
            e.raw = trim(trimmed.substr(eq + 1));
            e.line = lineno;
            if (e.key.empty()) cfg.fail(lineno, "empty key");
            for (char c : e.key)
                if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '_' &&
                    c != '-')
                    cfg.fail(lineno, "bad character '" + std::string(1, c) + "' in key '" +
                                         e.key + "'");
            if (const ConfigEntry* prev = cfg.find(e.key))
                cfg.fail(lineno, "duplicate key '" + e.key + "' (first set on line " +
                                     std::to_string(prev->line) + ")");
            cfg.entries_.push_back(std::move(e));
        }
        return cfg;
    }

    static Config from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error(path + ": cannot open config file");
        std::ostringstream buf;
        buf << in.rdbuf();
        return from_string(buf.str(), path);
    }

    const std::string& name() const { return name_; }
    const std::vector<ConfigEntry>& entries() const { return entries_; }

    bool has(const std::string& key) const { return find(key) != nullptr; }

    std::string get_string(const std::string& key) const {
        const ConfigEntry& e = require(key);
        consumed_->insert(key);
        return e.raw;
    }
    std::string get_string(const std::string& key, const std::string& def) const {
        consumed_->insert(key);
        const ConfigEntry* e = find(key);
        return e ? e->raw : def;
    }

    double get_double(const std::string& key) const { return parse_double(require(key)); }
    double get_double(const std::string& key, double def) const {
        consumed_->insert(key);
        const ConfigEntry* e = find(key);
        return e ? parse_double(*e) : def;
    }

    int get_int(const std::string& key) const { return parse_int(require(key)); }
    int get_int(const std::string& key, int def) const {
        consumed_->insert(key);
        const ConfigEntry* e = find(key);
        return e ? parse_int(*e) : def;
    }

    bool get_bool(const std::string& key) const { return parse_bool(require(key)); }
    bool get_bool(const std::string& key, bool def) const {
        consumed_->insert(key);
        const ConfigEntry* e = find(key);
        return e ? parse_bool(*e) : def;
    }

    /** Comma-separated doubles; an absent key or empty value is an empty list. */
    std::vector<double> get_double_list(const std::string& key) const {
        consumed_->insert(key);
        std::vector<double> out;
        const ConfigEntry* e = find(key);
        if (e == nullptr || trim(e->raw).empty()) return out;
        std::istringstream in(e->raw);
        std::string item;
        while (std::getline(in, item, ',')) {
            ConfigEntry part{e->key, trim(item), e->line};
            out.push_back(parse_double(part));
        }
        return out;
    }

    /** Add or replace a key programmatically (sweep axis overrides). */
    void set(const std::string& key, const std::string& raw) {
        for (auto& e : entries_)
            if (e.key == key) {
                e.raw = raw;
                return;
            }
        entries_.push_back({key, raw, 0});
    }

    /** Keys present in the file that no getter ever consumed. */
    std::vector<std::string> unknown_keys() const {
        std::vector<std::string> out;
        for (const auto& e : entries_)
            if (consumed_->count(e.key) == 0) out.push_back(e.key);
        return out;
    }

private:
    static std::string trim(const std::string& s) {
        std::size_t a = 0, b = s.size();
        while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
        while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
        return s.substr(a, b - a);
    }

    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw std::runtime_error(name_ + ":" + std::to_string(line) + ": " + msg);
    }

    const ConfigEntry* find(const std::string& key) const {
        for (const auto& e : entries_)
            if (e.key == key) return &e;
        return nullptr;
    }

    const ConfigEntry& require(const std::string& key) const {
        consumed_->insert(key);
        const ConfigEntry* e = find(key);
        if (e == nullptr)
            throw std::runtime_error(name_ + ": missing required key '" + key + "'");
        return *e;
    }

    double parse_double(const ConfigEntry& e) const {
        errno = 0;
        char* end = nullptr;
        const double v = std::strtod(e.raw.c_str(), &end);
        if (end == e.raw.c_str() || *end != '\0' || errno == ERANGE)
            fail(e.line, e.key + ": expected a real number, got '" + e.raw + "'");
        return v;
    }

    int parse_int(const ConfigEntry& e) const {
        errno = 0;
        char* end = nullptr;
        const long v = std::strtol(e.raw.c_str(), &end, 10);
        if (end == e.raw.c_str() || *end != '\0' || errno == ERANGE || v < INT_MIN_ ||
            v > INT_MAX_)
            fail(e.line, e.key + ": expected an integer, got '" + e.raw + "'");
        return static_cast<int>(v);
    }

    bool parse_bool(const ConfigEntry& e) const {
        const std::string& r = e.raw;
        if (r == "true" || r == "1" || r == "yes" || r == "on") return true;
        if (r == "false" || r == "0" || r == "no" || r == "off") return false;
        fail(e.line, e.key + ": expected a boolean, got '" + r + "'");
    }

    static constexpr long INT_MIN_ = -2147483647L - 1;
    static constexpr long INT_MAX_ = 2147483647L;

    std::string name_;
    std::vector<ConfigEntry> entries_;
    // shared across copies: sweep clones consume keys on behalf of the parent
    mutable std::shared_ptr<std::set<std::string>> consumed_ =
        std::make_shared<std::set<std::string>>();
};

}  // namespace dinls
