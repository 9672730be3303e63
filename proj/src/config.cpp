#include "csched/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "csched/errors.hpp"

namespace csched {

namespace {
std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}
}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
    KeyValueConfig cfg;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) {
            if (eol == text.size()) break;
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error("config line " + std::to_string(line_no) + " is not key = value");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty())
            throw Error("config line " + std::to_string(line_no) + " has an empty key");
        cfg.kv_[key] = value;
        if (eol == text.size()) break;
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    return it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    char* end = nullptr;
    const double out = std::strtod(v->c_str(), &end);
    if (end == v->c_str() || *end != '\0')
        throw Error("config key '" + key + "' is not a number: '" + *v + "'");
    return out;
}

long KeyValueConfig::get_long(const std::string& key, long fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    char* end = nullptr;
    const long out = std::strtol(v->c_str(), &end, 10);
    if (end == v->c_str() || *end != '\0')
        throw Error("config key '" + key + "' is not an integer: '" + *v + "'");
    return out;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw Error("config key '" + key + "' is not a boolean: '" + *v + "'");
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
    return get(key).value_or(fallback);
}

}  // namespace csched
