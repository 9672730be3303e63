#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace csched {

// "key = value" scenario files; '#' starts a comment, blank lines ignored.
// CLI flags override file values, so lookups return optionals and the
// caller supplies its defaults.
class KeyValueConfig {
  public:
    static KeyValueConfig parse(std::string_view text);
    static KeyValueConfig load(const std::string& path);

    std::optional<std::string> get(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;
};

}  // namespace csched
