#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace adatg {

// Flat key=value configuration with '#' comments. Serialization is canonical
// (sorted keys) so the config hash is stable.
class KvConfig {
  public:
    static KvConfig parse_text(const std::string& text);
    static KvConfig parse_file(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    long get_long(const std::string& key, long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    uint64_t get_u64(const std::string& key, uint64_t fallback) const;

    std::string serialize() const;
    const std::map<std::string, std::string>& values() const { return values_; }

  private:
    std::map<std::string, std::string> values_;
};

uint64_t fnv1a64(std::string_view data);
std::string hex64(uint64_t value);

}  // namespace adatg
