#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace tgemb {

// Flat key-value config. Files hold `key = value` lines with '#' comments;
// `[section]` headers prefix the keys that follow as `section.key`. Keys are
// kept sorted so echoes and reports serialize canonically.
class ConfigMap {
public:
    static ConfigMap parse_file(const std::string& path);
    static ConfigMap parse_text(const std::string& text, const std::string& source_name);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    const std::map<std::string, std::string>& entries() const { return values_; }
    std::string echo() const;  // canonical `key = value` dump

private:
    std::map<std::string, std::string> values_;
};

}  // namespace tgemb
