// Minimal TOML subset reader: [table] headers, bare keys, integers, floats,
// booleans, double-quoted strings and flat arrays of those. Enough for the
// experiment-config format; values are addressed by dotted path.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tempora/errors.hpp"

namespace tempora::toml {

struct Value {
    enum class Kind { Int, Float, Bool, String, Array };

    Kind kind = Kind::Int;
    std::int64_t int_v = 0;
    double float_v = 0.0;
    bool bool_v = false;
    std::string string_v;
    std::vector<Value> array_v;

    double as_number() const;  // Int or Float
};

class Table {
  public:
    bool has(const std::string& dotted_key) const;

    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::vector<double> get_double_array(const std::string& key) const;
    std::vector<std::string> get_string_array(const std::string& key) const;

    const std::map<std::string, Value>& entries() const { return entries_; }
    void set(const std::string& key, Value v) { entries_[key] = std::move(v); }

  private:
    const Value* find(const std::string& key) const;
    std::map<std::string, Value> entries_;  // dotted paths
};

Table parse(const std::string& text);           // throws ParseError
Table parse_file(const std::filesystem::path& path);  // throws IoError/ParseError

}  // namespace tempora::toml
