#include "tempora/toml_lite.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace tempora::toml {

double Value::as_number() const {
    if (kind == Kind::Int) return static_cast<double>(int_v);
    if (kind == Kind::Float) return float_v;
    throw ParseError("TOML value is not numeric");
}

const Value* Table::find(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

bool Table::has(const std::string& key) const { return find(key) != nullptr; }

std::int64_t Table::get_int(const std::string& key, std::int64_t fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    if (v->kind == Value::Kind::Int) return v->int_v;
    throw ParseError("TOML key '" + key + "' is not an integer");
}

double Table::get_double(const std::string& key, double fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    return v->as_number();
}

bool Table::get_bool(const std::string& key, bool fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    if (v->kind == Value::Kind::Bool) return v->bool_v;
    throw ParseError("TOML key '" + key + "' is not a boolean");
}

std::string Table::get_string(const std::string& key,
                              const std::string& fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    if (v->kind == Value::Kind::String) return v->string_v;
    throw ParseError("TOML key '" + key + "' is not a string");
}

std::vector<double> Table::get_double_array(const std::string& key) const {
    const Value* v = find(key);
    if (!v) return {};
    if (v->kind != Value::Kind::Array) {
        throw ParseError("TOML key '" + key + "' is not an array");
    }
    std::vector<double> out;
    for (const auto& e : v->array_v) out.push_back(e.as_number());
    return out;
}

std::vector<std::string> Table::get_string_array(const std::string& key) const {
    const Value* v = find(key);
    if (!v) return {};
    if (v->kind != Value::Kind::Array) {
        throw ParseError("TOML key '" + key + "' is not an array");
    }
    std::vector<std::string> out;
    for (const auto& e : v->array_v) {
        if (e.kind != Value::Kind::String) {
            throw ParseError("TOML key '" + key + "' is not a string array");
        }
        out.push_back(e.string_v);
    }
    return out;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Strips a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
        if (s[i] == '#' && !in_string) return s.substr(0, i);
    }
    return s;
}

Value parse_scalar(const std::string& raw, std::size_t line_no) {
    const std::string s = trim(raw);
    if (s.empty()) throw ParseError("empty TOML value at line " + std::to_string(line_no));

    Value v;
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"') {
            throw ParseError("unterminated string at line " + std::to_string(line_no));
        }
        v.kind = Value::Kind::String;
        std::string out;
        for (std::size_t i = 1; i + 1 < s.size(); ++i) {
            if (s[i] == '\\' && i + 2 < s.size()) {
                ++i;
                switch (s[i]) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    default:
                        throw ParseError("bad escape at line " + std::to_string(line_no));
                }
            } else {
                out += s[i];
            }
        }
        v.string_v = out;
        return v;
    }
    if (s == "true" || s == "false") {
        v.kind = Value::Kind::Bool;
        v.bool_v = s == "true";
        return v;
    }

    // Number: integer when it parses fully without . e E
    const bool looks_float = s.find_first_of(".eE") != std::string::npos;
    char* end = nullptr;
    if (!looks_float) {
        const long long iv = std::strtoll(s.c_str(), &end, 10);
        if (end && *end == '\0' && end != s.c_str()) {
            v.kind = Value::Kind::Int;
            v.int_v = iv;
            return v;
        }
    }
    const double dv = std::strtod(s.c_str(), &end);
    if (end && *end == '\0' && end != s.c_str()) {
        v.kind = Value::Kind::Float;
        v.float_v = dv;
        return v;
    }
    throw ParseError("cannot parse TOML value '" + s + "' at line " +
                     std::to_string(line_no));
}

Value parse_value(const std::string& raw, std::size_t line_no) {
    const std::string s = trim(raw);
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']') {
            throw ParseError("unterminated array at line " + std::to_string(line_no));
        }
        Value v;
        v.kind = Value::Kind::Array;
        const std::string body = s.substr(1, s.size() - 2);
        std::string current;
        bool in_string = false;
        for (char c : body) {
            if (c == '"') in_string = !in_string;
            if (c == ',' && !in_string) {
                if (!trim(current).empty()) {
                    v.array_v.push_back(parse_scalar(current, line_no));
                }
                current.clear();
            } else {
                current += c;
            }
        }
        if (!trim(current).empty()) v.array_v.push_back(parse_scalar(current, line_no));
        return v;
    }
    return parse_scalar(s, line_no);
}

}  // namespace

Table parse(const std::string& text) {
    Table table;
    std::istringstream in(text);
    std::string line;
    std::string prefix;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ParseError("bad table header at line " + std::to_string(line_no));
            }
            prefix = trim(line.substr(1, line.size() - 2));
            if (prefix.empty()) {
                throw ParseError("empty table name at line " + std::to_string(line_no));
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("expected key = value at line " + std::to_string(line_no));
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw ParseError("empty key at line " + std::to_string(line_no));
        }
        const std::string full = prefix.empty() ? key : prefix + "." + key;
        table.set(full, parse_value(line.substr(eq + 1), line_no));
    }
    return table;
}

Table parse_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

}  // namespace tempora::toml
