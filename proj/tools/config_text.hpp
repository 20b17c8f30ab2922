#pragma once

// A small TOML subset: [table] headers, key = value, strings, integers,
// floats, booleans, and (nested, possibly multi-line) arrays. Keys are
// flattened to "table.key".

#include <map>
#include <string>
#include <vector>

namespace vncs::cli {

struct Value {
    enum class Kind { Integer, Float, Bool, String, Array };
    Kind kind = Kind::Integer;
    long long integer = 0;
    double number = 0.0;
    bool boolean = false;
    std::string text;
    std::vector<Value> items;

    bool is_number() const { return kind == Kind::Integer || kind == Kind::Float; }
    double as_double() const { return kind == Kind::Integer ? static_cast<double>(integer) : number; }
};

using Document = std::map<std::string, Value>;

// Throws ConfigError (key "<line N>" for syntax errors).
Document parse_document(const std::string& text);

// Parses a single value, as used by --set key=value.
Value parse_value(const std::string& text);

std::string format_double(double v);

}  // namespace vncs::cli
