#include "config_text.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

#include "vncs/errors.hpp"

namespace vncs::cli {

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    Document document() {
        Document doc;
        std::string table;
        while (true) {
            skip_blank_lines();
            if (at_end()) break;
            if (peek() == '[') {
                ++pos_;
                skip_spaces();
                table = bare_key();
                skip_spaces();
                expect(']');
                end_of_line();
                continue;
            }
            std::string key = bare_key();
            skip_spaces();
            expect('=');
            skip_spaces();
            Value v = value();
            end_of_line();
            const std::string full = table.empty() ? key : table + "." + key;
            if (!doc.emplace(full, std::move(v)).second) fail("duplicate key '" + full + "'");
        }
        return doc;
    }

    Value single() {
        skip_spaces();
        Value v = value();
        skip_spaces();
        if (!at_end()) fail("trailing characters after value");
        return v;
    }

private:
    bool at_end() const { return pos_ >= s_.size(); }
    char peek() const { return at_end() ? '\0' : s_[pos_]; }

    [[noreturn]] void fail(const std::string& what) const {
        int line = 1;
        for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i) line += s_[i] == '\n';
        throw ConfigError("line " + std::to_string(line), what);
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    void skip_spaces() {
        while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
    }

    void skip_comment() {
        if (peek() == '#')
            while (!at_end() && peek() != '\n') ++pos_;
    }

    void skip_blank_lines() {
        while (!at_end()) {
            skip_spaces();
            skip_comment();
            if (peek() == '\r') ++pos_;
            if (peek() == '\n') {
                ++pos_;
                continue;
            }
            break;
        }
    }

    // Whitespace, comments and newlines inside arrays.
    void skip_array_space() {
        while (!at_end()) {
            const char c = peek();
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                ++pos_;
            } else if (c == '#') {
                skip_comment();
            } else {
                break;
            }
        }
    }

    void end_of_line() {
        skip_spaces();
        skip_comment();
        if (peek() == '\r') ++pos_;
        if (!at_end() && peek() != '\n') fail("unexpected characters at end of line");
    }

    std::string bare_key() {
        const std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-'))
            ++pos_;
        if (start == pos_) fail("expected a key");
        return s_.substr(start, pos_ - start);
    }

    Value value() {
        const char c = peek();
        if (c == '"') return string_value();
        if (c == '[') return array_value();
        if (s_.compare(pos_, 4, "true") == 0) {
            pos_ += 4;
            Value v;
            v.kind = Value::Kind::Bool;
            v.boolean = true;
            return v;
        }
        if (s_.compare(pos_, 5, "false") == 0) {
            pos_ += 5;
            Value v;
            v.kind = Value::Kind::Bool;
            return v;
        }
        return number_value();
    }

    Value string_value() {
        ++pos_;
        Value v;
        v.kind = Value::Kind::String;
        while (true) {
            if (at_end() || peek() == '\n') fail("unterminated string");
            char c = s_[pos_++];
            if (c == '"') break;
            if (c == '\\') {
                if (at_end()) fail("unterminated string");
                const char e = s_[pos_++];
                switch (e) {
                    case 'n': c = '\n'; break;
                    case 't': c = '\t'; break;
                    case '"': c = '"'; break;
                    case '\\': c = '\\'; break;
                    default: fail(std::string("unsupported escape \\") + e);
                }
            }
            v.text += c;
        }
        return v;
    }

    Value array_value() {
        ++pos_;
        Value v;
        v.kind = Value::Kind::Array;
        skip_array_space();
        if (peek() == ']') {
            ++pos_;
            return v;
        }
        while (true) {
            skip_array_space();
            if (peek() == ']') {  // trailing comma
                ++pos_;
                break;
            }
            v.items.push_back(value());
            skip_array_space();
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            expect(']');
            break;
        }
        return v;
    }

    Value number_value() {
        const std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' || peek() == '-' ||
                             peek() == '.' || peek() == '_'))
            ++pos_;
        std::string tok = s_.substr(start, pos_ - start);
        if (tok.empty()) fail("expected a value");
        std::string clean;
        for (char c : tok)
            if (c != '_') clean += c;
        Value v;
        const bool is_float = clean.find_first_of(".eE") != std::string::npos || clean == "inf" || clean == "nan";
        char* end = nullptr;
        if (is_float) {
            v.kind = Value::Kind::Float;
            v.number = std::strtod(clean.c_str(), &end);
        } else {
            v.kind = Value::Kind::Integer;
            v.integer = std::strtoll(clean.c_str(), &end, 10);
        }
        if (end == clean.c_str() || *end != '\0') {
            pos_ = start;
            fail("malformed value '" + tok + "'");
        }
        return v;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

Document parse_document(const std::string& text) { return Parser(text).document(); }

Value parse_value(const std::string& text) { return Parser(text).single(); }

std::string format_double(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    std::string s = buf;
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

}  // namespace vncs::cli
