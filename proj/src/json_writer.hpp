#pragma once

// Minimal ordered JSON emitter. nlohmann/json is used for parsing, but
// emission goes through this writer so that key order is fixed and every
// number is printed with 17 significant digits (byte-stable reports).

#include <cstdio>
#include <string>
#include <vector>

namespace dmsens {

class JsonWriter {
public:
    std::string str() const { return out_; }

    void begin_object() {
        comma();
        out_ += '{';
        stack_.push_back('o');
        first_ = true;
    }
    void end_object() {
        stack_.pop_back();
        newline_indent();
        out_ += '}';
        first_ = false;
    }
    void begin_array() {
        comma();
        out_ += '[';
        stack_.push_back('a');
        first_ = true;
    }
    void end_array() {
        stack_.pop_back();
        newline_indent();
        out_ += ']';
        first_ = false;
    }
    void key(const std::string& k) {
        comma();
        out_ += quote(k);
        out_ += ": ";
        pending_value_ = true;
    }
    void value(const std::string& v) {
        comma();
        out_ += quote(v);
    }
    void value(const char* v) { value(std::string(v)); }
    void value(double v) {
        comma();
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out_ += buf;
    }
    void value(std::size_t v) {
        comma();
        out_ += std::to_string(v);
    }
    void value(unsigned long long v) {
        comma();
        out_ += std::to_string(v);
    }
    void value(bool v) {
        comma();
        out_ += v ? "true" : "false";
    }

    template <typename T>
    void kv(const std::string& k, const T& v) {
        key(k);
        value(v);
    }

    void key_array(const std::string& k, const std::vector<double>& values) {
        key(k);
        begin_array_inline();
        for (double v : values) {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            if (!first_) out_ += ", ";
            first_ = false;
            out_ += buf;
        }
        end_array_inline();
    }

    void key_array(const std::string& k, const std::vector<std::string>& values) {
        key(k);
        begin_array_inline();
        for (const std::string& v : values) {
            if (!first_) out_ += ", ";
            first_ = false;
            out_ += quote(v);
        }
        end_array_inline();
    }

private:
    void begin_array_inline() {
        out_ += '[';
        inline_depth_++;
        first_ = true;
        pending_value_ = false;
    }
    void end_array_inline() {
        out_ += ']';
        inline_depth_--;
        first_ = false;
    }
    void comma() {
        if (pending_value_) {
            pending_value_ = false;
            return;
        }
        if (!first_) out_ += ',';
        newline_indent();
        first_ = false;
    }
    void newline_indent() {
        if (stack_.empty()) return;
        out_ += '\n';
        out_.append(2 * stack_.size(), ' ');
    }
    static std::string quote(const std::string& s) {
        std::string out = "\"";
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                case '\r': out += "\\r"; break;
                default: out += c;
            }
        }
        out += '"';
        return out;
    }

    std::string out_;
    std::vector<char> stack_;
    bool first_ = true;
    bool pending_value_ = false;
    int inline_depth_ = 0;
};

}  // namespace dmsens
