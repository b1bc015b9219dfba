#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "kvf/linalg.hpp"

namespace kvf {

/// Text report emitter with a stable, diffable format: one "key = value" line
/// per entry, doubles printed with 17 significant digits so values round-trip
/// exactly.
class ReportWriter {
public:
    explicit ReportWriter(std::ostream& out) : out_(out) {}

    static std::string format(double x) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        return buf;
    }

    void line(const std::string& key, const std::string& value) {
        out_ << key << " = " << value << '\n';
    }

    void line(const std::string& key, const char* value) { line(key, std::string(value)); }
    void line(const std::string& key, bool value) { line(key, std::string(value ? "true" : "false")); }
    void line(const std::string& key, double value) { line(key, format(value)); }

    void line(const std::string& key, std::size_t value) { line(key, std::to_string(value)); }
    void line(const std::string& key, int value) { line(key, std::to_string(value)); }

    void line(const std::string& key, const Vec& value) {
        std::string s = "[";
        for (std::size_t i = 0; i < value.size(); ++i) {
            if (i) s += ", ";
            s += format(value[i]);
        }
        s += "]";
        line(key, s);
    }

    void blank() { out_ << '\n'; }
    void section(const std::string& name) { out_ << "[" << name << "]\n"; }

private:
    std::ostream& out_;
};

} // namespace kvf
