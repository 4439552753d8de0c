#include "benj/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace benj {

JValue::JValue() = default;
JValue::JValue(bool b) : kind_(Kind::bool_), b_(b) {}
JValue::JValue(int v) : kind_(Kind::int_), i_(v) {}
JValue::JValue(long long v) : kind_(Kind::int_), i_(v) {}
JValue::JValue(std::size_t v) : kind_(Kind::int_), i_(static_cast<long long>(v)) {}
JValue::JValue(double v) : kind_(Kind::double_), d_(v) {}
JValue::JValue(const char* s) : kind_(Kind::string_), s_(s) {}
JValue::JValue(std::string s) : kind_(Kind::string_), s_(std::move(s)) {}

JValue JValue::array() {
    JValue v;
    v.kind_ = Kind::array_;
    return v;
}

JValue JValue::object() {
    JValue v;
    v.kind_ = Kind::object_;
    return v;
}

void JValue::push_back(JValue v) {
    if (kind_ != Kind::array_) throw std::logic_error("JValue::push_back on non-array");
    items_.push_back(std::move(v));
}

JValue& JValue::operator[](const std::string& key) {
    if (kind_ == Kind::null_) kind_ = Kind::object_;
    if (kind_ != Kind::object_) throw std::logic_error("JValue::operator[] on non-object");
    for (auto& [k, v] : fields_)
        if (k == key) return v;
    fields_.emplace_back(key, JValue());
    return fields_.back().second;
}

const JValue* JValue::find(const std::string& key) const {
    if (kind_ != Kind::object_) return nullptr;
    for (const auto& [k, v] : fields_)
        if (k == key) return &v;
    return nullptr;
}

std::size_t JValue::size() const {
    if (kind_ == Kind::array_) return items_.size();
    if (kind_ == Kind::object_) return fields_.size();
    return 0;
}

std::string format_json_double(double v) {
    if (!std::isfinite(v)) throw std::runtime_error("non-finite value in JSON report");
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

void escape_into(std::string& out, const std::string& s) {
    out += '"';
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    static const char* hex = "0123456789abcdef";
                    out += "\\u00";
                    out += hex[(c >> 4) & 0xf];
                    out += hex[c & 0xf];
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

} // namespace

void JValue::render(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
    switch (kind_) {
        case Kind::null_: out += "null"; break;
        case Kind::bool_: out += b_ ? "true" : "false"; break;
        case Kind::int_: out += std::to_string(i_); break;
        case Kind::double_: out += format_json_double(d_); break;
        case Kind::string_: escape_into(out, s_); break;
        case Kind::array_:
            if (items_.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (std::size_t i = 0; i < items_.size(); ++i) {
                out += pad;
                items_[i].render(out, indent, depth + 1);
                if (i + 1 < items_.size()) out += ',';
                out += '\n';
            }
            out += close_pad + "]";
            break;
        case Kind::object_:
            if (fields_.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            for (std::size_t i = 0; i < fields_.size(); ++i) {
                out += pad;
                escape_into(out, fields_[i].first);
                out += ": ";
                fields_[i].second.render(out, indent, depth + 1);
                if (i + 1 < fields_.size()) out += ',';
                out += '\n';
            }
            out += close_pad + "}";
            break;
    }
}

std::string JValue::dump(int indent) const {
    std::string out;
    render(out, indent, 0);
    out += '\n';
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace benj
