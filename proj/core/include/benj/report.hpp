#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace benj {

// minimal JSON document builder with deterministic serialization: object keys
// keep insertion order, doubles render with 17 significant digits through
// to_chars, no locale dependence. emitted reports must be byte-identical
// across runs, which rules out hash-ordered maps and stream formatting
class JValue {
  public:
    JValue();  // null
    JValue(bool b);         // NOLINT(google-explicit-constructor)
    JValue(int v);          // NOLINT(google-explicit-constructor)
    JValue(long long v);    // NOLINT(google-explicit-constructor)
    JValue(std::size_t v);  // NOLINT(google-explicit-constructor)
    JValue(double v);       // NOLINT(google-explicit-constructor)
    JValue(const char* s);  // NOLINT(google-explicit-constructor)
    JValue(std::string s);  // NOLINT(google-explicit-constructor)

    static JValue array();
    static JValue object();

    bool is_null() const { return kind_ == Kind::null_; }
    bool is_array() const { return kind_ == Kind::array_; }
    bool is_object() const { return kind_ == Kind::object_; }

    void push_back(JValue v);                    // arrays
    JValue& operator[](const std::string& key);  // objects; creates missing keys
    const JValue* find(const std::string& key) const;
    std::size_t size() const;

    std::string dump(int indent = 2) const;

  private:
    enum class Kind { null_, bool_, int_, double_, string_, array_, object_ };
    Kind kind_ = Kind::null_;
    bool b_ = false;
    long long i_ = 0;
    double d_ = 0.0;
    std::string s_;
    std::vector<JValue> items_;
    std::vector<std::pair<std::string, JValue>> fields_;

    void render(std::string& out, int indent, int depth) const;
};

// 17-significant-digit decimal form, locale-free; throws on non-finite input
std::string format_json_double(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace benj
