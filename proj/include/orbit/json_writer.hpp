#pragma once

// Minimal deterministic JSON emitter. Fields keep insertion order and
// floating-point values are formatted with 17 significant digits, so two
// runs with identical inputs produce byte-identical output.

#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <cmath>

namespace orbit {

class JsonValue {
 public:
  enum class Kind { Null, Bool, Int, Double, String, Array, Object };

  JsonValue() : kind_(Kind::Null) {}
  JsonValue(bool b) : kind_(Kind::Bool), bool_(b) {}
  JsonValue(int v) : kind_(Kind::Int), int_(v) {}
  JsonValue(long v) : kind_(Kind::Int), int_(v) {}
  JsonValue(long long v) : kind_(Kind::Int), int_(v) {}
  JsonValue(double v) : kind_(Kind::Double), double_(v) {}
  JsonValue(const char* s) : kind_(Kind::String), str_(s) {}
  JsonValue(std::string s) : kind_(Kind::String), str_(std::move(s)) {}

  static JsonValue array() {
    JsonValue v;
    v.kind_ = Kind::Array;
    return v;
  }
  static JsonValue object() {
    JsonValue v;
    v.kind_ = Kind::Object;
    return v;
  }

  JsonValue& push_back(JsonValue v) {
    items_.push_back(std::move(v));
    return items_.back();
  }
  JsonValue& set(const std::string& key, JsonValue v) {
    fields_.emplace_back(key, std::move(v));
    return fields_.back().second;
  }

  static std::string format_double(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }

  void dump(std::string& out, int indent = 0) const {
    switch (kind_) {
      case Kind::Null:
        out += "null";
        break;
      case Kind::Bool:
        out += bool_ ? "true" : "false";
        break;
      case Kind::Int: {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%lld", int_);
        out += buf;
        break;
      }
      case Kind::Double:
        out += format_double(double_);
        break;
      case Kind::String:
        append_quoted(out, str_);
        break;
      case Kind::Array: {
        out += '[';
        for (size_t i = 0; i < items_.size(); ++i) {
          if (i) out += ',';
          newline(out, indent + 1);
          items_[i].dump(out, indent + 1);
        }
        if (!items_.empty()) newline(out, indent);
        out += ']';
        break;
      }
      case Kind::Object: {
        out += '{';
        for (size_t i = 0; i < fields_.size(); ++i) {
          if (i) out += ',';
          newline(out, indent + 1);
          append_quoted(out, fields_[i].first);
          out += ": ";
          fields_[i].second.dump(out, indent + 1);
        }
        if (!fields_.empty()) newline(out, indent);
        out += '}';
        break;
      }
    }
  }

  std::string dump() const {
    std::string out;
    dump(out);
    out += '\n';
    return out;
  }

 private:
  static void newline(std::string& out, int indent) {
    out += '\n';
    out.append(2 * static_cast<size_t>(indent), ' ');
  }
  static void append_quoted(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
      }
    }
    out += '"';
  }

  Kind kind_;
  bool bool_ = false;
  long long int_ = 0;
  double double_ = 0;
  std::string str_;
  std::vector<JsonValue> items_;
  std::vector<std::pair<std::string, JsonValue>> fields_;
};

}  // namespace orbit
