#include "cspec/jsonio.hpp"

#include <cmath>
#include <cstdio>

#include "cspec/errors.hpp"

namespace cspec {

std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string escape_json(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if ((unsigned char)c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

Json Json::object() {
  Json j;
  j.kind_ = Kind::Object;
  return j;
}

Json Json::array() {
  Json j;
  j.kind_ = Kind::Array;
  return j;
}

Json Json::number(double x) {
  Json j;
  j.scalar_ = format_number(x);
  return j;
}

Json Json::integer(long long x) {
  Json j;
  j.scalar_ = std::to_string(x);
  return j;
}

Json Json::boolean(bool b) {
  Json j;
  j.scalar_ = b ? "true" : "false";
  return j;
}

Json Json::string(const std::string& s) {
  Json j;
  j.scalar_ = "\"" + escape_json(s) + "\"";
  return j;
}

Json Json::null() {
  Json j;
  j.scalar_ = "null";
  return j;
}

Json& Json::put(const std::string& key, Json v) {
  if (kind_ != Kind::Object) throw InvalidArgumentError("put on a non-object json node");
  fields_.emplace_back(key, std::move(v));
  return *this;
}

Json& Json::add(Json v) {
  if (kind_ != Kind::Array) throw InvalidArgumentError("add on a non-array json node");
  items_.push_back(std::move(v));
  return *this;
}

void Json::render(std::string& out) const {
  switch (kind_) {
    case Kind::Scalar:
      out += scalar_;
      break;
    case Kind::Object: {
      out += '{';
      bool first = true;
      for (const auto& [k, v] : fields_) {
        if (!first) out += ',';
        first = false;
        out += '"';
        out += escape_json(k);
        out += "\":";
        v.render(out);
      }
      out += '}';
      break;
    }
    case Kind::Array: {
      out += '[';
      bool first = true;
      for (const Json& v : items_) {
        if (!first) out += ',';
        first = false;
        v.render(out);
      }
      out += ']';
      break;
    }
  }
}

std::string Json::dump() const {
  std::string out;
  render(out);
  return out;
}

}  // namespace cspec
