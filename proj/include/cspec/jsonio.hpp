#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cspec {

// Deterministic JSON assembly: insertion order preserved, numbers at 10
// significant digits, no locale dependence. Identical values give identical
// bytes, which the reproducibility contract of the CLI leans on.
class Json {
 public:
  static Json object();
  static Json array();
  static Json number(double x);
  static Json integer(long long x);
  static Json boolean(bool b);
  static Json string(const std::string& s);
  static Json null();

  Json& put(const std::string& key, Json v);  // object only
  Json& add(Json v);                          // array only

  std::string dump() const;

 private:
  enum class Kind { Object, Array, Scalar };
  Kind kind_ = Kind::Scalar;
  std::string scalar_;  // already-rendered token
  std::vector<std::pair<std::string, Json>> fields_;
  std::vector<Json> items_;

  void render(std::string& out) const;
};

// %.10g with non-finite mapped to null's token; shared with CSV emission.
std::string format_number(double x);

std::string escape_json(const std::string& s);

}  // namespace cspec
