#pragma once

#include <charconv>
#include <span>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core.hpp"

namespace rperm {

/// Parses "a,b,c" into integers. Whitespace around items is ignored.
inline std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  if (text.empty()) throw invalid_input("io: empty list");
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    std::string_view item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    int v = 0;
    const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || end != item.data() + item.size())
      throw invalid_input("io: '" + std::string(item) + "' is not an integer");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

/// Restriction vector from "1,1,2,4,4", "b2:n", "b3:n" or "br:r,n".
inline RestrictionVector parse_bspec(std::string_view spec) {
  const auto shorthand = [&](std::string_view prefix) { return spec.substr(0, prefix.size()) == prefix; };
  if (shorthand("b2:")) {
    const auto v = parse_int_list(spec.substr(3));
    if (v.size() != 1) throw invalid_input("io: expected b2:n");
    return make_b2(v[0]);
  }
  if (shorthand("b3:")) {
    const auto v = parse_int_list(spec.substr(3));
    if (v.size() != 1) throw invalid_input("io: expected b3:n");
    return make_b3(v[0]);
  }
  if (shorthand("br:")) {
    const auto v = parse_int_list(spec.substr(3));
    if (v.size() != 2) throw invalid_input("io: expected br:r,n");
    return make_br(v[0], v[1]);
  }
  return RestrictionVector(parse_int_list(spec));
}

inline std::string join_ints(std::span<const int> values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(values[i]);
  }
  return s;
}

inline Composition parse_composition(std::string_view text) { return Composition(parse_int_list(text)); }
inline std::string format_composition(const Composition& c) { return join_ints(c.parts()); }
inline Permutation parse_permutation(std::string_view text) { return Permutation(parse_int_list(text)); }
inline std::string format_permutation(const Permutation& p) { return join_ints(p.images()); }

/// RFC 4180 style CSV: header row, LF line endings, fields quoted when needed.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out), width_(header.size()) {
    row(header);
  }

  void row(const std::vector<std::string>& fields) {
    if (fields.size() != width_) throw invalid_input("io: CSV row width does not match header");
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << quote(fields[i]);
    }
    out_ << '\n';
  }

 private:
  static std::string quote(const std::string& f) {
    if (f.find_first_of(",\"\n\r") == std::string::npos) return f;
    std::string q = "\"";
    for (char c : f) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }

  std::ostream& out_;
  std::size_t width_;
};

/// Flat "key=value" lines, one per entry, in insertion order.
class KvWriter {
 public:
  explicit KvWriter(std::ostream& out) : out_(out) {}

  template <typename T>
  KvWriter& put(std::string_view key, const T& value) {
    out_ << key << '=' << value << '\n';
    return *this;
  }

 private:
  std::ostream& out_;
};

}  // namespace rperm
