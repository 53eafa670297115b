#pragma once

// Sequence files.
//
// Text: the first data line is `N` or `N B_max`, followed by N signed
// decimal values, one per line. Blank lines and `#` comments are ignored.
//
// JSON: {"length": N, "values": [...], "bound": B_max}; "bound" is optional.

#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fntt/convolution.hpp"
#include "fntt/error.hpp"

namespace fntt {

enum class SequenceFormat { text, json };

namespace detail {

template <class T>
T parse_number(std::string_view s, std::string_view what) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw Error(Errc::parse_error, "bad " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

inline IntegerSequence parse_text_sequence(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::optional<u64> length;
  std::optional<u64> bound;
  std::vector<i64> values;
  for (std::string line; std::getline(in, line);) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (!length) {
      if (tok.size() > 2) throw Error(Errc::parse_error, "header must be 'N' or 'N B_max'");
      length = parse_number<u64>(tok[0], "length");
      if (tok.size() == 2) bound = parse_number<u64>(tok[1], "bound");
      continue;
    }
    if (tok.size() != 1) throw Error(Errc::parse_error, "expected one value per line");
    values.push_back(parse_number<i64>(tok[0], "value"));
  }
  if (!length) throw Error(Errc::parse_error, "missing length header");
  if (values.size() != *length)
    throw Error(Errc::parse_error, "header declares " + std::to_string(*length) + " values, found " +
                                       std::to_string(values.size()));
  return IntegerSequence(std::move(values), bound);
}

inline IntegerSequence parse_json_sequence(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    const auto values = doc.at("values").get<std::vector<i64>>();
    if (doc.contains("length") && doc.at("length").get<u64>() != values.size())
      throw Error(Errc::parse_error, "length field disagrees with values");
    std::optional<u64> bound;
    if (doc.contains("bound")) bound = doc.at("bound").get<u64>();
    return IntegerSequence(values, bound);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, std::string("json: ") + e.what());
  }
}

}  // namespace detail

/// Parses either format; JSON is recognised by a leading '{'.
inline IntegerSequence parse_sequence(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return detail::parse_json_sequence(text);
  return detail::parse_text_sequence(text);
}

inline IntegerSequence read_sequence(std::istream& in) {
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_sequence(ss.str());
}

/// The declared bound, when present, is written back so a round trip is exact.
inline void write_sequence(std::ostream& out, const IntegerSequence& seq,
                           SequenceFormat format = SequenceFormat::text) {
  if (format == SequenceFormat::json) {
    nlohmann::json doc;
    doc["length"] = seq.size();
    doc["values"] = seq.values();
    if (seq.declared_bound()) doc["bound"] = seq.bound();
    out << doc.dump() << '\n';
    return;
  }
  out << seq.size();
  if (seq.declared_bound()) out << ' ' << seq.bound();
  out << '\n';
  for (i64 v : seq.values()) out << v << '\n';
}

inline std::string format_sequence(const IntegerSequence& seq, SequenceFormat format = SequenceFormat::text) {
  std::ostringstream out;
  write_sequence(out, seq, format);
  return out.str();
}

}  // namespace fntt
