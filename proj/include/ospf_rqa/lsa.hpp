#pragma once

// LSA observations, the JSON-lines event log, and binning into count series.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ospf_rqa/errors.hpp"

namespace ospf_rqa {

inline constexpr int kMaxAge = 3600;

/// 32-bit OSPF identifier (router ID, link-state ID), rendered as a dotted quad.
struct Ipv4 {
  std::uint32_t value = 0;

  auto operator<=>(const Ipv4&) const = default;

  std::string str() const {
    std::ostringstream os;
    os << ((value >> 24) & 0xff) << '.' << ((value >> 16) & 0xff) << '.'
       << ((value >> 8) & 0xff) << '.' << (value & 0xff);
    return os.str();
  }

  static std::optional<Ipv4> parse(std::string_view s) {
    std::uint32_t out = 0;
    int parts = 0;
    std::size_t pos = 0;
    while (parts < 4) {
      std::size_t end = pos;
      while (end < s.size() && s[end] >= '0' && s[end] <= '9') ++end;
      if (end == pos || end - pos > 3) return std::nullopt;
      const int octet = std::stoi(std::string(s.substr(pos, end - pos)));
      if (octet > 255) return std::nullopt;
      out = (out << 8) | static_cast<std::uint32_t>(octet);
      ++parts;
      if (parts < 4) {
        if (end >= s.size() || s[end] != '.') return std::nullopt;
        pos = end + 1;
      } else if (end != s.size()) {
        return std::nullopt;
      }
    }
    return Ipv4{out};
  }
};

struct LsaEvent {
  std::int64_t ts_us = 0;
  std::string monitor;
  int ls_type = 1;
  Ipv4 adv_router;
  Ipv4 ls_id;
  int ls_age = 0;
  std::int32_t ls_seq = 0;
  bool is_ack = false;

  bool operator==(const LsaEvent&) const = default;
};

inline bool valid_ls_type(long long t) { return t >= 1 && t <= 5; }

// ---------------------------------------------------------------------------
// JSON-lines log

/// One line, fixed key order so logs are byte-stable.
inline std::string format_event_line(const LsaEvent& e) {
  std::ostringstream os;
  os << "{\"ts_us\":" << e.ts_us << ",\"monitor\":" << nlohmann::json(e.monitor).dump()
     << ",\"ls_type\":" << e.ls_type << ",\"adv_router\":\"" << e.adv_router.str()
     << "\",\"ls_id\":\"" << e.ls_id.str() << "\",\"ls_age\":" << e.ls_age
     << ",\"ls_seq\":" << e.ls_seq << ",\"is_ack\":" << (e.is_ack ? "true" : "false") << "}";
  return os.str();
}

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* key,
                                           std::size_t line) {
  auto it = j.find(key);
  if (it == j.end())
    throw ParseError("line " + std::to_string(line) + ": missing field '" + key + "'", line);
  return *it;
}

inline long long require_int(const nlohmann::json& j, const char* key, std::size_t line) {
  const auto& v = require_field(j, key, line);
  if (!v.is_number_integer())
    throw ParseError("line " + std::to_string(line) + ": field '" + key + "' must be an integer",
                     line);
  return v.get<long long>();
}

inline Ipv4 require_ipv4(const nlohmann::json& j, const char* key, std::size_t line) {
  const auto& v = require_field(j, key, line);
  if (!v.is_string())
    throw ParseError("line " + std::to_string(line) + ": field '" + key +
                         "' must be a dotted-quad string",
                     line);
  auto ip = Ipv4::parse(v.get<std::string>());
  if (!ip)
    throw ParseError("line " + std::to_string(line) + ": field '" + key +
                         "' is not a dotted quad",
                     line);
  return *ip;
}

}  // namespace detail

inline LsaEvent parse_event_line(std::string_view text, std::size_t line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw ParseError("line " + std::to_string(line) + ": invalid JSON: " + ex.what(), line);
  }
  if (!j.is_object())
    throw ParseError("line " + std::to_string(line) + ": expected a JSON object", line);

  LsaEvent e;
  e.ts_us = detail::require_int(j, "ts_us", line);
  const auto& mon = detail::require_field(j, "monitor", line);
  if (!mon.is_string())
    throw ParseError("line " + std::to_string(line) + ": field 'monitor' must be a string", line);
  e.monitor = mon.get<std::string>();
  const long long type = detail::require_int(j, "ls_type", line);
  if (!valid_ls_type(type))
    throw ParseError("line " + std::to_string(line) + ": ls_type " + std::to_string(type) +
                         " outside 1..5",
                     line);
  e.ls_type = static_cast<int>(type);
  e.adv_router = detail::require_ipv4(j, "adv_router", line);
  e.ls_id = detail::require_ipv4(j, "ls_id", line);
  const long long age = detail::require_int(j, "ls_age", line);
  if (age < 0 || age > kMaxAge)
    throw ParseError("line " + std::to_string(line) + ": ls_age " + std::to_string(age) +
                         " outside 0..3600",
                     line);
  e.ls_age = static_cast<int>(age);
  const long long seq = detail::require_int(j, "ls_seq", line);
  if (seq < INT32_MIN || seq > INT32_MAX)
    throw ParseError("line " + std::to_string(line) + ": ls_seq out of 32-bit range", line);
  e.ls_seq = static_cast<std::int32_t>(seq);
  const auto& ack = detail::require_field(j, "is_ack", line);
  if (!ack.is_boolean())
    throw ParseError("line " + std::to_string(line) + ": field 'is_ack' must be a boolean", line);
  e.is_ack = ack.get<bool>();
  return e;
}

inline std::vector<LsaEvent> read_lsa_log(std::istream& in) {
  std::vector<LsaEvent> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(parse_event_line(text, line));
  }
  return out;
}

inline std::vector<LsaEvent> read_lsa_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open LSA log: " + path);
  return read_lsa_log(in);
}

inline void write_lsa_log(std::ostream& out, const std::vector<LsaEvent>& events) {
  for (const auto& e : events) out << format_event_line(e) << '\n';
}

inline void write_lsa_log(const std::string& path, const std::vector<LsaEvent>& events) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write LSA log: " + path);
  write_lsa_log(out, events);
}

// ---------------------------------------------------------------------------
// Filtering and binning

struct EventFilter {
  std::optional<std::string> monitor;
  std::optional<Ipv4> origin;
  std::set<int> ls_types;  // empty means all types
  bool include_acks = false;

  bool matches(const LsaEvent& e) const {
    if (e.is_ack && !include_acks) return false;
    if (monitor && e.monitor != *monitor) return false;
    if (origin && e.adv_router != *origin) return false;
    if (!ls_types.empty() && !ls_types.contains(e.ls_type)) return false;
    return true;
  }

  std::string describe() const {
    std::ostringstream os;
    os << "monitor=" << (monitor ? *monitor : "*") << " origin=" << (origin ? origin->str() : "*")
       << " ls_type=";
    if (ls_types.empty()) {
      os << '*';
    } else {
      bool first = true;
      for (int t : ls_types) {
        os << (first ? "" : ",") << t;
        first = false;
      }
    }
    if (include_acks) os << " acks";
    return os.str();
  }
};

struct CountSeries {
  std::int64_t start_us = 0;
  int bin_size_s = 10;
  std::vector<std::uint64_t> counts;
  std::string filter;

  std::size_t size() const noexcept { return counts.size(); }
  double bin_start_s(std::size_t k) const {
    return static_cast<double>(start_us) / 1e6 +
           static_cast<double>(k) * static_cast<double>(bin_size_s);
  }
  std::vector<double> as_doubles() const {
    return {counts.begin(), counts.end()};
  }
};

struct BinnedEvents {
  CountSeries series;
  std::size_t dropped = 0;  // matching events outside [t0, t1)
};

/// Half-open bins [t0 + k*bin, t0 + (k+1)*bin). Acks are excluded unless the
/// filter asks for them.
inline BinnedEvents bin_series(const std::vector<LsaEvent>& events, const EventFilter& filter,
                               int bin_size_s, std::int64_t t0_us, std::int64_t t1_us) {
  if (bin_size_s < 1) throw std::invalid_argument("bin size must be >= 1 s");
  if (t0_us >= t1_us) throw std::invalid_argument("time range must satisfy t0 < t1");
  const std::int64_t bin_us = static_cast<std::int64_t>(bin_size_s) * 1'000'000;
  const std::int64_t duration = t1_us - t0_us;
  const auto bins = static_cast<std::size_t>((duration + bin_us - 1) / bin_us);

  BinnedEvents out;
  out.series.start_us = t0_us;
  out.series.bin_size_s = bin_size_s;
  out.series.counts.assign(bins, 0);
  out.series.filter = filter.describe();
  for (const auto& e : events) {
    if (!filter.matches(e)) continue;
    if (e.ts_us < t0_us || e.ts_us >= t1_us) {
      ++out.dropped;
      continue;
    }
    ++out.series.counts[static_cast<std::size_t>((e.ts_us - t0_us) / bin_us)];
  }
  return out;
}

// ---------------------------------------------------------------------------
// CountSeries CSV: bin_index,t_start_s,count

inline std::string format_seconds(double s) {
  std::ostringstream os;
  if (s == std::floor(s) && std::abs(s) < 1e15) {
    os << static_cast<long long>(s);
  } else {
    os << std::setprecision(15) << s;
  }
  return os.str();
}

inline void write_count_csv(std::ostream& out, const CountSeries& s) {
  out << "bin_index,t_start_s,count\n";
  for (std::size_t k = 0; k < s.counts.size(); ++k)
    out << k << ',' << format_seconds(s.bin_start_s(k)) << ',' << s.counts[k] << '\n';
}

inline void write_count_csv(const std::string& path, const CountSeries& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write series CSV: " + path);
  write_count_csv(out, s);
}

inline CountSeries read_count_csv(std::istream& in) {
  CountSeries s;
  std::string text;
  std::size_t line = 0;
  if (!std::getline(in, text)) throw ParseError("series CSV is empty", 0);
  ++line;
  if (!text.empty() && text.back() == '\r') text.pop_back();
  if (text != "bin_index,t_start_s,count")
    throw ParseError("series CSV header must be 'bin_index,t_start_s,count'", 1);
  std::vector<double> starts;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    std::istringstream row(text);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c))
      throw ParseError("line " + std::to_string(line) + ": expected three columns", line);
    try {
      std::size_t used = 0;
      const long long idx = std::stoll(a, &used);
      if (used != a.size() || idx != static_cast<long long>(s.counts.size()))
        throw ParseError("line " + std::to_string(line) + ": bin_index out of sequence", line);
      starts.push_back(std::stod(b));
      const long long count = std::stoll(c, &used);
      if (used != c.size() || count < 0)
        throw ParseError("line " + std::to_string(line) + ": count must be a non-negative integer",
                         line);
      s.counts.push_back(static_cast<std::uint64_t>(count));
    } catch (const std::logic_error&) {
      throw ParseError("line " + std::to_string(line) + ": malformed number", line);
    }
  }
  if (!starts.empty()) s.start_us = static_cast<std::int64_t>(std::llround(starts[0] * 1e6));
  if (starts.size() >= 2) s.bin_size_s = static_cast<int>(std::lround(starts[1] - starts[0]));
  return s;
}

inline CountSeries read_count_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open series CSV: " + path);
  return read_count_csv(in);
}

}  // namespace ospf_rqa
