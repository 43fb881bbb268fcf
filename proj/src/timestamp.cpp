#include "odsearch/timestamp.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace odsearch {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '"' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool read_fixed(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  std::from_chars(s.data() + pos, s.data() + pos + len, out);
  return true;
}

}  // namespace

std::optional<EpochMs> parse_timestamp(std::string_view text) {
  const auto s = trim(text);
  if (s.empty()) return std::nullopt;

  if (s.find('-', 1) == std::string_view::npos) {
    EpochMs value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return value;
  }

  int year, month, day, hour = 0, minute = 0, second = 0;
  if (!read_fixed(s, 0, 4, year) || s.size() < 10 || s[4] != '-' || !read_fixed(s, 5, 2, month) ||
      s[7] != '-' || !read_fixed(s, 8, 2, day)) {
    return std::nullopt;
  }
  std::size_t pos = 10;
  if (pos < s.size()) {
    if (s[pos] != ' ' && s[pos] != 'T') return std::nullopt;
    if (!read_fixed(s, pos + 1, 2, hour) || s.size() < pos + 9 || s[pos + 3] != ':' ||
        !read_fixed(s, pos + 4, 2, minute) || s[pos + 6] != ':' ||
        !read_fixed(s, pos + 7, 2, second)) {
      return std::nullopt;
    }
    pos += 9;
  }
  EpochMs millis = 0;
  if (pos < s.size()) {
    if (s[pos] != '.') return std::nullopt;
    // Fractional seconds: keep the first three digits, ignore the rest.
    int scale = 100;
    for (std::size_t i = pos + 1; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') return std::nullopt;
      millis += (s[i] - '0') * scale;
      scale /= 10;
    }
    if (pos + 1 == s.size()) return std::nullopt;
  }

  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok() || hour > 23 || minute > 59 || second > 60) return std::nullopt;
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return ((static_cast<EpochMs>(days) * 24 + hour) * 60 + minute) * 60000 +
         static_cast<EpochMs>(second) * 1000 + millis;
}

std::string format_timestamp(EpochMs t) {
  using namespace std::chrono;
  EpochMs day_count = t / 86400000;
  EpochMs rem = t % 86400000;
  if (rem < 0) {
    rem += 86400000;
    --day_count;
  }
  const year_month_day ymd{sys_days{days{day_count}}};
  const auto ms = rem % 1000;
  const auto secs = rem / 1000;
  char buf[40];
  if (ms == 0) {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02lld:%02lld:%02lld", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(secs / 3600), static_cast<long long>(secs / 60 % 60),
                  static_cast<long long>(secs % 60));
  } else {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02lld:%02lld:%02lld.%03lld",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), static_cast<long long>(secs / 3600),
                  static_cast<long long>(secs / 60 % 60), static_cast<long long>(secs % 60),
                  static_cast<long long>(ms));
  }
  return buf;
}

}  // namespace odsearch
