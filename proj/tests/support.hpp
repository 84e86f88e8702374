#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "temponym/date.hpp"
#include "temponym/document.hpp"

namespace testsupport {

inline std::filesystem::path data_dir() { return TEMPONYM_DATA_DIR; }
inline std::filesystem::path pack_dir(const std::string& name) {
  return data_dir() / "packs" / name;
}

// Calendar oracle written without <chrono>: day numbers counted from
// 1970-01-01 by walking whole years and months.
inline bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

inline int month_length(int y, int m) {
  static const int len[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && leap(y) ? 29 : len[m - 1];
}

inline long day_number(const temponym::CalendarDate& d) {
  long n = 0;
  if (d.year >= 1970) {
    for (int y = 1970; y < d.year; ++y) n += leap(y) ? 366 : 365;
  } else {
    for (int y = d.year; y < 1970; ++y) n -= leap(y) ? 366 : 365;
  }
  for (int m = 1; m < int(d.month); ++m) n += month_length(d.year, m);
  return n + long(d.day) - 1;
}

inline temponym::CalendarDate from_day_number(long n) {
  int y = 1970;
  while (n < 0) {
    --y;
    n += leap(y) ? 366 : 365;
  }
  while (n >= (leap(y) ? 366 : 365)) {
    n -= leap(y) ? 366 : 365;
    ++y;
  }
  int m = 1;
  while (n >= month_length(y, m)) n -= month_length(y, m++);
  return {y, unsigned(m), unsigned(n + 1)};
}

// 1970-01-01 was a Thursday; ISO numbering, Monday = 1.
inline unsigned iso_weekday(long n) { return unsigned(((n % 7) + 7 + 3) % 7) + 1; }

// Sorted, pairwise disjoint, non-empty spans inside [0, length). Spans may
// touch.
inline std::vector<temponym::Span> random_disjoint(std::mt19937_64& rng, std::size_t length) {
  std::vector<temponym::Span> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t begin = pos + rng() % 4;
    const std::size_t end = begin + 1 + rng() % 6;
    if (end > length) break;
    out.push_back({begin, end});
    pos = end;
  }
  return out;
}

}  // namespace testsupport
