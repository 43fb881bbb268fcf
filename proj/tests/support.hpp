#pragma once

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include <unistd.h>

#include "odsearch/dataset.hpp"
#include "odsearch/error.hpp"
#include "odsearch/rng.hpp"

// Asserts that `expr` throws odsearch::Error carrying `expected`.
#define CHECK_THROWS_CODE(expr, expected)                                         \
  do {                                                                            \
    bool thrown_ = false;                                                         \
    try {                                                                         \
      (void)(expr);                                                               \
    } catch (const odsearch::Error& e_) {                                         \
      thrown_ = true;                                                             \
      CHECK_MESSAGE(e_.code() == (expected), "got " << e_.what());                \
    }                                                                             \
    CHECK_MESSAGE(thrown_, "no odsearch::Error from " #expr);                     \
  } while (false)

namespace testsupport {

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("odsearch-test-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  f << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline constexpr odsearch::EpochMs kStart = 1'420'070'400'000;  // 2015-01-01 00:00:00 UTC
inline constexpr odsearch::EpochMs kStep = 300'000;              // five minutes

/// Sinusoid (period 50) plus N(0, 0.2) noise with `n_anomalies` injected
/// events spread evenly over the series: even events are single-point
/// spikes of +-(4..6), odd ones 5-point level shifts of +3. Each event is
/// labelled by a window starting 2 points before it and ending 2 after.
inline odsearch::TimeSeriesDataset synthetic_series(std::uint64_t seed, std::size_t n = 2000,
                                                    std::size_t n_anomalies = 20) {
  odsearch::Rng rng(seed);
  std::vector<odsearch::EpochMs> ts(n);
  std::vector<double> v(n);
  const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < n; ++i) {
    ts[i] = kStart + static_cast<odsearch::EpochMs>(i) * kStep;
    v[i] = std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / 50.0 + phase) + 0.2 * rng.normal();
  }
  std::vector<odsearch::AnomalyWindow> windows;
  const double spacing = static_cast<double>(n - 40) / static_cast<double>(n_anomalies);
  for (std::size_t a = 0; a < n_anomalies; ++a) {
    const auto base = static_cast<std::size_t>(20.0 + spacing * static_cast<double>(a));
    const std::size_t at = base + rng.index(static_cast<std::uint64_t>(spacing / 2.0));
    std::size_t len = 1;
    if (a % 2 == 0) {
      v[at] += (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(4.0, 6.0);
    } else {
      len = 5;
      for (std::size_t j = at; j < at + len; ++j) v[j] += 3.0;
    }
    windows.push_back({ts[at - 2], ts[at + len + 1]});
  }
  return odsearch::build_dataset("synthetic-" + std::to_string(seed), std::move(ts), std::move(v),
                                 std::move(windows));
}

}  // namespace testsupport
