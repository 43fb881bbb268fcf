#include "support.hpp"

#include <numeric>

#include "odsearch/evaluation.hpp"

using namespace odsearch;

namespace {

using Bits = std::vector<std::uint8_t>;

TimeSeriesDataset hundred_points() {
  std::vector<EpochMs> ts(100);
  std::iota(ts.begin(), ts.end(), EpochMs{0});
  return build_dataset("nab", ts, std::vector<double>(100, 0.0), {{30, 69}});
}

}  // namespace

TEST_CASE("confusion counts") {
  const Bits three{1, 0, 1, 0, 0, 1, 0, 0, 0, 0};
  const auto c = confusion(three, three);
  CHECK(c.tp == 3);
  CHECK(c.fp == 0);
  CHECK(c.fn == 0);
  CHECK(c.tn == 7);
  CHECK(confusion(Bits(4, 1), Bits(4, 0)).fp == 4);
  const auto mixed = confusion(Bits{1, 0, 1, 0}, Bits{1, 1, 0, 0});
  CHECK(mixed.tp == 1);
  CHECK(mixed.fp == 1);
  CHECK(mixed.fn == 1);
  CHECK(mixed.tn == 1);
  CHECK_THROWS_CODE(confusion(Bits{1}, Bits{1, 0}), ErrorCode::kLengthMismatch);
}

TEST_CASE("f1 score") {
  CHECK(f1_score({3, 0, 0, 7}) == 1.0);
  CHECK(f1_score({0, 5, 5, 0}) == 0.0);
  CHECK(f1_score({0, 0, 0, 10}) == 0.0);
  CHECK(f1_score({2, 1, 1, 0}) == doctest::Approx(2.0 / 3.0));
  for (std::size_t tp = 0; tp < 6; ++tp) {
    for (std::size_t fp = 0; fp < 6; ++fp) {
      for (std::size_t fn = 0; fn < 6; ++fn) {
        const double f = f1_score({tp, fp, fn, 0});
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        CHECK(f == f1_score({tp, fn, fp, 0}));
        CHECK(f1_score({tp + 1, fp, fn, 0}) >= f);
      }
    }
  }
}

TEST_CASE("scaled sigmoid") {
  CHECK(scaled_sigmoid(0.0) == 0.0);
  CHECK(scaled_sigmoid(-1.0) == doctest::Approx(0.986614).epsilon(1e-6));
  for (double y = -3.0; y <= 3.0; y += 0.01) {
    CHECK(scaled_sigmoid(-y) == -scaled_sigmoid(y));
    CHECK(std::abs(scaled_sigmoid(y)) < 1.0);
    CHECK(scaled_sigmoid(y + 0.01) < scaled_sigmoid(y));
    CHECK(scaled_sigmoid(y) == doctest::Approx(2.0 / (1.0 + std::exp(5.0 * y)) - 1.0));
  }
}

TEST_CASE("NAB profiles") {
  const auto& p = nab_profiles();
  CHECK(p[0].name == "standard");
  CHECK(p[1].a_fp == 0.22);
  CHECK(p[2].a_fn == 2.0);
  CHECK(find_nab_profile("reward_low_fn")->a_fn == 2.0);
  CHECK_FALSE(find_nab_profile("nope").has_value());
}

TEST_CASE("NAB raw score by hand") {
  std::vector<EpochMs> ts(10);
  std::iota(ts.begin(), ts.end(), EpochMs{1});
  const auto ds = build_dataset("d", ts, std::vector<double>(10, 0.0), {{3, 6}});  // indices 2..5
  const auto& standard = nab_profiles()[0];
  Bits det(10, 0);
  det[3] = 1;  // second point of the window
  det[4] = 1;  // later in-window detection: ignored
  det[8] = 1;  // three points after the window's last index, window length 4
  const double tp = std::tanh(2.5 * (2.0 / 3.0));
  const double fp = -0.11 * std::tanh(2.5 * 0.75);
  CHECK(nab_raw_score(ds, det, standard) == doctest::Approx(tp + fp).epsilon(1e-12));
  const double perfect = std::tanh(2.5);
  CHECK(nab_score(ds, det, standard) == doctest::Approx(100.0 * (tp + fp + 1.0) / (perfect + 1.0)).epsilon(1e-12));

  Bits early(10, 0);
  early[0] = 1;  // before any window
  CHECK(nab_raw_score(ds, early, standard) == doctest::Approx(-0.11 - 1.0));
  CHECK(nab_raw_score(ds, Bits(10, 0), nab_profiles()[2]) == -2.0);
  CHECK_THROWS_CODE(nab_score(ds, Bits(9, 0), standard), ErrorCode::kLengthMismatch);
  CHECK_THROWS_CODE(nab_score(build_dataset("d", ts, std::vector<double>(10, 0.0), {}), det, standard),
                    ErrorCode::kNoWindows);
}

TEST_CASE("NAB perfect and null calibration") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto ds = testsupport::synthetic_series(seed, 500, 6);
    for (const auto& p : nab_profiles()) {
      CHECK(std::abs(nab_score(ds, perfect_detections(ds), p) - 100.0) <= 1e-9);
      CHECK(std::abs(nab_score(ds, Bits(ds.size(), 0), p)) <= 1e-9);
    }
  }
}

TEST_CASE("NAB properties on a 100-point fixture") {
  const auto ds = hundred_points();
  const auto& standard = nab_profiles()[0];
  CHECK(nab_score(ds, Bits(100, 1), standard) < 100.0);

  // adding a detection inside an undetected window never lowers the score
  Rng rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    Bits det(100, 0);
    for (int k = 0; k < 5; ++k) {
      std::size_t i = rng.index(100);
      if (i >= 30 && i <= 69) i = 10;
      det[i] = 1;
    }
    for (const auto& p : nab_profiles()) {
      const double before = nab_score(ds, det, p);
      Bits more = det;
      more[30 + rng.index(40)] = 1;
      CHECK(nab_score(ds, more, p) >= before);
    }
  }

  // shifting one detection by one index without crossing a window edge moves
  // the score by less than 5 points
  for (std::size_t i = 0; i + 1 < 100; ++i) {
    if (i == 29 || i == 69) continue;
    Bits a(100, 0), b(100, 0);
    a[i] = 1;
    b[i + 1] = 1;
    CHECK(std::abs(nab_score(ds, a, standard) - nab_score(ds, b, standard)) < 5.0);
  }
}
