#include <doctest.h>

#include <cmath>
#include <vector>

#include "latwalk/error.hpp"
#include "latwalk/lattice_walk.hpp"
#include "latwalk/path_codec.hpp"
#include "oracles.hpp"

using namespace latwalk;

namespace {

LatticePath walk(std::initializer_list<Direction> steps) {
  const std::vector<Direction> v(steps);
  return LatticePath::from_steps(2, v);
}

}  // namespace

TEST_CASE("sample_srw with zero steps is the origin") {
  const auto p = sample_srw(0, 2, SeededSource{3, 0});
  CHECK(p.length() == 0);
  CHECK(p.sites().size() == 1);
  CHECK(p.endpoint() == LatticeSite{0, 0});
}

TEST_CASE("sample_srw is reproducible per seed and stream") {
  CHECK(sample_srw(500, 2, SeededSource{42, 7}) == sample_srw(500, 2, SeededSource{42, 7}));
  CHECK_FALSE(sample_srw(500, 2, SeededSource{42, 7}) == sample_srw(500, 2, SeededSource{42, 8}));
  CHECK(sample_srw(200, 3, SeededSource{1, 0}) == sample_srw(200, 3, SeededSource{1, 0}));
}

TEST_CASE("sample_srw rejects bad arguments") {
  CHECK_THROWS_AS(sample_srw(4, 0, SeededSource{}), InvalidArgument);
  CHECK_THROWS_AS(sample_srw(100, 2, SeededSource{}, 50), InvalidArgument);
}

TEST_CASE("sample_srw steps are uniform over directions") {
  Rng rng(SeededSource{9, 0});
  const auto p = sample_srw(40000, 2, rng);
  std::vector<int> counts(4, 0);
  for (auto s : p.steps()) ++counts[s];
  for (int c : counts) CHECK(std::abs(c - 10000) < 4 * std::sqrt(7500.0));
}

TEST_CASE("mean squared endpoint distance of the random walk is n") {
  const std::size_t n = 1024, samples = 100000;
  Rng rng(SeededSource{2024, 0});
  double sum = 0, sum2 = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x2 = std::pow(endpoint_distance(sample_srw(n, 2, rng)), 2);
    sum += x2;
    sum2 += x2 * x2;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sum2 / samples - mean * mean) / samples);
  CHECK(std::abs(mean - 1024.0) < 3 * se);
}

TEST_CASE("silt_count on small paths") {
  CHECK(silt_count(walk({kEast, kEast, kEast})) == 0);
  CHECK(silt_count(walk({kEast, kWest})) == 1);
  CHECK(silt_count(walk({kEast, kNorth, kWest, kSouth})) == 1);
  // Three visits to the origin give three coincident pairs.
  CHECK(silt_count(walk({kEast, kWest, kNorth, kSouth})) == 3);
}

TEST_CASE("silt_count equals the pairwise double sum on random paths") {
  Rng rng(SeededSource{77, 1});
  for (int i = 0; i < 200; ++i) {
    const auto p = sample_srw(256, 2, rng);
    REQUIRE(silt_count(p) == oracle::pairwise_silt(p));
  }
  for (int d : {1, 3, 5}) {
    const auto p = sample_srw(300, d, SeededSource{5, static_cast<std::uint32_t>(d)});
    CHECK(silt_count(p) == oracle::pairwise_silt(p));
  }
}

TEST_CASE("endpoint_distance and hull_radius") {
  CHECK(endpoint_distance(walk({kEast, kEast, kEast, kEast, kEast})) == 5.0);
  CHECK(endpoint_distance(walk({kEast, kNorth})) == doctest::Approx(std::sqrt(2.0)));
  CHECK(endpoint_distance(walk({kEast, kWest})) == 0.0);
  CHECK(hull_radius(walk({kEast, kEast, kEast, kEast, kEast})) == 5.0);
  CHECK(hull_radius(walk({kEast, kWest})) == 1.0);
}

TEST_CASE("hull radius dominates endpoint distance") {
  Rng rng(SeededSource{8, 0});
  for (int i = 0; i < 500; ++i) {
    const auto p = sample_srw(1 + i % 97, 2, rng);
    REQUIRE(hull_radius(p) >= endpoint_distance(p));
  }
}

TEST_CASE("from_sites validates nearest-neighbour steps") {
  CHECK_THROWS_AS(LatticePath::from_sites(SiteTrace(2, {0, 0, 2, 0})), InvalidArgument);
  CHECK_THROWS_AS(LatticePath::from_sites(SiteTrace(2, {1, 0, 2, 0})), InvalidArgument);
  const auto p = LatticePath::from_sites(SiteTrace(2, {0, 0, 0, 1, -1, 1}));
  CHECK(p.steps() == std::vector<Direction>{kNorth, kWest});
}

TEST_CASE("insert_repetitions") {
  const auto base = walk({kEast, kEast, kEast});
  SUBCASE("single repetition with truncation") {
    const std::vector<std::size_t> at{1};
    const auto p = insert_repetitions(base, at);
    const auto s = p.sites();
    CHECK(s.site(0) == LatticeSite{0, 0});
    CHECK(s.site(1) == LatticeSite{1, 0});
    CHECK(s.site(2) == LatticeSite{0, 0});
    CHECK(s.site(3) == LatticeSite{1, 0});
    CHECK(silt_count(p) == 2);
  }
  SUBCASE("empty list is the identity") {
    CHECK(insert_repetitions(base, std::vector<std::size_t>{}) == base);
  }
  SUBCASE("bad positions") {
    CHECK_THROWS_AS(insert_repetitions(base, std::vector<std::size_t>{0}), InvalidArgument);
    CHECK_THROWS_AS(insert_repetitions(base, std::vector<std::size_t>{3}), InvalidArgument);
    const auto long_base = LatticePath::from_steps(2, std::vector<Direction>(10, kEast));
    CHECK_THROWS_AS(insert_repetitions(long_base, std::vector<std::size_t>{2, 3}), InvalidArgument);
    CHECK_THROWS_AS(insert_repetitions(long_base, std::vector<std::size_t>{4, 2}), InvalidArgument);
  }
}

TEST_CASE("each surviving repetition on a self-avoiding path adds exactly 2") {
  // A spiral-free staircase is self-avoiding.
  std::vector<Direction> stairs;
  for (int i = 0; i < 20; ++i) {
    stairs.push_back(kEast);
    stairs.push_back(kNorth);
  }
  const auto base = LatticePath::from_steps(2, stairs);
  REQUIRE(silt_count(base) == 0);
  const std::vector<std::size_t> at{3, 7, 12, 18, 25};
  const auto p = insert_repetitions(base, at);
  CHECK(silt_count(p) == 10);
  CHECK(silt_count(p) == oracle::pairwise_silt(p));

  Rng rng(SeededSource{31, 0});
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> pos;
    std::size_t j = 1 + rng.below(3);
    while (j + 2 * (pos.size() + 1) < 30) {
      pos.push_back(j);
      j += 2 + rng.below(4);
    }
    CHECK(silt_count(insert_repetitions(base, pos)) == 2 * pos.size());
  }
}

TEST_CASE("packed path records round-trip") {
  Rng rng(SeededSource{4, 4});
  for (int d : {1, 2, 3}) {
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 63u, 200u}) {
      const auto p = sample_srw(n, d, rng);
      const auto rec = encode_path_record(p);
      CHECK(decode_path_record(rec) == p);
    }
  }
  CHECK_THROWS_AS(decode_path_record("2 5 @@@@"), FormatError);
  CHECK_THROWS_AS(decode_path_record("2 9 AA=="), FormatError);
}

TEST_CASE("base64 matches the standard alphabet") {
  const std::vector<std::uint8_t> bytes{'f', 'o', 'o', 'b', 'a', 'r'};
  CHECK(base64_encode(bytes) == "Zm9vYmFy");
  CHECK(base64_encode(std::span(bytes).first(4)) == "Zm9vYg==");
  CHECK(base64_decode("Zm9vYg==") == std::vector<std::uint8_t>{'f', 'o', 'o', 'b'});
}
