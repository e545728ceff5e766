#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "coskit/format.hpp"
#include "coskit/quantile.hpp"
#include "coskit/rng.hpp"
#include "doctest.h"

using coskit::format_double;
using coskit::mix_seed;
using coskit::quantile_sorted;
using coskit::quantiles;

static_assert(mix_seed(1, 2) == mix_seed(1, 2));
static_assert(mix_seed(1, 2) != mix_seed(2, 1));

TEST_CASE("mix_seed separates salts and seeds") {
  // Streams derived from one master seed must not collide across the salt
  // registry, and nearby master seeds must not collide either.
  std::set<std::uint64_t> seen;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    for (std::uint64_t salt = 0; salt < 64; ++salt) {
      CHECK(seen.insert(mix_seed(seed, salt)).second);
    }
  }
  CHECK(mix_seed(0, 0) != 0);  // finalizer moves the all-zero input
}

TEST_CASE("engine_for reproduces the same stream") {
  auto a = coskit::engine_for(123456789, 7);
  auto b = coskit::engine_for(123456789, 7);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
  auto c = coskit::engine_for(123456789, 8);
  CHECK(a() != c());  // different salt, different stream (overwhelmingly)
}

TEST_CASE("quantile matches the hand-computed interpolation oracle") {
  // For x = (1,2,3,4): h = p*(n-1), q = (1-g)*x[k] + g*x[k+1].
  // p=0.25: h=0.75 -> 0.25*1 + 0.75*2 = 1.75
  // p=0.50: h=1.5  -> 0.5*2 + 0.5*3   = 2.5
  // p=0.75: h=2.25 -> 0.75*3 + 0.25*4 = 3.25
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  CHECK(quantile_sorted(x, 0.25) == 1.75);
  CHECK(quantile_sorted(x, 0.50) == 2.5);
  CHECK(quantile_sorted(x, 0.75) == 3.25);
}

TEST_CASE("quantile endpoints and degenerate inputs") {
  const std::vector<double> x{-3.0, 1.0, 8.0};
  CHECK(quantile_sorted(x, 0.0) == -3.0);
  CHECK(quantile_sorted(x, 1.0) == 8.0);
  const std::vector<double> one{4.5};
  for (double p : {0.0, 0.25, 0.5, 0.99, 1.0}) {
    CHECK(quantile_sorted(one, p) == 4.5);
  }
}

TEST_CASE("quantile is monotone in p and bracketed by order statistics") {
  std::mt19937_64 rng(20240815);
  std::normal_distribution<double> normal;
  std::vector<double> x(37);
  for (auto& v : x) v = normal(rng);
  std::sort(x.begin(), x.end());
  double prev = x.front();
  for (int k = 0; k <= 100; ++k) {
    const double q = quantile_sorted(x, k / 100.0);
    CHECK(q >= prev);
    CHECK(q >= x.front());
    CHECK(q <= x.back());
    prev = q;
  }
}

TEST_CASE("quantiles() sorts its own copy") {
  const std::vector<double> x{4.0, 1.0, 3.0, 2.0};
  const std::vector<double> levels{0.25, 0.5, 0.75};
  const auto q = quantiles(x, levels);
  REQUIRE(q.size() == 3);
  CHECK(q[0] == 1.75);
  CHECK(q[1] == 2.5);
  CHECK(q[2] == 3.25);
}

TEST_CASE("format_double round-trips bit-exactly") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal;
  for (int i = 0; i < 1000; ++i) {
    const double v = normal(rng) * std::pow(10.0, static_cast<int>(rng() % 7) - 3);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-1.5) == "-1.5");
}
