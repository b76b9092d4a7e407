#include <doctest.h>

#include <cmath>
#include <set>

#include "satsel/rng.hpp"

using satsel::Rng;

TEST_CASE("rng is reproducible from its seed") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  bool any_diff = false;
  Rng a2(42);
  for (int i = 0; i < 100; ++i) any_diff |= (a2.next() != c.next());
  CHECK(any_diff);
}

TEST_CASE("split streams are independent of parent consumption") {
  Rng parent(7);
  const Rng child_before = parent.split(3);
  for (int i = 0; i < 10; ++i) parent.next();
  Rng child_after = parent.split(3);
  Rng child_copy = child_before;
  for (int i = 0; i < 50; ++i) CHECK(child_copy.next() == child_after.next());

  // distinct stream ids give distinct streams
  Rng s0 = parent.split(0), s1 = parent.split(1);
  bool any_diff = false;
  for (int i = 0; i < 50; ++i) any_diff |= (s0.next() != s1.next());
  CHECK(any_diff);
}

TEST_CASE("uniform stays in [0,1) and below() respects its bound") {
  Rng rng(1);
  double mean = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    mean += u;
  }
  mean /= 20000;
  CHECK(std::abs(mean - 0.5) < 0.01);

  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto v = rng.below(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("normal deviates have roughly standard moments") {
  Rng rng(5);
  double mean = 0.0, var = 0.0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    mean += x;
    var += x * x;
  }
  mean /= n;
  var = var / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.03);
}
