#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "surrocae/rng.hpp"

using surrocae::Rng;

TEST_SUITE("nn") {

TEST_CASE("rng streams are reproducible and keyed by seed") {
  Rng a(42), b(42), c(43);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 64; ++i) {
    const auto va = a.next_u64();
    all_equal &= (va == b.next_u64());
    any_diff |= (va != c.next_u64());
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("rng substreams are independent of parent state") {
  Rng root(7);
  Rng s1 = root.substream(1);
  root.next_u64();
  root.next_u64();
  Rng s1_again = Rng(7).substream(1);
  for (int i = 0; i < 16; ++i) CHECK(s1.next_u64() == s1_again.next_u64());

  Rng s2 = Rng(7).substream(2);
  bool differs = false;
  Rng s1b = Rng(7).substream(1);
  for (int i = 0; i < 16; ++i) differs |= (s1b.next_u64() != s2.next_u64());
  CHECK(differs);
}

TEST_CASE("rng below is in range and shuffle permutes") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) CHECK(rng.below(7) < 7);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  auto sorted = v;
  rng.shuffle(v);
  CHECK(v != sorted);
  std::sort(v.begin(), v.end());
  CHECK(v == sorted);
}

TEST_CASE("rng uniform and normal have the right first moments") {
  Rng rng(99);
  const int n = 100000;
  double su = 0, su2 = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    su += u;
    su2 += u * u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(su2 / n - 0.25 == doctest::Approx(1.0 / 12).epsilon(0.03));
  CHECK(sn / n == doctest::Approx(0.0).epsilon(1).scale(0.02));
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.03));
}

}  // TEST_SUITE
