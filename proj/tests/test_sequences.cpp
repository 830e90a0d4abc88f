#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <functional>
#include <random>

#include "holonomy/sequences.hpp"

using namespace holonomy;

TEST_CASE("lambda basics") {
  // 1=4*0+1, 3=4*1-1, 6=2(4*1-1), 8=8(4*0+1)
  CHECK(seq::lambda(1) == +1);
  CHECK(seq::lambda(3) == -1);
  CHECK(seq::lambda(6) == -1);
  CHECK(seq::lambda(8) == +1);
  std::vector<int> first8;
  for (int k = 1; k <= 8; ++k) first8.push_back(seq::lambda(k));
  CHECK(first8 == std::vector<int>{+1, +1, -1, +1, +1, -1, -1, +1});
  CHECK_THROWS(seq::lambda(0));
  CHECK_THROWS(seq::lambda(-4));
}

TEST_CASE("lambda equals the regular paperfolding sequence") {
  // independent oracle: fold recurrence f(2k)=f(k), f(4k+1)=+, f(4k+3)=-
  std::function<int(std::int64_t)> fold = [&](std::int64_t k) -> int {
    if (k % 2 == 0) return fold(k / 2);
    return k % 4 == 1 ? +1 : -1;
  };
  for (std::int64_t k = 1; k <= 4096; ++k) CHECK(seq::lambda(k) == fold(k));
}

TEST_CASE("mu formula") {
  CHECK(seq::mu(1) == +1);   // popcount 1, not > 1
  CHECK(seq::mu(7) == -1);   // popcount 3
  CHECK(seq::mu(3) == +1);   // popcount 2
  CHECK(seq::mu(0) == +1);
  // agreement with Thue parity away from popcount <= 1
  for (std::int64_t k = 0; k <= 4096; ++k) {
    int pc = std::popcount(static_cast<std::uint64_t>(k));
    if (pc <= 1)
      CHECK(seq::mu(k) == +1);
    else
      CHECK(seq::mu(k) == seq::thue(k));
  }
}

TEST_CASE("rounds and marks") {
  // c=2: rounds 2^i(16 + j^2), j < 4
  CHECK(seq::is_round(16, 2));
  CHECK(seq::is_round(17, 2));
  CHECK(seq::is_round(20, 2));
  CHECK(seq::is_round(25, 2));
  CHECK(seq::is_round(32, 2));
  CHECK(seq::is_round(50, 2));
  CHECK_FALSE(seq::is_round(18, 2));
  CHECK_FALSE(seq::is_round(24, 2));
  // k=16 = 4^2 + 0^2
  CHECK(seq::lambda_marked(17, 2) == -1);
  CHECK(seq::lambda(17) == +1);
}

TEST_CASE("unmarked lambda has no -+-+ window up to 1e6") {
  int a = seq::lambda(1), b = seq::lambda(2), c = seq::lambda(3);
  for (std::int64_t k = 4; k <= 1000000; ++k) {
    int d = seq::lambda(k);
    bool pat = a == -1 && b == +1 && c == -1 && d == +1;
    CHECK_FALSE(pat);
    if (pat) break;
    a = b;
    b = c;
    c = d;
  }
}

TEST_CASE("marked stream shows the impossible -+-+ pattern") {
  // round 32: the mark lands at 33 with no adjacent round stacking,
  // so 31..34 reads - + - + (impossible unmarked)
  CHECK(seq::lambda_marked(31, 2) == -1);
  CHECK(seq::lambda_marked(32, 2) == +1);
  CHECK(seq::lambda_marked(33, 2) == -1);
  CHECK(seq::lambda(33) == +1);
  CHECK(seq::lambda_marked(34, 2) == +1);
}

TEST_CASE("window decoding pins absolute positions") {
  const int c = 2;
  const std::int64_t maxk = 1 << 20;
  seq::MarkedDecoder dec(c, maxk);

  // fixed-length windows: decoding anchors on visible marks, so any
  // window holding one must yield the true offset, uniquely with two
  std::mt19937_64 rng(7);
  int checked_unique = 0, checked_any = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::int64_t k0 = 1 + static_cast<std::int64_t>(rng() % 1000000);
    std::size_t len = 256;
    auto marks = dec.visible_marks(k0, len);
    if (marks.empty()) continue;
    std::vector<int> w;
    for (std::size_t t = 0; t < len; ++t) w.push_back(dec.at(k0 + std::int64_t(t)));
    auto hits = dec.decode(w);
    bool found = false;
    for (auto h : hits) found = found || h == k0;
    CHECK(found);
    ++checked_any;
    if (marks.size() >= 2) {
      CHECK(hits.size() == 1);
      ++checked_unique;
    }
  }
  CHECK(checked_any > 0);

  // windows grown to span two visible marks decode uniquely
  for (int trial = 0; trial < 40; ++trial) {
    std::int64_t k0 = 1 + static_cast<std::int64_t>(rng() % 200000);
    std::size_t len = 64;
    while (dec.visible_marks(k0, len).size() < 2 && k0 + std::int64_t(len) < maxk)
      len += 64;
    if (dec.visible_marks(k0, len).size() < 2) continue;
    std::vector<int> w;
    for (std::size_t t = 0; t < len; ++t) w.push_back(dec.at(k0 + std::int64_t(t)));
    auto hits = dec.decode(w);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0] == k0);
  }
}

TEST_CASE("alpha segments: generator windows are members, mutants are not") {
  auto w = seq::alpha_window(10, 11);  // alpha(10..20)
  CHECK(seq::is_alpha_segment(w));
  CHECK(seq::is_alpha_segment({}));
  // flip one mu component: no longer a segment
  auto bad = w;
  bad[4].m = -bad[4].m;
  CHECK_FALSE(seq::is_alpha_segment(bad));
}

TEST_CASE("square violations exist and are short") {
  // exhaustive alpha-derived s for |s| in 3..10
  for (std::size_t len = 3; len <= 10; ++len) {
    for (std::int64_t off = 1; off <= 64; ++off) {
      auto s = seq::alpha_window(off, len);
      auto v = seq::find_square_violation(s);
      REQUIRE(v.found);
      double bound = std::pow(std::log2(double(len)), 2.0) + 24.0;
      CHECK(double(v.length) <= bound);
    }
  }
  // s of length 3 -> some violating window found
  auto s3 = seq::alpha_window(5, 3);
  CHECK(seq::find_square_violation(s3).found);
  // |s| <= 2 is out of the lemma's scope
  CHECK_FALSE(seq::find_square_violation(seq::alpha_window(1, 2)).found);
}

