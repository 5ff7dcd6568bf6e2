#include <doctest.h>

#include <algorithm>
#include <set>

#include "brute.hpp"
#include "fence/generators.hpp"
#include "fence/oracle.hpp"
#include "fence/partial_injection.hpp"

using namespace fence;

namespace {

PartialInjection from(const brute::Map& m) {
  return PartialInjection::from_images(FenceSize(static_cast<int>(m.size())), std::span<const int>(m));
}

brute::Map to_brute(const PartialInjection& f) {
  brute::Map m(static_cast<std::size_t>(f.n()));
  for (int k = 1; k <= f.n(); ++k) m[k - 1] = f(k);
  return m;
}

std::vector<PartialInjection> all_aut(int n) {
  std::vector<PartialInjection> out;
  for (auto c : brute::all_automorphisms(n)) out.push_back(from(brute::uncode(n, c)));
  return out;
}

}  // namespace

TEST_CASE("fence size accepts odd n up to 15") {
  CHECK(FenceSize(1).value() == 1);
  CHECK(FenceSize(15).value() == 15);
  CHECK_THROWS_AS(FenceSize(2), ArgumentError);
  CHECK_THROWS_WITH(FenceSize(4), doctest::Contains("n must be odd"));
  CHECK_THROWS_AS(FenceSize(17), ArgumentError);
  CHECK_THROWS_AS(FenceSize(-1), ArgumentError);
}

TEST_CASE("fence order") {
  const FenceSize n(5);
  CHECK(fence_less(n, 1, 2));
  CHECK_FALSE(fence_less(n, 2, 3));
  CHECK(fence_less(n, 3, 2));
  CHECK_FALSE(fence_less(n, 1, 3));
  CHECK(comparable(FenceSize(7), 4, 5));
  CHECK(comparable(FenceSize(7), 4, 4));
  CHECK_FALSE(comparable(FenceSize(7), 2, 6));
  CHECK_THROWS_AS(fence_less(n, 0, 1), ArgumentError);
  CHECK_THROWS_AS(comparable(n, 1, 6), ArgumentError);

  SUBCASE("agrees with the reference relation") {
    for (int m : {1, 3, 5, 7, 9, 15})
      for (int x = 1; x <= m; ++x)
        for (int y = 1; y <= m; ++y) {
          CHECK(fence_less(FenceSize(m), x, y) == brute::below(x, y));
          CHECK(comparable(FenceSize(m), x, y) == (brute::leq(x, y) || brute::leq(y, x)));
        }
  }
}

TEST_CASE("point sets") {
  PointSet s;
  CHECK(s.empty());
  CHECK(s.is_convex());
  s.insert(3);
  s.insert(4);
  CHECK(s.is_convex());
  s.insert(6);
  CHECK_FALSE(s.is_convex());
  CHECK(s.size() == 3);
  CHECK(s.points() == std::vector<int>{3, 4, 6});
  CHECK(PointSet::interval(2, 4).points() == std::vector<int>{2, 3, 4});
  CHECK(PointSet::all(FenceSize(5)).size() == 5);
}

TEST_CASE("composition runs left to right") {
  const FenceSize n(5);
  const auto f = PartialInjection::from_images(n, {2, 0, 0, 0, 0});
  const auto g = PartialInjection::from_images(n, {0, 3, 0, 0, 0});
  // 1 f = 2, 2 g = 3
  CHECK(compose(f, g) == PartialInjection::from_images(n, {3, 0, 0, 0, 0}));
  CHECK(compose(g, f).rank() == 0);
  CHECK(compose(gamma(n), gamma(n)) == identity(n));
  CHECK(compose(f, identity(n)) == f);
  CHECK(compose(beta_even(n, 2), beta_odd(n, 2)) == restrict_identity(n, PointSet{2, 4, 5}));
  CHECK_THROWS_AS(compose(f, identity(FenceSize(3))), ArgumentError);
}

TEST_CASE("inverse") {
  const FenceSize n(5);
  const auto u = restrict_identity(n, PointSet{1, 4});
  CHECK(inverse(u) == u);
  CHECK(inverse(gamma(n)) == gamma(n));
  CHECK(inverse(PartialInjection::from_images(n, {2, 0, 0, 0, 0})) == PartialInjection::from_images(n, {0, 1, 0, 0, 0}));
}

TEST_CASE("partial automorphism predicate") {
  CHECK(is_partial_automorphism(gamma(FenceSize(7))));
  const auto bad = PartialInjection::from_images(FenceSize(3), {1, 3, 0});
  CHECK_FALSE(is_partial_automorphism(bad));
  REQUIRE(find_order_violation(bad).has_value());
  CHECK(*find_order_violation(bad) == std::pair{1, 2});
  CHECK_FALSE(find_order_violation(gamma(FenceSize(5))).has_value());

  SUBCASE("every single-point map qualifies") {
    const FenceSize n(7);
    for (int x = 1; x <= n; ++x)
      for (int y = 1; y <= n; ++y) CHECK(is_partial_automorphism(PartialInjectionBuilder(n).map(x, y).build()));
  }

  SUBCASE("agrees with the reference predicate on every partial injection, n <= 5") {
    for (int n : {1, 3, 5}) {
      brute::each_injection(n, [&](const brute::Map& m) { CHECK(is_partial_automorphism(from(m)) == brute::is_aut(m)); });
    }
  }
}

TEST_CASE("partial identities") {
  const FenceSize n(5);
  CHECK(restrict_identity(n, PointSet::all(n)) == identity(n));
  CHECK(restrict_identity(n, PointSet{}).rank() == 0);
  const auto u = restrict_identity(n, PointSet{2, 4, 5});
  CHECK(u.domain() == PointSet{2, 4, 5});
  CHECK(u.image() == u.domain());
}

TEST_CASE("canonical codes") {
  CHECK(encode(restrict_identity(FenceSize(5), PointSet{})) == 0);
  CHECK(encode(identity(FenceSize(3))) == 57);
  CHECK(decode(FenceSize(3), 57) == identity(FenceSize(3)));
  CHECK_THROWS_AS(decode(FenceSize(3), 1 + 1 * 4), FormatError);  // 1 and 2 both map to 1
  CHECK_THROWS_AS(decode(FenceSize(3), 64), FormatError);

  SUBCASE("matches the reference positional formula") {
    auto g = brute::rng(1);
    for (int n : {3, 5, 7, 9, 15}) {
      for (int t = 0; t < 200; ++t) {
        brute::Map m(static_cast<std::size_t>(n), 0);
        std::vector<int> pts(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) pts[k] = k + 1;
        std::shuffle(pts.begin(), pts.end(), g);
        for (int k = 0; k < n; ++k)
          if (g() % 3 != 0) m[k] = pts[k];
        const auto f = PartialInjection::from_images(FenceSize(n), std::span<const int>(m));
        CHECK(encode(f) == brute::code(m));
        CHECK(decode(FenceSize(n), encode(f)) == f);
      }
    }
  }

  SUBCASE("injective over every partial injection at n <= 5") {
    for (int n : {1, 3, 5}) {
      std::set<Code> seen;
      std::size_t count = 0;
      brute::each_injection(n, [&](const brute::Map& m) {
        ++count;
        seen.insert(encode(from(m)));
      });
      CHECK(seen.size() == count);
    }
  }

  SUBCASE("injective on samples of FI_7 and FI_9") {
    for (int n : {7, 9}) {
      const auto u = enumerate_FI(FenceSize(n), 1);
      auto g = brute::rng(static_cast<std::uint32_t>(n));
      std::set<Code> codes;
      std::set<brute::Map> maps;
      for (int t = 0; t < 3000; ++t) {
        const auto f = decode(FenceSize(n), brute::pick(u.codes(), g));
        codes.insert(encode(f));
        maps.insert(to_brute(f));
      }
      CHECK(codes.size() == maps.size());
    }
  }
}

TEST_CASE("map text") {
  const FenceSize n(5);
  const auto f = parse_map(n, "2,_,_,4,5");
  CHECK(f == beta_odd(n, 2));
  CHECK(format_map(f) == "2,_,_,4,5");
  CHECK(parse_map(n, " 1, 2 ,3,4,5 ") == identity(n));
  CHECK_THROWS_AS(parse_map(n, "1,2,3"), FormatError);
  CHECK_THROWS_AS(parse_map(n, "1,1,_,_,_"), FormatError);
  CHECK_THROWS_AS(parse_map(n, "6,_,_,_,_"), FormatError);
  CHECK_THROWS_AS(parse_map(n, "x,_,_,_,_"), FormatError);
  CHECK_THROWS_AS(parse_map(n, ""), FormatError);

  auto g = brute::rng(2);
  const auto all = all_aut(5);
  for (int t = 0; t < 100; ++t) {
    const auto& h = brute::pick(all, g);
    CHECK(parse_map(n, format_map(h)) == h);
  }
}

TEST_CASE("builder rejects bad points") {
  const FenceSize n(5);
  PartialInjectionBuilder b(n);
  CHECK_THROWS_AS(b.map(0, 1), ArgumentError);
  CHECK_THROWS_AS(b.map(1, 6), ArgumentError);
  b.map(1, 2);
  CHECK_THROWS_AS(b.map(3, 2), ArgumentError);
  CHECK_THROWS_AS(b.map(1, 3), ArgumentError);
}

TEST_CASE("algebraic properties over FI_5") {
  const auto all = all_aut(5);
  REQUIRE(all.size() == 182);
  auto g = brute::rng(3);

  SUBCASE("associativity on random triples") {
    for (int t = 0; t < 20000; ++t) {
      const auto& a = brute::pick(all, g);
      const auto& b = brute::pick(all, g);
      const auto& c = brute::pick(all, g);
      REQUIRE(compose(compose(a, b), c) == compose(a, compose(b, c)));
    }
  }

  SUBCASE("rank bound, closure under product and inverse, all pairs") {
    for (const auto& a : all) {
      REQUIRE(is_partial_automorphism(inverse(a)));
      REQUIRE(compose(compose(a, inverse(a)), a) == a);
      for (const auto& b : all) {
        const auto ab = compose(a, b);
        REQUIRE(ab.rank() <= std::min(a.rank(), b.rank()));
        REQUIRE(is_partial_automorphism(ab));
        REQUIRE(to_brute(ab) == brute::compose(to_brute(a), to_brute(b)));
      }
    }
  }
}

TEST_CASE("convex subsets of the domain have convex images") {
  for (int n : {5, 7}) {
    for (const auto& f : all_aut(n)) {
      const PointSet dom = f.domain();
      for (int lo = 1; lo <= n; ++lo) {
        for (int hi = lo; hi <= n; ++hi) {
          const PointSet u = PointSet::interval(lo, hi);
          if (!u.subset_of(dom)) continue;
          PointSet img;
          for (int x : u.points()) img.insert(f(x));
          REQUIRE(img.is_convex());
        }
      }
    }
  }
}
