#include "gensub/poset.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <set>
#include <sstream>

#include "test_util.hpp"

using gensub::BoundedPoset;
using gensub::Poset;
using testutil::antichain;
using testutil::chain;

TEST_CASE("leq follows the order generated by covers") {
  Poset chain3 = chain(3);
  CHECK(chain3.leq(0, 2));  // bottom <= top through the middle
  CHECK(chain3.leq(0, 1));
  CHECK_FALSE(chain3.leq(2, 0));
  SECTION("reflexive on every element") {
    for (std::size_t e = 0; e < chain3.size(); ++e) CHECK(chain3.leq(e, e));
  }
  SECTION("incomparable pair in an antichain") {
    Poset ab = antichain(2);
    CHECK_FALSE(ab.leq(0, 1));
    CHECK_FALSE(ab.leq(1, 0));
  }
  SECTION("unknown element id") {
    CHECK_THROWS_AS(chain3.leq(0, 99), gensub::element_not_found);
  }
}

TEST_CASE("covers are a transitive reduction regardless of input edges") {
  // Redundant edge 0 -> 2 must be dropped.
  Poset p = Poset::from_covers(testutil::numbered_labels(3), {{0, 1}, {1, 2}, {0, 2}});
  REQUIRE(p.covers().size() == 2);
  std::set<std::pair<std::size_t, std::size_t>> covers(p.covers().begin(), p.covers().end());
  CHECK(covers == std::set<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}});
  CHECK(p.leq(0, 2));
}

TEST_CASE("cyclic covers are rejected") {
  CHECK_THROWS_AS(Poset::from_covers(testutil::numbered_labels(2), {{0, 1}, {1, 0}}),
                  gensub::poset_error);
}

TEST_CASE("check_poset_laws") {
  SECTION("a valid chain has no violations") {
    CHECK(gensub::check_poset_laws(chain(3)).ok());
  }
  SECTION("a 2-cycle in the derived order is an antisymmetry violation") {
    auto labels = testutil::numbered_labels(2);
    Poset bad = Poset::from_relation_unchecked(labels, [](std::size_t, std::size_t) {
      return true;  // e0 <= e1 and e1 <= e0
    });
    auto report = gensub::check_poset_laws(bad);
    REQUIRE_FALSE(report.ok());
    bool found = false;
    for (const auto& v : report.violations)
      if (v.kind == gensub::LawViolation::Kind::Antisymmetry) found = true;
    CHECK(found);
  }
  SECTION("a missing composite is a transitivity violation") {
    auto labels = testutil::numbered_labels(3);
    Poset bad = Poset::from_relation_unchecked(labels, [](std::size_t a, std::size_t b) {
      if (a == b) return true;
      return (a == 0 && b == 1) || (a == 1 && b == 2);  // 0<=1<=2 but not 0<=2
    });
    auto report = gensub::check_poset_laws(bad);
    REQUIRE_FALSE(report.ok());
    CHECK(report.violations.front().kind == gensub::LawViolation::Kind::Transitivity);
  }
  SECTION("from_relation refuses a non-poset") {
    CHECK_THROWS_AS(Poset::from_relation(testutil::numbered_labels(2),
                                         [](std::size_t, std::size_t) { return true; }),
                    gensub::poset_error);
  }
  SECTION("sampled variant agrees on a valid poset") {
    CHECK(chain(6).check_laws_sampled(1000, 42).ok());
  }
}

TEST_CASE("comparable_pairs") {
  CHECK(gensub::comparable_pairs(chain(4)).size() == 10);  // n(n+1)/2 on a chain
  CHECK(gensub::comparable_pairs(antichain(3)).size() == 3);
  CHECK(gensub::comparable_pairs(chain(1)).size() == 1);

  SECTION("every returned pair satisfies leq, reflexives included") {
    Poset p = chain(4);
    auto pairs = gensub::comparable_pairs(p);
    std::set<std::pair<std::size_t, std::size_t>> seen(pairs.begin(), pairs.end());
    for (std::size_t e = 0; e < p.size(); ++e) CHECK(seen.count({e, e}) == 1);
    for (auto [a, b] : pairs) CHECK(p.leq(a, b));
  }

  SECTION("matches independent reachability on random posets up to 20 elements") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
      std::uniform_int_distribution<std::size_t> size_dist(1, 20);
      std::size_t n = size_dist(rng);
      auto edges = testutil::random_dag_edges(n, 0.2, rng);
      Poset p = Poset::from_covers(testutil::numbered_labels(n), edges);
      auto reach = testutil::reachability(n, edges);
      std::size_t expected = 0;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (reach[a][b]) ++expected;
      CHECK(gensub::comparable_pairs(p).size() == expected);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          CHECK(p.leq(a, b) == reach[a][b]);
    }
  }
}

TEST_CASE("order_isomorphic") {
  CHECK(order_isomorphic(chain(3), chain(3)));
  CHECK_FALSE(order_isomorphic(chain(3), antichain(3)));
  CHECK_FALSE(order_isomorphic(chain(3), chain(4)));

  SECTION("invariant under relabeling and element permutation") {
    Poset p = Poset::from_covers({"a", "b", "c", "d"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    Poset q = Poset::from_covers({"w", "x", "y", "z"}, {{3, 2}, {3, 1}, {2, 0}, {1, 0}});
    CHECK(order_isomorphic(p, q));
  }

  SECTION("same size and degree multiset but different order") {
    // Diamond vs. 2-chain x 2-antichain shaped poset.
    Poset diamond = Poset::from_covers(testutil::numbered_labels(4), {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    Poset zigzag = Poset::from_covers(testutil::numbered_labels(4), {{0, 1}, {2, 3}});
    CHECK_FALSE(order_isomorphic(diamond, zigzag));
  }

  SECTION("reflexive and symmetric on random posets") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
      Poset p = testutil::random_poset(8, 0.3, rng);
      Poset q = testutil::random_poset(8, 0.3, rng);
      CHECK(order_isomorphic(p, p));
      CHECK(order_isomorphic(p, q) == order_isomorphic(q, p));
    }
  }
}

TEST_CASE("BoundedPoset::ensure") {
  SECTION("finds the bounds of a chain") {
    BoundedPoset b = BoundedPoset::ensure(chain(3));
    CHECK(b.bottom == 0);
    CHECK(b.top == 2);
  }
  SECTION("rejects a poset without bounds") {
    CHECK_THROWS_AS(BoundedPoset::ensure(antichain(2)), gensub::precondition_error);
  }
}

TEST_CASE("DOT emission") {
  Poset p = Poset::from_covers({"Null", "String \"quoted\""}, {{0, 1}});
  std::ostringstream os;
  p.write_dot(os);
  std::string dot = os.str();
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("label=\"Null\"") != std::string::npos);
  CHECK(dot.find("\\\"quoted\\\"") != std::string::npos);
  CHECK(dot.find("n0 -> n1;") != std::string::npos);  // subtype -> supertype
}
