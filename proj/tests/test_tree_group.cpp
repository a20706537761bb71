#include <stdexcept>
#include <random>
#include <set>

#include "doctest.h"
#include "sosgibbs/tree_group.hpp"

using namespace sosgibbs;

namespace {
Word w(std::initializer_list<int> letters, int k) {
  std::vector<int> v(letters);
  return Word::reduce(v, k);
}
}  // namespace

TEST_CASE("reduce examples") {
  CHECK(w({1, 1}, 2).is_identity());
  CHECK(w({1, 2, 2, 1}, 2).is_identity());
  CHECK(w({1, 2, 1}, 2).length() == 3);
  CHECK(w({3, 1, 1, 2}, 2) == w({3, 2}, 2));
  CHECK_THROWS_AS(w({4}, 2), std::out_of_range);
  CHECK_THROWS_AS(w({0}, 2), std::out_of_range);
}

TEST_CASE("serialization of words") {
  CHECK(Word().to_string() == "e");
  CHECK(w({1, 2, 1}, 2).to_string() == "1.2.1");
  CHECK(Word::parse("1.2.1", 2) == w({1, 2, 1}, 2));
  CHECK(Word::parse("e", 2).is_identity());
  CHECK_THROWS_AS(Word::parse("2.2", 2), std::invalid_argument);
  CHECK_THROWS(Word::parse("1.x", 2));
  CHECK_THROWS(Word::parse("5", 2));
}

TEST_CASE("sphere sizes") {
  CHECK(sphere(0, 2).size() == 1);
  CHECK(sphere(2, 2).size() == 6);
  CHECK(sphere(3, 3).size() == 36);
  for (int k = 2; k <= 4; ++k)
    for (int n = 1; n <= 4; ++n) {
      const auto s = sphere(n, k);
      CHECK(s.size() == static_cast<std::size_t>((k + 1) * std::pow(k, n - 1)));
      std::set<Word> unique(s.begin(), s.end());
      CHECK(unique.size() == s.size());
      for (const Word& x : s) CHECK(x.length() == static_cast<std::size_t>(n));
    }
}

TEST_CASE("ball size formula and layout") {
  for (int k = 2; k <= 4; ++k)
    for (int n = 0; n <= 4; ++n) {
      const Ball ball(k, n);
      std::size_t total = 0;
      for (int l = 0; l <= n; ++l) total += sphere(l, k).size();
      CHECK(static_cast<std::size_t>(ball.size()) == total);
      CHECK(ball.size() == 1 + (k + 1) * (static_cast<int>(std::pow(k, n)) - 1) / (k - 1));
      for (int v = 1; v < ball.size(); ++v) {
        const Word& x = ball.vertex(v);
        CHECK(ball.vertex(ball.parent(v)) == x.times(x.last()));
        CHECK(ball.index_of(x) == v);
        CHECK(path_vertices(ball.digits_to(v), k).back() == x);
      }
    }
  // Prefix property.
  const Ball small(3, 2), big(3, 4);
  for (int v = 0; v < small.size(); ++v) CHECK(small.vertex(v) == big.vertex(v));
}

TEST_CASE("direct successors") {
  CHECK(direct_successors(Word(), 2).size() == 3);
  const auto s = direct_successors(w({1}, 2), 2);
  REQUIRE(s.size() == 2);
  CHECK(s[0] == w({1, 2}, 2));
  CHECK(s[1] == w({1, 3}, 2));
  for (const Word& x : sphere(3, 3)) {
    const auto succ = direct_successors(x, 3);
    CHECK(succ.size() == 3);
    for (const Word& y : succ) CHECK(y.length() == x.length() + 1);
  }
}

TEST_CASE("group laws on random words") {
  std::mt19937 gen(7);
  const int k = 3;
  std::uniform_int_distribution<int> letter(1, k + 1), len(0, 8);
  auto random_word = [&] {
    std::vector<int> v(static_cast<std::size_t>(len(gen)));
    for (int& a : v) a = letter(gen);
    return Word::reduce(v, k);
  };
  for (int t = 0; t < 500; ++t) {
    const Word a = random_word(), b = random_word(), c = random_word();
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * a.inverse() == Word());
    CHECK(a.inverse() * a == Word());
    CHECK(Word::reduce(a.letters(), k) == a);
    for (std::size_t i = 1; i < a.letters().size(); ++i) CHECK(a.letters()[i] != a.letters()[i - 1]);
  }
}

TEST_CASE("coset profile examples") {
  const SubgroupSpec full = SubgroupSpec::even_length(2);
  CHECK(full.is_full());
  CHECK_FALSE(full.generators_intersect());
  auto p = coset_profile(Word(), full);
  CHECK(p.coset == 0);
  CHECK(p.q == std::array<int, 2>{0, 3});
  for (const Word& x : sphere(3, 2)) {
    const auto q = coset_profile(x, full).q;
    CHECK(((q[0] == 0 && q[1] == 3) || (q[0] == 3 && q[1] == 0)));
  }
  const SubgroupSpec a1(2, {1});
  CHECK(a1.generators_intersect());
  p = coset_profile(Word(), a1);
  CHECK(p.coset == 0);
  CHECK(p.q == std::array<int, 2>{2, 1});
  CHECK_THROWS(SubgroupSpec(2, {}));
  CHECK_THROWS(SubgroupSpec(2, {4}));
}

TEST_CASE("property: q(x) is a permutation of q(e) and N(x) is constant") {
  for (const SubgroupSpec& spec : proper_parity_subgroups(3)) {
    const auto q0 = coset_profile(Word(), spec).q;
    const int n0 = (q0[0] > 0) + (q0[1] > 0);
    for (int l = 1; l <= 3; ++l)
      for (const Word& x : sphere(l, 3)) {
        auto q = coset_profile(x, spec).q;
        CHECK(((q == q0) || (q[0] == q0[1] && q[1] == q0[0])));
        CHECK((q[0] > 0) + (q[1] > 0) == n0);
        CHECK(spec.coset(x * x) == 0);  // H_A has index 2
      }
  }
  CHECK(proper_parity_subgroups(2).size() == 6);
}

TEST_CASE("path vertices") {
  CHECK(path_vertices(std::vector<int>{}, 2).size() == 1);
  const auto left = path_vertices(std::vector<int>{0, 0, 0, 0}, 2);
  REQUIRE(left.size() == 5);
  for (std::size_t i = 0; i < left.size(); ++i) CHECK(left[i].length() == i);
  const auto a = path_vertices(std::vector<int>{1, 0, 1}, 2);
  const auto b = path_vertices(std::vector<int>{1, 0, 0}, 2);
  CHECK(a[2] == b[2]);
  CHECK(a[3] != b[3]);
  CHECK_THROWS_AS(path_vertices(std::vector<int>{3}, 2), std::out_of_range);
  CHECK_THROWS_AS(path_vertices(std::vector<int>{0, 2}, 2), std::out_of_range);
}
