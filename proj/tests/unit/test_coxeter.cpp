#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "rab/coxeter.hpp"
#include "rab/error.hpp"
#include "../support/systems.hpp"

using namespace rab;

namespace {

// All words reachable from w by swapping adjacent commuting letters.
std::set<Word> commutation_class(const CoxeterSystem& sys, const Word& w) {
  std::set<Word> seen{w};
  std::vector<Word> todo{w};
  while (!todo.empty()) {
    Word v = todo.back();
    todo.pop_back();
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      if (v[i] != v[i + 1] && sys.commute(v[i], v[i + 1])) {
        Word x = v;
        std::swap(x[i], x[i + 1]);
        if (seen.insert(x).second) todo.push_back(x);
      }
    }
  }
  return seen;
}

// Tits: w is reduced iff no word in its commutation class has a square.
bool reduced_by_tits(const CoxeterSystem& sys, const Word& w) {
  for (const auto& v : commutation_class(sys, w)) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      if (v[i] == v[i + 1]) return false;
    }
  }
  return true;
}

Word random_word(std::mt19937_64& rng, int rank, int len) {
  std::uniform_int_distribution<int> letter(0, rank - 1);
  Word w(static_cast<std::size_t>(len));
  for (auto& x : w) x = letter(rng);
  return w;
}

// Applies a random Tits move (or its inverse, inserting ss).
Word random_move(const CoxeterSystem& sys, std::mt19937_64& rng, Word w) {
  std::uniform_int_distribution<int> kind(0, 2);
  const int k = kind(rng);
  if (k == 0 || w.size() < 2) {
    std::uniform_int_distribution<std::size_t> pos(0, w.size());
    const int s = std::uniform_int_distribution<int>(0, sys.rank() - 1)(rng);
    const auto p = static_cast<std::ptrdiff_t>(pos(rng));
    w.insert(w.begin() + p, {s, s});
    return w;
  }
  std::uniform_int_distribution<std::size_t> pos(0, w.size() - 2);
  for (int tries = 0; tries < 8; ++tries) {
    const std::size_t i = pos(rng);
    if (k == 1 && w[i] != w[i + 1] && sys.commute(w[i], w[i + 1])) {
      std::swap(w[i], w[i + 1]);
      return w;
    }
    if (k == 2 && w[i] == w[i + 1]) {
      w.erase(w.begin() + static_cast<std::ptrdiff_t>(i),
              w.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      return w;
    }
  }
  return w;
}

const std::vector<CoxeterSystem>& systems() {
  static const std::vector<CoxeterSystem> all = {
      testing::dinf(2, 2).system(),      testing::square(2, 2).system(),
      testing::tree3(2, 2, 2).system(),  testing::mixed3(2, 2, 2).system(),
      testing::polygon(5, 2).system(),   testing::polygon(6, 2).system(),
      testing::tree_product({2, 2, 2, 2}).system()};
  return all;
}

}  // namespace

TEST_CASE("reduce: Tits moves on short words") {
  const auto free2 = testing::make_system({"s", "t"}, {});
  const auto comm2 = testing::make_system({"s", "t"}, {{0, 1}});
  CHECK(reduce(free2, Word{0, 0}).is_identity());
  CHECK(reduce(comm2, Word{0, 1, 0}).word() == Word{1});
  CHECK(reduce(free2, Word{0, 1, 0}).word() == Word{0, 1, 0});
  CHECK(reduce(comm2, Word{1, 0}).word() == Word{0, 1});
  CHECK(multiply(comm2, reduce(comm2, Word{0}), reduce(comm2, Word{1})).word() ==
        Word{0, 1});
  CHECK_THROWS_AS(reduce(free2, Word{2}), InputError);
  CHECK_THROWS_AS(reduce(free2, std::vector<std::string>{"u"}), InputError);
  CHECK_THROWS_AS(multiply(free2, reduce(comm2, Word{0}), reduce(free2, Word{0})),
                  InputError);
}

TEST_CASE("reduce: confluence, canonicity and length against Tits oracle") {
  std::mt19937_64 rng(1234);
  for (const auto& sys : systems()) {
    for (int trial = 0; trial < 60; ++trial) {
      const Word w = random_word(rng, sys.rank(), 1 + trial % 9);
      const WElement g = reduce(sys, w);
      CHECK(reduce(sys, g.word()) == g);
      CHECK(g.length() <= w.size());
      CHECK((g.length() == w.size()) == reduced_by_tits(sys, w));
      CHECK(reduced_by_tits(sys, g.word()));
      const auto cls = commutation_class(sys, g.word());
      CHECK(*std::min_element(cls.begin(), cls.end()) == g.word());
      CHECK(is_subset(support(g), support(reduce(sys, g.word()))));
      Word v = w;
      for (int step = 0; step < 6; ++step) {
        v = random_move(sys, rng, v);
        CHECK(reduce(sys, v) == g);
        TypeSet letters = 0;
        for (int s : v) letters |= singleton(s);
        CHECK(is_subset(support(g), letters));
      }
      CHECK(multiply(sys, g, inverse(sys, g)).is_identity());
    }
  }
}

TEST_CASE("multiply is associative on random triples") {
  std::mt19937_64 rng(99);
  for (const auto& sys : systems()) {
    for (int trial = 0; trial < 40; ++trial) {
      const auto a = reduce(sys, random_word(rng, sys.rank(), 5));
      const auto b = reduce(sys, random_word(rng, sys.rank(), 5));
      const auto c = reduce(sys, random_word(rng, sys.rank(), 5));
      CHECK(multiply(sys, multiply(sys, a, b), c) ==
            multiply(sys, a, multiply(sys, b, c)));
    }
  }
}

TEST_CASE("is_spherical agrees with closure of W_T") {
  // Closure of the generators of T under multiplication; stops at 64.
  auto closure_size = [](const CoxeterSystem& sys, TypeSet T) {
    std::set<Word> seen{Word{}};
    std::vector<WElement> todo{identity(sys)};
    while (!todo.empty() && seen.size() <= 64) {
      const WElement g = todo.back();
      todo.pop_back();
      for (int s : members(T)) {
        const WElement h = multiply(sys, g, reduce(sys, Word{s}));
        if (seen.insert(h.word()).second) todo.push_back(h);
      }
    }
    return seen.size();
  };
  for (const auto& sys : systems()) {
    for (TypeSet T = 0; T <= sys.all(); ++T) {
      if (cardinality(T) > 4) continue;
      const std::size_t n = closure_size(sys, T);
      CHECK(is_spherical(sys, T) == (n <= 64));
      if (is_spherical(sys, T)) CHECK(n == (std::size_t{1} << cardinality(T)));
    }
  }
  const auto free2 = testing::make_system({"s", "t"}, {});
  CHECK(is_spherical(free2, 0));
  CHECK_FALSE(is_spherical(free2, 3));
}

TEST_CASE("spherical poset and nerve") {
  const auto P1 = spherical_poset(testing::tree3(2, 2, 2).system());
  CHECK(P1.simplices == std::vector<TypeSet>{1, 2, 4});
  const auto P2 = spherical_poset(testing::mixed3(2, 2, 2).system());
  CHECK(P2.simplices == std::vector<TypeSet>{1, 2, 4, 6});
  CHECK(P2.maximal == std::vector<TypeSet>{1, 6});
  const auto P3 = spherical_poset(testing::polygon(6, 2).system());
  CHECK(P3.simplices.size() == 12);
  for (TypeSet T : P3.simplices) {
    if (cardinality(T) == 2) {
      const auto ij = members(T);
      CHECK(((ij[1] - ij[0]) == 1 || (ij[0] == 0 && ij[1] == 5)));
    }
  }
  CHECK(P3.maximal.size() == 6);
  std::vector<std::string> names;
  for (int i = 0; i < 13; ++i) names.push_back("g" + std::to_string(i));
  CHECK_THROWS_AS(spherical_poset(CoxeterSystem(names, {})), SizeError);
}

TEST_CASE("system construction errors") {
  CHECK_THROWS_AS(testing::make_system({"s", "s"}, {}), InputError);
  CHECK_THROWS_AS(testing::make_system({"s", "t"}, {{0, 2}}), InputError);
  CHECK_THROWS_AS(CoxeterSystem::from_matrix({"s", "t"}, {{1, 3}, {3, 1}}),
                  InputError);
  const auto sys = CoxeterSystem::from_matrix({"s", "t"}, {{1, 2}, {2, 1}});
  CHECK(sys.commute(0, 1));
  CHECK(sys.is_finite());
  CHECK_FALSE(testing::dinf(2, 2).system().is_finite());
}
