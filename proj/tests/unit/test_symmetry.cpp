#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "rab/error.hpp"
#include "rab/symmetry.hpp"
#include "../support/systems.hpp"

using namespace rab;

namespace {

// All permutations of S, filtered by a predicate.
template <class Pred>
std::vector<std::vector<int>> all_permutations(int n, Pred keep) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    if (keep(p)) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

bool preserves_graph(const CoxeterSystem& sys, const std::vector<int>& p) {
  for (int s = 0; s < sys.rank(); ++s) {
    for (int t = 0; t < sys.rank(); ++t) {
      if (sys.commute(s, t) != sys.commute(p[s], p[t])) return false;
    }
  }
  return true;
}

// Flexible iff a nontrivial automorphism fixes some closed star pointwise.
bool rigid_oracle(const CoxeterSystem& sys) {
  const int n = sys.rank();
  for (const auto& p : all_permutations(n, [&](const auto& p) { return preserves_graph(sys, p); })) {
    bool trivial = true;
    for (int s = 0; s < n; ++s) trivial = trivial && p[s] == s;
    if (trivial) continue;
    for (int v = 0; v < n; ++v) {
      bool fixes = p[v] == v;
      for (int t = 0; t < n; ++t) {
        if (sys.commute(v, t)) fixes = fixes && p[t] == t;
      }
      if (fixes) return false;
    }
  }
  return true;
}

CoxeterSystem random_system(int n, std::mt19937_64& rng) {
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng() % 2) pairs.emplace_back(i, j);
    }
  }
  return CoxeterSystem(names, pairs);
}

std::vector<BallAutomorphism> type_group_on(const Clump& C) {
  std::vector<BallAutomorphism> H;
  for (const auto& p : type_permutation_group(C.building().group())) {
    H.push_back(type_automorphism(C, p));
  }
  return H;
}

}  // namespace

TEST_CASE("type permutation groups") {
  CHECK(type_permutation_group(testing::dinf(2, 3).group()).size() == 1);
  CHECK(type_permutation_group(testing::dinf(3, 3).group()).size() == 2);
  const auto hex = testing::polygon(6, 3);
  const auto H = type_permutation_group(hex.group());
  CHECK(H.size() == 12);
  CHECK(H.front().is_identity());
  const auto oracle = all_permutations(6, [&](const auto& p) {
    return preserves_graph(hex.system(), p);
  });
  REQUIRE(oracle.size() == H.size());
  for (std::size_t i = 0; i < H.size(); ++i) CHECK(H[i].image == oracle[i]);
  for (const auto& a : H) {
    for (const auto& b : H) CHECK(std::find(H.begin(), H.end(), compose(a, b)) != H.end());
  }
  CHECK(type_permutation_group(testing::tree_product({2, 2, 3, 3}).group()).size() == 4);
  // only the swap (a d)(b c) survives
  CHECK(type_permutation_group(testing::tree_product({3, 2, 2, 3}).group()).size() == 2);
}

TEST_CASE("nerve rigidity") {
  CHECK_FALSE(is_rigid(testing::tree3(2, 2, 2).system()));   // 3 isolated vertices
  CHECK(is_rigid(testing::square(2, 2).system()));           // a simplex
  CHECK(is_rigid(testing::polygon(6, 2).system()));
  CHECK(nerve_automorphisms(testing::polygon(6, 2).system()).size() == 12);
  CHECK(is_rigid(testing::polygon(4, 2).system()));
  // a and b share the neighbour x; the isolated y has a fixed star
  CHECK_FALSE(is_rigid(CoxeterSystem({"x", "a", "b", "y"}, {{0, 1}, {0, 2}})));
  CHECK_THROWS_AS(nerve_automorphisms(testing::polygon(11, 2).system()), SizeError);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 120; ++trial) {
    const auto sys = random_system(2 + trial % 7, rng);
    CHECK(is_rigid(sys) == rigid_oracle(sys));
  }
}

TEST_CASE("discreteness verdicts") {
  auto v = classify_discreteness(testing::polygon(5, 3).group());
  CHECK(v.kind == DiscretenessCase::one);
  CHECK_FALSE(v.g0_discrete);
  CHECK_FALSE(v.g_discrete);

  v = classify_discreteness(testing::polygon(6, 2).group());
  CHECK(v.kind == DiscretenessCase::two);
  CHECK(v.g0_discrete);
  CHECK(v.g_discrete);

  v = classify_discreteness(testing::mixed3(2, 2, 2).group());
  CHECK(v.kind == DiscretenessCase::two);
  CHECK_FALSE(v.nerve_rigid);
  CHECK_FALSE(v.g_discrete);

  // s, t free; u commutes with both and is the only thick generator.
  const auto X = testing::make_building({"s", "t", "u"}, {{0, 2}, {1, 2}}, {2, 2, 3});
  v = classify_discreteness(X.group());
  CHECK(v.kind == DiscretenessCase::three);
  CHECK(v.g0_discrete);

  v = classify_discreteness(testing::square(2, 3).group());
  CHECK(v.kind == DiscretenessCase::finite);
}

TEST_CASE("case predicates partition all small systems") {
  std::size_t scanned = 0;
  for (int n = 1; n <= 4; ++n) {
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) slots.emplace_back(i, j);
    }
    for (unsigned graph = 0; graph < (1u << slots.size()); ++graph) {
      std::vector<std::pair<int, int>> pairs;
      for (std::size_t k = 0; k < slots.size(); ++k) {
        if (graph & (1u << k)) pairs.push_back(slots[k]);
      }
      std::vector<std::string> names;
      for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
      const CoxeterSystem sys(names, pairs);
      for (unsigned qs = 0; qs < (1u << n); ++qs) {
        std::vector<int> q;
        for (int i = 0; i < n; ++i) q.push_back(qs & (1u << i) ? 3 : 2);
        const GraphProduct G(sys, q);
        const auto v = classify_discreteness(G);
        ++scanned;
        if (sys.is_finite()) {
          CHECK(v.kind == DiscretenessCase::finite);
          continue;
        }
        bool p1 = false;
        bool p2 = true;
        bool some_thick = false;
        bool thick_central = true;
        for (int s = 0; s < n; ++s) {
          if (q[s] > 2) {
            p2 = false;
            some_thick = true;
          }
          for (int t = 0; t < n; ++t) {
            if (s == t) continue;
            if (q[s] > 2 && sys.m(s, t) == 0) p1 = true;
            if (q[s] > 2 && sys.m(s, t) != 2) thick_central = false;
          }
        }
        const bool p3 = some_thick && thick_central;
        CHECK(int(p1) + int(p2) + int(p3) == 1);
        const auto expected = p1 ? DiscretenessCase::one
                              : p2 ? DiscretenessCase::two
                                   : DiscretenessCase::three;
        CHECK(v.kind == expected);
      }
    }
  }
  CHECK(scanned == 2 + 4 * 2 + 8 * 8 + 64 * 16);
}

TEST_CASE("automorphism checks") {
  const auto X = testing::dinf(3, 3);
  const Clump C = ball(X, 1);
  const auto id = identity_automorphism(C);
  CHECK(check_automorphism(C, id).empty());
  const auto swap = type_automorphism(C, TypePermutation{{1, 0}});
  CHECK(check_automorphism(C, swap).empty());
  CHECK(compose(swap, swap) == id);
  CHECK(inverse(swap) == swap);

  auto broken = id;
  const auto& G = X.group();
  std::swap(broken.map.at(G.generator(0)), broken.map.at(G.generator(1)));
  CHECK_FALSE(check_automorphism(C, broken).empty());
  CHECK_THROWS_AS(extend_action(C, broken), DomainError);

  const Clump D = ball(testing::dinf(2, 3), 1);
  CHECK_THROWS_AS(type_automorphism(D, TypePermutation{{1, 0}}), DomainError);
}

TEST_CASE("actions extend to simple morphisms") {
  const auto X = testing::dinf(3, 3);
  const Clump C = ball(X, 1);
  const auto m = extend_action(C, identity_automorphism(C));
  for (std::size_t v = 0; v < m.vertex_map.size(); ++v) {
    CHECK(m.vertex_map[v] == static_cast<int>(v));
  }
  const auto swap = type_automorphism(C, TypePermutation{{1, 0}});
  const auto ms = extend_action(C, swap);
  const auto& Y = ms.source->scwol;
  int swapped = 0;
  for (int v = 0; v < Y.vertex_count(); ++v) {
    for (const auto& x : ms.source->elements(v)) {
      const auto y = ms.local_map(v, x);
      CHECK(y.g.c[0] == x.g.c[1]);
      CHECK(y.g.c[1] == x.g.c[0]);
      swapped += x.g.c[0] != 0 ? 1 : 0;
    }
  }
  CHECK(swapped > 0);
  CHECK(check_composition(C, swap, swap));

  const auto hex = testing::polygon(6, 3);
  const Clump H1 = ball(hex, 1);
  const auto group = type_group_on(H1);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 6; ++trial) {
    const auto& h = group[rng() % group.size()];
    const auto& k = group[rng() % group.size()];
    CHECK(check_composition(H1, h, k));
  }
  // Sheet swaps are type-preserving automorphisms too.
  const auto t = ball_by_unfolding(hex, 1);
  const auto sw = sheet_swap(t.clumps[0], t.sides[0], 0, 1);
  CHECK_NOTHROW(extend_action(t.clumps[1], sw));
}

TEST_CASE("quotient complexes of groups") {
  // Trivial H: one vertex per chain, identity covering.
  const auto d = testing::dinf(2, 3);
  const Clump D1 = ball(d, 1);
  const auto Q = quotient_cog(D1, {identity_automorphism(D1)});
  CHECK(Q.quotient->scwol.vertex_count() == static_cast<int>(Q.subdivision.chains.size()));
  CHECK(Q.report.sheet_count == 1);
  CHECK(Q.quotient->is_simple());

  const auto X = testing::dinf(3, 3);
  const Clump C1 = ball(X, 1);
  const auto Q1 = quotient_cog(C1, type_group_on(C1));
  CHECK(Q1.report.ok());
  CHECK(Q1.report.sheet_count == 2);
  CHECK(Q1.quotient->check_axioms().empty());

  const auto hex = testing::polygon(6, 3);
  const Clump H0 = ball(hex, 0);
  const auto Q0 = quotient_cog(H0, type_group_on(H0));
  // Orbits of chains of the hexagon: 1 + 1 + 1 (faces), 1 + 1 + 1 (edges), 1 (triangles).
  CHECK(Q0.quotient->scwol.vertex_count() == 7);
  CHECK(Q0.report.sheet_count == 12);
  CHECK(std::all_of(Q0.report.sheets_at.begin(), Q0.report.sheets_at.end(),
                    [](std::size_t n) { return n == 12; }));

  CHECK_THROWS_AS(quotient_cog(C1, {type_group_on(C1)[1]}), InputError);
}

TEST_CASE("covering chain through the quotient of Y_0") {
  for (const auto& X : {testing::dinf(3, 3), testing::polygon(6, 2)}) {
    const auto trace = ball_by_unfolding(X, 1);
    const Clump& Y1 = trace.clumps.back();
    const Clump Y0 = ball(X, 0);
    const auto m = labeling_morphism(Y1, label_trace(trace).back());
    const auto Q0 = quotient_cog(Y0, type_group_on(Y0));
    const auto S1 = subdivide(m.source->scwol);
    auto src = std::make_shared<ComplexOfGroups>(subdivide(*m.source, S1));
    const auto down = subdivide(m, S1, Q0.subdivision, src, Q0.cover);
    REQUIRE(verify_covering(down).ok());
    const auto chain = compose(down, Q0.covering);
    const auto R = verify_covering(chain);
    CHECK(R.ok());
    CHECK(R.sheet_count == Y1.size() * type_permutation_group(X.group()).size());
  }
}

TEST_CASE("apartment fragments") {
  // Thin building: the whole Davis ball.
  const auto davis = testing::polygon(5, 2);
  const auto thin = apartments_through_base(davis, 2);
  REQUIRE(thin.size() == 1);
  CHECK(thin.front().chambers == davis.ball_chambers(2));

  CHECK(apartments_through_base(testing::square(2, 3), 1).size() == 2);

  const auto X = testing::dinf(2, 3);
  const auto& G = X.group();
  const auto F = apartments_through_base(X, 1);
  REQUIRE(F.size() == 2);
  CHECK(F[0].chambers == std::vector<Chamber>{G.identity(), G.generator(0), G.generator(1)});
  CHECK(F[1].chambers == std::vector<Chamber>{G.identity(), G.generator(0), G.generator(1, 2)});

  // Oracle: all subsets of ball(2) containing the base with W-distances
  // realizing the W-ball isometrically.
  const auto chambers = X.ball_chambers(2);
  std::set<WElement> wball;
  for (const auto& c : chambers) wball.insert(projection_to_W(G, c));
  std::size_t count = 0;
  const auto& sys = X.system();
  for (unsigned mask = 0; mask < (1u << chambers.size()); ++mask) {
    std::vector<Chamber> A;
    for (std::size_t i = 0; i < chambers.size(); ++i) {
      if (mask & (1u << i)) A.push_back(chambers[i]);
    }
    if (A.size() != wball.size() || std::find(A.begin(), A.end(), G.identity()) == A.end()) {
      continue;
    }
    std::set<WElement> seen;
    bool ok = true;
    for (const auto& a : A) {
      seen.insert(X.w_distance(G.identity(), a));
      for (const auto& b : A) {
        ok = ok && X.w_distance(a, b) == multiply(sys, inverse(sys, X.w_distance(G.identity(), a)),
                                                  X.w_distance(G.identity(), b));
      }
    }
    if (ok && seen == wball) ++count;
  }
  CHECK(apartments_through_base(X, 2).size() == count);
  CHECK_THROWS_AS(apartments_through_base(X, 2, 2), SizeError);
}

TEST_CASE("sheet swaps") {
  const auto q2 = testing::dinf(2, 3);
  const Clump C0 = ball(q2, 0);
  CHECK_THROWS_AS(sheet_swap(C0, C0.sides()[0], 0, 1), DomainError);
  CHECK_THROWS_AS(sheet_swap(C0, C0.sides()[1], 0, 0), DomainError);
  CHECK_THROWS_AS(sheet_swap(C0, C0.sides()[1], 0, 2), DomainError);

  const auto t = ball_by_unfolding(testing::tree3(2, 4, 3), 2);
  int swaps = 0;
  for (std::size_t i = 0; i < t.sides.size(); ++i) {
    const Clump& prev = t.clumps[i];
    const int sheets_n = static_cast<int>(sheets(prev, t.sides[i]).blocks.size());
    for (int a = 0; a + 1 < sheets_n; ++a) {
      const auto h = sheet_swap(prev, t.sides[i], a, a + 1);
      ++swaps;
      for (const auto& c : prev.chambers()) CHECK(h(c) == c);
      CHECK(compose(h, h) == identity_automorphism(t.clumps[i + 1]));
      CHECK_FALSE(h.is_identity());
    }
  }
  CHECK(swaps > 10);
}

TEST_CASE("transitivity witnesses") {
  const auto sq = testing::square(2, 3);
  const auto& G = sq.group();
  const auto F = apartments_through_base(sq, 1);
  REQUIRE(F.size() == 2);
  CHECK(transitivity_witness(sq, F[0], F[0], 1).h.is_identity());
  const auto W = transitivity_witness(sq, F[0], F[1], 1);
  CHECK(W.h(G.generator(1)) == G.generator(1, 2));
  CHECK(W.h(G.identity()) == G.identity());

  for (const auto& X : {testing::dinf(2, 3), testing::mixed3(2, 2, 3)}) {
    const auto frags = apartments_through_base(X, 2);
    CHECK(frags.size() > 1);
    for (const auto& a : frags) {
      for (const auto& b : frags) {
        const auto w = transitivity_witness(X, a, b, 2);
        std::set<Chamber> img;
        for (const auto& c : a.chambers) img.insert(w.h(c));
        CHECK(img == std::set<Chamber>(b.chambers.begin(), b.chambers.end()));
      }
    }
  }
  ApartmentFragment bogus = F[0];
  bogus.chambers.pop_back();
  CHECK_THROWS_AS(transitivity_witness(sq, bogus, F[1], 1), DomainError);
}
