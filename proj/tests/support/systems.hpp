#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rab/building.hpp"

namespace rab::testing {

inline CoxeterSystem make_system(std::vector<std::string> names,
                                 std::vector<std::pair<int, int>> pairs) {
  return CoxeterSystem(std::move(names), pairs);
}

inline Building make_building(std::vector<std::string> names,
                              std::vector<std::pair<int, int>> pairs,
                              std::vector<int> q, Caps caps = {}) {
  return Building(GraphProduct(make_system(std::move(names), std::move(pairs)),
                               std::move(q)),
                  caps);
}

// Infinite dihedral group: two free involutions.
inline Building dinf(int qs, int qt) {
  return make_building({"s", "t"}, {}, {qs, qt});
}

// m(s,t) = 2: the finite building is a complete bipartite graph.
inline Building square(int qs, int qt) {
  return make_building({"s", "t"}, {{0, 1}}, {qs, qt});
}

// Free product of three involutions (tree building).
inline Building tree3(int q1, int q2, int q3) {
  return make_building({"s1", "s2", "s3"}, {}, {q1, q2, q3});
}

// s1 free; s2 and s3 commute.
inline Building mixed3(int q1, int q2, int q3) {
  return make_building({"s1", "s2", "s3"}, {{1, 2}}, {q1, q2, q3});
}

// Right-angled p-gon: s_i commutes with s_{i+1} (indices mod p).
inline Building polygon(int p, int q) {
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < p; ++i) {
    names.push_back("s" + std::to_string(i + 1));
    pairs.emplace_back(i, (i + 1) % p);
  }
  return make_building(names, pairs, std::vector<int>(p, q));
}

// Product of two trees: {a,b} free, {c,d} free, everything else commutes.
inline Building tree_product(std::vector<int> q) {
  return make_building({"a", "b", "c", "d"},
                       {{0, 2}, {0, 3}, {1, 2}, {1, 3}}, std::move(q));
}

}  // namespace rab::testing
