#include <algorithm>
#include <fstream>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "rab/covering.hpp"
#include "rab/error.hpp"
#include "../support/systems.hpp"

using namespace rab;

namespace {

struct Case {
  Building X;
  int radius;
};

const std::vector<Case>& cases() {
  static const std::vector<Case> all = {
      {testing::dinf(2, 3), 3},          {testing::dinf(3, 3), 3},
      {testing::tree3(2, 4, 3), 2},      {testing::mixed3(3, 2, 3), 2},
      {testing::polygon(6, 3), 1},       {testing::polygon(5, 2), 2},
      {testing::tree_product({3, 2, 2, 3}), 2}, {testing::square(2, 3), 1}};
  return all;
}

// The chamber of C_prev folded onto phi across its u-mirror.
Chamber lift(const Clump& C_prev, const Chamber& phi, int u) {
  const auto back = C_prev.chambers_in(C_prev.building().face(phi, singleton(u)));
  REQUIRE(back.size() == 1);
  return back.front();
}

}  // namespace

TEST_CASE("initial labeling is trivial and verifies") {
  for (const auto& [X, r] : cases()) {
    const Clump Y0 = ball(X, 0);
    const auto L = label_initial(Y0);
    for (const auto& l : L.label) CHECK(l == X.group().zero());
    CHECK(verify_labeling(Y0, L).ok());
    const auto cov = build_covering(Y0, L);
    CHECK(cov.sheet_count() == 1);
    CHECK(lattice_index(Y0, L) == 1);
  }
}

TEST_CASE("labels along a square chamber unfolded along s then u") {
  const auto X = testing::polygon(4, 2);
  const auto& G = X.group();
  const int s = 0;
  const int u = 1;  // commutes with s
  const Clump C0 = ball(X, 0);
  const auto L0 = label_initial(C0);
  const Side Ks = C0.sides()[static_cast<std::size_t>(C0.side_of(X.face(G.identity(), singleton(s))))];
  const auto L1 = label_unfold(L0, C0, Ks);
  const Clump C1 = unfold(C0, Ks);
  const Side Ku = C1.sides()[static_cast<std::size_t>(C1.side_of(X.face(G.identity(), singleton(u))))];
  CHECK(Ku.mirrors.size() == 2);
  const auto L2 = label_unfold(L1, C1, Ku);
  const Clump C2 = unfold(C1, Ku);
  CHECK(C2.size() == 4);

  // New edge into the s-side: s-component g_s; all other new edges trivial.
  for (std::size_t a = 0; a < L1.label.size(); ++a) {
    const auto& e = L1.scwol.scwol.edges()[a];
    const TypeSet ti = L1.scwol.faces[e.from].type;
    const TypeSet tt = L1.scwol.faces[e.to].type;
    const auto in = C1.chambers_in(L1.scwol.faces[e.from]);
    const bool is_new = std::none_of(in.begin(), in.end(),
                                     [&](const Chamber& c) { return C0.contains(c); });
    auto expected = G.zero();
    if (is_new && contains(tt, s) && !contains(ti, s)) expected = G.ds_generator(s);
    CHECK(L1.label[a] == expected);
  }
  // Second step: u-component g_u into the u-side; the s-components of
  // chamber s.u are carried over from chamber s.
  for (std::size_t a = 0; a < L2.label.size(); ++a) {
    const auto& e = L2.scwol.scwol.edges()[a];
    const TypeSet ti = L2.scwol.faces[e.from].type;
    const TypeSet tt = L2.scwol.faces[e.to].type;
    const auto in = C2.chambers_in(L2.scwol.faces[e.from]);
    const int old = L1.scwol.vertex(L2.scwol.faces[e.from]) >= 0 &&
                            L1.scwol.vertex(L2.scwol.faces[e.to]) >= 0
                        ? L1.scwol.edge(L1.scwol.vertex(L2.scwol.faces[e.from]),
                                        L1.scwol.vertex(L2.scwol.faces[e.to]))
                        : -1;
    if (old >= 0) {
      CHECK(L2.label[a] == L1.label[old]);
      continue;
    }
    auto expected = G.zero();
    if (contains(tt, u) && !contains(ti, u)) expected.c[u] = 1;
    if (in.size() == 1 && in.front() == G.from_syllables({{static_cast<std::uint8_t>(s), 1},
                                        {static_cast<std::uint8_t>(u), 1}}) &&
        contains(tt, s) && !contains(ti, s)) {
      expected.c[s] = 1;
    }
    CHECK(L2.label[a] == expected);
  }
  CHECK(verify_labeling(C2, L2).ok());
  CHECK(build_covering(C2, L2).sheet_count() == 4);
}

TEST_CASE("D-infinity(2,3): the t-side gets both nontrivial elements") {
  const auto X = testing::dinf(2, 3);
  const Clump C0 = ball(X, 0);
  const auto L0 = label_initial(C0);
  const Side Kt = C0.sides()[1];
  REQUIRE(Kt.type == 1);
  const auto L1 = label_unfold(L0, C0, Kt);
  std::set<int> seen;
  for (std::size_t a = 0; a < L1.label.size(); ++a) {
    const auto& e = L1.scwol.scwol.edges()[a];
    if (L1.scwol.faces[e.to].type == singleton(1) && L1.label[a].c[1] != 0) {
      seen.insert(L1.label[a].c[1]);
    }
  }
  CHECK(seen == std::set<int>{1, 2});
}

TEST_CASE("labelings along every trace verify two ways and agree") {
  for (const auto& [X, r] : cases()) {
    for (const auto seed : {std::optional<std::uint64_t>{}, std::optional<std::uint64_t>{5}}) {
      const auto trace = ball_by_unfolding(X, r, seed);
      const auto Ls = label_trace(trace);
      REQUIRE(Ls.size() == trace.clumps.size());
      for (std::size_t i = 0; i < Ls.size(); ++i) {
        const auto& C = trace.clumps[i];
        const auto R = verify_labeling(C, Ls[i]);
        CHECK(R.ok());
        const auto cov = verify_covering(labeling_morphism(C, Ls[i]));
        CHECK(cov.ok());
        CHECK(cov.fibers == R.fibers);
        CHECK(cov.sheet_count == C.size());
      }
    }
  }
}

TEST_CASE("label stability and u-only changes") {
  for (const auto& [X, r] : cases()) {
    const auto trace = ball_by_unfolding(X, std::min(r, 2));
    const auto Ls = label_trace(trace);
    for (std::size_t i = 0; i + 1 < Ls.size(); ++i) {
      const auto& prev = Ls[i];
      const auto& next = Ls[i + 1];
      const auto& C_prev = trace.clumps[i];
      const int u = trace.sides[i].type;
      const TypeSet rest = X.system().all() & ~singleton(u);
      for (std::size_t a = 0; a < next.label.size(); ++a) {
        const auto& e = next.scwol.scwol.edges()[a];
        const Face& fi = next.scwol.faces[e.from];
        const Face& ft = next.scwol.faces[e.to];
        const int vi = prev.scwol.vertex(fi);
        const int vt = prev.scwol.vertex(ft);
        const int old = vi >= 0 && vt >= 0 ? prev.scwol.edge(vi, vt) : -1;
        if (old >= 0) {
          CHECK(next.label[a] == prev.label[old]);
          continue;
        }
        const auto phi = trace.clumps[i + 1].chambers_in(fi).front();
        const auto psi = lift(C_prev, phi, u);
        const int lifted = prev.scwol.edge(prev.scwol.vertex(X.face(psi, fi.type)),
                                           prev.scwol.vertex(X.face(psi, ft.type)));
        REQUIRE(lifted >= 0);
        CHECK(project_components(next.label[a], rest) ==
              project_components(prev.label[lifted], rest));
      }
    }
  }
}

TEST_CASE("fault injection is caught by both checks at the same pair") {
  int injected = 0;
  for (const auto& [X, r] : cases()) {
    const auto trace = ball_by_unfolding(X, std::min(r, 2));
    const auto Ls = label_trace(trace);
    for (std::size_t i = 0; i < Ls.size(); ++i) {
      const auto& C = trace.clumps[i];
      const auto fault = inject_fault(C, Ls[i], 1000 + i);
      if (!fault) continue;
      ++injected;
      const auto R = verify_labeling(C, fault->labeling);
      const auto cov = verify_covering(labeling_morphism(C, fault->labeling));
      const FiberVerdict bad{fault->vertex, fault->base_edge, false};
      CHECK(std::find(R.fibers.begin(), R.fibers.end(), bad) != R.fibers.end());
      CHECK(std::find(cov.fibers.begin(), cov.fibers.end(), bad) != cov.fibers.end());
      CHECK(cov.fibers == R.fibers);
      CHECK_FALSE(R.ok());
      CHECK_THROWS_AS(build_covering(C, fault->labeling), VerificationError);
    }
  }
  CHECK(injected > 20);
  // Y_0 has no fiber with two edges.
  const Clump Y0 = ball(testing::dinf(2, 3), 0);
  CHECK_FALSE(inject_fault(Y0, label_initial(Y0), 1).has_value());
}

TEST_CASE("index examples") {
  const auto d = testing::dinf(2, 3);
  const auto td = ball_by_unfolding(d, 1);
  CHECK(lattice_index(td.clumps.back(), label_trace(td).back()) == 4);

  const auto sq = testing::square(2, 3);
  const auto ts = ball_by_unfolding(sq, 1);
  CHECK(ts.clumps.back().is_whole_building());
  CHECK(lattice_index(ts.clumps.back(), label_trace(ts).back()) == 6);

  std::ifstream in(std::string(RAB_FIXTURES_DIR) + "/golden/index.json");
  REQUIRE(in.good());
  const auto golden = nlohmann::json::parse(in);
  const auto hex = testing::polygon(6, 3);
  const auto th = ball_by_unfolding(hex, 1);
  const auto n = lattice_index(th.clumps.back(), label_trace(th).back());
  CHECK(n == golden.at("hexagon_q3_radius1").get<std::size_t>());
  CHECK(n == hex.ball_chambers(1).size());
}

TEST_CASE("morphism checker rejects broken data") {
  const auto X = testing::dinf(2, 3);
  const auto trace = ball_by_unfolding(X, 1);
  const auto& C = trace.clumps.back();
  const auto L = label_trace(trace).back();
  auto m = labeling_morphism(C, L);
  REQUIRE(verify_covering(m).ok());

  auto outside = m;
  for (std::size_t a = 0; a < outside.edge_element.size(); ++a) {
    const auto& e = outside.source->scwol.edges()[a];
    if (C.building().system().all() & ~L.scwol.faces[e.to].type) {
      outside.edge_element[a].g.c[0] = 1;
      outside.edge_element[a].g.c[1] = 1;
      break;
    }
  }
  CHECK_FALSE(verify_covering(outside).ok());

  auto degenerate = m;
  degenerate.edge_map[0] = degenerate.edge_map[1];
  CHECK_FALSE(verify_covering(degenerate).problems.empty());

  auto shape = m;
  shape.local_conj.pop_back();
  CHECK_THROWS_AS(verify_covering(shape), InputError);
}

TEST_CASE("subdivided coverings still verify") {
  for (const auto& X : {testing::dinf(3, 3), testing::polygon(5, 2), testing::square(2, 3)}) {
    const auto trace = ball_by_unfolding(X, 1);
    const auto& C = trace.clumps.back();
    const auto m = labeling_morphism(C, label_trace(trace).back());
    const auto Sy = subdivide(m.source->scwol);
    const auto Sz = subdivide(m.target->scwol);
    CHECK(Sy.scwol.check_axioms().empty());
    auto src = std::make_shared<ComplexOfGroups>(subdivide(*m.source, Sy));
    auto tgt = std::make_shared<ComplexOfGroups>(subdivide(*m.target, Sz));
    CHECK(src->check_axioms().empty());
    CHECK(tgt->check_axioms().empty());
    const auto ms = subdivide(m, Sy, Sz, src, tgt);
    const auto R = verify_covering(ms);
    CHECK(R.ok());
    CHECK(R.sheet_count == C.size());

    // Composing with the identity of the target changes nothing.
    Morphism id;
    id.source = tgt;
    id.target = tgt;
    for (int v = 0; v < tgt->scwol.vertex_count(); ++v) {
      id.vertex_map.push_back(v);
      id.local_conj.push_back(tgt->ambient->identity());
    }
    for (std::size_t a = 0; a < tgt->scwol.edges().size(); ++a) {
      id.edge_map.push_back(static_cast<int>(a));
      id.edge_element.push_back(tgt->ambient->identity());
    }
    CHECK(verify_covering(id).sheet_count == 1);
    const auto composed = compose(ms, id);
    CHECK(composed.edge_element == ms.edge_element);
    CHECK(verify_covering(composed).ok());
  }
}

TEST_CASE("subdivision of a 1-simplex") {
  Scwol Y;
  Y.add_vertex("a");
  Y.add_vertex("b");
  Y.add_edge(0, 1);
  const auto S = subdivide(Y);
  CHECK(S.chains.size() == 3);
  CHECK(S.scwol.edges().size() == 2);
  CHECK(S.scwol.compositions().empty());
  CHECK(S.vertex({0, 1}) >= 0);
  CHECK(S.vertex({1, 0}) == -1);
}
