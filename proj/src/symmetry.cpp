#include "rab/symmetry.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "rab/error.hpp"

namespace rab {

// ---- type permutations -------------------------------------------------------

TypeSet TypePermutation::apply(TypeSet T) const {
  TypeSet out = 0;
  for (int s : members(T)) out |= singleton(image[s]);
  return out;
}

bool TypePermutation::is_identity() const {
  for (std::size_t s = 0; s < image.size(); ++s) {
    if (image[s] != static_cast<int>(s)) return false;
  }
  return true;
}

TypePermutation compose(const TypePermutation& a, const TypePermutation& b) {
  TypePermutation out;
  for (int s : b.image) out.image.push_back(a.image[s]);
  return out;
}

namespace {

// Permutations of S preserving commutation and, if given, a vertex color.
std::vector<TypePermutation> graph_automorphisms(const CoxeterSystem& sys,
                                                 const std::vector<int>& color) {
  const int n = sys.rank();
  std::vector<TypePermutation> out;
  std::vector<int> image(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  std::function<void(int)> extend = [&](int s) {
    if (s == n) {
      out.push_back(TypePermutation{image});
      return;
    }
    for (int t = 0; t < n; ++t) {
      if (used[t] || color[t] != color[s]) continue;
      bool ok = true;
      for (int r = 0; r < s && ok; ++r) ok = sys.commute(r, s) == sys.commute(image[r], t);
      if (!ok) continue;
      used[t] = true;
      image[s] = t;
      extend(s + 1);
      used[t] = false;
    }
  };
  extend(0);
  return out;
}

}  // namespace

std::vector<TypePermutation> type_permutation_group(const GraphProduct& G) {
  return graph_automorphisms(G.system(), G.q());
}

// ---- ball automorphisms ------------------------------------------------------

bool BallAutomorphism::is_identity() const {
  return pi.is_identity() && std::all_of(map.begin(), map.end(), [](const auto& kv) {
           return kv.first == kv.second;
         });
}

BallAutomorphism identity_automorphism(const Clump& C) {
  BallAutomorphism h;
  for (const auto& c : C.chambers()) h.map.emplace(c, c);
  for (int s = 0; s < C.building().rank(); ++s) h.pi.image.push_back(s);
  return h;
}

BallAutomorphism compose(const BallAutomorphism& a, const BallAutomorphism& b) {
  BallAutomorphism out;
  for (const auto& [x, y] : b.map) {
    auto it = a.map.find(y);
    if (it == a.map.end()) throw DomainError("automorphisms have different domains");
    out.map.emplace(x, it->second);
  }
  out.pi = compose(a.pi, b.pi);
  return out;
}

BallAutomorphism inverse(const BallAutomorphism& h) {
  BallAutomorphism out;
  for (const auto& [x, y] : h.map) out.map.emplace(y, x);
  out.pi.image.assign(h.pi.image.size(), 0);
  for (std::size_t s = 0; s < h.pi.image.size(); ++s) {
    out.pi.image[h.pi.image[s]] = static_cast<int>(s);
  }
  return out;
}

BallAutomorphism type_automorphism(const Clump& C, const TypePermutation& pi) {
  const auto& G = C.building().group();
  const auto& perms = type_permutation_group(G);
  if (std::find(perms.begin(), perms.end(), pi) == perms.end()) {
    throw DomainError("permutation does not preserve the nerve and thickness");
  }
  BallAutomorphism h;
  h.pi = pi;
  for (const auto& c : C.chambers()) {
    std::vector<Syllable> w = c.syllables();
    for (auto& x : w) x.gen = static_cast<std::uint8_t>(pi(x.gen));
    auto d = G.from_syllables(w);
    if (!C.contains(d)) throw DomainError("clump is not invariant under the permutation");
    h.map.emplace(c, std::move(d));
  }
  return h;
}

Face image(const Clump& C, const BallAutomorphism& h, const Face& sigma) {
  const auto in = C.chambers_in(sigma);
  if (in.empty()) throw DomainError("face does not meet the clump");
  return C.building().face(h(in.front()), h.pi.apply(sigma.type));
}

std::vector<std::string> check_automorphism(const Clump& C, const BallAutomorphism& h) {
  const Building& X = C.building();
  std::vector<std::string> problems;
  std::set<Chamber> images;
  for (const auto& c : C.chambers()) {
    auto it = h.map.find(c);
    if (it == h.map.end()) {
      problems.push_back("chamber missing from the map");
      return problems;
    }
    if (!C.contains(it->second)) problems.push_back("image leaves the clump");
    images.insert(it->second);
  }
  if (h.map.size() != C.size() || images.size() != C.size()) {
    problems.push_back("chamber map is not a bijection");
  }
  std::set<int> targets(h.pi.image.begin(), h.pi.image.end());
  if (static_cast<int>(targets.size()) != X.rank() ||
      static_cast<int>(h.pi.image.size()) != X.rank()) {
    problems.push_back("type map is not a permutation");
    return problems;
  }
  for (int s = 0; s < X.rank(); ++s) {
    if (X.q(h.pi(s)) != X.q(s)) problems.push_back("type map does not preserve q");
    for (int t = 0; t < X.rank(); ++t) {
      if (X.system().commute(s, t) != X.system().commute(h.pi(s), h.pi(t))) {
        problems.push_back("type map does not preserve m");
      }
    }
  }
  if (!problems.empty()) return problems;

  std::map<Face, Face> face_map;
  std::set<Face> face_images;
  for (const auto& c : C.chambers()) {
    for (TypeSet T : X.spherical().subsets) {
      const Face f = X.face(c, T);
      const Face g = X.face(h(c), h.pi.apply(T));
      auto [it, fresh] = face_map.emplace(f, g);
      if (fresh) {
        if (!face_images.insert(g).second) problems.push_back("two faces share an image");
      } else if (it->second != g) {
        problems.push_back("chamber map does not respect " + to_string(X.system(), f));
      }
    }
  }
  for (const auto& K : C.sides()) {
    Side image_side{h.pi(K.type), {}};
    for (const auto& m : K.mirrors) {
      auto it = face_map.find(m);
      if (it != face_map.end()) image_side.mirrors.push_back(it->second);
    }
    std::sort(image_side.mirrors.begin(), image_side.mirrors.end());
    const auto& all = C.sides();
    if (std::find(all.begin(), all.end(), image_side) == all.end()) {
      problems.push_back("a side is not carried to a side");
    }
  }
  return problems;
}

std::shared_ptr<const AmbientGroup> permutation_ambient(
    const GraphProduct& G, const std::vector<TypePermutation>& group) {
  if (group.empty() || !group.front().is_identity()) {
    throw InputError("permutation group must start with the identity");
  }
  std::map<TypePermutation, int> index;
  for (std::size_t i = 0; i < group.size(); ++i) index.emplace(group[i], static_cast<int>(i));
  std::vector<std::vector<int>> perms;
  std::vector<std::vector<int>> mul(group.size());
  for (std::size_t i = 0; i < group.size(); ++i) {
    perms.push_back(group[i].image);
    for (const auto& b : group) {
      auto it = index.find(compose(group[i], b));
      if (it == index.end()) throw InputError("permutations are not closed under composition");
      mul[i].push_back(it->second);
    }
  }
  return std::make_shared<AmbientGroup>(G, std::move(perms), std::move(mul));
}

Morphism extend_action(const Clump& C, const BallAutomorphism& h) {
  const auto problems = check_automorphism(C, h);
  if (!problems.empty()) throw DomainError("not an automorphism: " + problems.front());
  const auto& G = C.building().group();
  const auto group = type_permutation_group(G);
  const auto at = std::find(group.begin(), group.end(), h.pi);
  if (at == group.end()) throw DomainError("type map is not a type permutation");

  const FaceScwol Y = scwol_of(C);
  Morphism m;
  m.source = std::make_shared<ComplexOfGroups>(canonical_cog(C, Y));
  auto target = std::make_shared<ComplexOfGroups>(*m.source);
  target->ambient = permutation_ambient(G, group);
  m.target = target;
  for (const auto& f : Y.faces) m.vertex_map.push_back(Y.vertex(image(C, h, f)));
  for (const auto& e : Y.scwol.edges()) {
    m.edge_map.push_back(Y.edge(m.vertex_map[e.from], m.vertex_map[e.to]));
  }
  m.local_conj.assign(Y.faces.size(),
                      target->ambient->of_h(static_cast<int>(at - group.begin())));
  m.edge_element.assign(Y.scwol.edges().size(), target->ambient->identity());
  const auto R = verify_covering(m);
  if (!R.ok() || R.sheet_count != 1) {
    throw VerificationError("induced morphism fails: " +
                            (R.problems.empty() ? std::string("fiber check") : R.problems.front()));
  }
  return m;
}

bool check_composition(const Clump& C, const BallAutomorphism& h, const BallAutomorphism& k) {
  const Morphism mh = extend_action(C, h);
  const Morphism mk = extend_action(C, k);
  const Morphism mhk = extend_action(C, compose(h, k));
  for (std::size_t v = 0; v < mk.vertex_map.size(); ++v) {
    const int kv = mk.vertex_map[v];
    if (mh.vertex_map[kv] != mhk.vertex_map[v]) return false;
    for (const auto& x : mk.source->elements(static_cast<int>(v))) {
      if (mh.local_map(kv, mk.local_map(static_cast<int>(v), x)) !=
          mhk.local_map(static_cast<int>(v), x)) {
        return false;
      }
    }
  }
  for (std::size_t a = 0; a < mk.edge_map.size(); ++a) {
    if (mh.edge_map[mk.edge_map[a]] != mhk.edge_map[a]) return false;
  }
  return true;
}

// ---- quotients -------------------------------------------------------------

Quotient quotient_cog(const Clump& C, const std::vector<BallAutomorphism>& H) {
  const auto& G = C.building().group();
  if (H.empty() || !H.front().is_identity()) {
    throw InputError("automorphism group must start with the identity");
  }
  const int n = static_cast<int>(H.size());
  for (const auto& h : H) {
    const auto problems = check_automorphism(C, h);
    if (!problems.empty()) throw DomainError("not an automorphism: " + problems.front());
  }
  std::vector<std::vector<int>> mul(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> perms;
  for (int i = 0; i < n; ++i) {
    perms.push_back(H[i].pi.image);
    for (int j = 0; j < n; ++j) {
      const auto hk = compose(H[i], H[j]);
      const auto it = std::find(H.begin(), H.end(), hk);
      if (it == H.end()) throw InputError("automorphisms are not closed under composition");
      mul[i].push_back(static_cast<int>(it - H.begin()));
    }
  }
  auto ambient = std::make_shared<AmbientGroup>(G, std::move(perms), std::move(mul));
  const auto& A = *ambient;

  const FaceScwol Y = scwol_of(C);
  Quotient Q;
  Q.subdivision = subdivide(Y.scwol);
  const auto& S = Q.subdivision;
  Q.cover = std::make_shared<ComplexOfGroups>(subdivide(canonical_cog(C, Y), S));
  const int chains = static_cast<int>(S.chains.size());

  // act[h][c]: the chain h.c
  std::vector<std::vector<int>> act(static_cast<std::size_t>(n));
  for (int h = 0; h < n; ++h) {
    std::vector<int> on_faces;
    for (const auto& f : Y.faces) on_faces.push_back(Y.vertex(image(C, H[h], f)));
    for (const auto& chain : S.chains) {
      std::vector<int> moved;
      for (int v : chain) moved.push_back(on_faces[v]);
      const int w = S.vertex(moved);
      if (w < 0) throw InternalError("automorphism does not preserve chains");
      act[h].push_back(w);
    }
  }

  Q.orbit_of.assign(static_cast<std::size_t>(chains), -1);
  for (int c = 0; c < chains; ++c) {
    if (Q.orbit_of[c] >= 0) continue;
    const int z = static_cast<int>(Q.representative.size());
    Q.representative.push_back(c);
    for (int h = 0; h < n; ++h) Q.orbit_of[act[h][c]] = z;
  }
  // Least h with h.rep(orbit(c)) = c.
  auto carrier = [&](int c) {
    const int rep = Q.representative[Q.orbit_of[c]];
    for (int h = 0; h < n; ++h) {
      if (act[h][rep] == c) return h;
    }
    throw InternalError("chain not in its orbit");
  };

  auto Z = std::make_shared<ComplexOfGroups>();
  Z->ambient = ambient;
  for (int rep : Q.representative) {
    Z->scwol.add_vertex(S.scwol.label(rep));
    LocalGroup L{Q.cover->local[rep].components, {}};
    for (int h = 0; h < n; ++h) {
      if (act[h][rep] == rep) L.stabilizer.push_back(h);
    }
    Z->local.push_back(std::move(L));
  }
  // Each edge of Z lifts uniquely to an edge out of the representative.
  std::map<int, int> z_edge_of_lift;
  std::vector<int> lift;
  std::vector<int> h_of;
  for (std::size_t z = 0; z < Q.representative.size(); ++z) {
    for (int a : S.scwol.out_edges(Q.representative[z])) {
      const int to = S.scwol.edges()[a].to;
      const int b = Z->scwol.add_edge(static_cast<int>(z), Q.orbit_of[to]);
      z_edge_of_lift.emplace(a, b);
      lift.push_back(a);
      h_of.push_back(carrier(to));
    }
  }
  auto inv = [&](int h) { return A.h_inverse(h); };
  for (std::size_t b = 0; b < lift.size(); ++b) Z->psi.push_back(A.of_h(inv(h_of[b])));
  for (std::size_t b2 = 0; b2 < lift.size(); ++b2) {
    const int mid = Z->scwol.edges()[b2].to;
    for (int b1 : Z->scwol.out_edges(mid)) {
      const int from = S.scwol.edges()[lift[b2]].from;
      const int to = act[h_of[b2]][S.scwol.edges()[lift[b1]].to];
      const int a12 = S.edge(from, to);
      if (a12 < 0) throw InternalError("composite lift missing");
      const int b12 = z_edge_of_lift.at(a12);
      Z->scwol.add_composition(b1, static_cast<int>(b2), b12);
      Z->twist.push_back(A.of_h(
          A.h_multiply(A.h_multiply(inv(h_of[b1]), inv(h_of[b2])), h_of[b12])));
    }
  }
  const auto problems = Z->check_axioms();
  if (!problems.empty()) throw VerificationError("quotient complex: " + problems.front());
  Q.quotient = Z;

  Morphism& m = Q.covering;
  m.source = Q.cover;
  m.target = Z;
  std::vector<int> k(static_cast<std::size_t>(chains));
  for (int c = 0; c < chains; ++c) {
    k[c] = carrier(c);
    m.vertex_map.push_back(Q.orbit_of[c]);
    m.local_conj.push_back(A.of_h(inv(k[c])));
  }
  for (const auto& e : S.scwol.edges()) {
    const int lifted = S.edge(act[inv(k[e.from])][e.from], act[inv(k[e.from])][e.to]);
    const int b = z_edge_of_lift.at(lifted);
    m.edge_map.push_back(b);
    m.edge_element.push_back(
        A.of_h(A.h_multiply(A.h_multiply(inv(k[e.to]), k[e.from]), h_of[b])));
  }
  Q.report = verify_covering(m);
  if (!Q.report.ok()) {
    throw VerificationError("quotient covering fails: " +
                            (Q.report.problems.empty() ? std::string("fiber check")
                                                       : Q.report.problems.front()));
  }
  return Q;
}

// ---- discreteness ----------------------------------------------------------

std::vector<TypePermutation> nerve_automorphisms(const CoxeterSystem& sys, int cap) {
  if (sys.rank() > cap) throw SizeError("nerve too large for automorphism search", 0);
  return graph_automorphisms(sys, std::vector<int>(static_cast<std::size_t>(sys.rank()), 0));
}

bool is_rigid(const CoxeterSystem& sys, int cap) {
  for (const auto& g : nerve_automorphisms(sys, cap)) {
    if (g.is_identity()) continue;
    for (int v = 0; v < sys.rank(); ++v) {
      const TypeSet star = sys.commuting_with(v) | singleton(v);
      bool fixes = true;
      for (int s : members(star)) fixes = fixes && g(s) == s;
      if (fixes) return false;
    }
  }
  return true;
}

std::string DiscretenessVerdict::to_string() const {
  switch (kind) {
    case DiscretenessCase::finite:
      return "finite building: G0 and G are finite";
    case DiscretenessCase::one:
      return "case 1: G0 and G nondiscrete";
    case DiscretenessCase::two:
    case DiscretenessCase::three:
      return std::string(kind == DiscretenessCase::two ? "case 2" : "case 3") +
             ": G0 discrete, G " + (g_discrete ? "discrete" : "nondiscrete") +
             " (nerve " + (nerve_rigid ? "rigid" : "flexible") + ")";
  }
  return {};
}

DiscretenessVerdict classify_discreteness(const GraphProduct& G) {
  const auto& sys = G.system();
  DiscretenessVerdict v;
  v.nerve_rigid = is_rigid(sys, std::max(10, sys.rank()));
  if (sys.is_finite()) return v;
  bool thick_free = false;
  bool all_two = true;
  for (int s = 0; s < G.rank(); ++s) {
    if (G.q(s) > 2) all_two = false;
    for (int t = 0; t < G.rank(); ++t) {
      if (s != t && G.q(s) > 2 && !sys.commute(s, t)) thick_free = true;
    }
  }
  if (thick_free) {
    v.kind = DiscretenessCase::one;
    v.g0_discrete = false;
    v.g_discrete = false;
  } else {
    v.kind = all_two ? DiscretenessCase::two : DiscretenessCase::three;
    v.g0_discrete = true;
    v.g_discrete = v.nerve_rigid;
  }
  return v;
}

// ---- apartments --------------------------------------------------------------

namespace {

std::vector<Chamber> neighbors_in(const Building& X, const std::set<Chamber>& in,
                                  const Chamber& c, int s) {
  std::vector<Chamber> out;
  for (const auto& d : X.chambers_of(X.face(c, singleton(s)))) {
    if (d != c && in.count(d)) out.push_back(d);
  }
  return out;
}

}  // namespace

std::vector<ApartmentFragment> apartments_through_base(const Building& X, int n,
                                                       std::size_t cap) {
  const auto& sys = X.system();
  const auto chambers = X.ball_chambers(n);
  const std::set<Chamber> in(chambers.begin(), chambers.end());
  std::set<WElement> ball;
  for (const auto& c : chambers) ball.insert(projection_to_W(X.group(), c));
  const std::vector<WElement> order(ball.begin(), ball.end());  // by length

  // Each v != 1 is reached from a shorter v s inside the W-ball.
  std::vector<std::pair<std::size_t, int>> parent(order.size(), {0, -1});
  std::map<WElement, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos.emplace(order[i], i);
  for (std::size_t i = 1; i < order.size(); ++i) {
    for (int s = 0; s < sys.rank() && parent[i].second < 0; ++s) {
      const auto vs = multiply(sys, order[i], reduce(sys, Word{s}));
      if (vs.length() < order[i].length() && pos.count(vs)) parent[i] = {pos.at(vs), s};
    }
    if (parent[i].second < 0) throw InternalError("W-ball is not prefix closed");
  }
  std::vector<WElement> inverses;
  for (const auto& v : order) inverses.push_back(inverse(sys, v));

  std::vector<ApartmentFragment> out;
  std::vector<Chamber> phi(order.size());
  std::set<Chamber> used;
  std::function<void(std::size_t)> extend = [&](std::size_t i) {
    if (i == order.size()) {
      if (out.size() >= cap) throw SizeError("too many apartment fragments", out.size());
      ApartmentFragment F;
      for (std::size_t k = 0; k < order.size(); ++k) F.embedding.emplace(order[k], phi[k]);
      F.chambers = phi;
      std::sort(F.chambers.begin(), F.chambers.end());
      out.push_back(std::move(F));
      return;
    }
    const auto [p, s] = parent[i];
    for (const auto& c : neighbors_in(X, in, phi[p], s)) {
      if (used.count(c)) continue;
      bool ok = true;
      for (std::size_t k = 0; k < i && ok; ++k) {
        ok = X.w_distance(phi[k], c) == multiply(sys, inverses[k], order[i]);
      }
      if (!ok) continue;
      phi[i] = c;
      used.insert(c);
      extend(i + 1);
      used.erase(c);
    }
  };
  phi[0] = X.group().identity();
  used.insert(phi[0]);
  extend(1);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.chambers < b.chambers;
  });
  return out;
}

// ---- sheet swaps and witnesses ------------------------------------------------

BallAutomorphism sheet_swap(const Clump& C_prev, const Side& K, int i, int j) {
  const SheetPartition sp = sheets(C_prev, K);
  const int count = static_cast<int>(sp.blocks.size());
  if (i < 0 || j < 0 || i >= count || j >= count || i == j) {
    throw DomainError("invalid sheet indices");
  }
  const Clump U = unfold(C_prev, K);
  const Building& X = C_prev.building();
  BallAutomorphism h = identity_automorphism(U);
  auto partner = [&](const Chamber& x, int sheet) {
    for (const auto& y : U.chambers_in(X.face(x, singleton(K.type)))) {
      auto it = sp.sheet_of.find(y);
      if (it != sp.sheet_of.end() && it->second == sheet) return y;
    }
    throw InternalError("sheet misses a mirror");
  };
  for (const auto& x : sp.blocks[i]) {
    const Chamber y = partner(x, j);
    h.map[x] = y;
    h.map[y] = x;
  }
  const auto problems = check_automorphism(U, h);
  if (!problems.empty()) throw InternalError("sheet swap: " + problems.front());
  return h;
}

BallAutomorphism extend_isometry(const Clump& C, const BallAutomorphism& h) {
  if (!h.pi.is_identity()) throw DomainError("only type-preserving maps are extended");
  const Building& X = C.building();
  const std::set<Chamber> in(C.chambers().begin(), C.chambers().end());
  // Unassigned chambers in BFS order from the assigned ones, with a parent.
  std::vector<std::pair<Chamber, std::pair<Chamber, int>>> todo;
  {
    std::set<Chamber> seen;
    std::deque<Chamber> queue;
    for (const auto& [x, y] : h.map) {
      if (!in.count(x)) throw DomainError("map is not defined inside the clump");
      seen.insert(x);
      queue.push_back(x);
    }
    while (!queue.empty()) {
      const Chamber c = queue.front();
      queue.pop_front();
      for (int s = 0; s < X.rank(); ++s) {
        for (const auto& d : neighbors_in(X, in, c, s)) {
          if (seen.insert(d).second) {
            todo.push_back({d, {c, s}});
            queue.push_back(d);
          }
        }
      }
    }
    if (seen.size() != C.size()) throw DomainError("clump is not gallery connected");
  }
  BallAutomorphism out = h;
  std::set<Chamber> used;
  for (const auto& [x, y] : h.map) used.insert(y);
  std::vector<Chamber> assigned;
  for (const auto& [x, y] : h.map) assigned.push_back(x);

  std::function<bool(std::size_t)> extend = [&](std::size_t i) -> bool {
    if (i == todo.size()) return check_automorphism(C, out).empty();
    const auto& [x, via] = todo[i];
    for (const auto& cand : neighbors_in(X, in, out(via.first), via.second)) {
      if (used.count(cand)) continue;
      bool ok = true;
      for (std::size_t k = 0; k < assigned.size() && ok; ++k) {
        ok = X.w_distance(out(assigned[k]), cand) == X.w_distance(assigned[k], x);
      }
      if (!ok) continue;
      out.map[x] = cand;
      used.insert(cand);
      assigned.push_back(x);
      if (extend(i + 1)) return true;
      assigned.pop_back();
      used.erase(cand);
      out.map.erase(x);
    }
    return false;
  };
  if (!extend(0)) throw DomainError("no isometric extension");
  return out;
}

namespace {

void require_fragment(const Building& X, const std::set<Chamber>& in,
                      const ApartmentFragment& F, const std::set<WElement>& ball) {
  std::set<WElement> keys;
  std::set<Chamber> image;
  for (const auto& [v, c] : F.embedding) {
    keys.insert(v);
    image.insert(c);
    if (!in.count(c)) throw DomainError("fragment leaves the ball");
  }
  if (keys != ball || image != std::set<Chamber>(F.chambers.begin(), F.chambers.end()) ||
      image.size() != keys.size()) {
    throw DomainError("fragment is not an embedded W-ball");
  }
  const auto& sys = X.system();
  for (const auto& [v, c] : F.embedding) {
    for (const auto& [w, d] : F.embedding) {
      if (X.w_distance(c, d) != multiply(sys, inverse(sys, v), w)) {
        throw DomainError("fragment does not preserve W-distance");
      }
    }
  }
  if (F.embedding.at(identity(sys)) != X.group().identity()) {
    throw DomainError("fragment does not contain the base chamber");
  }
}

std::set<Chamber> image_of(const BallAutomorphism& h, const std::vector<Chamber>& cs) {
  std::set<Chamber> out;
  for (const auto& c : cs) out.insert(h(c));
  return out;
}

std::set<Chamber> restrict_to(const std::set<Chamber>& s, const Clump& C) {
  std::set<Chamber> out;
  for (const auto& c : s) {
    if (C.contains(c)) out.insert(c);
  }
  return out;
}

}  // namespace

TransitivityWitness transitivity_witness(const Building& X, const ApartmentFragment& a,
                                         const ApartmentFragment& b, int n) {
  const auto trace = ball_by_unfolding(X, n);
  const Clump& Y = trace.clumps.back();
  const std::set<Chamber> in(Y.chambers().begin(), Y.chambers().end());
  std::set<WElement> ball;
  for (const auto& c : Y.chambers()) ball.insert(projection_to_W(X.group(), c));
  require_fragment(X, in, a, ball);
  require_fragment(X, in, b, ball);

  const std::set<Chamber> target(b.chambers.begin(), b.chambers.end());
  TransitivityWitness W{identity_automorphism(Y), {}};
  for (std::size_t r = 1; r < trace.clumps.size(); ++r) {
    const Clump& C = trace.clumps[r];
    const auto have = restrict_to(image_of(W.h, a.chambers), C);
    const auto want = restrict_to(target, C);
    if (have == want) continue;
    const Clump& prev = trace.clumps[r - 1];
    const Side& K = trace.sides[r - 1];
    const SheetPartition sp = sheets(prev, K);
    std::set<int> from;
    std::set<int> to;
    for (const auto& c : have) {
      if (!prev.contains(c)) from.insert(sp.sheet_of.at(c));
    }
    for (const auto& c : want) {
      if (!prev.contains(c)) to.insert(sp.sheet_of.at(c));
    }
    if (from.size() != 1 || to.size() != 1) {
      throw InternalError("apartment meets the new chambers in more than one sheet");
    }
    const auto swap = sheet_swap(prev, K, *from.begin(), *to.begin());
    W.h = compose(extend_isometry(Y, swap), W.h);
    W.steps.push_back(r - 1);
    if (restrict_to(image_of(W.h, a.chambers), C) != want) {
      throw InternalError("sheet swap did not align the apartments");
    }
  }
  if (image_of(W.h, a.chambers) != target || W.h(X.group().identity()) != X.group().identity() ||
      !check_automorphism(Y, W.h).empty()) {
    throw VerificationError("transitivity witness fails its final check");
  }
  return W;
}

}  // namespace rab
