#include "rab/covering.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "rab/error.hpp"

namespace rab {

namespace {

std::uint64_t pair_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

int y_edge(const FaceScwol& Y, const Face& from, const Face& to) {
  const int i = Y.vertex(from);
  const int t = Y.vertex(to);
  return (i < 0 || t < 0) ? -1 : Y.edge(i, t);
}

// Edges of any scwol, looked up by endpoints.
std::unordered_map<std::uint64_t, int> edge_lookup(const Scwol& Y) {
  std::unordered_map<std::uint64_t, int> out;
  for (std::size_t a = 0; a < Y.edges().size(); ++a) {
    out.emplace(pair_key(Y.edges()[a].from, Y.edges()[a].to), static_cast<int>(a));
  }
  return out;
}

struct Base {
  Clump Y0;
  FaceScwol scwol;
};

Base base_of(const Building& X) {
  Clump Y0 = ball(X, 0);
  FaceScwol Y = scwol_of(Y0);
  return {std::move(Y0), std::move(Y)};
}

// The Y_0 vertex and edge over each vertex and edge of Y.
void project_to_base(const FaceScwol& Y, const Building& X, const FaceScwol& base,
                     std::vector<int>& vmap, std::vector<int>& emap) {
  const auto one = X.group().identity();
  vmap.clear();
  emap.clear();
  for (const auto& f : Y.faces) vmap.push_back(base.vertex(Face{f.type, one}));
  for (const auto& e : Y.scwol.edges()) emap.push_back(base.edge(vmap[e.from], vmap[e.to]));
}

}  // namespace

// ---- labelings -------------------------------------------------------------

EdgeLabeling label_initial(const Clump& Y0) {
  EdgeLabeling L;
  L.scwol = scwol_of(Y0);
  L.label.assign(L.scwol.scwol.edges().size(), Y0.building().group().zero());
  return L;
}

EdgeLabeling label_unfold(const EdgeLabeling& prev, const Clump& C_prev, const Side& K) {
  const Building& X = C_prev.building();
  const int u = K.type;
  const Clump C = unfold(C_prev, K);
  const SheetPartition sp = sheets(C_prev, K);

  // g: u-component of the old edge from the chamber at K_u into its center.
  const Face& Ku = K.mirrors.front();
  const auto at_Ku = C_prev.chambers_in(Ku);
  if (at_Ku.size() != 1) throw InternalError("side mirror meets the clump twice");
  const int c = y_edge(prev.scwol, Face{0, at_Ku.front()}, Ku);
  if (c < 0) throw InternalError("labeling does not belong to this clump");
  const int g = prev.label[c].c[u];
  std::vector<std::uint8_t> values;
  for (int e = 0; e < X.q(u); ++e) {
    if (e != g) values.push_back(static_cast<std::uint8_t>(e));
  }
  if (values.size() != sp.blocks.size()) throw InternalError("sheet count mismatch");

  EdgeLabeling L;
  L.scwol = scwol_of(C);
  L.provenance = prev.provenance;
  L.provenance.push_back(K);
  const auto& edges = L.scwol.scwol.edges();
  L.label.reserve(edges.size());
  for (const auto& e : edges) {
    const Face& fi = L.scwol.faces[e.from];
    const Face& ft = L.scwol.faces[e.to];
    const int old = y_edge(prev.scwol, fi, ft);
    if (old >= 0) {
      L.label.push_back(prev.label[old]);
      continue;
    }
    std::optional<DirectProductElement> lifted;
    std::optional<int> sheet;
    for (const auto& phi : C.chambers_in(fi)) {
      if (C_prev.contains(phi)) throw InternalError("new edge in an old chamber");
      const auto back = C_prev.chambers_in(X.face(phi, singleton(u)));
      if (back.size() != 1) throw InternalError("new chamber has no unique lift");
      const int a = y_edge(prev.scwol, X.face(back.front(), fi.type),
                           X.face(back.front(), ft.type));
      if (a < 0) throw InternalError("lifted edge missing");
      if (lifted && *lifted != prev.label[a]) throw InternalError("lift is not unique");
      lifted = prev.label[a];
      const int j = sp.sheet_of.at(phi);
      if (sheet && *sheet != j) throw InternalError("sheet assignment is not constant");
      sheet = j;
    }
    DirectProductElement lambda = *lifted;
    if (on_side(X, K, ft)) {
      if (on_side(X, K, fi)) throw InternalError("new edge inside the side");
      lambda.c[u] = values[*sheet];
    }
    L.label.push_back(std::move(lambda));
  }
  return L;
}

std::vector<EdgeLabeling> label_trace(const UnfoldingTrace& trace) {
  std::vector<EdgeLabeling> out;
  out.push_back(label_initial(trace.clumps.front()));
  for (std::size_t i = 0; i < trace.sides.size(); ++i) {
    out.push_back(label_unfold(out.back(), trace.clumps[i], trace.sides[i]));
  }
  return out;
}

bool LabelingReport::ok() const {
  return support_failures.empty() && composition_failures.empty() &&
         std::all_of(fibers.begin(), fibers.end(), [](const auto& f) { return f.ok; });
}

namespace {

// For each (sigma, b): the fiber edges and the critical set T - (bt u U).
struct FiberSet {
  int vertex;
  int base_edge;
  std::vector<int> edges;
  TypeSet critical;
};

std::vector<FiberSet> fiber_sets(const Clump& C, const EdgeLabeling& L) {
  const Base base = base_of(C.building());
  std::vector<int> vmap;
  std::vector<int> emap;
  project_to_base(L.scwol, C.building(), base.scwol, vmap, emap);
  const auto bt = boundary_types(C, L.scwol);
  std::vector<FiberSet> out;
  const auto& Y = L.scwol.scwol;
  for (int v = 0; v < Y.vertex_count(); ++v) {
    const TypeSet T = L.scwol.faces[v].type;
    for (int b : base.scwol.scwol.in_edges(vmap[v])) {
      const TypeSet U = base.scwol.faces[base.scwol.scwol.edges()[b].from].type;
      FiberSet F{v, b, {}, T & ~(bt[v] | U)};
      for (int a : Y.in_edges(v)) {
        if (emap[a] == b) F.edges.push_back(a);
      }
      out.push_back(std::move(F));
    }
  }
  std::sort(out.begin(), out.end(), [](const FiberSet& x, const FiberSet& y) {
    return std::pair{x.vertex, x.base_edge} < std::pair{y.vertex, y.base_edge};
  });
  return out;
}

}  // namespace

LabelingReport verify_labeling(const Clump& C, const EdgeLabeling& L) {
  const auto& Y = L.scwol.scwol;
  if (L.label.size() != Y.edges().size()) throw InputError("labeling is not total");
  const auto& G = C.building().group();
  LabelingReport R;
  for (std::size_t a = 0; a < Y.edges().size(); ++a) {
    if (!is_subset(L.label[a].support(), L.scwol.faces[Y.edges()[a].to].type)) {
      R.support_failures.push_back(static_cast<int>(a));
    }
  }
  for (std::size_t k = 0; k < Y.compositions().size(); ++k) {
    const auto& c = Y.compositions()[k];
    if (L.label[c.ab] != ds_multiply(G, L.label[c.a], L.label[c.b])) {
      R.composition_failures.push_back(static_cast<int>(k));
    }
  }
  for (const auto& F : fiber_sets(C, L)) {
    std::set<DirectProductElement> seen;
    bool ok = true;
    for (int a : F.edges) {
      if (!seen.insert(project_components(L.label[a], F.critical)).second) ok = false;
    }
    R.fibers.push_back({F.vertex, F.base_edge, ok});
  }
  return R;
}

std::optional<InjectedFault> inject_fault(const Clump& C, const EdgeLabeling& L,
                                          std::uint64_t seed) {
  std::vector<FiberSet> candidates;
  for (auto& F : fiber_sets(C, L)) {
    if (F.edges.size() >= 2 && F.critical != 0) candidates.push_back(std::move(F));
  }
  if (candidates.empty()) return std::nullopt;
  std::mt19937_64 rng(seed);
  const auto& F = candidates[std::uniform_int_distribution<std::size_t>(
      0, candidates.size() - 1)(rng)];
  std::vector<int> pick = F.edges;
  std::shuffle(pick.begin(), pick.end(), rng);
  InjectedFault out{L, F.vertex, F.base_edge};
  auto& target = out.labeling.label[pick[1]];
  for (int s : members(F.critical)) target.c[s] = L.label[pick[0]].c[s];
  return out;
}

// ---- morphisms and coverings -----------------------------------------------

AmbientElement Morphism::local_map(int v, const AmbientElement& x) const {
  return target->ambient->conjugate(local_conj[v], {x.g, 0});
}

bool CoveringReport::ok() const {
  return problems.empty() && sheet_count > 0 &&
         std::all_of(fibers.begin(), fibers.end(), [](const auto& f) { return f.ok; });
}

CoveringReport verify_covering(const Morphism& m) {
  const auto& S = *m.source;
  const auto& T = *m.target;
  const auto& A = *T.ambient;
  const auto& SY = S.scwol;
  const auto& TY = T.scwol;
  CoveringReport R;
  auto fail = [&](std::string what) { R.problems.push_back(std::move(what)); };

  if (S.ambient->h_count() != 1) throw InputError("covering source must have trivial H");
  if (m.vertex_map.size() != static_cast<std::size_t>(SY.vertex_count()) ||
      m.edge_map.size() != SY.edges().size() ||
      m.local_conj.size() != m.vertex_map.size() ||
      m.edge_element.size() != m.edge_map.size()) {
    throw InputError("morphism data has the wrong shape");
  }

  // f is a nondegenerate morphism of scwols.
  for (std::size_t a = 0; a < SY.edges().size(); ++a) {
    const auto& e = SY.edges()[a];
    const auto& fe = TY.edges()[m.edge_map[a]];
    if (fe.from != m.vertex_map[e.from] || fe.to != m.vertex_map[e.to]) {
      fail("edge map does not commute with endpoints at " + SY.label(e.from));
    }
  }
  for (const auto& c : SY.compositions()) {
    const int k = TY.composition(m.edge_map[c.a], m.edge_map[c.b]);
    if (k < 0 || TY.compositions()[k].ab != m.edge_map[c.ab]) {
      fail("edge map does not respect composition");
    }
  }
  for (int v = 0; v < SY.vertex_count(); ++v) {
    std::vector<int> images;
    for (int a : SY.out_edges(v)) images.push_back(m.edge_map[a]);
    std::sort(images.begin(), images.end());
    std::vector<int> expected = TY.out_edges(m.vertex_map[v]);
    std::sort(expected.begin(), expected.end());
    if (images != expected) fail("edge map is degenerate at " + SY.label(v));
  }
  if (!R.problems.empty()) return R;

  // Local maps land in the target and are injective.
  for (int v = 0; v < SY.vertex_count(); ++v) {
    std::set<AmbientElement> image;
    for (const auto& x : S.elements(v)) {
      const auto y = m.local_map(v, x);
      if (!T.contains(m.vertex_map[v], y)) {
        fail("local map leaves the target group at " + SY.label(v));
        break;
      }
      image.insert(y);
    }
    if (image.size() != S.order(v)) fail("local map is not injective at " + SY.label(v));
  }
  // Ad(phi(a)) theta_{f(a)} phi_{i(a)} = phi_{t(a)} psi_a.
  for (std::size_t a = 0; a < SY.edges().size(); ++a) {
    const auto& e = SY.edges()[a];
    const int fa = m.edge_map[a];
    if (!T.contains(m.vertex_map[e.to], m.edge_element[a])) {
      fail("edge element outside the target group at " + SY.label(e.to));
    }
    for (const auto& x : S.elements(e.from)) {
      const auto lhs =
          A.conjugate(m.edge_element[a], T.apply_psi(fa, m.local_map(e.from, x)));
      const auto rhs = m.local_map(e.to, S.apply_psi(static_cast<int>(a), x));
      if (lhs != rhs) {
        fail("morphism square fails on edge " + SY.label(e.from) + " -> " +
             SY.label(e.to));
        break;
      }
    }
  }
  // phi(ab) = phi(a) theta_{f(a)}(phi(b)) h_{f(a),f(b)}.
  for (std::size_t k = 0; k < SY.compositions().size(); ++k) {
    const auto& c = SY.compositions()[k];
    if (S.twist[k] != S.ambient->identity()) throw InputError("source is not simple");
    const int fa = m.edge_map[c.a];
    const int tk = TY.composition(fa, m.edge_map[c.b]);
    const auto rhs = A.multiply(
        A.multiply(m.edge_element[c.a], T.apply_psi(fa, m.edge_element[c.b])),
        T.twist[tk]);
    if (m.edge_element[c.ab] != rhs) fail("edge elements are not multiplicative");
  }

  // Fiber-coset bijections.
  for (int v = 0; v < SY.vertex_count(); ++v) {
    const int tau = m.vertex_map[v];
    const auto domain = S.elements(v);
    for (int b : TY.in_edges(tau)) {
      std::vector<AmbientElement> theta_b;
      for (const auto& y : T.elements(TY.edges()[b].from)) {
        theta_b.push_back(T.apply_psi(b, y));
      }
      auto target_coset = [&](const AmbientElement& z) {
        AmbientElement best = A.multiply(z, theta_b.front());
        for (const auto& s : theta_b) best = std::min(best, A.multiply(z, s));
        return best;
      };
      bool ok = true;
      std::set<AmbientElement> images;
      std::size_t cosets = 0;
      for (int a : SY.in_edges(v)) {
        if (m.edge_map[a] != b) continue;
        std::vector<AmbientElement> sub;
        for (const auto& y : S.elements(SY.edges()[a].from)) {
          sub.push_back(S.apply_psi(a, y));
        }
        std::map<AmbientElement, AmbientElement> image_of;  // source coset -> image
        for (const auto& g : domain) {
          AmbientElement key = S.ambient->multiply(g, sub.front());
          for (const auto& s : sub) key = std::min(key, S.ambient->multiply(g, s));
          const auto img =
              target_coset(A.multiply(m.local_map(v, g), m.edge_element[a]));
          auto [it, fresh] = image_of.emplace(key, img);
          if (!fresh && it->second != img) ok = false;
        }
        for (const auto& [key, img] : image_of) {
          ++cosets;
          if (!images.insert(img).second) ok = false;
        }
      }
      std::set<AmbientElement> image_b(theta_b.begin(), theta_b.end());
      if (image_b.size() * cosets != T.order(tau)) ok = false;
      R.fibers.push_back({v, b, ok});
    }
  }

  // Sheets: sum over the fiber of [H_tau : phi_sigma(G_sigma)].
  R.sheets_at.assign(static_cast<std::size_t>(TY.vertex_count()), 0);
  for (int v = 0; v < SY.vertex_count(); ++v) {
    const int tau = m.vertex_map[v];
    if (T.order(tau) % S.order(v) != 0) fail("local index is not an integer");
    R.sheets_at[tau] += T.order(tau) / S.order(v);
  }
  const bool uniform = std::all_of(R.sheets_at.begin(), R.sheets_at.end(),
                                   [&](std::size_t n) { return n == R.sheets_at.front(); });
  R.sheet_count = uniform ? R.sheets_at.front() : 0;
  if (!uniform) fail("sheet count depends on the vertex");
  return R;
}

Morphism labeling_morphism(const Clump& C, const EdgeLabeling& L) {
  const Building& X = C.building();
  const Base base = base_of(X);
  Morphism m;
  m.source = std::make_shared<ComplexOfGroups>(canonical_cog(C, L.scwol));
  m.target = std::make_shared<ComplexOfGroups>(canonical_cog(base.Y0, base.scwol));
  project_to_base(L.scwol, X, base.scwol, m.vertex_map, m.edge_map);
  m.local_conj.assign(m.vertex_map.size(), m.target->ambient->identity());
  for (const auto& l : L.label) m.edge_element.push_back({l, 0});
  return m;
}

Covering build_covering(const Clump& C, const EdgeLabeling& L) {
  Covering cov{labeling_morphism(C, L), {}};
  cov.report = verify_covering(cov.morphism);
  const auto& Y = cov.morphism.source->scwol;
  for (const auto& f : cov.report.fibers) {
    if (!f.ok) {
      const auto& b = cov.morphism.target->scwol.edges()[f.base_edge];
      throw VerificationError("covering fails at vertex " + Y.label(f.vertex) +
                              " over edge " + cov.morphism.target->scwol.label(b.from) +
                              " -> " + cov.morphism.target->scwol.label(b.to));
    }
  }
  if (!cov.report.ok()) {
    throw VerificationError("covering fails: " + (cov.report.problems.empty()
                                                      ? std::string("no sheet count")
                                                      : cov.report.problems.front()));
  }
  return cov;
}

std::size_t lattice_index(const Clump& C, const EdgeLabeling& L) {
  return build_covering(C, L).sheet_count();
}

// ---- subdivision and composition -------------------------------------------

int Subdivision::vertex(const std::vector<int>& chain) const {
  auto it = index.find(chain);
  return it == index.end() ? -1 : it->second;
}

int Subdivision::edge(int from, int to) const {
  auto it = edge_index.find(pair_key(from, to));
  return it == edge_index.end() ? -1 : it->second;
}

Subdivision subdivide(const Scwol& Y) {
  Subdivision S;
  std::vector<std::vector<int>> stack;
  for (int v = 0; v < Y.vertex_count(); ++v) stack.push_back({v});
  while (!stack.empty()) {
    auto chain = std::move(stack.back());
    stack.pop_back();
    for (int a : Y.out_edges(chain.back())) {
      auto longer = chain;
      longer.push_back(Y.edges()[a].to);
      stack.push_back(std::move(longer));
    }
    S.chains.push_back(std::move(chain));
  }
  std::sort(S.chains.begin(), S.chains.end());
  for (std::size_t c = 0; c < S.chains.size(); ++c) {
    S.index.emplace(S.chains[c], static_cast<int>(c));
    std::string label;
    for (int v : S.chains[c]) label += (label.empty() ? "" : " < ") + Y.label(v);
    S.scwol.add_vertex(label);
  }
  auto subchains = [&](int c) {
    const auto& ch = S.chains[c];
    std::vector<int> out;
    const unsigned full = (1u << ch.size()) - 1;
    for (unsigned mask = 1; mask < full; ++mask) {
      std::vector<int> sub;
      for (std::size_t i = 0; i < ch.size(); ++i) {
        if (mask & (1u << i)) sub.push_back(ch[i]);
      }
      out.push_back(S.index.at(sub));
    }
    return out;
  };
  for (int c = 0; c < static_cast<int>(S.chains.size()); ++c) {
    for (int d : subchains(c)) S.edge_index.emplace(pair_key(c, d), S.scwol.add_edge(c, d));
  }
  for (int c = 0; c < static_cast<int>(S.chains.size()); ++c) {
    for (int d : subchains(c)) {
      for (int e : subchains(d)) {
        S.scwol.add_composition(S.edge(d, e), S.edge(c, d), S.edge(c, e));
      }
    }
  }
  return S;
}

ComplexOfGroups subdivide(const ComplexOfGroups& G, const Subdivision& S) {
  if (!G.is_simple()) throw InputError("only simple complexes are subdivided");
  const auto edges = edge_lookup(G.scwol);
  auto y_edge_of = [&](int from, int to) { return edges.at(pair_key(from, to)); };
  ComplexOfGroups out;
  out.scwol = S.scwol;
  out.ambient = G.ambient;
  for (const auto& chain : S.chains) out.local.push_back(G.local[chain.front()]);
  for (const auto& e : S.scwol.edges()) {
    const int m = S.chains[e.from].front();
    const int m2 = S.chains[e.to].front();
    out.psi.push_back(m == m2 ? G.ambient->identity() : G.psi[y_edge_of(m, m2)]);
  }
  out.twist.assign(S.scwol.compositions().size(), G.ambient->identity());
  return out;
}

Morphism subdivide(const Morphism& m, const Subdivision& source,
                   const Subdivision& target,
                   std::shared_ptr<const ComplexOfGroups> source_cog,
                   std::shared_ptr<const ComplexOfGroups> target_cog) {
  const auto edges = edge_lookup(m.source->scwol);
  Morphism out;
  out.source = std::move(source_cog);
  out.target = std::move(target_cog);
  for (const auto& chain : source.chains) {
    std::vector<int> image;
    for (int v : chain) image.push_back(m.vertex_map[v]);
    const int w = target.vertex(image);
    if (w < 0) throw InputError("vertex map does not send chains to chains");
    out.vertex_map.push_back(w);
    out.local_conj.push_back(m.local_conj[chain.front()]);
  }
  for (const auto& e : source.scwol.edges()) {
    out.edge_map.push_back(target.edge(out.vertex_map[e.from], out.vertex_map[e.to]));
    const int v = source.chains[e.from].front();
    const int w = source.chains[e.to].front();
    out.edge_element.push_back(v == w ? out.target->ambient->identity()
                                      : m.edge_element[edges.at(pair_key(v, w))]);
  }
  return out;
}

Morphism compose(const Morphism& first, const Morphism& second) {
  if (first.target->ambient->h_count() != 1) {
    throw InputError("composition through a complex with nontrivial H");
  }
  Morphism out;
  out.source = first.source;
  out.target = second.target;
  const auto& A = *second.target->ambient;
  for (std::size_t v = 0; v < first.vertex_map.size(); ++v) {
    const int mid = first.vertex_map[v];
    out.vertex_map.push_back(second.vertex_map[mid]);
    out.local_conj.push_back(A.multiply(second.local_conj[mid], {first.local_conj[v].g, 0}));
  }
  const auto& SY = first.source->scwol;
  for (std::size_t a = 0; a < first.edge_map.size(); ++a) {
    const int fa = first.edge_map[a];
    out.edge_map.push_back(second.edge_map[fa]);
    const int mid_to = first.vertex_map[SY.edges()[a].to];
    out.edge_element.push_back(A.multiply(
        second.local_map(mid_to, first.edge_element[a]), second.edge_element[fa]));
  }
  return out;
}

}  // namespace rab
