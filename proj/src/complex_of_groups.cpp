#include "rab/complex_of_groups.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "rab/error.hpp"

namespace rab {

namespace {

std::uint64_t pair_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

// All exponent vectors supported on R.
std::vector<DirectProductElement> elements_on(const GraphProduct& G, TypeSet R) {
  std::vector<DirectProductElement> out{G.zero()};
  for (int t : members(R)) {
    std::vector<DirectProductElement> next;
    for (const auto& g : out) {
      for (int e = 0; e < G.q(t); ++e) {
        DirectProductElement x = g;
        x.c[t] = static_cast<std::uint8_t>(e);
        next.push_back(std::move(x));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

// ---- Scwol ---------------------------------------------------------------

int Scwol::add_vertex(std::string label) {
  labels_.push_back(std::move(label));
  out_.emplace_back();
  in_.emplace_back();
  return vertex_count() - 1;
}

int Scwol::add_edge(int from, int to) {
  if (from == to) throw InternalError("scwol edge would be a loop");
  edges_.push_back(ScwolEdge{from, to});
  const int a = static_cast<int>(edges_.size()) - 1;
  out_[from].push_back(a);
  in_[to].push_back(a);
  return a;
}

void Scwol::add_composition(int a, int b, int ab) {
  comp_index_.emplace(pair_key(a, b), static_cast<int>(comps_.size()));
  comps_.push_back(Composition{a, b, ab});
}

int Scwol::composition(int a, int b) const {
  auto it = comp_index_.find(pair_key(a, b));
  return it == comp_index_.end() ? -1 : it->second;
}

std::vector<std::string> Scwol::check_axioms() const {
  std::vector<std::string> problems;
  for (std::size_t a = 0; a < edges_.size(); ++a) {
    if (edges_[a].from == edges_[a].to) {
      problems.push_back("edge " + std::to_string(a) + " is a loop");
    }
  }
  for (const auto& c : comps_) {
    const auto& A = edges_[c.a];
    const auto& B = edges_[c.b];
    const auto& AB = edges_[c.ab];
    if (A.from != B.to || AB.from != B.from || AB.to != A.to) {
      problems.push_back("composite with wrong endpoints");
    }
  }
  for (int v = 0; v < vertex_count(); ++v) {
    for (int b : in_[v]) {
      for (int a : out_[v]) {
        if (composition(a, b) < 0) problems.push_back("missing composite");
      }
    }
  }
  for (const auto& bc : comps_) {
    for (int a : out_[edges_[bc.a].to]) {
      const int ab = composition(a, bc.a);
      if (ab < 0) continue;
      const int left = composition(comps_[ab].ab, bc.b);
      const int right = composition(a, bc.ab);
      if (left < 0 || right < 0 || comps_[left].ab != comps_[right].ab) {
        problems.push_back("composition is not associative");
      }
    }
  }
  return problems;
}

int FaceScwol::vertex(const Face& f) const {
  auto it = index.find(f);
  return it == index.end() ? -1 : it->second;
}

int FaceScwol::edge(int from, int to) const {
  auto it = edge_index.find(pair_key(from, to));
  return it == edge_index.end() ? -1 : it->second;
}

FaceScwol scwol_of(const Clump& C) {
  const auto& X = C.building();
  const auto& subsets = X.spherical().subsets;
  const std::size_t n = subsets.size();
  std::vector<std::pair<std::size_t, std::size_t>> below;  // T < T'
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && is_subset(subsets[i], subsets[j])) below.emplace_back(i, j);
    }
  }

  std::vector<std::vector<Face>> faces_of;
  faces_of.reserve(C.size());
  std::set<Face> all;
  for (const auto& c : C.chambers()) {
    std::vector<Face> fs;
    fs.reserve(n);
    for (TypeSet T : subsets) fs.push_back(X.face(c, T));
    all.insert(fs.begin(), fs.end());
    faces_of.push_back(std::move(fs));
  }

  FaceScwol Y;
  Y.faces.assign(all.begin(), all.end());
  for (std::size_t v = 0; v < Y.faces.size(); ++v) {
    Y.index.emplace(Y.faces[v], static_cast<int>(v));
    Y.scwol.add_vertex(to_string(X.system(), Y.faces[v]));
  }

  std::set<std::pair<int, int>> edge_set;
  std::vector<std::vector<int>> local_vertex(faces_of.size());
  for (std::size_t k = 0; k < faces_of.size(); ++k) {
    for (const auto& f : faces_of[k]) local_vertex[k].push_back(Y.index.at(f));
    for (auto [i, j] : below) edge_set.emplace(local_vertex[k][i], local_vertex[k][j]);
  }
  for (auto [from, to] : edge_set) {
    Y.edge_index.emplace(pair_key(from, to), Y.scwol.add_edge(from, to));
  }

  std::set<std::pair<int, int>> comp_set;
  for (std::size_t k = 0; k < faces_of.size(); ++k) {
    const auto& lv = local_vertex[k];
    for (auto [i, j] : below) {
      for (auto [j2, l] : below) {
        if (j2 != j) continue;
        comp_set.emplace(Y.edge(lv[j], lv[l]), Y.edge(lv[i], lv[j]));
      }
    }
  }
  for (auto [a, b] : comp_set) {
    const auto& A = Y.scwol.edges()[a];
    const auto& B = Y.scwol.edges()[b];
    Y.scwol.add_composition(a, b, Y.edge(B.from, A.to));
  }
  return Y;
}

// ---- ambient group ---------------------------------------------------------

AmbientGroup::AmbientGroup(const GraphProduct& params)
    : AmbientGroup(params, {[&] {
                     std::vector<int> id(static_cast<std::size_t>(params.rank()));
                     std::iota(id.begin(), id.end(), 0);
                     return id;
                   }()},
                   {{0}}) {}

AmbientGroup::AmbientGroup(const GraphProduct& params,
                           std::vector<std::vector<int>> perms,
                           std::vector<std::vector<int>> mul)
    : params_(params), perms_(std::move(perms)), mul_(std::move(mul)) {
  const int n = h_count();
  if (n == 0 || static_cast<int>(mul_.size()) != n) {
    throw InternalError("ambient group: bad multiplication table");
  }
  inv_.assign(static_cast<std::size_t>(n), -1);
  for (int h = 0; h < n; ++h) {
    if (mul_[0][h] != h || mul_[h][0] != h) {
      throw InternalError("ambient group: index 0 must be the identity");
    }
    for (int k = 0; k < n; ++k) {
      if (mul_[h][k] == 0) inv_[h] = k;
      for (int s = 0; s < params_.rank(); ++s) {
        if (perms_[mul_[h][k]][s] != perms_[h][perms_[k][s]]) {
          throw InternalError("ambient group: action is not a homomorphism");
        }
      }
    }
    for (int s = 0; s < params_.rank(); ++s) {
      if (params_.q(perms_[h][s]) != params_.q(s)) {
        throw InternalError("ambient group: permutation does not preserve q");
      }
    }
    if (inv_[h] < 0) throw InternalError("ambient group: missing inverse");
  }
}

AmbientElement AmbientGroup::identity() const { return {params_.zero(), 0}; }

DirectProductElement AmbientGroup::act(int h, const DirectProductElement& g) const {
  if (h == 0) return g;
  DirectProductElement out = params_.zero();
  for (int s = 0; s < params_.rank(); ++s) out.c[perms_[h][s]] = g.c[s];
  return out;
}

AmbientElement AmbientGroup::multiply(const AmbientElement& a,
                                      const AmbientElement& b) const {
  return {ds_multiply(params_, a.g, act(a.h, b.g)), mul_[a.h][b.h]};
}

AmbientElement AmbientGroup::inverse(const AmbientElement& a) const {
  const int hi = inv_[a.h];
  return {act(hi, ds_inverse(params_, a.g)), hi};
}

AmbientElement AmbientGroup::conjugate(const AmbientElement& c,
                                       const AmbientElement& x) const {
  return multiply(multiply(c, x), inverse(c));
}

// ---- complexes of groups ---------------------------------------------------

bool ComplexOfGroups::is_simple() const {
  const auto id = ambient->identity();
  return std::all_of(twist.begin(), twist.end(),
                     [&](const AmbientElement& g) { return g == id; });
}

std::size_t ComplexOfGroups::order(int v) const {
  return ambient->params().order(local[v].components) * local[v].stabilizer.size();
}

std::vector<AmbientElement> ComplexOfGroups::elements(int v) const {
  std::vector<AmbientElement> out;
  const auto gs = elements_on(ambient->params(), local[v].components);
  for (int h : local[v].stabilizer) {
    for (const auto& g : gs) out.push_back({g, h});
  }
  return out;
}

bool ComplexOfGroups::contains(int v, const AmbientElement& x) const {
  if (!is_subset(x.g.support(), local[v].components)) return false;
  const auto& st = local[v].stabilizer;
  return std::find(st.begin(), st.end(), x.h) != st.end();
}

AmbientElement ComplexOfGroups::apply_psi(int edge, const AmbientElement& x) const {
  return ambient->conjugate(psi[edge], x);
}

std::vector<std::string> ComplexOfGroups::check_axioms() const {
  std::vector<std::string> problems = scwol.check_axioms();
  const auto& A = *ambient;
  for (int v = 0; v < scwol.vertex_count(); ++v) {
    for (int h : local[v].stabilizer) {
      for (int s : members(local[v].components)) {
        if (!rab::contains(local[v].components, A.perm(h)[s])) {
          problems.push_back("stabilizer does not preserve local group at " +
                             scwol.label(v));
        }
      }
    }
  }
  for (std::size_t a = 0; a < scwol.edges().size(); ++a) {
    const auto& e = scwol.edges()[a];
    for (const auto& x : elements(e.from)) {
      if (!contains(e.to, apply_psi(static_cast<int>(a), x))) {
        problems.push_back("psi does not land in the local group at " +
                           scwol.label(e.to));
        break;
      }
    }
  }
  for (std::size_t k = 0; k < scwol.compositions().size(); ++k) {
    const auto& c = scwol.compositions()[k];
    if (!contains(scwol.edges()[c.a].to, twist[k])) {
      problems.push_back("twist outside its local group");
    }
    for (const auto& x : elements(scwol.edges()[c.b].from)) {
      if (A.conjugate(twist[k], apply_psi(c.ab, x)) !=
          apply_psi(c.a, apply_psi(c.b, x))) {
        problems.push_back("twisted compatibility fails");
        break;
      }
    }
  }
  // psi_a(g_{b,c}) g_{a,bc} = g_{a,b} g_{ab,c}
  for (std::size_t k = 0; k < scwol.compositions().size(); ++k) {
    const auto& bc = scwol.compositions()[k];
    for (int a : scwol.out_edges(scwol.edges()[bc.a].to)) {
      const int ab = scwol.composition(a, bc.a);
      const int a_bc = scwol.composition(a, bc.ab);
      if (ab < 0 || a_bc < 0) continue;
      const int ab_c = scwol.composition(scwol.compositions()[ab].ab, bc.b);
      if (ab_c < 0) continue;
      const auto lhs = A.multiply(apply_psi(a, twist[k]), twist[a_bc]);
      const auto rhs = A.multiply(twist[ab], twist[ab_c]);
      if (lhs != rhs) problems.push_back("cocycle condition fails");
    }
  }
  return problems;
}

std::vector<TypeSet> boundary_types(const Clump& C, const FaceScwol& Y) {
  std::vector<TypeSet> out;
  out.reserve(Y.faces.size());
  for (const auto& f : Y.faces) out.push_back(boundary_type(C, f));
  return out;
}

ComplexOfGroups canonical_cog(const Clump& C, const FaceScwol& Y) {
  ComplexOfGroups G;
  G.scwol = Y.scwol;
  G.ambient = std::make_shared<AmbientGroup>(C.building().group());
  for (TypeSet bt : boundary_types(C, Y)) G.local.push_back(LocalGroup{bt, {0}});
  G.psi.assign(Y.scwol.edges().size(), G.ambient->identity());
  G.twist.assign(Y.scwol.compositions().size(), G.ambient->identity());
  return G;
}

ComplexOfGroups canonical_cog(const Clump& C) {
  return canonical_cog(C, scwol_of(C));
}

// ---- local developments and admissibility -----------------------------------

LocalDevelopment local_development(const Clump& C, const Face& sigma) {
  const auto& X = C.building();
  const auto& maxes = X.spherical().maximal;
  if (std::find(maxes.begin(), maxes.end(), sigma.type) == maxes.end()) {
    throw DomainError("local development is only computed at maximal vertices");
  }
  LocalDevelopment D;
  D.sigma = sigma;
  D.boundary_type = boundary_type(C, sigma);
  const auto A = C.chambers_in(sigma);
  const auto copies = elements_on(X.group(), D.boundary_type);
  D.clump_chambers = A.size();
  D.development_chambers = A.size() * copies.size();

  // A chamber (g, phi) of the development has, for each t in T, a face of
  // type T - {t}: the face of phi, up to the local group of that face.
  const auto ts = members(sigma.type);
  std::vector<std::vector<std::pair<Face, DirectProductElement>>> keys(ts.size());
  std::vector<std::set<std::pair<Face, DirectProductElement>>> classes(ts.size());
  std::vector<TypeSet> face_bt;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::map<Face, TypeSet> bt_cache;
    for (const auto& phi : A) {
      const Face f = X.face(phi, sigma.type & ~singleton(ts[i]));
      auto it = bt_cache.find(f);
      if (it == bt_cache.end()) it = bt_cache.emplace(f, boundary_type(C, f)).first;
      for (const auto& g : copies) {
        auto key = std::pair{f, project_components(g, D.boundary_type & ~it->second)};
        classes[i].insert(key);
        keys[i].push_back(std::move(key));
      }
    }
  }
  std::size_t product = 1;
  D.complete = true;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    D.link_sizes.push_back(classes[i].size());
    product *= classes[i].size();
    if (classes[i].size() != static_cast<std::size_t>(X.q(ts[i]))) D.complete = false;
  }
  std::set<std::vector<std::pair<Face, DirectProductElement>>> tuples;
  for (std::size_t k = 0; k < D.development_chambers; ++k) {
    std::vector<std::pair<Face, DirectProductElement>> tuple;
    for (std::size_t i = 0; i < ts.size(); ++i) tuple.push_back(keys[i][k]);
    tuples.insert(std::move(tuple));
  }
  D.is_join = tuples.size() == D.development_chambers && product == D.development_chambers;
  D.complete = D.complete && D.is_join;
  return D;
}

AdmissibilityReport is_admissible(const Clump& C) {
  const auto& X = C.building();
  AdmissibilityReport R;
  std::set<Face> maximal;
  std::set<Face> every;
  for (const auto& c : C.chambers()) {
    for (TypeSet T : X.spherical().maximal) maximal.insert(X.face(c, T));
    for (TypeSet T : X.spherical().subsets) every.insert(X.face(c, T));
  }
  for (const auto& sigma : maximal) {
    auto D = local_development(C, sigma);
    std::size_t expected = 1;
    for (int t : members(sigma.type & ~D.boundary_type)) {
      expected *= static_cast<std::size_t>(X.q(t));
    }
    if (D.clump_chambers != expected) R.chamber_count_violations.push_back(sigma);
    if (!D.complete) {
      R.admissible = false;
      R.failures.push_back(sigma);
    }
    R.vertices.push_back(std::move(D));
  }
  for (const auto& sigma : every) {
    const TypeSet some = boundary_type(C, sigma);
    const TypeSet all = boundary_type_all(C, sigma);
    if (some != all) R.boundary_type_mismatches.push_back({sigma, {some, all}});
  }
  return R;
}

// ---- presentations ---------------------------------------------------------

std::string Presentation::to_string() const {
  std::string out = "<";
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (i) out += ", ";
    out += generators[i];
  }
  out += " | ";
  for (std::size_t r = 0; r < relators.size(); ++r) {
    if (r) out += ", ";
    const auto& w = relators[r];
    if (w.size() == 4 && w[2].second == -1 && w[3].second == -1) {
      out += "[" + generators[w[0].first] + "," + generators[w[1].first] + "]";
      continue;
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out += ' ';
      out += generators[w[i].first];
      if (w[i].second != 1) out += "^" + std::to_string(w[i].second);
    }
  }
  return out + ">";
}

Presentation presentation(const Clump& C) {
  const auto& X = C.building();
  const FaceScwol Y = scwol_of(C);
  const auto bt = boundary_types(C, Y);
  // Generator slots (vertex, s); edges identify a slot with its image.
  std::map<std::pair<int, int>, std::size_t> slot;
  std::vector<std::pair<int, int>> slots;
  for (int v = 0; v < Y.scwol.vertex_count(); ++v) {
    for (int s : members(bt[v])) {
      slot.emplace(std::pair{v, s}, slots.size());
      slots.emplace_back(v, s);
    }
  }
  std::vector<std::size_t> parent(slots.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : Y.scwol.edges()) {
    for (int s : members(bt[e.from])) {
      const std::size_t a = find(slot.at({e.from, s}));
      const std::size_t b = find(slot.at({e.to, s}));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::map<std::size_t, int> gen_of_root;
  std::vector<int> gen_type;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const std::size_t r = find(i);
    if (!gen_of_root.count(r)) {
      gen_of_root.emplace(r, static_cast<int>(gen_type.size()));
      gen_type.push_back(slots[i].second);
    }
  }
  Presentation P;
  std::map<int, int> seen_type;
  for (int s : gen_type) ++seen_type[s];
  std::map<int, int> used;
  for (int s : gen_type) {
    std::string name = X.system().name(s);
    if (seen_type[s] > 1) name += "_" + std::to_string(++used[s]);
    P.generators.push_back(name);
  }
  auto gen = [&](int v, int s) { return gen_of_root.at(find(slot.at({v, s}))); };
  std::set<std::vector<std::pair<int, int>>> seen;
  for (std::size_t g = 0; g < gen_type.size(); ++g) {
    std::vector<std::pair<int, int>> w{{static_cast<int>(g), X.q(gen_type[g])}};
    if (seen.insert(w).second) P.relators.push_back(w);
  }
  for (int v = 0; v < Y.scwol.vertex_count(); ++v) {
    const auto ss = members(bt[v]);
    for (std::size_t i = 0; i < ss.size(); ++i) {
      for (std::size_t j = i + 1; j < ss.size(); ++j) {
        const int a = gen(v, ss[i]);
        const int b = gen(v, ss[j]);
        std::vector<std::pair<int, int>> w{{a, 1}, {b, 1}, {a, -1}, {b, -1}};
        if (seen.insert(w).second) P.relators.push_back(w);
      }
    }
  }
  return P;
}

}  // namespace rab
