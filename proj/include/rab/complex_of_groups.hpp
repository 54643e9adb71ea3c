#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rab/clump.hpp"

namespace rab {

struct ScwolEdge {
  int from = 0;  // i(a), the vertex of smaller type
  int to = 0;    // t(a)
};

// A composable pair (a, b) with i(a) = t(b), and its composite ab.
struct Composition {
  int a = 0;
  int b = 0;
  int ab = 0;
};

class Scwol {
 public:
  int add_vertex(std::string label);
  int add_edge(int from, int to);
  void add_composition(int a, int b, int ab);

  int vertex_count() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int v) const { return labels_[v]; }
  const std::vector<ScwolEdge>& edges() const { return edges_; }
  const std::vector<Composition>& compositions() const { return comps_; }
  const std::vector<int>& out_edges(int v) const { return out_[v]; }
  const std::vector<int>& in_edges(int v) const { return in_[v]; }
  // Index into compositions() of (a, b), or -1.
  int composition(int a, int b) const;

  // No loops, composites have the right endpoints, and composition is
  // associative wherever both sides are defined.
  std::vector<std::string> check_axioms() const;

 private:
  std::vector<std::string> labels_;
  std::vector<ScwolEdge> edges_;
  std::vector<Composition> comps_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::unordered_map<std::uint64_t, int> comp_index_;
};

// The scwol of faces meeting a clump, edges oriented by type inclusion.
struct FaceScwol {
  Scwol scwol;
  std::vector<Face> faces;  // vertex index -> face, in Face order
  std::unordered_map<Face, int> index;
  std::unordered_map<std::uint64_t, int> edge_index;

  int vertex(const Face& f) const;  // -1 if absent
  int edge(int from, int to) const;  // -1 if absent
};

FaceScwol scwol_of(const Clump& C);

// Finite group G_S x| H in which every local group we build lives: H acts on
// the exponent vectors of G_S by permuting generators.
struct AmbientElement {
  DirectProductElement g;
  int h = 0;
  friend auto operator<=>(const AmbientElement&, const AmbientElement&) = default;
};

class AmbientGroup {
 public:
  // H trivial.
  explicit AmbientGroup(const GraphProduct& params);
  // perms[h][s] is the image of generator s; mul[h][k] the index of hk.
  AmbientGroup(const GraphProduct& params, std::vector<std::vector<int>> perms,
               std::vector<std::vector<int>> mul);

  const GraphProduct& params() const { return params_; }
  int h_count() const { return static_cast<int>(perms_.size()); }
  const std::vector<int>& perm(int h) const { return perms_[h]; }
  int h_multiply(int h, int k) const { return mul_[h][k]; }
  int h_inverse(int h) const { return inv_[h]; }

  AmbientElement identity() const;
  AmbientElement embed(const DirectProductElement& g) const { return {g, 0}; }
  AmbientElement of_h(int h) const { return {params_.zero(), h}; }
  DirectProductElement act(int h, const DirectProductElement& g) const;
  AmbientElement multiply(const AmbientElement& a, const AmbientElement& b) const;
  AmbientElement inverse(const AmbientElement& a) const;
  // c x c^-1
  AmbientElement conjugate(const AmbientElement& c, const AmbientElement& x) const;

 private:
  GraphProduct params_;
  std::vector<std::vector<int>> perms_;
  std::vector<std::vector<int>> mul_;
  std::vector<int> inv_;
};

// G_R x| Stab: the exponent vectors supported on R, extended by a set of
// elements of H that preserve R.
struct LocalGroup {
  TypeSet components = 0;
  std::vector<int> stabilizer{0};
};

// Complex of finite groups over a scwol. Monomorphisms are conjugations
// psi_a(x) = c_a x c_a^-1 inside the ambient group; twists are elements of
// the ambient group. The canonical complexes of clumps have every c_a and
// every twist trivial.
struct ComplexOfGroups {
  Scwol scwol;
  std::shared_ptr<const AmbientGroup> ambient;
  std::vector<LocalGroup> local;
  std::vector<AmbientElement> psi;    // per edge
  std::vector<AmbientElement> twist;  // per composition

  TypeSet local_type(int v) const { return local[v].components; }
  bool is_simple() const;
  std::size_t order(int v) const;
  std::vector<AmbientElement> elements(int v) const;
  bool contains(int v, const AmbientElement& x) const;
  AmbientElement apply_psi(int edge, const AmbientElement& x) const;

  // Complex-of-groups axioms: each psi_a lands in G_{t(a)}, twisted
  // compatibility, cocycle condition, plus the scwol axioms.
  std::vector<std::string> check_axioms() const;
};

// Boundary type of every vertex of scwol_of(C).
std::vector<TypeSet> boundary_types(const Clump& C, const FaceScwol& Y);

ComplexOfGroups canonical_cog(const Clump& C, const FaceScwol& Y);
ComplexOfGroups canonical_cog(const Clump& C);

struct LocalDevelopment {
  Face sigma;
  TypeSet boundary_type = 0;
  std::size_t clump_chambers = 0;        // chambers of C containing sigma
  std::size_t development_chambers = 0;  // |G_bt| copies of those
  std::vector<std::size_t> link_sizes;   // one vertex set per t in type
  bool is_join = false;
  bool complete = false;                 // join with sizes (q_t)
};

// Only vertices of maximal spherical type are supported.
LocalDevelopment local_development(const Clump& C, const Face& sigma);

struct AdmissibilityReport {
  bool admissible = true;
  std::vector<LocalDevelopment> vertices;  // all maximal-type vertices
  std::vector<Face> failures;
  // Vertices where "some mirror" and "every mirror" boundary types differ.
  std::vector<std::pair<Face, std::pair<TypeSet, TypeSet>>> boundary_type_mismatches;
  // Maximal vertices breaking #chambers = prod_{t not in bt} q_t.
  std::vector<Face> chamber_count_violations;
};

AdmissibilityReport is_admissible(const Clump& C);

struct Presentation {
  std::vector<std::string> generators;
  // Relators as words of (generator, exponent) pairs.
  std::vector<std::vector<std::pair<int, int>>> relators;
  std::string to_string() const;
};

// Direct limit of the local groups of canonical_cog(C) along the edge
// inclusions. Assumes the scwol is simply connected.
Presentation presentation(const Clump& C);

}  // namespace rab
