#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rab/complex_of_groups.hpp"

namespace rab {

// lambda: edges of scwol_of(C_r) -> G_S, built along a sequence of sides.
struct EdgeLabeling {
  FaceScwol scwol;
  std::vector<DirectProductElement> label;  // per edge
  std::vector<Side> provenance;
};

EdgeLabeling label_initial(const Clump& Y0);
EdgeLabeling label_unfold(const EdgeLabeling& prev, const Clump& C_prev, const Side& K);
// One labeling per clump of the trace.
std::vector<EdgeLabeling> label_trace(const UnfoldingTrace& trace);

// One (sigma, b) pair: sigma a vertex of the source, b an edge of the target
// with t(b) = f(sigma).
struct FiberVerdict {
  int vertex = 0;
  int base_edge = 0;
  bool ok = false;
  friend bool operator==(const FiberVerdict&, const FiberVerdict&) = default;
};

struct LabelingReport {
  std::vector<int> support_failures;      // edges
  std::vector<int> composition_failures;  // compositions
  std::vector<FiberVerdict> fibers;       // distinct-projection criterion
  bool ok() const;
};

LabelingReport verify_labeling(const Clump& C, const EdgeLabeling& L);

// Copies one fiber label's critical projection onto another's at a (sigma, b)
// with at least two fiber edges. Returns nullopt if there is no such pair.
struct InjectedFault {
  EdgeLabeling labeling;
  int vertex = 0;
  int base_edge = 0;
};
std::optional<InjectedFault> inject_fault(const Clump& C, const EdgeLabeling& L,
                                          std::uint64_t seed);

// Phi: G(Y) -> H(Z) over f. The source has trivial H and is embedded in the
// target's ambient group; phi_sigma(x) = d_sigma x d_sigma^-1.
struct Morphism {
  std::shared_ptr<const ComplexOfGroups> source;
  std::shared_ptr<const ComplexOfGroups> target;
  std::vector<int> vertex_map;
  std::vector<int> edge_map;
  std::vector<AmbientElement> local_conj;    // per source vertex
  std::vector<AmbientElement> edge_element;  // per source edge

  AmbientElement local_map(int v, const AmbientElement& x) const;
};

struct CoveringReport {
  std::vector<std::string> problems;          // morphism axioms, injectivity
  std::vector<FiberVerdict> fibers;           // brute-force coset bijection
  std::vector<std::size_t> sheets_at;         // per target vertex
  std::size_t sheet_count = 0;                // 0 if not vertex-independent
  bool ok() const;
};

CoveringReport verify_covering(const Morphism& m);

struct Covering {
  Morphism morphism;
  CoveringReport report;
  std::size_t sheet_count() const { return report.sheet_count; }
};

// The morphism underlying build_covering, without verification.
Morphism labeling_morphism(const Clump& C, const EdgeLabeling& L);
// G_X(C_r) -> G_X(Y_0) with inclusions as local maps and phi(a) = lambda(a).
// Throws VerificationError naming the first failing (sigma, b).
Covering build_covering(const Clump& C, const EdgeLabeling& L);
// [Gamma_0 : pi_1(G_X(C))], via the canonical labeling along C's trace.
std::size_t lattice_index(const Clump& C, const EdgeLabeling& L);

// Barycentric subdivision: vertices are chains of the scwol, with an edge
// from each chain to each of its proper nonempty subchains.
struct Subdivision {
  Scwol scwol;
  std::vector<std::vector<int>> chains;  // increasing along edges of Y
  std::map<std::vector<int>, int> index;
  int vertex(const std::vector<int>& chain) const;  // -1 if absent
  int edge(int from, int to) const;                 // -1 if absent
  std::unordered_map<std::uint64_t, int> edge_index;
};

Subdivision subdivide(const Scwol& Y);
// Requires a simple complex.
ComplexOfGroups subdivide(const ComplexOfGroups& G, const Subdivision& S);
Morphism subdivide(const Morphism& m, const Subdivision& source,
                   const Subdivision& target,
                   std::shared_ptr<const ComplexOfGroups> source_cog,
                   std::shared_ptr<const ComplexOfGroups> target_cog);

// second o first; the middle complex must have trivial H.
Morphism compose(const Morphism& first, const Morphism& second);

}  // namespace rab
