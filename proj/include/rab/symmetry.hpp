#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rab/covering.hpp"

namespace rab {

// A permutation of S preserving q and m.
struct TypePermutation {
  std::vector<int> image;

  int operator()(int s) const { return image[s]; }
  TypeSet apply(TypeSet T) const;
  bool is_identity() const;
  friend auto operator<=>(const TypePermutation&, const TypePermutation&) = default;
};

TypePermutation compose(const TypePermutation& a, const TypePermutation& b);  // a o b
// All permutations preserving q and m, identity first, in lexicographic order.
std::vector<TypePermutation> type_permutation_group(const GraphProduct& G);

// A chamber bijection of a clump realizing the type permutation pi.
struct BallAutomorphism {
  std::map<Chamber, Chamber> map;
  TypePermutation pi;

  const Chamber& operator()(const Chamber& c) const { return map.at(c); }
  bool is_identity() const;
  friend bool operator==(const BallAutomorphism&, const BallAutomorphism&) = default;
};

BallAutomorphism identity_automorphism(const Clump& C);
BallAutomorphism compose(const BallAutomorphism& a, const BallAutomorphism& b);  // a o b
BallAutomorphism inverse(const BallAutomorphism& h);
// g -> pi(g); DomainError if C is not pi-invariant.
BallAutomorphism type_automorphism(const Clump& C, const TypePermutation& pi);
// h(sigma) = face(h(phi), pi(type)) for a chamber phi of C in sigma.
Face image(const Clump& C, const BallAutomorphism& h, const Face& sigma);
// Empty if h is a bijection of C carrying faces to faces and sides to sides.
std::vector<std::string> check_automorphism(const Clump& C, const BallAutomorphism& h);

// G_S x| H with H a list of type permutations closed under composition,
// identity first.
std::shared_ptr<const AmbientGroup> permutation_ambient(
    const GraphProduct& G, const std::vector<TypePermutation>& group);

// The simple automorphism of G_X(C) induced by h: local maps g_t -> g_{pi(t)}.
// Throws DomainError if h does not carry sides to sides and
// VerificationError if the morphism axioms fail.
Morphism extend_action(const Clump& C, const BallAutomorphism& h);
// Phi^h o Phi^k == Phi^{hk} on vertices and local groups.
bool check_composition(const Clump& C, const BallAutomorphism& h, const BallAutomorphism& k);

struct Quotient {
  Subdivision subdivision;                       // of scwol_of(C)
  std::vector<int> orbit_of;                     // chain -> vertex of Z
  std::vector<int> representative;               // vertex of Z -> least chain
  std::shared_ptr<const ComplexOfGroups> cover;  // subdivided G_X(C)
  std::shared_ptr<const ComplexOfGroups> quotient;
  Morphism covering;
  CoveringReport report;
};

// H(Z) for a finite group H of automorphisms of C (identity first), and the
// covering G_X(C)' -> H(Z). Throws VerificationError if it does not verify.
Quotient quotient_cog(const Clump& C, const std::vector<BallAutomorphism>& H);

// ---- discreteness ----------------------------------------------------------

// Automorphisms of the nerve (the flag complex of the commuting graph).
std::vector<TypePermutation> nerve_automorphisms(const CoxeterSystem& sys,
                                                 int cap = 10);
// Rigid: only the identity fixes the closed star of any vertex pointwise.
bool is_rigid(const CoxeterSystem& sys, int cap = 10);

enum class DiscretenessCase { finite, one, two, three };

struct DiscretenessVerdict {
  DiscretenessCase kind = DiscretenessCase::finite;
  bool g0_discrete = true;
  bool g_discrete = true;
  bool nerve_rigid = true;
  std::string to_string() const;
};

DiscretenessVerdict classify_discreteness(const GraphProduct& G);

// ---- apartments and strong transitivity ------------------------------------

// Image of a W-distance preserving embedding of the W-ball projection(Y_n)
// into Y_n fixing the base chamber.
struct ApartmentFragment {
  std::vector<Chamber> chambers;              // sorted
  std::map<WElement, Chamber> embedding;
};

std::vector<ApartmentFragment> apartments_through_base(const Building& X, int n,
                                                       std::size_t cap = 100000);

// Exchanges sheets i and j of U_K(C_prev) along the mirrors of K, fixing
// C_prev pointwise.
BallAutomorphism sheet_swap(const Clump& C_prev, const Side& K, int i, int j);

// Extends h, an automorphism of a subclump, to a W-distance preserving
// bijection of C. Throws DomainError if there is none.
BallAutomorphism extend_isometry(const Clump& C, const BallAutomorphism& h);

struct TransitivityWitness {
  BallAutomorphism h;                 // automorphism of Y_n
  std::vector<std::size_t> steps;     // trace steps where a swap was applied
};

TransitivityWitness transitivity_witness(const Building& X, const ApartmentFragment& a,
                                         const ApartmentFragment& b, int n);

}  // namespace rab
