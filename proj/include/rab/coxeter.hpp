#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rab {

// Subsets of the generating set, as bitmasks over generator indices.
using TypeSet = std::uint32_t;
inline constexpr int kMaxRank = 16;

inline bool contains(TypeSet T, int s) { return (T >> s) & 1U; }
inline TypeSet singleton(int s) { return TypeSet{1} << s; }
inline bool is_subset(TypeSet A, TypeSet B) { return (A & ~B) == 0; }
std::vector<int> members(TypeSet T);
int cardinality(TypeSet T);

// A word over generator indices.
using Word = std::vector<int>;

// Right-angled Coxeter system: every pair of distinct generators either
// commutes (m = 2) or generates an infinite dihedral group (m = infinity).
class CoxeterSystem {
 public:
  CoxeterSystem() = default;
  CoxeterSystem(std::vector<std::string> names,
                const std::vector<std::pair<int, int>>& commuting_pairs);

  // Accepts a full Coxeter matrix with 0 meaning infinity; rejects any entry
  // that is not right-angled.
  static CoxeterSystem from_matrix(std::vector<std::string> names,
                                   const std::vector<std::vector<int>>& m);

  int rank() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int s) const { return names_.at(s); }
  int index_of(std::string_view name) const;

  bool commute(int s, int t) const { return contains(nbr_[s], t); }
  // 1 on the diagonal, 2 for commuting pairs, 0 for infinity.
  int m(int s, int t) const;
  TypeSet commuting_with(int s) const { return nbr_[s]; }
  TypeSet all() const;

  bool is_spherical(TypeSet T) const;
  bool is_finite() const { return is_spherical(all()); }
  std::vector<std::pair<int, int>> commuting_pairs() const;

  std::uint64_t fingerprint() const { return fingerprint_; }
  friend bool operator==(const CoxeterSystem& a, const CoxeterSystem& b) {
    return a.names_ == b.names_ && a.nbr_ == b.nbr_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<TypeSet> nbr_;
  std::uint64_t fingerprint_ = 0;
};

// An element of W stored as its ShortLex-least reduced word.
class WElement {
 public:
  WElement() = default;
  const Word& word() const { return word_; }
  std::size_t length() const { return word_.size(); }
  bool is_identity() const { return word_.empty(); }
  std::uint64_t system() const { return system_; }

  friend bool operator==(const WElement& a, const WElement& b) {
    return a.system_ == b.system_ && a.word_ == b.word_;
  }
  friend bool operator<(const WElement& a, const WElement& b);

 private:
  friend WElement make_welement(const CoxeterSystem&, Word);
  Word word_;
  std::uint64_t system_ = 0;
};

// Order of positions that lists a reduced word in lexicographic normal form:
// repeatedly take the smallest letter that commutes past everything before it.
std::vector<std::size_t> lex_normal_order(const CoxeterSystem& sys,
                                          const std::vector<int>& letters);

WElement reduce(const CoxeterSystem& sys, const Word& w);
WElement reduce(const CoxeterSystem& sys, const std::vector<std::string>& w);
WElement identity(const CoxeterSystem& sys);
WElement multiply(const CoxeterSystem& sys, const WElement& a,
                  const WElement& b);
WElement inverse(const CoxeterSystem& sys, const WElement& a);
TypeSet support(const WElement& g);
bool is_spherical(const CoxeterSystem& sys, TypeSet T);
std::string to_string(const CoxeterSystem& sys, const WElement& g);

struct SphericalPoset {
  std::vector<TypeSet> subsets;    // includes the empty set; sorted by size
  std::vector<TypeSet> simplices;  // nonempty members of `subsets`
  std::vector<TypeSet> maximal;
};

SphericalPoset spherical_poset(const CoxeterSystem& sys, int cap = 12);

}  // namespace rab
