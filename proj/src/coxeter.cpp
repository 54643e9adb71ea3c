#include "rab/coxeter.hpp"

#include <algorithm>
#include <bit>

#include "rab/error.hpp"

namespace rab {

std::vector<int> members(TypeSet T) {
  std::vector<int> out;
  for (int s = 0; T != 0; ++s, T >>= 1) {
    if (T & 1U) out.push_back(s);
  }
  return out;
}

int cardinality(TypeSet T) { return std::popcount(T); }

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

CoxeterSystem::CoxeterSystem(std::vector<std::string> names,
                             const std::vector<std::pair<int, int>>& pairs)
    : names_(std::move(names)), nbr_(names_.size(), 0) {
  if (names_.empty()) throw InputError("Coxeter system needs a generator");
  if (names_.size() > static_cast<std::size_t>(kMaxRank)) {
    throw InputError("at most " + std::to_string(kMaxRank) + " generators");
  }
  for (std::size_t i = 0; i < names_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (names_[i] == names_[j]) {
        throw InputError("duplicate generator '" + names_[i] + "'");
      }
    }
  }
  for (auto [s, t] : pairs) {
    if (s < 0 || t < 0 || s >= rank() || t >= rank()) {
      throw InputError("commuting pair refers to an unknown generator");
    }
    if (s == t) throw InputError("a generator cannot commute with itself");
    nbr_[s] |= singleton(t);
    nbr_[t] |= singleton(s);
  }
  std::uint64_t h = 14695981039346656037ULL;
  for (const auto& n : names_) h = fnv1a(fnv1a(h, n), "\x1f");
  for (TypeSet mask : nbr_) h = fnv1a(h, std::to_string(mask) + ";");
  fingerprint_ = h;
}

CoxeterSystem CoxeterSystem::from_matrix(
    std::vector<std::string> names, const std::vector<std::vector<int>>& m) {
  const std::size_t n = names.size();
  if (m.size() != n) throw InputError("Coxeter matrix has wrong size");
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw InputError("Coxeter matrix has wrong size");
    if (m[i][i] != 1) throw InputError("Coxeter matrix diagonal must be 1");
    for (std::size_t j = 0; j < n; ++j) {
      if (m[i][j] != m[j][i]) throw InputError("Coxeter matrix not symmetric");
      if (i == j) continue;
      if (m[i][j] != 2 && m[i][j] != 0) {
        throw InputError("not right-angled: m = " + std::to_string(m[i][j]));
      }
      if (i < j && m[i][j] == 2) {
        pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  return CoxeterSystem(std::move(names), pairs);
}

int CoxeterSystem::index_of(std::string_view name) const {
  for (int s = 0; s < rank(); ++s) {
    if (names_[s] == name) return s;
  }
  throw InputError("unknown generator '" + std::string(name) + "'");
}

int CoxeterSystem::m(int s, int t) const {
  if (s == t) return 1;
  return commute(s, t) ? 2 : 0;
}

TypeSet CoxeterSystem::all() const {
  return rank() == 32 ? ~TypeSet{0} : (TypeSet{1} << rank()) - 1;
}

bool CoxeterSystem::is_spherical(TypeSet T) const {
  for (int s : members(T)) {
    if (!is_subset(T & ~singleton(s), nbr_[s])) return false;
  }
  return true;
}

std::vector<std::pair<int, int>> CoxeterSystem::commuting_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int s = 0; s < rank(); ++s) {
    for (int t = s + 1; t < rank(); ++t) {
      if (commute(s, t)) out.emplace_back(s, t);
    }
  }
  return out;
}

bool operator<(const WElement& a, const WElement& b) {
  if (a.word_.size() != b.word_.size()) return a.word_.size() < b.word_.size();
  return a.word_ < b.word_;
}

std::vector<std::size_t> lex_normal_order(const CoxeterSystem& sys,
                                          const std::vector<int>& letters) {
  const std::size_t n = letters.size();
  std::vector<std::size_t> order;
  order.reserve(n);
  std::vector<bool> taken(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    // Letters still in place before position i, as a mask; position i is
    // available when every one of them commutes with letters[i].
    TypeSet before = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const int s = letters[i];
      if (is_subset(before, sys.commuting_with(s)) &&
          (best == n || s < letters[best])) {
        best = i;
      }
      before |= singleton(s);
    }
    taken[best] = true;
    order.push_back(best);
  }
  return order;
}

WElement make_welement(const CoxeterSystem& sys, Word w) {
  WElement out;
  out.word_ = std::move(w);
  out.system_ = sys.fingerprint();
  return out;
}

namespace {

// Appends s to a reduced word, cancelling against the last occurrence of s
// that can be shuffled to the end.
void append_letter(const CoxeterSystem& sys, Word& w, int s) {
  for (std::size_t j = w.size(); j-- > 0;) {
    if (w[j] == s) {
      w.erase(w.begin() + static_cast<std::ptrdiff_t>(j));
      return;
    }
    if (!sys.commute(w[j], s)) break;
  }
  w.push_back(s);
}

WElement canonical(const CoxeterSystem& sys, const Word& reduced) {
  Word out;
  out.reserve(reduced.size());
  for (std::size_t i : lex_normal_order(sys, reduced)) out.push_back(reduced[i]);
  return make_welement(sys, std::move(out));
}

void check_system(const CoxeterSystem& sys, const WElement& g) {
  if (g.system() != sys.fingerprint()) {
    throw InputError("element belongs to a different Coxeter system");
  }
}

}  // namespace

WElement reduce(const CoxeterSystem& sys, const Word& w) {
  Word acc;
  for (int s : w) {
    if (s < 0 || s >= sys.rank()) {
      throw InputError("letter " + std::to_string(s) + " is not a generator");
    }
    append_letter(sys, acc, s);
  }
  return canonical(sys, acc);
}

WElement reduce(const CoxeterSystem& sys, const std::vector<std::string>& w) {
  Word letters;
  letters.reserve(w.size());
  for (const auto& name : w) letters.push_back(sys.index_of(name));
  return reduce(sys, letters);
}

WElement identity(const CoxeterSystem& sys) { return make_welement(sys, {}); }

WElement multiply(const CoxeterSystem& sys, const WElement& a,
                  const WElement& b) {
  check_system(sys, a);
  check_system(sys, b);
  Word acc = a.word();
  for (int s : b.word()) append_letter(sys, acc, s);
  return canonical(sys, acc);
}

WElement inverse(const CoxeterSystem& sys, const WElement& a) {
  check_system(sys, a);
  Word w(a.word().rbegin(), a.word().rend());
  return canonical(sys, w);
}

TypeSet support(const WElement& g) {
  TypeSet T = 0;
  for (int s : g.word()) T |= singleton(s);
  return T;
}

bool is_spherical(const CoxeterSystem& sys, TypeSet T) {
  return sys.is_spherical(T);
}

std::string to_string(const CoxeterSystem& sys, const WElement& g) {
  if (g.is_identity()) return "1";
  std::string out;
  for (std::size_t i = 0; i < g.word().size(); ++i) {
    if (i) out += ' ';
    out += sys.name(g.word()[i]);
  }
  return out;
}

SphericalPoset spherical_poset(const CoxeterSystem& sys, int cap) {
  if (sys.rank() > cap) {
    throw SizeError("spherical_poset: rank " + std::to_string(sys.rank()) +
                        " exceeds cap " + std::to_string(cap),
                    0);
  }
  SphericalPoset P;
  const TypeSet full = sys.all();
  for (TypeSet T = 0;; ++T) {
    if (sys.is_spherical(T)) P.subsets.push_back(T);
    if (T == full) break;
  }
  std::stable_sort(P.subsets.begin(), P.subsets.end(),
                   [](TypeSet a, TypeSet b) {
                     return cardinality(a) < cardinality(b);
                   });
  for (TypeSet T : P.subsets) {
    if (T != 0) P.simplices.push_back(T);
  }
  for (TypeSet T : P.subsets) {
    bool maximal = true;
    for (int s = 0; s < sys.rank() && maximal; ++s) {
      if (!contains(T, s) && sys.is_spherical(T | singleton(s))) maximal = false;
    }
    if (maximal) P.maximal.push_back(T);
  }
  return P;
}

}  // namespace rab
