#include "rab/clump.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "rab/error.hpp"

namespace rab {

std::strong_ordering operator<=>(const Side& a, const Side& b) {
  if (auto c = a.type <=> b.type; c != 0) return c;
  return a.mirrors <=> b.mirrors;
}

namespace {

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

}  // namespace

Clump::Clump(const Building& X, std::vector<Chamber> chambers)
    : X_(X), chambers_(std::move(chambers)) {
  std::sort(chambers_.begin(), chambers_.end());
  chambers_.erase(std::unique(chambers_.begin(), chambers_.end()),
                  chambers_.end());
  if (chambers_.empty()) throw DomainError("a clump needs a chamber");
  set_.insert(chambers_.begin(), chambers_.end());
  const auto& gp = X_.group();

  // Gallery connectivity.
  std::unordered_set<Chamber> reached{chambers_.front()};
  std::vector<Chamber> stack{chambers_.front()};
  while (!stack.empty()) {
    Chamber c = std::move(stack.back());
    stack.pop_back();
    for (int s = 0; s < X_.rank(); ++s) {
      for (int e = 1; e < X_.q(s); ++e) {
        Chamber d = gp.multiply_syllable(c, s, e);
        if (set_.count(d) && reached.insert(d).second) stack.push_back(d);
      }
    }
  }
  if (reached.size() != chambers_.size()) {
    throw DomainError("chamber set is not gallery-connected");
  }

  std::unordered_map<Face, int> count;
  for (const auto& c : chambers_) {
    for (int s = 0; s < X_.rank(); ++s) ++count[X_.face(c, singleton(s))];
  }
  for (const auto& [f, n] : count) {
    if (n == 1) boundary_.push_back(f);
  }
  std::sort(boundary_.begin(), boundary_.end());

  // Same-type mirrors meeting in a face of type {u,t} are adjacent.
  UnionFind uf(boundary_.size());
  std::map<std::pair<int, Face>, std::size_t> first_in_face;
  for (std::size_t i = 0; i < boundary_.size(); ++i) {
    const int u = members(boundary_[i].type).front();
    for (int t : members(X_.system().commuting_with(u))) {
      const Face f = X_.face(boundary_[i].rep, singleton(u) | singleton(t));
      auto [it, fresh] = first_in_face.emplace(std::pair{u, f}, i);
      if (!fresh) uf.unite(it->second, i);
    }
  }
  std::map<std::size_t, std::vector<Face>> groups;
  for (std::size_t i = 0; i < boundary_.size(); ++i) {
    groups[uf.find(i)].push_back(boundary_[i]);
  }
  for (auto& [root, ms] : groups) {
    sides_.push_back(Side{members(ms.front().type).front(), std::move(ms)});
  }
  std::sort(sides_.begin(), sides_.end());
  for (std::size_t k = 0; k < sides_.size(); ++k) {
    for (const auto& m : sides_[k].mirrors) side_of_[m] = static_cast<int>(k);
  }
}

int Clump::side_of(const Face& m) const {
  auto it = side_of_.find(m);
  return it == side_of_.end() ? -1 : it->second;
}

std::vector<Chamber> Clump::chambers_in(const Face& f) const {
  std::vector<Chamber> out;
  for (auto& c : X_.chambers_of(f)) {
    if (contains(c)) out.push_back(std::move(c));
  }
  return out;
}

bool Clump::meets(const Face& f) const {
  for (const auto& c : X_.chambers_of(f)) {
    if (contains(c)) return true;
  }
  return false;
}

Clump ball(const Building& X, int n) { return Clump(X, X.ball_chambers(n)); }

std::vector<Face> boundary_mirrors(const Clump& C) { return C.boundary_mirrors(); }

namespace {

std::pair<TypeSet, TypeSet> boundary_types(const Clump& C, const Face& sigma) {
  const auto inside = C.chambers_in(sigma);
  if (inside.empty()) throw DomainError("face is not incident to the clump");
  TypeSet some = 0;
  TypeSet all = 0;
  for (int s : members(sigma.type)) {
    int hits = 0;
    for (const auto& h : inside) {
      if (C.is_boundary_mirror(C.building().face(h, singleton(s)))) ++hits;
    }
    if (hits > 0) some |= singleton(s);
    if (hits == static_cast<int>(inside.size())) all |= singleton(s);
  }
  return {some, all};
}

}  // namespace

TypeSet boundary_type(const Clump& C, const Face& sigma) {
  return boundary_types(C, sigma).first;
}

TypeSet boundary_type_all(const Clump& C, const Face& sigma) {
  return boundary_types(C, sigma).second;
}

std::vector<Side> sides(const Clump& C) { return C.sides(); }

bool on_side(const Building& X, const Side& K, const Face& sigma) {
  if (!contains(sigma.type, K.type)) return false;
  // Mirrors of type u through sigma are the panels hG_u with h in sigma.
  for (const auto& m : K.mirrors) {
    if (X.face(m.rep, sigma.type) == sigma) return true;
  }
  return false;
}

namespace {

void require_side(const Clump& C, const Side& K) {
  if (C.is_whole_building()) {
    throw DomainError("the whole building has no sides to unfold");
  }
  const auto& all = C.sides();
  if (std::find(all.begin(), all.end(), K) == all.end()) {
    throw DomainError("not a side of this clump");
  }
}

}  // namespace

Clump unfold(const Clump& C, const Side& K) {
  require_side(C, K);
  std::vector<Chamber> out = C.chambers();
  for (const auto& m : K.mirrors) {
    for (auto& c : C.building().chambers_of(m)) {
      if (!C.contains(c)) out.push_back(std::move(c));
    }
  }
  return Clump(C.building(), std::move(out));
}

SheetPartition sheets(const Clump& C, const Side& K) {
  require_side(C, K);
  const auto& X = C.building();
  SheetPartition P;
  P.type = K.type;
  for (const auto& m : K.mirrors) {
    for (auto& c : X.chambers_of(m)) {
      if (!C.contains(c)) P.new_chambers.push_back(std::move(c));
    }
  }
  std::sort(P.new_chambers.begin(), P.new_chambers.end());
  std::unordered_map<Chamber, std::size_t> index;
  for (std::size_t i = 0; i < P.new_chambers.size(); ++i) {
    index.emplace(P.new_chambers[i], i);
  }
  UnionFind uf(P.new_chambers.size());
  for (std::size_t i = 0; i < P.new_chambers.size(); ++i) {
    for (int s = 0; s < X.rank(); ++s) {
      if (s == K.type) continue;
      for (int e = 1; e < X.q(s); ++e) {
        auto it = index.find(X.group().multiply_syllable(P.new_chambers[i], s, e));
        if (it != index.end()) uf.unite(i, it->second);
      }
    }
  }
  // Roots are least indices, so blocks come out ordered by least chamber.
  std::map<std::size_t, std::vector<Chamber>> groups;
  for (std::size_t i = 0; i < P.new_chambers.size(); ++i) {
    groups[uf.find(i)].push_back(P.new_chambers[i]);
  }
  for (auto& [root, block] : groups) {
    for (const auto& c : block) {
      P.sheet_of.emplace(c, static_cast<int>(P.blocks.size()));
    }
    P.blocks.push_back(std::move(block));
  }
  return P;
}

UnfoldingTrace ball_by_unfolding(const Building& X, int n,
                                 std::optional<std::uint64_t> seed) {
  if (n < 0) throw DomainError("radius must be nonnegative");
  if (n > X.caps().radius) {
    throw SizeError("radius exceeds cap " + std::to_string(X.caps().radius), 0);
  }
  std::mt19937_64 rng(seed.value_or(0));
  UnfoldingTrace trace;
  trace.clumps.push_back(ball(X, 0));
  trace.ball_at.push_back(0);
  for (int r = 1; r <= n; ++r) {
    std::vector<Side> pending = trace.clumps.back().sides();
    if (seed) std::shuffle(pending.begin(), pending.end(), rng);
    for (const auto& K : pending) {
      // A pending side may have been partly absorbed or merged; keep
      // unfolding the current side through any of its surviving mirrors.
      for (;;) {
        const Clump& cur = trace.clumps.back();
        int k = -1;
        for (const auto& m : K.mirrors) {
          if ((k = cur.side_of(m)) >= 0) break;
        }
        if (k < 0) break;
        Side side = cur.sides()[static_cast<std::size_t>(k)];
        Clump next = unfold(cur, side);
        if (next.size() > X.caps().chambers) {
          throw SizeError("unfolding exceeds chamber cap", next.size());
        }
        trace.sides.push_back(std::move(side));
        trace.clumps.push_back(std::move(next));
      }
    }
    trace.ball_at.push_back(trace.clumps.size() - 1);
  }
  return trace;
}

}  // namespace rab
