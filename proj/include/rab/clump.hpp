#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rab/building.hpp"

namespace rab {

// A maximal type-connected family of boundary mirrors, all of type `type`.
struct Side {
  int type = 0;
  std::vector<Face> mirrors;  // sorted
  friend bool operator==(const Side&, const Side&) = default;
  // Canonical order: type, then least mirror.
  friend std::strong_ordering operator<=>(const Side& a, const Side& b);
};

// Gallery-connected finite chamber set. Boundary mirrors and sides are
// computed once at construction; the object is immutable afterwards.
class Clump {
 public:
  Clump(const Building& X, std::vector<Chamber> chambers);

  const Building& building() const { return X_; }
  const std::vector<Chamber>& chambers() const { return chambers_; }
  std::size_t size() const { return chambers_.size(); }
  bool contains(const Chamber& c) const { return set_.count(c) != 0; }

  // Empty boundary: the clump is the whole (finite) building.
  bool is_whole_building() const { return boundary_.empty(); }
  const std::vector<Face>& boundary_mirrors() const { return boundary_; }
  bool is_boundary_mirror(const Face& m) const { return side_of_.count(m) != 0; }
  const std::vector<Side>& sides() const { return sides_; }
  // Index into sides() of the side containing mirror m, or -1.
  int side_of(const Face& m) const;

  std::vector<Chamber> chambers_in(const Face& f) const;
  bool meets(const Face& f) const;

  friend bool operator==(const Clump& a, const Clump& b) {
    return a.chambers_ == b.chambers_;
  }

 private:
  Building X_;
  std::vector<Chamber> chambers_;
  std::unordered_set<Chamber> set_;
  std::vector<Face> boundary_;
  std::vector<Side> sides_;
  std::unordered_map<Face, int> side_of_;
};

struct SheetPartition {
  int type = 0;
  std::vector<Chamber> new_chambers;              // sorted
  std::vector<std::vector<Chamber>> blocks;       // ordered by least chamber
  std::unordered_map<Chamber, int> sheet_of;
};

Clump ball(const Building& X, int n);
std::vector<Face> boundary_mirrors(const Clump& C);
// {s in type(sigma) : some s-mirror through sigma of a chamber of C is in dC}
TypeSet boundary_type(const Clump& C, const Face& sigma);
// {s in type(sigma) : every s-mirror through sigma of a chamber of C is in dC}
TypeSet boundary_type_all(const Clump& C, const Face& sigma);
std::vector<Side> sides(const Clump& C);
Clump unfold(const Clump& C, const Side& K);
SheetPartition sheets(const Clump& C, const Side& K);

// The faces of type containing u that lie on some mirror of K.
bool on_side(const Building& X, const Side& K, const Face& sigma);

struct UnfoldingTrace {
  std::vector<Clump> clumps;          // C_0 = Y_0, ..., C_r
  std::vector<Side> sides;            // sides[i] unfolds clumps[i]
  std::vector<std::size_t> ball_at;   // ball_at[k]: index of the clump Y_k
};

// Unfolds Y_0 to Y_n along the sides of each Y_{k-1}, replacing a pending
// side by the current side containing it. With a seed, the sides of each
// Y_{k-1} are processed in a shuffled order instead of canonical order.
UnfoldingTrace ball_by_unfolding(const Building& X, int n,
                                 std::optional<std::uint64_t> seed = {});

}  // namespace rab
