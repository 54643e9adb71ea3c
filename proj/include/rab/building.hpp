#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rab/coxeter.hpp"
#include "rab/graph_product.hpp"

namespace rab {

using Chamber = ProductElement;

// A spherical residue gG_T, keyed by its shortest representative.
struct Face {
  TypeSet type = 0;
  Chamber rep;
  friend bool operator==(const Face&, const Face&) = default;
  friend std::strong_ordering operator<=>(const Face& a, const Face& b) {
    if (auto c = a.rep <=> b.rep; c != 0) return c;
    return a.type <=> b.type;
  }
};

struct Gallery {
  std::vector<Chamber> chambers;
  Word type_word;
};

struct Caps {
  int radius = 6;
  std::size_t chambers = 200000;
};

// The right-angled building with parameters q as a chamber system on the
// graph product. All chamber operations are normal-form arithmetic.
class Building {
 public:
  Building() = default;
  explicit Building(GraphProduct gp, Caps caps = {});

  const GraphProduct& group() const { return gp_; }
  const CoxeterSystem& system() const { return gp_.system(); }
  int rank() const { return gp_.rank(); }
  int q(int s) const { return gp_.q(s); }
  const Caps& caps() const { return caps_; }
  const SphericalPoset& spherical() const { return poset_; }

  WElement w_distance(const Chamber& a, const Chamber& b) const;
  bool s_adjacent(const Chamber& a, const Chamber& b, int s) const;
  Face face(const Chamber& c, TypeSet T) const;
  bool intersects(const Chamber& a, const Chamber& b) const;

  // Chambers of the residue, in canonical order of the G_T factor.
  std::vector<Chamber> chambers_of(const Face& f) const;
  bool face_contains(const Face& f, const Chamber& c) const;

  // Chamber sets of the combinatorial balls Y_0, ..., Y_n (sorted).
  std::vector<Chamber> ball_chambers(int n) const;
  Gallery minimal_gallery(const Chamber& a, const Chamber& b) const;

  friend bool operator==(const Building& a, const Building& b) {
    return a.gp_ == b.gp_;
  }

 private:
  GraphProduct gp_;
  Caps caps_;
  SphericalPoset poset_;
};

std::size_t hash_value(const Face& f);

std::string type_string(const CoxeterSystem& sys, TypeSet T);
std::string to_string(const CoxeterSystem& sys, const Chamber& c);
std::string to_string(const CoxeterSystem& sys, const Face& f);

}  // namespace rab

template <>
struct std::hash<rab::Face> {
  std::size_t operator()(const rab::Face& f) const { return rab::hash_value(f); }
};
