#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "rab/coxeter.hpp"

namespace rab {

struct Syllable {
  std::uint8_t gen = 0;
  std::uint8_t exp = 0;
  friend auto operator<=>(const Syllable&, const Syllable&) = default;
};

// Element of the graph product of the cyclic groups Z/q_s over the
// commutation graph, kept as a reduced syllable sequence whose generator
// sequence is the ShortLex-least reduced word of its image in W.
class ProductElement {
 public:
  ProductElement() = default;
  const std::vector<Syllable>& syllables() const { return syl_; }
  std::size_t length() const { return syl_.size(); }
  bool is_identity() const { return syl_.empty(); }
  TypeSet support() const;

  friend bool operator==(const ProductElement&, const ProductElement&) = default;
  // ShortLex on (generator, exponent) pairs.
  friend std::strong_ordering operator<=>(const ProductElement& a,
                                          const ProductElement& b);

 private:
  friend class GraphProduct;
  std::vector<Syllable> syl_;
};

// Exponent vector in G_S, the direct product of the Z/q_s.
struct DirectProductElement {
  std::vector<std::uint8_t> c;
  friend auto operator<=>(const DirectProductElement&,
                          const DirectProductElement&) = default;
  TypeSet support() const;
};

class GraphProduct {
 public:
  GraphProduct() = default;
  GraphProduct(CoxeterSystem sys, std::vector<int> q);

  const CoxeterSystem& system() const { return sys_; }
  int rank() const { return sys_.rank(); }
  int q(int s) const { return q_.at(s); }
  const std::vector<int>& q() const { return q_; }
  // |G_T| = product of q_t over t in T.
  std::size_t order(TypeSet T) const;

  ProductElement identity() const { return {}; }
  ProductElement generator(int s, int e = 1) const;
  // Canonical form of an arbitrary syllable sequence (exponents taken mod q).
  ProductElement from_syllables(const std::vector<Syllable>& word) const;
  ProductElement multiply(const ProductElement& a,
                          const ProductElement& b) const;
  ProductElement multiply_syllable(const ProductElement& a, int s, int e) const;
  ProductElement inverse(const ProductElement& a) const;
  // Shortest element of the coset g G_T (T spherical).
  ProductElement strip_right(const ProductElement& g, TypeSet T) const;
  // All elements of G_T for spherical T, in increasing exponent order.
  std::vector<ProductElement> parabolic_elements(TypeSet T) const;

  DirectProductElement zero() const;
  DirectProductElement ds_generator(int s, int e = 1) const;

  friend bool operator==(const GraphProduct& a, const GraphProduct& b) {
    return a.sys_ == b.sys_ && a.q_ == b.q_;
  }

 private:
  void append(std::vector<Syllable>& w, int s, int e) const;
  ProductElement canonical(std::vector<Syllable> reduced) const;

  CoxeterSystem sys_;
  std::vector<int> q_;
};

ProductElement gp_multiply(const GraphProduct& params, const ProductElement& a,
                           const ProductElement& b);
WElement projection_to_W(const GraphProduct& params, const ProductElement& g);

DirectProductElement ds_multiply(const GraphProduct& params,
                                 const DirectProductElement& a,
                                 const DirectProductElement& b);
DirectProductElement ds_inverse(const GraphProduct& params,
                                const DirectProductElement& a);
DirectProductElement project_components(const DirectProductElement& g,
                                        TypeSet R);

std::size_t hash_value(const ProductElement& g);

}  // namespace rab

template <>
struct std::hash<rab::ProductElement> {
  std::size_t operator()(const rab::ProductElement& g) const {
    return rab::hash_value(g);
  }
};
