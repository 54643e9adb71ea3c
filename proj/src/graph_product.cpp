#include "rab/graph_product.hpp"

#include <algorithm>

#include "rab/error.hpp"

namespace rab {

TypeSet ProductElement::support() const {
  TypeSet T = 0;
  for (const auto& x : syl_) T |= singleton(x.gen);
  return T;
}

std::strong_ordering operator<=>(const ProductElement& a,
                                 const ProductElement& b) {
  if (auto c = a.syl_.size() <=> b.syl_.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.syl_.size(); ++i) {
    if (auto c = a.syl_[i] <=> b.syl_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

TypeSet DirectProductElement::support() const {
  TypeSet T = 0;
  for (std::size_t s = 0; s < c.size(); ++s) {
    if (c[s] != 0) T |= singleton(static_cast<int>(s));
  }
  return T;
}

GraphProduct::GraphProduct(CoxeterSystem sys, std::vector<int> q)
    : sys_(std::move(sys)), q_(std::move(q)) {
  if (static_cast<int>(q_.size()) != sys_.rank()) {
    throw InputError("need one parameter q_s per generator");
  }
  for (int s = 0; s < sys_.rank(); ++s) {
    if (q_[s] < 2) {
      throw InputError("parameter q_" + sys_.name(s) + " must be at least 2");
    }
    if (q_[s] > 255) throw InputError("parameter q_" + sys_.name(s) + " too large");
  }
}

std::size_t GraphProduct::order(TypeSet T) const {
  std::size_t n = 1;
  for (int t : members(T)) n *= static_cast<std::size_t>(q_[t]);
  return n;
}

ProductElement GraphProduct::generator(int s, int e) const {
  return from_syllables({Syllable{static_cast<std::uint8_t>(s),
                                  static_cast<std::uint8_t>(
                                      ((e % q(s)) + q(s)) % q(s))}});
}

void GraphProduct::append(std::vector<Syllable>& w, int s, int e) const {
  if (s < 0 || s >= rank()) throw InputError("syllable on unknown generator");
  e = ((e % q_[s]) + q_[s]) % q_[s];
  if (e == 0) return;
  for (std::size_t j = w.size(); j-- > 0;) {
    if (w[j].gen == s) {
      const int sum = (w[j].exp + e) % q_[s];
      if (sum == 0) {
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(j));
      } else {
        w[j].exp = static_cast<std::uint8_t>(sum);
      }
      return;
    }
    if (!sys_.commute(w[j].gen, s)) break;
  }
  w.push_back(Syllable{static_cast<std::uint8_t>(s), static_cast<std::uint8_t>(e)});
}

ProductElement GraphProduct::canonical(std::vector<Syllable> reduced) const {
  std::vector<int> gens;
  gens.reserve(reduced.size());
  for (const auto& x : reduced) gens.push_back(x.gen);
  ProductElement out;
  out.syl_.reserve(reduced.size());
  for (std::size_t i : lex_normal_order(sys_, gens)) out.syl_.push_back(reduced[i]);
  return out;
}

ProductElement GraphProduct::from_syllables(
    const std::vector<Syllable>& word) const {
  std::vector<Syllable> acc;
  for (const auto& x : word) append(acc, x.gen, x.exp);
  return canonical(std::move(acc));
}

ProductElement GraphProduct::multiply(const ProductElement& a,
                                      const ProductElement& b) const {
  std::vector<Syllable> acc = a.syl_;
  for (const auto& x : b.syl_) append(acc, x.gen, x.exp);
  return canonical(std::move(acc));
}

ProductElement GraphProduct::multiply_syllable(const ProductElement& a, int s,
                                               int e) const {
  std::vector<Syllable> acc = a.syl_;
  append(acc, s, e);
  return canonical(std::move(acc));
}

ProductElement GraphProduct::inverse(const ProductElement& a) const {
  std::vector<Syllable> acc;
  acc.reserve(a.syl_.size());
  for (auto it = a.syl_.rbegin(); it != a.syl_.rend(); ++it) {
    acc.push_back(Syllable{it->gen,
                           static_cast<std::uint8_t>(q_[it->gen] - it->exp)});
  }
  return canonical(std::move(acc));
}

ProductElement GraphProduct::strip_right(const ProductElement& g,
                                         TypeSet T) const {
  std::vector<Syllable> kept;
  kept.reserve(g.syl_.size());
  TypeSet after = 0;
  for (auto it = g.syl_.rbegin(); it != g.syl_.rend(); ++it) {
    if (contains(T, it->gen) && is_subset(after, sys_.commuting_with(it->gen))) {
      continue;
    }
    kept.push_back(*it);
    after |= singleton(it->gen);
  }
  if (kept.size() == g.syl_.size()) return g;
  std::reverse(kept.begin(), kept.end());
  return canonical(std::move(kept));
}

std::vector<ProductElement> GraphProduct::parabolic_elements(TypeSet T) const {
  if (!sys_.is_spherical(T)) throw DomainError("G_T is infinite for this T");
  std::vector<ProductElement> out{identity()};
  for (int t : members(T)) {
    std::vector<ProductElement> next;
    next.reserve(out.size() * static_cast<std::size_t>(q_[t]));
    for (const auto& g : out) {
      for (int e = 0; e < q_[t]; ++e) next.push_back(multiply_syllable(g, t, e));
    }
    out = std::move(next);
  }
  return out;
}

DirectProductElement GraphProduct::zero() const {
  return DirectProductElement{std::vector<std::uint8_t>(q_.size(), 0)};
}

DirectProductElement GraphProduct::ds_generator(int s, int e) const {
  DirectProductElement g = zero();
  g.c.at(s) = static_cast<std::uint8_t>(((e % q_[s]) + q_[s]) % q_[s]);
  return g;
}

ProductElement gp_multiply(const GraphProduct& params, const ProductElement& a,
                           const ProductElement& b) {
  return params.multiply(a, b);
}

WElement projection_to_W(const GraphProduct& params, const ProductElement& g) {
  Word w;
  w.reserve(g.length());
  for (const auto& x : g.syllables()) w.push_back(x.gen);
  return reduce(params.system(), w);
}

DirectProductElement ds_multiply(const GraphProduct& params,
                                 const DirectProductElement& a,
                                 const DirectProductElement& b) {
  DirectProductElement out = params.zero();
  for (std::size_t s = 0; s < out.c.size(); ++s) {
    out.c[s] = static_cast<std::uint8_t>((a.c.at(s) + b.c.at(s)) %
                                         params.q(static_cast<int>(s)));
  }
  return out;
}

DirectProductElement ds_inverse(const GraphProduct& params,
                                const DirectProductElement& a) {
  DirectProductElement out = params.zero();
  for (std::size_t s = 0; s < out.c.size(); ++s) {
    const int q = params.q(static_cast<int>(s));
    out.c[s] = static_cast<std::uint8_t>((q - a.c.at(s)) % q);
  }
  return out;
}

DirectProductElement project_components(const DirectProductElement& g,
                                        TypeSet R) {
  DirectProductElement out = g;
  for (std::size_t s = 0; s < out.c.size(); ++s) {
    if (!contains(R, static_cast<int>(s))) out.c[s] = 0;
  }
  return out;
}

std::size_t hash_value(const ProductElement& g) {
  std::size_t h = 1469598103934665603ULL;
  for (const auto& x : g.syllables()) {
    h ^= (static_cast<std::size_t>(x.gen) << 8) | x.exp;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace rab
