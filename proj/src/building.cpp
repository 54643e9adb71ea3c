#include "rab/building.hpp"

#include <algorithm>
#include <unordered_set>

#include "rab/error.hpp"

namespace rab {

Building::Building(GraphProduct gp, Caps caps)
    : gp_(std::move(gp)), caps_(caps), poset_(spherical_poset(gp_.system())) {}

WElement Building::w_distance(const Chamber& a, const Chamber& b) const {
  return projection_to_W(gp_, gp_.multiply(gp_.inverse(a), b));
}

bool Building::s_adjacent(const Chamber& a, const Chamber& b, int s) const {
  if (s < 0 || s >= rank()) throw InputError("unknown generator index");
  const Chamber d = gp_.multiply(gp_.inverse(a), b);
  return d.length() == 1 && d.syllables()[0].gen == s;
}

Face Building::face(const Chamber& c, TypeSet T) const {
  if (!system().is_spherical(T)) throw DomainError("face type is not spherical");
  return Face{T, gp_.strip_right(c, T)};
}

bool Building::intersects(const Chamber& a, const Chamber& b) const {
  return system().is_spherical(gp_.multiply(gp_.inverse(a), b).support());
}

std::vector<Chamber> Building::chambers_of(const Face& f) const {
  std::vector<Chamber> out;
  for (const auto& x : gp_.parabolic_elements(f.type)) {
    out.push_back(gp_.multiply(f.rep, x));
  }
  return out;
}

bool Building::face_contains(const Face& f, const Chamber& c) const {
  return gp_.strip_right(c, f.type) == f.rep;
}

std::vector<Chamber> Building::ball_chambers(int n) const {
  if (n < 0) throw DomainError("ball radius must be nonnegative");
  if (n > caps_.radius) {
    throw SizeError("ball radius " + std::to_string(n) + " exceeds cap " +
                        std::to_string(caps_.radius),
                    0);
  }
  std::vector<std::vector<Chamber>> neighbourhood;
  for (TypeSet T : poset_.maximal) {
    auto elems = gp_.parabolic_elements(T);
    neighbourhood.emplace_back(elems.begin() + 1, elems.end());
  }
  std::unordered_set<Chamber> seen{gp_.identity()};
  std::vector<Chamber> frontier{gp_.identity()};
  for (int r = 1; r <= n; ++r) {
    std::vector<Chamber> next;
    for (const auto& c : frontier) {
      for (const auto& elems : neighbourhood) {
        for (const auto& x : elems) {
          Chamber d = gp_.multiply(c, x);
          if (seen.insert(d).second) {
            next.push_back(std::move(d));
            if (seen.size() > caps_.chambers) {
              throw SizeError("ball exceeds chamber cap " +
                                  std::to_string(caps_.chambers),
                              seen.size());
            }
          }
        }
      }
    }
    frontier = std::move(next);
  }
  std::vector<Chamber> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

Gallery Building::minimal_gallery(const Chamber& a, const Chamber& b) const {
  const Chamber d = gp_.multiply(gp_.inverse(a), b);
  Gallery g;
  g.chambers.push_back(a);
  Chamber cur = a;
  for (const auto& x : d.syllables()) {
    cur = gp_.multiply_syllable(cur, x.gen, x.exp);
    g.chambers.push_back(cur);
    g.type_word.push_back(x.gen);
  }
  return g;
}

std::size_t hash_value(const Face& f) {
  return hash_value(f.rep) * 31 + f.type;
}

std::string type_string(const CoxeterSystem& sys, TypeSet T) {
  std::string out = "{";
  bool first = true;
  for (int s : members(T)) {
    if (!first) out += ',';
    out += sys.name(s);
    first = false;
  }
  return out + "}";
}

std::string to_string(const CoxeterSystem& sys, const Chamber& c) {
  if (c.is_identity()) return "1";
  std::string out;
  for (const auto& x : c.syllables()) {
    if (!out.empty()) out += ' ';
    out += sys.name(x.gen);
    if (x.exp != 1) out += '^' + std::to_string(x.exp);
  }
  return out;
}

std::string to_string(const CoxeterSystem& sys, const Face& f) {
  return to_string(sys, f.rep) + " G" + type_string(sys, f.type);
}

}  // namespace rab
