#include "rab/report.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace rab::report {

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json chamber(const CoxeterSystem& sys, const Chamber& c) {
  Json out = Json::array();
  for (const auto& x : c.syllables()) out.push_back({sys.name(x.gen), int(x.exp)});
  return out;
}

Chamber parse_chamber(const GraphProduct& G, const Json& j) {
  if (!j.is_array()) throw InputError("chamber must be a list of [generator, exponent] pairs");
  std::vector<Syllable> w;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_number_integer()) {
      throw InputError("chamber entries must be [generator, exponent]");
    }
    const int s = G.system().index_of(p[0].get<std::string>());
    const int e = p[1].get<int>();
    if (s < 0) throw InputError("unknown generator '" + p[0].get<std::string>() + "'");
    if (e <= 0 || e >= G.q(s)) throw InputError("exponent out of range");
    w.push_back({static_cast<std::uint8_t>(s), static_cast<std::uint8_t>(e)});
  }
  auto c = G.from_syllables(w);
  if (c.syllables() != w) throw InputError("chamber is not in canonical form");
  return c;
}

Json type_set(const CoxeterSystem& sys, TypeSet T) {
  Json out = Json::array();
  for (int s = 0; s < sys.rank(); ++s) {
    if (contains(T, s)) out.push_back(sys.name(s));
  }
  return out;
}

Json face(const CoxeterSystem& sys, const Face& f) {
  return {{"rep", chamber(sys, f.rep)}, {"type", type_set(sys, f.type)}};
}

Json side(const CoxeterSystem& sys, const Side& K) {
  Json mirrors = Json::array();
  for (const auto& m : K.mirrors) mirrors.push_back(chamber(sys, m.rep));
  return {{"type", sys.name(K.type)}, {"mirrors", mirrors}};
}

namespace {

Json chamber_list(const CoxeterSystem& sys, std::vector<Chamber> chambers) {
  std::sort(chambers.begin(), chambers.end());
  Json out = Json::array();
  for (const auto& c : chambers) out.push_back(chamber(sys, c));
  return out;
}

Json cache_json(const SystemConfig& cfg, int radius, const std::vector<Chamber>& chambers) {
  const auto sys = cfg.system();
  Json j;
  j["config_hash"] = cfg.hash_hex();
  j["radius"] = radius;
  j["count"] = chambers.size();
  j["chambers"] = chamber_list(sys, chambers);
  return j;
}

}  // namespace

std::string ball_cache(const SystemConfig& cfg, int radius, const std::vector<Chamber>& chambers) {
  return dump(cache_json(cfg, radius, chambers));
}

std::vector<Chamber> load_ball_cache(const SystemConfig& cfg, const std::string& text,
                                     int* radius) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("ball cache: ") + e.what());
  }
  if (!j.is_object() || !j.contains("config_hash") || !j.contains("chambers")) {
    throw InputError("ball cache: missing fields");
  }
  if (j["config_hash"] != cfg.hash_hex()) {
    throw InputError("ball cache: config hash mismatch");
  }
  const auto G = cfg.group();
  std::vector<Chamber> out;
  for (const auto& c : j["chambers"]) out.push_back(parse_chamber(G, c));
  if (!std::is_sorted(out.begin(), out.end()) ||
      std::adjacent_find(out.begin(), out.end()) != out.end()) {
    throw InputError("ball cache: chambers not sorted and distinct");
  }
  if (radius != nullptr) *radius = j.value("radius", -1);
  return out;
}

Json clump(const SystemConfig& cfg, const Clump& C, const std::vector<Side>& provenance) {
  const auto sys = cfg.system();
  Json j = cache_json(cfg, -1, C.chambers());
  j.erase("radius");
  Json steps = Json::array();
  for (const auto& K : provenance) steps.push_back(side(sys, K));
  j["provenance"] = steps;
  return j;
}

Json admissibility(const CoxeterSystem& sys, const AdmissibilityReport& r) {
  Json j;
  j["admissible"] = r.admissible;
  Json vertices = Json::array();
  for (const auto& v : r.vertices) {
    Json x;
    x["face"] = face(sys, v.sigma);
    x["boundary_type"] = type_set(sys, v.boundary_type);
    x["clump_chambers"] = v.clump_chambers;
    x["development_chambers"] = v.development_chambers;
    x["link_sizes"] = v.link_sizes;
    x["is_join"] = v.is_join;
    x["complete"] = v.complete;
    vertices.push_back(std::move(x));
  }
  j["vertices"] = vertices;
  Json failures = Json::array();
  for (const auto& f : r.failures) failures.push_back(face(sys, f));
  j["failures"] = failures;
  Json counts = Json::array();
  for (const auto& f : r.chamber_count_violations) counts.push_back(face(sys, f));
  j["chamber_count_violations"] = counts;
  Json mismatches = Json::array();
  for (const auto& [f, types] : r.boundary_type_mismatches) {
    mismatches.push_back({{"face", face(sys, f)},
                          {"some", type_set(sys, types.first)},
                          {"all", type_set(sys, types.second)}});
  }
  j["boundary_type_mismatches"] = mismatches;
  return j;
}

Json labeling(const CoxeterSystem& sys, const EdgeLabeling& L, const LabelingReport& r) {
  Json j;
  j["ok"] = r.ok();
  Json edges = Json::array();
  const auto& Y = L.scwol;
  for (std::size_t e = 0; e < Y.scwol.edges().size(); ++e) {
    const auto& a = Y.scwol.edges()[e];
    Json label = Json::array();
    for (int s = 0; s < sys.rank(); ++s) {
      if (L.label[e].c[s] != 0) label.push_back({sys.name(s), int(L.label[e].c[s])});
    }
    edges.push_back({{"from", face(sys, Y.faces[a.from])},
                     {"to", face(sys, Y.faces[a.to])},
                     {"label", label}});
  }
  j["edges"] = edges;
  j["support_failures"] = r.support_failures;
  j["composition_failures"] = r.composition_failures;
  Json fibers = Json::array();
  for (const auto& f : r.fibers) {
    fibers.push_back({{"vertex", f.vertex}, {"base_edge", f.base_edge}, {"ok", f.ok}});
  }
  j["fibers"] = fibers;
  return j;
}

Json covering(const Morphism& m, const CoveringReport& r) {
  Json j;
  j["ok"] = r.ok();
  j["sheet_count"] = r.sheet_count;
  j["problems"] = r.problems;
  const auto& Z = m.target->scwol;
  const auto& Y = m.source->scwol;
  std::map<int, std::vector<const FiberVerdict*>> by_target;
  for (const auto& f : r.fibers) by_target[m.vertex_map[f.vertex]].push_back(&f);
  Json table = Json::array();
  for (int tau = 0; tau < Z.vertex_count(); ++tau) {
    Json row;
    row["vertex"] = Z.label(tau);
    row["sheets"] = tau < static_cast<int>(r.sheets_at.size()) ? r.sheets_at[tau] : 0;
    Json fibers = Json::array();
    for (const auto* f : by_target[tau]) {
      const auto& b = Z.edges()[f->base_edge];
      fibers.push_back({{"source", Y.label(f->vertex)},
                        {"base_edge", {Z.label(b.from), Z.label(b.to)}},
                        {"ok", f->ok}});
    }
    row["fibers"] = fibers;
    table.push_back(std::move(row));
  }
  j["vertices"] = table;
  return j;
}

Json verdict(const DiscretenessVerdict& v) {
  static const char* const names[] = {"finite", "1", "2", "3"};
  Json j;
  j["case"] = names[static_cast<int>(v.kind)];
  j["g0_discrete"] = v.g0_discrete;
  j["g_discrete"] = v.g_discrete;
  j["nerve_rigid"] = v.nerve_rigid;
  j["summary"] = v.to_string();
  return j;
}

Json apartments(const CoxeterSystem& sys, const std::vector<ApartmentFragment>& fragments) {
  Json j;
  j["count"] = fragments.size();
  Json list = Json::array();
  for (const auto& f : fragments) {
    Json emb = Json::array();
    for (const auto& [w, c] : f.embedding) {
      emb.push_back({{"w", to_string(sys, w)}, {"chamber", chamber(sys, c)}});
    }
    list.push_back({{"chambers", chamber_list(sys, f.chambers)}, {"embedding", emb}});
  }
  j["fragments"] = list;
  return j;
}

Json witness(const CoxeterSystem& sys, const ApartmentFragment& a, const ApartmentFragment& b,
             const TransitivityWitness& w) {
  Json j;
  j["from"] = chamber_list(sys, a.chambers);
  j["to"] = chamber_list(sys, b.chambers);
  j["swap_steps"] = w.steps;
  Json table = Json::array();
  for (const auto& [c, d] : w.h.map) {
    table.push_back({chamber(sys, c), chamber(sys, d)});
  }
  j["bijection"] = table;
  return j;
}

Json quotient(const Quotient& q) {
  Json j;
  const auto& Z = q.quotient->scwol;
  j["chains"] = q.subdivision.chains.size();
  j["quotient_vertices"] = Z.vertex_count();
  j["quotient_edges"] = Z.edges().size();
  Json orders = Json::array();
  for (int v = 0; v < Z.vertex_count(); ++v) {
    orders.push_back({{"vertex", Z.label(v)}, {"order", q.quotient->order(v)}});
  }
  j["local_orders"] = orders;
  j["covering"] = covering(q.covering, q.report);
  return j;
}

std::string dot(const Scwol& Y, const std::vector<std::string>& local) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '\n') {
        out += "\\n";
        continue;
      }
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::ostringstream out;
  out << "digraph scwol {\n  rankdir=BT;\n";
  for (int v = 0; v < Y.vertex_count(); ++v) {
    std::string label = Y.label(v);
    if (v < static_cast<int>(local.size())) label += "\n" + local[v];
    out << "  v" << v << " [label=" << quote(label) << "];\n";
  }
  for (const auto& e : Y.edges()) out << "  v" << e.from << " -> v" << e.to << ";\n";
  out << "}\n";
  return out.str();
}

std::vector<std::string> local_group_labels(const ComplexOfGroups& G) {
  const auto& sys = G.ambient->params().system();
  std::vector<std::string> out;
  for (int v = 0; v < G.scwol.vertex_count(); ++v) {
    std::string s = "G" + type_string(sys, G.local[v].components);
    if (G.local[v].stabilizer.size() > 1) {
      s += " x| H" + std::to_string(G.local[v].stabilizer.size());
    }
    out.push_back(s + " (" + std::to_string(G.order(v)) + ")");
  }
  return out;
}

}  // namespace rab::report
