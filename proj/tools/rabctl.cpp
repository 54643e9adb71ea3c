// rabctl: command-line front end over the rab library.
//
// Exit codes: 0 ok, 1 bad input or usage, 2 cap exceeded, 3 verification
// failed (the report is still written), 4 internal error.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rab/config.hpp"
#include "rab/report.hpp"

namespace {

using namespace rab;
using report::Json;

enum Exit { kOk = 0, kInput = 1, kCap = 2, kVerification = 3, kInternal = 4 };

struct Options {
  std::string config;
  int radius = 1;
  std::optional<std::size_t> cap_chambers;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string dot;
};

struct Outcome {
  Json json;
  bool ok = true;
  std::string dot;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
}

SystemConfig load(const Options& o) {
  auto cfg = load_config(o.config);
  if (o.cap_chambers) cfg.caps.chambers = *o.cap_chambers;
  return cfg;
}

std::string scwol_dot(const Clump& C) {
  const auto Y = scwol_of(C);
  return report::dot(Y.scwol, report::local_group_labels(canonical_cog(C, Y)));
}

Json header(const SystemConfig& cfg, const std::string& command) {
  Json j;
  j["command"] = command;
  j["config_hash"] = cfg.hash_hex();
  return j;
}

std::vector<BallAutomorphism> type_group_on(const Clump& C) {
  std::vector<BallAutomorphism> H;
  for (const auto& p : type_permutation_group(C.building().group())) {
    H.push_back(type_automorphism(C, p));
  }
  return H;
}

Outcome info(const Options& o) {
  const auto cfg = load(o);
  const auto X = cfg.building();
  const auto& sys = X.system();
  Json j = header(cfg, "info");
  j["config"] = Json::parse(cfg.canonical());
  Json simplices = Json::array();
  for (TypeSet T : X.spherical().simplices) simplices.push_back(report::type_set(sys, T));
  j["nerve"] = simplices;
  Json maximal = Json::array();
  for (TypeSet T : X.spherical().maximal) maximal.push_back(report::type_set(sys, T));
  j["maximal_spherical"] = maximal;
  int dimension = 0;
  for (TypeSet T : X.spherical().maximal) dimension = std::max(dimension, cardinality(T));
  j["dimension"] = dimension;
  j["finite"] = sys.is_finite();
  j["type_permutation_group_order"] = type_permutation_group(X.group()).size();
  return {j, true, {}};
}

Outcome ball_cmd(const Options& o) {
  const auto cfg = load(o);
  const auto X = cfg.building();
  const Clump C = ball(X, o.radius);
  Json j = Json::parse(report::ball_cache(cfg, o.radius, C.chambers()));
  return {j, true, o.dot.empty() ? "" : scwol_dot(C)};
}

Outcome unfold_trace(const Options& o) {
  const auto cfg = load(o);
  const auto X = cfg.building();
  const auto& sys = X.system();
  const auto t = ball_by_unfolding(X, o.radius, o.seed);
  Json j = header(cfg, "unfold-trace");
  j["radius"] = o.radius;
  if (o.seed) j["seed"] = *o.seed;
  Json steps = Json::array();
  bool ok = true;
  for (std::size_t i = 0; i < t.sides.size(); ++i) {
    const auto& K = t.sides[i];
    const auto P = sheets(t.clumps[i], K);
    const bool admissible = is_admissible(t.clumps[i + 1]).admissible;
    const bool law = static_cast<int>(P.blocks.size()) == X.q(K.type) - 1;
    ok = ok && admissible && law;
    steps.push_back({{"side", report::side(sys, K)},
                     {"sheets", P.blocks.size()},
                     {"new_chambers", P.new_chambers.size()},
                     {"chambers", t.clumps[i + 1].size()},
                     {"admissible", admissible},
                     {"sheet_law", law}});
  }
  j["steps"] = steps;
  j["ball_at"] = t.ball_at;
  const bool equal = t.clumps.back().chambers() == X.ball_chambers(o.radius);
  ok = ok && equal;
  j["equals_ball"] = equal;
  j["clump"] = report::clump(cfg, t.clumps.back(), t.sides);
  j["ok"] = ok;
  return {j, ok, o.dot.empty() ? "" : scwol_dot(t.clumps.back())};
}

Outcome label(const Options& o) {
  const auto cfg = load(o);
  const auto X = cfg.building();
  const auto t = ball_by_unfolding(X, o.radius, o.seed);
  const auto L = label_trace(t).back();
  const auto r = verify_labeling(t.clumps.back(), L);
  Json j = header(cfg, "label");
  j["radius"] = o.radius;
  j["labeling"] = report::labeling(X.system(), L, r);
  return {j, r.ok(), o.dot.empty() ? "" : scwol_dot(t.clumps.back())};
}

Outcome verify(const Options& o) {
  const auto cfg = load(o);
  const auto X = cfg.building();
  const auto t = ball_by_unfolding(X, o.radius, o.seed);
  const auto& C = t.clumps.back();
  const auto L = label_trace(t).back();
  const auto lr = verify_labeling(C, L);
  const auto m = labeling_morphism(C, L);
  const auto cr = verify_covering(m);
  const bool agree = lr.fibers == cr.fibers;
  const bool ok = lr.ok() && cr.ok() && agree && cr.sheet_count == C.size();
  Json j = header(cfg, "verify-covering");
  j["radius"] = o.radius;
  if (o.seed) j["seed"] = *o.seed;
  j["chambers"] = C.size();
  j["labeling_ok"] = lr.ok();
  j["covering_ok"] = cr.ok();
  j["fiber_checks_agree"] = agree;
  j["pass"] = ok;
  j["covering"] = report::covering(m, cr);
  return {j, ok, o.dot.empty() ? "" : scwol_dot(C)};
}

Outcome index_cmd(const Options& o) {
  const auto cfg = load(o);
  const auto X = cfg.building();
  const auto t = ball_by_unfolding(X, o.radius, o.seed);
  const auto& C = t.clumps.back();
  const auto n = lattice_index(C, label_trace(t).back());
  Json j = header(cfg, "index");
  j["radius"] = o.radius;
  j["index"] = n;
  j["chambers"] = C.size();
  return {j, n == C.size(), {}};
}

Outcome classify(const Options& o) {
  const auto cfg = load(o);
  Json j = header(cfg, "classify");
  j["verdict"] = report::verdict(classify_discreteness(cfg.group()));
  return {j, true, {}};
}

Outcome apartments_cmd(const Options& o) {
  const auto cfg = load(o);
  const auto X = cfg.building();
  Json j = header(cfg, "apartments");
  j["radius"] = o.radius;
  j["apartments"] = report::apartments(X.system(), apartments_through_base(X, o.radius));
  return {j, true, {}};
}

Outcome witness_cmd(const Options& o) {
  const auto cfg = load(o);
  const auto X = cfg.building();
  const auto frags = apartments_through_base(X, o.radius);
  const Clump C = ball(X, o.radius);
  Json j = header(cfg, "witness");
  j["radius"] = o.radius;
  j["fragments"] = frags.size();
  Json list = Json::array();
  bool ok = true;
  for (std::size_t a = 0; a < frags.size(); ++a) {
    for (std::size_t b = 0; b < frags.size(); ++b) {
      const auto w = transitivity_witness(X, frags[a], frags[b], o.radius);
      bool good = check_automorphism(C, w.h).empty();
      for (const auto& [wel, c] : frags[a].embedding) {
        good = good && w.h(c) == frags[b].embedding.at(wel);
      }
      ok = ok && good;
      Json x = report::witness(X.system(), frags[a], frags[b], w);
      x["verified"] = good;
      list.push_back(std::move(x));
    }
  }
  j["witnesses"] = list;
  j["pass"] = ok;
  return {j, ok, {}};
}

Outcome quotient_cmd(const Options& o) {
  const auto cfg = load(o);
  const auto X = cfg.building();
  const Clump C = ball(X, o.radius);
  const auto q = quotient_cog(C, type_group_on(C));
  Json j = header(cfg, "quotient");
  j["radius"] = o.radius;
  j["group_order"] = type_permutation_group(X.group()).size();
  j["quotient"] = report::quotient(q);
  j["pass"] = q.report.ok();
  std::string d;
  if (!o.dot.empty()) d = report::dot(q.quotient->scwol, report::local_group_labels(*q.quotient));
  return {j, q.report.ok(), d};
}

void diagnose(int code, const std::string& kind, const std::string& message,
              std::optional<std::size_t> partial = {}) {
  Json j;
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = code;
  if (partial) j["partial"] = *partial;
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regular right-angled buildings: balls, unfoldings, coverings, symmetry"};
  app.require_subcommand(1);
  Options o;
  std::function<Outcome(const Options&)> run;

  struct Command {
    const char* name;
    const char* help;
    Outcome (*fn)(const Options&);
    bool radius;
    bool seed;
    bool dot;
  };
  const Command commands[] = {
      {"info", "Generators, nerve and symmetry of a system", info, false, false, false},
      {"ball", "Ball cache of radius n around the base chamber", ball_cmd, true, false, true},
      {"unfold-trace", "Unfold Y_0 to Y_n and report every step", unfold_trace, true, true, true},
      {"label", "Edge labeling of Y_n with its checks", label, true, true, true},
      {"verify-covering", "Verify G_X(Y_n) -> G_X(Y_0)", verify, true, true, true},
      {"index", "Index of the lattice of Y_n in Gamma_0", index_cmd, true, true, false},
      {"classify", "Discreteness verdict", classify, false, false, false},
      {"apartments", "Apartment fragments through the base chamber", apartments_cmd, true, false,
       false},
      {"witness", "Strong transitivity witnesses for all fragment pairs", witness_cmd, true,
       false, false},
      {"quotient", "Quotient by the type-permutation group", quotient_cmd, true, false, true},
  };
  for (const auto& s : commands) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("config", o.config, "System config (JSON)")->required();
    sub->add_option("--out", o.out, "Write the JSON report here instead of stdout");
    sub->add_option("--cap-chambers", o.cap_chambers, "Override the chamber cap");
    if (s.radius) sub->add_option("--radius", o.radius, "Ball radius n")->check(CLI::NonNegativeNumber);
    if (s.seed) sub->add_option("--seed", o.seed, "Shuffle side order with this seed");
    if (s.dot) sub->add_option("--dot", o.dot, "Also write a Graphviz file");
    sub->callback([&run, fn = s.fn] { run = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    diagnose(kInput, "usage", e.what());
    return kInput;
  }

  try {
    const auto outcome = run(o);
    const auto text = report::dump(outcome.json);
    if (o.out.empty()) {
      std::cout << text;
    } else {
      write_file(o.out, text);
    }
    if (!o.dot.empty()) write_file(o.dot, outcome.dot);
    if (!outcome.ok) {
      diagnose(kVerification, "verification", "check failed; see report");
      return kVerification;
    }
    return kOk;
  } catch (const ConfigError& e) {
    Json j;
    j["error"] = "config";
    j["message"] = e.message;
    j["line"] = e.line;
    j["column"] = e.column;
    j["exit_code"] = int(kInput);
    std::cerr << j.dump() << "\n";
    return kInput;
  } catch (const SizeError& e) {
    diagnose(kCap, "cap", e.what(), e.partial);
    return kCap;
  } catch (const VerificationError& e) {
    diagnose(kVerification, "verification", e.what());
    return kVerification;
  } catch (const InputError& e) {
    diagnose(kInput, "input", e.what());
    return kInput;
  } catch (const DomainError& e) {
    diagnose(kInput, "domain", e.what());
    return kInput;
  } catch (const std::exception& e) {
    diagnose(kInternal, "internal", e.what());
    return kInternal;
  }
}
