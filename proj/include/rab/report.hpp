#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "rab/config.hpp"
#include "rab/covering.hpp"
#include "rab/symmetry.hpp"

namespace rab::report {

using Json = nlohmann::ordered_json;

// Two-space indented, trailing newline.
std::string dump(const Json& j);

// [[generator, exponent], ...] in canonical syllable order.
Json chamber(const CoxeterSystem& sys, const Chamber& c);
// Rejects unknown generators, bad exponents and non-canonical sequences.
Chamber parse_chamber(const GraphProduct& G, const Json& j);
Json face(const CoxeterSystem& sys, const Face& f);
Json type_set(const CoxeterSystem& sys, TypeSet T);
Json side(const CoxeterSystem& sys, const Side& K);

// {"config_hash", "radius", "chambers": [...]}; chambers sorted.
std::string ball_cache(const SystemConfig& cfg, int radius, const std::vector<Chamber>& chambers);
// Throws InputError on a hash mismatch or a malformed entry.
std::vector<Chamber> load_ball_cache(const SystemConfig& cfg, const std::string& text,
                                     int* radius = nullptr);

// Ball cache of the clump plus the sides it was unfolded along.
Json clump(const SystemConfig& cfg, const Clump& C, const std::vector<Side>& provenance);

Json admissibility(const CoxeterSystem& sys, const AdmissibilityReport& r);
Json labeling(const CoxeterSystem& sys, const EdgeLabeling& L, const LabelingReport& r);
// Fiber table grouped by target vertex, with vertex labels from the scwols.
Json covering(const Morphism& m, const CoveringReport& r);
Json verdict(const DiscretenessVerdict& v);
Json apartments(const CoxeterSystem& sys, const std::vector<ApartmentFragment>& fragments);
Json witness(const CoxeterSystem& sys, const ApartmentFragment& a, const ApartmentFragment& b,
             const TransitivityWitness& w);
Json quotient(const Quotient& q);

// Graphviz digraph; `local` (optional) labels vertices with local groups.
std::string dot(const Scwol& Y, const std::vector<std::string>& local = {});
std::vector<std::string> local_group_labels(const ComplexOfGroups& G);

}  // namespace rab::report
