#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rab/building.hpp"
#include "rab/error.hpp"

namespace rab {

// Parse failure anchored at a 1-based line and column of the input text.
struct ConfigError : InputError {
  ConfigError(const std::string& message, int line_no, int column_no);
  std::string message;
  int line;
  int column;
};

struct SystemConfig {
  std::vector<std::string> generators;
  // Index pairs (i < j), sorted; absent pairs have m = infinity.
  std::vector<std::pair<int, int>> commuting;
  std::vector<int> q;
  Caps caps;

  CoxeterSystem system() const;
  GraphProduct group() const;
  Building building() const;

  // Canonical single-line JSON; equal configs give equal bytes.
  std::string canonical() const;
  // FNV-1a of the canonical system part (caps excluded, so caches survive
  // cap changes).
  std::uint64_t hash() const;
  std::string hash_hex() const;
};

// Format:
//   {"generators": ["s", "t"],
//    "commuting": [["s", "t"]],            or "commutes": {"s": ["t"], "t": ["s"]}
//    "q": {"s": 2, "t": 3},
//    "caps": {"radius": 6, "chambers": 200000}}   (optional)
SystemConfig parse_config(std::string_view text);
SystemConfig load_config(const std::string& path);

}  // namespace rab
