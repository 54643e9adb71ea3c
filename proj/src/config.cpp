#include "rab/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace rab {

using nlohmann::json;

ConfigError::ConfigError(const std::string& msg, int line_no, int column_no)
    : InputError(std::to_string(line_no) + ":" + std::to_string(column_no) + ": " + msg),
      message(msg),
      line(line_no),
      column(column_no) {}

namespace {

// Input iterator that records the offset of the last character the lexer read.
struct TrackingIterator {
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  const char* base = nullptr;
  const char* cur = nullptr;
  std::size_t* last = nullptr;

  reference operator*() const {
    *last = static_cast<std::size_t>(cur - base);
    return *cur;
  }
  TrackingIterator& operator++() {
    ++cur;
    return *this;
  }
  TrackingIterator operator++(int) {
    auto old = *this;
    ++cur;
    return old;
  }
  friend bool operator==(const TrackingIterator& a, const TrackingIterator& b) {
    return a.cur == b.cur;
  }
};

// Maps JSON pointers to the offset of the value's first character.
class PositionIndex : public nlohmann::json_sax<json> {
 public:
  PositionIndex(std::string_view text, const std::size_t* last) : text_(text), last_(last) {}

  std::map<std::string, std::size_t> offsets;

  bool null() override { return scalar(); }
  bool boolean(bool) override { return scalar(); }
  bool number_integer(number_integer_t) override { return scalar(); }
  bool number_unsigned(number_unsigned_t) override { return scalar(); }
  bool number_float(number_float_t, const string_t&) override { return scalar(); }
  bool string(string_t&) override { return scalar(); }
  bool binary(binary_t&) override { return scalar(); }
  bool start_object(std::size_t) override { return open(); }
  bool start_array(std::size_t) override { return open(); }
  bool end_object() override { return close(); }
  bool end_array() override { return close(); }
  bool key(string_t& k) override {
    stack_.back().key = escape(k);
    return true;
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override {
    return false;
  }

 private:
  struct Frame {
    bool is_array = false;
    std::size_t index = 0;
    std::string key;
  };

  static std::string escape(const std::string& k) {
    std::string out;
    for (char c : k) {
      if (c == '~') out += "~0";
      else if (c == '/') out += "~1";
      else out += c;
    }
    return out;
  }

  std::string child_path() {
    std::string p;
    for (const auto& f : stack_) p += "/" + (f.is_array ? std::to_string(f.index) : f.key);
    return p;
  }

  void advance() {
    if (!stack_.empty() && stack_.back().is_array) ++stack_.back().index;
  }

  // Scalar tokens are reported after they end; walk back to their start.
  std::size_t scalar_start() const {
    std::size_t end = *last_;
    if (end < text_.size() && text_[end] == '"') {
      std::size_t i = end;
      while (i > 0) {
        --i;
        if (text_[i] != '"') continue;
        std::size_t slashes = 0;
        while (i > slashes && text_[i - 1 - slashes] == '\\') ++slashes;
        if (slashes % 2 == 0) return i;
      }
      return 0;
    }
    auto token_char = [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
    };
    if (end < text_.size() && !token_char(text_[end]) && end > 0) --end;
    std::size_t i = end;
    while (i > 0 && token_char(text_[i - 1])) --i;
    return i;
  }

  bool scalar() {
    offsets[child_path()] = scalar_start();
    advance();
    return true;
  }
  bool open() {
    offsets[child_path()] = *last_;
    Frame f;
    f.is_array = text_[*last_] == '[';
    stack_.push_back(f);
    return true;
  }
  bool close() {
    stack_.pop_back();
    advance();
    return true;
  }

  std::string_view text_;
  const std::size_t* last_;
  std::vector<Frame> stack_;
};

std::pair<int, int> line_column(std::string_view text, std::size_t offset) {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

class Reader {
 public:
  Reader(std::string_view text, std::map<std::string, std::size_t> offsets)
      : text_(text), offsets_(std::move(offsets)) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& msg) const {
    std::string p = pointer;
    auto it = offsets_.find(p);
    while (it == offsets_.end() && !p.empty()) {
      p.erase(p.rfind('/'));
      it = offsets_.find(p);
    }
    const auto [line, column] = line_column(text_, it == offsets_.end() ? 0 : it->second);
    throw ConfigError(msg, line, column);
  }

 private:
  std::string_view text_;
  std::map<std::string, std::size_t> offsets_;
};

std::string key_path(const std::string& parent, const std::string& key) {
  std::string out = parent + "/";
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

int name_index(const Reader& r, const std::vector<std::string>& names, const json& v,
               const std::string& ptr) {
  if (!v.is_string()) r.fail(ptr, "expected a generator name");
  const auto it = std::find(names.begin(), names.end(), v.get<std::string>());
  if (it == names.end()) r.fail(ptr, "unknown generator '" + v.get<std::string>() + "'");
  return static_cast<int>(it - names.begin());
}

}  // namespace

SystemConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t at = e.byte == 0 ? 0 : e.byte - 1;
    const auto [line, column] = line_column(text, at);
    std::string msg = e.what();
    if (const auto p = msg.find(": "); p != std::string::npos) msg = msg.substr(p + 2);
    throw ConfigError("syntax error: " + msg, line, column);
  }

  std::size_t last = 0;
  PositionIndex index(text, &last);
  TrackingIterator first{text.data(), text.data(), &last};
  TrackingIterator end{text.data(), text.data() + text.size(), &last};
  json::sax_parse(first, end, &index);
  const Reader r(text, index.offsets);

  if (!doc.is_object()) r.fail("", "config must be a JSON object");
  for (const auto& [k, v] : doc.items()) {
    static const std::set<std::string> known{"generators", "commuting", "commutes", "q", "caps"};
    if (!known.contains(k)) r.fail(key_path("", k), "unknown key '" + k + "'");
  }

  SystemConfig cfg;
  if (!doc.contains("generators")) r.fail("", "missing 'generators'");
  const json& gens = doc["generators"];
  if (!gens.is_array() || gens.empty()) r.fail("/generators", "'generators' must be a nonempty list");
  if (gens.size() > static_cast<std::size_t>(kMaxRank)) {
    r.fail("/generators", "at most " + std::to_string(kMaxRank) + " generators");
  }
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string ptr = "/generators/" + std::to_string(i);
    if (!gens[i].is_string() || gens[i].get<std::string>().empty()) {
      r.fail(ptr, "generator names must be nonempty strings");
    }
    const auto name = gens[i].get<std::string>();
    if (std::find(cfg.generators.begin(), cfg.generators.end(), name) != cfg.generators.end()) {
      r.fail(ptr, "duplicate generator '" + name + "'");
    }
    cfg.generators.push_back(name);
  }
  const auto& names = cfg.generators;

  if (doc.contains("commuting") && doc.contains("commutes")) {
    r.fail("/commutes", "give either 'commuting' or 'commutes', not both");
  }
  std::set<std::pair<int, int>> pairs;
  if (doc.contains("commuting")) {
    const json& list = doc["commuting"];
    if (!list.is_array()) r.fail("/commuting", "'commuting' must be a list of pairs");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string ptr = "/commuting/" + std::to_string(i);
      if (!list[i].is_array() || list[i].size() != 2) r.fail(ptr, "expected a pair of names");
      const int s = name_index(r, names, list[i][0], ptr + "/0");
      const int t = name_index(r, names, list[i][1], ptr + "/1");
      if (s == t) r.fail(ptr, "a generator cannot commute with itself");
      if (!pairs.emplace(std::min(s, t), std::max(s, t)).second) r.fail(ptr, "duplicate relation");
    }
  }
  if (doc.contains("commutes")) {
    const json& adj = doc["commutes"];
    if (!adj.is_object()) r.fail("/commutes", "'commutes' must map names to lists");
    std::set<std::pair<int, int>> directed;
    for (const auto& [k, v] : adj.items()) {
      const std::string ptr = key_path("/commutes", k);
      const int s = name_index(r, names, json(k), ptr);
      if (!v.is_array()) r.fail(ptr, "expected a list of names");
      for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string eptr = ptr + "/" + std::to_string(i);
        const int t = name_index(r, names, v[i], eptr);
        if (s == t) r.fail(eptr, "a generator cannot commute with itself");
        if (!directed.emplace(s, t).second) r.fail(eptr, "duplicate relation");
      }
    }
    for (const auto& [k, v] : adj.items()) {
      const int s = name_index(r, names, json(k), key_path("/commutes", k));
      for (std::size_t i = 0; i < v.size(); ++i) {
        const int t = name_index(r, names, v[i], "");
        if (!directed.contains({t, s})) {
          r.fail(key_path("/commutes", k) + "/" + std::to_string(i),
                 "relation list is not symmetric: '" + names[t] + "' does not list '" +
                     names[s] + "'");
        }
        pairs.emplace(std::min(s, t), std::max(s, t));
      }
    }
  }
  cfg.commuting.assign(pairs.begin(), pairs.end());

  if (!doc.contains("q")) r.fail("", "missing 'q'");
  const json& qmap = doc["q"];
  if (!qmap.is_object()) r.fail("/q", "'q' must map generator names to integers");
  cfg.q.assign(names.size(), 0);
  for (const auto& [k, v] : qmap.items()) {
    const std::string ptr = key_path("/q", k);
    const int s = name_index(r, names, json(k), ptr);
    if (!v.is_number_integer()) r.fail(ptr, "q must be an integer");
    const auto value = v.get<long long>();
    if (value < 2) r.fail(ptr, "q must be at least 2");
    if (value > 255) r.fail(ptr, "q must be at most 255");
    cfg.q[s] = static_cast<int>(value);
  }
  for (std::size_t s = 0; s < names.size(); ++s) {
    if (cfg.q[s] == 0) r.fail("/q", "missing q for '" + names[s] + "'");
  }

  if (doc.contains("caps")) {
    const json& caps = doc["caps"];
    if (!caps.is_object()) r.fail("/caps", "'caps' must be an object");
    for (const auto& [k, v] : caps.items()) {
      const std::string ptr = key_path("/caps", k);
      if (!v.is_number_integer() || v.get<long long>() < 0) {
        r.fail(ptr, "caps must be nonnegative integers");
      }
      if (k == "radius") {
        cfg.caps.radius = static_cast<int>(std::min<long long>(v.get<long long>(), 1 << 20));
      } else if (k == "chambers") {
        cfg.caps.chambers = v.get<std::size_t>();
      } else {
        r.fail(ptr, "unknown cap '" + k + "'");
      }
    }
  }
  return cfg;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

CoxeterSystem SystemConfig::system() const { return CoxeterSystem(generators, commuting); }

GraphProduct SystemConfig::group() const { return GraphProduct(system(), q); }

Building SystemConfig::building() const { return Building(group(), caps); }

namespace {

nlohmann::ordered_json system_json(const SystemConfig& cfg) {
  const auto& generators = cfg.generators;
  nlohmann::ordered_json j;
  j["generators"] = generators;
  auto rel = nlohmann::ordered_json::array();
  for (auto [s, t] : cfg.commuting) rel.push_back({generators[s], generators[t]});
  j["commuting"] = rel;
  nlohmann::ordered_json qs = nlohmann::ordered_json::object();
  for (std::size_t s = 0; s < generators.size(); ++s) qs[generators[s]] = cfg.q[s];
  j["q"] = qs;
  return j;
}

}  // namespace

std::string SystemConfig::canonical() const {
  auto j = system_json(*this);
  j["caps"] = {{"radius", caps.radius}, {"chambers", caps.chambers}};
  return j.dump();
}

std::uint64_t SystemConfig::hash() const {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : system_json(*this).dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string SystemConfig::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

}  // namespace rab
