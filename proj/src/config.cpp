#include "specorder/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace specorder::config {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_key(std::string_view key) {
  if (key.empty() || key.front() == '.' || key.back() == '.') return false;
  for (std::size_t i = 0; i < key.size(); ++i) {
    const char c = key[i];
    const bool word = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    if (!word && !(c == '.' && key[i - 1] != '.')) return false;
  }
  return true;
}

// Reads typed fields and remembers which keys were used.
class Reader {
 public:
  explicit Reader(const RawConfig& raw) : raw_(raw) {}

  const Entry* find(const std::string& key) {
    const auto it = raw_.entries.find(key);
    if (it == raw_.entries.end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }

  [[noreturn]] void fail(const std::string& key, const Entry* e, const std::string& what) const {
    std::ostringstream msg;
    msg << raw_.source;
    if (e) msg << ":" << e->line;
    msg << ": field '" << key << "': " << what;
    throw ConfigError(msg.str());
  }

  const Entry& require(const std::string& key) {
    const Entry* e = find(key);
    if (!e) fail(key, nullptr, "missing required field");
    return *e;
  }

  double to_number(const std::string& key, const Entry& e, std::string_view text) const {
    text = trim(text);
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
      fail(key, &e, "expected a finite number, got '" + std::string(text) + "'");
    return v;
  }

  double number(const std::string& key) { return to_number(key, require(key), require(key).value); }

  double positive(const std::string& key) {
    const double v = number(key);
    if (!(v > 0.0)) fail(key, find(key), "must be positive, got " + find(key)->value);
    return v;
  }

  double non_negative(const std::string& key) {
    const double v = number(key);
    if (v < 0.0) fail(key, find(key), "must be non-negative, got " + find(key)->value);
    return v;
  }

  long long integer(const std::string& key, const Entry& e, std::string_view text, long long lo,
                    long long hi) const {
    text = trim(text);
    long long v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) fail(key, &e, "expected an integer, got '" + std::string(text) + "'");
    if (v < lo || v > hi) {
      std::ostringstream msg;
      msg << "must lie in [" << lo << ", " << hi << "], got " << v;
      fail(key, &e, msg.str());
    }
    return v;
  }

  std::optional<long long> optional_integer(const std::string& key, long long lo, long long hi) {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    return integer(key, *e, e->value, lo, hi);
  }

  std::vector<std::string_view> list(const Entry& e) const {
    std::vector<std::string_view> items;
    std::string_view rest = e.value;
    while (true) {
      const auto comma = rest.find(',');
      items.push_back(trim(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return items;
  }

  /// Every entry must have been read by now.
  void finish() const {
    for (const auto& [key, e] : raw_.entries)
      if (!used_.count(key)) fail(key, &e, "unknown key");
  }

 private:
  const RawConfig& raw_;
  std::set<std::string> used_;
};

ham::KineticSpec read_kinetic(Reader& r, const std::string& prefix) {
  const std::string key = prefix + ".kind";
  const Entry& kind = r.require(key);
  const std::string v(trim(kind.value));
  if (v == "nonrel") return ham::NonRel{r.positive(prefix + ".mu")};
  if (v == "nonrel_two_body") return ham::NonRelTwoBody{r.positive(prefix + ".m")};
  if (v == "salpeter") return ham::Salpeter{r.non_negative(prefix + ".m")};
  r.fail(key, &kind, "unknown kinetic kind '" + v + "' (expected nonrel, nonrel_two_body or salpeter)");
}

ham::PotentialSpec read_potential(Reader& r, const std::string& prefix) {
  const std::string key = prefix + ".kind";
  const Entry& kind = r.require(key);
  const std::string v(trim(kind.value));
  if (v == "coulomb") return ham::Coulomb{r.positive(prefix + ".kappa")};
  if (v == "harmonic") return ham::Harmonic{r.positive(prefix + ".lambda")};
  if (v == "tangent_harmonic") return ham::TangentHarmonic{r.positive(prefix + ".kappa"), r.positive(prefix + ".r0")};
  if (v == "power_sum") {
    const std::string tkey = prefix + ".terms";
    const Entry& e = r.require(tkey);
    ham::PowerSum sum;
    for (auto item : r.list(e)) {
      const auto colon = item.find(':');
      if (colon == std::string_view::npos)
        r.fail(tkey, &e, "expected comma-separated 'coupling:exponent' terms, got '" + std::string(item) + "'");
      sum.terms.push_back({r.to_number(tkey, e, item.substr(0, colon)), r.to_number(tkey, e, item.substr(colon + 1))});
    }
    return sum;
  }
  if (v == "scaled") return ham::scaled(r.number(prefix + ".g"), read_potential(r, prefix + ".inner"));
  r.fail(key, &kind, "unknown potential kind '" + v +
                         "' (expected coulomb, harmonic, tangent_harmonic, power_sum or scaled)");
}

}  // namespace

RawConfig parse(std::string_view text, std::string source) {
  RawConfig raw;
  raw.source = std::move(source);
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    std::ostringstream msg;
    msg << raw.source << ":" << line_no << ": ";
    if (eq == std::string_view::npos) {
      msg << "expected 'key = value', got '" << line << "'";
      throw ConfigError(msg.str());
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!valid_key(key)) {
      msg << "malformed key '" << key << "'";
      throw ConfigError(msg.str());
    }
    if (value.empty()) {
      msg << "field '" << key << "': empty value";
      throw ConfigError(msg.str());
    }
    const auto [it, inserted] = raw.entries.emplace(key, Entry{value, line_no});
    if (!inserted) {
      msg << "field '" << key << "': repeated (first set on line " << it->second.line << ")";
      throw ConfigError(msg.str());
    }
  }
  return raw;
}

RawConfig read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

RunConfig interpret(const RawConfig& raw, Command command) {
  Reader r(raw);
  RunConfig cfg;
  cfg.command = command;

  const std::vector<std::string> sections = command == Command::solve
                                                ? std::vector<std::string>{"problem"}
                                                : std::vector<std::string>{"problem1", "problem2"};
  for (const auto& s : sections)
    cfg.problems.push_back({read_kinetic(r, s + ".kinetic"), read_potential(r, s + ".potential")});

  if (const Entry* e = r.find("levels.l")) {
    cfg.l_values.clear();
    for (auto item : r.list(*e)) {
      const auto l = static_cast<int>(r.integer("levels.l", *e, item, 0, 50));
      for (int seen : cfg.l_values)
        if (seen == l) r.fail("levels.l", e, "repeated l=" + std::to_string(l));
      cfg.l_values.push_back(l);
    }
  }
  if (auto v = r.optional_integer("basis.size", 2, 2000)) cfg.basis_size = static_cast<std::size_t>(*v);
  if (auto v = r.optional_integer("levels.count", 1, 2000)) cfg.level_count = static_cast<std::size_t>(*v);
  if (cfg.level_count > cfg.basis_size)
    r.fail("levels.count", r.find("levels.count"),
           "exceeds basis.size (" + std::to_string(cfg.basis_size) + ")");

  if (const Entry* e = r.find("basis.b")) {
    if (trim(e->value) != "auto") {
      const double b = r.to_number("basis.b", *e, e->value);
      if (!(b > 0.0)) r.fail("basis.b", e, "must be positive or 'auto', got " + e->value);
      cfg.b = b;
    }
  }

  if (command == Command::flow) {
    if (auto v = r.optional_integer("flow.grid", 3, 1000000)) cfg.grid = static_cast<std::size_t>(*v);
    if (auto v = r.optional_integer("flow.richardson", 0, 8)) cfg.richardson = static_cast<int>(*v);
  }
  if (command != Command::solve && r.find("tolerance.verdict")) cfg.tolerance = r.positive("tolerance.verdict");

  if (const Entry* e = r.find("output.format")) {
    cfg.format = std::string(trim(e->value));
    if (cfg.format != "csv" && cfg.format != "json")
      r.fail("output.format", e, "expected csv or json, got '" + cfg.format + "'");
  }
  if (const Entry* e = r.find("output.path")) cfg.out_path = std::string(trim(e->value));

  r.finish();
  for (const auto& [key, e] : raw.entries) cfg.echo[key] = e.value;
  return cfg;
}

}  // namespace specorder::config
