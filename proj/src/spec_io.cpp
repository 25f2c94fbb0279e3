#include "superwarp/spec_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include "toml.hpp"

namespace superwarp {

namespace {

[[noreturn]] void fail(const std::string& source, const std::string& msg) {
  throw ParseError(source + ": " + msg);
}

std::string required_string(const toml::table& t, std::string_view key, const std::string& where) {
  auto v = t[key].value<std::string>();
  if (!v) fail(where, "missing string '" + std::string(key) + "'");
  return *v;
}

Parity parse_parity(const std::string& s, const std::string& where) {
  if (s == "even") return Parity::even;
  if (s == "odd") return Parity::odd;
  fail(where, "parity must be \"even\" or \"odd\", got \"" + s + "\"");
}

Assumptions parse_assumptions(const toml::table* t, const std::string& where) {
  Assumptions a;
  if (!t) return a;
  if (auto* pos = (*t)["positive"].as_array())
    for (const auto& e : *pos) {
      auto s = e.value<std::string>();
      if (!s) fail(where, "assumptions.positive must list names");
      a.require_positive(*s);
    }
  if (auto* nv = (*t)["nonvanishing"].as_array())
    for (const auto& e : *nv) {
      auto s = e.value<std::string>();
      if (!s) fail(where, "assumptions.nonvanishing must list expressions");
      a.nonvanishing.push_back(parse_rational(*s));
    }
  if (auto* iv = (*t)["intervals"].as_table())
    for (const auto& [k, v] : *iv) {
      auto* arr = v.as_array();
      if (!arr || arr->size() != 2) fail(where, "interval for " + std::string(k.str()) + " needs [lo, hi]");
      auto lo = (*arr)[0].value<double>(), hi = (*arr)[1].value<double>();
      if (!lo || !hi || *lo >= *hi) fail(where, "bad interval for " + std::string(k.str()));
      auto& cur = a.intervals[std::string(k.str())];
      cur.lo = std::max(cur.lo, *lo);
      cur.hi = std::min(cur.hi, *hi);
    }
  return a;
}

ManifoldSpec parse_manifold(const toml::table& t, const std::string& where) {
  std::string name = t["name"].value_or(std::string("manifold"));
  auto* coords = t["coordinates"].as_array();
  if (!coords || coords->empty()) fail(where, "missing [[coordinates]]");
  std::vector<Coordinate> cs;
  for (const auto& c : *coords) {
    auto* ct = c.as_table();
    if (!ct) fail(where, "coordinates must be tables");
    cs.push_back({required_string(*ct, "name", where),
                  parse_parity(ct->get("parity") ? required_string(*ct, "parity", where) : "even",
                               where)});
  }
  Chart chart;
  try {
    chart = Chart(std::move(cs));
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
  std::map<std::pair<std::string, std::string>, std::string> entries;
  if (auto* metric = t["metric"].as_array()) {
    for (const auto& m : *metric) {
      auto* mt = m.as_table();
      if (!mt) fail(where, "metric entries must be tables");
      auto* pair = (*mt)["pair"].as_array();
      if (!pair || pair->size() != 2) fail(where, "metric entry needs pair = [\"I\", \"J\"]");
      auto i = (*pair)[0].value<std::string>(), j = (*pair)[1].value<std::string>();
      if (!i || !j) fail(where, "metric pair must name coordinates");
      for (const auto& n : {*i, *j})
        if (chart.index_of(n) < 0) fail(where, "metric names unknown coordinate " + n);
      if (!entries.emplace(std::make_pair(*i, *j), required_string(*mt, "value", where)).second)
        fail(where, "duplicate metric entry (" + *i + "," + *j + ")");
    }
  } else {
    fail(where, "missing [[metric]] entries");
  }
  Parity mp = parse_parity(t["metric_parity"].value_or(std::string("even")), where);
  Assumptions a = parse_assumptions(t["assumptions"].as_table(), where);
  ManifoldSpec m = build_manifold(name, chart, entries, mp, a);
  if (auto* p = t["P"].as_table()) m.P = parse_field(required_string(*p, "field", where), m.chart);
  return m;
}

}  // namespace

LoadedSpec parse_spec(std::string_view text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << e.description() << " (line " << e.source().begin.line << ")";
    fail(source, os.str());
  }
  LoadedSpec out;
  out.checksum = fnv1a_hex(text);
  std::string kind = root["kind"].value_or(std::string("manifold"));
  if (kind == "manifold") {
    ManifoldSpec m = parse_manifold(root, source);
    validate(m);
    out.spec = std::move(m);
  } else if (kind == "warped") {
    WarpedSpec w;
    w.name = root["name"].value_or(std::string());
    auto* b = root["base"].as_table();
    auto* f = root["fiber"].as_table();
    if (!b || !f) fail(source, "warped spec needs [base] and [fiber] tables");
    w.base = parse_manifold(*b, source + " [base]");
    w.fiber = parse_manifold(*f, source + " [fiber]");
    validate(w.base);
    validate(w.fiber);
    w.h = root["h"].value_or(std::string("h(t)"));
    if (auto* p = root["P"].as_table()) {
      std::string loc = required_string(*p, "location", source);
      if (loc == "base")
        w.p_location = PLocation::base;
      else if (loc == "fiber")
        w.p_location = PLocation::fiber;
      else if (loc != "none")
        fail(source, "P.location must be base, fiber or none");
      if (w.p_location != PLocation::none) w.p = required_string(*p, "field", source);
    }
    try {
      WarpedProduct check(w);
      validate(check.product());
    } catch (const DomainError& e) {
      throw InvariantViolation("warped-product", e.what());
    }
    out.spec = std::move(w);
  } else {
    fail(source, "kind must be \"manifold\" or \"warped\"");
  }
  return out;
}

LoadedSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str(), path.filename().string());
}

std::filesystem::path bundled_spec_dir() { return SUPERWARP_SPEC_DIR; }

std::vector<std::filesystem::path> bundled_specs() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(bundled_spec_dir()))
    if (e.path().extension() == ".toml") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace superwarp
