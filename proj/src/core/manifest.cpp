#include "manifest.hpp"

#include <cmath>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "correlation.hpp"
#include "error.hpp"
#include "grid.hpp"
#include "hitting.hpp"
#include "limits.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace fhl {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  fail(Errc::ConfigInvalid, path + ": " + what);
}

// An object whose keys must all be consumed; finish() rejects the rest.
class Fields {
 public:
  Fields(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) bad(path_, "expected an object");
  }

  const Json* get(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }
  const Json& need(const std::string& key) {
    const Json* v = get(key);
    if (v == nullptr) bad(at(key), "required");
    return *v;
  }
  std::string at(const std::string& key) const { return path_ + "." + key; }

  // Rejects unknown keys up front so they win over later value errors.
  void allow(std::initializer_list<std::string_view> keys) const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) bad(at(it.key()), "unknown key");
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) bad(at(it.key()), "unknown key");
    }
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::int64_t as_int(const Json& v, const std::string& path, std::int64_t lo = std::numeric_limits<std::int64_t>::min(),
                    std::int64_t hi = std::numeric_limits<std::int64_t>::max()) {
  if (!v.is_number_integer()) bad(path, "expected an integer");
  std::int64_t x = 0;
  if (v.is_number_unsigned()) {
    auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) bad(path, "integer too large");
    x = static_cast<std::int64_t>(u);
  } else {
    x = v.get<std::int64_t>();
  }
  if (x < lo || x > hi) bad(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return x;
}

std::uint64_t as_u64(const Json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  if (v.is_string()) {
    const std::string& s = v.get_ref<const std::string&>();
    try {
      std::size_t used = 0;
      auto x = std::stoull(s, &used, 10);
      if (used == s.size() && !s.empty() && s[0] != '-') return x;
    } catch (const std::exception&) {
    }
  }
  bad(path, "expected a non-negative 64-bit integer");
}

Rational as_rational(const Json& v, const std::string& path) {
  try {
    if (v.is_number_unsigned()) return Rational(Integer(std::to_string(v.get<std::uint64_t>())));
    if (v.is_number_integer()) return Rational(Integer(std::to_string(v.get<std::int64_t>())));
    if (v.is_number_float()) return decimal_rational(v.get<double>());
    if (v.is_string()) return parse_rational(v.get_ref<const std::string&>());
  } catch (const Error& e) {
    bad(path, e.what());
  }
  bad(path, "expected a rational (\"p/q\", integer or decimal)");
}

Integer as_integer(const Json& v, const std::string& path) {
  if (v.is_number_integer()) return as_rational(v, path).get_num();
  if (v.is_string()) {
    Rational q = as_rational(v, path);
    if (!is_integer(q)) bad(path, "expected an integer");
    return q.get_num();
  }
  bad(path, "expected an integer");
}

double as_double(const Json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return as_rational(v, path).get_d();
  bad(path, "expected a number");
}

std::string as_string(const Json& v, const std::string& path) {
  if (!v.is_string()) bad(path, "expected a string");
  return v.get<std::string>();
}

bool as_bool(const Json& v, const std::string& path) {
  if (!v.is_boolean()) bad(path, "expected true or false");
  return v.get<bool>();
}

const Json& as_array(const Json& v, const std::string& path, bool allow_empty = false) {
  if (!v.is_array()) bad(path, "expected an array");
  if (!allow_empty && v.empty()) bad(path, "must not be empty");
  return v;
}

std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

std::string one_of(const std::string& value, const std::string& path, std::initializer_list<const char*> options) {
  std::string list;
  for (const char* o : options) {
    if (value == o) return value;
    list += list.empty() ? o : std::string(", ") + o;
  }
  bad(path, "'" + value + "' is not one of: " + list);
}

int as_level(const Json& v, const std::string& path) { return static_cast<int>(as_int(v, path, 0, kHardLevelCap)); }

std::vector<int> as_levels(const Json& v, const std::string& path) {
  std::vector<int> out;
  const Json& a = as_array(v, path);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_level(a[i], idx(path, i)));
  return out;
}

std::vector<Rational> as_rationals(const Json& v, const std::string& path) {
  std::vector<Rational> out;
  const Json& a = as_array(v, path);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_rational(a[i], idx(path, i)));
  return out;
}

std::vector<std::int64_t> as_ints(const Json& v, const std::string& path, std::int64_t lo) {
  std::vector<std::int64_t> out;
  const Json& a = as_array(v, path);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_int(a[i], idx(path, i), lo));
  return out;
}

// Exact values go out as "p/q" strings; integers too large for JSON numbers
// go out as decimal strings.
Json q_json(const Rational& q) { return to_string(q); }
Json z_json(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}
Json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}
template <class T>
Json opt_q(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_same_v<T, Rational>) {
    return q_json(*v);
  } else {
    return z_json(*v);
  }
}

// ---------------------------------------------------------------- model/target

ModelConfig parse_model(const Json& j, const std::string& path) {
  Fields f(j, path);
  ModelConfig m;
  m.kind = one_of(as_string(f.need("kind"), f.at("kind")), f.at("kind"), {"bernoulli", "prop13", "prop14"});
  if (m.kind == "bernoulli") f.allow({"kind", "gamma", "table"});
  else if (m.kind == "prop14") f.allow({"kind", "gamma0"});
  else f.allow({"kind", "t", "blocks", "m1", "generations"});
  if (m.kind == "bernoulli") {
    const Json* g = f.get("gamma");
    const Json* t = f.get("table");
    if ((g == nullptr) == (t == nullptr)) bad(path, "bernoulli needs exactly one of gamma, table");
    if (g != nullptr) {
      m.gamma = as_rational(*g, f.at("gamma"));
      if (*m.gamma < 0) bad(f.at("gamma"), "must be >= 0");
    } else {
      const Json& a = as_array(*t, f.at("table"));
      for (std::size_t i = 0; i < a.size(); ++i) {
        double p = as_double(a[i], idx(f.at("table"), i));
        if (!(p >= 0 && p <= 1)) bad(idx(f.at("table"), i), "probability outside [0, 1]");
        m.table.push_back(p);
      }
    }
  } else if (m.kind == "prop14") {
    m.gamma0 = as_rational(f.need("gamma0"), f.at("gamma0"));
    if (m.gamma0 < 0 || m.gamma0 > 1) bad(f.at("gamma0"), "must lie in [0, 1]");
  } else {
    if (const Json* v = f.get("t")) m.t = as_rationals(*v, f.at("t"));
    if (const Json* v = f.get("blocks")) m.blocks = as_ints(*v, f.at("blocks"), 1);
    if (const Json* v = f.get("m1")) m.m1 = as_int(*v, f.at("m1"), 1, 62);
    if (const Json* v = f.get("generations")) m.generations = static_cast<std::size_t>(as_int(*v, f.at("generations"), 1, 64));
    if (m.blocks.empty() && m.generations == 0) bad(path, "prop13 needs blocks or generations");
    if (!m.blocks.empty() && m.generations != 0) bad(path, "prop13 takes blocks or generations, not both");
    if (!m.blocks.empty() && !m.t.empty() && m.t.size() < m.blocks.size()) {
      bad(f.at("t"), "needs one value per block");
    }
  }
  f.finish();
  return m;
}

Json model_json(const ModelConfig& m) {
  Json j;
  j["kind"] = m.kind;
  if (m.kind == "bernoulli") {
    if (m.gamma) {
      j["gamma"] = q_json(*m.gamma);
    } else {
      j["table"] = m.table;
    }
  } else if (m.kind == "prop14") {
    j["gamma0"] = q_json(m.gamma0);
  } else {
    if (!m.blocks.empty()) {
      j["blocks"] = m.blocks;
    } else {
      j["m1"] = m.m1;
      j["generations"] = m.generations;
    }
    if (!m.t.empty()) {
      Json t = Json::array();
      for (const auto& q : m.t) t.push_back(q_json(q));
      j["t"] = t;
    }
  }
  return j;
}

TargetConfig parse_target(const Json& j, const std::string& path) {
  Fields f(j, path);
  TargetConfig t;
  t.kind = one_of(as_string(f.need("kind"), f.at("kind")), f.at("kind"),
                  {"full", "point", "uniform", "prop13", "prop14", "schedule"});
  if (t.kind == "full") f.allow({"kind"});
  else if (t.kind == "point") f.allow({"kind", "x"});
  else if (t.kind == "uniform") f.allow({"kind", "count", "ratio", "depth"});
  else if (t.kind == "prop13") f.allow({"kind", "m1", "t", "depth"});
  else if (t.kind == "prop14") f.allow({"kind", "t", "n", "depth"});
  else f.allow({"kind", "generations", "depth"});
  auto depth = [&] { t.depth = static_cast<std::size_t>(as_int(f.need("depth"), f.at("depth"), 1, 4096)); };
  if (t.kind == "point") {
    t.x = as_rational(f.need("x"), f.at("x"));
    if (t.x < 0 || t.x > 1) bad(f.at("x"), "must lie in [0, 1]");
  } else if (t.kind == "uniform") {
    t.count = as_integer(f.need("count"), f.at("count"));
    t.ratio = as_rational(f.need("ratio"), f.at("ratio"));
    depth();
  } else if (t.kind == "prop13") {
    if (const Json* v = f.get("m1")) t.m1 = as_int(*v, f.at("m1"), 1, 62);
    if (const Json* v = f.get("t")) t.t_seq = as_rationals(*v, f.at("t"));
    depth();
  } else if (t.kind == "prop14") {
    t.t = as_rational(f.need("t"), f.at("t"));
    t.n = as_ints(f.need("n"), f.at("n"), 1);
    depth();
  } else if (t.kind == "schedule") {
    const Json& a = as_array(f.need("generations"), f.at("generations"));
    for (std::size_t i = 0; i < a.size(); ++i) {
      Fields g(a[i], idx(f.at("generations"), i));
      Integer c = as_integer(g.need("count"), g.at("count"));
      Rational r = as_rational(g.need("ratio"), g.at("ratio"));
      g.finish();
      t.generations.emplace_back(c, r);
    }
    t.depth = t.generations.size();
    if (const Json* v = f.get("depth")) {
      t.depth = static_cast<std::size_t>(as_int(*v, f.at("depth"), 1, static_cast<std::int64_t>(t.generations.size())));
    }
  }
  f.finish();
  return t;
}

Json target_json(const TargetConfig& t) {
  Json j;
  j["kind"] = t.kind;
  if (t.kind == "point") {
    j["x"] = q_json(t.x);
  } else if (t.kind == "uniform") {
    j["count"] = z_json(t.count);
    j["ratio"] = q_json(t.ratio);
    j["depth"] = t.depth;
  } else if (t.kind == "prop13") {
    j["m1"] = t.m1;
    if (!t.t_seq.empty()) {
      Json a = Json::array();
      for (const auto& q : t.t_seq) a.push_back(q_json(q));
      j["t"] = a;
    }
    j["depth"] = t.depth;
  } else if (t.kind == "prop14") {
    j["t"] = q_json(t.t);
    j["n"] = t.n;
    j["depth"] = t.depth;
  } else if (t.kind == "schedule") {
    Json a = Json::array();
    for (const auto& [c, r] : t.generations) a.push_back(Json{{"count", z_json(c)}, {"ratio", q_json(r)}});
    j["generations"] = a;
    j["depth"] = t.depth;
  }
  return j;
}

// ---------------------------------------------------------------- params

struct HitParams {
  std::vector<std::pair<int, int>> windows;
  std::string trend = "none";
  std::optional<double> final_below, final_above;
};
struct LevelsParams {
  std::vector<int> levels;
  double epsilon = 0.05;
  std::optional<double> beta_bar;
};
struct BoxParams {
  int n_lo = 1, n_hi = 1;
  std::optional<double> expect;
  double tolerance = 0.05;
};
struct Lemma23Params {
  Rational gamma0, beta;
  std::vector<int> levels;
  bool expect_decreasing = true;
};
struct CountParams {
  Rational t;
  std::size_t depth = 1;
  std::optional<Prop14CountingInput> explicit_input;
  Rational gamma0;
  std::int64_t n1 = 0, growth = 30;
  double tolerance = 0.05;
};
struct CorrParams {
  int n_lo = 1, n_hi = 1;
  std::vector<Rational> epsilons;
  std::size_t window = 0;
  std::string method = "exact";
  std::optional<double> max_delta;
  std::optional<std::int64_t> expect_f;
};
struct GridParams {
  int level = 0;
  std::vector<std::uint64_t> coords;
  Closure closure = Closure::Closed;
  std::optional<Rational> beta;
  std::optional<std::pair<int, std::vector<std::uint64_t>>> other;
};
struct LevelsExportParams {
  std::size_t depth = 0;
  std::uint64_t max_intervals = 1u << 22;
};

std::vector<std::uint64_t> as_coords(const Json& v, const std::string& path) {
  std::vector<std::uint64_t> out;
  const Json& a = as_array(v, path);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_u64(a[i], idx(path, i)));
  return out;
}

HitParams parse_hit(const Json& j) {
  Fields f(j, "$.params");
  f.allow({"windows", "trend", "final_below", "final_above"});
  HitParams p;
  const Json& w = as_array(f.need("windows"), f.at("windows"));
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::string path = idx(f.at("windows"), i);
    const Json& pair = as_array(w[i], path);
    if (pair.size() != 2) bad(path, "expected [n_lo, n_hi]");
    int lo = as_level(pair[0], path + "[0]");
    int hi = as_level(pair[1], path + "[1]");
    if (lo < 1 || lo > hi) bad(path, "need 1 <= n_lo <= n_hi");
    p.windows.emplace_back(lo, hi);
  }
  if (const Json* v = f.get("trend")) p.trend = one_of(as_string(*v, f.at("trend")), f.at("trend"), {"none", "decreasing", "increasing"});
  if (const Json* v = f.get("final_below")) p.final_below = as_double(*v, f.at("final_below"));
  if (const Json* v = f.get("final_above")) p.final_above = as_double(*v, f.at("final_above"));
  f.finish();
  return p;
}

LevelsParams parse_levels(const Json& j, bool hn) {
  Fields f(j, "$.params");
  if (hn) f.allow({"levels", "epsilon", "beta_bar"});
  else f.allow({"levels"});
  LevelsParams p;
  p.levels = as_levels(f.need("levels"), f.at("levels"));
  for (std::size_t i = 0; i < p.levels.size(); ++i) {
    if (p.levels[i] < 1) bad(idx(f.at("levels"), i), "levels start at 1");
  }
  if (hn) {
    if (const Json* v = f.get("epsilon")) p.epsilon = as_double(*v, f.at("epsilon"));
    if (const Json* v = f.get("beta_bar")) p.beta_bar = as_double(*v, f.at("beta_bar"));
  }
  f.finish();
  return p;
}

BoxParams parse_box(const Json& j) {
  Fields f(j, "$.params");
  f.allow({"n_lo", "n_hi", "expect", "tolerance"});
  BoxParams p;
  p.n_lo = as_level(f.need("n_lo"), f.at("n_lo"));
  p.n_hi = as_level(f.need("n_hi"), f.at("n_hi"));
  if (p.n_lo < 1 || p.n_lo > p.n_hi) bad("$.params", "need 1 <= n_lo <= n_hi");
  if (const Json* v = f.get("expect")) p.expect = as_double(*v, f.at("expect"));
  if (const Json* v = f.get("tolerance")) p.tolerance = as_double(*v, f.at("tolerance"));
  f.finish();
  return p;
}

Lemma23Params parse_lemma23(const Json& j) {
  Fields f(j, "$.params");
  f.allow({"gamma0", "beta", "levels", "expect_decreasing"});
  Lemma23Params p;
  p.gamma0 = as_rational(f.need("gamma0"), f.at("gamma0"));
  p.beta = as_rational(f.need("beta"), f.at("beta"));
  p.levels = as_levels(f.need("levels"), f.at("levels"));
  if (const Json* v = f.get("expect_decreasing")) p.expect_decreasing = as_bool(*v, f.at("expect_decreasing"));
  f.finish();
  return p;
}

CountParams parse_count(const Json& j) {
  Fields f(j, "$.params");
  f.allow({"t", "depth", "conforming", "n", "m", "tm", "tolerance"});
  CountParams p;
  p.t = as_rational(f.need("t"), f.at("t"));
  p.depth = static_cast<std::size_t>(as_int(f.need("depth"), f.at("depth"), 1, 4096));
  const Json* conf = f.get("conforming");
  const Json* n = f.get("n");
  const Json* m = f.get("m");
  const Json* tm = f.get("tm");
  if (const Json* v = f.get("tolerance")) p.tolerance = as_double(*v, f.at("tolerance"));
  if ((conf == nullptr) == (n == nullptr)) bad("$.params", "needs exactly one of conforming, n");
  if (conf != nullptr) {
    if (m != nullptr || tm != nullptr) bad("$.params", "m and tm only go with an explicit n");
    Fields c(*conf, f.at("conforming"));
    p.gamma0 = as_rational(c.need("gamma0"), c.at("gamma0"));
    p.n1 = as_int(c.need("n1"), c.at("n1"), 1);
    if (const Json* v = c.get("growth")) p.growth = as_int(*v, c.at("growth"), 2, 1 << 20);
    c.finish();
  } else {
    if (m == nullptr || tm == nullptr) bad("$.params", "explicit schedules need n, m and tm");
    Prop14CountingInput in;
    in.t = p.t;
    const Json& na = as_array(*n, f.at("n"));
    for (std::size_t i = 0; i < na.size(); ++i) in.n.push_back(as_integer(na[i], idx(f.at("n"), i)));
    const Json& ma = as_array(*m, f.at("m"));
    for (std::size_t i = 0; i < ma.size(); ++i) in.m.push_back(as_integer(ma[i], idx(f.at("m"), i)));
    in.tm = as_rationals(*tm, f.at("tm"));
    p.explicit_input = std::move(in);
  }
  f.finish();
  return p;
}

CorrParams parse_corr(const Json& j) {
  Fields f(j, "$.params");
  f.allow({"n_lo", "n_hi", "epsilons", "window", "method", "max_delta", "expect_f"});
  CorrParams p;
  p.n_lo = as_level(f.need("n_lo"), f.at("n_lo"));
  p.n_hi = as_level(f.need("n_hi"), f.at("n_hi"));
  if (p.n_lo < 1 || p.n_lo > p.n_hi) bad("$.params", "need 1 <= n_lo <= n_hi");
  p.epsilons = as_rationals(f.need("epsilons"), f.at("epsilons"));
  for (std::size_t i = 0; i < p.epsilons.size(); ++i) {
    if (p.epsilons[i] <= 0) bad(idx(f.at("epsilons"), i), "must be > 0");
  }
  if (const Json* v = f.get("window")) p.window = static_cast<std::size_t>(as_int(*v, f.at("window"), 0, 64));
  if (const Json* v = f.get("method")) p.method = one_of(as_string(*v, f.at("method")), f.at("method"), {"exact", "monte_carlo"});
  if (const Json* v = f.get("max_delta")) p.max_delta = as_double(*v, f.at("max_delta"));
  if (const Json* v = f.get("expect_f")) p.expect_f = as_int(*v, f.at("expect_f"), 0);
  f.finish();
  return p;
}

GridParams parse_grid(const Json& j) {
  Fields f(j, "$.params");
  f.allow({"level", "coords", "closure", "beta", "other"});
  GridParams p;
  p.level = as_level(f.need("level"), f.at("level"));
  p.coords = as_coords(f.need("coords"), f.at("coords"));
  if (const Json* v = f.get("closure")) {
    p.closure = one_of(as_string(*v, f.at("closure")), f.at("closure"), {"closed", "half_open"}) == "closed"
                    ? Closure::Closed
                    : Closure::HalfOpen;
  }
  if (const Json* v = f.get("beta")) p.beta = as_rational(*v, f.at("beta"));
  if (const Json* v = f.get("other")) {
    Fields o(*v, f.at("other"));
    int lvl = as_level(o.need("level"), o.at("level"));
    p.other.emplace(lvl, as_coords(o.need("coords"), o.at("coords")));
    o.finish();
  }
  f.finish();
  return p;
}

LevelsExportParams parse_export(const Json& j) {
  Fields f(j, "$.params");
  f.allow({"depth", "max_intervals"});
  LevelsExportParams p;
  if (const Json* v = f.get("depth")) p.depth = static_cast<std::size_t>(as_int(*v, f.at("depth"), 1, 4096));
  if (const Json* v = f.get("max_intervals")) p.max_intervals = as_u64(*v, f.at("max_intervals"));
  f.finish();
  return p;
}

void check_params(const std::string& kind, const Json& params) {
  if (kind == "hitprob") parse_hit(params);
  else if (kind == "sn") parse_levels(params, false);
  else if (kind == "hn") parse_levels(params, true);
  else if (kind == "boxdim") parse_box(params);
  else if (kind == "lemma23") parse_lemma23(params);
  else if (kind == "prop14-count") parse_count(params);
  else if (kind == "corr") parse_corr(params);
  else if (kind == "grid") parse_grid(params);
  else if (kind == "levels") parse_export(params);
}

bool needs_model(const std::string& kind) {
  return kind == "hitprob" || kind == "sn" || kind == "hn" || kind == "corr";
}
bool needs_target(const std::string& kind) {
  return kind == "hitprob" || kind == "sn" || kind == "hn" || kind == "boxdim" || kind == "levels";
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// ---------------------------------------------------------------- output

struct Column {
  const char* key;
  const char* doc;
};

std::string csv_cell(const Json& v) {
  std::string s;
  if (v.is_null()) return s;
  if (v.is_string()) {
    s = v.get<std::string>();
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ';';
      s += csv_cell(v[i]);
    }
  } else {
    s = v.dump();
  }
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  return s;
}

// Collects rows, streams each as a JSONL line, and renders the CSV at the end.
class Report {
 public:
  Report(const Manifest& m, std::vector<Column> columns, const RecordSink& sink)
      : columns_(std::move(columns)), sink_(sink) {
    summary_.kind = m.kind;
    summary_.digest = manifest_digest(m);
    Json head;
    head["record"] = "manifest";
    head["digest"] = summary_.digest;
    head["tool_version"] = kToolVersion;
    Json canon = to_json(m);
    canon.erase("workers");
    canon.erase("out_dir");
    head["manifest"] = canon;
    emit(head);
  }

  void row(Json payload, bool pass) {
    Json r;
    r["record"] = "row";
    r["digest"] = summary_.digest;
    r["row"] = summary_.rows;
    for (auto it = payload.begin(); it != payload.end(); ++it) r[it.key()] = it.value();
    r["pass"] = pass;
    ++summary_.rows;
    if (!pass) ++summary_.failures;
    rows_.push_back(r);
    emit(r);
  }

  void fail_extra(const std::string& why) {
    ++summary_.failures;
    notes_.push_back(why);
  }

  RunSummary finish(Json extra = Json::object()) {
    summary_.passed = summary_.failures == 0;
    Json s;
    s["record"] = "summary";
    s["digest"] = summary_.digest;
    s["rows"] = summary_.rows;
    s["failures"] = summary_.failures;
    s["passed"] = summary_.passed;
    for (auto it = extra.begin(); it != extra.end(); ++it) s[it.key()] = it.value();
    if (!notes_.empty()) s["notes"] = notes_;
    emit(s);

    std::ostringstream csv;
    for (const auto& c : columns_) csv << "# " << c.key << ": " << c.doc << "\n";
    csv << "# pass: row assertion outcome\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) csv << (i ? "," : "") << columns_[i].key;
    csv << ",pass\n";
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) csv << ',';
        auto it = r.find(columns_[i].key);
        if (it != r.end()) csv << csv_cell(*it);
      }
      csv << ',' << (r["pass"].get<bool>() ? "true" : "false") << "\n";
    }
    summary_.csv = csv.str();
    summary_.jsonl = jsonl_.str();
    return std::move(summary_);
  }

 private:
  void emit(const Json& j) {
    std::string line = j.dump();
    jsonl_ << line << "\n";
    if (sink_) sink_(line);
  }

  std::vector<Column> columns_;
  const RecordSink& sink_;
  RunSummary summary_;
  std::vector<Json> rows_;
  std::vector<std::string> notes_;
  std::ostringstream jsonl_;
};

Json counts_json(const std::vector<Integer>& counts) {
  Json a = Json::array();
  for (const auto& c : counts) a.push_back(z_json(c));
  return a;
}

TrialRng make_rng(const Manifest& m) { return TrialRng{m.seed, stream_tag(m.kind.c_str()), m.workers}; }

// ---------------------------------------------------------------- experiments

RunSummary run_hitprob(const Manifest& m, const RecordSink& sink) {
  HitParams p = parse_hit(m.params);
  SelectionModel model = build_model(*m.model);
  TargetSet target = build_target(*m.target);
  for (auto [lo, hi] : p.windows) {
    check_level(hi);
    target.require_depth(hi);
  }
  Report rep(m,
             {{"n_lo", "first level of the window"},
              {"n_hi", "last level of the window"},
              {"trials", "Monte Carlo trials"},
              {"hits", "trials with some chosen cube meeting the target (count, empirical)"},
              {"oracle", "exact window-hit probability (closed form, double)"},
              {"log_miss", "natural log of the exact miss probability"},
              {"empirical", "hit frequency (empirical)"},
              {"radius", "3 sigma radius of the frequency (empirical)"},
              {"agrees", "empirical within radius of the oracle"}},
             sink);
  TrialRng rng = make_rng(m);
  std::optional<double> prev;
  for (std::size_t i = 0; i < p.windows.size(); ++i) {
    auto [lo, hi] = p.windows[i];
    WindowHit w = window_hit_probability(model, target, lo, hi, m.trials, rng);
    bool pass = w.agrees;
    bool trend_ok = true;
    if (prev && p.trend == "decreasing") trend_ok = w.log_miss > *prev;
    if (prev && p.trend == "increasing") trend_ok = w.log_miss < *prev;
    prev = w.log_miss;
    bool last = i + 1 == p.windows.size();
    bool final_ok = true;
    if (last && p.final_below) final_ok = w.oracle.value_or(1) < *p.final_below;
    if (last && p.final_above) final_ok = final_ok && w.oracle.value_or(0) > *p.final_above;
    pass = pass && trend_ok && final_ok;
    Json r;
    r["n_lo"] = lo;
    r["n_hi"] = hi;
    r["trials"] = w.trials;
    r["hits"] = w.hits;
    r["oracle"] = w.oracle ? num(*w.oracle) : Json(nullptr);
    r["log_miss"] = num(w.log_miss);
    r["empirical"] = num(w.empirical);
    r["radius"] = num(w.radius);
    r["agrees"] = w.agrees;
    r["trend_ok"] = trend_ok;
    r["threshold_ok"] = final_ok;
    r["counts"] = counts_json(w.counts);
    rep.row(std::move(r), pass);
  }
  return rep.finish();
}

RunSummary run_sn(const Manifest& m, const RecordSink& sink) {
  LevelsParams p = parse_levels(m.params, false);
  SelectionModel model = build_model(*m.model);
  TargetSet target = build_target(*m.target);
  for (int n : p.levels) {
    check_level(n);
    target.require_depth(n);
  }
  Report rep(m,
             {{"level", "dyadic level n"},
              {"cells", "N_n, half-open cells meeting the target (exact)"},
              {"p", "P_n (exact model probability, double)"},
              {"mean", "E S_n (exact)"},
              {"second_moment", "E S_n^2 (exact)"},
              {"pz_bound", "(E S_n)^2 / E S_n^2 (exact)"},
              {"pz_bound_q", "same as p/q when rational"},
              {"pos", "P(S_n > 0) (exact)"},
              {"pos_q", "same as p/q when rational"},
              {"empirical_pos", "frequency of S_n > 0 (empirical)"},
              {"empirical_mean", "mean of S_n (empirical)"},
              {"radius", "3 sigma radius of empirical_pos (empirical)"}},
             sink);
  TrialRng rng = make_rng(m);
  for (int n : p.levels) {
    HitStatistics s = sn_statistics(model, target, n, m.trials, rng);
    Json r;
    r["level"] = n;
    r["cells"] = z_json(s.cells);
    r["p"] = num(s.p);
    r["mean"] = num(s.exact_mean);
    r["second_moment"] = num(s.exact_second);
    r["pz_bound"] = num(s.pz_bound);
    r["pz_bound_q"] = opt_q(s.pz_bound_q);
    r["pos"] = num(s.exact_pos);
    r["pos_q"] = opt_q(s.exact_pos_q);
    r["empirical_pos"] = num(s.empirical_pos_freq);
    r["empirical_mean"] = num(s.empirical_mean);
    r["radius"] = num(s.radius);
    r["pz_holds"] = s.pz_holds;
    r["pz_exact_holds"] = s.pz_exact_holds;
    rep.row(std::move(r), s.pz_holds && s.pz_exact_holds);
  }
  return rep.finish();
}

RunSummary run_hn(const Manifest& m, const RecordSink& sink) {
  LevelsParams p = parse_levels(m.params, true);
  SelectionModel model = build_model(*m.model);
  TargetSet target = build_target(*m.target);
  for (int n : p.levels) {
    check_level(n);
    target.require_depth(n);
  }
  Report rep(m,
             {{"level", "dyadic level n"},
              {"balls", "closed intervals of length 2^-n in the greedy cover (exact)"},
              {"gamma_total", "sum of #Gamma_n(B) over the cover (exact)"},
              {"p", "P_n (exact, double)"},
              {"expected_h", "E H_n (exact, double)"},
              {"gamma1_hat", "-log2 P_n / n (exact, double)"},
              {"beta_bar", "box slope used for the bound"},
              {"exponent", "n (beta_bar - gamma1_hat + 2 eps)"},
              {"constant", "E H_n / 2^exponent"}},
             sink);
  for (int n : p.levels) {
    HnStatistics h = hn_upper_statistic(model, target, n, p.beta_bar, p.epsilon);
    Json r;
    r["level"] = n;
    r["balls"] = h.balls;
    r["gamma_total"] = h.gamma_total;
    r["gamma_max"] = h.gamma_max;
    r["p"] = num(h.p);
    r["expected_h"] = num(h.expected_h);
    r["gamma1_hat"] = num(h.gamma1_hat);
    r["beta_bar"] = num(h.beta_bar);
    r["epsilon"] = num(h.epsilon);
    r["exponent"] = num(h.exponent);
    r["constant"] = num(h.constant);
    rep.row(std::move(r), h.bound_holds);
  }
  return rep.finish();
}

RunSummary run_boxdim(const Manifest& m, const RecordSink& sink) {
  BoxParams p = parse_box(m.params);
  TargetSet target = build_target(*m.target);
  check_level(p.n_hi);
  target.require_depth(p.n_hi);
  std::vector<std::pair<int, double>> pts;
  std::vector<Integer> counts;
  for (int n = p.n_lo; n <= p.n_hi; ++n) {
    counts.push_back(target.covering_count(n));
    pts.emplace_back(n, counts.back().get_d());
  }
  BoxDim fit = box_dim_estimate(pts);
  bool fit_ok = !p.expect || std::abs(fit.slope - *p.expect) <= p.tolerance;
  Report rep(m,
             {{"level", "dyadic level n"},
              {"count", "N_n, half-open cells meeting the target (exact)"},
              {"log2_count", "log2 N_n"},
              {"slope", "least-squares slope of log2 N_n on n over the run"},
              {"residual", "root mean square residual of the fit"}},
             sink);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    Json r;
    r["level"] = p.n_lo + static_cast<int>(i);
    r["count"] = z_json(counts[i]);
    r["log2_count"] = num(log2_of(counts[i]));
    r["slope"] = num(fit.slope);
    r["residual"] = num(fit.residual);
    rep.row(std::move(r), fit_ok);
  }
  Json extra;
  extra["slope"] = num(fit.slope);
  extra["intercept"] = num(fit.intercept);
  extra["residual"] = num(fit.residual);
  extra["levels_used"] = fit.used;
  if (p.expect) extra["expect"] = num(*p.expect);
  return rep.finish(extra);
}

RunSummary run_lemma23(const Manifest& m, const RecordSink& sink) {
  Lemma23Params p = parse_lemma23(m.params);
  for (int n : p.levels) check_level(n);
  Report rep(m,
             {{"level", "dyadic level n"},
              {"block", "C_n, points in the block (exact)"},
              {"trials", "Monte Carlo trials"},
              {"covered", "trials whose enlarged cubes cover [0,1] (count)"},
              {"coverage", "covered / trials (empirical)"},
              {"noncover", "1 - coverage (empirical)"},
              {"radius", "3 sigma radius of noncover (empirical)"},
              {"bound_formula", "2^n (1 - 2^(-n beta - 1))^(2^(n (1 - gamma0))) (formula)"},
              {"bound_actual", "same with exponent C_n (formula)"}},
             sink);
  TrialRng rng = make_rng(m);
  std::optional<double> prev;
  for (int n : p.levels) {
    Lemma23Result l = lemma23_coverage(p.gamma0, p.beta, n, m.trials, rng);
    bool dec_ok = !p.expect_decreasing || !prev || l.empirical_noncover < *prev;
    prev = l.empirical_noncover;
    Json r;
    r["level"] = n;
    r["block"] = l.block;
    r["trials"] = l.trials;
    r["covered"] = l.covered;
    r["coverage"] = num(l.empirical_coverage);
    r["noncover"] = num(l.empirical_noncover);
    r["radius"] = num(l.radius);
    r["bound_formula"] = num(l.bound_paper);
    r["bound_actual"] = num(l.bound_actual);
    r["bound_holds"] = l.bound_holds;
    r["decreasing_ok"] = dec_ok;
    rep.row(std::move(r), l.bound_holds && dec_ok);
  }
  return rep.finish();
}

RunSummary run_count(const Manifest& m, const RecordSink& sink) {
  CountParams p = parse_count(m.params);
  Prop14CountingInput in = p.explicit_input ? *p.explicit_input
                                            : conforming_prop14_schedule(p.gamma0, p.t, p.n1, p.depth, p.growth);
  CountingTrace tr = prop14_counting(in, p.depth);
  Report rep(m,
             {{"k", "generation"},
              {"f_count", "#F_k (exact, empty past the bit budget)"},
              {"g_count", "#G'_k (exact, empty past the bit budget)"},
              {"log2_f", "log2 #F_k"},
              {"log2_g", "log2 #G'_k"},
              {"ratio_f", "log2 #F_k / m_k"},
              {"ratio_g", "log2 #G'_k / M_k"}},
             sink);
  for (std::size_t i = 0; i < tr.rows.size(); ++i) {
    const CountingRow& c = tr.rows[i];
    bool pass = true;
    if (!p.explicit_input && i + 1 == tr.rows.size()) {
      pass = std::abs(c.ratio_f - Rational(1 - p.gamma0).get_d()) <= p.tolerance &&
             std::abs(c.ratio_g - p.t.get_d()) <= p.tolerance;
    }
    Json r;
    r["k"] = c.k;
    r["f_count"] = opt_q(c.f_count);
    r["g_count"] = opt_q(c.g_count);
    r["log2_f"] = num(c.log2_f);
    r["log2_g"] = num(c.log2_g);
    r["ratio_f"] = num(c.ratio_f);
    r["ratio_g"] = num(c.ratio_g);
    rep.row(std::move(r), pass);
  }
  Json extra;
  extra["ratio_f_tail"] = num(tr.ratio_f_tail);
  extra["ratio_g_tail"] = num(tr.ratio_g_tail);
  return rep.finish(extra);
}

RunSummary run_corr(const Manifest& m, const RecordSink& sink) {
  CorrParams p = parse_corr(m.params);
  SelectionModel model = build_model(*m.model);
  check_level(p.n_hi);
  Report rep(m,
             {{"n", "dyadic level"},
              {"epsilon", "correlation threshold (exact p/q)"},
              {"f", "f(n, epsilon) (count)"},
              {"log2f_over_n", "log2 f / n"},
              {"source", "exact or monte_carlo"},
              {"delta_est", "max log2 f / n over the tail window"}},
             sink);
  TrialRng rng = make_rng(m);
  Json deltas = Json::array();
  for (const auto& eps : p.epsilons) {
    CorrelationReport c = p.method == "exact" ? f_and_delta(model, p.n_lo, p.n_hi, eps, p.window)
                                              : f_and_delta_empirical(model, p.n_lo, p.n_hi, eps, m.trials, rng, p.window);
    bool delta_ok = !p.max_delta || c.delta_est <= *p.max_delta;
    for (const auto& lv : c.levels) {
      bool f_ok = !p.expect_f || lv.f == *p.expect_f;
      Json r;
      r["n"] = lv.level;
      r["epsilon"] = q_json(eps);
      r["f"] = z_json(lv.f);
      r["log2f_over_n"] = num(lv.log2f_over_n);
      r["source"] = lv.source;
      r["delta_est"] = num(c.delta_est);
      rep.row(std::move(r), f_ok && delta_ok);
    }
    deltas.push_back(Json{{"epsilon", q_json(eps)}, {"delta_est", num(c.delta_est)}});
  }
  return rep.finish(Json{{"deltas", deltas}});
}

Json interval_json(const RationalInterval& iv) { return to_string(iv); }

RunSummary run_grid(const Manifest& m, const RecordSink& sink) {
  GridParams p = parse_grid(m.params);
  Cube q = make_cube(p.level, p.coords, p.closure);
  std::optional<Cube> other;
  if (p.other) other = make_cube(p.other->first, p.other->second, p.closure);
  Report rep(m,
             {{"cube", "level and coordinates"},
              {"extent", "exact extent per axis"},
              {"volume", "exact volume (p/q)"},
              {"linear_index", "row-major index"},
              {"parent", "parent cube, empty at level 0"},
              {"children", "child cubes"},
              {"enlarged", "Q^beta extent when beta is given"},
              {"distance", "exact minimum distance to the other cube"}},
             sink);
  Json r;
  r["cube"] = describe(q);
  Json ext = Json::array();
  for (std::size_t a = 0; a < q.dim(); ++a) ext.push_back(interval_json(q.extent(a)));
  r["extent"] = ext;
  r["volume"] = q_json(q.volume());
  r["linear_index"] = q.linear_index();
  r["parent"] = q.level() > 0 ? Json(describe(parent(q))) : Json(nullptr);
  Json ch = Json::array();
  for (const auto& c : children(q)) ch.push_back(describe(c));
  r["children"] = ch;
  if (p.beta) r["enlarged"] = interval_json(enlarge_beta(q, *p.beta));
  if (other) r["distance"] = q_json(min_distance(q, *other));
  rep.row(std::move(r), true);
  return rep.finish();
}

RunSummary run_levels(const Manifest& m, const RecordSink& sink) {
  LevelsExportParams p = parse_export(m.params);
  CantorSchedule s = build_schedule(*m.target);
  std::size_t depth = p.depth ? p.depth : m.target->depth;
  require(depth <= s.depth(), Errc::DepthInsufficient, "export depth exceeds the schedule");
  CantorLevels lv = build_levels(s, depth, p.max_intervals);
  Report rep(m,
             {{"generation", "k"},
              {"intervals", "N_k (exact)"},
              {"length", "l_k (exact p/q)"},
              {"first", "leftmost interval"},
              {"last", "rightmost interval"}},
             sink);
  for (std::size_t k = 0; k < lv.size(); ++k) {
    Json r;
    r["generation"] = k + 1;
    r["intervals"] = lv[k].size();
    r["length"] = q_json(lv[k].front().width());
    r["first"] = interval_json(lv[k].front());
    r["last"] = interval_json(lv[k].back());
    rep.row(std::move(r), true);
  }
  RunSummary out = rep.finish();
  if (!m.out_dir.empty()) {
    auto path = std::filesystem::path(m.out_dir) / "levels.tsv";
    std::ofstream f(path, std::ios::binary);
    require(static_cast<bool>(f), Errc::Io, "cannot write " + path.string());
    f << export_levels(lv);
    out.files.push_back(path.string());
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(f), Errc::Io, "cannot write " + path.string());
  f << text;
  require(static_cast<bool>(f), Errc::Io, "write failed for " + path.string());
}

}  // namespace

const std::vector<std::string>& manifest_kinds() {
  static const std::vector<std::string> kinds = {"hitprob", "sn",   "hn",   "boxdim", "lemma23",
                                                 "prop14-count", "corr", "grid", "levels"};
  return kinds;
}

Manifest parse_manifest(std::string_view text, std::string_view kind) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    bad("$", std::string("not valid JSON: ") + e.what());
  }
  Fields f(j, "$");
  Manifest m;
  f.allow({"schema", "kind", "seed", "trials", "workers", "level_cap", "model", "target", "params", "out_dir",
           "tool_version"});
  m.schema = static_cast<int>(as_int(f.need("schema"), f.at("schema")));
  if (m.schema != kManifestSchema) bad(f.at("schema"), "unsupported schema version " + std::to_string(m.schema));
  if (const Json* v = f.get("kind")) m.kind = as_string(*v, f.at("kind"));
  if (!kind.empty()) {
    if (!m.kind.empty() && m.kind != kind) bad(f.at("kind"), "config is for '" + m.kind + "', not '" + std::string(kind) + "'");
    m.kind = kind;
  }
  if (m.kind.empty()) bad(f.at("kind"), "required");
  bool known = false;
  for (const auto& k : manifest_kinds()) known = known || k == m.kind;
  if (!known) bad(f.at("kind"), "unknown experiment kind '" + m.kind + "'");
  if (const Json* v = f.get("seed")) m.seed = as_u64(*v, f.at("seed"));
  if (const Json* v = f.get("trials")) {
    m.trials = as_u64(*v, f.at("trials"));
    if (m.trials == 0) bad(f.at("trials"), "must be >= 1");
  }
  if (const Json* v = f.get("workers")) m.workers = static_cast<unsigned>(as_int(*v, f.at("workers"), 1, 1024));
  if (const Json* v = f.get("level_cap")) m.level_cap = static_cast<int>(as_int(*v, f.at("level_cap"), 1, kHardLevelCap));
  if (const Json* v = f.get("model")) m.model = parse_model(*v, f.at("model"));
  if (const Json* v = f.get("target")) m.target = parse_target(*v, f.at("target"));
  if (const Json* v = f.get("params")) {
    if (!v->is_object()) bad(f.at("params"), "expected an object");
    m.params = *v;
  }
  if (const Json* v = f.get("out_dir")) m.out_dir = as_string(*v, f.at("out_dir"));
  if (const Json* v = f.get("tool_version")) m.tool_version = as_string(*v, f.at("tool_version"));
  f.finish();
  if (needs_model(m.kind) && !m.model) bad(f.at("model"), "required for " + m.kind);
  if (needs_target(m.kind) && !m.target) bad(f.at("target"), "required for " + m.kind);
  check_params(m.kind, m.params);
  return m;
}

ModelConfig parse_model_config(const Json& j) { return parse_model(j, "$.model"); }
TargetConfig parse_target_config(const Json& j) { return parse_target(j, "$.target"); }

Manifest load_manifest(const std::string& path, std::string_view kind) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), Errc::Io, "cannot read config " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_manifest(text.str(), kind);
}

Json to_json(const Manifest& m) {
  Json j;
  j["schema"] = m.schema;
  j["kind"] = m.kind;
  j["seed"] = m.seed;
  j["trials"] = m.trials;
  j["workers"] = m.workers;
  if (m.level_cap) j["level_cap"] = *m.level_cap;
  if (m.model) j["model"] = model_json(*m.model);
  if (m.target) j["target"] = target_json(*m.target);
  j["params"] = m.params;
  j["out_dir"] = m.out_dir;
  j["tool_version"] = m.tool_version;
  return j;
}

std::string manifest_digest(const Manifest& m) {
  Json j = to_json(m);
  j.erase("workers");
  j.erase("out_dir");
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << fnv1a(j.dump());
  return hex.str();
}

SelectionModel build_model(const ModelConfig& cfg) {
  if (cfg.kind == "bernoulli") {
    if (cfg.gamma) return BernoulliSpec::power_law(*cfg.gamma);
    return BernoulliSpec::per_level(cfg.table);
  }
  if (cfg.kind == "prop14") return PointProcessSpec::prop14(cfg.gamma0);
  if (!cfg.blocks.empty()) {
    std::vector<Rational> t = cfg.t.empty() ? prop13_default_t(cfg.blocks.size()) : cfg.t;
    t.resize(cfg.blocks.size());
    return PointProcessSpec::prop13(cfg.blocks, t);
  }
  std::vector<Rational> t = cfg.t.empty() ? prop13_default_t(cfg.generations + 1) : cfg.t;
  require(t.size() >= cfg.generations + 1, Errc::ConfigInvalid,
          "$.model.t: needs generations + 1 values");
  Prop13Schedule s = schedule_prop13(t, cfg.m1, cfg.generations);
  std::vector<std::int64_t> blocks(s.n.begin(), s.n.begin() + static_cast<std::ptrdiff_t>(cfg.generations));
  return PointProcessSpec::prop13(blocks, std::vector<Rational>(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(cfg.generations)));
}

CantorSchedule build_schedule(const TargetConfig& cfg) {
  if (cfg.kind == "uniform") return schedule_uniform(cfg.count, cfg.ratio, cfg.depth);
  if (cfg.kind == "prop13") {
    std::vector<Rational> t = cfg.t_seq.empty() ? prop13_default_t(cfg.depth + 1) : cfg.t_seq;
    require(t.size() >= cfg.depth + 1, Errc::ConfigInvalid, "$.target.t: needs depth + 1 values");
    return schedule_prop13(t, cfg.m1, cfg.depth).schedule;
  }
  if (cfg.kind == "prop14") return schedule_prop14(cfg.t, cfg.n, cfg.depth).schedule;
  if (cfg.kind == "schedule") {
    std::vector<Generation> gens;
    for (const auto& [c, r] : cfg.generations) gens.push_back(Generation{ScaledInt::of(c), ScaledRational::of(r)});
    return CantorSchedule(std::move(gens));
  }
  fail(Errc::InvalidArgument, "target '" + cfg.kind + "' has no schedule");
}

TargetSet build_target(const TargetConfig& cfg) {
  if (cfg.kind == "full") return TargetSet::full();
  if (cfg.kind == "point") return TargetSet::point(cfg.x);
  return TargetSet::cantor(build_schedule(cfg), cfg.depth);
}

RunSummary run_manifest(const Manifest& m, const RecordSink& sink) {
  if (m.level_cap) set_level_cap(*m.level_cap);
  std::filesystem::path dir(m.out_dir);
  if (!m.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    require(!ec, Errc::Io, "cannot create " + dir.string() + ": " + ec.message());
  }
  RunSummary out;
  if (m.kind == "hitprob") out = run_hitprob(m, sink);
  else if (m.kind == "sn") out = run_sn(m, sink);
  else if (m.kind == "hn") out = run_hn(m, sink);
  else if (m.kind == "boxdim") out = run_boxdim(m, sink);
  else if (m.kind == "lemma23") out = run_lemma23(m, sink);
  else if (m.kind == "prop14-count") out = run_count(m, sink);
  else if (m.kind == "corr") out = run_corr(m, sink);
  else if (m.kind == "grid") out = run_grid(m, sink);
  else if (m.kind == "levels") out = run_levels(m, sink);
  else fail(Errc::ConfigInvalid, "$.kind: unknown experiment kind '" + m.kind + "'");
  if (!m.out_dir.empty()) {
    write_file(dir / (m.kind + ".jsonl"), out.jsonl);
    write_file(dir / (m.kind + ".csv"), out.csv);
    out.files.insert(out.files.begin(), {(dir / (m.kind + ".jsonl")).string(), (dir / (m.kind + ".csv")).string()});
  }
  return out;
}

}  // namespace fhl
