#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace latbump::cli {

using nlohmann::json;

std::vector<std::string> fixture_names() { return {"tensor-0.4", "tensor-0.4-offset", "plateau-0.2-0.45", "box-1"}; }

BumpProfile fixture(const std::string& name, int n) {
  const int d = 2 * n;
  if (n != 1 && n != 2) throw ConfigError("dimension must be 1 or 2");
  if (name == "tensor-0.4") return make_bump(BumpKind::tensor_exp, std::vector<double>(d, 0.0), {0.4});
  if (name == "tensor-0.4-offset") {
    std::vector<double> c(d, 0.0);
    c[0] = 0.25;
    c[d - 1] = -0.25;
    return make_bump(BumpKind::tensor_exp, c, {0.4});
  }
  if (name == "plateau-0.2-0.45") return make_plateau(d, 0.2, 0.45);
  // support [-1,1]^{2n}: condition (B) fails
  if (name == "box-1") return make_bump(BumpKind::tensor_exp, std::vector<double>(d, 0.0), {1.0});
  std::string known;
  for (const auto& f : fixture_names()) known += (known.empty() ? "" : ", ") + f;
  throw ConfigError("unknown phi fixture '" + name + "' (known: " + known + ")");
}

json profile_to_json(const BumpProfile& b) {
  json j{{"kind", to_string(b.kind)},
         {"center", b.center},
         {"radius", b.radius},
         {"amplitude", {b.amplitude.real(), b.amplitude.imag()}}};
  if (!b.inner.empty()) j["inner"] = b.inner;
  return j;
}

BumpProfile profile_from_json(const json& j) {
  try {
    BumpProfile b;
    b.kind = bump_kind_from_string(j.at("kind").get<std::string>());
    b.center = j.at("center").get<std::vector<double>>();
    b.radius = j.at("radius").get<std::vector<double>>();
    if (j.contains("inner")) b.inner = j["inner"].get<std::vector<double>>();
    if (j.contains("amplitude")) {
      const auto a = j["amplitude"].get<std::vector<double>>();
      b.amplitude = {a.at(0), a.size() > 1 ? a[1] : 0.0};
    }
    if (b.kind == BumpKind::plateau) {
      if (b.inner.empty()) throw ConfigError("plateau profile needs 'inner'");
      auto p = make_plateau(b.dim(), b.inner.at(0), b.radius.at(0));
      p.center = b.center;
      p.amplitude = b.amplitude;
      return p;
    }
    return make_bump(b.kind, b.center, b.radius, b.amplitude);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad phi profile: ") + e.what());
  }
}

json coefficients_to_json(const LatticeCoefficients& a) {
  json arr = json::array();
  for (const auto& [mu, v] : a.entries) {
    std::vector<int> m1(mu.first.begin(), mu.first.begin() + a.n), m2(mu.second.begin(), mu.second.begin() + a.n);
    arr.push_back({{"mu1", m1}, {"mu2", m2}, {"value", {v.real(), v.imag()}}});
  }
  return arr;
}

LatticeCoefficients coefficients_from_json(const json& j, int n) {
  LatticeCoefficients a;
  a.n = n;
  try {
    for (const auto& e : j) {
      const auto m1 = e.at("mu1").get<std::vector<int>>(), m2 = e.at("mu2").get<std::vector<int>>();
      if (static_cast<int>(m1.size()) != n || static_cast<int>(m2.size()) != n)
        throw ConfigError("coefficient entry has wrong dimension");
      IntVec k1{}, k2{};
      for (int d = 0; d < n; ++d) {
        k1[d] = m1[d];
        k2[d] = m2[d];
      }
      cplx v = 1.0;
      if (e.contains("value")) {
        const auto& val = e["value"];
        v = val.is_array() ? cplx(val.at(0).get<double>(), val.size() > 1 ? val[1].get<double>() : 0.0)
                           : cplx(val.get<double>());
      }
      a.entries[{k1, k2}] = v;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad coefficient entries: ") + e.what());
  }
  return a;
}

json exponent_to_json(double p) { return std::isinf(p) ? json("inf") : json(p); }

double exponent_from_json(const json& j) {
  try {
    if (j.is_string()) return parse_exponent(j.get<std::string>());
    return check_exponent(j.get<double>());
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad exponent: ") + e.what());
  }
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["dimension"] = c.dimension;
  j["grid"] = {{"L", c.L}, {"s", c.s}};
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["phi"] = c.phi_name == "custom" ? profile_to_json(c.phi) : json(c.phi_name);
  json a{{"mode", c.a.mode}, {"support", c.a.support}, {"radius", c.a.radius}, {"family", c.a.family}};
  if (c.a.mode == "explicit") a["entries"] = coefficients_to_json(c.a.entries);
  j["a"] = a;
  const auto& e = c.exponents;
  j["exponents"] = {{"p1", exponent_to_json(e.p1)}, {"p2", exponent_to_json(e.p2)}, {"p", exponent_to_json(e.p)},
                    {"q1", exponent_to_json(e.q1)}, {"q2", exponent_to_json(e.q2)}, {"q", exponent_to_json(e.q)}};
  j["space"] = to_string(c.space);
  const auto& s = c.search;
  j["search"] = {{"starts", s.starts},           {"steps", s.steps},         {"shrink", s.shrink},
                 {"support_margin", s.support_margin}, {"mode_margin", s.mode_margin},
                 {"torus_points", s.torus_points}, {"random_pool", s.random_pool}};
  j["window_outer"] = c.window_outer;
  j["period"] = c.period;
  j["truncation"] = c.truncation;
  j["stability_bound"] = c.stability_bound;
  j["epsilons"] = c.epsilons;
  j["xi0"] = c.xi0;
  j["eta0"] = c.eta0;
  j["necessity"] = c.necessity;
  j["out"] = c.out;
  return j;
}

namespace {

template <class T>
void take(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  take(j, "dimension", c.dimension);
  if (c.dimension != 1 && c.dimension != 2) throw ConfigError("dimension must be 1 or 2");
  if (j.contains("grid")) {
    take(j["grid"], "L", c.L);
    take(j["grid"], "s", c.s);
  }
  take(j, "seed", c.seed);
  take(j, "threads", c.threads);
  if (j.contains("phi")) {
    if (j["phi"].is_string()) {
      c.phi_name = j["phi"].get<std::string>();
    } else {
      c.phi_name = "custom";
      c.phi = profile_from_json(j["phi"]);
      if (c.phi.dim() != 2 * c.dimension) throw ConfigError("phi must live on R^n x R^n");
    }
  }
  if (c.phi_name != "custom") c.phi = fixture(c.phi_name, c.dimension);
  if (j.contains("a")) {
    const auto& a = j["a"];
    take(a, "mode", c.a.mode);
    take(a, "support", c.a.support);
    take(a, "radius", c.a.radius);
    take(a, "family", c.a.family);
    if (c.a.mode == "explicit") {
      if (!a.contains("entries")) throw ConfigError("explicit a needs 'entries'");
      c.a.entries = coefficients_from_json(a["entries"], c.dimension);
    } else if (c.a.mode != "random" && c.a.mode != "delta") {
      throw ConfigError("a.mode must be random, explicit or delta");
    }
  }
  if (c.a.family < 1) throw ConfigError("a.family must be >= 1");
  if (j.contains("exponents")) {
    const auto& e = j["exponents"];
    for (auto [key, dst] : {std::pair{"p1", &c.exponents.p1}, {"p2", &c.exponents.p2}, {"p", &c.exponents.p},
                            {"q1", &c.exponents.q1}, {"q2", &c.exponents.q2}, {"q", &c.exponents.q}})
      if (e.contains(key)) *dst = exponent_from_json(e[key]);
  }
  if (j.contains("space")) {
    try {
      c.space = space_from_string(j["space"].get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("search")) {
    const auto& s = j["search"];
    take(s, "starts", c.search.starts);
    take(s, "steps", c.search.steps);
    take(s, "shrink", c.search.shrink);
    take(s, "support_margin", c.search.support_margin);
    take(s, "mode_margin", c.search.mode_margin);
    take(s, "torus_points", c.search.torus_points);
    take(s, "random_pool", c.search.random_pool);
  }
  take(j, "window_outer", c.window_outer);
  take(j, "period", c.period);
  take(j, "truncation", c.truncation);
  take(j, "stability_bound", c.stability_bound);
  take(j, "epsilons", c.epsilons);
  take(j, "xi0", c.xi0);
  take(j, "eta0", c.eta0);
  take(j, "necessity", c.necessity);
  take(j, "out", c.out);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

std::vector<LatticeCoefficients> coefficient_family(const ExperimentConfig& c) {
  if (c.a.mode == "explicit") return {c.a.entries};
  if (c.a.mode == "delta") return {LatticeCoefficients::delta(c.dimension)};
  std::vector<LatticeCoefficients> out;
  for (int i = 0; i < c.a.family; ++i)
    out.push_back(random_coefficients(c.dimension, c.a.support, c.a.radius, c.seed + static_cast<std::uint64_t>(i)));
  return out;
}

std::pair<int, int> parse_grid(const std::string& text) {
  std::istringstream in(text);
  int L = 0, s = 0;
  char comma = 0;
  if (!(in >> L >> comma >> s) || comma != ',' || !in.eof() || L <= 0 || s <= 0)
    throw ConfigError("--grid expects L,s with positive integers, got '" + text + "'");
  return {L, s};
}

}  // namespace latbump::cli
