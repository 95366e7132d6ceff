#include "conelight/config.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "conelight/norms.hpp"
#include "json.hpp"

namespace conelight {

using ojson = nlohmann::ordered_json;

namespace {

ojson probe_json(const ProbeSpec& p) {
  return ojson{{"centre", p.centre}, {"radius", p.radius}, {"pol", p.pol}};
}

ojson to_json(const RunConfig& c) {
  ojson dirs = ojson::array();
  for (const Vec3& d : c.directions) dirs.push_back(d);
  ojson probes = ojson::array();
  for (const ProbeSpec& p : c.probes) probes.push_back(probe_json(p));
  ojson j;
  j["charge"] = {{"tau1", c.tau1}, {"tau2", c.tau2},   {"r", c.r},           {"R", c.R},
                 {"Rbar", c.Rbar}, {"q", c.q},         {"axis", c.axis},     {"aperture", c.aperture}};
  j["quadrature"] = {{"rel_tol", c.quad.rel_tol},
                     {"abs_tol", c.quad.abs_tol},
                     {"max_refine", c.quad.max_refine},
                     {"qmc_samples", c.quad.qmc_samples},
                     {"replicates", c.quad.replicates}};
  j["seed"] = c.quad.seed;
  j["grid"] = {{"mags", c.mags},
               {"directions", dirs},
               {"direction_count", c.direction_count},
               {"field", c.field},
               {"field_s", c.field_s}};
  j["decay"] = {{"lambda_min", c.lambda_min},
                {"lambda_max", c.lambda_max},
                {"points", c.decay_points},
                {"directions", c.decay_directions}};
  j["limit_scan"] = {{"s_ladder", c.s_ladder},
                     {"bridge_probe", probe_json(c.bridge_probe)},
                     {"constancy_probe", probe_json(c.constancy_probe)}};
  j["huygens"] = {{"t", c.t_shift}, {"probe_count", c.probe_count}, {"probes", probes}};
  j["out_dir"] = c.out_dir;
  return j;
}

// Reads the keys of `j` into the matching fields; anything else is an error.
class Reader {
 public:
  Reader(const ojson& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }
  template <class T>
  void get(const char* key, T& out) {
    seen_.push_back(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(where_ + "." + key + ": " + e.what());
    }
  }
  const ojson* sub(const char* key) {
    seen_.push_back(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      bool known = false;
      for (const std::string& s : seen_) known = known || s == it.key();
      if (!known) throw ConfigError(where_ + ": unknown key '" + it.key() + "'");
    }
  }

 private:
  const ojson& j_;
  std::string where_;
  std::vector<std::string> seen_;
};

ProbeSpec read_probe(const ojson& j, const std::string& where) {
  ProbeSpec p;
  Reader r(j, where);
  r.get("centre", p.centre);
  r.get("radius", p.radius);
  r.get("pol", p.pol);
  r.finish();
  return p;
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Vec3 random_unit(std::mt19937_64& rng) {
  const double z = 2.0 * unit(rng) - 1.0, phi = 2.0 * M_PI * unit(rng), s = std::sqrt(1.0 - z * z);
  return {s * std::cos(phi), s * std::sin(phi), z};
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid config: " + what);
}

void check_probe(const ProbeSpec& p, const char* name) {
  require(p.radius > 0.0, std::string(name) + " radius must be positive");
  require(norm(p.pol) > 0.0, std::string(name) + " polarisation must be nonzero");
}

}  // namespace

ChargeConfig RunConfig::charge() const { return make_config(tau1, tau2, r, R, Rbar, q, 1.0, axis, aperture); }

void RunConfig::validate() const {
  require(tau1 > 0.0 && tau2 > tau1, "need 0 < tau1 < tau2");
  require(r > 0.0 && R > 0.0 && Rbar > R, "need r > 0 and 0 < R < Rbar");
  require(norm(axis) > 0.0, "cap axis must be nonzero");
  require(aperture > 0.0, "aperture must be positive");
  ChargeConfig c;
  try {
    c = charge();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  require(separation_ok(c), "charge configuration violates the separation condition");
  try {
    quad.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  require(!mags.empty(), "momentum ladder is empty");
  for (double m : mags) require(m > 0.0, "momentum magnitudes must be positive");
  require(!directions.empty() || direction_count > 0, "direction list is empty");
  for (const Vec3& d : directions) require(norm(d) > 0.0, "directions must be nonzero");
  require(field == "m_s" || field == "m_inf" || field == "m_reg", "field must be m_s, m_inf or m_reg");
  require(field_s >= 1.0, "field_s must be >= 1");
  require(lambda_min > 0.0 && lambda_max > lambda_min, "decay window must satisfy 0 < lambda_min < lambda_max");
  require(decay_points >= 2 && decay_directions >= 1, "decay fit needs >= 2 points and >= 1 direction");
  require(!s_ladder.empty(), "s ladder is empty");
  for (std::size_t i = 0; i < s_ladder.size(); ++i) {
    require(s_ladder[i] >= 1.0, "s ladder entries must be >= 1");
    require(i == 0 || s_ladder[i] > s_ladder[i - 1], "s ladder must be increasing");
  }
  check_probe(bridge_probe, "bridge_probe");
  check_probe(constancy_probe, "constancy_probe");
  require(!probes.empty() || probe_count > 0, "Huygens probe list is empty");
  for (const ProbeSpec& p : probes) check_probe(p, "Huygens probe");
}

std::string canonical_json(const RunConfig& c) { return to_json(c).dump(); }

std::string config_digest(const RunConfig& c) {
  const std::string s = canonical_json(c);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(s.data(), s.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("config_digest: SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

RunConfig parse_config(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  Reader top(j, "config");
  if (const ojson* s = top.sub("charge")) {
    Reader r(*s, "charge");
    r.get("tau1", c.tau1);
    r.get("tau2", c.tau2);
    r.get("r", c.r);
    r.get("R", c.R);
    r.get("Rbar", c.Rbar);
    r.get("q", c.q);
    r.get("axis", c.axis);
    r.get("aperture", c.aperture);
    r.finish();
  }
  if (const ojson* s = top.sub("quadrature")) {
    Reader r(*s, "quadrature");
    r.get("rel_tol", c.quad.rel_tol);
    r.get("abs_tol", c.quad.abs_tol);
    r.get("max_refine", c.quad.max_refine);
    r.get("qmc_samples", c.quad.qmc_samples);
    r.get("replicates", c.quad.replicates);
    r.finish();
  }
  top.get("seed", c.quad.seed);
  if (const ojson* s = top.sub("grid")) {
    Reader r(*s, "grid");
    r.get("mags", c.mags);
    r.get("directions", c.directions);
    r.get("direction_count", c.direction_count);
    r.get("field", c.field);
    r.get("field_s", c.field_s);
    r.finish();
  }
  if (const ojson* s = top.sub("decay")) {
    Reader r(*s, "decay");
    r.get("lambda_min", c.lambda_min);
    r.get("lambda_max", c.lambda_max);
    r.get("points", c.decay_points);
    r.get("directions", c.decay_directions);
    r.finish();
  }
  if (const ojson* s = top.sub("limit_scan")) {
    Reader r(*s, "limit_scan");
    r.get("s_ladder", c.s_ladder);
    if (const ojson* p = r.sub("bridge_probe")) c.bridge_probe = read_probe(*p, "limit_scan.bridge_probe");
    if (const ojson* p = r.sub("constancy_probe")) c.constancy_probe = read_probe(*p, "limit_scan.constancy_probe");
    r.finish();
  }
  if (const ojson* s = top.sub("huygens")) {
    Reader r(*s, "huygens");
    r.get("t", c.t_shift);
    r.get("probe_count", c.probe_count);
    if (const ojson* p = r.sub("probes")) {
      if (!p->is_array()) throw ConfigError("huygens.probes: expected an array");
      for (const ojson& e : *p) c.probes.push_back(read_probe(e, "huygens.probes[]"));
    }
    r.finish();
  }
  top.get("out_dir", c.out_dir);
  top.finish();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

FourVector to_four(const std::array<double, 4>& a) { return {a[0], {a[1], a[2], a[3]}}; }

TestField probe_field(const ProbeSpec& p, const std::string& label) {
  const Vec3 e = normalized(p.pol);
  return make_bump(label, to_four(p.centre), p.radius, {0.0, e[0], e[1], e[2]}, FieldKind::spatial);
}

std::vector<Vec3> grid_directions(const RunConfig& c) {
  if (!c.directions.empty()) {
    std::vector<Vec3> out;
    for (const Vec3& d : c.directions) out.push_back(normalized(d));
    return out;
  }
  return generic_directions(c.direction_count, c.quad.seed, normalized(c.axis), 0.0);
}

std::vector<ProbeSpec> huygens_probes(const RunConfig& c) {
  if (!c.probes.empty()) return c.probes;
  std::mt19937_64 rng(c.quad.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<ProbeSpec> out;
  for (int i = 0; i < c.probe_count; ++i) {
    ProbeSpec p;
    p.radius = 0.3 + 0.4 * unit(rng);
    const Vec3 d = random_unit(rng);
    const double rho = 8.0 * unit(rng);
    const double lift = rho + std::sqrt(2.0) * p.radius + 0.5 + 5.5 * unit(rng);
    p.centre = {c.t_shift[0] + lift, c.t_shift[1] + rho * d[0], c.t_shift[2] + rho * d[1], c.t_shift[3] + rho * d[2]};
    p.pol = random_unit(rng);
    out.push_back(p);
  }
  return out;
}

}  // namespace conelight
