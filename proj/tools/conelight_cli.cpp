#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "conelight/bridge.hpp"
#include "conelight/suite.hpp"

using namespace conelight;

namespace {

enum Exit { kOk = 0, kCriterion = 1, kUsage = 2, kNumeric = 3 };

struct Flags {
  std::string config, out, only;
  std::optional<std::uint64_t> seed;
  std::optional<double> synthetic;
  bool list = false;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// RFC 4180: quote fields holding commas, quotes or line breaks.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::filesystem::path out_path(const RunConfig& c, const std::string& name) {
  std::filesystem::create_directories(c.out_dir);
  return std::filesystem::path(c.out_dir) / name;
}

void write_text(const std::filesystem::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  f << s;
  if (!f) throw std::runtime_error("cannot write " + p.string());
}

void write_report(const RunConfig& c, const std::string& command, const ojson& results) {
  write_text(out_path(c, command + ".json"), make_report(command, c, results).dump(2) + "\n");
}

int cmd_field(const RunConfig& c) {
  const ChargeConfig ch = c.charge();
  std::vector<LightlikeMomentum> ps;
  for (double m : c.mags)
    for (const Vec3& d : grid_directions(c)) ps.emplace_back(m, d);
  std::vector<Amplitude> amps(ps.size());
  std::vector<std::string> status(ps.size(), "ok");
  if (c.field == "m_reg") {
    try {
      amps = amp_m_reg_batch(ch, ps, c.quad);
    } catch (const QuadratureFailure& e) {
      status.assign(ps.size(), std::string("error: ") + e.what());
    }
  } else {
    for (std::size_t i = 0; i < ps.size(); ++i) {
      try {
        amps[i] = c.field == "m_s" ? amp_m_s(ch, c.field_s, ps[i], c.quad) : amp_m_infinity(ch, ps[i], c.quad);
      } catch (const QuadratureFailure& e) {
        amps[i] = e.best();
        status[i] = std::string("error: ") + e.what();
      }
    }
  }
  std::ostringstream csv;
  csv << "mag,nx,ny,nz,re0,im0,re1,im1,re2,im2,re3,im3,err,perp_re1,perp_im1,perp_re2,perp_im2,perp_re3,perp_im3,"
         "status\n";
  int failures = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const Amplitude& a = amps[i];
    const Amplitude t = transverse_project(a, ps[i].dir);
    csv << num(ps[i].mag);
    for (double x : ps[i].dir) csv << ',' << num(x);
    for (const cplx& z : a.c) csv << ',' << num(z.real()) << ',' << num(z.imag());
    csv << ',' << num(a.err);
    for (int k = 1; k < 4; ++k) csv << ',' << num(t.c[k].real()) << ',' << num(t.c[k].imag());
    csv << ',' << csv_field(status[i]) << '\n';
    failures += status[i] != "ok";
  }
  write_text(out_path(c, "field.csv"), csv.str());
  write_report(c, "field", {{"field", c.field}, {"rows", ps.size()}, {"failed_rows", failures}});
  if (failures > 0) {
    std::cerr << "field: " << failures << " of " << ps.size() << " rows failed\n";
    return kNumeric;
  }
  return kOk;
}

int cmd_decay(const RunConfig& c, const Flags& fl) {
  const MomentumField f = fl.synthetic ? power_law_field(-*fl.synthetic) : m_infinity_field(c);
  const ojson d = decay_payload(f, c);
  std::ostringstream csv;
  csv << "lambda,rms,err\n";
  for (const ojson& p : d["points"])
    csv << num(p["lambda"].get<double>()) << ',' << num(p["rms"].get<double>()) << ',' << num(p["err"].get<double>())
        << '\n';
  write_text(out_path(c, "decay.csv"), csv.str());
  write_report(c, "decay", d);
  std::cout << "slope " << num(d["slope"].get<double>()) << " residual " << num(d["residual"].get<double>()) << "\n";
  return kOk;
}

int cmd_limit_scan(const RunConfig& c) {
  const ojson d = limit_scan_payload(c);
  std::ostringstream csv;
  csv << "s,gauge_bridge,gauge_bridge_err,phi_m_s,phi_m_s_err\n";
  for (const ojson& r : d["rows"])
    csv << num(r["s"].get<double>()) << ',' << num(r["gauge_bridge"]["value"].get<double>()) << ','
        << num(r["gauge_bridge"]["err"].get<double>()) << ',' << num(r["phi_m_s"]["value"].get<double>()) << ','
        << num(r["phi_m_s"]["err"].get<double>()) << '\n';
  write_text(out_path(c, "limit_scan.csv"), csv.str());
  write_report(c, "limit-scan", d);
  std::cout << d["rows"].size() << " rows, s* = " << num(d["s_star"].get<double>()) << "\n";
  return kOk;
}

int cmd_huygens(const RunConfig& c) {
  const ojson d = huygens_payload(c);
  write_report(c, "huygens", d);
  const bool a = d["suite_a_pass"].get<bool>(), b = d["suite_b_pass"].get<bool>();
  std::cout << "suite A (m_inf vs m_reg): " << (a ? "pass" : "FAIL") << "\n"
            << "suite B (gauge bridge vs 0): " << (b ? "pass" : "FAIL") << "\n";
  return a && b ? kOk : kCriterion;
}

std::vector<std::string> split_ids(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string id;
  while (std::getline(ss, id, ','))
    if (!id.empty()) out.push_back(id);
  return out;
}

int cmd_suite(const RunConfig& c, const Flags& fl) {
  if (fl.list) {
    for (const CriterionInfo& ci : criteria()) std::cout << ci.number << ' ' << ci.id << "  " << ci.title << "\n";
    return kOk;
  }
  const std::vector<CriterionResult> rs = run_suite(c, split_ids(fl.only));
  ojson results = ojson::array();
  bool all = true;
  for (const CriterionResult& r : rs) {
    results.push_back(to_json(r));
    all = all && r.pass;
    std::cout << "criterion " << r.number << " (" << r.id << "): " << (r.pass ? "PASS" : "FAIL") << "  " << r.summary
              << "\n";
  }
  write_report(c, "suite", results);
  return all ? kOk : kCriterion;
}

int run(const std::string& command, const Flags& fl) {
  RunConfig c = fl.config.empty() ? RunConfig{} : load_config(fl.config);
  if (fl.seed) c.quad.seed = *fl.seed;
  if (!fl.out.empty()) c.out_dir = fl.out;
  c.validate();
  if (command == "field") return cmd_field(c);
  if (command == "decay") return cmd_decay(c, fl);
  if (command == "limit-scan") return cmd_limit_scan(c);
  if (command == "huygens") return cmd_huygens(c);
  return cmd_suite(c, fl);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Light-cone charge toolkit: field samples, decay fits, limit scans and the acceptance suite"};
  app.require_subcommand(1);
  Flags fl;
  auto common = [&fl](CLI::App* s) {
    s->add_option("--config", fl.config, "JSON run configuration");
    s->add_option("--out", fl.out, "output directory (overrides out_dir)");
    s->add_option("--seed", fl.seed, "seed (overrides the config)");
  };
  CLI::App* field = app.add_subcommand("field", "sample an amplitude on the momentum grid");
  CLI::App* decay = app.add_subcommand("decay", "decay fit of transverse m_infinity");
  CLI::App* scan = app.add_subcommand("limit-scan", "gauge-bridge functional and phi of m_s against s");
  CLI::App* huy = app.add_subcommand("huygens", "functional differences on V+ + t");
  CLI::App* suite = app.add_subcommand("suite", "run the acceptance criteria");
  for (CLI::App* s : {field, decay, scan, huy, suite}) common(s);
  decay->add_option("--synthetic", fl.synthetic, "fit the synthetic field |p|^EXP instead")->allow_extra_args(false);
  suite->add_option("--only", fl.only, "comma-separated criterion ids");
  suite->add_flag("--list", fl.list, "print the criterion ids and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  const auto t0 = std::chrono::steady_clock::now();
  int code = kOk;
  try {
    code = run(command, fl);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  }
  std::cerr << "wall time " << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";
  return code;
}
