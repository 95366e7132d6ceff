#pragma once

#include <string>
#include <vector>

#include "conelight/config.hpp"
#include "conelight/norms.hpp"
#include "json.hpp"

namespace conelight {

using ojson = nlohmann::ordered_json;

struct CriterionInfo {
  std::string id;
  int number;
  std::string title;
};

// The acceptance criteria in order: decay, l1, ir, bridge, constancy, huygens, continuity, weyl,
// cocycle, determinism.
const std::vector<CriterionInfo>& criteria();

struct CriterionResult {
  std::string id;
  int number = 0;
  bool pass = false;
  std::string summary;  // one line, no timings
  ojson details;
};

// Transverse m_infinity and transverse m_reg as momentum fields of the configuration.
MomentumField m_infinity_field(const RunConfig& c);
MomentumField m_reg_field(const RunConfig& c, const QuadratureConfig& q);

// Payloads shared by the CLI commands and the suite. They throw on numeric failure.
ojson decay_payload(const MomentumField& f, const RunConfig& c);
ojson limit_scan_payload(const RunConfig& c);
// Rejects probes outside V+ + t with ConfigError.
ojson huygens_payload(const RunConfig& c);

// Runs one criterion; numeric failures are caught and reported as a failed criterion.
CriterionResult run_criterion(const std::string& id, const RunConfig& c);
// Runs the selected criteria (all when `only` is empty) in order. The determinism criterion
// reruns criteria 1 to 9 and compares the serialized results byte for byte.
std::vector<CriterionResult> run_suite(const RunConfig& c, const std::vector<std::string>& only = {});

ojson to_json(const CriterionResult& r);
// {command, version, config_digest, results}; wall time is deliberately not part of it.
ojson make_report(const std::string& command, const RunConfig& c, const ojson& results);

}  // namespace conelight
