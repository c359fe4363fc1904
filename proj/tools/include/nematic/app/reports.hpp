#pragma once

#include <cstdint>

#include "json.hpp"
#include "nematic/admissibility.hpp"
#include "nematic/diagnostics.hpp"
#include "nematic/solver.hpp"

namespace nematic::app {

using Json = nlohmann::ordered_json;

Json to_json(const Margin& m);
Json to_json(const InequalityList& l);
Json to_json(const AdmissibilityReport& r);
Json to_json(const EllipticityReport& r);
Json to_json(const OracleResult& r);
Json to_json(const DiagnosticsRecord& r);

struct BesovAuditOptions {
  int dim = 3;
  int resolution = 32;
  int trials = 100;
  std::uint64_t seed = 2024;
  double horizon = 1.0;
};

/// Fitted constants of the product, smoothing, embedding and composition
/// estimates on random band-limited fields.
Json besov_audit(const BesovAuditOptions& opt);

}  // namespace nematic::app
