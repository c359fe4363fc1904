#include "nematic/app/reports.hpp"

#include <cmath>

#include "nematic/besov.hpp"

namespace nematic::app {

namespace {

Json number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json a = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    a.push_back(row);
  }
  return a;
}

Json form_json(const FormCheck& f) {
  Json j;
  j["ok"] = f.ok;
  j["lambda_min"] = number(f.lambda_min);
  Json v = Json::array();
  for (const auto& l : f.variants) v.push_back(to_json(l));
  j["variants"] = v;
  j["disagreements"] = f.disagreements;
  return j;
}

Json fit_json(const EstimateFit& f) {
  Json j;
  j["max_ratio"] = number(f.max_ratio);
  j["median_ratio"] = number(f.median_ratio);
  j["spread"] = number(f.median_ratio > 0.0 ? f.max_ratio / f.median_ratio : 0.0);
  j["stable"] = f.stable();
  j["trials"] = f.ratios.size();
  return j;
}

}  // namespace

Json to_json(const Margin& m) {
  Json j;
  j["name"] = m.name;
  j["value"] = number(m.value);
  return j;
}

Json to_json(const InequalityList& l) {
  Json j;
  j["name"] = l.name;
  j["holds"] = l.holds();
  Json m = Json::array();
  for (const auto& x : l.margins) m.push_back(to_json(x));
  j["margins"] = m;
  return j;
}

Json to_json(const AdmissibilityReport& r) {
  Json j;
  j["theta"] = r.theta;
  j["dim"] = r.dim;
  j["heat_ok"] = r.heat_ok;
  j["incompressible_ok"] = r.incompressible_ok;
  j["compressible_ok"] = r.compressible_ok;
  j["heat"] = {{"ok", r.heat.ok}, {"margins", Json::array({to_json(r.heat.lambda1), to_json(r.heat.lambda_sum)})}};
  j["incompressible"] = form_json(r.incompressible);
  j["compressible"] = form_json(r.compressible);
  j["oracle_min_incompressible"] = number(r.oracle_min_incompressible);
  j["oracle_min_compressible"] = number(r.oracle_min_compressible);
  j["variant_disagreements"] = r.variant_disagreements;
  return j;
}

Json to_json(const EllipticityReport& r) {
  Json j;
  j["ok"] = r.ok;
  Json lit = Json::array();
  for (const auto& m : r.literal) lit.push_back(to_json(m));
  j["literal"] = lit;
  j["lambda0_momentum"] = number(r.lambda0_momentum);
  j["lambda0_heat"] = number(r.lambda0_heat);
  j["lambda0_director"] = number(r.lambda0_director);
  j["lambda0_director_literal"] = number(r.lambda0_director_literal);
  j["gamma1_min"] = number(r.gamma1_min);
  j["failures"] = r.failures;
  return j;
}

Json to_json(const OracleResult& r) {
  Json j;
  j["min_value"] = number(r.min_value);
  j["sampled_min"] = number(r.sampled_min);
  j["strain_sector_min"] = number(r.strain_sector_min);
  j["transport_sector_min"] = number(r.transport_sector_min);
  j["argmin"] = {{"n", vector_json(r.n)}, {"N", vector_json(r.N)}, {"D", matrix_json(r.D)}, {"label", r.argmin}};
  return j;
}

Json to_json(const DiagnosticsRecord& r) {
  Json j;
  j["step"] = r.step;
  j["t"] = r.t;
  j["total_energy"] = number(r.total_energy);
  j["total_entropy"] = number(r.total_entropy);
  j["entropy_production_integral"] = number(r.entropy_production_integral);
  j["min_pointwise_production"] = number(r.min_pointwise_production);
  j["max_pointwise_production"] = number(r.max_pointwise_production);
  j["mechanical_min"] = number(r.mechanical_min);
  j["thermal_min"] = number(r.thermal_min);
  j["constraint_violation"] = number(r.constraint_violation);
  j["constraint_drift"] = number(r.constraint_drift);
  j["first_law_residual_norm"] = number(r.first_law_residual_norm);
  j["dissipation_identity_gap"] = number(r.dissipation_identity_gap);
  j["kinetic_energy"] = number(r.kinetic_energy);
  j["max_div_u"] = number(r.max_div_u);
  j["min_theta"] = number(r.min_theta);
  j["max_theta"] = number(r.max_theta);
  j["picard_iterations"] = r.picard_iterations;
  return j;
}

Json besov_audit(const BesovAuditOptions& opt) {
  const GridPtr grid = Grid::make(opt.dim, std::vector<int>(opt.dim, opt.resolution));
  const double h = opt.dim / 2.0;
  Json j;
  j["dim"] = opt.dim;
  j["resolution"] = opt.resolution;
  j["trials"] = opt.trials;
  j["seed"] = opt.seed;

  Json product = Json::array();
  const double pairs[3][2] = {{h, h - 1}, {h, h - 2}, {h - 1, h - 1}};
  std::uint64_t seed = opt.seed;
  for (const auto& p : pairs) {
    Json e = fit_json(verify_product_estimate(grid, p[0], p[1], opt.trials, seed++));
    e["s1"] = p[0];
    e["s2"] = p[1];
    product.push_back(e);
  }
  Json alg = fit_json(verify_product_estimate(grid, h, h, opt.trials, seed++));
  alg["s1"] = h;
  alg["s2"] = h;
  product.push_back(alg);
  j["product"] = product;

  Json smoothing = Json::array();
  const ParabolicSymbol ops[2] = {{1.0, 0.0, {1.0, 0.0, 0.0}}, {1.0, 0.5, {1.0, 0.0, 0.0}}};
  for (const auto& op : ops) {
    for (double s : {h - 1, h}) {
      const SmoothingFit f = verify_smoothing_estimate(grid, s, op, opt.horizon, opt.trials, seed++);
      Json e;
      e["s"] = s;
      e["lambda1"] = op.lambda1;
      e["lambda2"] = op.lambda2;
      e["l1"] = fit_json(f.l1);
      e["l2"] = fit_json(f.l2);
      smoothing.push_back(e);
    }
  }
  j["smoothing"] = smoothing;

  j["embedding"] = fit_json(verify_embedding(grid, opt.trials, seed++));

  Json comp = Json::array();
  const std::pair<const char*, double (*)(double)> maps[2] = {
      {"sin", [](double x) { return std::sin(x); }}, {"exp-1", [](double x) { return std::expm1(x); }}};
  for (const auto& [name, F] : maps) {
    Json e = fit_json(verify_composition(grid, F, h, 1.0, opt.trials, seed++));
    e["map"] = name;
    e["s"] = h;
    comp.push_back(e);
  }
  j["composition"] = comp;
  return j;
}

}  // namespace nematic::app
