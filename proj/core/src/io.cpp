#include "twocap/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace twocap {

namespace {

using nlohmann::json;

json vec(Vec2 v) { return json::array({v.x, v.y}); }

json pairs(const std::vector<std::pair<std::string, double>>& kv) {
  json j = json::object();
  for (const auto& [k, v] : kv) j[k] = v;
  return j;
}

json record(const SweepRecord& r, bool deterministic) {
  return json{{"epsilon", r.epsilon},
              {"delta", r.delta},
              {"lambda_nominal", r.lambda_nominal},
              {"h", r.h},
              {"n", r.n},
              {"half_width", r.half_width},
              {"m", r.m},
              {"scaled", r.scaled},
              {"predicted_limit", r.predicted_limit},
              {"gap", r.gap},
              {"profile_energy", r.profile_energy},
              {"iterations", r.iterations},
              {"relative_residual", r.relative_residual},
              {"runtime_s", deterministic ? 0.0 : r.runtime_s},
              {"status", r.status}};
}

}  // namespace

std::string to_json(const CapacityResult& r) {
  json j{{"energy", r.energy},
         {"iterations", r.stats.iterations},
         {"relative_residual", r.stats.relative_residual},
         {"preconditioner", to_string(r.stats.used)},
         {"levels", r.stats.levels},
         {"breakdown", pairs(r.breakdown)},
         {"epsilon", r.meta.epsilon},
         {"delta", r.meta.delta},
         {"h", r.meta.h},
         {"n", r.meta.n},
         {"alpha", r.meta.alpha},
         {"beta", r.meta.beta},
         {"half_width", r.meta.half_width},
         {"center", vec(r.meta.center)},
         {"center_policy", r.meta.center_policy}};
  if (r.meta.lambda >= 0.0) j["lambda"] = r.meta.lambda;
  if (r.meta.epsilon > 0.0 && r.meta.epsilon < 1.0) j["scaled"] = std::abs(std::log(r.meta.epsilon)) * r.energy;
  return j.dump(2);
}

std::string to_json(const EffectiveTensor& t) {
  return json{{"a11", t.a11},
              {"a12", t.a12},
              {"a22", t.a22},
              {"sqrt_det", t.sqrt_det},
              {"resolution", t.resolution},
              {"iterations", t.iterations},
              {"min_eigenvalue", t.min_eigenvalue()},
              {"max_eigenvalue", t.max_eigenvalue()}}
      .dump(2);
}

std::string to_json(const UniformityReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"eta", row.eta}, {"tau", vec(row.tau)}, {"energy", row.energy}, {"deviation", row.deviation}});
  json worst = json::array();
  for (const auto& [eta, d] : r.max_deviation) worst.push_back({{"eta", eta}, {"max_deviation", d}});
  return json{{"target", r.target}, {"rows", rows}, {"max_deviation", worst}}.dump(2);
}

std::string to_json(const ProfileSpec& s, const ProfileResult& r) {
  return json{{"epsilon", s.epsilon},
              {"delta", s.delta},
              {"lambda", s.lambda},
              {"lambda1", s.lambda1},
              {"lambda2", s.lambda2},
              {"T", s.T},
              {"R0", s.R0},
              {"z", vec(s.z)},
              {"c_schedule", s.c},
              {"c_policy", to_string(s.c_policy)},
              {"c", r.c},
              {"energy", r.energy},
              {"breakdown", pairs(r.breakdown)},
              {"inner_continuum", r.inner_continuum},
              {"inner_bound", r.inner_bound},
              {"inner_bound_valid", r.inner_bound_valid},
              {"shell_limit", r.shell_limit},
              {"solver_iterations", r.solver_iterations}}
      .dump(2);
}

std::string to_json(const UpperBoundReport& r) {
  return json{{"profile_energy", r.profile_energy}, {"minimum", r.minimum},
              {"ratio", r.ratio},                   {"scaled_profile", r.scaled_profile},
              {"scaled_minimum", r.scaled_minimum}, {"limit", r.limit},
              {"admissible", r.admissible}}
      .dump(2);
}

std::string to_json(const RoundingResult& r) {
  return json{{"j", r.j},
              {"ratio", r.ratio},
              {"energy_before", r.energy_before},
              {"energy_after", r.energy_after},
              {"circle_radius", r.circle_radius},
              {"average", r.average},
              {"candidate_ratios", r.candidate_ratios}}
      .dump(2);
}

std::string to_json(const std::vector<StudyRow>& rows) {
  json a = json::array();
  for (const auto& r : rows)
    a.push_back({{"S", r.S},
                 {"N", r.N},
                 {"instances", r.instances},
                 {"worst_ratio", r.worst_ratio},
                 {"min_ratio", r.min_ratio},
                 {"implied_C", r.implied_C}});
  return a.dump(2);
}

std::string to_json(const SweepSummary& s, bool deterministic) {
  json recs = json::array();
  for (const auto& r : s.records) recs.push_back(record(r, deterministic));
  json j{{"records", recs},
         {"predicted_limit", s.predicted_limit},
         {"lambda", s.lambda},
         {"lambda_estimate", s.lambda_estimate},
         {"monotone_toward_limit", s.monotone_toward_limit},
         {"failures", s.failures}};
  if (s.fit)
    j["extrapolation"] = {{"L_hat", s.fit->L_hat},
                          {"slope", s.fit->slope},
                          {"residual", s.fit->residual},
                          {"points", s.fit->points}};
  else
    j["extrapolation"] = nullptr;
  return j.dump(2);
}

std::string to_json(const RunConfig& c) {
  return json{{"alpha", c.alpha},
              {"beta", c.beta},
              {"schedule", c.schedule},
              {"epsilons", c.epsilons},
              {"half_width", c.half_width},
              {"eps_per_h", c.eps_per_h},
              {"center_policy", to_string(c.center_policy)},
              {"tolerance", c.tolerance},
              {"preconditioner", to_string(c.preconditioner)},
              {"deterministic", c.deterministic},
              {"workers", c.workers},
              {"output_dir", c.output_dir},
              {"memory_budget_mb", c.memory_budget_mb},
              {"with_profile", c.with_profile},
              {"profile_lambda1", c.profile.lambda1},
              {"profile_R0", c.profile.R0},
              {"profile_guard_ratio", c.profile.guard_ratio},
              {"profile_c_policy", to_string(c.profile.c_policy)},
              {"tau", vec(c.tau)}}
      .dump(2);
}

std::string to_json(const Prediction& p) {
  return json{{"alpha", p.alpha},
              {"beta", p.beta},
              {"lambda", p.lambda},
              {"lambda_estimate", p.lambda_estimate},
              {"harmonic_limit", p.harmonic},
              {"gl_arithmetic_limit", p.arithmetic},
              {"optimal_c", p.c}}
      .dump(2);
}

std::string error_json(const std::string& kind, const std::string& message) {
  return json{{"error", kind}, {"message", message}}.dump();
}

std::string study_csv(const std::vector<StudyRow>& rows) {
  std::ostringstream os;
  os << "S,N,instances,worst_ratio,min_ratio,implied_C\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g,%.17g\n", r.S, r.N, r.instances, r.worst_ratio,
                  r.min_ratio, r.implied_C);
    os << buf;
  }
  return os.str();
}

}  // namespace twocap
