#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twocap/capacity.hpp"
#include "twocap/elliptic.hpp"
#include "twocap/medium.hpp"
#include "twocap/profiles.hpp"

namespace twocap {

/// Lattice spacing for one sweep point: h = delta / (2k) with k the smallest
/// even integer such that h <= min(delta / 4, eps / eps_per_h). Even k puts
/// half-cell lines and half-cell centres on lattice nodes. A uniform medium
/// has no cell lines, so there h = eps / eps_per_h (k = 0) and every point of
/// a sweep sees the same discrete inclusion.
struct GridChoice {
  double h = 0.0;
  int k = 0;
  int n = 0;
  double half_width = 0.0;  ///< effective half-width of the (padded) lattice
};

GridChoice choose_grid(double epsilon, double delta, double half_width, double eps_per_h = 3.0,
                       bool uniform_medium = false, bool pad_for_multigrid = true);

struct RunConfig {
  double alpha = 1.0;
  double beta = 4.0;
  std::string schedule = "power:0.5";
  std::vector<double> epsilons = {1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256, 1.0 / 512};
  double half_width = 1.0;
  double eps_per_h = 3.0;
  CenterPolicy center_policy = CenterPolicy::alpha_cell;
  double tolerance = 1e-9;
  Preconditioner preconditioner = Preconditioner::automatic;
  bool deterministic = false;
  int workers = 1;
  std::string output_dir;  ///< empty: nothing written
  double memory_budget_mb = 4096.0;
  bool with_profile = false;
  ProfileSpec::Options profile{};
  Vec2 tau{};

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

struct SweepRecord {
  double epsilon = 0.0;
  double delta = 0.0;
  double lambda_nominal = 0.0;
  double h = 0.0;
  int n = 0;
  double half_width = 0.0;
  double m = 0.0;
  double scaled = 0.0;
  double predicted_limit = 0.0;
  double gap = 0.0;
  double profile_energy = -1.0;  ///< negative when not computed
  int iterations = 0;
  double relative_residual = 0.0;
  double runtime_s = 0.0;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

struct Extrapolation {
  double L_hat = 0.0;
  double slope = 0.0;
  double residual = 0.0;  ///< root-mean-square misfit
  int points = 0;
};

/// Least-squares fit scaled = L_hat + slope / |log eps|. Needs at least three
/// points with distinct eps in (0, 1).
Extrapolation extrapolate(const std::vector<std::pair<double, double>>& eps_scaled);
/// Same over the successful records.
Extrapolation extrapolate(const std::vector<SweepRecord>& records);

struct SweepSummary {
  std::vector<SweepRecord> records;
  std::optional<Extrapolation> fit;
  double predicted_limit = 0.0;
  double lambda = 0.0;
  bool lambda_estimate = false;
  /// |scaled - predicted_limit| decreases as eps decreases.
  bool monotone_toward_limit = false;
  int failures = 0;
};

/// Rough peak memory of one sweep point on an n x n lattice.
std::size_t estimate_bytes(int n, bool with_profile);

/// Runs every eps of the configuration (in parallel up to `workers`), records
/// per-point failures and throws only when no point succeeds or the memory
/// budget is exceeded. Writes sweep.csv, summary.json and config.json when an
/// output directory is set.
SweepSummary sweep(const RunConfig& config);

/// CSV table; with `deterministic` the runtime column is written as 0.
std::string records_csv(const std::vector<SweepRecord>& records, bool deterministic);

void write_outputs(const RunConfig& config, const SweepSummary& summary);

struct Prediction {
  double alpha = 1.0;
  double beta = 1.0;
  double lambda = 0.0;
  bool lambda_estimate = false;
  double harmonic = 0.0;
  double arithmetic = 0.0;
  double c = 0.0;
};

Prediction predict(double alpha, double beta, double lambda, bool lambda_estimate = false);

}  // namespace twocap
