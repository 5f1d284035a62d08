#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twocap/elliptic.hpp"
#include "twocap/geometry.hpp"
#include "twocap/medium.hpp"

namespace twocap {

/// Cut-off that makes a field constant on one dyadic circle.
///
/// With R = eta 2^S and candidate circles rho_j = eta 2^{S-j}, j = 1..N-1,
/// candidate v_j blends the field with its mean over the annulus
/// (rho_j / 2, 2 rho_j): v = phi mean + (1 - phi) u, where phi = 1 within h of
/// rho_j, phi = 0 within h of either annulus boundary and beyond, and phi is
/// linear in log rho in between. The candidate with the least energy on
/// B_R \ B_r (edges by midpoint radius) is returned.
struct RoundingResult {
  GridField field;
  int j = 0;
  double ratio = 1.0;  ///< F(v_j) / F(u) on B_R \ B_r
  double energy_before = 0.0;
  double energy_after = 0.0;
  double circle_radius = 0.0;  ///< rho_j
  double average = 0.0;        ///< value taken on the circle
  std::vector<double> candidate_ratios;
};

/// Requires S >= 3, 2 <= N < S, 0 < r <= eta 2^{S-N}; throws ResolutionError
/// when an inner half-annulus rho_j / 2 is thinner than 4h and
/// std::invalid_argument when a candidate annulus holds no node.
RoundingResult round_on_circle(const GridField& field, const EdgeOperator& op, Vec2 z, double eta, int S, int N,
                               double r);

/// Energy on edges whose midpoint radius around z lies in (r, R).
double annulus_energy(const EdgeOperator& op, std::span<const double> u, Vec2 z, double r, double R);

/// A random admissible test field: the discrete minimiser on B_R \ B_r with
/// perturbed radial data (1 + Fourier modes inside, Fourier modes outside)
/// in a checkerboard of period R / 8 with random offset.
struct RoundingInstance {
  GridField field;
  EdgeOperator op;
  Vec2 z;
  double eta;
  double r;
  double R;
  int S;
  int N;
};

/// R spans `radius_cells` lattice spacings of size `h`; eta = R 2^{-S} and
/// r is uniform in [R 2^{-N-1}, R 2^{-N}].
RoundingInstance make_rounding_instance(double alpha, double beta, int S, int N, std::uint64_t seed,
                                        int radius_cells = 256, double h = 1.0 / 256);

struct StudyRow {
  int S = 0;
  int N = 0;
  int instances = 0;
  double worst_ratio = 1.0;
  double min_ratio = 1.0;
  double implied_C = 0.0;  ///< max over instances of (ratio - 1)(N - 1)
};

/// Lattice resolution used by the study at scale S: R spans
/// round(128 * 2^((S - 6) / 2)) cells, so larger S means finer homothetic copies.
int study_radius_cells(int S);

/// Worst ratios over random instances per (S, N). Instance k of a given N
/// uses the same random data (offset, boundary modes, r / R) at every S, so
/// rows with equal N differ only by scale and resolution.
std::vector<StudyRow> constant_study(double alpha, double beta, const std::vector<int>& scales,
                                     const std::vector<int>& n_list, int instances_per_case,
                                     std::uint64_t seed = 1);

/// Empirical constant bounding ratio <= 1 + C / (N - 1).
struct Calibration {
  double alpha = 1.0;
  double beta = 1.0;
  double max_implied = 0.0;
  double margin = 1.5;
  double c_emp = 0.0;  ///< max_implied * margin
  int instances = 0;
};

Calibration calibrate(const std::vector<StudyRow>& rows, double alpha, double beta, double margin = 1.5);

std::string calibration_to_json(const Calibration& c);
Calibration calibration_from_json(const std::string& text);
void save_calibration(const Calibration& c, const std::string& path);
Calibration load_calibration(const std::string& path);

}  // namespace twocap
