#include "twocap/degiorgi.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "twocap/errors.hpp"
#include "twocap/formulas.hpp"
#include "twocap/multigrid.hpp"

namespace twocap {

namespace {

constexpr double kRel = 1e-12;

// Cut-off weight for circle rho_j on the annulus (rho_j/2, 2 rho_j).
double cutoff(double rho, double rho_j, double h) {
  const double lo = 0.5 * rho_j + h;
  const double hi = 2.0 * rho_j - h;
  if (rho <= lo || rho >= hi) return 0.0;
  if (std::abs(rho - rho_j) <= h) return 1.0;
  if (rho > rho_j) return std::log(hi / rho) / std::log(hi / (rho_j + h));
  return std::log(rho / lo) / std::log((rho_j - h) / lo);
}

}  // namespace

double annulus_energy(const EdgeOperator& op, std::span<const double> u, Vec2 z, double r, double R) {
  auto label = [&](Vec2 m) {
    const double rho = norm(m - z);
    return (rho > r && rho < R) ? 0 : -1;
  };
  return op.energy_by_region(u, label, 1)[0];
}

RoundingResult round_on_circle(const GridField& field, const EdgeOperator& op, Vec2 z, double eta, int S, int N,
                               double r) {
  if (S < 3) throw std::invalid_argument("rounding needs S >= 3");
  if (N < 2 || N >= S) throw std::invalid_argument("rounding needs 2 <= N < S");
  if (!(eta > 0.0)) throw std::invalid_argument("rounding needs eta > 0");
  if (!(r > 0.0) || r > std::ldexp(eta, S - N) * (1.0 + kRel))
    throw std::invalid_argument("rounding needs 0 < r <= eta 2^(S-N)");
  if (!field.grid.same_lattice(op.grid())) throw std::invalid_argument("field and operator grids differ");

  const Grid& g = field.grid;
  const double h = g.h;
  const double R = std::ldexp(eta, S);
  if (0.5 * std::ldexp(eta, S - N + 1) < 4.0 * h * (1.0 - kRel))
    throw ResolutionError("rounding annulus thinner than 4h");

  RoundingResult best;
  best.energy_before = annulus_energy(op, field.values, z, r, R);
  bool have = false;

  for (int j = 1; j <= N - 1; ++j) {
    const double rho_j = std::ldexp(eta, S - j);
    const int span = int(std::ceil(2.0 * rho_j / h)) + 1;
    const int iz = g.nearest_i(z.x), jz = g.nearest_j(z.y);
    const int i0 = std::max(0, iz - span), i1 = std::min(g.n - 1, iz + span);
    const int j0 = std::max(0, jz - span), j1 = std::min(g.n - 1, jz + span);

    double sum = 0.0, lo = INFINITY, hi = -INFINITY;
    std::size_t count = 0;
    for (int jj = j0; jj <= j1; ++jj)
      for (int ii = i0; ii <= i1; ++ii) {
        const double rho = norm(g.node(ii, jj) - z);
        if (rho > 0.5 * rho_j && rho < 2.0 * rho_j) {
          const double x = field.at(ii, jj);
          sum += x;
          lo = std::min(lo, x);
          hi = std::max(hi, x);
          ++count;
        }
      }
    if (count == 0) throw std::invalid_argument("rounding annulus contains no node");
    // a collar that is already constant is left untouched (no rounding noise)
    const double mean = lo == hi ? lo : std::clamp(sum / double(count), lo, hi);

    GridField v = field;
    for (int jj = j0; jj <= j1; ++jj)
      for (int ii = i0; ii <= i1; ++ii) {
        const double phi = cutoff(norm(g.node(ii, jj) - z), rho_j, h);
        if (phi == 0.0) continue;
        double& x = v.at(ii, jj);
        x = phi == 1.0 ? mean : x + phi * (mean - x);
      }
    const double e = annulus_energy(op, v.values, z, r, R);
    const double ratio = best.energy_before > 0.0 ? e / best.energy_before : (e > 0.0 ? INFINITY : 1.0);
    best.candidate_ratios.push_back(ratio);
    if (!have || e < best.energy_after) {
      have = true;
      best.field = std::move(v);
      best.j = j;
      best.energy_after = e;
      best.ratio = ratio;
      best.circle_radius = rho_j;
      best.average = mean;
    }
  }
  return best;
}

RoundingInstance make_rounding_instance(double alpha, double beta, int S, int N, std::uint64_t seed,
                                        int radius_cells, double h) {
  if (radius_cells < 16) throw std::invalid_argument("instance radius must span at least 16 cells");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const double R = radius_cells * h;
  const Vec2 tau{unit(rng), unit(rng)};
  const Checkerboard medium(alpha, beta, R / 8.0, tau);
  const double r = std::ldexp(R, -N - 1) * (1.0 + unit(rng));

  struct Mode {
    double amp, phase;
  };
  std::vector<Mode> inner_modes, outer_modes;
  for (int m = 1; m <= 3; ++m) {
    inner_modes.push_back({0.2 * (2.0 * unit(rng) - 1.0) / m, 2.0 * kPi * unit(rng)});
    outer_modes.push_back({0.2 * (2.0 * unit(rng) - 1.0) / m, 2.0 * kPi * unit(rng)});
  }
  auto series = [](const std::vector<Mode>& modes, double theta) {
    double s = 0.0;
    for (std::size_t m = 0; m < modes.size(); ++m) s += modes[m].amp * std::cos(double(m + 1) * theta + modes[m].phase);
    return s;
  };

  const int n = multigrid_friendly_size(2 * (radius_cells + 2) + 1);
  const Grid g = Grid::centred((n - 1) / 2, h);
  const Vec2 z{};
  GridField f(g);
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      const Vec2 d = g.node(i, j) - z;
      const double rho = norm(d);
      const double theta = std::atan2(d.y, d.x);
      const bool edge = i == 0 || j == 0 || i == g.n - 1 || j == g.n - 1;
      if (rho <= r * (1.0 + kRel))
        f.fix(i, j, 1.0 + series(inner_modes, theta));
      else if (edge || rho >= R * (1.0 - kRel))
        f.fix(i, j, series(outer_modes, theta));
    }

  EdgeOperator op = EdgeOperator::assemble(g, medium);
  SolverOptions so;
  so.tolerance = 1e-12;
  SolveResult sol = solve(op, std::move(f), so);
  return RoundingInstance{std::move(sol.field), std::move(op), z, std::ldexp(R, -S), r, R, S, N};
}

int study_radius_cells(int S) { return int(std::lround(128.0 * std::pow(2.0, 0.5 * (S - 6)))); }

std::vector<StudyRow> constant_study(double alpha, double beta, const std::vector<int>& scales,
                                     const std::vector<int>& n_list, int instances_per_case, std::uint64_t seed) {
  std::vector<StudyRow> rows;
  for (int S : scales)
    for (int N : n_list) {
      if (N >= S) continue;
      StudyRow row;
      row.S = S;
      row.N = N;
      row.worst_ratio = 0.0;
      row.min_ratio = INFINITY;
      const int cells = study_radius_cells(S);
      for (int k = 0; k < instances_per_case; ++k) {
        // The same (N, k) reuses its random data at every S: homothetic copies.
        const std::uint64_t s = seed * 1000003ULL + std::uint64_t(N) * 10007ULL + std::uint64_t(k);
        const RoundingInstance inst = make_rounding_instance(alpha, beta, S, N, s, cells, 1.0 / cells);
        const RoundingResult res = round_on_circle(inst.field, inst.op, inst.z, inst.eta, S, N, inst.r);
        row.worst_ratio = std::max(row.worst_ratio, res.ratio);
        row.min_ratio = std::min(row.min_ratio, res.ratio);
        row.implied_C = std::max(row.implied_C, (res.ratio - 1.0) * (N - 1));
        ++row.instances;
      }
      rows.push_back(row);
    }
  return rows;
}

Calibration calibrate(const std::vector<StudyRow>& rows, double alpha, double beta, double margin) {
  if (rows.empty()) throw std::invalid_argument("calibration needs study rows");
  Calibration c;
  c.alpha = alpha;
  c.beta = beta;
  c.margin = margin;
  for (const auto& r : rows) {
    c.max_implied = std::max(c.max_implied, r.implied_C);
    c.instances += r.instances;
  }
  c.c_emp = c.max_implied * margin;
  return c;
}

std::string calibration_to_json(const Calibration& c) {
  nlohmann::json j{{"alpha", c.alpha},       {"beta", c.beta},   {"max_implied_C", c.max_implied},
                   {"margin", c.margin},     {"C_emp", c.c_emp}, {"instances", c.instances}};
  return j.dump(2);
}

Calibration calibration_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Calibration c;
  c.alpha = j.at("alpha").get<double>();
  c.beta = j.at("beta").get<double>();
  c.max_implied = j.at("max_implied_C").get<double>();
  c.margin = j.at("margin").get<double>();
  c.c_emp = j.at("C_emp").get<double>();
  c.instances = j.at("instances").get<int>();
  return c;
}

void save_calibration(const Calibration& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << calibration_to_json(c) << "\n";
}

Calibration load_calibration(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return calibration_from_json(ss.str());
}

}  // namespace twocap
