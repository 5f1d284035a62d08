#include "twocap/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "twocap/formulas.hpp"
#include "twocap/io.hpp"
#include "twocap/multigrid.hpp"

namespace twocap {

namespace {

constexpr double kRel = 1e-12;

SweepRecord run_point(const RunConfig& cfg, const ScaleSchedule& schedule, double lambda, double eps) {
  SweepRecord rec;
  rec.epsilon = eps;
  rec.lambda_nominal = lambda;
  rec.predicted_limit = checkerboard_limit(cfg.alpha, cfg.beta, lambda);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    rec.delta = schedule.delta(eps);
    const GridChoice gc = choose_grid(eps, rec.delta, cfg.half_width, cfg.eps_per_h, cfg.alpha == cfg.beta);
    rec.h = gc.h;
    rec.n = gc.n;
    rec.half_width = gc.half_width;

    const Checkerboard medium(cfg.alpha, cfg.beta, rec.delta, cfg.tau);
    GridProblem problem;
    problem.half_width = cfg.half_width;
    problem.spacing = gc.h;
    problem.radius = eps;

    CapacityOptions opt;
    opt.solver.tolerance = cfg.tolerance;
    opt.solver.preconditioner = cfg.preconditioner;
    opt.center_policy = cfg.center_policy;
    opt.keep_field = cfg.with_profile;
    opt.lambda = lambda;
    CapacityResult cap = solve_capacity(problem, medium, opt);
    rec.m = cap.energy;
    rec.scaled = capacity_scaled(cap);
    rec.gap = rec.scaled - rec.predicted_limit;
    rec.iterations = cap.stats.iterations;
    rec.relative_residual = cap.stats.relative_residual;

    if (cfg.with_profile) {
      const Grid grid = cap.field->grid;
      const Vec2 z = cap.meta.center;
      cap.field.reset();
      if (lambda > 0.0) {
        const ProfileSpec spec =
            ProfileSpec::make(eps, rec.delta, lambda, cfg.alpha, cfg.beta, z, grid, cfg.profile);
        SolverOptions so;
        so.tolerance = cfg.tolerance;
        rec.profile_energy = build_profile(spec, medium, grid, so).energy;
      } else {
        const GridField f = build_profile_lambda0(grid, eps, rec.delta, z);
        rec.profile_energy = EdgeOperator::assemble(grid, medium).energy(f.values);
      }
    }
  } catch (const std::exception& e) {
    rec.status = std::string("error: ") + e.what();
  }
  rec.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

GridChoice choose_grid(double epsilon, double delta, double half_width, double eps_per_h, bool uniform_medium,
                       bool pad_for_multigrid) {
  if (!(epsilon > 0.0) || !(delta > 0.0) || !(half_width > 0.0) || !(eps_per_h > 0.0))
    throw std::invalid_argument("grid policy needs positive eps, delta, L and eps_per_h");
  GridChoice g;
  if (uniform_medium) {
    g.h = epsilon / eps_per_h;
  } else {
    const double target = std::min(delta / 4.0, epsilon / eps_per_h);
    int k = int(std::ceil(delta / (2.0 * target) * (1.0 - kRel)));
    if (k % 2) ++k;
    g.k = std::max(k, 2);
    g.h = delta / (2.0 * g.k);
  }
  GridProblem p;
  p.half_width = half_width;
  p.spacing = g.h;
  p.pad_for_multigrid = pad_for_multigrid;
  const Grid grid = p.grid();
  g.n = grid.n;
  g.half_width = grid.x(grid.n - 1);
  return g;
}

void RunConfig::validate() const {
  if (!(alpha > 0.0) || !(beta >= alpha)) throw std::invalid_argument("config needs 0 < alpha <= beta");
  if (epsilons.empty()) throw std::invalid_argument("config needs at least one eps");
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (!(epsilons[k] > 0.0) || !(epsilons[k] < 1.0)) throw std::invalid_argument("eps values must lie in (0, 1)");
    if (k > 0 && !(epsilons[k] < epsilons[k - 1])) throw std::invalid_argument("eps list must be strictly decreasing");
  }
  if (!(half_width > 0.0)) throw std::invalid_argument("half_width must be positive");
  if (!(eps_per_h >= 3.0)) throw std::invalid_argument("grid policy needs eps / h >= 3");
  if (!(tolerance > 0.0) || tolerance >= 1.0) throw std::invalid_argument("tolerance must lie in (0, 1)");
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");
  if (!(memory_budget_mb > 0.0)) throw std::invalid_argument("memory budget must be positive");
  (void)ScaleSchedule::parse(schedule);
}

Extrapolation extrapolate(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 3) throw std::invalid_argument("extrapolation needs at least three points");
  std::vector<double> xs;
  for (const auto& [eps, v] : pts) {
    if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("extrapolation needs eps in (0, 1)");
    xs.push_back(1.0 / std::abs(std::log(eps)));
  }
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b)
      if (pts[a].first == pts[b].first) throw std::invalid_argument("extrapolation: repeated eps");

  const double n = double(pts.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    mx += xs[k];
    my += pts[k].second;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (pts[k].second - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("extrapolation: degenerate design");
  Extrapolation e;
  e.slope = sxy / sxx;
  e.L_hat = my - e.slope * mx;
  double ss = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double d = pts[k].second - (e.L_hat + e.slope * xs[k]);
    ss += d * d;
  }
  e.residual = std::sqrt(ss / n);
  e.points = int(pts.size());
  return e;
}

Extrapolation extrapolate(const std::vector<SweepRecord>& records) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : records)
    if (r.ok()) pts.emplace_back(r.epsilon, r.scaled);
  return extrapolate(pts);
}

std::size_t estimate_bytes(int n, bool with_profile) {
  // Operator (3 arrays), field + mask, five CG vectors, the fine multigrid
  // level copy (4 arrays + mask) and ~1/3 more for coarser levels.
  const double per_node = 8.0 * (3 + 1 + 5 + 4 * 4.0 / 3.0) + 2.0 + (with_profile ? 8.0 * 5 + 1 : 0.0);
  return std::size_t(per_node * double(n) * double(n));
}

SweepSummary sweep(const RunConfig& cfg) {
  cfg.validate();
  const ScaleSchedule schedule = ScaleSchedule::parse(cfg.schedule);
  const auto lam = schedule.lambda();

  SweepSummary summary;
  summary.lambda = lam.value;
  summary.lambda_estimate = lam.estimate;
  summary.predicted_limit = checkerboard_limit(cfg.alpha, cfg.beta, lam.value);

  std::vector<std::size_t> bytes;
  for (double eps : cfg.epsilons) {
    const GridChoice gc = choose_grid(eps, schedule.delta(eps), cfg.half_width, cfg.eps_per_h, cfg.alpha == cfg.beta);
    bytes.push_back(estimate_bytes(gc.n, cfg.with_profile));
  }
  std::sort(bytes.rbegin(), bytes.rend());
  const int workers = std::min<int>(cfg.workers, int(cfg.epsilons.size()));
  double peak = 0.0;
  for (int k = 0; k < workers; ++k) peak += double(bytes[k]);
  if (peak > cfg.memory_budget_mb * 1024.0 * 1024.0)
    throw std::runtime_error("memory budget exceeded: need about " + std::to_string(int(peak / 1048576.0)) +
                             " MB for " + std::to_string(workers) + " worker(s)");

  summary.records.resize(cfg.epsilons.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < cfg.epsilons.size(); k = next++)
      summary.records[k] = run_point(cfg, schedule, lam.value, cfg.epsilons[k]);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  std::vector<const SweepRecord*> ok;
  for (const auto& r : summary.records) {
    if (r.ok())
      ok.push_back(&r);
    else
      ++summary.failures;
  }
  if (ok.empty()) throw std::runtime_error("sweep produced no successful point");
  summary.monotone_toward_limit = true;
  for (std::size_t k = 1; k < ok.size(); ++k)
    if (!(std::abs(ok[k]->gap) < std::abs(ok[k - 1]->gap))) summary.monotone_toward_limit = false;
  if (ok.size() >= 3) summary.fit = extrapolate(summary.records);

  if (!cfg.output_dir.empty()) write_outputs(cfg, summary);
  return summary;
}

std::string records_csv(const std::vector<SweepRecord>& records, bool deterministic) {
  std::ostringstream os;
  os << "epsilon,delta,lambda_nominal,h,n,half_width,m,scaled,predicted_limit,gap,profile_energy,"
        "iterations,relative_residual,runtime_s,status\n";
  for (const auto& r : records) {
    os << fmt(r.epsilon) << ',' << fmt(r.delta) << ',' << fmt(r.lambda_nominal) << ',' << fmt(r.h) << ','
       << r.n << ',' << fmt(r.half_width) << ',' << fmt(r.m) << ',' << fmt(r.scaled) << ','
       << fmt(r.predicted_limit) << ',' << fmt(r.gap) << ',' << fmt(r.profile_energy) << ',' << r.iterations
       << ',' << fmt(r.relative_residual) << ',' << (deterministic ? "0" : fmt(r.runtime_s)) << ','
       << csv_escape(r.status) << '\n';
  }
  return os.str();
}

void write_outputs(const RunConfig& cfg, const SweepSummary& summary) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(fs::path(cfg.output_dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + name + " in " + cfg.output_dir);
    out << text;
  };
  write("sweep.csv", records_csv(summary.records, cfg.deterministic));
  write("summary.json", to_json(summary, cfg.deterministic) + "\n");
  write("config.json", to_json(cfg) + "\n");
}

Prediction predict(double alpha, double beta, double lambda, bool lambda_estimate) {
  Prediction p;
  p.alpha = alpha;
  p.beta = beta;
  p.lambda = lambda;
  p.lambda_estimate = lambda_estimate;
  LimitInputs in{alpha, std::sqrt(alpha * beta), lambda};
  in.validate();
  p.harmonic = checkerboard_limit(alpha, beta, lambda);
  p.arithmetic = gl_arithmetic_limit(in);
  p.c = optimal_boundary_value(alpha, beta, lambda);
  return p;
}

}  // namespace twocap
