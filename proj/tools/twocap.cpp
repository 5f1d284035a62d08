// twocap: command-line front end for the two-capacity laboratory.

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "twocap/capacity.hpp"
#include "twocap/degiorgi.hpp"
#include "twocap/elliptic.hpp"
#include "twocap/errors.hpp"
#include "twocap/formulas.hpp"
#include "twocap/harness.hpp"
#include "twocap/homogenize.hpp"
#include "twocap/io.hpp"
#include "twocap/medium.hpp"
#include "twocap/profiles.hpp"

using namespace twocap;

namespace {

struct MediumArgs {
  double alpha = 1.0;
  double beta = 4.0;
  double delta = 0.0;
  std::vector<double> tau{0.0, 0.0};

  void add(CLI::App* app) {
    app->add_option("--alpha", alpha, "Smaller coefficient value")->capture_default_str();
    app->add_option("--beta", beta, "Larger coefficient value")->capture_default_str();
    app->add_option("--delta", delta, "Checkerboard period (overrides the schedule)");
    app->add_option("--tau", tau, "Checkerboard offset (two values)")->expected(2)->capture_default_str();
  }
  Checkerboard medium(double d) const { return Checkerboard(alpha, beta, d, {tau[0], tau[1]}); }
};

struct SolverArgs {
  double tolerance = 1e-9;
  std::string preconditioner = "auto";
  int max_iterations = 0;

  void add(CLI::App* app) {
    app->add_option("--tol", tolerance, "Relative residual target")->capture_default_str();
    app->add_option("--preconditioner", preconditioner, "jacobi | multigrid | auto")->capture_default_str();
    app->add_option("--max-iterations", max_iterations, "0 = solver default");
  }
  SolverOptions options() const {
    SolverOptions o;
    o.tolerance = tolerance;
    o.max_iterations = max_iterations;
    o.preconditioner = preconditioner_from_string(preconditioner);
    return o;
  }
};

std::string kind_of(const std::exception& e) {
  if (dynamic_cast<const ResolutionError*>(&e)) return "resolution";
  if (dynamic_cast<const SolverError*>(&e)) return "solver";
  if (dynamic_cast<const std::invalid_argument*>(&e)) return "invalid_argument";
  if (dynamic_cast<const std::domain_error*>(&e)) return "domain";
  return "runtime";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-capacity of a small disc in a periodic checkerboard medium"};
  app.set_config("--config", "", "Key-value configuration file (flags override it)");
  app.require_subcommand(1);

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "Print the limit formulas");
  double p_alpha = 1.0, p_beta = 4.0, p_lambda = -1.0;
  std::string p_schedule;
  predict_cmd->add_option("--alpha", p_alpha)->capture_default_str();
  predict_cmd->add_option("--beta", p_beta)->capture_default_str();
  predict_cmd->add_option("--lambda", p_lambda, "Scale ratio in [0, 1]");
  predict_cmd->add_option("--schedule", p_schedule, "power:ETA | inverse_log | linear_times_log | proportional:C | table:...");

  // capacity
  auto* cap_cmd = app.add_subcommand("capacity", "Solve the discrete two-capacity problem");
  MediumArgs c_med;
  SolverArgs c_sol;
  double c_eps = 1.0 / 32, c_L = 1.0, c_h = 0.0, c_eps_per_h = 3.0;
  std::string c_schedule = "power:0.5", c_center = "alpha_cell", c_dump;
  c_med.add(cap_cmd);
  c_sol.add(cap_cmd);
  cap_cmd->add_option("--eps", c_eps, "Inclusion radius")->capture_default_str();
  cap_cmd->add_option("--half-width", c_L, "Domain half-width L")->capture_default_str();
  cap_cmd->add_option("--spacing", c_h, "Lattice spacing (default: grid policy)");
  cap_cmd->add_option("--eps-per-h", c_eps_per_h, "Grid policy: eps / h lower bound")->capture_default_str();
  cap_cmd->add_option("--schedule", c_schedule, "Schedule giving delta(eps)")->capture_default_str();
  cap_cmd->add_option("--center-policy", c_center, "given | alpha_cell | search")->capture_default_str();
  cap_cmd->add_option("--dump", c_dump, "Write the minimiser to PREFIX.bin / PREFIX.txt");

  // annulus
  auto* ann_cmd = app.add_subcommand("annulus", "Solve an annulus problem");
  MediumArgs a_med;
  SolverArgs a_sol;
  double a_R = 1.0, a_r = 0.125, a_in = 1.0, a_out = 0.0, a_h = 1.0 / 512;
  a_med.alpha = a_med.beta = 1.0;
  a_med.add(ann_cmd);
  a_sol.add(ann_cmd);
  ann_cmd->add_option("--R", a_R, "Outer radius")->capture_default_str();
  ann_cmd->add_option("--r", a_r, "Inner radius")->capture_default_str();
  ann_cmd->add_option("--inner", a_in, "Inner boundary value")->capture_default_str();
  ann_cmd->add_option("--outer", a_out, "Outer boundary value")->capture_default_str();
  ann_cmd->add_option("--spacing", a_h, "Lattice spacing")->capture_default_str();

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Run an eps sweep and extrapolate");
  RunConfig cfg;
  std::string s_center = "alpha_cell", s_pre = "auto", s_cpolicy = "from_schedule";
  std::vector<double> s_tau{0.0, 0.0};
  sweep_cmd->add_option("--alpha", cfg.alpha)->capture_default_str();
  sweep_cmd->add_option("--beta", cfg.beta)->capture_default_str();
  sweep_cmd->add_option("--schedule", cfg.schedule)->capture_default_str();
  sweep_cmd->add_option("--epsilons", cfg.epsilons, "Strictly decreasing eps list")->delimiter(',');
  sweep_cmd->add_option("--half-width", cfg.half_width)->capture_default_str();
  sweep_cmd->add_option("--eps-per-h", cfg.eps_per_h)->capture_default_str();
  sweep_cmd->add_option("--center-policy", s_center)->capture_default_str();
  sweep_cmd->add_option("--tol", cfg.tolerance)->capture_default_str();
  sweep_cmd->add_option("--preconditioner", s_pre)->capture_default_str();
  sweep_cmd->add_flag("--deterministic", cfg.deterministic, "Write runtime as 0 for byte-stable CSV");
  sweep_cmd->add_option("--workers", cfg.workers)->capture_default_str();
  sweep_cmd->add_option("--output-dir", cfg.output_dir, "Directory for sweep.csv, summary.json, config.json");
  sweep_cmd->add_option("--memory-budget-mb", cfg.memory_budget_mb)->capture_default_str();
  sweep_cmd->add_flag("--with-profile", cfg.with_profile, "Also build the capacitary profile per point");
  sweep_cmd->add_option("--profile-lambda1", cfg.profile.lambda1);
  sweep_cmd->add_option("--profile-R0", cfg.profile.R0);
  sweep_cmd->add_option("--profile-guard", cfg.profile.guard_ratio)->capture_default_str();
  sweep_cmd->add_option("--profile-c-policy", s_cpolicy)->capture_default_str();
  sweep_cmd->add_option("--tau", s_tau)->expected(2)->capture_default_str();

  // cell
  auto* cell_cmd = app.add_subcommand("cell", "Checkerboard cell problem and uniformity probe");
  double k_alpha = 1.0, k_beta = 4.0;
  int k_res = 256, k_tau_samples = 0, k_ppp = 8;
  std::vector<double> k_etas;
  cell_cmd->add_option("--alpha", k_alpha)->capture_default_str();
  cell_cmd->add_option("--beta", k_beta)->capture_default_str();
  cell_cmd->add_option("--resolution", k_res)->capture_default_str();
  cell_cmd->add_option("--probe-etas", k_etas, "Run the annulus uniformity probe at these periods")->delimiter(',');
  cell_cmd->add_option("--probe-taus", k_tau_samples, "Number of offsets per period (regular diagonal samples)");
  cell_cmd->add_option("--points-per-period", k_ppp)->capture_default_str();

  // profile
  auto* prof_cmd = app.add_subcommand("profile", "Build the capacitary profile and compare with the minimum");
  MediumArgs f_med;
  SolverArgs f_sol;
  double f_eps = 1.0 / 512, f_L = 1.0, f_eps_per_h = 3.0;
  std::string f_schedule = "power:0.5", f_cpolicy = "from_schedule", f_dump;
  ProfileSpec::Options f_opt;
  bool f_compare = false;
  f_med.add(prof_cmd);
  f_sol.add(prof_cmd);
  prof_cmd->add_option("--eps", f_eps)->capture_default_str();
  prof_cmd->add_option("--half-width", f_L)->capture_default_str();
  prof_cmd->add_option("--eps-per-h", f_eps_per_h)->capture_default_str();
  prof_cmd->add_option("--schedule", f_schedule)->capture_default_str();
  prof_cmd->add_option("--lambda1", f_opt.lambda1);
  prof_cmd->add_option("--R0", f_opt.R0);
  prof_cmd->add_option("--guard", f_opt.guard_ratio)->capture_default_str();
  prof_cmd->add_option("--c-policy", f_cpolicy, "from_schedule | discrete_optimal")->capture_default_str();
  prof_cmd->add_flag("--compare", f_compare, "Also solve the capacity problem and report the ratio");
  prof_cmd->add_option("--dump", f_dump, "Write the profile to PREFIX.bin / PREFIX.txt");

  // degiorgi
  auto* dg_cmd = app.add_subcommand("degiorgi", "Circle-rounding cut-off study");
  double d_alpha = 1.0, d_beta = 4.0, d_margin = 1.5;
  std::vector<int> d_scales{6, 8, 10}, d_nlist{2, 3, 4, 5};
  int d_instances = 4;
  unsigned long long d_seed = 1;
  std::string d_csv, d_calibration;
  dg_cmd->add_option("--alpha", d_alpha)->capture_default_str();
  dg_cmd->add_option("--beta", d_beta)->capture_default_str();
  dg_cmd->add_option("--scales", d_scales)->delimiter(',')->capture_default_str();
  dg_cmd->add_option("--n-list", d_nlist)->delimiter(',')->capture_default_str();
  dg_cmd->add_option("--instances", d_instances, "Random instances per (S, N)")->capture_default_str();
  dg_cmd->add_option("--seed", d_seed)->capture_default_str();
  dg_cmd->add_option("--margin", d_margin, "Calibration margin on the implied constant")->capture_default_str();
  dg_cmd->add_option("--csv", d_csv, "Write the study table as CSV");
  dg_cmd->add_option("--calibration", d_calibration, "Write the calibrated constant as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_json("usage", e.what()) << "\n";
    return 2;
  }

  try {
    if (*predict_cmd) {
      bool estimate = false;
      if (!p_schedule.empty()) {
        const auto l = ScaleSchedule::parse(p_schedule).lambda();
        p_lambda = l.value;
        estimate = l.estimate;
      }
      if (p_lambda < 0.0) throw std::invalid_argument("predict needs --lambda or --schedule");
      std::cout << to_json(predict(p_alpha, p_beta, p_lambda, estimate)) << "\n";
    } else if (*cap_cmd) {
      const ScaleSchedule sch = ScaleSchedule::parse(c_schedule);
      const double delta = c_med.delta > 0.0 ? c_med.delta : sch.delta(c_eps);
      GridProblem prob;
      prob.half_width = c_L;
      prob.radius = c_eps;
      prob.spacing = c_h > 0.0 ? c_h : choose_grid(c_eps, delta, c_L, c_eps_per_h, c_med.alpha == c_med.beta).h;
      CapacityOptions opt;
      opt.solver = c_sol.options();
      opt.center_policy = center_policy_from_string(c_center);
      opt.keep_field = !c_dump.empty();
      opt.lambda = c_med.delta > 0.0 ? -1.0 : sch.lambda().value;
      const CapacityResult r = solve_capacity(prob, c_med.medium(delta), opt);
      if (r.field)
        dump_field(*r.field, c_dump,
                   {{"L", r.meta.half_width}, {"zx", r.meta.center.x}, {"zy", r.meta.center.y}, {"eps", c_eps}});
      std::cout << to_json(r) << "\n";
    } else if (*ann_cmd) {
      const double delta = a_med.delta > 0.0 ? a_med.delta : 1.0;
      CapacityOptions opt;
      opt.solver = a_sol.options();
      const CapacityResult r = solve_annulus(a_R, a_r, a_in, a_out, a_med.medium(delta), a_h, opt);
      std::cout << to_json(r) << "\n";
    } else if (*sweep_cmd) {
      cfg.center_policy = center_policy_from_string(s_center);
      cfg.preconditioner = preconditioner_from_string(s_pre);
      cfg.profile.c_policy = boundary_value_policy_from_string(s_cpolicy);
      cfg.tau = {s_tau[0], s_tau[1]};
      const SweepSummary s = sweep(cfg);
      std::cout << to_json(s, cfg.deterministic) << "\n";
    } else if (*cell_cmd) {
      if (k_etas.empty()) {
        std::cout << to_json(cell_problem(k_alpha, k_beta, k_res)) << "\n";
      } else {
        std::vector<Vec2> taus{{0.0, 0.0}};
        for (int k = 1; k < k_tau_samples; ++k) {
          const double t = double(k) / k_tau_samples;
          taus.push_back({t, std::fmod(0.37 + t * 1.618, 1.0)});
        }
        std::cout << to_json(uniformity_probe(k_alpha, k_beta, k_etas, taus, k_ppp)) << "\n";
      }
    } else if (*prof_cmd) {
      const ScaleSchedule sch = ScaleSchedule::parse(f_schedule);
      const double lambda = sch.lambda().value;
      const double delta = f_med.delta > 0.0 ? f_med.delta : sch.delta(f_eps);
      const Checkerboard medium = f_med.medium(delta);
      GridProblem prob;
      prob.half_width = f_L;
      prob.radius = f_eps;
      prob.spacing = choose_grid(f_eps, delta, f_L, f_eps_per_h, f_med.alpha == f_med.beta).h;
      CapacityOptions opt;
      opt.solver = f_sol.options();
      opt.keep_field = true;
      opt.lambda = lambda;
      const Grid grid = prob.grid();
      const Vec2 z = medium.is_uniform() ? Vec2{} : medium.alpha_cell_center({});
      f_opt.c_policy = boundary_value_policy_from_string(f_cpolicy);
      const ProfileSpec spec = ProfileSpec::make(f_eps, delta, lambda, f_med.alpha, f_med.beta, z, grid, f_opt);
      const ProfileResult pr = build_profile(spec, medium, grid, f_sol.options());
      if (!f_dump.empty()) dump_field(pr.field, f_dump, {{"eps", f_eps}, {"zx", z.x}, {"zy", z.y}});
      std::cout << to_json(spec, pr) << "\n";
      if (f_compare) {
        const CapacityResult cap = solve_capacity(prob, medium, opt);
        std::cout << to_json(upper_bound_report(spec, pr, cap)) << "\n";
      }
    } else if (*dg_cmd) {
      const auto rows = constant_study(d_alpha, d_beta, d_scales, d_nlist, d_instances, d_seed);
      if (!d_csv.empty()) write_text(d_csv, study_csv(rows));
      const Calibration cal = calibrate(rows, d_alpha, d_beta, d_margin);
      if (!d_calibration.empty()) save_calibration(cal, d_calibration);
      std::cout << to_json(rows) << "\n" << calibration_to_json(cal) << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << error_json(kind_of(e), e.what()) << "\n";
    return 1;
  }
  return 0;
}
