#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "odekit/adaptive.hpp"
#include "odekit/core.hpp"
#include "odekit/multistep.hpp"
#include "odekit/problems.hpp"
#include "odekit/steppers.hpp"

namespace odekit {

struct SolveOptions {
  ImplicitSolveConfig implicit;
  MarchOptions march;
  int corrector_sweeps = 1;
  bool correct_to_convergence = false;
};

// Fixed-step run of any named method. "exact" samples the exact solution.
inline Trajectory run_fixed(const IvpProblem& problem, const std::string& method, double h,
                            const SolveOptions& opt = {}) {
  if (method == "exact") {
    if (!problem.has_exact()) throw MissingExactError(problem.name + " has no exact solution");
    const GridPlan plan = plan_grid(problem.t0, problem.t_end, h);
    Trajectory traj;
    for (std::size_t k = 0; k <= plan.total_steps(); ++k) {
      const double t = k == plan.total_steps() ? problem.t_end : problem.t0 + static_cast<double>(k) * h;
      traj.push(t, k == 0 ? problem.y0 : problem.exact(t));
    }
    return traj;
  }
  if (is_multistep_name(method)) {
    MultistepConfig cfg;
    cfg.solve = opt.implicit;
    cfg.march = opt.march;
    cfg.corrector_sweeps = opt.corrector_sweeps;
    cfg.correct_to_convergence = opt.correct_to_convergence;
    return multistep_march(problem, make_multistep(method), h, cfg);
  }
  return march(problem, make_stepper(method, opt.implicit), h, opt.march);
}

inline std::optional<double> observed_order(double e_coarse, double e_fine, double h_coarse, double h_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0) || !std::isfinite(e_coarse) || !std::isfinite(e_fine))
    return std::nullopt;
  return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

// Order from the finest consecutive pair whose errors both sit above the
// roundoff floor; nullopt when no such pair exists.
inline std::optional<double> asymptotic_order(const std::vector<double>& hs, const std::vector<double>& errs,
                                              double floor = 1e-11) {
  std::optional<double> out;
  for (std::size_t i = 1; i < hs.size() && i < errs.size(); ++i)
    if (errs[i - 1] > floor && errs[i] > floor) out = observed_order(errs[i - 1], errs[i], hs[i - 1], hs[i]);
  return out;
}

struct StudyRow {
  double h = 0.0;
  Vector y_final;
  double abs_err = 0.0;
  double rel_err = 0.0;
  std::optional<double> order;
  std::optional<double> bound_exp;  // 1/2 h (e^{Lb} - 1) ||y''||
  std::optional<double> bound_lin;  // 1/2 b h, when df/dy <= 0
};

struct StudyReport {
  std::string method;
  std::string problem;
  std::vector<StudyRow> rows;
  double wall_seconds = 0.0;
};

inline std::vector<double> halving_grid(double h0, int count) {
  std::vector<double> hs;
  for (int i = 0; i < count; ++i) hs.push_back(h0 / std::pow(2.0, i));
  return hs;
}

inline StudyReport run_study(const IvpProblem& problem, const std::string& method, const std::vector<double>& hs,
                             const SolveOptions& opt = {}) {
  if (!problem.has_exact()) throw MissingExactError(problem.name + " has no exact solution");
  if (hs.empty()) throw InvalidArgumentError("study needs at least one step size");
  for (std::size_t i = 1; i < hs.size(); ++i)
    if (!(hs[i] < hs[i - 1])) throw InvalidArgumentError("study step sizes must be strictly decreasing");

  StudyReport rep{method, problem.name, {}, 0.0};
  const auto start = std::chrono::steady_clock::now();
  const double b = problem.t_end - problem.t0;
  for (double h : hs) {
    const Trajectory traj = run_fixed(problem, method, h, opt);
    const EndError err = error_at_end(traj, problem);
    StudyRow row{h, traj.final_state(), err.abs_err, err.rel_err, std::nullopt, std::nullopt, std::nullopt};
    if (!rep.rows.empty()) row.order = observed_order(rep.rows.back().abs_err, row.abs_err, rep.rows.back().h, h);
    if (method == "euler" && problem.name == "decay") {
      row.bound_exp = 0.5 * h * (std::exp(b) - 1.0);
      row.bound_lin = 0.5 * b * h;
    } else if (method == "euler" && problem.name == "growth") {
      row.bound_exp = 0.5 * h * (std::exp(b) - 1.0) * std::exp(b);
    }
    rep.rows.push_back(std::move(row));
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace odekit
