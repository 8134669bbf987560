#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "odekit/core.hpp"
#include "odekit/errors.hpp"

namespace odekit {

// h_new = safety * h * (tol / e)^(1/p)
inline double step_size_update(double h, double e, double tol, double p = 2.0, double safety = 0.8) {
  return safety * h * std::pow(tol / e, 1.0 / p);
}

struct AdaptiveConfig {
  double tol = 1e-3;
  double safety = 0.8;
  double p = 2.0;  // local order in the update exponent
  double h_min = 1e-12;
  int max_rejects_per_step = 50;
  std::size_t max_samples = 10'000'000;

  void validate() const {
    if (!(tol > 0.0)) throw InvalidArgumentError("tolerance must be positive");
    if (!(safety > 0.0 && safety < 1.0)) throw InvalidArgumentError("safety must lie in (0,1)");
    if (!(p > 0.0)) throw InvalidArgumentError("update exponent order must be positive");
    if (!(h_min > 0.0)) throw InvalidArgumentError("h_min must be positive");
    if (max_rejects_per_step < 1) throw InvalidArgumentError("max_rejects_per_step must be at least 1");
  }
};

struct AdaptiveLogEntry {
  double t = 0.0;  // start of the attempted step
  double h = 0.0;
  double e = 0.0;
  bool accepted = false;
};

struct AdaptiveResult {
  Trajectory traj;
  std::vector<AdaptiveLogEntry> log;

  std::size_t accepted() const { return traj.size() - 1; }
  std::size_t rejected() const { return traj.stats.rejected_steps; }
};

// Euler/RK2 pair: f1 = f(t,y), f2 = f(t+h/2, y+(h/2)f1), e = ||h(f2-f1)||_inf.
// Accepted steps advance with y + h f2 and reset h to tol^(1/3); the last
// step is clamped to land on t_end.
inline AdaptiveResult ode12_solve(const IvpProblem& problem, const AdaptiveConfig& cfg = {}) {
  problem.validate();
  cfg.validate();
  AdaptiveResult out;
  Trajectory& traj = out.traj;
  const RhsFn f = counted_rhs(problem, traj.stats);
  const double h_reset = std::cbrt(cfg.tol);
  const std::size_t n = problem.dim;

  double t = problem.t0;
  Vector y = problem.y0;
  traj.push(t, y);
  double h = h_reset;
  int rejects = 0;
  while (t < problem.t_end) {
    const double remaining = problem.t_end - t;
    // A sliver left by rounding in t is absorbed into the current step.
    const bool clamped = h >= remaining - 1e-12 * std::max(1.0, std::abs(problem.t_end));
    const double hs = clamped ? remaining : h;
    if (hs < cfg.h_min) throw StepUnderflowError("step " + std::to_string(hs) + " below h_min at t=" + std::to_string(t));

    const Vector f1 = f(t, y);
    Vector mid(n);
    for (std::size_t i = 0; i < n; ++i) mid[i] = y[i] + hs / 2.0 * f1[i];
    const Vector f2 = f(t + hs / 2.0, mid);
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) e = std::max(e, std::abs(hs * (f2[i] - f1[i])));
    if (!std::isfinite(e)) throw NonFiniteError("error estimate is not finite at t=" + std::to_string(t));

    if (e < cfg.tol) {
      for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + hs * f2[i];
      t = clamped ? problem.t_end : t + hs;
      out.log.push_back({t - hs, hs, e, true});
      if (traj.size() + 1 > cfg.max_samples) throw SampleCapError("adaptive run exceeded the sample cap");
      traj.push(t, y);
      h = h_reset;
      rejects = 0;
    } else {
      out.log.push_back({t, hs, e, false});
      ++traj.stats.rejected_steps;
      if (++rejects >= cfg.max_rejects_per_step)
        throw RejectCapError(std::to_string(rejects) + " consecutive rejections at t=" + std::to_string(t));
      h = step_size_update(hs, e, cfg.tol, cfg.p, cfg.safety);
    }
  }
  return out;
}

}  // namespace odekit
