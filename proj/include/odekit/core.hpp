#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "odekit/errors.hpp"
#include "odekit/linalg.hpp"

namespace odekit {

using RhsFn = std::function<Vector(double, const Vector&)>;
using JacobianFn = std::function<DenseMatrix(double, const Vector&)>;
using ExactFn = std::function<Vector(double)>;

struct IvpProblem {
  std::string name;
  std::size_t dim = 0;
  RhsFn rhs;
  JacobianFn jacobian;   // optional
  RhsFn taylor_d2;       // optional total derivative y''
  RhsFn taylor_d3;       // optional total derivative y'''
  double t0 = 0.0;
  double t_end = 0.0;
  Vector y0;
  ExactFn exact;         // optional
  std::optional<double> lipschitz_hint;

  bool has_exact() const { return static_cast<bool>(exact); }
  bool has_jacobian() const { return static_cast<bool>(jacobian); }

  void validate() const {
    if (dim < 1) throw InvalidArgumentError(name + ": dim must be at least 1");
    if (!rhs) throw InvalidArgumentError(name + ": rhs missing");
    if (!(t_end > t0)) throw InvalidArgumentError(name + ": t_end must exceed t0");
    if (y0.size() != dim) throw InvalidArgumentError(name + ": y0 has wrong length");
    if (lipschitz_hint && *lipschitz_hint < 0.0) throw InvalidArgumentError(name + ": negative Lipschitz hint");
    if (exact) {
      const Vector e = exact(t0);
      if (e.size() != dim) throw InvalidArgumentError(name + ": exact solution has wrong length");
      double d = 0.0;
      for (std::size_t i = 0; i < dim; ++i) d = std::max(d, std::abs(e[i] - y0[i]));
      if (d > 1e-12) throw InvalidArgumentError(name + ": exact(t0) does not match y0");
    }
  }
};

struct RunStats {
  std::uint64_t rhs_evals = 0;
  std::uint64_t implicit_iters = 0;
  std::uint64_t rejected_steps = 0;
  bool diverged = false;
  double divergence_time = std::numeric_limits<double>::quiet_NaN();
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  RunStats stats;

  std::size_t size() const { return times.size(); }
  double final_time() const { return times.back(); }
  const Vector& final_state() const { return states.back(); }

  void push(double t, Vector y) {
    times.push_back(t);
    states.push_back(std::move(y));
  }
};

// Wraps a problem's rhs so every evaluation is counted.
inline RhsFn counted_rhs(const IvpProblem& problem, RunStats& stats) {
  return [&problem, &stats](double t, const Vector& y) {
    ++stats.rhs_evals;
    Vector out = problem.rhs(t, y);
    if (out.size() != problem.dim) throw InvalidArgumentError(problem.name + ": rhs returned wrong length");
    return out;
  };
}

// Everything a type-erased stepper may need for one step.
struct StepContext {
  const IvpProblem& problem;
  const RhsFn& f;
  RunStats& stats;
  const Vector* y_prev = nullptr;  // state one step back, when available
  double h_prev = 0.0;             // step size that produced the current state
};

struct Stepper {
  std::string name;
  int order = 1;
  std::function<Vector(StepContext&, double t, const Vector& y, double h)> step;
};

struct MarchOptions {
  double divergence_threshold = 1e12;
  bool halt_on_divergence = false;
  std::size_t max_samples = 10'000'000;
};

// Step plan for [t0, t_end] with nominal step h. The last entry may be shorter.
struct GridPlan {
  std::size_t full_steps = 0;
  bool shortened_last = false;
  double last_h = 0.0;

  std::size_t total_steps() const { return full_steps + (shortened_last ? 1 : 0); }
};

inline GridPlan plan_grid(double t0, double t_end, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgumentError("step size must be positive and finite");
  const double span = t_end - t0;
  if (h > span * (1.0 + 1e-12)) throw InvalidArgumentError("step size exceeds the integration interval");
  const double ratio = span / h;
  const double nearest = std::floor(ratio + 0.5);
  GridPlan plan;
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) {
    plan.full_steps = static_cast<std::size_t>(nearest);
  } else {
    plan.full_steps = static_cast<std::size_t>(std::floor(ratio));
    plan.shortened_last = true;
    plan.last_h = t_end - (t0 + static_cast<double>(plan.full_steps) * h);
  }
  return plan;
}

// Fixed-grid driver: samples at t0 + k h, landing exactly on t_end.
inline Trajectory march(const IvpProblem& problem, const Stepper& stepper, double h, const MarchOptions& opt = {}) {
  problem.validate();
  const GridPlan plan = plan_grid(problem.t0, problem.t_end, h);
  if (plan.total_steps() + 1 > opt.max_samples)
    throw SampleCapError("run would store " + std::to_string(plan.total_steps() + 1) + " samples");

  Trajectory traj;
  traj.times.reserve(plan.total_steps() + 1);
  traj.states.reserve(plan.total_steps() + 1);
  traj.push(problem.t0, problem.y0);
  const RhsFn f = counted_rhs(problem, traj.stats);

  Vector prev;
  bool have_prev = false;
  double h_prev = 0.0;
  const std::size_t steps = plan.total_steps();
  for (std::size_t k = 0; k < steps; ++k) {
    const bool last = (k + 1 == steps);
    const double t = (k == 0) ? problem.t0 : traj.times.back();
    const double hk = (plan.shortened_last && last) ? plan.last_h : h;
    StepContext ctx{problem, f, traj.stats, have_prev ? &prev : nullptr, h_prev};
    Vector next;
    try {
      next = stepper.step(ctx, t, traj.states.back(), hk);
    } catch (const NonFiniteError&) {
      if (!traj.stats.diverged) {
        traj.stats.diverged = true;
        traj.stats.divergence_time = t + hk;
      }
      break;
    }
    const double t_next = last ? problem.t_end : problem.t0 + static_cast<double>(k + 1) * h;
    prev = traj.states.back();
    have_prev = true;
    h_prev = hk;
    const bool over = norm_inf(next) > opt.divergence_threshold;
    traj.push(t_next, std::move(next));
    if (over && !traj.stats.diverged) {
      traj.stats.diverged = true;
      traj.stats.divergence_time = t_next;
      if (opt.halt_on_divergence) break;
    }
  }
  return traj;
}

struct EndError {
  double abs_err = 0.0;
  double rel_err = 0.0;
};

inline EndError error_at_end(const Trajectory& traj, const IvpProblem& problem) {
  if (!problem.has_exact()) throw MissingExactError(problem.name + " has no exact solution");
  const Vector ex = problem.exact(traj.final_time());
  const Vector& y = traj.final_state();
  double err = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) err = std::max(err, std::abs(y[i] - ex[i]));
  const double scale = norm_inf(ex);
  return {err, scale < 1e-300 ? err : err / scale};
}

// Max-norm error over every sample of the trajectory.
inline double max_error(const Trajectory& traj, const IvpProblem& problem) {
  if (!problem.has_exact()) throw MissingExactError(problem.name + " has no exact solution");
  double err = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Vector ex = problem.exact(traj.times[k]);
    for (std::size_t i = 0; i < ex.size(); ++i) err = std::max(err, std::abs(traj.states[k][i] - ex[i]));
  }
  return err;
}

}  // namespace odekit
