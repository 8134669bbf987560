#pragma once

#include <cmath>
#include <complex>
#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "odekit/core.hpp"
#include "odekit/errors.hpp"
#include "odekit/steppers.hpp"

namespace odekit {

// y_{k+1} = sum_j a_j y_{k-j} + h [b_{-1} f_{k+1} + sum_j b_j f_{k-j}],  j = 0..steps-1
struct MultistepMethod {
  enum class Family { AB, AM, BDF, other };

  std::string name;
  Family family = Family::other;
  int q = 0;
  Vector a;
  double b_minus1 = 0.0;
  Vector b;
  int declared_order = 1;

  bool implicit() const { return b_minus1 != 0.0; }
  std::size_t steps() const { return std::max<std::size_t>({a.size(), b.size(), 1}); }
  double a_at(std::size_t j) const { return j < a.size() ? a[j] : 0.0; }
  double b_at(std::size_t j) const { return j < b.size() ? b[j] : 0.0; }

  // Characteristic polynomial at z, highest power first:
  // (1 - z b_{-1}) r^s - sum_j (a_j + z b_j) r^{s-1-j}
  ComplexVector characteristic(Complex z) const {
    const std::size_t s = steps();
    ComplexVector c(s + 1);
    c[0] = 1.0 - z * b_minus1;
    for (std::size_t j = 0; j < s; ++j) c[j + 1] = -(a_at(j) + z * b_at(j));
    return c;
  }

  Complex rho(Complex r) const {
    const std::size_t s = steps();
    Complex acc = std::pow(r, static_cast<int>(s));
    for (std::size_t j = 0; j < s; ++j) acc -= a_at(j) * std::pow(r, static_cast<int>(s - 1 - j));
    return acc;
  }

  Complex sigma(Complex r) const {
    const std::size_t s = steps();
    Complex acc = b_minus1 * std::pow(r, static_cast<int>(s));
    for (std::size_t j = 0; j < s; ++j) acc += b_at(j) * std::pow(r, static_cast<int>(s - 1 - j));
    return acc;
  }
};

inline MultistepMethod ab_method(int q) {
  MultistepMethod m;
  m.family = MultistepMethod::Family::AB;
  m.q = q;
  m.name = "ab" + std::to_string(q);
  m.a = {1.0};
  m.declared_order = q;
  switch (q) {
    case 1: m.b = {1.0}; break;
    case 2: m.b = {3.0 / 2.0, -1.0 / 2.0}; break;
    case 3: m.b = {23.0 / 12.0, -16.0 / 12.0, 5.0 / 12.0}; break;
    case 4: m.b = {55.0 / 24.0, -59.0 / 24.0, 37.0 / 24.0, -9.0 / 24.0}; break;
    default: throw UnsupportedOrderError("Adams-Bashforth q must be 1..4");
  }
  return m;
}

inline MultistepMethod am_method(int q) {
  MultistepMethod m;
  m.family = MultistepMethod::Family::AM;
  m.q = q;
  m.name = "am" + std::to_string(q);
  m.a = {1.0};
  m.declared_order = q + 1;
  switch (q) {
    case 0: m.b_minus1 = 1.0; break;
    case 1: m.b_minus1 = 0.5; m.b = {0.5}; break;
    case 2: m.b_minus1 = 5.0 / 12.0; m.b = {8.0 / 12.0, -1.0 / 12.0}; break;
    case 3: m.b_minus1 = 9.0 / 24.0; m.b = {19.0 / 24.0, -5.0 / 24.0, 1.0 / 24.0}; break;
    default: throw UnsupportedOrderError("Adams-Moulton q must be 0..3");
  }
  return m;
}

// BDF coefficients as tabulated (q = 6 is the standard value beyond the table).
inline MultistepMethod bdf_table(int q) {
  MultistepMethod m;
  m.family = MultistepMethod::Family::BDF;
  m.q = q;
  m.name = "bdf" + std::to_string(q);
  m.declared_order = q;
  switch (q) {
    case 1: m.a = {1.0}; m.b_minus1 = 1.0; break;
    case 2: m.a = {4.0 / 3.0, -1.0 / 3.0}; m.b_minus1 = 2.0 / 3.0; break;
    case 3: m.a = {18.0 / 11.0, -9.0 / 11.0, 2.0 / 11.0}; m.b_minus1 = 6.0 / 11.0; break;
    case 4: m.a = {48.0 / 25.0, -36.0 / 25.0, 16.0 / 25.0, -3.0 / 25.0}; m.b_minus1 = 12.0 / 25.0; break;
    case 5:
      m.a = {300.0 / 137.0, -300.0 / 137.0, 200.0 / 137.0, -75.0 / 137.0, 12.0 / 137.0};
      m.b_minus1 = 60.0 / 137.0;
      break;
    case 6:
      m.a = {360.0 / 147.0, -450.0 / 147.0, 400.0 / 147.0, -225.0 / 147.0, 72.0 / 147.0, -10.0 / 147.0};
      m.b_minus1 = 60.0 / 147.0;
      break;
    default: throw UnsupportedOrderError("BDF q must be 1..6");
  }
  return m;
}

// Generates BDF-q from Lagrange basis derivatives on the scaled nodes
// {1, 0, -1, ..., -(q-1)}: beta = 1/l'_{-1}(1), alpha_j = -l'_j(1)/l'_{-1}(1).
inline MultistepMethod bdf_coefficients(int q) {
  if (q < 1 || q > 6) throw UnsupportedOrderError("BDF q must be 1..6");
  std::vector<double> x(q + 1);
  for (int i = 0; i <= q; ++i) x[i] = 1.0 - static_cast<double>(i);
  auto dlagrange = [&](int i) {
    // derivative of the i-th basis polynomial at x[0]
    if (i == 0) {
      double s = 0.0;
      for (int m = 1; m <= q; ++m) s += 1.0 / (x[0] - x[m]);
      return s;
    }
    double num = 1.0, den = 1.0;
    for (int m = 0; m <= q; ++m) {
      if (m == i) continue;
      den *= x[i] - x[m];
      if (m != 0) num *= x[0] - x[m];
    }
    return num / den;
  };
  const double d0 = dlagrange(0);
  MultistepMethod m;
  m.family = MultistepMethod::Family::BDF;
  m.q = q;
  m.name = "bdf" + std::to_string(q);
  m.declared_order = q;
  m.b_minus1 = 1.0 / d0;
  for (int j = 1; j <= q; ++j) m.a.push_back(-dlagrange(j) / d0);
  return m;
}

inline MultistepMethod leapfrog_method() {
  MultistepMethod m;
  m.name = "leapfrog";
  m.q = 1;
  m.a = {0.0, 1.0};
  m.b = {2.0, 0.0};
  m.declared_order = 2;
  return m;
}

inline MultistepMethod make_multistep(const std::string& name) {
  auto parse = [&](std::size_t prefix) {
    if (name.size() != prefix + 1 || !std::isdigit(static_cast<unsigned char>(name[prefix])))
      throw InvalidArgumentError("unknown multistep method '" + name + "'");
    return name[prefix] - '0';
  };
  if (name.rfind("ab", 0) == 0) return ab_method(parse(2));
  if (name.rfind("am", 0) == 0) return am_method(parse(2));
  if (name.rfind("bdf", 0) == 0) return bdf_coefficients(parse(3));
  throw InvalidArgumentError("unknown multistep method '" + name + "'");
}

inline bool is_multistep_name(const std::string& name) {
  try {
    make_multistep(name);
    return true;
  } catch (const Error&) {
    return false;
  }
}

struct ConsistencyResidual {
  int condition = 0;  // 0: sum a_j = 1; i >= 1: the order-i condition
  double residual = 0.0;
};

namespace detail {

inline double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace detail

// Residuals of the consistency and order conditions up to order m.
inline std::vector<ConsistencyResidual> consistency_report(const MultistepMethod& method, int m) {
  if (m < 1) throw InvalidArgumentError("order must be at least 1");
  std::vector<ConsistencyResidual> out;
  double sum_a = 0.0;
  for (double v : method.a) sum_a += v;
  out.push_back({0, std::abs(sum_a - 1.0)});
  const std::size_t s = method.steps();
  for (int i = 1; i <= m; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < s; ++j) {
      const double mj = -static_cast<double>(j);
      acc += detail::ipow(mj, i) * method.a_at(j);
      acc += i * detail::ipow(mj, i - 1) * method.b_at(j);
    }
    acc += i * method.b_minus1;  // j = -1 contributes (1)^{i-1}
    out.push_back({i, std::abs(acc - 1.0)});
  }
  return out;
}

inline bool certifies_order(const MultistepMethod& method, int m, double tol = 1e-10) {
  for (const auto& r : consistency_report(method, m))
    if (r.residual > tol) return false;
  return true;
}

// Ring of the most recent (t, y, f) samples, newest first.
class HistoryBuffer {
 public:
  explicit HistoryBuffer(std::size_t capacity) : capacity_(capacity) {}

  void push(double t, Vector y, Vector f) {
    entries_.push_front({t, std::move(y), std::move(f)});
    if (entries_.size() > capacity_) entries_.pop_back();
  }

  std::size_t size() const { return entries_.size(); }
  const Vector& y(std::size_t j) const { return entries_[j].y; }
  const Vector& f(std::size_t j) const { return entries_[j].f; }
  double t(std::size_t j) const { return entries_[j].t; }

  bool equally_spaced(double h) const {
    for (std::size_t j = 0; j + 1 < entries_.size(); ++j) {
      const double d = entries_[j].t - entries_[j + 1].t;
      if (std::abs(d - h) > 1e-12 * std::max(std::abs(h), std::abs(entries_[j].t))) return false;
    }
    return true;
  }

 private:
  struct Entry {
    double t;
    Vector y;
    Vector f;
  };
  std::size_t capacity_;
  std::deque<Entry> entries_;
};

struct MultistepConfig {
  ImplicitSolveConfig solve;
  // Adams-Moulton runs as predictor-corrector: an AB predictor of equal order,
  // then this many corrector sweeps, unless correct_to_convergence is set.
  int corrector_sweeps = 1;
  bool correct_to_convergence = false;
  std::optional<Stepper> bootstrap;  // defaults to RK4
  MarchOptions march;
};

inline Trajectory multistep_march(const IvpProblem& problem, const MultistepMethod& method, double h,
                                  const MultistepConfig& cfg = {}) {
  problem.validate();
  const GridPlan plan = plan_grid(problem.t0, problem.t_end, h);
  if (plan.total_steps() + 1 > cfg.march.max_samples)
    throw SampleCapError("run would store " + std::to_string(plan.total_steps() + 1) + " samples");
  if (cfg.corrector_sweeps < 1) throw InvalidArgumentError("corrector_sweeps must be at least 1");

  const bool pece = method.family == MultistepMethod::Family::AM && !cfg.correct_to_convergence;
  std::optional<MultistepMethod> predictor;
  if (pece && method.implicit()) predictor = ab_method(std::min(method.declared_order, 4));
  const std::size_t need = std::max(method.steps(), predictor ? predictor->steps() : std::size_t{1});
  if (need - 1 > plan.full_steps)
    throw InvalidArgumentError(method.name + ": interval too short for the starting values");

  const Stepper boot = cfg.bootstrap ? *cfg.bootstrap : make_stepper("rk4");
  Trajectory traj;
  traj.times.reserve(plan.total_steps() + 1);
  traj.states.reserve(plan.total_steps() + 1);
  const RhsFn f = counted_rhs(problem, traj.stats);
  const JacobianFn* jac = problem.jacobian ? &problem.jacobian : nullptr;
  HistoryBuffer hist(need);

  traj.push(problem.t0, problem.y0);
  hist.push(problem.t0, problem.y0, f(problem.t0, problem.y0));
  const std::size_t steps = plan.total_steps();

  auto flag = [&](double t) {
    if (!traj.stats.diverged) {
      traj.stats.diverged = true;
      traj.stats.divergence_time = t;
    }
  };

  for (std::size_t k = 0; k < steps; ++k) {
    const bool last = (k + 1 == steps);
    const double t = traj.times.back();
    const double hk = (plan.shortened_last && last) ? plan.last_h : h;
    const double t_next = last ? problem.t_end : problem.t0 + static_cast<double>(k + 1) * h;
    const Vector& yk = traj.states.back();
    Vector next;
    try {
      if (k + 1 < need || hk != h) {
        // Starting values, and a shortened final step, come from the one-step method.
        StepContext ctx{problem, f, traj.stats, nullptr, 0.0};
        next = boot.step(ctx, t, yk, hk);
      } else {
        const std::size_t s = method.steps();
        const std::size_t n = problem.dim;
        Vector base(n, 0.0);
        for (std::size_t j = 0; j < s; ++j) {
          const double aj = method.a_at(j), bj = method.b_at(j);
          for (std::size_t i = 0; i < n; ++i) base[i] += aj * hist.y(j)[i] + h * bj * hist.f(j)[i];
        }
        if (!method.implicit()) {
          next = std::move(base);
        } else if (predictor) {
          Vector y = yk;
          for (std::size_t j = 0; j < predictor->steps(); ++j)
            for (std::size_t i = 0; i < n; ++i) y[i] += h * predictor->b_at(j) * hist.f(j)[i];
          for (int sweep = 0; sweep < cfg.corrector_sweeps; ++sweep) {
            const Vector fy = f(t_next, y);
            for (std::size_t i = 0; i < n; ++i) y[i] = base[i] + h * method.b_minus1 * fy[i];
            ++traj.stats.implicit_iters;
          }
          next = std::move(y);
        } else {
          Vector guess = yk;
          if (cfg.solve.predictor == ImplicitSolveConfig::Predictor::explicit_euler)
            guess = detail::axpy(yk, h, hist.f(0));
          next = detail::solve_one_leg(f, t_next, base, h * method.b_minus1, std::move(guess), cfg.solve, jac,
                                       &traj.stats);
        }
        if (!all_finite(next)) throw NonFiniteError(method.name + " produced a non-finite state");
      }
    } catch (const NonFiniteError&) {
      flag(t + hk);
      break;
    }
    const bool over = norm_inf(next) > cfg.march.divergence_threshold;
    if (!last) hist.push(t_next, next, f(t_next, next));
    traj.push(t_next, std::move(next));
    if (over) {
      flag(t_next);
      if (cfg.march.halt_on_divergence) break;
    }
  }
  return traj;
}

}  // namespace odekit
