#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "odekit/core.hpp"
#include "odekit/errors.hpp"
#include "odekit/linalg.hpp"

namespace odekit {

namespace detail {

// y + a*x, elementwise.
inline Vector axpy(const Vector& y, double a, const Vector& x) {
  Vector out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + a * x[i];
  return out;
}

inline Vector checked(Vector y, const char* who) {
  if (!all_finite(y)) throw NonFiniteError(std::string(who) + " produced a non-finite state");
  return y;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Butcher tableaus

enum class TableauKind { explicit_rk, diagonally_implicit, fully_implicit };

struct ButcherTableau {
  std::string name;
  std::size_t s = 0;
  DenseMatrix a;
  Vector b;
  Vector c;
  TableauKind kind = TableauKind::explicit_rk;
  int declared_order = 1;

  ButcherTableau() = default;
  ButcherTableau(std::string name_, DenseMatrix a_, Vector b_, Vector c_, int order)
      : name(std::move(name_)), s(b_.size()), a(std::move(a_)), b(std::move(b_)), c(std::move(c_)),
        declared_order(order) {
    kind = classify();
    validate();
  }

  TableauKind classify() const {
    bool strictly_lower = true;
    bool lower = true;
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = i; j < s; ++j) {
        if (a(i, j) != 0.0) {
          strictly_lower = false;
          if (j > i) lower = false;
        }
      }
    if (strictly_lower) return TableauKind::explicit_rk;
    if (lower) return TableauKind::diagonally_implicit;
    return TableauKind::fully_implicit;
  }

  void validate() const {
    if (s == 0 || a.rows() != s || a.cols() != s || c.size() != s)
      throw TableauInvariantError(name + ": inconsistent stage dimensions");
    double sum_b = 0.0;
    for (double x : b) sum_b += x;
    if (std::abs(sum_b - 1.0) > 1e-12) throw TableauInvariantError(name + ": weights do not sum to 1");
    for (std::size_t i = 0; i < s; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < s; ++j) row += a(i, j);
      if (std::abs(row - c[i]) > 1e-12) throw TableauInvariantError(name + ": row sum differs from c");
    }
    if (kind != classify()) throw TableauInvariantError(name + ": kind does not match the shape of A");
    if (declared_order < 1) throw TableauInvariantError(name + ": declared order must be positive");
  }
};

namespace tableaus {

inline ButcherTableau euler() { return {"euler", DenseMatrix{{0.0}}, {1.0}, {0.0}, 1}; }

inline ButcherTableau heun() {
  return {"heun", DenseMatrix{{0.0, 0.0}, {1.0, 0.0}}, {0.5, 0.5}, {0.0, 1.0}, 2};
}

inline ButcherTableau midpoint() {
  return {"rk2mid", DenseMatrix{{0.0, 0.0}, {0.5, 0.0}}, {0.0, 1.0}, {0.0, 0.5}, 2};
}

inline ButcherTableau rk3() {
  return {"rk3",
          DenseMatrix{{0.0, 0.0, 0.0}, {0.5, 0.0, 0.0}, {-1.0, 2.0, 0.0}},
          {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
          {0.0, 0.5, 1.0},
          3};
}

inline ButcherTableau rk4() {
  return {"rk4",
          DenseMatrix{{0.0, 0.0, 0.0, 0.0}, {0.5, 0.0, 0.0, 0.0}, {0.0, 0.5, 0.0, 0.0}, {0.0, 0.0, 1.0, 0.0}},
          {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0},
          {0.0, 0.5, 0.5, 1.0},
          4};
}

inline ButcherTableau implicit_euler() { return {"ieuler", DenseMatrix{{1.0}}, {1.0}, {1.0}, 1}; }

inline ButcherTableau trapezoidal() {
  return {"trap", DenseMatrix{{0.0, 0.0}, {0.5, 0.5}}, {0.5, 0.5}, {0.0, 1.0}, 2};
}

inline ButcherTableau trbdf2() {
  return {"trbdf2",
          DenseMatrix{{0.0, 0.0, 0.0}, {0.25, 0.25, 0.0}, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}},
          {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
          {0.0, 0.5, 1.0},
          2};
}

inline ButcherTableau gauss2() {
  const double r3 = std::sqrt(3.0);
  return {"gauss2",
          DenseMatrix{{0.25, (3.0 - 2.0 * r3) / 12.0}, {(3.0 + 2.0 * r3) / 12.0, 0.25}},
          {0.5, 0.5},
          {(3.0 - r3) / 6.0, (3.0 + r3) / 6.0},
          4};
}

}  // namespace tableaus

// R(z) = det(I - zA + z 1 b^T) / det(I - zA), which avoids the cancellation
// in 1 + z b^T (I - zA)^{-1} 1 for large |z|.
inline Complex rk_stability_value(const ButcherTableau& tab, Complex z) {
  const std::size_t s = tab.s;
  ComplexMatrix den = ComplexMatrix::identity(s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) den(i, j) -= z * tab.a(i, j);
  ComplexMatrix num = den;
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) num(i, j) += z * tab.b[j];
  const Complex d = determinant(den, true);
  return determinant(num) / d;
}

// ---------------------------------------------------------------------------
// Implicit solve configuration

struct ImplicitSolveConfig {
  enum class Strategy { automatic, fixed_point, newton };
  enum class Predictor { previous_value, explicit_euler };

  Strategy strategy = Strategy::automatic;  // Newton when a Jacobian exists
  double tol = 1e-12;
  int max_iters = 50;
  Predictor predictor = Predictor::explicit_euler;
  bool require_convergence = true;  // false: accept the iterate after max_iters updates

  void validate() const {
    if (!(tol > 0.0 && tol < 1.0)) throw InvalidArgumentError("implicit tol must lie in (0,1)");
    if (max_iters < 1) throw InvalidArgumentError("implicit max_iters must be at least 1");
  }

  // The two-point iteration: start from y_k and iterate twice.
  static ImplicitSolveConfig two_point() {
    ImplicitSolveConfig cfg;
    cfg.strategy = Strategy::fixed_point;
    cfg.max_iters = 2;
    cfg.predictor = Predictor::previous_value;
    cfg.require_convergence = false;
    return cfg;
  }
};

namespace detail {

inline bool use_newton(const ImplicitSolveConfig& cfg, const JacobianFn* jac) {
  switch (cfg.strategy) {
    case ImplicitSolveConfig::Strategy::fixed_point:
      return false;
    case ImplicitSolveConfig::Strategy::newton:
      if (jac == nullptr || !*jac) throw InvalidArgumentError("Newton strategy needs a Jacobian");
      return true;
    case ImplicitSolveConfig::Strategy::automatic:
      break;
  }
  return jac != nullptr && static_cast<bool>(*jac);
}

// Solves Y = base + gamma*h*f(t1, Y) starting from guess.
inline Vector solve_one_leg(const RhsFn& f, double t1, const Vector& base, double gh, Vector guess,
                            const ImplicitSolveConfig& cfg, const JacobianFn* jac, RunStats* stats) {
  cfg.validate();
  const bool newton = use_newton(cfg, jac);
  const std::size_t n = base.size();
  Vector y = std::move(guess);
  for (int it = 0;; ++it) {
    const Vector fy = f(t1, y);
    Vector r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = y[i] - (base[i] + gh * fy[i]);
    if (!all_finite(r)) throw ImplicitSolveError("implicit iteration produced a non-finite residual");
    if (norm_inf(r) <= cfg.tol * (1.0 + norm_inf(y))) return y;
    if (it == cfg.max_iters) {
      throw ImplicitSolveError("no convergence after " + std::to_string(cfg.max_iters) + " iterations");
    }
    if (newton) {
      DenseMatrix m = (*jac)(t1, y);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = (i == j ? 1.0 : 0.0) - gh * m(i, j);
      for (auto& x : r) x = -x;
      const Vector delta = lu_solve(m, r);
      for (std::size_t i = 0; i < n; ++i) y[i] += delta[i];
    } else {
      for (std::size_t i = 0; i < n; ++i) y[i] = base[i] + gh * fy[i];
    }
    if (stats) ++stats->implicit_iters;
    if (!cfg.require_convergence && it + 1 == cfg.max_iters) return y;
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// One-step methods

inline Vector explicit_euler_step(const RhsFn& f, double t, const Vector& y, double h) {
  const Vector k = f(t, y);
  return detail::checked(detail::axpy(y, h, k), "explicit Euler");
}

// y_{k+1} = y_k + h[(1-theta) f(t_k, y_k) + theta f(t_{k+1}, y_{k+1})]
inline Vector theta_step(const RhsFn& f, double t, const Vector& y, double h, double theta,
                         const ImplicitSolveConfig& cfg = {}, const JacobianFn* jac = nullptr,
                         RunStats* stats = nullptr) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidArgumentError("theta must lie in [0,1]");
  if (theta == 0.0) return explicit_euler_step(f, t, y, h);
  const bool need_fk = theta < 1.0 || cfg.predictor == ImplicitSolveConfig::Predictor::explicit_euler;
  Vector fk;
  if (need_fk) fk = f(t, y);
  const Vector base = theta < 1.0 ? detail::axpy(y, h * (1.0 - theta), fk) : y;
  Vector guess = cfg.predictor == ImplicitSolveConfig::Predictor::explicit_euler ? detail::axpy(y, h, fk) : y;
  Vector out = detail::solve_one_leg(f, t + h, base, theta * h, std::move(guess), cfg, jac, stats);
  return detail::checked(std::move(out), "theta method");
}

inline Vector implicit_euler_step(const RhsFn& f, double t, const Vector& y, double h,
                                  const ImplicitSolveConfig& cfg = {}, const JacobianFn* jac = nullptr,
                                  RunStats* stats = nullptr) {
  return theta_step(f, t, y, h, 1.0, cfg, jac, stats);
}

inline Vector trapezoidal_step(const RhsFn& f, double t, const Vector& y, double h,
                               const ImplicitSolveConfig& cfg = {}, const JacobianFn* jac = nullptr,
                               RunStats* stats = nullptr) {
  return theta_step(f, t, y, h, 0.5, cfg, jac, stats);
}

// Dedicated explicit RK steppers accumulate in the same order as explicit_rk_step.
inline Vector heun_step(const RhsFn& f, double t, const Vector& y, double h) {
  const Vector k1 = f(t, y);
  const Vector k2 = f(t + h, detail::axpy(y, h, k1));
  Vector acc(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) acc[i] = 0.5 * k1[i] + 0.5 * k2[i];
  return detail::checked(detail::axpy(y, h, acc), "Heun");
}

inline Vector midpoint_rk2_step(const RhsFn& f, double t, const Vector& y, double h) {
  const Vector k1 = f(t, y);
  Vector a(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) a[i] = 0.5 * k1[i];
  const Vector k2 = f(t + 0.5 * h, detail::axpy(y, h, a));
  return detail::checked(detail::axpy(y, h, k2), "midpoint RK2");
}

inline Vector rk3_step(const RhsFn& f, double t, const Vector& y, double h) {
  const std::size_t n = y.size();
  Vector acc(n);
  const Vector k1 = f(t, y);
  for (std::size_t i = 0; i < n; ++i) acc[i] = 0.5 * k1[i];
  const Vector k2 = f(t + 0.5 * h, detail::axpy(y, h, acc));
  for (std::size_t i = 0; i < n; ++i) acc[i] = -1.0 * k1[i] + 2.0 * k2[i];
  const Vector k3 = f(t + h, detail::axpy(y, h, acc));
  for (std::size_t i = 0; i < n; ++i) acc[i] = (1.0 / 6.0) * k1[i] + (2.0 / 3.0) * k2[i] + (1.0 / 6.0) * k3[i];
  return detail::checked(detail::axpy(y, h, acc), "RK3");
}

inline Vector rk4_step(const RhsFn& f, double t, const Vector& y, double h) {
  const std::size_t n = y.size();
  Vector acc(n);
  const Vector k1 = f(t, y);
  for (std::size_t i = 0; i < n; ++i) acc[i] = 0.5 * k1[i];
  const Vector k2 = f(t + 0.5 * h, detail::axpy(y, h, acc));
  for (std::size_t i = 0; i < n; ++i) acc[i] = 0.5 * k2[i];
  const Vector k3 = f(t + 0.5 * h, detail::axpy(y, h, acc));
  const Vector k4 = f(t + h, detail::axpy(y, h, k3));
  for (std::size_t i = 0; i < n; ++i)
    acc[i] = (1.0 / 6.0) * k1[i] + (1.0 / 3.0) * k2[i] + (1.0 / 3.0) * k3[i] + (1.0 / 6.0) * k4[i];
  return detail::checked(detail::axpy(y, h, acc), "RK4");
}

// Generic explicit executor. Zero coefficients are skipped, which never
// changes the floating-point result.
inline Vector explicit_rk_step(const ButcherTableau& tab, const RhsFn& f, double t, const Vector& y, double h) {
  tab.validate();
  if (tab.kind != TableauKind::explicit_rk) throw TableauInvariantError(tab.name + " is not explicit");
  const std::size_t n = y.size();
  std::vector<Vector> k;
  k.reserve(tab.s);
  auto combine = [&](auto coeff, std::size_t count) {
    Vector acc(n, 0.0);
    bool first = true;
    for (std::size_t j = 0; j < count; ++j) {
      const double w = coeff(j);
      if (w == 0.0) continue;
      for (std::size_t i = 0; i < n; ++i) acc[i] = first ? w * k[j][i] : acc[i] + w * k[j][i];
      first = false;
    }
    return acc;
  };
  for (std::size_t l = 0; l < tab.s; ++l) {
    if (l == 0) {
      k.push_back(f(t + tab.c[0] * h, y));
      continue;
    }
    const Vector acc = combine([&](std::size_t j) { return tab.a(l, j); }, l);
    k.push_back(f(t + tab.c[l] * h, detail::axpy(y, h, acc)));
  }
  const Vector acc = combine([&](std::size_t j) { return tab.b[j]; }, tab.s);
  return detail::checked(detail::axpy(y, h, acc), "explicit RK");
}

// y_{k+1} = y_{k-1} + 2h f(t_k, y_k)
inline Vector leapfrog_step(const RhsFn& f, double t_k, const Vector& y_k, const Vector& y_km1, double h) {
  if (y_k.size() != y_km1.size()) throw InvalidArgumentError("leapfrog history has wrong length");
  const Vector fk = f(t_k, y_k);
  return detail::checked(detail::axpy(y_km1, 2.0 * h, fk), "leapfrog");
}

inline Vector taylor_step(const RhsFn& f, const RhsFn& d2, const RhsFn& d3, int order, double t, const Vector& y,
                          double h) {
  if (order != 2 && order != 3) throw InvalidArgumentError("Taylor order must be 2 or 3");
  if (!d2) throw MissingDerivativeError("Taylor method needs y''");
  if (order == 3 && !d3) throw MissingDerivativeError("third-order Taylor method needs y'''");
  const Vector y1 = f(t, y);
  const Vector y2 = d2(t, y);
  Vector out(y.size());
  const double c2 = h * h / 2.0;
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + h * y1[i] + c2 * y2[i];
  if (order == 3) {
    const Vector y3 = d3(t, y);
    const double c3 = h * h * h / 6.0;
    for (std::size_t i = 0; i < y.size(); ++i) out[i] += c3 * y3[i];
  }
  return detail::checked(std::move(out), "Taylor");
}

// Stagewise solve for explicit or diagonally implicit tableaus.
inline Vector dirk_step(const ButcherTableau& tab, const RhsFn& f, double t, const Vector& y, double h,
                        const ImplicitSolveConfig& cfg = {}, const JacobianFn* jac = nullptr,
                        RunStats* stats = nullptr) {
  tab.validate();
  if (tab.kind == TableauKind::fully_implicit) throw TableauInvariantError(tab.name + " is fully implicit");
  const std::size_t n = y.size();
  std::vector<Vector> k;
  k.reserve(tab.s);
  for (std::size_t l = 0; l < tab.s; ++l) {
    Vector base = y;
    for (std::size_t j = 0; j < l; ++j) {
      const double w = tab.a(l, j);
      if (w == 0.0) continue;
      for (std::size_t i = 0; i < n; ++i) base[i] += h * w * k[j][i];
    }
    const double tl = t + tab.c[l] * h;
    const double diag = tab.a(l, l);
    if (diag == 0.0) {
      k.push_back(f(tl, base));
      continue;
    }
    Vector guess = base;
    if (cfg.predictor == ImplicitSolveConfig::Predictor::explicit_euler) {
      const Vector fb = f(tl, base);
      guess = detail::axpy(base, diag * h, fb);
    }
    const Vector stage = detail::solve_one_leg(f, tl, base, diag * h, std::move(guess), cfg, jac, stats);
    k.push_back(f(tl, stage));
  }
  Vector out = y;
  for (std::size_t j = 0; j < tab.s; ++j)
    for (std::size_t i = 0; i < n; ++i) out[i] += h * tab.b[j] * k[j][i];
  return detail::checked(std::move(out), "DIRK");
}

// Two-stage Gauss: coupled stage values solved together (2n unknowns).
inline Vector gauss2_step(const RhsFn& f, double t, const Vector& y, double h, const ImplicitSolveConfig& cfg = {},
                          const JacobianFn* jac = nullptr, RunStats* stats = nullptr) {
  cfg.validate();
  static const ButcherTableau tab = tableaus::gauss2();
  const bool newton = detail::use_newton(cfg, jac);
  const std::size_t n = y.size();
  std::vector<Vector> z(2, y);
  if (cfg.predictor == ImplicitSolveConfig::Predictor::explicit_euler) {
    const Vector f0 = f(t, y);
    for (std::size_t l = 0; l < 2; ++l) z[l] = detail::axpy(y, tab.c[l] * h, f0);
  }
  std::vector<Vector> fz(2);
  for (int it = 0;; ++it) {
    for (std::size_t l = 0; l < 2; ++l) fz[l] = f(t + tab.c[l] * h, z[l]);
    Vector r(2 * n);
    double zmax = 0.0;
    for (std::size_t l = 0; l < 2; ++l) {
      for (std::size_t i = 0; i < n; ++i) {
        r[l * n + i] = z[l][i] - (y[i] + h * (tab.a(l, 0) * fz[0][i] + tab.a(l, 1) * fz[1][i]));
        zmax = std::max(zmax, std::abs(z[l][i]));
      }
    }
    if (!all_finite(r)) throw ImplicitSolveError("Gauss-2 iteration produced a non-finite residual");
    if (norm_inf(r) <= cfg.tol * (1.0 + zmax)) break;
    if (it == cfg.max_iters) {
      if (!cfg.require_convergence) break;
      throw ImplicitSolveError("Gauss-2 did not converge after " + std::to_string(cfg.max_iters) + " iterations");
    }
    if (newton) {
      DenseMatrix m = DenseMatrix::identity(2 * n);
      for (std::size_t j = 0; j < 2; ++j) {
        const DenseMatrix jz = (*jac)(t + tab.c[j] * h, z[j]);
        for (std::size_t l = 0; l < 2; ++l)
          for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) m(l * n + p, j * n + q) -= h * tab.a(l, j) * jz(p, q);
      }
      for (auto& x : r) x = -x;
      const Vector delta = lu_solve(m, r);
      for (std::size_t l = 0; l < 2; ++l)
        for (std::size_t i = 0; i < n; ++i) z[l][i] += delta[l * n + i];
    } else {
      for (std::size_t l = 0; l < 2; ++l)
        for (std::size_t i = 0; i < n; ++i)
          z[l][i] = y[i] + h * (tab.a(l, 0) * fz[0][i] + tab.a(l, 1) * fz[1][i]);
    }
    if (stats) ++stats->implicit_iters;
  }
  Vector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i] + h * (tab.b[0] * fz[0][i] + tab.b[1] * fz[1][i]);
  return detail::checked(std::move(out), "Gauss-2");
}

// ---------------------------------------------------------------------------
// Type-erased steppers for march

namespace detail {

inline const JacobianFn* jacobian_of(const IvpProblem& p) { return p.jacobian ? &p.jacobian : nullptr; }

inline Stepper wrap_explicit(std::string name, int order, Vector (*fn)(const RhsFn&, double, const Vector&, double)) {
  return {std::move(name), order, [fn](StepContext& ctx, double t, const Vector& y, double h) {
            return fn(ctx.f, t, y, h);
          }};
}

}  // namespace detail

inline Stepper theta_stepper(double theta, const ImplicitSolveConfig& cfg = {}) {
  const int order = theta == 0.5 ? 2 : 1;
  return {"theta:" + std::to_string(theta), order, [theta, cfg](StepContext& ctx, double t, const Vector& y, double h) {
            return theta_step(ctx.f, t, y, h, theta, cfg, detail::jacobian_of(ctx.problem), &ctx.stats);
          }};
}

inline Stepper tableau_stepper(const ButcherTableau& tab, const ImplicitSolveConfig& cfg = {}) {
  if (tab.kind == TableauKind::explicit_rk) {
    return {tab.name, tab.declared_order, [tab](StepContext& ctx, double t, const Vector& y, double h) {
              return explicit_rk_step(tab, ctx.f, t, y, h);
            }};
  }
  if (tab.kind == TableauKind::diagonally_implicit) {
    return {tab.name, tab.declared_order, [tab, cfg](StepContext& ctx, double t, const Vector& y, double h) {
              return dirk_step(tab, ctx.f, t, y, h, cfg, detail::jacobian_of(ctx.problem), &ctx.stats);
            }};
  }
  throw InvalidArgumentError(tab.name + ": only the built-in Gauss-2 solver handles fully implicit tableaus");
}

// Leapfrog needs y_{k-1}; the first step, and any step whose size differs from
// the previous one, falls back to Heun.
inline Stepper leapfrog_stepper() {
  return {"leapfrog", 2, [](StepContext& ctx, double t, const Vector& y, double h) {
            if (ctx.y_prev == nullptr || std::abs(ctx.h_prev - h) > 1e-12 * h) return heun_step(ctx.f, t, y, h);
            return leapfrog_step(ctx.f, t, y, *ctx.y_prev, h);
          }};
}

inline Stepper taylor_stepper(int order) {
  if (order != 2 && order != 3) throw InvalidArgumentError("Taylor order must be 2 or 3");
  return {"taylor" + std::to_string(order), order, [order](StepContext& ctx, double t, const Vector& y, double h) {
            return taylor_step(ctx.f, ctx.problem.taylor_d2, ctx.problem.taylor_d3, order, t, y, h);
          }};
}

inline const std::vector<std::string>& one_step_method_names() {
  static const std::vector<std::string> names = {"euler", "ieuler", "trap",    "heun",     "rk2mid", "rk3",
                                                 "rk4",   "taylor2", "taylor3", "leapfrog", "gauss2", "trbdf2"};
  return names;
}

// Builds a named one-step stepper. "theta:<v>" selects the theta method.
inline Stepper make_stepper(const std::string& name, const ImplicitSolveConfig& cfg = {}) {
  if (name == "euler") return detail::wrap_explicit(name, 1, explicit_euler_step);
  if (name == "heun") return detail::wrap_explicit(name, 2, heun_step);
  if (name == "rk2mid") return detail::wrap_explicit(name, 2, midpoint_rk2_step);
  if (name == "rk3") return detail::wrap_explicit(name, 3, rk3_step);
  if (name == "rk4") return detail::wrap_explicit(name, 4, rk4_step);
  if (name == "ieuler") {
    Stepper s = theta_stepper(1.0, cfg);
    s.name = name;
    return s;
  }
  if (name == "trap") {
    Stepper s = theta_stepper(0.5, cfg);
    s.name = name;
    return s;
  }
  if (name.rfind("theta:", 0) == 0) {
    std::size_t used = 0;
    double theta = 0.0;
    try {
      theta = std::stod(name.substr(6), &used);
    } catch (const std::exception&) {
      throw InvalidArgumentError("bad theta value in '" + name + "'");
    }
    if (used != name.size() - 6) throw InvalidArgumentError("bad theta value in '" + name + "'");
    Stepper s = theta_stepper(theta, cfg);
    if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidArgumentError("theta must lie in [0,1]");
    s.name = name;
    return s;
  }
  if (name == "taylor2") return taylor_stepper(2);
  if (name == "taylor3") return taylor_stepper(3);
  if (name == "leapfrog") return leapfrog_stepper();
  if (name == "trbdf2") return tableau_stepper(tableaus::trbdf2(), cfg);
  if (name == "gauss2") {
    return {name, 4, [cfg](StepContext& ctx, double t, const Vector& y, double h) {
              return gauss2_step(ctx.f, t, y, h, cfg, detail::jacobian_of(ctx.problem), &ctx.stats);
            }};
  }
  throw InvalidArgumentError("unknown one-step method '" + name + "'");
}

// Stability function of a named one-step method, where one exists.
inline std::function<Complex(Complex)> stability_function(const std::string& name) {
  auto from = [](ButcherTableau tab) { return [tab](Complex z) { return rk_stability_value(tab, z); }; };
  if (name == "euler") return from(tableaus::euler());
  if (name == "ieuler") return from(tableaus::implicit_euler());
  if (name == "trap") return from(tableaus::trapezoidal());
  if (name == "heun") return from(tableaus::heun());
  if (name == "rk2mid") return from(tableaus::midpoint());
  if (name == "rk3") return from(tableaus::rk3());
  if (name == "rk4") return from(tableaus::rk4());
  if (name == "taylor2") return from(tableaus::heun());
  if (name == "taylor3") return from(tableaus::rk3());
  if (name == "gauss2") return from(tableaus::gauss2());
  if (name == "trbdf2") return from(tableaus::trbdf2());
  if (name.rfind("theta:", 0) == 0) {
    const double theta = std::stod(name.substr(6));
    if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidArgumentError("theta must lie in [0,1]");
    return [theta](Complex z) { return (1.0 + (1.0 - theta) * z) / (1.0 - theta * z); };
  }
  throw InvalidArgumentError("no stability function for '" + name + "'");
}

}  // namespace odekit
