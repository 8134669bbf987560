#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "odekit/errors.hpp"
#include "odekit/linalg.hpp"
#include "odekit/multistep.hpp"

namespace odekit {

using StabilityFn = std::function<Complex(Complex)>;

struct Bounds {
  double re_min = -3.0, re_max = 1.0, im_min = -2.0, im_max = 2.0;
};

struct StabilityRegionRaster {
  Bounds bounds;
  std::size_t nx = 0, ny = 0;
  std::vector<std::uint8_t> member;  // row-major, row iy from im_min upward

  Complex center(std::size_t ix, std::size_t iy) const {
    const double dx = (bounds.re_max - bounds.re_min) / static_cast<double>(nx);
    const double dy = (bounds.im_max - bounds.im_min) / static_cast<double>(ny);
    return {bounds.re_min + (static_cast<double>(ix) + 0.5) * dx, bounds.im_min + (static_cast<double>(iy) + 0.5) * dy};
  }
  bool at(std::size_t ix, std::size_t iy) const { return member[iy * nx + ix] != 0; }

  double member_fraction() const {
    std::size_t c = 0;
    for (auto m : member) c += m;
    return static_cast<double>(c) / static_cast<double>(member.size());
  }
};

namespace detail {

inline void check_raster_args(const Bounds& b, std::size_t nx, std::size_t ny) {
  if (nx < 2 || ny < 2) throw InvalidArgumentError("raster resolution must be at least 2 per axis");
  if (!(b.re_min < b.re_max && b.im_min < b.im_max)) throw InvalidArgumentError("raster bounds are not ordered");
}

template <typename Pred>
StabilityRegionRaster raster_with(const Bounds& b, std::size_t nx, std::size_t ny, Pred pred) {
  check_raster_args(b, nx, ny);
  StabilityRegionRaster r{b, nx, ny, std::vector<std::uint8_t>(nx * ny, 0)};
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix) {
      bool in = false;
      try {
        in = pred(r.center(ix, iy));
      } catch (const Error&) {
        in = false;  // poles and degenerate points are outside
      }
      r.member[iy * nx + ix] = in ? 1 : 0;
    }
  return r;
}

}  // namespace detail

inline bool one_step_member(const StabilityFn& R, Complex z, double band = 1e-9) {
  Complex v;
  try {
    v = R(z);
  } catch (const Error&) {
    return false;  // pole of R
  }
  return std::isfinite(v.real()) && std::isfinite(v.imag()) && std::abs(v) <= 1.0 + band;
}

inline StabilityRegionRaster raster_one_step(const StabilityFn& R, const Bounds& b, std::size_t nx, std::size_t ny) {
  return detail::raster_with(b, nx, ny, [&](Complex z) { return one_step_member(R, z, 0.0); });
}

// Root condition on the characteristic polynomial at z.
inline bool is_abs_stable(const MultistepMethod& method, Complex z, const PolyRootOptions& opt = {}) {
  const ComplexVector c = method.characteristic(z);
  if (!(std::abs(c[0]) > 1e-14)) throw InvalidArgumentError(method.name + ": characteristic polynomial degenerates at z");
  const ComplexRootSet roots = poly_roots(c, opt);
  for (std::size_t k = 0; k < roots.roots.size(); ++k) {
    const double r = std::abs(roots.roots[k]);
    if (roots.multiplicities[k] == 1 ? r > 1.0 + 1e-9 : r >= 1.0 - 1e-9) return false;
  }
  return true;
}

inline StabilityRegionRaster raster_multistep(const MultistepMethod& method, const Bounds& b, std::size_t nx,
                                              std::size_t ny, const PolyRootOptions& opt = {}) {
  return detail::raster_with(b, nx, ny, [&](Complex z) { return is_abs_stable(method, z, opt); });
}

struct LocusPoint {
  double theta = 0.0;
  std::optional<Complex> z;  // empty where sigma vanishes
};

// z(theta) = rho(e^{i theta}) / sigma(e^{i theta}), theta = 2 pi j / samples.
inline std::vector<LocusPoint> boundary_locus(const MultistepMethod& method, int samples) {
  if (samples < 8) throw InvalidArgumentError("boundary locus needs at least 8 samples");
  const double two_pi = 2.0 * std::acos(-1.0);
  std::vector<LocusPoint> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int j = 0; j < samples; ++j) {
    const double theta = two_pi * static_cast<double>(j) / static_cast<double>(samples);
    const Complex r = std::polar(1.0, theta);
    const Complex s = method.sigma(r);
    LocusPoint p{theta, std::nullopt};
    if (std::abs(s) > 1e-14) p.z = method.rho(r) / s;
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// A / A(alpha) / L classification by sampling

struct StabilityClassification {
  bool a_stable = false;
  double alpha_estimate = 0.0;  // radians
  std::optional<bool> l_stable;  // one-step methods only
  bool sampled = true;           // verdicts come from finite probe sets
};

struct ProbeOptions {
  std::size_t points = 2000;
  std::size_t axis_points = 200;
  double log_r_min = -2.0;
  double log_r_max = 6.0;
  int rays = 64;
  int radii = 33;
  std::uint64_t seed = 20240917;
};

// Quasi-random left-half-plane probes: Halton pairs with a seeded rotation,
// log-radial in |z|, plus points on the imaginary axis.
inline ComplexVector left_half_plane_probes(const ProbeOptions& opt = {}) {
  auto halton = [](std::size_t i, unsigned base) {
    double f = 1.0, r = 0.0;
    for (std::size_t k = i; k > 0; k /= base) {
      f /= base;
      r += f * static_cast<double>(k % base);
    }
    return r;
  };
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double shift1 = u(rng), shift2 = u(rng);
  const double pi = std::acos(-1.0);
  ComplexVector out;
  out.reserve(opt.points + opt.axis_points);
  for (std::size_t i = 1; i <= opt.points; ++i) {
    const double a = std::fmod(halton(i, 2) + shift1, 1.0);
    const double b = std::fmod(halton(i, 3) + shift2, 1.0);
    const double radius = std::pow(10.0, opt.log_r_min + (opt.log_r_max - opt.log_r_min) * a);
    const double angle = 0.5 * pi + pi * b;
    Complex z = std::polar(radius, angle);
    out.emplace_back(std::min(0.0, z.real()), z.imag());
  }
  for (std::size_t i = 0; i < opt.axis_points; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(opt.axis_points - 1);
    const double y = std::pow(10.0, opt.log_r_min + (opt.log_r_max - opt.log_r_min) * frac);
    out.emplace_back(0.0, i % 2 == 0 ? y : -y);
  }
  return out;
}

namespace detail {

template <typename Member>
double estimate_alpha(Member member, const ProbeOptions& opt) {
  const double pi = std::acos(-1.0);
  auto wedge_ok = [&](double alpha) {
    for (int j = 0; j < opt.rays; ++j) {
      const double phi = pi - alpha + 2.0 * alpha * static_cast<double>(j) / static_cast<double>(opt.rays - 1);
      for (int k = 0; k < opt.radii; ++k) {
        const double rr = std::pow(
            10.0, opt.log_r_min + (opt.log_r_max - opt.log_r_min) * static_cast<double>(k) / (opt.radii - 1));
        const Complex z = std::polar(rr, phi);
        if (!member(Complex(std::min(z.real(), 0.0), z.imag()))) return false;
      }
    }
    return true;
  };
  if (wedge_ok(0.5 * pi)) return 0.5 * pi;
  if (!wedge_ok(0.0)) return 0.0;
  double lo = 0.0, hi = 0.5 * pi;
  const double precision = 0.5 * pi / 180.0;
  while (hi - lo > precision) {
    const double mid = 0.5 * (lo + hi);
    (wedge_ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace detail

inline StabilityClassification classify_stability(const StabilityFn& R, const ProbeOptions& opt = {}) {
  auto member = [&](Complex z) {
    try {
      return one_step_member(R, z);
    } catch (const Error&) {
      return false;
    }
  };
  StabilityClassification out;
  out.a_stable = true;
  for (const auto& z : left_half_plane_probes(opt))
    if (!member(z)) {
      out.a_stable = false;
      break;
    }
  out.alpha_estimate = detail::estimate_alpha(member, opt);
  // |R(-10^k)| must shrink toward zero for k = 2..8.
  bool decays = out.a_stable;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 2; k <= 8 && decays; ++k) {
    const double v = std::abs(R(Complex(-std::pow(10.0, k), 0.0)));
    if (!(v <= prev)) decays = false;
    prev = v;
  }
  out.l_stable = decays && prev <= 1e-3;
  return out;
}

inline StabilityClassification classify_stability(const MultistepMethod& method, const ProbeOptions& opt = {}) {
  PolyRootOptions ropt;
  ropt.seed = opt.seed;
  auto member = [&](Complex z) {
    try {
      return is_abs_stable(method, z, ropt);
    } catch (const Error&) {
      return false;
    }
  };
  StabilityClassification out;
  out.a_stable = true;
  for (const auto& z : left_half_plane_probes(opt))
    if (!member(z)) {
      out.a_stable = false;
      break;
    }
  out.alpha_estimate = detail::estimate_alpha(member, opt);
  return out;
}

// ---------------------------------------------------------------------------
// Stiffness

struct StiffnessRatio {
  double ratio = 0.0;
  bool infinite = false;
};

inline StiffnessRatio stiffness_ratio(const ComplexVector& eigs) {
  if (eigs.empty()) throw InvalidArgumentError("stiffness ratio needs at least one eigenvalue");
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& l : eigs) {
    lo = std::min(lo, std::abs(l.real()));
    hi = std::max(hi, std::abs(l.real()));
  }
  if (lo < 1e-14) return {std::numeric_limits<double>::infinity(), true};
  return {hi / lo, false};
}

// ---------------------------------------------------------------------------
// Linear homogeneous difference equations: sum_j c_j y_{k+j} = 0

struct DifferenceEquation {
  Vector c;        // c_p .. c_0, highest first
  Vector initial;  // y_0 .. y_{p-1}

  std::size_t order() const { return c.empty() ? 0 : c.size() - 1; }

  void validate() const {
    if (c.size() < 2) throw InvalidArgumentError("difference equation needs order at least 1");
    if (c.front() == 0.0) throw InvalidArgumentError("leading coefficient must be nonzero");
    if (initial.size() != order()) throw InvalidArgumentError("need exactly p initial values");
  }
};

struct DifferenceSolution {
  ComplexRootSet roots;
  std::vector<ComplexVector> beta;  // beta[j][m] multiplies k^m r_j^k
  double condition_estimate = 0.0;
  bool ill_conditioned = false;
};

namespace detail {

// Basis function k^m r^k; a zero root contributes Kronecker deltas at k = m.
inline Complex diff_basis(Complex r, int m, long long k) {
  if (r == Complex{}) return k == m ? Complex(1.0, 0.0) : Complex{};
  return std::pow(static_cast<double>(k), m) * std::pow(r, static_cast<double>(k));
}

}  // namespace detail

inline DifferenceSolution solve_difference_equation(const DifferenceEquation& eq, const PolyRootOptions& opt = {}) {
  eq.validate();
  DifferenceSolution sol;
  sol.roots = poly_roots(eq.c, opt);
  const std::size_t p = eq.order();

  // Confluent Vandermonde system, one column group per root cluster.
  ComplexMatrix v(p, p);
  std::size_t col = 0;
  for (std::size_t j = 0; j < sol.roots.roots.size(); ++j)
    for (int m = 0; m < sol.roots.multiplicities[j]; ++m, ++col)
      for (std::size_t k = 0; k < p; ++k) v(k, col) = detail::diff_basis(sol.roots.roots[j], m, static_cast<long long>(k));

  const ComplexVector rhs(eq.initial.begin(), eq.initial.end());
  const ComplexVector x = lu_solve(v, rhs);

  // Condition estimate ||V||_inf ||V^{-1}||_inf from explicit inverse columns.
  double inv_norm = 0.0;
  std::vector<double> row_sums(p, 0.0);
  for (std::size_t c = 0; c < p; ++c) {
    ComplexVector e(p, Complex{});
    e[c] = 1.0;
    const ComplexVector ic = lu_solve(v, e);
    for (std::size_t i = 0; i < p; ++i) row_sums[i] += std::abs(ic[i]);
  }
  for (double s : row_sums) inv_norm = std::max(inv_norm, s);
  sol.condition_estimate = v.norm_inf() * inv_norm;
  sol.ill_conditioned = sol.condition_estimate > 1e10;

  col = 0;
  for (std::size_t j = 0; j < sol.roots.roots.size(); ++j) {
    ComplexVector b;
    for (int m = 0; m < sol.roots.multiplicities[j]; ++m) b.push_back(x[col++]);
    sol.beta.push_back(std::move(b));
  }
  return sol;
}

inline Complex evaluate_difference_solution_complex(const DifferenceSolution& sol, long long k) {
  if (k < 0) throw InvalidArgumentError("k must be nonnegative");
  Complex acc{};
  for (std::size_t j = 0; j < sol.roots.roots.size(); ++j)
    for (std::size_t m = 0; m < sol.beta[j].size(); ++m)
      acc += sol.beta[j][m] * detail::diff_basis(sol.roots.roots[j], static_cast<int>(m), k);
  return acc;
}

inline double evaluate_difference_solution(const DifferenceSolution& sol, long long k) {
  return evaluate_difference_solution_complex(sol, k).real();
}

// y_0 .. y_{kmax} by running the recurrence forward.
inline Vector difference_recurrence(const DifferenceEquation& eq, std::size_t kmax) {
  eq.validate();
  const std::size_t p = eq.order();
  Vector y = eq.initial;
  while (y.size() <= kmax) {
    const std::size_t k = y.size() - p;
    double s = 0.0;
    for (std::size_t j = 0; j < p; ++j) s += eq.c[p - j] * y[k + j];  // c_j y_{k+j}
    y.push_back(-s / eq.c[0]);
  }
  y.resize(kmax + 1);
  return y;
}

}  // namespace odekit
