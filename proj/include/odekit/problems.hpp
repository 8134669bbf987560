#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "odekit/core.hpp"
#include "odekit/errors.hpp"
#include "odekit/linalg.hpp"

namespace odekit {

using ProblemParams = std::map<std::string, std::string>;

struct ParamDoc {
  std::string name;
  std::string default_value;
  std::string doc;
};

struct CatalogEntry {
  std::string key;
  std::vector<std::string> tags;
  std::string notes;
  std::vector<ParamDoc> params;
  std::function<IvpProblem(const ProblemParams&)> factory;

  bool has_tag(const std::string& tag) const { return std::find(tags.begin(), tags.end(), tag) != tags.end(); }
};

namespace detail {

// Typed access to problem parameters with unknown-key checking.
class ParamReader {
 public:
  ParamReader(std::string key, const ProblemParams& params, const std::vector<ParamDoc>& docs)
      : key_(std::move(key)), params_(params) {
    std::set<std::string> allowed;
    for (const auto& d : docs) allowed.insert(d.name);
    allowed.insert("t_end");
    for (const auto& [k, v] : params_)
      if (!allowed.count(k)) throw BadParamError(key_ + " has no parameter '" + k + "'");
  }

  double number(const std::string& name, double fallback) const {
    auto it = params_.find(name);
    if (it == params_.end()) return fallback;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(it->second, &used);
    } catch (const std::exception&) {
      throw BadParamError(key_ + ": parameter " + name + " is not a number");
    }
    if (used != it->second.size() || !std::isfinite(v)) throw BadParamError(key_ + ": bad value for " + name);
    return v;
  }

  std::string text(const std::string& name, const std::string& fallback) const {
    auto it = params_.find(name);
    return it == params_.end() ? fallback : it->second;
  }

 private:
  std::string key_;
  const ProblemParams& params_;
};

inline const double kPi = std::acos(-1.0);

inline IvpProblem scalar(std::string name, std::function<double(double, double)> f, double t0, double t_end, double y0) {
  IvpProblem p;
  p.name = std::move(name);
  p.dim = 1;
  p.rhs = [f](double t, const Vector& y) { return Vector{f(t, y[0])}; };
  p.t0 = t0;
  p.t_end = t_end;
  p.y0 = {y0};
  return p;
}

inline RhsFn scalar_fn(std::function<double(double, double)> g) {
  return [g](double t, const Vector& y) { return Vector{g(t, y[0])}; };
}

inline JacobianFn scalar_jac(std::function<double(double, double)> g) {
  return [g](double t, const Vector& y) {
    DenseMatrix m(1, 1);
    m(0, 0) = g(t, y[0]);
    return m;
  };
}

inline ExactFn scalar_exact(std::function<double(double)> g) {
  return [g](double t) { return Vector{g(t)}; };
}

// y' = A y (+ forcing), with A constant.
inline IvpProblem linear(std::string name, DenseMatrix a, Vector y0, double t_end,
                         std::function<Vector(double)> forcing = nullptr) {
  IvpProblem p;
  p.name = std::move(name);
  p.dim = y0.size();
  p.rhs = [a, forcing](double t, const Vector& y) {
    Vector out = a * y;
    if (forcing) {
      const Vector g = forcing(t);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += g[i];
    }
    return out;
  };
  p.jacobian = [a](double, const Vector&) { return a; };
  p.t0 = 0.0;
  p.t_end = t_end;
  p.y0 = std::move(y0);
  p.lipschitz_hint = a.norm_inf();
  return p;
}

inline DenseMatrix mol_matrix(std::size_t m) {
  const double dx = 1.0 / static_cast<double>(m + 1);
  const double s = 1.0 / (dx * dx);
  DenseMatrix a(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    a(i, i) = -2.0 * s;
    if (i > 0) a(i, i - 1) = s;
    if (i + 1 < m) a(i, i + 1) = s;
  }
  return a;
}

inline std::vector<CatalogEntry> build_catalog();

}  // namespace detail

// Grid values of the PDE solution e^{-pi^2 t} sin(pi x_k) for the MOL problem.
inline Vector mol_pde_solution(std::size_t m, double t) {
  const double dx = 1.0 / static_cast<double>(m + 1);
  Vector out(m);
  for (std::size_t k = 0; k < m; ++k)
    out[k] = std::exp(-detail::kPi * detail::kPi * t) * std::sin(detail::kPi * static_cast<double>(k + 1) * dx);
  return out;
}

inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    auto c = detail::build_catalog();
    std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
    return c;
  }();
  return entries;
}

inline const CatalogEntry& catalog_entry(const std::string& key) {
  for (const auto& e : catalog())
    if (e.key == key) return e;
  throw UnknownProblemError("no problem named '" + key + "'");
}

inline IvpProblem get_problem(const std::string& key, const ProblemParams& params = {}) {
  const CatalogEntry& e = catalog_entry(key);
  IvpProblem p = e.factory(params);
  p.validate();
  return p;
}

inline std::vector<std::string> list_problems() {
  std::vector<std::string> keys;
  for (const auto& e : catalog()) keys.push_back(e.key);
  return keys;
}

namespace detail {

inline std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> c;
  const std::vector<ParamDoc> no_params;

  auto t_end_of = [](const ParamReader& r, double fallback) {
    const double t = r.number("t_end", fallback);
    if (!(t > 0.0)) throw BadParamError("t_end must be positive");
    return t;
  };

  c.push_back({"decay", {"nonstiff", "scalar"}, "y' = -y, y(0) = 1, exact e^{-t}", no_params,
               [=](const ProblemParams& prm) {
                 ParamReader r("decay", prm, {});
                 IvpProblem p = scalar("decay", [](double, double y) { return -y; }, 0.0, t_end_of(r, 5.0), 1.0);
                 p.jacobian = scalar_jac([](double, double) { return -1.0; });
                 p.taylor_d2 = scalar_fn([](double, double y) { return y; });
                 p.taylor_d3 = scalar_fn([](double, double y) { return -y; });
                 p.exact = scalar_exact([](double t) { return std::exp(-t); });
                 p.lipschitz_hint = 1.0;
                 return p;
               }});

  c.push_back({"growth", {"nonstiff", "scalar"}, "y' = y, y(0) = 1, exact e^{t}", no_params,
               [=](const ProblemParams& prm) {
                 ParamReader r("growth", prm, {});
                 IvpProblem p = scalar("growth", [](double, double y) { return y; }, 0.0, t_end_of(r, 5.0), 1.0);
                 p.jacobian = scalar_jac([](double, double) { return 1.0; });
                 p.taylor_d2 = scalar_fn([](double, double y) { return y; });
                 p.taylor_d3 = scalar_fn([](double, double y) { return y; });
                 p.exact = scalar_exact([](double t) { return std::exp(t); });
                 p.lipschitz_hint = 1.0;
                 return p;
               }});

  {
    const std::vector<ParamDoc> docs = {{"lambda", "-2100", "stiffness parameter"},
                                        {"y0", "1", "initial value"}};
    c.push_back({"lambda_cos", {"stiff", "scalar"},
                 "y' = lambda (y - cos t) - sin t, exact e^{lambda t}(y0 - 1) + cos t", docs,
                 [=](const ProblemParams& prm) {
                   ParamReader r("lambda_cos", prm, docs);
                   const double lam = r.number("lambda", -2100.0);
                   const double y0 = r.number("y0", 1.0);
                   IvpProblem p = scalar(
                       "lambda_cos", [lam](double t, double y) { return lam * (y - std::cos(t)) - std::sin(t); }, 0.0,
                       t_end_of(r, 2.0), y0);
                   p.jacobian = scalar_jac([lam](double, double) { return lam; });
                   p.taylor_d2 = scalar_fn([lam](double t, double y) {
                     const double f = lam * (y - std::cos(t)) - std::sin(t);
                     return lam * std::sin(t) - std::cos(t) + lam * f;
                   });
                   p.exact = scalar_exact([lam, y0](double t) { return std::exp(lam * t) * (y0 - 1.0) + std::cos(t); });
                   p.lipschitz_hint = std::abs(lam);
                   return p;
                 }});
  }

  {
    const std::vector<ParamDoc> docs = {{"k1", "2", "X -> Y rate"}, {"k2", "1", "Y -> X rate"},
                                        {"y1_0", "5", "initial y1"}, {"y2_0", "2", "initial y2"}};
    c.push_back({"kinetics2", {"nonstiff", "system"}, "reversible reaction, y' = [[-k1,k2],[k1,-k2]] y", docs,
                 [=](const ProblemParams& prm) {
                   ParamReader r("kinetics2", prm, docs);
                   const double k1 = r.number("k1", 2.0), k2 = r.number("k2", 1.0);
                   if (k1 < 0.0 || k2 < 0.0) throw BadParamError("rates must be nonnegative");
                   const DenseMatrix a{{-k1, k2}, {k1, -k2}};
                   const Vector y0{r.number("y1_0", 5.0), r.number("y2_0", 2.0)};
                   IvpProblem p = linear("kinetics2", a, y0, t_end_of(r, 3.0));
                   if (k1 + k2 > 0.0) p.exact = [a, y0](double t) { return linear_exact_solution(a, y0, t); };
                   return p;
                 }});
  }

  {
    const std::vector<ParamDoc> docs = {{"k1", "2", "X -> Y rate"}, {"k2", "1", "Y -> Z rate"}};
    c.push_back({"kinetics3", {"nonstiff", "system"}, "decay chain X -> Y -> Z (lower triangular)", docs,
                 [=](const ProblemParams& prm) {
                   ParamReader r("kinetics3", prm, docs);
                   const double k1 = r.number("k1", 2.0), k2 = r.number("k2", 1.0);
                   if (k1 < 0.0 || k2 < 0.0) throw BadParamError("rates must be nonnegative");
                   const DenseMatrix a{{-k1, 0.0, 0.0}, {k1, -k2, 0.0}, {0.0, k2, 0.0}};
                   const Vector y0{1.0, 3.0, 2.0};
                   IvpProblem p = linear("kinetics3", a, y0, t_end_of(r, 5.0));
                   // Equal rates make the matrix defective; no closed form then.
                   if (k1 != k2 && k1 != 0.0 && k2 != 0.0)
                     p.exact = [a, y0](double t) { return linear_exact_solution(a, y0, t); };
                   return p;
                 }});
  }

  {
    const std::vector<ParamDoc> docs = {{"w", "10", "dog speed"},
                                        {"path", "line", "jogger path: line | back | circle"},
                                        {"x0", "60", "dog start x"},
                                        {"y0", "70", "dog start y"}};
    c.push_back({"dog_jogger", {"nonstiff", "system", "pursuit"}, "dog chasing a jogger along a path", docs,
                 [=](const ProblemParams& prm) {
                   ParamReader r("dog_jogger", prm, docs);
                   const double w = r.number("w", 10.0);
                   if (!(w > 0.0)) throw BadParamError("dog speed must be positive");
                   const std::string path = r.text("path", "line");
                   std::function<std::pair<double, double>(double)> jogger;
                   double t_default = 12.0;
                   if (path == "line") {
                     jogger = [](double t) { return std::pair{8.0 * t, 0.0}; };
                   } else if (path == "back") {
                     // Turns around at t = 7 and runs back along the same line.
                     jogger = [](double t) { return t < 7.0 ? std::pair{8.0 * t, 0.0} : std::pair{8.0 * (14.0 - t), 0.0}; };
                   } else if (path == "circle") {
                     jogger = [](double t) { return std::pair{30.0 + 20.0 * std::cos(t), 20.0 + 15.0 * std::sin(t)}; };
                     t_default = 4.0 * kPi;
                   } else {
                     throw BadParamError("unknown jogger path '" + path + "'");
                   }
                   IvpProblem p;
                   p.name = "dog_jogger";
                   p.dim = 2;
                   p.rhs = [jogger, w](double t, const Vector& y) {
                     const auto [xi, eta] = jogger(t);
                     const double dx = xi - y[0], dy = eta - y[1];
                     const double dist = std::hypot(dx, dy);
                     if (dist < 1e-12) return Vector{0.0, 0.0};
                     return Vector{w * dx / dist, w * dy / dist};
                   };
                   p.t0 = 0.0;
                   p.t_end = t_end_of(r, t_default);
                   p.y0 = {r.number("x0", 60.0), r.number("y0", 70.0)};
                   return p;
                 }});
  }

  {
    const std::vector<ParamDoc> docs = {{"g", "9.81", "gravity"}, {"l", "1", "bar length"},
                                        {"theta0", "0.5", "initial angle"}, {"v0", "0", "initial angular velocity"}};
    c.push_back({"pendulum", {"nonstiff", "system"}, "theta'' = -(g/l) sin theta as a first-order system", docs,
                 [=](const ProblemParams& prm) {
                   ParamReader r("pendulum", prm, docs);
                   const double g = r.number("g", 9.81), l = r.number("l", 1.0);
                   if (!(l > 0.0)) throw BadParamError("bar length must be positive");
                   const double k = g / l;
                   IvpProblem p;
                   p.name = "pendulum";
                   p.dim = 2;
                   p.rhs = [k](double, const Vector& y) { return Vector{y[1], -k * std::sin(y[0])}; };
                   p.jacobian = [k](double, const Vector& y) {
                     return DenseMatrix{{0.0, 1.0}, {-k * std::cos(y[0]), 0.0}};
                   };
                   p.t0 = 0.0;
                   p.t_end = t_end_of(r, 10.0);
                   p.y0 = {r.number("theta0", 0.5), r.number("v0", 0.0)};
                   p.lipschitz_hint = std::max(1.0, std::abs(k));
                   return p;
                 }});
  }

  c.push_back({"sqrt_nonunique", {"nonsmooth", "scalar"},
               "y' = 2 sqrt(y), y(0) = 0; both y = 0 and y = t^2 solve it, so no exact solution is offered",
               no_params, [=](const ProblemParams& prm) {
                 ParamReader r("sqrt_nonunique", prm, {});
                 return scalar(
                     "sqrt_nonunique", [](double, double y) { return 2.0 * std::sqrt(std::max(y, 0.0)); }, 0.0,
                     t_end_of(r, 2.0), 0.0);
               }});

  c.push_back({"blowup", {"nonstiff", "scalar"}, "y' = 2 t y^2, exact 1/(1 - t^2); exact offered on [0, 0.99]",
               no_params, [=](const ProblemParams& prm) {
                 ParamReader r("blowup", prm, {});
                 const double t_end = t_end_of(r, 0.9);
                 if (t_end > 0.99) throw BadParamError("blowup is only defined up to t = 0.99");
                 IvpProblem p = scalar("blowup", [](double t, double y) { return 2.0 * t * y * y; }, 0.0, t_end, 1.0);
                 p.jacobian = scalar_jac([](double t, double y) { return 4.0 * t * y; });
                 p.exact = scalar_exact([](double t) {
                   if (t > 0.99) throw InvalidArgumentError("blowup exact solution is offered on [0, 0.99] only");
                   return 1.0 / (1.0 - t * t);
                 });
                 return p;
               }});

  c.push_back({"atan", {"nonstiff", "scalar"}, "y' = cos^2 y, exact arctan t", no_params,
               [=](const ProblemParams& prm) {
                 ParamReader r("atan", prm, {});
                 IvpProblem p = scalar(
                     "atan", [](double, double y) { return std::cos(y) * std::cos(y); }, 0.0, t_end_of(r, 10.0), 0.0);
                 p.jacobian = scalar_jac([](double, double y) { return -std::sin(2.0 * y); });
                 p.exact = scalar_exact([](double t) { return std::atan(t); });
                 return p;
               }});

  c.push_back({"texp", {"nonstiff", "scalar"}, "y' = t e^{-t} - y, exact (1 + t^2/2) e^{-t}", no_params,
               [=](const ProblemParams& prm) {
                 ParamReader r("texp", prm, {});
                 IvpProblem p = scalar(
                     "texp", [](double t, double y) { return t * std::exp(-t) - y; }, 0.0, t_end_of(r, 10.0), 1.0);
                 p.jacobian = scalar_jac([](double, double) { return -1.0; });
                 p.exact = scalar_exact([](double t) { return (1.0 + 0.5 * t * t) * std::exp(-t); });
                 p.lipschitz_hint = 1.0;
                 return p;
               }});

  c.push_back({"quartic", {"nonstiff", "scalar"}, "y' = t^3 / y, exact sqrt(t^4/2 + 1)", no_params,
               [=](const ProblemParams& prm) {
                 ParamReader r("quartic", prm, {});
                 IvpProblem p =
                     scalar("quartic", [](double t, double y) { return t * t * t / y; }, 0.0, t_end_of(r, 10.0), 1.0);
                 p.jacobian = scalar_jac([](double t, double y) { return -t * t * t / (y * y); });
                 p.exact = scalar_exact([](double t) { return std::sqrt(0.5 * t * t * t * t + 1.0); });
                 return p;
               }});

  c.push_back({"rational", {"nonstiff", "scalar"}, "y' = 1/(1 + t^2) - 2 y^2, exact t/(1 + t^2)", no_params,
               [=](const ProblemParams& prm) {
                 ParamReader r("rational", prm, {});
                 IvpProblem p = scalar(
                     "rational", [](double t, double y) { return 1.0 / (1.0 + t * t) - 2.0 * y * y; }, 0.0,
                     t_end_of(r, 10.0), 0.0);
                 p.jacobian = scalar_jac([](double, double y) { return -4.0 * y; });
                 p.taylor_d2 = scalar_fn([](double t, double y) {
                   const double q = 1.0 + t * t;
                   const double f = 1.0 / q - 2.0 * y * y;
                   return -2.0 * t / (q * q) - 4.0 * y * f;
                 });
                 p.exact = scalar_exact([](double t) { return t / (1.0 + t * t); });
                 return p;
               }});

  c.push_back({"nonsmooth", {"nonsmooth", "scalar"},
               "y' = -y + t^0.1 (1.1 + t), exact t^1.1; rhs at t = 0 uses the limit value 0", no_params,
               [=](const ProblemParams& prm) {
                 ParamReader r("nonsmooth", prm, {});
                 IvpProblem p = scalar(
                     "nonsmooth",
                     [](double t, double y) { return -y + (t > 0.0 ? std::pow(t, 0.1) * (1.1 + t) : 0.0); }, 0.0,
                     t_end_of(r, 5.0), 0.0);
                 p.jacobian = scalar_jac([](double, double) { return -1.0; });
                 p.exact = scalar_exact([](double t) { return t > 0.0 ? std::pow(t, 1.1) : 0.0; });
                 p.lipschitz_hint = 1.0;
                 return p;
               }});

  {
    const std::vector<ParamDoc> docs = {{"alpha", "1.5", "exponent, must exceed 1"}};
    c.push_back({"alpha_power", {"nonsmooth", "scalar"},
                 "y' = y/t + (alpha - 1) t^{alpha-1}, exact t^alpha; rhs at t = 0 uses the limit value 0", docs,
                 [=](const ProblemParams& prm) {
                   ParamReader r("alpha_power", prm, docs);
                   const double alpha = r.number("alpha", 1.5);
                   if (!(alpha > 1.0)) throw BadParamError("alpha must exceed 1");
                   IvpProblem p = scalar(
                       "alpha_power",
                       [alpha](double t, double y) {
                         return t > 0.0 ? y / t + (alpha - 1.0) * std::pow(t, alpha - 1.0) : 0.0;
                       },
                       0.0, t_end_of(r, 1.0), 0.0);
                   p.exact = scalar_exact([alpha](double t) { return t > 0.0 ? std::pow(t, alpha) : 0.0; });
                   return p;
                 }});
  }

  auto stiff_sys_exact = [](double t) {
    const double e = 2.0 * std::exp(-t);
    return Vector{e + std::sin(t), e + std::cos(t)};
  };
  c.push_back({"stiff_sys_A", {"nonstiff", "system"}, "A = [[-2,1],[1,-2]], eigenvalues -1, -3", no_params,
               [=](const ProblemParams& prm) {
                 ParamReader r("stiff_sys_A", prm, {});
                 IvpProblem p = linear("stiff_sys_A", DenseMatrix{{-2.0, 1.0}, {1.0, -2.0}}, {2.0, 3.0},
                                       t_end_of(r, 10.0), [](double t) {
                                         return Vector{2.0 * std::sin(t), 2.0 * (std::cos(t) - std::sin(t))};
                                       });
                 p.exact = stiff_sys_exact;
                 return p;
               }});
  c.push_back({"stiff_sys_B", {"stiff", "system"}, "A = [[-2,1],[998,-999]], eigenvalues -1, -1000", no_params,
               [=](const ProblemParams& prm) {
                 ParamReader r("stiff_sys_B", prm, {});
                 IvpProblem p = linear("stiff_sys_B", DenseMatrix{{-2.0, 1.0}, {998.0, -999.0}}, {2.0, 3.0},
                                       t_end_of(r, 10.0), [](double t) {
                                         return Vector{2.0 * std::sin(t), 999.0 * (std::cos(t) - std::sin(t))};
                                       });
                 p.exact = stiff_sys_exact;
                 return p;
               }});

  {
    const std::vector<ParamDoc> docs = {{"m", "9", "interior grid points, dx = 1/(m+1)"}};
    c.push_back({"mol_diffusion", {"stiff", "system", "mol"},
                 "u_t = u_xx on [0,1], u0 = sin(pi x), central differences; exact is the semi-discrete mode "
                 "e^{lambda_1 t} sin(pi x_k)",
                 docs, [=](const ProblemParams& prm) {
                   ParamReader r("mol_diffusion", prm, docs);
                   const double mv = r.number("m", 9.0);
                   if (!(mv >= 1.0 && mv <= 2000.0 && mv == std::floor(mv))) throw BadParamError("m must be an integer in [1, 2000]");
                   const auto m = static_cast<std::size_t>(mv);
                   const double dx = 1.0 / static_cast<double>(m + 1);
                   Vector y0(m), mode(m);
                   for (std::size_t k = 0; k < m; ++k) y0[k] = mode[k] = std::sin(kPi * static_cast<double>(k + 1) * dx);
                   IvpProblem p = linear("mol_diffusion", mol_matrix(m), y0, t_end_of(r, 0.5));
                   const double lam1 = tridiag_toeplitz_eigs(m, dx)[0];
                   p.exact = [mode, lam1](double t) {
                     Vector out = mode;
                     const double g = std::exp(lam1 * t);
                     for (auto& v : out) v *= g;
                     return out;
                   };
                   return p;
                 }});
  }

  c.push_back({"robertson", {"stiff", "system"}, "Robertson's auto-catalytic reaction, y(0) = (1, 0, 0)", no_params,
               [=](const ProblemParams& prm) {
                 ParamReader r("robertson", prm, {});
                 IvpProblem p;
                 p.name = "robertson";
                 p.dim = 3;
                 p.rhs = [](double, const Vector& y) {
                   const double a = 0.04 * y[0], b = 1e4 * y[1] * y[2], c3 = 3e7 * y[1] * y[1];
                   return Vector{-a + b, a - b - c3, c3};
                 };
                 p.jacobian = [](double, const Vector& y) {
                   return DenseMatrix{{-0.04, 1e4 * y[2], 1e4 * y[1]},
                                      {0.04, -1e4 * y[2] - 6e7 * y[1], -1e4 * y[1]},
                                      {0.0, 6e7 * y[1], 0.0}};
                 };
                 p.t0 = 0.0;
                 p.t_end = t_end_of(r, 500.0);
                 p.y0 = {1.0, 0.0, 0.0};
                 return p;
               }});

  {
    const std::vector<ParamDoc> docs = {{"mu", "1", "damping; t_end defaults to 20, 100, 500, 5000 for mu = 1, 10, 100, 1000"}};
    c.push_back({"vdp", {"stiff", "system"}, "u'' - mu u'(1 - u^2) + u = 0, u(0) = 2, u'(0) = 0", docs,
                 [=](const ProblemParams& prm) {
                   ParamReader r("vdp", prm, docs);
                   const double mu = r.number("mu", 1.0);
                   if (mu < 0.0) throw BadParamError("mu must be nonnegative");
                   double t_default = 20.0;
                   if (mu == 10.0) t_default = 100.0;
                   if (mu == 100.0) t_default = 500.0;
                   if (mu == 1000.0) t_default = 5000.0;
                   IvpProblem p;
                   p.name = "vdp";
                   p.dim = 2;
                   p.rhs = [mu](double, const Vector& y) {
                     return Vector{y[1], mu * (1.0 - y[0] * y[0]) * y[1] - y[0]};
                   };
                   p.jacobian = [mu](double, const Vector& y) {
                     return DenseMatrix{{0.0, 1.0}, {-2.0 * mu * y[0] * y[1] - 1.0, mu * (1.0 - y[0] * y[0])}};
                   };
                   p.t0 = 0.0;
                   p.t_end = t_end_of(r, t_default);
                   p.y0 = {2.0, 0.0};
                   return p;
                 }});
  }

  c.push_back({"adapt_demo", {"nonstiff", "scalar"}, "y' = 1/(y^2 + 0.01), y(0) = 0 on [0, 3]", no_params,
               [=](const ProblemParams& prm) {
                 ParamReader r("adapt_demo", prm, {});
                 IvpProblem p = scalar(
                     "adapt_demo", [](double, double y) { return 1.0 / (y * y + 0.01); }, 0.0, t_end_of(r, 3.0), 0.0);
                 p.jacobian = scalar_jac([](double, double y) {
                   const double q = y * y + 0.01;
                   return -2.0 * y / (q * q);
                 });
                 return p;
               }});

  return c;
}

}  // namespace detail

}  // namespace odekit
