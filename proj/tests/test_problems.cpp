#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "odekit/problems.hpp"
#include "odekit/steppers.hpp"

using namespace odekit;

TEST(Catalog, SortedAndComplete) {
  const auto keys = list_problems();
  EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
  for (const char* k : {"decay", "growth", "lambda_cos", "kinetics2", "kinetics3", "dog_jogger", "pendulum",
                        "sqrt_nonunique", "blowup", "atan", "texp", "quartic", "rational", "nonsmooth", "alpha_power",
                        "stiff_sys_A", "stiff_sys_B", "mol_diffusion", "robertson", "vdp", "adapt_demo"})
    EXPECT_NE(std::find(keys.begin(), keys.end(), k), keys.end()) << k;
}

TEST(Catalog, Tags) {
  EXPECT_TRUE(catalog_entry("robertson").has_tag("stiff"));
  EXPECT_TRUE(catalog_entry("sqrt_nonunique").has_tag("nonsmooth"));
  EXPECT_TRUE(catalog_entry("dog_jogger").has_tag("pursuit"));
  EXPECT_TRUE(catalog_entry("mol_diffusion").has_tag("mol"));
  for (const auto& e : catalog()) {
    EXPECT_FALSE(e.tags.empty()) << e.key;
    EXPECT_FALSE(e.notes.empty()) << e.key;
  }
}

TEST(Catalog, ExactSolutionsSatisfyTheOde) {
  const double d = 1e-6;
  for (const auto& e : catalog()) {
    const IvpProblem p = get_problem(e.key);
    EXPECT_EQ(p.y0.size(), p.dim) << e.key;
    if (!p.has_exact()) continue;
    for (int i = 1; i <= 20; ++i) {
      const double t = p.t0 + (p.t_end - p.t0) * i / 21.0;
      const Vector a = p.exact(t + d), b = p.exact(t - d);
      const Vector f = p.rhs(t, p.exact(t));
      double res = 0.0;
      for (std::size_t k = 0; k < p.dim; ++k) res = std::max(res, std::abs((a[k] - b[k]) / (2 * d) - f[k]));
      EXPECT_LE(res, 1e-6 * (1 + norm_inf(f))) << e.key << " t=" << t;
    }
  }
}

TEST(Catalog, JacobiansMatchFiniteDifferences) {
  for (const auto& e : catalog()) {
    const IvpProblem p = get_problem(e.key);
    if (!p.jacobian) continue;
    const double t = p.t0 + 0.3 * (p.t_end - p.t0);
    Vector y = p.y0;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.1 * static_cast<double>(i + 1);
    const DenseMatrix j = p.jacobian(t, y);
    for (std::size_t c = 0; c < p.dim; ++c) {
      const double d = 1e-6 * std::max(1.0, std::abs(y[c]));
      Vector yp = y, ym = y;
      yp[c] += d;
      ym[c] -= d;
      const Vector fp = p.rhs(t, yp), fm = p.rhs(t, ym);
      for (std::size_t r = 0; r < p.dim; ++r) {
        const double fd = (fp[r] - fm[r]) / (2 * d);
        EXPECT_NEAR(j(r, c), fd, 1e-5 * std::max(1.0, std::abs(fd))) << e.key << " (" << r << "," << c << ")";
      }
    }
  }
}

TEST(Catalog, Examples) {
  const IvpProblem k2 = get_problem("kinetics2", {{"k1", "2"}, {"k2", "1"}});
  const Vector y0 = k2.exact(0.0);
  EXPECT_NEAR(y0[0], 5.0, 1e-14);
  EXPECT_NEAR(y0[1], 2.0, 1e-14);
  EXPECT_NEAR(get_problem("decay").exact(5.0)[0], std::exp(-5.0), 1e-16);
  const auto ev = eigen_decompose(get_problem("stiff_sys_B").jacobian(0.0, {0.0, 0.0}));
  ASSERT_EQ(ev.values.size(), 2u);
  EXPECT_NEAR(ev.values[0].real(), -1000.0, 1e-9);
  EXPECT_NEAR(ev.values[1].real(), -1.0, 1e-9);
}

TEST(Catalog, StiffSystemsShareExactSolution) {
  const IvpProblem a = get_problem("stiff_sys_A"), b = get_problem("stiff_sys_B");
  for (double t = 0.0; t <= 10.0; t += 0.37) {
    const Vector ya = a.exact(t), yb = b.exact(t);
    EXPECT_NEAR(ya[0], yb[0], 1e-12);
    EXPECT_NEAR(ya[1], yb[1], 1e-12);
  }
}

TEST(Catalog, MolSpectrumMatchesClosedForm) {
  for (int m : {1, 5, 9, 20}) {
    const IvpProblem p = get_problem("mol_diffusion", {{"m", std::to_string(m)}});
    const auto ev = jacobi_symmetric_eig(p.jacobian(0.0, p.y0));
    const Vector closed = tridiag_toeplitz_eigs(static_cast<std::size_t>(m), 1.0 / (m + 1));
    Vector sorted = closed;
    std::sort(sorted.begin(), sorted.end());
    ASSERT_EQ(ev.values.size(), sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
      EXPECT_NEAR(ev.values[i].real(), sorted[i], 1e-9 * std::abs(sorted[i])) << m;
  }
  // The semi-discrete mode tends to the PDE solution as dx shrinks.
  const IvpProblem fine = get_problem("mol_diffusion", {{"m", "99"}});
  const Vector pde = mol_pde_solution(99, 0.5);
  const Vector ode = fine.exact(0.5);
  double diff = 0.0;
  for (std::size_t k = 0; k < pde.size(); ++k) diff = std::max(diff, std::abs(pde[k] - ode[k]));
  EXPECT_LT(diff, 1e-5);
}

TEST(Catalog, DogClosesOnJogger) {
  const IvpProblem p = get_problem("dog_jogger", {{"w", "10"}, {"path", "line"}});
  const Stepper rk4 = make_stepper("rk4");
  RunStats stats;
  StepContext ctx{p, p.rhs, stats, nullptr, 0.0};
  Vector y = p.y0;
  const double h = 1e-3;
  const double d0 = std::hypot(y[0], y[1]);
  for (int k = 0; k < 12000; ++k) y = rk4.step(ctx, k * h, y, h);
  EXPECT_LT(std::hypot(8.0 * 12.0 - y[0], y[1]), d0);
  // Dog speed is the constant w.
  const Vector v = p.rhs(3.0, {1.0, 2.0});
  EXPECT_NEAR(std::hypot(v[0], v[1]), 10.0, 1e-12);
}

TEST(Catalog, DogPaths) {
  EXPECT_NEAR(get_problem("dog_jogger", {{"path", "circle"}}).t_end, 4 * std::acos(-1.0), 1e-15);
  EXPECT_NO_THROW(get_problem("dog_jogger", {{"path", "back"}}));
  EXPECT_THROW(get_problem("dog_jogger", {{"path", "spiral"}}), BadParamError);
  EXPECT_THROW(get_problem("dog_jogger", {{"w", "-1"}}), BadParamError);
}

TEST(Catalog, BlowupGuard) {
  const IvpProblem p = get_problem("blowup");
  EXPECT_NEAR(p.exact(0.5)[0], 1.0 / 0.75, 1e-15);
  EXPECT_THROW(p.exact(0.995), InvalidArgumentError);
  EXPECT_THROW(get_problem("blowup", {{"t_end", "1.0"}}), BadParamError);
}

TEST(Catalog, ParameterErrors) {
  EXPECT_THROW(get_problem("nope"), UnknownProblemError);
  EXPECT_THROW(get_problem("decay", {{"lambda", "2"}}), BadParamError);
  EXPECT_THROW(get_problem("lambda_cos", {{"lambda", "abc"}}), BadParamError);
  EXPECT_THROW(get_problem("lambda_cos", {{"lambda", "1x"}}), BadParamError);
  EXPECT_THROW(get_problem("decay", {{"t_end", "-1"}}), BadParamError);
  EXPECT_THROW(get_problem("mol_diffusion", {{"m", "2.5"}}), BadParamError);
  EXPECT_THROW(get_problem("alpha_power", {{"alpha", "1"}}), BadParamError);
  EXPECT_THROW(get_problem("vdp", {{"mu", "-1"}}), BadParamError);
  EXPECT_EQ(get_problem("decay", {{"t_end", "2"}}).t_end, 2.0);
}

TEST(Catalog, ParameterisedDefaults) {
  EXPECT_EQ(get_problem("vdp", {{"mu", "1000"}}).t_end, 5000.0);
  EXPECT_EQ(get_problem("vdp", {{"mu", "10"}}).t_end, 100.0);
  EXPECT_EQ(get_problem("lambda_cos").t_end, 2.0);
  EXPECT_FALSE(get_problem("sqrt_nonunique").has_exact());
  EXPECT_FALSE(get_problem("kinetics3", {{"k1", "1"}, {"k2", "1"}}).has_exact());
  EXPECT_TRUE(get_problem("kinetics3").has_exact());
}
