#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "odekit/stability.hpp"
#include "odekit/steppers.hpp"

using namespace odekit;

namespace {

const double kPi = std::acos(-1.0);

bool segments_cross(Complex a, Complex b, Complex c, Complex d) {
  auto cross = [](Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); };
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

double distance_to_segment(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  double t = len2 > 0 ? ((p - a) * std::conj(ab)).real() / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

std::vector<MultistepMethod> shipped_multistep() {
  std::vector<MultistepMethod> out;
  for (int q = 1; q <= 4; ++q) out.push_back(ab_method(q));
  for (int q = 0; q <= 3; ++q) out.push_back(am_method(q));
  for (int q = 1; q <= 6; ++q) out.push_back(bdf_coefficients(q));
  out.push_back(leapfrog_method());
  return out;
}

}  // namespace

TEST(Raster, OneStepExamples) {
  const auto euler = stability_function("euler");
  EXPECT_TRUE(one_step_member(euler, -1.0));
  EXPECT_FALSE(one_step_member(euler, -2.5));
  EXPECT_FALSE(one_step_member(euler, 0.5));
  const auto ie = stability_function("ieuler");
  EXPECT_TRUE(one_step_member(ie, -100.0));
  EXPECT_FALSE(one_step_member(ie, 1.0));  // pole
  EXPECT_TRUE(one_step_member(ie, 3.0));
  const auto tr = stability_function("trap");
  EXPECT_TRUE(one_step_member(tr, Complex(-10, 10)));
  EXPECT_TRUE(one_step_member(tr, Complex(-10, -10)));
  EXPECT_FALSE(one_step_member(tr, 0.1));
}

TEST(Raster, GridShapeAndEulerDisc) {
  const auto r = raster_one_step(stability_function("euler"), {}, 80, 64);
  ASSERT_EQ(r.member.size(), 80u * 64u);
  for (std::size_t iy = 0; iy < r.ny; ++iy)
    for (std::size_t ix = 0; ix < r.nx; ++ix)
      EXPECT_EQ(r.at(ix, iy), std::abs(1.0 + r.center(ix, iy)) <= 1.0);
  // Disc of area pi inside a 4x4 window.
  EXPECT_NEAR(r.member_fraction(), kPi / 16.0, 0.02);
  EXPECT_THROW(raster_one_step(stability_function("euler"), {}, 1, 10), InvalidArgumentError);
  EXPECT_THROW(raster_one_step(stability_function("euler"), {1, 0, -1, 1}, 10, 10), InvalidArgumentError);
}

TEST(Raster, ImplicitEulerPoleIsOutside) {
  const auto r = raster_one_step(stability_function("ieuler"), {0.0, 2.0, -1.0, 1.0}, 2, 2);
  // centres at (0.5, +-0.5) and (1.5, +-0.5): |1 - z| < 1 for all four
  for (auto m : r.member) EXPECT_EQ(m, 0);
}

TEST(Locus, Examples) {
  const auto ab1 = boundary_locus(ab_method(1), 16);
  ASSERT_EQ(ab1.size(), 16u);
  ASSERT_TRUE(ab1[0].z);
  EXPECT_NEAR(std::abs(*ab1[0].z), 0.0, 1e-15);
  ASSERT_TRUE(ab1[8].z);
  EXPECT_NEAR(std::abs(*ab1[8].z - Complex(-2.0)), 0.0, 1e-15);
  for (const auto& p : ab1) EXPECT_NEAR(std::abs(*p.z - (std::polar(1.0, p.theta) - 1.0)), 0.0, 1e-14);
  const auto bdf2 = boundary_locus(bdf_coefficients(2), 16);
  EXPECT_NEAR(std::abs(*bdf2[8].z - Complex(4.0)), 0.0, 1e-12);
  EXPECT_THROW(boundary_locus(ab_method(1), 4), InvalidArgumentError);
}

TEST(Locus, GapWhereSigmaVanishes) {
  // Trapezoidal: sigma(r) = (r + 1)/2 vanishes at theta = pi.
  const auto tr = boundary_locus(am_method(1), 8);
  EXPECT_FALSE(tr[4].z.has_value());
  EXPECT_TRUE(tr[1].z.has_value());
}

TEST(AbsStable, Examples) {
  EXPECT_TRUE(is_abs_stable(ab_method(1), -1.0));
  EXPECT_FALSE(is_abs_stable(ab_method(1), -2.5));
  EXPECT_TRUE(is_abs_stable(bdf_coefficients(1), -1000.0));
  EXPECT_FALSE(is_abs_stable(ab_method(3), -1.0));
  EXPECT_THROW(is_abs_stable(am_method(0), 1.0), InvalidArgumentError);
}

TEST(AbsStable, ConjugateSymmetry) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(-4.0, 1.0), im(-3.0, 3.0);
  for (const auto& m : shipped_multistep()) {
    for (int i = 0; i < 50; ++i) {
      const Complex z(re(rng), im(rng));
      if (std::abs(1.0 - z * m.b_minus1) < 1e-6) continue;
      EXPECT_EQ(is_abs_stable(m, z), is_abs_stable(m, std::conj(z))) << m.name << " " << z;
    }
  }
}

TEST(AbsStable, EveryShippedMethodIsZeroStable) {
  for (const auto& m : shipped_multistep()) EXPECT_TRUE(is_abs_stable(m, 0.0)) << m.name;
  for (const auto& name : one_step_method_names()) {
    if (name == "leapfrog") continue;
    EXPECT_TRUE(one_step_member(stability_function(name), 0.0)) << name;
  }
}

TEST(AbsStable, ImplicitEulerFormsAgree) {
  const auto ie = stability_function("ieuler");
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> re(-3.0, 3.0), im(-3.0, 3.0);
  int checked = 0;
  while (checked < 1000) {
    const Complex z(re(rng), im(rng));
    if (std::abs(std::abs(1.0 - z) - 1.0) < 1e-6) continue;  // skip the boundary circle
    const bool one = one_step_member(ie, z);
    EXPECT_EQ(is_abs_stable(am_method(0), z), one) << z;
    EXPECT_EQ(is_abs_stable(bdf_coefficients(1), z), one) << z;
    ++checked;
  }
}

TEST(AbsStable, VerdictConstantAcrossLocusComplement) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> re(-4.0, 2.0), im(-3.0, 3.0), ang(0.0, 2 * kPi);
  for (const auto& m : {ab_method(2), ab_method(3), am_method(2), bdf_coefficients(2), bdf_coefficients(3)}) {
    const auto locus = boundary_locus(m, 720);
    std::vector<Complex> pts;
    for (const auto& p : locus)
      if (p.z) pts.push_back(*p.z);
    int compared = 0;
    for (int i = 0; i < 400 && compared < 100; ++i) {
      const Complex a(re(rng), im(rng));
      const Complex b = a + std::polar(0.1, ang(rng));
      bool crosses = false;
      double clearance = 1e9;
      for (std::size_t j = 0; j < pts.size(); ++j) {
        const Complex c = pts[j], d = pts[(j + 1) % pts.size()];
        crosses = crosses || segments_cross(a, b, c, d);
        clearance = std::min({clearance, distance_to_segment(a, c, d), distance_to_segment(b, c, d)});
      }
      if (crosses || clearance < 1e-2) continue;
      EXPECT_EQ(is_abs_stable(m, a), is_abs_stable(m, b)) << m.name << " " << a << " " << b;
      ++compared;
    }
    EXPECT_EQ(compared, 100) << m.name;
  }
}

TEST(Classification, OneStepMethods) {
  const auto ie = classify_stability(stability_function("ieuler"));
  EXPECT_TRUE(ie.a_stable);
  ASSERT_TRUE(ie.l_stable);
  EXPECT_TRUE(*ie.l_stable);
  EXPECT_NEAR(ie.alpha_estimate, 0.5 * kPi, 1e-12);
  const auto tr = classify_stability(stability_function("trap"));
  EXPECT_TRUE(tr.a_stable);
  EXPECT_FALSE(*tr.l_stable);
  const auto g2 = classify_stability(stability_function("gauss2"));
  EXPECT_TRUE(g2.a_stable);
  EXPECT_FALSE(*g2.l_stable);
  const auto trbdf2 = classify_stability(stability_function("trbdf2"));
  EXPECT_TRUE(trbdf2.a_stable);
  EXPECT_TRUE(*trbdf2.l_stable);
  const auto rk4 = classify_stability(stability_function("rk4"));
  EXPECT_FALSE(rk4.a_stable);
  EXPECT_FALSE(*rk4.l_stable);
  EXPECT_TRUE(rk4.sampled);
}

TEST(Classification, Multistep) {
  const auto bdf2 = classify_stability(bdf_coefficients(2));
  EXPECT_TRUE(bdf2.a_stable);
  EXPECT_FALSE(bdf2.l_stable.has_value());
  const auto bdf3 = classify_stability(bdf_coefficients(3));
  EXPECT_FALSE(bdf3.a_stable);
  EXPECT_GT(bdf3.alpha_estimate, 80.0 * kPi / 180.0);
  EXPECT_LT(bdf3.alpha_estimate, 0.5 * kPi);
  EXPECT_FALSE(classify_stability(ab_method(3)).a_stable);
  EXPECT_FALSE(classify_stability(am_method(3)).a_stable);
}

TEST(Classification, ProbesStayInClosedLeftHalfPlane) {
  const auto probes = left_half_plane_probes();
  EXPECT_EQ(probes.size(), 2200u);
  for (const auto& z : probes) {
    EXPECT_LE(z.real(), 0.0);
    EXPECT_LE(std::abs(z), 1e6 * (1 + 1e-12));
  }
  ProbeOptions other;
  other.seed = 99;
  EXPECT_NE(left_half_plane_probes(other)[0], probes[0]);
  EXPECT_EQ(left_half_plane_probes()[5], probes[5]);
}

TEST(Stiffness, Ratios) {
  EXPECT_NEAR(stiffness_ratio({-1000.0, -1.0}).ratio, 1000.0, 1e-12);
  EXPECT_NEAR(stiffness_ratio({-3.0, -1.0}).ratio, 3.0, 1e-15);
  EXPECT_TRUE(stiffness_ratio({-5.0, 0.0}).infinite);
  EXPECT_NEAR(stiffness_ratio({Complex(-2, 5), Complex(-2, -5)}).ratio, 1.0, 1e-15);
  EXPECT_THROW(stiffness_ratio({}), InvalidArgumentError);
}

TEST(DifferenceEquations, TripleRootExample) {
  const DifferenceEquation eq{{1, -5, 6, 4, -8}, {-1, -7, -7, 7}};
  const DifferenceSolution sol = solve_difference_equation(eq);
  ASSERT_EQ(sol.roots.roots.size(), 2u);
  EXPECT_NEAR(std::abs(sol.roots.roots[0] - Complex(-1.0)), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(sol.roots.roots[1] - Complex(2.0)), 0.0, 1e-9);
  EXPECT_EQ(sol.roots.multiplicities[1], 3);
  EXPECT_NEAR(std::abs(sol.beta[0][0] - Complex(1.0)), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(sol.beta[1][0] - Complex(-2.0)), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(sol.beta[1][1] - Complex(-2.0)), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(sol.beta[1][2] - Complex(1.0)), 0.0, 1e-9);
  const double want[] = {-1, -7, -7, 7};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(evaluate_difference_solution(sol, k), want[k], 1e-9);
  EXPECT_FALSE(sol.ill_conditioned);
}

TEST(DifferenceEquations, SmallExamples) {
  const DifferenceEquation eq{{1, 5, 6}, {0, 2}};
  const DifferenceSolution sol = solve_difference_equation(eq);
  // roots ordered by real part: -3 then -2
  EXPECT_NEAR(std::abs(sol.roots.roots[0] - Complex(-3.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(sol.beta[0][0] - Complex(-2.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(sol.beta[1][0] - Complex(2.0)), 0.0, 1e-12);
  EXPECT_NEAR(evaluate_difference_solution(sol, 2), -10.0, 1e-10);
  EXPECT_NEAR(evaluate_difference_solution(sol, 5), 422.0, 1e-9);
  EXPECT_EQ(difference_recurrence(eq, 2)[2], -10.0);

  const DifferenceSolution id = solve_difference_equation({{1, -1}, {7}});
  for (long long k : {0, 1, 10, 1000}) EXPECT_NEAR(evaluate_difference_solution(id, k), 7.0, 1e-12);
  EXPECT_THROW(evaluate_difference_solution(id, -1), InvalidArgumentError);
}

TEST(DifferenceEquations, ZeroRootGivesDeltaTerm) {
  // y_{k+2} = y_{k+1}: characteristic r^2 - r, roots 0 and 1.
  const DifferenceEquation eq{{1, -1, 0}, {5, 3}};
  const DifferenceSolution sol = solve_difference_equation(eq);
  const Vector rec = difference_recurrence(eq, 10);
  for (int k = 0; k <= 10; ++k) EXPECT_NEAR(evaluate_difference_solution(sol, k), rec[k], 1e-12) << k;
}

TEST(DifferenceEquations, ComplexRootsGiveRealSequence) {
  // y_{k+2} = -y_k: roots +-i.
  const DifferenceEquation eq{{1, 0, 1}, {1, 2}};
  const DifferenceSolution sol = solve_difference_equation(eq);
  const Vector rec = difference_recurrence(eq, 12);
  for (int k = 0; k <= 12; ++k) {
    const Complex v = evaluate_difference_solution_complex(sol, k);
    EXPECT_NEAR(v.real(), rec[k], 1e-12);
    EXPECT_LE(std::abs(v.imag()), 1e-8 * std::max(1.0, std::abs(v.real())));
  }
}

TEST(DifferenceEquations, RandomIntegerRootInstances) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> root(-3, 3), order(1, 4), init(-9, 9);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = order(rng);
    ComplexVector rs;
    for (int i = 0; i < p; ++i) rs.push_back(static_cast<double>(root(rng)));
    ComplexRootSet set;
    for (const auto& r : rs) set.roots.push_back(r), set.multiplicities.push_back(1);
    const ComplexVector coeffs = poly_from_roots(set);
    DifferenceEquation eq;
    for (const auto& c : coeffs) eq.c.push_back(c.real());
    for (int i = 0; i < p; ++i) eq.initial.push_back(init(rng));
    const DifferenceSolution sol = solve_difference_equation(eq);
    const Vector rec = difference_recurrence(eq, 25);
    for (int k = 0; k <= 25; ++k) {
      // Relative to the size of the individual terms, which may cancel.
      double scale = 1.0;
      for (std::size_t j = 0; j < sol.roots.roots.size(); ++j)
        for (std::size_t m = 0; m < sol.beta[j].size(); ++m)
          scale += std::abs(sol.beta[j][m]) * std::pow(k, m) * std::pow(std::abs(sol.roots.roots[j]), k);
      const double v = evaluate_difference_solution(sol, k);
      EXPECT_NEAR(v, rec[k], 1e-6 * std::max(scale, std::abs(rec[k]))) << "trial " << trial << " k " << k;
    }
  }
}

TEST(DifferenceEquations, Validation) {
  EXPECT_THROW(solve_difference_equation({{1}, {}}), InvalidArgumentError);
  EXPECT_THROW(solve_difference_equation({{0, 1}, {1}}), InvalidArgumentError);
  EXPECT_THROW(solve_difference_equation({{1, 1}, {1, 2}}), InvalidArgumentError);
}
