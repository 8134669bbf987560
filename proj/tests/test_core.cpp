#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "odekit/core.hpp"
#include "odekit/problems.hpp"
#include "odekit/steppers.hpp"

using namespace odekit;

namespace {

IvpProblem zero_field(double t_end) {
  IvpProblem p;
  p.name = "zero";
  p.dim = 1;
  p.rhs = [](double, const Vector&) { return Vector{0.0}; };
  p.t0 = 0.0;
  p.t_end = t_end;
  p.y0 = {1.0};
  p.exact = [](double) { return Vector{1.0}; };
  return p;
}

}  // namespace

TEST(March, ZeroFieldStaysConstant) {
  const Trajectory tr = march(zero_field(2.0), make_stepper("euler"), 0.5);
  ASSERT_EQ(tr.size(), 5u);
  for (const auto& y : tr.states) EXPECT_EQ(y[0], 1.0);
  EXPECT_EQ(tr.final_time(), 2.0);
}

TEST(March, EveryStepperKeepsZeroFieldExact) {
  for (const auto& name : one_step_method_names()) {
    IvpProblem p = zero_field(1.0);
    p.taylor_d2 = p.rhs;
    p.taylor_d3 = p.rhs;
    const Trajectory tr = march(p, make_stepper(name), 0.1);
    for (const auto& y : tr.states) EXPECT_EQ(y[0], 1.0) << name;
  }
}

TEST(March, EulerOnDecayFinalValue) {
  const IvpProblem p = get_problem("decay");
  const Trajectory tr = march(p, make_stepper("euler"), 0.2);
  EXPECT_EQ(tr.size(), 26u);
  EXPECT_NEAR(tr.final_state()[0], 3.778e-3, 5e-7);
  EXPECT_NEAR(tr.final_state()[0], std::pow(0.8, 25), 1e-15);
}

TEST(March, EulerCountsOneRhsPerStep) {
  const Trajectory tr = march(get_problem("decay"), make_stepper("euler"), 0.05);
  EXPECT_EQ(tr.stats.rhs_evals, 100u);
}

TEST(March, GridIsExact) {
  const double h = 0.1;
  const Trajectory tr = march(get_problem("decay"), make_stepper("rk4"), h);
  for (std::size_t k = 1; k + 1 < tr.size(); ++k) {
    const double expect = static_cast<double>(k) * h;
    EXPECT_LE(std::abs(tr.times[k] - expect), 4 * std::numeric_limits<double>::epsilon() * expect);
  }
  EXPECT_EQ(tr.final_time(), 5.0);
}

TEST(March, ShortenedFinalStepLandsOnEnd) {
  const IvpProblem p = get_problem("decay", {{"t_end", "1.05"}});
  const Trajectory tr = march(p, make_stepper("euler"), 0.1);
  ASSERT_EQ(tr.size(), 12u);
  EXPECT_EQ(tr.final_time(), 1.05);
  const double y10 = std::pow(0.9, 10);
  EXPECT_NEAR(tr.final_state()[0], y10 * (1.0 - (1.05 - 1.0)), 1e-14);
  for (std::size_t k = 1; k < tr.size(); ++k) EXPECT_GT(tr.times[k], tr.times[k - 1]);
}

TEST(March, IsDeterministic) {
  const IvpProblem p = get_problem("vdp");
  const Trajectory a = march(p, make_stepper("rk4"), 0.01);
  const Trajectory b = march(p, make_stepper("rk4"), 0.01);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a.times[k], b.times[k]);
    EXPECT_EQ(a.states[k], b.states[k]);
  }
}

TEST(March, DivergenceIsFlaggedAndMarchContinues) {
  const IvpProblem p = get_problem("lambda_cos");
  const Trajectory tr = march(p, make_stepper("euler"), 0.001);
  EXPECT_TRUE(tr.stats.diverged);
  EXPECT_GT(std::abs(tr.final_state()[0]), 1e50);
  EXPECT_EQ(tr.final_time(), 2.0);
  EXPECT_GT(tr.stats.divergence_time, 0.0);
  EXPECT_LT(tr.stats.divergence_time, 2.0);
}

TEST(March, HaltOnDivergenceStopsEarly) {
  MarchOptions opt;
  opt.halt_on_divergence = true;
  const Trajectory tr = march(get_problem("lambda_cos"), make_stepper("euler"), 0.001, opt);
  EXPECT_TRUE(tr.stats.diverged);
  EXPECT_EQ(tr.final_time(), tr.stats.divergence_time);
  EXPECT_LT(tr.final_time(), 2.0);
  EXPECT_GT(norm_inf(tr.final_state()), 1e12);
}

TEST(March, NonFiniteStateEndsRun) {
  IvpProblem p = zero_field(1.0);
  p.rhs = [](double t, const Vector&) { return Vector{t > 0.45 ? std::numeric_limits<double>::infinity() : 0.0}; };
  p.exact = nullptr;
  const Trajectory tr = march(p, make_stepper("euler"), 0.1);
  EXPECT_TRUE(tr.stats.diverged);
  EXPECT_LT(tr.size(), 11u);
  for (const auto& y : tr.states) EXPECT_TRUE(std::isfinite(y[0]));
}

TEST(March, RejectsBadStepSizes) {
  const IvpProblem p = get_problem("decay");
  EXPECT_THROW(march(p, make_stepper("euler"), 0.0), InvalidArgumentError);
  EXPECT_THROW(march(p, make_stepper("euler"), -0.1), InvalidArgumentError);
  EXPECT_THROW(march(p, make_stepper("euler"), 6.0), InvalidArgumentError);
}

TEST(March, SampleCap) {
  MarchOptions opt;
  opt.max_samples = 100;
  EXPECT_THROW(march(get_problem("decay"), make_stepper("euler"), 0.01, opt), SampleCapError);
}

TEST(ErrorAtEnd, TableValues) {
  const IvpProblem decay = get_problem("decay");
  const EndError e = error_at_end(march(decay, make_stepper("euler"), 0.1), decay);
  EXPECT_NEAR(e.abs_err, 1.584e-3, 5e-7);
  EXPECT_NEAR(e.rel_err, 2.351e-1, 5e-5);
  const IvpProblem growth = get_problem("growth");
  EXPECT_NEAR(error_at_end(march(growth, make_stepper("euler"), 0.2), growth).abs_err, 5.302e1, 5e-3);
}

TEST(ErrorAtEnd, ExactTrajectoryHasZeroError) {
  const IvpProblem p = get_problem("decay");
  Trajectory tr;
  for (int k = 0; k <= 10; ++k) tr.push(0.5 * k, p.exact(0.5 * k));
  const EndError e = error_at_end(tr, p);
  EXPECT_EQ(e.abs_err, 0.0);
  EXPECT_EQ(e.rel_err, 0.0);
}

TEST(ErrorAtEnd, TinyExactFallsBackToAbsolute) {
  IvpProblem p = zero_field(1.0);
  p.y0 = {0.0};
  p.exact = [](double) { return Vector{0.0}; };
  Trajectory tr;
  tr.push(1.0, {1e-3});
  const EndError e = error_at_end(tr, p);
  EXPECT_EQ(e.rel_err, e.abs_err);
}

TEST(ErrorAtEnd, MissingExact) {
  const IvpProblem p = get_problem("adapt_demo");
  const Trajectory tr = march(p, make_stepper("euler"), 0.1);
  EXPECT_THROW(error_at_end(tr, p), MissingExactError);
}

TEST(IvpProblem, ValidationCatchesBadDefinitions) {
  IvpProblem p = zero_field(1.0);
  p.y0 = {1.0, 2.0};
  EXPECT_THROW(p.validate(), InvalidArgumentError);
  p = zero_field(1.0);
  p.t_end = 0.0;
  EXPECT_THROW(p.validate(), InvalidArgumentError);
  p = zero_field(1.0);
  p.exact = [](double) { return Vector{1.1}; };
  EXPECT_THROW(p.validate(), InvalidArgumentError);
}
