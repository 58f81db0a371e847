#include "plap/integrate.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "plap/errors.hpp"
#include "test_helpers.hpp"

using namespace plap;
using plap_test::expect_error;

namespace {

const KernelMatrix kOnes2 = KernelMatrix::from_rows(2, {1, 1, 1, 1});
const GridFunction kGap01(std::vector<double>{0.0, 1.0});

double gap(const GridFunction& u) { return u[u.size() - 1] - u[0]; }

// Complete graph on n nodes: u' = mean(g) - u, solved by
// u_i(t) = mean + (g_i - mean) e^{-t} for p = 2.
GridFunction heat_exact(const GridFunction& g, double t) {
  const double m = mean(g);
  GridFunction u = g;
  for (int i = 0; i < u.size(); ++i) u[i] = m + (g[i] - m) * std::exp(-t);
  return u;
}

}  // namespace

TEST_CASE("step schedules validate their parameters") {
  CHECK(StepSchedule::fixed(0.1, 1.0).mode == StepMode::FixedTau);
  CHECK(StepSchedule::adaptive(0.5, 0.25, 1.0).mode ==
        StepMode::AdaptiveAlpha);
  expect_error(ErrorCode::Validation, "tau",
               [] { StepSchedule::fixed(-0.1, 1.0); });
  expect_error(ErrorCode::Validation, "horizon",
               [] { StepSchedule::fixed(0.1, 0.0); });
  expect_error(ErrorCode::Validation, "max_steps",
               [] { StepSchedule::fixed(0.1, 1.0, 0); });
  expect_error(ErrorCode::Validation, "alpha_nu",
               [] { StepSchedule::adaptive(0.5, 0.6, 1.0); });
  expect_error(ErrorCode::Validation, "",
               [] { StepSchedule::adaptive(0.0, 0.25, 1.0); });
}

TEST_CASE("integrators validate kernel, datum and steps") {
  expect_error(ErrorCode::Dimension, "", [] {
    forward_euler(kOnes2, GridFunction(3), PExponent(2.0),
                  StepSchedule::fixed(0.1, 1.0));
  });
  expect_error(ErrorCode::InvalidArgument, "finite", [] {
    GridFunction bad(std::vector<double>{
        0.0, std::numeric_limits<double>::quiet_NaN()});
    forward_euler(kOnes2, bad, PExponent(2.0), StepSchedule::fixed(0.1, 1.0));
  });
  expect_error(ErrorCode::Validation, "tau", [] {
    backward_euler(kOnes2, kGap01, PExponent(2.0), 0.0, 1.0);
  });
  expect_error(ErrorCode::Validation, "horizon", [] {
    backward_euler(kOnes2, kGap01, PExponent(2.0), 0.1, -1.0);
  });
  expect_error(ErrorCode::Validation, "max_inner", [] {
    backward_euler(kOnes2, kGap01, PExponent(2.0), 0.1, 1.0, -1.0, 0);
  });
}

TEST_CASE("two-node p=3 flow follows the analytic gap 1/(1+t)") {
  // With the all-ones kernel on two cells the gap w = u_2 - u_1 obeys
  // w' = -|w| w, hence w(t) = 1/(1+t) from w(0) = 1.
  SUBCASE("forward") {
    const Trajectory traj = forward_euler(kOnes2, kGap01, PExponent(3.0),
                                          StepSchedule::fixed(1e-4, 1.0));
    CHECK(traj.final_time() == 1.0);
    CHECK_FALSE(traj.truncated());
    CHECK(std::abs(gap(traj.states().back()) - 0.5) < 1e-3);
    CHECK(mean(traj.states().back()) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("backward") {
    const Trajectory traj =
        backward_euler(kOnes2, kGap01, PExponent(3.0), 1e-3, 1.0);
    CHECK(traj.final_time() == 1.0);
    CHECK(std::abs(gap(traj.states().back()) - 0.5) < 5e-3);
    CHECK(mean(traj.states().back()) == doctest::Approx(0.5).epsilon(1e-9));
    REQUIRE(traj.step_stats().size() == 1000);
    for (const StepStat& s : traj.step_stats()) {
      CHECK(s.iterations >= 1);
      CHECK(s.residual <= 1e-10 * std::max(1.0, 1.0));
    }
  }
}

TEST_CASE("one implicit step solves the prox equation exactly") {
  // Gap update: w + tau |w|^(p-2) w = w0 = 1.
  SUBCASE("p=2, tau=0.25: w = 1/1.25") {
    const Trajectory traj =
        backward_euler(kOnes2, kGap01, PExponent(2.0), 0.25, 0.25);
    REQUIRE(traj.knots() == 2);
    CHECK(gap(traj.state(1)) == doctest::Approx(0.8).epsilon(1e-9));
  }
  SUBCASE("p=3, tau=0.5: w + w^2/2 = 1 has root sqrt(3) - 1") {
    const Trajectory traj =
        backward_euler(kOnes2, kGap01, PExponent(3.0), 0.5, 0.5);
    REQUIRE(traj.knots() == 2);
    CHECK(gap(traj.state(1)) ==
          doctest::Approx(std::sqrt(3.0) - 1.0).epsilon(1e-9));
  }
}

TEST_CASE("p=2 complete-graph flow matches the exponential solution") {
  const KernelMatrix k = KernelMatrix::from_rows(4, std::vector<double>(16, 1.0));
  const GridFunction g(std::vector<double>{0.0, 0.8, 0.4, 0.2});
  const GridFunction exact = heat_exact(g, 1.0);

  const Trajectory fwd =
      forward_euler(k, g, PExponent(2.0), StepSchedule::fixed(1e-3, 1.0));
  const Trajectory bwd = backward_euler(k, g, PExponent(2.0), 1e-3, 1.0);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(fwd.states().back()[i] - exact[i]) < 2e-3);
    CHECK(std::abs(bwd.states().back()[i] - exact[i]) < 2e-3);
  }
  // p = 2 makes the prox problem quadratic: Newton converges in one step.
  for (const StepStat& s : bwd.step_stats()) CHECK(s.iterations == 1);
}

TEST_CASE("both schemes conserve mass and dissipate energy") {
  const KernelMatrix k = KernelMatrix::from_rows(
      3, {0.0, 1.0, 0.5, 1.0, 0.2, 2.0, 0.5, 2.0, 0.0});
  const GridFunction g(std::vector<double>{1.0, -0.4, 0.7});
  const double m0 = mean(g);

  for (double p : {1.5, 2.0, 3.0}) {
    const Trajectory fwd =
        forward_euler(k, g, PExponent(p), StepSchedule::fixed(0.01, 0.5));
    const Trajectory bwd = backward_euler(k, g, PExponent(p), 0.05, 0.5);
    for (const Trajectory* traj : {&fwd, &bwd}) {
      // Implicit steps are energy decreasing for every p; explicit steps are
      // only guaranteed so away from the singular regime p < 2.
      const bool check_energy = traj == &bwd || p >= 2.0;
      double prev = energy(k, traj->state(0), PExponent(p));
      for (long h = 1; h < traj->knots(); ++h) {
        CHECK(mean(traj->state(h)) == doctest::Approx(m0).epsilon(1e-10));
        const double e = energy(k, traj->state(h), PExponent(p));
        if (check_energy) CHECK(e <= prev + 1e-11);
        prev = e;
      }
    }
  }
}

TEST_CASE("explicit steps that blow up raise a stability error") {
  expect_error(ErrorCode::Stability, "energy grew more than 10x at step 1",
               [] {
                 forward_euler(kOnes2, kGap01, PExponent(2.0),
                               StepSchedule::fixed(5.0, 20.0));
               });
}

TEST_CASE("fixed schedules clamp the last step onto the horizon") {
  const Trajectory traj = forward_euler(kOnes2, kGap01, PExponent(2.0),
                                        StepSchedule::fixed(0.3, 1.0));
  REQUIRE(traj.knots() == 5);  // 0, 0.3, 0.6, 0.9, 1.0
  CHECK(traj.time(3) == doctest::Approx(0.9));
  CHECK(traj.final_time() == 1.0);
  CHECK_FALSE(traj.truncated());
}

TEST_CASE("running out of steps truncates and flags the trajectory") {
  const Trajectory traj = forward_euler(kOnes2, kGap01, PExponent(2.0),
                                        StepSchedule::fixed(0.1, 1.0, 5));
  CHECK(traj.truncated());
  CHECK(traj.knots() == 6);
  CHECK(traj.final_time() == doctest::Approx(0.5));
}

TEST_CASE("the adaptive schedule uses a constant alpha when slopes are small") {
  // ||Lp g||_2 <= 1 along this run, so every step equals alpha (with only
  // the final step clamped onto the horizon).
  const Trajectory traj =
      forward_euler(kOnes2, kGap01, PExponent(2.0),
                    StepSchedule::adaptive(0.5, 0.25, 1.0));
  CHECK(traj.final_time() == 1.0);
  CHECK_FALSE(traj.truncated());
  REQUIRE(traj.knots() >= 3);
  const double alpha = traj.time(1) - traj.time(0);
  CHECK(alpha <= 0.5);
  for (long h = 1; h + 1 < traj.knots(); ++h) {
    CHECK(traj.time(h + 1) - traj.time(h) <= alpha + 1e-12);
  }
  for (long h = 1; h + 2 < traj.knots(); ++h) {
    CHECK(traj.time(h + 1) - traj.time(h) ==
          doctest::Approx(alpha).epsilon(1e-12));
  }

  const Trajectory cut = forward_euler(
      kOnes2, kGap01, PExponent(2.0), StepSchedule::adaptive(0.5, 0.25, 1.0, 3));
  CHECK(cut.truncated());
  CHECK(cut.final_time() < 1.0);
}

TEST_CASE("interpolants reproduce knots and reject out-of-range times") {
  const Trajectory traj =
      backward_euler(kOnes2, kGap01, PExponent(2.0), 0.5, 0.5);
  REQUIRE(traj.knots() == 2);
  const GridFunction& u1 = traj.state(1);

  const GridFunction at0 = interpolate_linear(traj, 0.0);
  CHECK(at0[0] == kGap01[0]);
  CHECK(at0[1] == kGap01[1]);

  const GridFunction mid = interpolate_linear(traj, 0.25);
  for (int i = 0; i < 2; ++i) {
    CHECK(mid[i] == doctest::Approx(0.5 * (kGap01[i] + u1[i])));
  }

  // 1e-9 relative slack beyond the final time is accepted.
  const GridFunction end = interpolate_linear(traj, 0.5 * (1.0 + 1e-10));
  CHECK(end[0] == doctest::Approx(u1[0]));
  expect_error(ErrorCode::Domain, "",
               [&] { interpolate_linear(traj, 0.6); });
  expect_error(ErrorCode::Domain, "",
               [&] { interpolate_linear(traj, -0.1); });

  // Backward runs take the right knot on ]t_{h-1}, t_h].
  const GridFunction c = interpolate_constant(traj, 0.2);
  CHECK(c[0] == u1[0]);
  CHECK(c[1] == u1[1]);
  expect_error(ErrorCode::Domain, "",
               [&] { interpolate_constant(traj, 0.0); });

  // Forward runs take the left knot.
  const Trajectory fwd = forward_euler(kOnes2, kGap01, PExponent(2.0),
                                       StepSchedule::fixed(0.25, 0.5));
  const GridFunction f1 = interpolate_constant(fwd, 0.25);
  CHECK(f1[0] == kGap01[0]);
  const GridFunction f2 = interpolate_constant(fwd, 0.26);
  CHECK(f2[0] == fwd.state(1)[0]);
}

TEST_CASE("the interpolant gap is the largest const-vs-linear distance") {
  const Trajectory traj =
      backward_euler(kOnes2, kGap01, PExponent(2.0), 0.5, 0.5);
  const GridFunction diff = traj.state(1) - traj.state(0);
  const double expected = 0.5 * grid_norm(diff, 2.0);  // midpoint of the knot
  const std::vector<double> probes = {0.25, 0.5};
  CHECK(interpolant_gap(traj, 2.0, probes) ==
        doctest::Approx(expected).epsilon(1e-12));

  expect_error(ErrorCode::InvalidArgument, "probe", [&] {
    interpolant_gap(traj, 2.0, std::vector<double>{});
  });
  expect_error(ErrorCode::Domain, "", [&] {
    interpolant_gap(traj, 2.0, std::vector<double>{0.0});
  });
}

TEST_CASE("a custom inner tolerance is honored and recorded") {
  const Trajectory traj =
      backward_euler(kOnes2, kGap01, PExponent(1.5), 0.05, 0.25, 1e-4);
  for (const StepStat& s : traj.step_stats()) {
    CHECK(s.residual <= 1e-4);
  }
}
