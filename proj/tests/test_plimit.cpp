#include "plap/plimit.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "plap/errors.hpp"
#include "test_helpers.hpp"

using namespace plap;
using plap_test::expect_error;

namespace {

const KernelMatrix kOnes2 = KernelMatrix::from_rows(2, {1, 1, 1, 1});

// Path graph 0 - 1 - 2.
const KernelMatrix kPath3 =
    KernelMatrix::from_rows(3, {0, 1, 0, 1, 0, 1, 0, 1, 0});

}  // namespace

TEST_CASE("constraint sets collect the off-diagonal support pairs") {
  const ConstraintSet cs = ConstraintSet::from_kernel(kOnes2);
  CHECK(cs.resolution() == 2);
  REQUIRE(cs.pairs().size() == 1);
  CHECK(cs.pairs()[0] == std::pair<int, int>(0, 1));

  const ConstraintSet path = ConstraintSet::from_kernel(kPath3);
  REQUIRE(path.pairs().size() == 2);
  CHECK(path.pairs()[0] == std::pair<int, int>(0, 1));
  CHECK(path.pairs()[1] == std::pair<int, int>(1, 2));

  // Support is strict inequality against the threshold.
  const KernelMatrix faint =
      KernelMatrix::from_rows(2, {0.0, 0.5, 0.5, 0.0});
  CHECK(ConstraintSet::from_kernel(faint, 0.25).pairs().size() == 1);
  expect_error(ErrorCode::InvalidArgument, "support is empty",
               [&] { ConstraintSet::from_kernel(faint, 0.5); });
  expect_error(ErrorCode::InvalidArgument, "threshold",
               [&] { ConstraintSet::from_kernel(faint, -0.1); });

  const KernelMatrix zero = KernelMatrix::from_rows(2, {0, 0, 0, 0});
  expect_error(ErrorCode::InvalidArgument, "support is empty",
               [&] { ConstraintSet::from_kernel(zero); });
}

TEST_CASE("the violation measures how far gaps exceed one") {
  const ConstraintSet cs = ConstraintSet::from_kernel(kOnes2);
  CHECK(sinf_violation(cs, GridFunction(std::vector<double>{0.0, 2.0})) ==
        doctest::Approx(1.0));
  CHECK(sinf_violation(cs, GridFunction(std::vector<double>{0.0, 0.5})) == 0.0);
  CHECK(sinf_violation(cs, GridFunction(std::vector<double>{0.0, 1.0})) == 0.0);

  // Gaps across non-edges are unconstrained.
  const ConstraintSet path = ConstraintSet::from_kernel(kPath3);
  CHECK(sinf_violation(path, GridFunction(std::vector<double>{0.0, 1.0, 2.0})) ==
        0.0);

  expect_error(ErrorCode::Dimension, "", [&] {
    sinf_violation(cs, GridFunction(3));
  });
}

TEST_CASE("projection matches hand values on the two-node slab") {
  const ConstraintSet cs = ConstraintSet::from_kernel(kOnes2);

  const GridFunction a =
      project_sinf(cs, GridFunction(std::vector<double>{0.0, 2.0}));
  CHECK(a[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(a[1] == doctest::Approx(1.5).epsilon(1e-9));

  const GridFunction b =
      project_sinf(cs, GridFunction(std::vector<double>{-3.0, 3.0}));
  CHECK(b[0] == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(b[1] == doctest::Approx(0.5).epsilon(1e-9));

  // Feasible data stay put.
  const GridFunction fix =
      project_sinf(cs, GridFunction(std::vector<double>{0.2, 0.9}));
  CHECK(fix[0] == 0.2);
  CHECK(fix[1] == 0.9);
}

TEST_CASE("projection onto a chain is the nearest feasible point") {
  const ConstraintSet cs = ConstraintSet::from_kernel(kPath3);
  const GridFunction v(std::vector<double>{0.0, 2.0, 4.0});
  // Both gaps are 2; the L^2-nearest point shifts the ends in by 1.
  const GridFunction w = project_sinf(cs, v);
  CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(w[1] == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(w[2] == doctest::Approx(3.0).epsilon(1e-7));
  CHECK(sinf_violation(cs, w) <= 1e-10);
  CHECK(mean(w) == doctest::Approx(mean(v)).epsilon(1e-12));

  // Idempotence up to the tolerance.
  const GridFunction ww = project_sinf(cs, w);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(ww[i] - w[i]) <= 1e-9);
  }

  expect_error(ErrorCode::InvalidArgument, "tolerance", [&] {
    project_sinf(cs, v, 0.0);
  });
  expect_error(ErrorCode::Convergence, "cycles", [&] {
    project_sinf(cs, v, 1e-10, 1);
  });
}

TEST_CASE("the limit trajectory is stationary from a feasible datum") {
  const ConstraintSet cs = ConstraintSet::from_kernel(kPath3);
  const GridFunction g(std::vector<double>{0.0, 0.8, 0.4});
  const Trajectory traj = limit_trajectory(cs, g, 2.0);
  REQUIRE(traj.knots() == 2);
  CHECK(traj.time(0) == 0.0);
  CHECK(traj.final_time() == 2.0);
  for (int i = 0; i < 3; ++i) {
    CHECK(traj.state(0)[i] == g[i]);
    CHECK(traj.state(1)[i] == g[i]);
  }

  expect_error(ErrorCode::Infeasible, "project it first", [&] {
    limit_trajectory(cs, GridFunction(std::vector<double>{0.0, 2.0, 0.0}), 1.0);
  });
  expect_error(ErrorCode::Validation, "horizon",
               [&] { limit_trajectory(cs, g, 0.0); });
}

TEST_CASE("the p sweep vanishes the step before growing the exponent") {
  const GridFunction g(std::vector<double>{0.0, 0.8});
  const std::vector<double> ps = {4.0, 8.0};
  const std::vector<PSweepRow> rows = p_sweep(kOnes2, g, ps, 1.0, 0.1);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].p == 4.0);
  CHECK(rows[0].tau_used == doctest::Approx(1.0 / 16));
  CHECK(rows[1].tau_used == doctest::Approx(1.0 / 64));
  for (const PSweepRow& row : rows) {
    CHECK(row.sup_deviation >= 0.0);
    CHECK(row.sup_deviation <= 0.8);
  }

  expect_error(ErrorCode::InvalidArgument, "empty", [&] {
    p_sweep(kOnes2, g, std::vector<double>{}, 1.0, 0.1);
  });
  expect_error(ErrorCode::Domain, "", [&] {
    p_sweep(kOnes2, g, std::vector<double>{1.0}, 1.0, 0.1);
  });
  expect_error(ErrorCode::Validation, "tau", [&] {
    p_sweep(kOnes2, g, ps, 1.0, 0.0);
  });
  expect_error(ErrorCode::Infeasible, "project it first", [&] {
    p_sweep(kOnes2, GridFunction(std::vector<double>{0.0, 2.0}), ps, 1.0, 0.1);
  });
}
