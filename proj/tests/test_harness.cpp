#include "plap/harness.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "plap/errors.hpp"
#include "plap/rng.hpp"
#include "test_helpers.hpp"

using namespace plap;
using plap_test::expect_error;

namespace {

const KernelMatrix kOnes2 = KernelMatrix::from_rows(2, {1, 1, 1, 1});
const GridFunction kGap01(std::vector<double>{0.0, 1.0});

}  // namespace

TEST_CASE("discretization names round-trip") {
  CHECK(discretization_from_name("average") == Discretization::Average);
  CHECK(discretization_from_name("collocation") == Discretization::Collocation);
  CHECK(discretization_from_name("simple") == Discretization::Simple);
  for (Discretization d : {Discretization::Average, Discretization::Collocation,
                           Discretization::Simple}) {
    CHECK(discretization_from_name(discretization_name(d)) == d);
  }
  expect_error(ErrorCode::Validation, "unknown discretization",
               [] { discretization_from_name("sampled"); });
}

TEST_CASE("discretize_kernel dispatches to the three builders") {
  const GraphonSpec product = GraphonSpec::make("product");
  const KernelMatrix avg =
      discretize_kernel(product, Discretization::Average, 2);
  CHECK(avg(1, 1) == doctest::Approx(9.0 / 16).epsilon(1e-14));

  const KernelMatrix col =
      discretize_kernel(product, Discretization::Collocation, 2);
  CHECK(col(1, 1) == doctest::Approx(1.0));

  const GraphonSpec halfplane = GraphonSpec::make("halfplane");
  const KernelMatrix sim =
      discretize_kernel(halfplane, Discretization::Simple, 4);
  CHECK(sim(0, 0) == 1.0);
  CHECK(sim(3, 3) == 0.0);
}

TEST_CASE("initial families discretize to exact cell averages") {
  SUBCASE("constant") {
    const GridFunction u =
        discretize_initial(InitialSpec::make("constant", {2.5}), 3);
    for (int i = 0; i < 3; ++i) CHECK(u[i] == 2.5);
    CHECK(discretize_initial(InitialSpec::make("constant"), 2)[0] == 0.0);
  }
  SUBCASE("smooth x(1-x)") {
    const GridFunction u = discretize_initial(InitialSpec::make("smooth"), 2);
    CHECK(u[0] == doctest::Approx(1.0 / 6).epsilon(1e-14));
    CHECK(u[1] == doctest::Approx(1.0 / 6).epsilon(1e-14));
    // Refining the datum never changes its mean: exact averages.
    const GridFunction fine =
        discretize_initial(InitialSpec::make("smooth"), 64);
    CHECK(mean(fine) == doctest::Approx(1.0 / 6).epsilon(1e-13));
  }
  SUBCASE("step at one half") {
    const GridFunction u = discretize_initial(InitialSpec::make("step"), 4);
    CHECK(u[0] == 0.0);
    CHECK(u[1] == 0.0);
    CHECK(u[2] == 1.0);
    CHECK(u[3] == 1.0);
    // An odd grid splits the middle cell in half.
    const GridFunction odd = discretize_initial(InitialSpec::make("step"), 3);
    CHECK(odd[1] == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("ramp") {
    const GridFunction u =
        discretize_initial(InitialSpec::make("ramp", {2.0}), 4);
    CHECK(u[0] == doctest::Approx(0.25));
    CHECK(u[3] == doctest::Approx(1.75));
  }
  SUBCASE("seeded random piecewise") {
    const InitialSpec spec = InitialSpec::make("random", {2.0}, 42);
    const GridFunction u = discretize_initial(spec, 4);
    Rng rng(42);
    const double b0 = rng.unit();
    const double b1 = rng.unit();
    CHECK(u[0] == doctest::Approx(b0));
    CHECK(u[1] == doctest::Approx(b0));
    CHECK(u[2] == doctest::Approx(b1));
    CHECK(u[3] == doctest::Approx(b1));
    // Same seed, same datum; new seed, new datum.
    const GridFunction again = discretize_initial(spec, 4);
    CHECK(again[2] == u[2]);
    const GridFunction other =
        discretize_initial(InitialSpec::make("random", {2.0}, 43), 4);
    CHECK(other[0] != u[0]);
  }
  SUBCASE("validation") {
    expect_error(ErrorCode::Validation, "initial family",
                 [] { InitialSpec::make("bump"); });
    expect_error(ErrorCode::InvalidArgument, "positive", [] {
      discretize_initial(InitialSpec::make("smooth"), 0);
    });
    expect_error(ErrorCode::Validation, "cell count", [] {
      discretize_initial(InitialSpec::make("random", {0.0}), 4);
    });
  }
}

TEST_CASE("rate fits recover planted slopes") {
  const std::vector<double> xs = {8.0, 16.0, 32.0};
  const std::vector<double> errs = {4.0, 1.0, 0.25};  // err = 256 / x^2
  const RateReport report = fit_rate(xs, errs);
  CHECK(report.slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(report.intercept == doctest::Approx(std::log(256.0)).epsilon(1e-12));
  CHECK(report.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(report.used_points == 3);
  CHECK_FALSE(report.excluded_points);
  CHECK_FALSE(report.degenerate);
}

TEST_CASE("rate fits exclude exact zeros and reject thin data") {
  const std::vector<double> xs = {8.0, 16.0, 32.0, 64.0};
  const std::vector<double> errs = {4.0, 1.0, 0.25, 0.0};
  const RateReport report = fit_rate(xs, errs);
  CHECK(report.slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(report.used_points == 3);
  CHECK(report.excluded_points);

  expect_error(ErrorCode::Dimension, "sizes differ", [] {
    fit_rate(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0});
  });
  expect_error(ErrorCode::Domain, "positive", [] {
    fit_rate(std::vector<double>{-1.0, 2.0, 4.0},
             std::vector<double>{1.0, 1.0, 1.0});
  });
  expect_error(ErrorCode::DegenerateFit, "at least 3", [] {
    fit_rate(std::vector<double>{8.0, 16.0, 32.0},
             std::vector<double>{1.0, 0.0, 0.0});
  });
  expect_error(ErrorCode::DegenerateFit, "not distinct", [] {
    fit_rate(std::vector<double>{8.0, 8.0, 8.0},
             std::vector<double>{1.0, 2.0, 3.0});
  });
}

TEST_CASE("probe times are uniform and land exactly on the endpoints") {
  const std::vector<double> probes = probe_times(0.8, 5);
  REQUIRE(probes.size() == 5);
  CHECK(probes.front() == 0.0);
  CHECK(probes[2] == doctest::Approx(0.4));
  CHECK(probes.back() == 0.8);
  CHECK(probe_times(1.0).size() == 33);
  expect_error(ErrorCode::InvalidArgument, "at least 2",
               [] { probe_times(1.0, 1); });
  expect_error(ErrorCode::InvalidArgument, "positive",
               [] { probe_times(0.0, 5); });
}

TEST_CASE("consistency error vanishes between embedded copies of one flow") {
  // The complete weighted graph gives the same mean-reversion dynamics at
  // every resolution, so the refined coarse run equals the fine run.
  const Trajectory coarse =
      backward_euler(kOnes2, kGap01, PExponent(2.0), 0.05, 0.5);
  const KernelMatrix ones4 =
      KernelMatrix::from_rows(4, std::vector<double>(16, 1.0));
  const Trajectory fine = backward_euler(ones4, refine(kGap01, 2),
                                         PExponent(2.0), 0.05, 0.5);
  const std::vector<double> probes = probe_times(0.5, 9);
  const double err = consistency_error(coarse, fine, 2.0, probes);
  CHECK(err <= 1e-9);
  CHECK(consistency_error(fine, coarse, 2.0, probes) ==
        doctest::Approx(err));

  // Different data at the same resolution measure a positive distance.
  const Trajectory other = backward_euler(
      kOnes2, GridFunction(std::vector<double>{0.0, 0.5}), PExponent(2.0),
      0.05, 0.5);
  CHECK(consistency_error(coarse, other, 2.0, probes) > 0.1);

  expect_error(ErrorCode::Dimension, "incommensurate", [&] {
    const KernelMatrix ones3 =
        KernelMatrix::from_rows(3, std::vector<double>(9, 1.0));
    const Trajectory three =
        backward_euler(ones3, GridFunction(3, 0.1), PExponent(2.0), 0.05, 0.5);
    consistency_error(coarse, three, 2.0, probes);
  });
  expect_error(ErrorCode::InvalidArgument, "no probe times", [&] {
    consistency_error(coarse, fine, 2.0, std::vector<double>{});
  });
}

TEST_CASE("temporal sweeps recover the first-order backward rate") {
  const std::vector<double> taus = {0.2, 0.1, 0.05};
  const RateReport report = sweep_tau(kOnes2, kGap01, 2.0, 2.0, taus,
                                      0.05 / 4, 1.0, Scheme::Backward);
  CHECK_FALSE(report.degenerate);
  CHECK(report.slope > 0.7);
  CHECK(report.slope < 1.3);
  CHECK(report.r_squared > 0.9);
  REQUIRE(report.errs.size() == 3);
  CHECK(report.errs[0] > report.errs[2]);

  expect_error(ErrorCode::Validation, "at least 3 steps", [&] {
    sweep_tau(kOnes2, kGap01, 2.0, 2.0, std::vector<double>{0.2, 0.1},
              0.01, 1.0, Scheme::Backward);
  });
  expect_error(ErrorCode::Validation, "min(taus)/4", [&] {
    sweep_tau(kOnes2, kGap01, 2.0, 2.0, taus, 0.02, 1.0, Scheme::Backward);
  });
  expect_error(ErrorCode::Validation, "steps must be positive", [&] {
    sweep_tau(kOnes2, kGap01, 2.0, 2.0, std::vector<double>{0.2, -0.1, 0.05},
              0.01, 1.0, Scheme::Backward);
  });
}

TEST_CASE("spatial sweeps measure a shrinking discretization error") {
  const GraphonSpec spec = GraphonSpec::make("mean");
  const InitialSpec g_spec = InitialSpec::make("smooth");
  OracleConfig oracle;
  oracle.n_ref = 32;
  oracle.tau_ref = 0.05;
  const std::vector<int> ns = {2, 4, 8};
  const RateReport report = sweep_n(spec, Discretization::Average, g_spec,
                                    2.0, 2.0, ns, oracle, 0.5);
  CHECK_FALSE(report.degenerate);
  REQUIRE(report.errs.size() == 3);
  CHECK(report.errs[0] > report.errs[2]);
  CHECK(report.slope < -0.5);
  CHECK(report.r_squared > 0.8);

  expect_error(ErrorCode::Validation, "at least 3 resolutions", [&] {
    sweep_n(spec, Discretization::Average, g_spec, 2.0, 2.0,
            std::vector<int>{2, 4}, oracle, 0.5);
  });
  expect_error(ErrorCode::Validation, "multiple of every swept n", [&] {
    sweep_n(spec, Discretization::Average, g_spec, 2.0, 2.0,
            std::vector<int>{2, 3, 4}, oracle, 0.5);
  });
  expect_error(ErrorCode::Validation, ">= 4x", [&] {
    OracleConfig small;
    small.n_ref = 16;
    sweep_n(spec, Discretization::Average, g_spec, 2.0, 2.0,
            std::vector<int>{2, 4, 8}, small, 0.5);
  });
  expect_error(ErrorCode::Validation, "oracle tau", [&] {
    OracleConfig bad = oracle;
    bad.tau_ref = 0.0;
    sweep_n(spec, Discretization::Average, g_spec, 2.0, 2.0, ns, bad, 0.5);
  });
}

TEST_CASE("the contraction check compares terminal and initial distances") {
  const GridFunction g2(std::vector<double>{0.2, 0.7});
  const ContractionResult result =
      contraction_test(kOnes2, 3.0, 2.0, kGap01, g2, 1.0, 0.05);
  CHECK(result.pass);
  CHECK(result.rhs == doctest::Approx(std::sqrt(0.065)).epsilon(1e-12));
  CHECK(result.lhs <= result.rhs + 1e-8);
}

TEST_CASE("the invariant suite is deterministic and green") {
  const InvariantReport report = run_invariant_suite(7);
  CHECK(report.all_passed());
  CHECK(report.checks.size() >= 30);
  for (const InvariantCheck& check : report.checks) {
    CHECK(check.passed);
    CHECK(check.measured <= check.threshold);
  }
  const std::string text = report.to_text();
  CHECK(text.find("all invariants hold") != std::string::npos);
  const std::string csv = report.to_csv();
  CHECK(csv.rfind("name,passed,measured,threshold,note", 0) == 0);

  const InvariantReport again = run_invariant_suite(7);
  CHECK(again.to_csv() == csv);
}

TEST_CASE("tampered kernels make symmetry-dependent invariants fail") {
  // Negative control: skew every random kernel and expect the suite to
  // notice. A suite that stays green under tampering tests nothing.
  InvariantHooks hooks;
  hooks.tamper_kernel = [](int n, std::vector<double>& row_major) {
    row_major[1] += 0.5;  // entry (0,1) only; (1,0) keeps its value
    (void)n;
  };
  const InvariantReport report = run_invariant_suite(7, &hooks);
  CHECK_FALSE(report.all_passed());
  CHECK(report.to_text().find("FAIL") != std::string::npos);
}
