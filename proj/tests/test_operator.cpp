#include "plap/plaplacian.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "plap/errors.hpp"
#include "plap/grid.hpp"
#include "plap/kernel.hpp"
#include "test_helpers.hpp"

using namespace plap;
using plap_test::expect_error;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const KernelMatrix kOnes2 = KernelMatrix::from_rows(2, {1, 1, 1, 1});

// Cell averages of the ramp x on [0,1]: the discretized identity function.
GridFunction ramp(int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = (i + 0.5) / n;
  return GridFunction(std::move(v));
}

}  // namespace

TEST_CASE("grid functions carry the 1/n cell weight in norms and pairings") {
  const GridFunction u(std::vector<double>{1.0, -2.0});
  CHECK(grid_norm(u, 1.0) == doctest::Approx(1.5));
  CHECK(grid_norm(u, 2.0) == doctest::Approx(std::sqrt(2.5)));
  CHECK(grid_norm(u, kInf) == doctest::Approx(2.0));

  const GridFunction v(std::vector<double>{3.0, 4.0});
  CHECK(pairing(GridFunction(std::vector<double>{1.0, 2.0}), v) ==
        doctest::Approx(5.5));
  CHECK(mean(GridFunction(std::vector<double>{1.0, 2.0})) ==
        doctest::Approx(1.5));

  expect_error(ErrorCode::Domain, "norm order",
               [&] { grid_norm(u, 0.5); });
  expect_error(ErrorCode::Dimension, "", [&] {
    GridFunction a(2);
    GridFunction b(3);
    a += b;
  });
  expect_error(ErrorCode::InvalidArgument, "at least one",
               [] { GridFunction(std::vector<double>{}); });
}

TEST_CASE("refinement repeats values and preserves every norm") {
  const GridFunction u(std::vector<double>{1.0, -2.0});
  const GridFunction fine = refine(u, 3);
  REQUIRE(fine.size() == 6);
  CHECK(fine[0] == 1.0);
  CHECK(fine[2] == 1.0);
  CHECK(fine[3] == -2.0);
  for (double q : {1.0, 2.0, 4.0, kInf}) {
    CHECK(grid_norm(fine, q) == doctest::Approx(grid_norm(u, q)));
  }
  CHECK(refine(u, 1).size() == 2);
  expect_error(ErrorCode::InvalidArgument, ">= 1", [&] { refine(u, 0); });
}

TEST_CASE("grid arithmetic works coordinatewise") {
  const GridFunction a(std::vector<double>{1.0, 2.0});
  const GridFunction b(std::vector<double>{0.5, -1.0});
  const GridFunction sum = a + b;
  CHECK(sum[0] == 1.5);
  CHECK(sum[1] == 1.0);
  const GridFunction diff = a - b;
  CHECK(diff[0] == 0.5);
  CHECK(diff[1] == 3.0);
  const GridFunction scaled = 2.0 * a;
  CHECK(scaled[0] == 2.0);
  CHECK(scaled[1] == 4.0);
}

TEST_CASE("modulus of smoothness of the ramp equals z(1-z) at the last shift") {
  // u(x+z) - u(x) = z on the overlap of length 1 - z, so the L^1 modulus is
  // sup over admissible z = k/n < h of z(1-z); with n = 128 and h = 1/8 the
  // largest shift is k = 15.
  const GridFunction u = ramp(128);
  CHECK(modulus_smoothness(u, 1.0 / 8, 1.0) ==
        doctest::Approx(1695.0 / 16384).epsilon(1e-13));
  CHECK(modulus_smoothness(u, 1.0 / 8, kInf) ==
        doctest::Approx(15.0 / 128).epsilon(1e-13));

  // h equal to the spacing falls back to the single-cell shift.
  const GridFunction coarse = ramp(4);
  CHECK(modulus_smoothness(coarse, 0.25, kInf) == doctest::Approx(0.25));
  expect_error(ErrorCode::Resolution, "grid spacing",
               [&] { modulus_smoothness(coarse, 0.2, 1.0); });

  // Constants do not move.
  CHECK(modulus_smoothness(GridFunction(8, 2.5), 0.5, 1.0) ==
        doctest::Approx(0.0));
}

TEST_CASE("the exponent and the odd power validate their domain") {
  CHECK(PExponent(1.5).value() == 1.5);
  expect_error(ErrorCode::Domain, "", [] { PExponent{1.0}; });
  expect_error(ErrorCode::Domain, "", [] { PExponent{kInf}; });
  expect_error(ErrorCode::Domain, "", [] {
    PExponent{std::numeric_limits<double>::quiet_NaN()};
  });

  CHECK(phi_power(2.0, 3.0) == doctest::Approx(4.0));
  CHECK(phi_power(-2.0, 3.0) == doctest::Approx(-4.0));
  CHECK(phi_power(2.0, 2.0) == doctest::Approx(2.0));
  CHECK(phi_power(4.0, 1.5) == doctest::Approx(2.0));
  CHECK(phi_power(-0.25, 1.5) == doctest::Approx(-0.5));
  CHECK(phi_power(0.0, 1.5) == 0.0);  // the singular case is defined away

  CHECK(abs_power(-2.0, 3.0) == doctest::Approx(8.0));
  CHECK(abs_power(0.5, 2.0) == doctest::Approx(0.25));
  CHECK(abs_power(2.0, 2.5) == doctest::Approx(4.0 * std::sqrt(2.0)));
}

TEST_CASE("the operator matches the hand-computed two-node value") {
  const GridFunction g(std::vector<double>{0.0, 1.0});
  const GridFunction lap = apply_plaplacian(kOnes2, g, PExponent(3.0));
  CHECK(lap[0] == doctest::Approx(-0.5));
  CHECK(lap[1] == doctest::Approx(0.5));

  expect_error(ErrorCode::Dimension, "", [&] {
    apply_plaplacian(kOnes2, GridFunction(3), PExponent(2.0));
  });
}

TEST_CASE("the energy matches the hand-computed two-node value") {
  const GridFunction g(std::vector<double>{0.0, 1.0});
  CHECK(energy(kOnes2, g, PExponent(2.0)) == doctest::Approx(1.0 / 8));
  CHECK(energy(kOnes2, g, PExponent(4.0)) == doctest::Approx(1.0 / 16));
  CHECK(energy(kOnes2, GridFunction(2, 0.7), PExponent(3.0)) ==
        doctest::Approx(0.0));
}

TEST_CASE("the operator is the grid gradient of the energy") {
  // n * dF/du_i = (Lp u)_i, checked by central differences away from the
  // kinks of |.|^p.
  const KernelMatrix k = KernelMatrix::from_rows(
      4, {0.0, 1.0, 0.5, 0.0, 1.0, 0.0, 2.0, 0.3, 0.5, 2.0, 0.0, 1.0, 0.0,
          0.3, 1.0, 0.0});
  const GridFunction u(std::vector<double>{0.0, 1.0, -0.5, 2.0});
  const double fd = 1e-6;
  for (double p : {1.5, 2.0, 3.0}) {
    const GridFunction lap = apply_plaplacian(k, u, PExponent(p));
    for (int i = 0; i < u.size(); ++i) {
      GridFunction up = u;
      GridFunction dn = u;
      up[i] += fd;
      dn[i] -= fd;
      const double diff = (energy(k, up, PExponent(p)) -
                           energy(k, dn, PExponent(p))) /
                          (2 * fd);
      CHECK(lap[i] == doctest::Approx(4.0 * diff).epsilon(1e-5));
    }
  }
}

TEST_CASE("the operator conserves mass and scales with degree p-1") {
  const KernelMatrix k = KernelMatrix::from_rows(
      3, {0.2, 1.0, 0.0, 1.0, 0.0, 0.7, 0.0, 0.7, 1.3});
  const GridFunction u(std::vector<double>{0.3, -1.0, 2.0});
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const GridFunction lap = apply_plaplacian(k, u, PExponent(p));
    double sum = 0.0;
    for (int i = 0; i < lap.size(); ++i) sum += lap[i];
    CHECK(std::abs(sum) < 1e-13);

    // phi is (p-1)-homogeneous, hence so is the operator.
    const GridFunction lap2 = apply_plaplacian(k, 2.0 * u, PExponent(p));
    const double factor = std::pow(2.0, p - 1.0);
    for (int i = 0; i < lap.size(); ++i) {
      CHECK(lap2[i] == doctest::Approx(factor * lap[i]).epsilon(1e-12));
    }
  }
}
