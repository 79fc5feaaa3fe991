#include <cmath>
#include <random>

#include "doctest.h"
#include "oscilla/density.hpp"
#include "oscilla/quadrature.hpp"

using namespace oscilla;

namespace {

double integral(const Density& d) {
  return quad::integrate_unit([&](double t, double u) { return d.at(t, u); }, d.breakpoints(),
                              1e-12)
      .value;
}

// Region membership for the beta monotonicity/convexity quadrants.
bool in_C(double a, double b) { return (a >= 2 && b < 1) || (a > 2 && b == 1) || (a == 1 && b < 1); }
bool in_D(double a, double b) { return (a >= 1 && b < 1) || (a > 1 && b == 1); }

}  // namespace

TEST_CASE("uniform density") {
  const Density d = make_density(Family::beta, {1.0, 1.0});
  CHECK(d(0.3) == doctest::Approx(1.0));
  CHECK(d.shape().monotonicity == Monotonicity::constant);
  CHECK_FALSE(d.shape().general_case);
}

TEST_CASE("beta(3,1) is 3(1-t)^2, decreasing and convex") {
  const Density d = make_density(Family::beta, {3.0, 1.0});
  for (double t : {0.1, 0.5, 0.9}) CHECK(d(t) == doctest::Approx(3.0 * (1 - t) * (1 - t)));
  CHECK(d.shape().decreasing());
  CHECK(d.shape().strictly_convex());
  CHECK(d.shape().f_at_1 == 0.0);
}

TEST_CASE("kuttner(2,1) is 1-t^2, decreasing and concave") {
  const Density d = make_density(Family::kuttner, {2.0, 1.0});
  for (double t : {0.1, 0.5, 0.9}) CHECK(d(t) == doctest::Approx(1 - t * t));
  CHECK(d.shape().decreasing());
  CHECK(d.shape().strictly_concave());
  REQUIRE(d.shape().neg_deriv_at_0);
  CHECK(*d.shape().neg_deriv_at_0 == 0.0);
  REQUIRE(d.shape().deriv_shape);
  CHECK(d.shape().deriv_shape->increasing());
  CHECK(d.shape().deriv_shape->weakly_convex());
}

TEST_CASE("beta(0.5,2) is increasing by a sign scan of f'") {
  const Density d = make_density(Family::beta, {0.5, 2.0});
  // Oracle: finite-difference sign scan on 10^4 points.
  int negative = 0;
  for (int i = 1; i < 10000; ++i) {
    const double t0 = (i - 0.5) / 10000.0;
    const double t1 = (i + 0.5) / 10000.0;
    if (d(t1) - d(t0) < 0) ++negative;
  }
  CHECK(negative == 0);
  CHECK(d.shape().increasing());
}

TEST_CASE("beta(1,0.5) is decreasing and convex") {
  const Density d = make_density(Family::beta, {1.0, 0.5});
  CHECK(d.shape().decreasing());
  CHECK(d.shape().strictly_convex());
  CHECK(std::isinf(d.shape().f_at_0));
}

TEST_CASE("parameter bounds are enforced") {
  CHECK_THROWS_AS(make_density(Family::beta, {0.0, 1.0}), DensityError);
  CHECK_THROWS_AS(make_density(Family::kuttner, {1.0, -1.0}), DensityError);
  CHECK_THROWS_AS(make_density(Family::gegenbauer, {-0.5}), DensityError);
  CHECK_THROWS_AS(make_density(Family::power, {1.0}), NonIntegrableError);
  CHECK_THROWS_AS(make_density(Family::power, {1.5}), NonIntegrableError);
  CHECK_THROWS_AS(make_piecewise_constant({0.0, 0.6, 0.4, 1.0}, {1, 2, 3}), DensityError);
  CHECK_THROWS_AS(make_piecewise_constant({0.0, 1.0}, {-1.0}), DensityError);
}

TEST_CASE("reflection") {
  SUBCASE("beta reflects to beta with swapped parameters") {
    const Density d = make_density(Family::beta, {0.7, 2.5});
    const Density r = reflect(d);
    const Density swapped = make_density(Family::beta, {2.5, 0.7});
    for (int i = 1; i < 100; ++i) {
      const double t = i / 100.0;
      CHECK(r(t) == doctest::Approx(swapped(t)).epsilon(1e-13));
    }
    CHECK(r.shape().monotonicity == swapped.shape().monotonicity);
    CHECK(r.describe() == "beta:2.5,0.7");
  }
  SUBCASE("double reflection is the identity bit for bit") {
    for (const Density& d :
         {make_density(Family::beta, {0.3, 1.7}), make_density(Family::kuttner, {2.5, 0.5}),
          make_density(Family::power, {0.5}), make_density(Family::gegenbauer, {0.25}),
          make_piecewise_constant({0.0, 0.25, 1.0}, {1.0, 3.0})}) {
      const Density rr = reflect(reflect(d));
      for (int i = 1; i < 1000; ++i) {
        const double t = i / 1000.0;
        CHECK(rr(t) == d(t));
      }
      CHECK(rr.describe() == d.describe());
    }
  }
  SUBCASE("uniform is symmetric") {
    const Density d = make_density(Family::beta, {1.0, 1.0});
    const Density r = reflect(d);
    for (int i = 1; i < 100; ++i) CHECK(r(i / 100.0) == doctest::Approx(1.0));
  }
  SUBCASE("shape flags transform") {
    const Density d = make_density(Family::kuttner, {2.0, 1.0});
    const Density r = reflect(d);
    CHECK(r.shape().increasing());
    CHECK(r.shape().convexity == d.shape().convexity);
    CHECK(r.shape().f_at_0 == d.shape().f_at_1);
    CHECK(r.shape().f_at_1 == d.shape().f_at_0);
    CHECK(r.shape().general_case == d.shape().general_case);
  }
}

TEST_CASE("random parameter draws give positive densities") {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> ab(0.05, 6.0);
  std::uniform_real_distribution<double> pw(0.01, 0.99);
  std::uniform_real_distribution<double> nu(-0.45, 4.0);
  for (int draw = 0; draw < 1000; ++draw) {
    const Density ds[] = {make_density(Family::beta, {ab(rng), ab(rng)}),
                          make_density(Family::kuttner, {ab(rng), ab(rng)}),
                          make_density(Family::power, {pw(rng)}),
                          make_density(Family::gegenbauer, {nu(rng)})};
    for (const Density& d : ds) {
      bool ok = true;
      for (int i = 0; i < 1000; ++i) {
        const double v = d((i + 0.5) / 1000.0);
        ok = ok && v > 0.0 && std::isfinite(v);
      }
      CHECK_MESSAGE(ok, d.describe());
    }
  }
}

TEST_CASE("beta densities are normalized") {
  for (auto [a, b] : {std::pair{0.5, 2.0}, {1.0, 0.5}, {3.0, 0.5}, {0.2, 0.3}, {4.0, 4.0},
                      {0.05, 1.0}}) {
    const Density d = make_density(Family::beta, {a, b});
    CHECK_MESSAGE(std::abs(integral(d) - 1.0) < 1e-10, d.describe());
  }
}

TEST_CASE("beta shapes agree with the monotonicity regions") {
  for (int i = 1; i <= 40; ++i) {
    for (int j = 1; j <= 40; ++j) {
      const double a = i / 10.0;
      const double b = j / 10.0;
      const ShapeReport s = make_density(Family::beta, {a, b}).shape();
      if (in_C(a, b)) {
        CHECK(s.decreasing());
        CHECK(s.strictly_convex());
      }
      if (in_D(a, b)) CHECK(s.decreasing());
      if (in_C(b, a)) {
        CHECK(s.increasing());
        CHECK(s.strictly_convex());
      }
      if (in_D(b, a)) CHECK(s.increasing());
      CHECK(s.f_at_0 >= 0.0);
      CHECK(s.f_at_1 >= 0.0);
      if (s.neg_deriv_at_0) CHECK(*s.neg_deriv_at_0 >= 0.0);
    }
  }
}

TEST_CASE("beta shape matches a numerical sign scan") {
  for (auto [a, b] : {std::pair{0.5, 2.0}, {1.5, 1.0}, {3.0, 0.5}, {2.5, 2.5}, {1.2, 0.7},
                      {0.8, 0.4}}) {
    const Density d = make_density(Family::beta, {a, b});
    const ShapeReport numeric = infer_shape([&](double t) { return d(t); });
    CHECK_MESSAGE(numeric.monotonicity == d.shape().monotonicity, d.describe());
    CHECK_MESSAGE(numeric.convexity == d.shape().convexity, d.describe());
  }
}

TEST_CASE("kuttner and gegenbauer shapes") {
  CHECK(make_density(Family::kuttner, {0.5, 1.5}).shape().strictly_convex());
  CHECK(make_density(Family::kuttner, {3.0, 0.5}).shape().strictly_concave());
  CHECK(std::isinf(*make_density(Family::kuttner, {0.5, 1.0}).shape().neg_deriv_at_0));
  CHECK(*make_density(Family::kuttner, {1.0, 2.0}).shape().neg_deriv_at_0 == 2.0);
  const ShapeReport g = make_density(Family::gegenbauer, {1.0}).shape();
  CHECK(g.decreasing());
  CHECK(g.strictly_concave());
  CHECK(g.deriv_shape->increasing());
  CHECK(g.deriv_shape->strictly_convex());
  CHECK(make_density(Family::gegenbauer, {0.0}).shape().increasing());
  CHECK_FALSE(make_density(Family::gegenbauer, {0.5}).shape().general_case);
}

TEST_CASE("power density") {
  const Density d = make_density(Family::power, {0.5});
  CHECK(d(0.25) == doctest::Approx(2.0));
  CHECK(d.shape().decreasing());
  CHECK(d.shape().strictly_convex());
  CHECK(std::isinf(d.shape().f_at_0));
}

TEST_CASE("piecewise constant densities") {
  const Density general = make_piecewise_constant({0.0, 0.5, 1.0}, {1.0, 2.0});
  CHECK(general.shape().general_case);
  CHECK(general.shape().increasing());
  CHECK(general(0.25) == 1.0);
  CHECK(general(0.75) == 2.0);
  CHECK(integral(general) == doctest::Approx(1.5));

  const Density rational = make_piecewise_constant_rational({{0, 1}, {1, 2}, {1, 1}}, {1.0, 2.0});
  CHECK_FALSE(rational.shape().general_case);
  CHECK(rational.shape().monotonicity == Monotonicity::neither);
}

TEST_CASE("custom densities are inferred numerically") {
  const Density d = make_custom([](double t) { return 1.0 + t * t; }, true);
  CHECK(d.shape().numerically_inferred);
  CHECK(d.shape().increasing());
  CHECK(d.shape().strictly_convex());
  CHECK(d.shape().f_at_0 == doctest::Approx(1.0));
  CHECK(d.shape().f_at_1 == doctest::Approx(2.0));

  const Density wiggly =
      make_custom([](double t) { return 2.0 + std::sin(2.0 * 3.141592653589793 * 10000.0 * t + 0.3); }, true);
  CHECK(wiggly.shape().monotonicity == Monotonicity::neither);
  CHECK(wiggly.shape().convexity == Convexity::neither);

  CHECK_THROWS_AS(make_custom([](double t) { return t - 0.5; }, true), DensityError);
}

TEST_CASE("spec strings") {
  CHECK(parse_density_spec("beta:0.5,2").describe() == "beta:0.5,2");
  CHECK(parse_density_spec("kuttner:2,1").family() == Family::kuttner);
  CHECK(parse_density_spec("power:0.5").params().at(0) == 0.5);
  CHECK(parse_density_spec("gegenbauer:0.25").family() == Family::gegenbauer);
  CHECK_FALSE(parse_density_spec("piecewise_constant:0,1/3,1;1,2").shape().general_case);
  CHECK(parse_density_spec("piecewise_constant:0,0.3,1;1,2").shape().general_case);
  CHECK(parse_density_spec("reflect:kuttner:2,1").shape().increasing());
  CHECK_THROWS_AS(parse_density_spec("beta:1"), DensityError);
  CHECK_THROWS_AS(parse_density_spec("gamma:1,2"), DensityError);
  CHECK_THROWS_AS(parse_density_spec("beta:x,2"), DensityError);
}
