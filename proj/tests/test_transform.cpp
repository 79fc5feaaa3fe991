#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oscilla/transform.hpp"

using namespace oscilla;

namespace {

constexpr double kPi = std::numbers::pi;

double cv1(double x) { return 2.0 * (std::sin(x) - x * std::cos(x)) / (x * x * x); }

// Brute-force midpoint rule with a fixed panel count.
double midpoint(const std::function<double(double)>& g, int panels) {
  double s = 0.0;
  double c = 0.0;
  const double h = 1.0 / panels;
  for (int i = 0; i < panels; ++i) {
    const double y = g((i + 0.5) * h) - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s * h;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) xs.push_back(lo * std::pow(hi / lo, i / (n - 1.0)));
  return xs;
}

}  // namespace

TEST_CASE("uniform cosine transform vanishes at pi") {
  const Density d = make_density(Family::beta, {1.0, 1.0});
  CHECK(std::abs(eval(d, TransformKind::cosine, kPi).value) < 1e-14);
}

TEST_CASE("kuttner(2,1) cosine transform matches the closed form") {
  const Density d = make_density(Family::kuttner, {2.0, 1.0});
  for (double x : {1.0, 5.0, 20.0}) {
    CHECK(std::abs(eval(d, TransformKind::cosine, x).value - cv1(x)) < 1e-12);
  }
}

TEST_CASE("beta(0.5,2) sine transform matches a midpoint oracle") {
  const Density d = make_density(Family::beta, {0.5, 2.0});
  // t = 1 - s^2 removes the (1-t)^(-1/2) factor: the integrand becomes
  // 2 t sin(t) / B(0.5, 2) with B(0.5, 2) = 4/3.
  const double oracle = midpoint(
      [](double s) {
        const double t = 1.0 - s * s;
        return 2.0 * t * std::sin(t) * 0.75;
      },
      1000000);
  CHECK(std::abs(eval(d, TransformKind::sine, 1.0).value - oracle) < 1e-8);
}

TEST_CASE("uniform derivative of the cosine transform at pi/2") {
  const Density d = make_density(Family::beta, {1.0, 1.0});
  // -int t sin(pi t / 2) dt = -4/pi^2.
  CHECK(std::abs(eval(d, TransformKind::d_cosine, kPi / 2).value + 4.0 / (kPi * kPi)) < 1e-13);
}

TEST_CASE("closed forms") {
  const Density k21 = make_density(Family::kuttner, {2.0, 1.0});
  const auto c = closed_form(k21, TransformKind::cosine, 2.0);
  REQUIRE(c);
  CHECK(c->method == Method::closed_form);
  CHECK(c->value == doctest::Approx((2 * std::sin(2.0) - 4 * std::cos(2.0)) / 8).epsilon(1e-14));

  const Density uniform = make_density(Family::beta, {1.0, 1.0});
  for (double x : {0.3, 2.0, 17.0}) {
    const auto s = closed_form(uniform, TransformKind::sine, x);
    REQUIRE(s);
    CHECK(s->value == doctest::Approx((1 - std::cos(x)) / x).epsilon(1e-14));
  }
  CHECK_FALSE(closed_form(make_density(Family::beta, {0.5, 2.0}), TransformKind::cosine, 1.0));
}

TEST_CASE("quadratic family closed form matches the printed formula") {
  const double a = 3.0;
  const double b = 2.0;
  const Density d = make_quadratic(a, b);
  for (double x : {0.5, 3.0, 11.0, 60.0}) {
    const double printed =
        (((a - b) * x * x + 2 * b) * std::sin(x) - 2 * b * x * std::cos(x)) / (x * x * x);
    CHECK(std::abs(closed_form(d, TransformKind::cosine, x)->value - printed) < 1e-13);
    CHECK(std::abs(eval(d, TransformKind::cosine, x).value - printed) < 1e-10);
  }
}

TEST_CASE("quadrature agrees with every closed form on (0, 100]") {
  std::vector<Density> ds{make_density(Family::beta, {1.0, 1.0}),
                          make_density(Family::beta, {2.0, 1.0}),
                          make_density(Family::beta, {1.0, 2.0}),
                          make_quadratic(1.0, 0.5)};
  for (double delta : {1.0, 2.0, 3.0, 4.0}) ds.push_back(make_density(Family::kuttner, {delta, 1.0}));
  const TransformKind kinds[] = {TransformKind::cosine, TransformKind::sine, TransformKind::d_cosine,
                                 TransformKind::d_sine, TransformKind::cosine_reflected,
                                 TransformKind::sine_reflected};
  for (const Density& d : ds) {
    for (TransformKind k : kinds) {
      for (double x : log_grid(1e-3, 100.0, 25)) {
        const double q = eval(d, k, x).value;
        const double c = closed_form(d, k, x)->value;
        CHECK_MESSAGE(std::abs(q - c) <= 1e-10, d.describe(), " ", to_string(k), " x=", x);
      }
    }
  }
}

TEST_CASE("reflection identity") {
  for (const Density& d :
       {make_density(Family::beta, {0.5, 2.0}), make_density(Family::beta, {0.3, 0.6}),
        make_density(Family::kuttner, {3.0, 0.5}), make_density(Family::power, {0.5}),
        make_piecewise_constant({0.0, 0.3, 1.0}, {1.0, 2.0})}) {
    for (double x : log_grid(1e-2, 100.0, 20)) {
      const double u = eval(d, TransformKind::cosine, x).value;
      const double v = eval(d, TransformKind::sine, x).value;
      const double us = eval(d, TransformKind::cosine_reflected, x).value;
      const double vs = eval(d, TransformKind::sine_reflected, x).value;
      CHECK(std::abs(us - (std::cos(x) * u + std::sin(x) * v)) <= 1e-9);
      CHECK(std::abs(vs - (std::sin(x) * u - std::cos(x) * v)) <= 1e-9);
    }
  }
}

TEST_CASE("reflected beta transform equals the swapped beta transform") {
  const Density d = make_density(Family::beta, {0.5, 2.0});
  const Density swapped = make_density(Family::beta, {2.0, 0.5});
  for (double x : {0.7, 4.0, 31.0}) {
    CHECK(std::abs(eval(d, TransformKind::cosine_reflected, x).value -
                   eval(swapped, TransformKind::cosine, x).value) < 1e-10);
  }
}

TEST_CASE("linearity under scaling") {
  const Density d1 = make_piecewise_constant({0.0, 0.4, 1.0}, {1.0, 3.0});
  const Density d3 = make_piecewise_constant({0.0, 0.4, 1.0}, {3.0, 9.0});
  for (double x : {0.5, 7.0, 40.0}) {
    const double a = eval(d1, TransformKind::cosine, x).value;
    const double b = eval(d3, TransformKind::cosine, x).value;
    CHECK(std::abs(3.0 * a - b) <= 1e-14 * std::max(1.0, std::abs(b)) * 8);
  }
}

TEST_CASE("small-x limits for beta densities") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> p(0.1, 4.0);
  for (int i = 0; i < 20; ++i) {
    const double a = p(rng);
    const double b = p(rng);
    const Density d = make_density(Family::beta, {a, b});
    const double x = 1e-4;
    CHECK(std::abs(eval(d, TransformKind::cosine, x).value - 1.0) < 1e-6);
    CHECK(std::abs(eval(d, TransformKind::sine, x).value / x - b / (a + b)) < 1e-6);
  }
}

TEST_CASE("Riemann-Lebesgue decay against the endpoint value") {
  // beta(1, b): f(1-) = b. The t = 0 end contributes O(x^-b), so b >= 2 or b = 1.
  for (double b : {1.0, 2.0, 3.0, 4.0}) {
    const Density d = make_density(Family::beta, {1.0, b});
    double worst = 0.0;
    for (double x = 50.0; x <= 500.0; x += 7.3) {
      const double u = eval(d, TransformKind::cosine, x).value;
      worst = std::max(worst, std::abs(u - b * std::sin(x) / x) * x * x);
    }
    // Next term of the expansion is f'(1-) cos x / x^2 with f'(1-) = b(b-1).
    CHECK(worst < 2.0 * b * (b - 1.0) + 1.0);
  }
}

TEST_CASE("sine kinds vanish at zero and arguments are validated") {
  const Density d = make_density(Family::beta, {0.5, 2.0});
  CHECK(eval(d, TransformKind::sine, 0.0).value == 0.0);
  CHECK(eval(d, TransformKind::d_cosine, 0.0).value == 0.0);
  CHECK(eval(d, TransformKind::cosine, 0.0).value == doctest::Approx(1.0));
  CHECK_THROWS_AS(eval(d, TransformKind::cosine, 1.0, 1e-15), std::invalid_argument);
  CHECK_THROWS_AS(eval(d, TransformKind::cosine, 1.0, 1e-2), std::invalid_argument);
  CHECK_THROWS_AS(eval(d, TransformKind::cosine, -1.0), std::invalid_argument);
}

TEST_CASE("kind names") {
  CHECK(kind_from_string("U") == TransformKind::cosine);
  CHECK(kind_from_string("V'") == TransformKind::d_sine);
  CHECK(kind_from_string("sine_reflected") == TransformKind::sine_reflected);
  CHECK_THROWS_AS(kind_from_string("W"), std::invalid_argument);
}

TEST_CASE("large x with endpoint singularities") {
  const Density d = make_density(Family::beta, {0.3, 0.4});
  const double x = 1000.0;
  const double oracle = midpoint(
      [&](double t) { return d(t) * std::cos(x * t); }, 4000000);
  // Midpoint rule is only accurate to the size of its endpoint cells here.
  CHECK(std::abs(eval(d, TransformKind::cosine, x).value - oracle) < 5e-2);
  const auto r = eval(d, TransformKind::cosine, x);
  CHECK(std::isfinite(r.value));
}
