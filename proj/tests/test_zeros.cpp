#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oscilla/zeros.hpp"

using namespace oscilla;

namespace {
constexpr double kPi = std::numbers::pi;

double bisect(const RealFunction& f, double a, double b, double tol) {
  double fa = f(a);
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

double tan_minus_x(double x) { return std::sin(x) - x * std::cos(x); }

// J0 from its power series; fine for x < 10.
double bessel_j0_series(double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= -(x * x / 4.0) / (double(k) * k);
    sum += term;
  }
  return sum;
}

PredictionItem band(std::string name, double a, double b,
                    Expectation e = Expectation::exactly_one) {
  PredictionItem item;
  item.description = std::move(name);
  item.interval = [a, b](int k) { return std::pair{(k + a) * kPi, (k + b) * kPi}; };
  item.expectation = e;
  return item;
}

Prediction single_band(double a, double b, int k_max) {
  Prediction p;
  p.source = "test";
  p.items.push_back(band("band", a, b));
  p.k_max = k_max;
  p.exclusive = true;
  return p;
}

std::vector<double> abscissae(const std::vector<ZeroRecord>& zs, double up_to) {
  std::vector<double> out;
  for (const auto& z : zs) {
    if (z.abscissa <= up_to) out.push_back(z.abscissa);
  }
  return out;
}
}  // namespace

TEST_CASE("scan_and_refine finds pi as the zero of sin on (2, 4)") {
  const auto zs = scan_and_refine([](double x) { return std::sin(x); }, 2.0, 4.0, 64);
  REQUIRE(zs.size() == 1);
  CHECK(std::abs(zs[0].abscissa - kPi) <= 1e-12);
  CHECK(zs[0].simple);
  CHECK(zs[0].lo < zs[0].abscissa);
  CHECK(zs[0].abscissa < zs[0].hi);
  CHECK(zs[0].residual <= 1e-12);
}

TEST_CASE("scan_and_refine on sin x - x cos x matches a bisection oracle") {
  const double oracle = bisect(tan_minus_x, kPi, 1.5 * kPi, 1e-13);
  const auto zs = scan_and_refine(tan_minus_x, kPi, 1.5 * kPi, 64);
  REQUIRE(zs.size() == 1);
  CHECK(std::abs(zs[0].abscissa - oracle) <= 1e-10);
  CHECK(std::abs(zs[0].abscissa - 4.493409457909064) <= 1e-10);
}

TEST_CASE("scan_and_refine argument checks and evaluation errors") {
  const RealFunction f = [](double x) { return std::cos(x); };
  CHECK_THROWS_AS(scan_and_refine(f, 2.0, 1.0, 64), std::invalid_argument);
  CHECK_THROWS_AS(scan_and_refine(f, 0.0, 1.0, 7), std::invalid_argument);
  const RealFunction bad = [](double x) { return x > 0.5 ? NAN : 1.0; };
  try {
    scan_and_refine(bad, 0.0, 1.0, 8);
    FAIL("expected an evaluation error");
  } catch (const EvaluationError& e) {
    CHECK(e.where() > 0.5);
  }
}

TEST_CASE("U of beta(0.5,2) has exactly one zero in (pi/2, pi)") {
  const Density d = make_density(Family::beta, {0.5, 2.0});
  const RealFunction u = [&d](double x) { return eval(d, TransformKind::cosine, x).value; };
  const auto coarse = scan_and_refine(u, 0.5 * kPi, kPi, 64);
  const auto fine = scan_and_refine(u, 0.5 * kPi, kPi, 128);
  REQUIRE(coarse.size() == 1);
  REQUIRE(fine.size() == 1);
  CHECK(coarse[0].simple);
  CHECK(std::abs(coarse[0].abscissa - fine[0].abscissa) <= 1e-11);
}

TEST_CASE("sigma roots") {
  const auto s = sigma_roots(20);
  REQUIRE(s.size() == 20);
  CHECK(std::abs(s[0] - 4.493409457909064) <= 1e-12);
  for (int k = 1; k <= 20; ++k) {
    const double x = s[static_cast<std::size_t>(k - 1)];
    CHECK(x > k * kPi);
    CHECK(x < (k + 0.5) * kPi);
    CHECK(std::abs(tan_minus_x(x)) <= 1e-12 * x);
    const double oracle = bisect(tan_minus_x, k * kPi, (k + 0.5) * kPi, 1e-13);
    CHECK(std::abs(x - oracle) <= 1e-11);
  }
  CHECK(std::abs(s[19] - 20.5 * kPi) < 1.0 / (20.0 * kPi));
  CHECK_THROWS_AS(sigma_roots(0), std::invalid_argument);
}

TEST_CASE("verify_pattern: beta(0.5,2) cosine zeros in ((k-1/2)pi, k pi)") {
  const Density d = make_density(Family::beta, {0.5, 2.0});
  const auto r = verify_pattern(d, TransformKind::cosine, single_band(-0.5, 0.0, 20));
  CHECK(r.pass);
  CHECK(r.status() == Outcome::pass);
  CHECK(r.horizon == doctest::Approx(21.0 * kPi));
  CHECK(r.intervals.size() == 20);
  for (const auto& io : r.intervals) CHECK(io.found == 1);

  // The same zeros interlace with the k pi lattice.
  std::vector<double> lattice;
  for (int k = 1; k <= 20; ++k) lattice.push_back(k * kPi);
  CHECK(interlace_check(abscissae(r.zeros, 20 * kPi), lattice));
}

TEST_CASE("verify_pattern: uniform cosine vanishes exactly at k pi") {
  const Density d = parse_density_spec("uniform");
  Prediction p;
  PredictionItem item;
  item.description = "sin x / x";
  item.point = [](int k) { return k * kPi; };
  item.expectation = Expectation::exact_zero_at;
  p.items.push_back(item);
  p.k_max = 20;
  const auto r = verify_pattern(d, TransformKind::cosine, p);
  CHECK(r.pass);
}

TEST_CASE("verify_pattern: beta(1.5,1) cosine, one zero per (k pi, (k+1) pi)") {
  const Density d = make_density(Family::beta, {1.5, 1.0});
  const auto r = verify_pattern(d, TransformKind::cosine, single_band(0.0, 1.0, 20));
  CHECK(r.pass);
}

TEST_CASE("verify_function reports a wrong prediction") {
  const RealFunction f = [](double x) { return std::cos(x); };
  const auto r = verify_function(f, single_band(0.0, 0.25, 5));
  CHECK_FALSE(r.pass);
  CHECK(r.status() == Outcome::fail);
  CHECK(r.violations.size() >= 5);
}

TEST_CASE("near-tangency is indeterminate, not a miss") {
  // Touches 1e-12 above zero at odd multiples of pi without changing sign.
  const RealFunction f = [](double x) { return 1.0 + std::cos(x) + 1e-12; };
  Prediction p;
  PredictionItem item;
  item.description = "around (2k-1) pi";
  item.interval = [](int k) { return std::pair{(2 * k - 1.5) * kPi, (2 * k - 0.5) * kPi}; };
  p.items.push_back(item);
  p.k_max = 3;
  const auto r = verify_function(f, p);
  CHECK(r.pass);
  CHECK(r.status() == Outcome::indeterminate);
}

TEST_CASE("sign claims") {
  Prediction p;
  p.k_max = 5;
  p.sign_claims.push_back({0.0, kPi - 0.1, 1, true, "sin > 0"});
  CHECK(verify_function([](double x) { return std::sin(x); }, p).pass);
  p.sign_claims.front().hi = INFINITY;
  const auto r = verify_function([](double x) { return std::sin(x); }, p);
  CHECK_FALSE(r.pass);
  REQUIRE(r.sign_outcome);
  CHECK(*r.sign_outcome == Outcome::fail);
}

TEST_CASE("interlace_check") {
  std::vector<double> sines;
  std::vector<double> cosines;
  for (int k = 1; k <= 20; ++k) {
    sines.push_back(k * kPi);
    cosines.push_back((k - 0.5) * kPi);
  }
  CHECK(interlace_check(sines, cosines));
  CHECK_FALSE(interlace_check({1.0, 2.0, 3.0}, {1.5, 1.6}));
  CHECK_THROWS_AS(interlace_check({2.0, 1.0}, {1.5}), std::invalid_argument);
}

TEST_CASE("determinism and grid-doubling stability") {
  const Density d = make_density(Family::beta, {0.5, 2.0});
  const RealFunction u = [&d](double x) { return eval(d, TransformKind::cosine, x).value; };
  const Prediction p = single_band(-0.5, 0.0, 10);
  const auto a = verify_function(u, p);
  const auto b = verify_function(u, p);
  REQUIRE(a.zeros.size() == b.zeros.size());
  for (std::size_t i = 0; i < a.zeros.size(); ++i) {
    CHECK(a.zeros[i].abscissa == b.zeros[i].abscissa);
    CHECK(a.zeros[i].residual == b.zeros[i].residual);
  }
  VerifyOptions fine;
  fine.grid_per_pi = 128;
  const auto c = verify_function(u, p, fine);
  CHECK(c.status() == a.status());
  CHECK(abscissae(c.zeros, p.horizon()).size() == abscissae(a.zeros, p.horizon()).size());
}

TEST_CASE("Bessel zeros of gegenbauer cosine transforms") {
  for (double nu : {-0.25, 0.0, 0.25}) {
    CAPTURE(nu);
    const Density d = make_density(Family::gegenbauer, {nu});
    const auto r = verify_pattern(d, TransformKind::cosine, single_band(-0.5, 0.0, 20));
    CHECK(r.pass);
    if (nu == 0.0) {
      const double oracle = bisect(bessel_j0_series, 2.0, 3.0, 1e-14);
      REQUIRE(!r.zeros.empty());
      CHECK(std::abs(r.zeros.front().abscissa - oracle) <= 1e-8);
      CHECK(std::abs(oracle - 2.404825557695773) <= 1e-12);
    }
  }
}

TEST_CASE("gegenbauer with 1/2 < nu < 3/2: cosine zeros in (k pi, sigma_k)") {
  const auto sigma = sigma_roots(21);
  for (double nu : {0.75, 1.0, 1.25}) {
    CAPTURE(nu);
    const Density d = make_density(Family::gegenbauer, {nu});
    Prediction p;
    PredictionItem item;
    item.description = "(k pi, sigma_k)";
    item.interval = [sigma](int k) {
      return std::pair{k * kPi, sigma[static_cast<std::size_t>(k - 1)]};
    };
    p.items.push_back(item);
    p.k_max = 20;
    p.exclusive = true;
    CHECK(verify_pattern(d, TransformKind::cosine, p).pass);
  }
}

TEST_CASE("U' of beta(1,3) has one zero in each (k pi, sigma_k)") {
  const auto sigma = sigma_roots(11);
  const Density d = make_density(Family::beta, {1.0, 3.0});
  Prediction p;
  PredictionItem item;
  item.description = "(k pi, sigma_k)";
  item.interval = [sigma](int k) {
    return std::pair{k * kPi, sigma[static_cast<std::size_t>(k - 1)]};
  };
  p.items.push_back(item);
  p.k_max = 10;
  p.exclusive = true;
  CHECK(verify_pattern(d, TransformKind::d_cosine, p).pass);
}

TEST_CASE("Struve pattern for the sine transform of gegenbauer(0)") {
  const Density d = make_density(Family::gegenbauer, {0.0});
  Prediction p;
  const std::pair<double, double> windows[] = {{1, 2}, {2, 2.5}, {3, 4}, {4, 4.5}};
  for (std::size_t i = 0; i < 4; ++i) {
    PredictionItem item;
    item.description = "window " + std::to_string(i + 1);
    const auto w = windows[i];
    item.interval = [w](int) { return std::pair{w.first * kPi, w.second * kPi}; };
    item.k_first = item.k_last = 1;
    p.items.push_back(item);
  }
  p.k_max = 4;
  CHECK(verify_pattern(d, TransformKind::sine, p).pass);
}
