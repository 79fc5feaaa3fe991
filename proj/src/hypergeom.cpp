#include "oscilla/hypergeom.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace oscilla {

namespace {

__extension__ typedef __float128 quad_t;

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kQuadEps = 1.0e-33;
constexpr std::size_t kMaxTerms = 20000;

quad_t qabs(quad_t v) { return v < 0 ? -v : v; }

bool is_nonpositive_integer(double v) { return v <= 0.0 && v == std::floor(v); }

}  // namespace

EvalResult hyp_pfq(const HypSpec& spec, double tol) {
  const double z = spec.argument;
  if (!std::isfinite(z) || z > 0.0) {
    throw std::invalid_argument("hypergeometric argument must be finite and <= 0");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("series tolerance must be positive");
  for (double a : spec.numerator) {
    if (!std::isfinite(a)) throw std::invalid_argument("numerator parameter is not finite");
  }
  for (double b : spec.denominator) {
    if (!std::isfinite(b) || is_nonpositive_integer(b)) {
      std::ostringstream msg;
      msg << "denominator parameter " << b << " is a pole of the series";
      throw std::invalid_argument(msg.str());
    }
  }
  const double limit = 0.25 * kSeriesMaxX * kSeriesMaxX;
  if (-z > limit) {
    std::ostringstream msg;
    msg << "|z| = " << -z << " exceeds the series limit " << limit
        << "; cancellation cannot be certified";
    throw CancellationError(msg.str());
  }
  if (z == 0.0) return {1.0, 0.0, Method::series};

  quad_t sum = 1;
  quad_t term = 1;
  quad_t peak = 1;
  int small_run = 0;
  quad_t prev_abs = 1;
  std::size_t k = 0;
  for (; k < kMaxTerms; ++k) {
    quad_t num = static_cast<quad_t>(z);
    quad_t den = static_cast<quad_t>(k + 1);
    for (double a : spec.numerator) num *= static_cast<quad_t>(a) + static_cast<quad_t>(k);
    for (double b : spec.denominator) den *= static_cast<quad_t>(b) + static_cast<quad_t>(k);
    term = term * num / den;
    sum += term;
    const quad_t mag = qabs(term);
    peak = std::max(peak, mag);
    if (term == 0) break;
    const bool decreasing = mag < prev_abs;
    prev_abs = mag;
    if (decreasing && mag < static_cast<quad_t>(tol) * qabs(sum)) {
      if (++small_run >= 3) break;
    } else {
      small_run = 0;
    }
  }
  if (k == kMaxTerms) throw std::runtime_error("hypergeometric series did not terminate");
  const double value = static_cast<double>(sum);
  const double rounding = static_cast<double>(peak) * kQuadEps * static_cast<double>(k + 1);
  const double err = std::max(rounding, static_cast<double>(prev_abs)) + kEps * std::abs(value);
  return {value, err, Method::series};
}

EvalResult beta_series(double alpha, double beta, Trig kind, double x) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw std::invalid_argument("beta series requires alpha > 0 and beta > 0");
  }
  if (!(x > 0.0) || x > kSeriesMaxX) {
    std::ostringstream msg;
    msg << "x = " << x << " is outside the series regime (0, " << kSeriesMaxX
        << "]; use quadrature";
    throw RegimeError(msg.str());
  }
  const double s = alpha + beta;
  const double z = -0.25 * x * x;
  if (kind == Trig::cosine) {
    return hyp_pfq({{0.5 * beta, 0.5 * (beta + 1.0)}, {0.5, 0.5 * s, 0.5 * (s + 1.0)}, z});
  }
  const double pre = beta * x / s;
  EvalResult r =
      hyp_pfq({{0.5 * (beta + 1.0), 0.5 * (beta + 2.0)}, {1.5, 0.5 * (s + 1.0), 0.5 * (s + 2.0)}, z});
  r.value *= pre;
  r.abs_error_estimate *= std::abs(pre);
  return r;
}

EvalResult generalized_sine_integral(double a, double x) {
  if (!(a < 2.0)) throw std::invalid_argument("generalized sine integral requires a < 2");
  const double pre = std::pow(x, 2.0 - a) / (2.0 - a);
  EvalResult r = hyp_pfq({{0.5 * (2.0 - a)}, {1.5, 0.5 * (4.0 - a)}, -0.25 * x * x});
  r.value *= pre;
  r.abs_error_estimate *= std::abs(pre);
  return r;
}

EvalResult generalized_cosine_integral(double a, double x) {
  if (!(a < 1.0)) throw std::invalid_argument("generalized cosine integral requires a < 1");
  const double pre = std::pow(x, 1.0 - a) / (1.0 - a);
  EvalResult r = hyp_pfq({{0.5 * (1.0 - a)}, {0.5, 0.5 * (3.0 - a)}, -0.25 * x * x});
  r.value *= pre;
  r.abs_error_estimate *= std::abs(pre);
  return r;
}

}  // namespace oscilla
