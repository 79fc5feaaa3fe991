#include "oscilla/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace oscilla {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_args(double x, double tol) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument("transform argument x must be finite and nonnegative");
  }
  if (!(tol >= 1e-14 && tol <= 1e-3)) {
    throw std::invalid_argument("tolerance must lie in [1e-14, 1e-3]");
  }
}

bool sine_kernel(TransformKind k) {
  return k == TransformKind::sine || k == TransformKind::d_cosine ||
         k == TransformKind::sine_reflected;
}

// int t^n cos xt and int t^n sin xt over [0, 1] for n = 0..n_max.
void trig_moments(double x, int n_max, std::vector<double>& c, std::vector<double>& s) {
  c.assign(static_cast<std::size_t>(n_max + 1), 0.0);
  s.assign(static_cast<std::size_t>(n_max + 1), 0.0);
  if (x < 4.0) {
    // Power series; all terms are well scaled for small x.
    for (int n = 0; n <= n_max; ++n) {
      double cs = 0.0;
      double ss = 0.0;
      double pc = 1.0;  // x^(2k) / (2k)!
      double ps = x;    // x^(2k+1) / (2k+1)!
      for (int k = 0; k < 60; ++k) {
        const double sign = (k % 2) ? -1.0 : 1.0;
        cs += sign * pc / (n + 2 * k + 1);
        ss += sign * ps / (n + 2 * k + 2);
        pc *= x * x / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
        ps *= x * x / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
        if (pc < 1e-18 * std::abs(cs) && ps < 1e-18 * std::abs(ss) + 1e-300) break;
      }
      c[static_cast<std::size_t>(n)] = cs;
      s[static_cast<std::size_t>(n)] = ss;
    }
    return;
  }
  const double sx = std::sin(x);
  const double cx = std::cos(x);
  c[0] = sx / x;
  s[0] = (1.0 - cx) / x;
  for (int n = 1; n <= n_max; ++n) {
    const auto i = static_cast<std::size_t>(n);
    c[i] = sx / x - (n / x) * s[i - 1];
    s[i] = -cx / x + (n / x) * c[i - 1];
  }
}

EvalResult polynomial_transform(const std::vector<double>& coeffs, TransformKind kind,
                                double x) {
  std::vector<double> c;
  std::vector<double> s;
  trig_moments(x, static_cast<int>(coeffs.size()), c, s);
  double value = 0.0;
  double mag = 0.0;
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    double term = 0.0;
    switch (kind) {
      case TransformKind::cosine: term = coeffs[n] * c[n]; break;
      case TransformKind::sine: term = coeffs[n] * s[n]; break;
      case TransformKind::d_cosine: term = -coeffs[n] * s[n + 1]; break;
      case TransformKind::d_sine: term = coeffs[n] * c[n + 1]; break;
      default: break;
    }
    value += term;
    mag += std::abs(coeffs[n]);
  }
  return {value, 8.0 * kEps * std::max(mag, std::abs(value)), Method::closed_form};
}

std::vector<double> panel_cuts(double x, std::span<const double> extra) {
  std::vector<double> cuts(extra.begin(), extra.end());
  if (x > 0.0) {
    const double step = kPi / x;
    // A cut just short of 1 would leave the endpoint singularity outside the
    // double-exponential end panel.
    for (int j = 1; 1.0 - j * step > 0.25 * step; ++j) cuts.push_back(j * step);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  // Drop slivers that would leave a panel narrower than rounding noise.
  std::vector<double> kept;
  double last = 0.0;
  for (double c : cuts) {
    if (c - last > 1e-13 && 1.0 - c > 1e-13) {
      kept.push_back(c);
      last = c;
    }
  }
  return kept;
}

EvalResult direct(const Density& d, TransformKind kind, double x, double tol) {
  const auto& k = d.kernel();
  quad::Integrand g;
  Trig trig = Trig::cosine;
  switch (kind) {
    case TransformKind::cosine:
      g = k;
      break;
    case TransformKind::sine:
      g = k;
      trig = Trig::sine;
      break;
    case TransformKind::d_cosine:
      g = [&k](double t, double u) { return -t * k(t, u); };
      trig = Trig::sine;
      break;
    case TransformKind::d_sine:
      g = [&k](double t, double u) { return t * k(t, u); };
      break;
    case TransformKind::cosine_reflected:
      g = [&k](double t, double u) { return k(u, t); };
      break;
    case TransformKind::sine_reflected:
      g = [&k](double t, double u) { return k(u, t); };
      trig = Trig::sine;
      break;
  }
  std::vector<double> bps = d.breakpoints();
  if (kind == TransformKind::cosine_reflected || kind == TransformKind::sine_reflected) {
    for (double& b : bps) b = 1.0 - b;
    std::reverse(bps.begin(), bps.end());
  }
  return oscillatory_integral(g, trig, x, bps, tol);
}

}  // namespace

std::string_view to_string(TransformKind k) {
  switch (k) {
    case TransformKind::cosine: return "cosine";
    case TransformKind::sine: return "sine";
    case TransformKind::d_cosine: return "d_cosine";
    case TransformKind::d_sine: return "d_sine";
    case TransformKind::cosine_reflected: return "cosine_reflected";
    case TransformKind::sine_reflected: return "sine_reflected";
  }
  return "cosine";
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::quadrature: return "quadrature";
    case Method::closed_form: return "closed_form";
    case Method::series: return "series";
  }
  return "quadrature";
}

TransformKind kind_from_string(std::string_view name) {
  struct Alias {
    std::string_view name;
    TransformKind kind;
  };
  static constexpr Alias kAliases[] = {
      {"cosine", TransformKind::cosine},           {"U", TransformKind::cosine},
      {"sine", TransformKind::sine},               {"V", TransformKind::sine},
      {"d_cosine", TransformKind::d_cosine},       {"U'", TransformKind::d_cosine},
      {"d_sine", TransformKind::d_sine},           {"V'", TransformKind::d_sine},
      {"cosine_reflected", TransformKind::cosine_reflected},
      {"U_s", TransformKind::cosine_reflected},
      {"sine_reflected", TransformKind::sine_reflected},
      {"V_s", TransformKind::sine_reflected},
  };
  for (const auto& a : kAliases) {
    if (a.name == name) return a.kind;
  }
  throw std::invalid_argument("unknown transform kind '" + std::string(name) + "'");
}

EvalResult oscillatory_integral(const quad::Integrand& g, Trig trig, double x,
                                std::span<const double> cuts, double tol) {
  const std::vector<double> panels = panel_cuts(x, cuts);
  quad::Integrand h;
  if (trig == Trig::cosine) {
    h = [&g, x](double t, double u) {
      const double v = g(t, u);
      return v == 0.0 ? 0.0 : v * std::cos(x * t);
    };
  } else {
    h = [&g, x](double t, double u) {
      const double v = g(t, u);
      return v == 0.0 ? 0.0 : v * std::sin(x * t);
    };
  }
  const quad::Result r = quad::integrate_unit(h, panels, tol);
  return {r.value, r.abs_error, Method::quadrature};
}

EvalResult eval(const Density& d, TransformKind kind, double x, double tol) {
  check_args(x, tol);
  if (x == 0.0) {
    if (sine_kernel(kind)) return {0.0, 0.0, Method::closed_form};
    if (kind == TransformKind::d_sine) return {moment(d, 1, tol), tol, Method::quadrature};
    return {moment(d, 0, tol), tol, Method::quadrature};
  }
  if (kind != TransformKind::cosine_reflected && kind != TransformKind::sine_reflected) {
    return direct(d, kind, x, tol);
  }

  const EvalResult straight = direct(d, kind, x, tol);
  const EvalResult u = direct(d, TransformKind::cosine, x, tol);
  const EvalResult v = direct(d, TransformKind::sine, x, tol);
  const double c = std::cos(x);
  const double s = std::sin(x);
  const double via_identity =
      kind == TransformKind::cosine_reflected ? c * u.value + s * v.value : s * u.value - c * v.value;
  const double gap = std::abs(straight.value - via_identity);
  if (gap > 10.0 * tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << to_string(kind) << " of " << d.describe() << " at x = " << x
        << ": direct quadrature and reflection identity differ by " << gap;
    throw ConsistencyError(msg.str());
  }
  return {straight.value, std::max(straight.abs_error_estimate, gap), Method::quadrature};
}

std::optional<EvalResult> closed_form(const Density& d, TransformKind kind, double x) {
  if (!d.polynomial() || !(x > 0.0)) return std::nullopt;
  const auto& p = *d.polynomial();
  if (kind == TransformKind::cosine_reflected || kind == TransformKind::sine_reflected) {
    const EvalResult u = polynomial_transform(p, TransformKind::cosine, x);
    const EvalResult v = polynomial_transform(p, TransformKind::sine, x);
    const double c = std::cos(x);
    const double s = std::sin(x);
    const double value =
        kind == TransformKind::cosine_reflected ? c * u.value + s * v.value : s * u.value - c * v.value;
    return EvalResult{value, u.abs_error_estimate + v.abs_error_estimate, Method::closed_form};
  }
  return polynomial_transform(p, kind, x);
}

double moment(const Density& d, int n, double tol) {
  if (n < 0) throw std::invalid_argument("moment order must be nonnegative");
  if (d.family() == Family::beta && !d.reflected()) {
    // E[t^n] for the density u^(alpha-1) t^(beta-1) / B(alpha, beta).
    const double a = d.params()[0];
    const double b = d.params()[1];
    double m = 1.0;
    for (int j = 0; j < n; ++j) m *= (b + j) / (a + b + j);
    return m;
  }
  const auto& k = d.kernel();
  const auto r = quad::integrate_unit(
      [&k, n](double t, double u) { return std::pow(t, n) * k(t, u); }, d.breakpoints(), tol);
  return r.value;
}

}  // namespace oscilla
