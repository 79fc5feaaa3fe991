#include "oscilla/partial_fractions.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "oscilla/quadrature.hpp"

namespace oscilla {

namespace {

constexpr double kPi = std::numbers::pi;

double sign_k(int k) { return (k % 2) ? -1.0 : 1.0; }

// sin x / x and its derivative, stable near 0.
double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double sinc_prime(double x) {
  if (std::abs(x) < 0.1) {
    const double x2 = x * x;
    return x * (-1.0 / 3.0 + x2 * (1.0 / 30.0 + x2 * (-1.0 / 840.0 + x2 / 45360.0)));
  }
  return (x * std::cos(x) - std::sin(x)) / (x * x);
}

}  // namespace

std::string_view to_string(Expansion e) {
  switch (e) {
    case Expansion::pe1: return "pe1";
    case Expansion::pe2: return "pe2";
    case Expansion::pe3: return "pe3";
  }
  return "pe1";
}

std::string_view to_string(WronskianPair p) {
  switch (p) {
    case WronskianPair::u_sinc: return "u_sinc";
    case WronskianPair::u_cos: return "u_cos";
    case WronskianPair::v_sin: return "v_sin";
  }
  return "u_sinc";
}

double LatticeCoefficients::pole(int k) const {
  return kind == Expansion::pe2 ? (k - 0.5) * kPi : k * kPi;
}

LatticeCoefficients sample_lattice(const Density& d, Expansion kind, int N, double tol) {
  if (N < 1) throw std::invalid_argument("lattice truncation N must be >= 1");
  LatticeCoefficients c;
  c.kind = kind;
  c.values.resize(static_cast<std::size_t>(N) + 1);
  const TransformKind tk = kind == Expansion::pe3 ? TransformKind::sine : TransformKind::cosine;
  c.values[0] = kind == Expansion::pe3 ? moment(d, 1, tol) : moment(d, 0, tol);
  for (int k = 1; k <= N; ++k) {
    c.values[static_cast<std::size_t>(k)] = eval(d, tk, c.pole(k), tol).value;
  }
  return c;
}

double pf_partial_sum(const LatticeCoefficients& coeffs, double z) {
  auto guard = [&](double pole) {
    if (std::abs(z - pole) <= kPoleGuard || std::abs(z + pole) <= kPoleGuard) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "z = " << z << " lies within " << kPoleGuard << " of the pole " << pole;
      throw PoleProximityError(msg.str());
    }
  };
  guard(0.0);
  quad::CompensatedSum s;
  s.add(coeffs.values[0] / z);
  for (int k = 1; k <= coeffs.N(); ++k) {
    const double a = coeffs.pole(k);
    guard(a);
    const double w = coeffs.kind == Expansion::pe1 ? 1.0 : 1.0 / a;
    s.add(sign_k(k) * w * coeffs.values[static_cast<std::size_t>(k)] *
          (1.0 / (z - a) + 1.0 / (z + a)));
  }
  return s.value();
}

double wronskian_series(const LatticeCoefficients& coeffs, double x) {
  quad::CompensatedSum s;
  for (int k = 1; k <= coeffs.N(); ++k) {
    const double a = coeffs.pole(k);
    const double q = x * x - a * a;
    const double c = sign_k(k) * coeffs.values[static_cast<std::size_t>(k)];
    const double num = coeffs.kind == Expansion::pe1 ? a * a : a;
    s.add(c * num / (q * q));
  }
  switch (coeffs.kind) {
    case Expansion::pe1: {
      // 4 sin^2 x / x, written as 4 x sinc(x)^2 so that x = 0 is finite.
      const double sc = sinc(x);
      return 4.0 * x * sc * sc * s.value();
    }
    case Expansion::pe2: {
      const double c = std::cos(x);
      return 4.0 * x * c * c * s.value();
    }
    case Expansion::pe3: {
      const double sn = std::sin(x);
      return 4.0 * x * sn * sn * s.value();
    }
  }
  return 0.0;
}

double wronskian_direct(const Density& d, WronskianPair pair, double x, double tol) {
  if (!(x > 0.0)) throw std::invalid_argument("Wronskian argument must be positive");
  switch (pair) {
    case WronskianPair::u_sinc: {
      const double u = eval(d, TransformKind::cosine, x, tol).value;
      const double du = eval(d, TransformKind::d_cosine, x, tol).value;
      return u * sinc_prime(x) - du * sinc(x);
    }
    case WronskianPair::u_cos: {
      const double u = eval(d, TransformKind::cosine, x, tol).value;
      const double du = eval(d, TransformKind::d_cosine, x, tol).value;
      return -u * std::sin(x) - du * std::cos(x);
    }
    case WronskianPair::v_sin: {
      const double v = eval(d, TransformKind::sine, x, tol).value;
      const double dv = eval(d, TransformKind::d_sine, x, tol).value;
      return v * std::cos(x) - dv * std::sin(x);
    }
  }
  return 0.0;
}

}  // namespace oscilla
