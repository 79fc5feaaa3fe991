#pragma once

// Generalized hypergeometric series pFq(a; b; z) for real z <= 0, and the
// series forms of the beta-density transforms built from them.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "oscilla/transform.hpp"

namespace oscilla {

/// Largest x for which the beta series are used; the argument limit of
/// hyp_pfq is kSeriesMaxX^2 / 4.
inline constexpr double kSeriesMaxX = 40.0;

struct HypSpec {
  std::vector<double> numerator;    // a_1, ..., a_p
  std::vector<double> denominator;  // b_1, ..., b_q
  double argument = 0.0;            // z
};

/// |z| is past the point where the alternating series can be summed with a
/// certified relative error.
class CancellationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// x lies outside the series regime; quadrature must be used instead.
class RegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The first n terms z^k prod (a_i)_k / (prod (b_j)_k k!) generated by the
/// ratio recurrence, in any field T.
template <class T>
std::vector<T> pfq_terms(const std::vector<T>& a, const std::vector<T>& b, const T& z,
                         std::size_t n) {
  std::vector<T> terms;
  terms.reserve(n);
  T term = T(1);
  for (std::size_t k = 0; k < n; ++k) {
    terms.push_back(term);
    T num = z;
    T den = T(static_cast<long>(k + 1));
    for (const T& ai : a) num *= ai + T(static_cast<long>(k));
    for (const T& bj : b) den *= bj + T(static_cast<long>(k));
    term = term * num / den;
  }
  return terms;
}

/// Sum of the series, truncated once three consecutive decreasing terms fall
/// below tol |sum|. Terms are accumulated in 113-bit precision.
EvalResult hyp_pfq(const HypSpec& spec, double tol = 1e-17);

/// Phi(x) (cosine) or Psi(x) (sine) for the beta(alpha, beta) density via the
/// 2F3 representations. Requires 0 < x <= kSeriesMaxX.
EvalResult beta_series(double alpha, double beta, Trig kind, double x);

/// x^(1-a) int_0^1 t^-a sin xt dt = x^(2-a)/(2-a) 1F2((2-a)/2; 3/2, (4-a)/2; -x^2/4).
EvalResult generalized_sine_integral(double a, double x);

/// x^(1-a) int_0^1 t^-a cos xt dt = x^(1-a)/(1-a) 1F2((1-a)/2; 1/2, (3-a)/2; -x^2/4).
EvalResult generalized_cosine_integral(double a, double x);

}  // namespace oscilla
