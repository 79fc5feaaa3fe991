#pragma once

// Finite Fourier transforms of a density on (0, 1):
//   U(x) = int f(t) cos xt dt,   V(x) = int f(t) sin xt dt,
//   U'(x) = -int t f(t) sin xt dt,   V'(x) = int t f(t) cos xt dt,
//   U_s(x), V_s(x): the same transforms of f(1 - t).

#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

#include "oscilla/density.hpp"
#include "oscilla/quadrature.hpp"

namespace oscilla {

inline constexpr double kDefaultTol = 1e-10;

enum class TransformKind { cosine, sine, d_cosine, d_sine, cosine_reflected, sine_reflected };

enum class Method { quadrature, closed_form, series };

std::string_view to_string(TransformKind k);
std::string_view to_string(Method m);

/// Accepts the tag names and the symbols U, V, U', V', U_s, V_s.
TransformKind kind_from_string(std::string_view name);

struct EvalResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  Method method = Method::quadrature;
};

/// The two evaluations of a reflected transform disagree by more than 10 tol.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Trig { cosine, sine };

/// int_0^1 g(t, 1 - t) trig(x t) dt, panelled at the kernel's half periods
/// and at the extra `cuts`.
EvalResult oscillatory_integral(const quad::Integrand& g, Trig trig, double x,
                                std::span<const double> cuts, double tol);

/// Transform value by quadrature. Requires x >= 0 and 1e-14 <= tol <= 1e-3.
EvalResult eval(const Density& d, TransformKind kind, double x, double tol = kDefaultTol);

/// Analytic value for the tabulated polynomial densities, otherwise empty.
std::optional<EvalResult> closed_form(const Density& d, TransformKind kind, double x);

/// int_0^1 t^n f(t) dt.
double moment(const Density& d, int n, double tol = kDefaultTol);

}  // namespace oscilla
