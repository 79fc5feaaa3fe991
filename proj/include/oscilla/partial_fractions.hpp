#pragma once

// Truncated Hurwitz-Polya partial-fraction expansions
//   U(z)/sin z, U(z)/(z cos z), V(z)/(z sin z)
// and the Wronskian series derived from them, plus Wronskians computed
// directly from transform values.

#include <stdexcept>
#include <string_view>
#include <vector>

#include "oscilla/density.hpp"
#include "oscilla/transform.hpp"

namespace oscilla {

/// pe1: poles at k pi, c_k = U(k pi).
/// pe2: poles at (k - 1/2) pi, c_0 = U(0), c_k = U((k - 1/2) pi).
/// pe3: poles at k pi, c_0 = V'(0), c_k = V(k pi).
enum class Expansion { pe1, pe2, pe3 };

std::string_view to_string(Expansion e);

struct LatticeCoefficients {
  Expansion kind = Expansion::pe1;
  std::vector<double> values;  // c_0, ..., c_N

  int N() const { return static_cast<int>(values.size()) - 1; }
  /// Position of the k-th pole, k >= 1.
  double pole(int k) const;
};

inline constexpr int kDefaultTruncation = 500;
inline constexpr double kPoleGuard = 1e-8;

class PoleProximityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

LatticeCoefficients sample_lattice(const Density& d, Expansion kind, int N,
                                   double tol = kDefaultTol);

/// S_N(z) = c_0/z + sum_k (-1)^k w_k c_k (1/(z - a_k) + 1/(z + a_k)), with
/// w_k = 1, 1/a_k, 1/a_k for pe1, pe2, pe3.
double pf_partial_sum(const LatticeCoefficients& coeffs, double z);

/// Truncated right-hand side of the Wronskian identity matching coeffs.kind:
///   pe1: W[U, sin x / x],  pe2: W[U, cos x],  pe3: W[V, sin x].
double wronskian_series(const LatticeCoefficients& coeffs, double x);

enum class WronskianPair { u_sinc, u_cos, v_sin };

std::string_view to_string(WronskianPair p);

/// W[f, g] = f g' - f' g for (f, g) = (U, sin x / x), (U, cos x), (V, sin x).
double wronskian_direct(const Density& d, WronskianPair pair, double x,
                        double tol = kDefaultTol);

}  // namespace oscilla
