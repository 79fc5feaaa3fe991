#pragma once

// Zero isolation and certification for real functions on (0, inf), the
// sigma_k lattice (positive roots of tan x = x), and verification of
// k-indexed interval predictions against a transform.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oscilla/density.hpp"
#include "oscilla/transform.hpp"

namespace oscilla {

using RealFunction = std::function<double(double)>;

struct ZeroRecord {
  double lo = 0.0;
  double hi = 0.0;
  double abscissa = 0.0;
  double residual = 0.0;
  bool simple = false;
};

/// F returned a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, double where)
      : std::runtime_error(what), where_(where) {}
  double where() const noexcept { return where_; }

 private:
  double where_;
};

inline constexpr double kRootTol = 1e-12;
inline constexpr double kSimplicityStep = 1e-7;
inline constexpr double kSlopeFloor = 1e-6;

/// One record per sign change of F on a uniform grid of `grid_points` points
/// over [lo, hi], refined to a bracket of width <= tol. Sorted ascending.
std::vector<ZeroRecord> scan_and_refine(const RealFunction& F, double lo, double hi,
                                        int grid_points, double tol = kRootTol);

/// sigma_1, ..., sigma_kmax: the roots of sin x - x cos x in (k pi, (k + 1/2) pi).
std::vector<double> sigma_roots(int k_max);

enum class Expectation { exactly_one, at_least_one, none_here, exact_zero_at };

std::string_view to_string(Expectation e);

struct PredictionItem {
  std::string description;
  std::function<std::pair<double, double>(int)> interval;
  std::function<double(int)> point;  // for exact_zero_at
  Expectation expectation = Expectation::exactly_one;
  int k_first = 1;
  int k_last = -1;  // -1: up to the prediction's k_max
};

/// sign * F > 0 on (lo, hi] (or >= 0 when not strict); hi = +inf means the
/// verification horizon.
struct SignClaim {
  double lo = 0.0;
  double hi = 0.0;
  int sign = 1;
  bool strict = true;
  std::string description;
};

struct Prediction {
  std::string source;
  std::vector<PredictionItem> items;
  std::vector<SignClaim> sign_claims;
  int k_max = 20;
  /// No zeros outside the predicted intervals.
  bool exclusive = false;
  /// At least one sign change somewhere in (0, inf).
  bool expects_sign_change = false;

  bool empty() const { return items.empty() && sign_claims.empty() && !expects_sign_change; }
  double horizon() const;
};

enum class Outcome { pass, fail, indeterminate };

std::string_view to_string(Outcome o);

struct IntervalOutcome {
  std::string item;
  int k = 0;
  double lo = 0.0;
  double hi = 0.0;
  Expectation expected = Expectation::exactly_one;
  int found = 0;
  std::vector<ZeroRecord> records;
  Outcome outcome = Outcome::pass;
};

struct Violation {
  int k = 0;
  double lo = 0.0;
  double hi = 0.0;
  std::string expected;
  int found = 0;
  std::string detail;
};

struct VerificationReport {
  std::vector<IntervalOutcome> intervals;
  std::optional<Outcome> sign_outcome;
  std::vector<ZeroRecord> zeros;  // every zero found up to the scan limit
  std::vector<Violation> violations;
  std::vector<std::string> indeterminate;
  double horizon = 0.0;
  bool pass = true;

  Outcome status() const;
};

struct VerifyOptions {
  double tol = kDefaultTol;
  int grid_per_pi = 64;
};

VerificationReport verify_function(const RealFunction& F, const Prediction& pred,
                                   const VerifyOptions& opts = {});

VerificationReport verify_pattern(const Density& d, TransformKind kind, const Prediction& pred,
                                  double tol = kDefaultTol);

/// True iff, over the overlapping range, the merged sequence alternates
/// between the two lists. Each list must be strictly increasing.
bool interlace_check(const std::vector<double>& zeros_a, const std::vector<double>& zeros_b);

}  // namespace oscilla
