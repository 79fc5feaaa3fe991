#pragma once

// Parameter-region classification for the beta family, the zero patterns each
// region (or density shape) implies, the Kuttner / Lommel / Williamson /
// Steinerberger tables, and grid sweeps that verify the patterns cell by cell.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "oscilla/density.hpp"
#include "oscilla/zeros.hpp"

namespace oscilla {

enum class RegionTag {
  Pc,
  Ps_minus_Pc,
  Pc_star,
  Ps_star_minus_Pc_star,
  mono_C,
  mono_D,
  mono_C_star,
  mono_D_star,
  concave_strip,
  diagonal,
  sign_change_zone,
  excluded_point,
  unknown
};

std::string_view to_string(RegionTag t);
RegionTag region_from_string(std::string_view name);

struct RegionLabel {
  RegionTag tag = RegionTag::unknown;
  /// Every other region containing the point, in precedence order.
  std::vector<RegionTag> secondary;
  std::string provenance;
  double alpha = 0.0;
  double beta = 0.0;
};

/// No prediction exists for the label.
class NoPredictionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Precedence: exact excluded points, positivity regions (strongest first),
/// monotonicity regions, diagonal, sign-change zone, unknown.
RegionLabel classify_beta_params(double alpha, double beta);

bool in_Pc(double alpha, double beta);
bool in_Ps(double alpha, double beta);
bool in_Pc_star(double alpha, double beta);
bool in_Ps_star(double alpha, double beta);

/// Predictions for the cosine (first) and sine (second) transforms, plus
/// optional derivative patterns.
struct PredictionPair {
  Prediction cosine;
  Prediction sine;
  std::optional<Prediction> d_cosine;
  std::optional<Prediction> d_sine;
  /// The two transforms share no positive zero.
  bool no_common_zeros = false;

  bool empty() const { return cosine.empty() && sine.empty(); }
};

/// Region consequences for Phi, Psi of beta(label.alpha, label.beta). For each
/// transform the first tag (primary, then secondary) that says something wins.
PredictionPair predict(const RegionLabel& label, int k_max = 20);

/// Rule table keyed on monotonicity, convexity, endpoint limits and the shape
/// of -f'. Returns empty predictions when no rule applies.
PredictionPair predict_from_shape(const ShapeReport& s, int k_max = 20);

/// Prediction for Omega = cosine transform of (1 - t^delta)^lambda.
Prediction kuttner_predict(double delta, double lambda, int k_max = 20);

/// s_{mu,1/2} as a positive multiple of a beta(alpha, 1) transform.
struct LommelPrediction {
  double alpha = 0.0;
  TransformKind kind = TransformKind::cosine;
  Prediction prediction;
};
LommelPrediction lommel_predict(double mu, int k_max = 20);

/// Prediction for Psi_alpha = sine transform of beta(alpha, 2).
Prediction williamson_predict(double alpha, int k_max = 20);

/// a_k = S_beta((k - 1/2) pi) with S_beta = 1F2((1+beta)/2; 3/2, (3+beta)/2; -x^2/4).
struct SteinerbergerTerm {
  int k = 0;
  double value = 0.0;
  double abs_error_estimate = 0.0;
  /// +1 or -1; 0 when |a_k| < 10 tol.
  int sign = 0;
};
double steinerberger_value(double beta, double x, double tol = kDefaultTol);
std::vector<SteinerbergerTerm> steinerberger_signs(double beta, int k_max,
                                                   double tol = kDefaultTol);

/// Known sign pattern for a_k, or empty where no result decides it
/// (5/3 < beta < 2).
std::optional<int> steinerberger_expected_sign(double beta, int k);

/// Minimum over the refined zeros of each transform of |other transform|.
double min_cross_residual(const Density& d, const std::vector<ZeroRecord>& cosine_zeros,
                          const std::vector<ZeroRecord>& sine_zeros, double tol = kDefaultTol);

inline constexpr double kCommonZeroFloor = 1e-6;

struct AtlasViolation {
  std::string transform;
  int k = 0;
  double lo = 0.0;
  double hi = 0.0;
  std::string expected;
  int found = 0;
};

struct AtlasRecord {
  double alpha = 0.0;
  double beta = 0.0;
  RegionTag label = RegionTag::unknown;
  int k_max = 0;
  bool pass = true;
  /// pass, fail, indeterminate, unclassified or error.
  std::string status;
  std::vector<AtlasViolation> violations;
  std::vector<std::string> notes;
  double horizon = 0.0;
};

/// Classify, predict and verify one cell. Errors are captured in the record.
AtlasRecord verify_cell(double alpha, double beta, int k_max, double tol = kDefaultTol);

struct SweepOptions {
  int k_max = 10;
  double tol = kDefaultTol;
  /// 0: hardware concurrency.
  unsigned jobs = 0;
  /// Called once per record in (alpha, beta) order as soon as all earlier
  /// records are done.
  std::function<void(const AtlasRecord&)> on_record;
};

/// Records ordered by (alpha, beta).
std::vector<AtlasRecord> sweep(const std::vector<double>& alpha_grid,
                               const std::vector<double>& beta_grid, const SweepOptions& opts);

/// lo, lo + step, ..., up to hi inclusive, snapped to 1e-12 so decimal grids
/// hit exact boundary values.
std::vector<double> parse_grid(std::string_view lo_hi_step);

std::string to_json(const AtlasRecord& r);
std::string csv_header();
std::string to_csv(const AtlasRecord& r);

}  // namespace oscilla
