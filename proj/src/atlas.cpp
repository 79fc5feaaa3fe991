#include "oscilla/atlas.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "oscilla/hypergeom.hpp"

namespace oscilla {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

using Window = std::function<std::pair<double, double>(int)>;

PredictionItem window_item(std::string description, Window w, int k_first = 1,
                           int k_last = -1) {
  PredictionItem item;
  item.description = std::move(description);
  item.interval = std::move(w);
  item.expectation = Expectation::exactly_one;
  item.k_first = k_first;
  item.k_last = k_last;
  return item;
}

// (k + a) pi .. (k + b) pi
PredictionItem band(std::string description, double a, double b) {
  return window_item(std::move(description),
                     [a, b](int k) { return std::pair{(k + a) * kPi, (k + b) * kPi}; });
}

PredictionItem exact_points(std::string description, std::function<double(int)> p) {
  PredictionItem item;
  item.description = std::move(description);
  item.point = std::move(p);
  item.expectation = Expectation::exact_zero_at;
  return item;
}

Prediction pattern(std::string source, int k_max, std::vector<PredictionItem> items) {
  Prediction p;
  p.source = std::move(source);
  p.k_max = k_max;
  p.items = std::move(items);
  p.exclusive = true;
  return p;
}

SignClaim positive_on(double hi, std::string description, int sign = 1, bool strict = true) {
  return {0.0, hi, sign, strict, std::move(description)};
}

Prediction positivity(std::string source, int k_max, double hi = kInf) {
  Prediction p;
  p.k_max = k_max;
  p.sign_claims.push_back(positive_on(hi, source));
  p.source = std::move(source);
  return p;
}

// One zero in ((2k-1) pi, 2k pi) and one in (2k pi, (2k + 1/2) pi), written
// as one window per j = 1, 2, ...
PredictionItem alternating_windows(std::string description) {
  return window_item(std::move(description), [](int j) {
    return j % 2 ? std::pair{j * kPi, (j + 1) * kPi} : std::pair{j * kPi, (j + 0.5) * kPi};
  });
}

// (pi/2, pi), then ((k + 1/2) pi, (k + 3/2) pi).
std::vector<PredictionItem> shifted_windows(const std::string& description) {
  return {window_item(description + " (first)",
                      [](int) { return std::pair{0.5 * kPi, kPi}; }, 1, 1),
          band(description, 0.5, 1.5)};
}

PredictionItem sigma_windows(std::string description, int k_max) {
  const std::vector<double> sigma = sigma_roots(k_max + 2);
  return window_item(std::move(description), [sigma](int k) {
    const auto i = static_cast<std::size_t>(k - 1);
    return std::pair{k * kPi, i < sigma.size() ? sigma[i] : (k + 0.5) * kPi};
  });
}

bool in_C(double a, double b) {
  return (a >= 2.0 && b > 0.0 && b < 1.0) || (a > 2.0 && b == 1.0) ||
         (a == 1.0 && b > 0.0 && b < 1.0);
}

bool in_D(double a, double b) { return (a >= 1.0 && b > 0.0 && b < 1.0) || (a > 1.0 && b == 1.0); }

bool is_excluded(double a, double b) {
  return (a == 1.0 && b == 1.0) || (a == 2.0 && b == 1.0) || (a == 1.0 && b == 2.0);
}

std::string provenance(RegionTag t) {
  switch (t) {
    case RegionTag::Pc: return "cosine and sine transforms positive";
    case RegionTag::Ps_minus_Pc: return "sine transform positive";
    case RegionTag::Pc_star: return "reflected density has positive cosine and sine transforms";
    case RegionTag::Ps_star_minus_Pc_star: return "reflected density has positive sine transform";
    case RegionTag::mono_C: return "decreasing and convex";
    case RegionTag::mono_D: return "decreasing";
    case RegionTag::mono_C_star: return "increasing and convex";
    case RegionTag::mono_D_star: return "increasing";
    case RegionTag::concave_strip: return "decreasing and concave";
    case RegionTag::diagonal: return "symmetric density";
    case RegionTag::sign_change_zone: return "both transforms change sign infinitely often";
    case RegionTag::excluded_point: return "boundary point excluded from the positivity regions";
    case RegionTag::unknown: return "no statement available";
  }
  return {};
}

PredictionPair tag_prediction(RegionTag tag, double a, double b, int k_max) {
  PredictionPair out;
  switch (tag) {
    case RegionTag::Pc:
      out.cosine = positivity("Phi > 0", k_max);
      out.sine = positivity("Psi > 0", k_max);
      break;
    case RegionTag::Ps_minus_Pc:
      out.sine = positivity("Psi > 0", k_max);
      break;
    case RegionTag::Pc_star:
      out.cosine = pattern("reflected positivity of both transforms", k_max,
                           {band("Phi zero in ((k-1/2)pi, k pi)", -0.5, 0.0)});
      out.sine = pattern("reflected positivity of both transforms", k_max,
                         {band("Psi zero in (k pi, (k+1/2)pi)", 0.0, 0.5)});
      out.no_common_zeros = true;
      break;
    case RegionTag::Ps_star_minus_Pc_star:
      out.cosine = pattern("reflected sine positivity", k_max,
                           {band("Phi zero in ((k-1/2)pi, (k+1/2)pi)", -0.5, 0.5)});
      out.sine = pattern("reflected sine positivity", k_max,
                         {band("Psi zero in (k pi, (k+1)pi)", 0.0, 1.0)});
      out.no_common_zeros = true;
      break;
    case RegionTag::concave_strip:
      out.cosine = pattern("decreasing concave density", k_max,
                           {band("Phi zero in (k pi, (k+1)pi)", 0.0, 1.0)});
      out.cosine.sign_claims.push_back(positive_on(kPi, "Phi > 0 on (0, pi]"));
      break;
    case RegionTag::mono_C:
    case RegionTag::mono_D:
    case RegionTag::mono_C_star:
    case RegionTag::mono_D_star:
      out = predict_from_shape(make_density(Family::beta, {a, b}).shape(), k_max);
      break;
    case RegionTag::diagonal:
      out.cosine = pattern("symmetric density", k_max,
                           {exact_points("Phi((2k-1)pi) = 0", [](int k) { return (2 * k - 1) * kPi; })});
      out.sine = pattern("symmetric density", k_max,
                         {exact_points("Psi(2k pi) = 0", [](int k) { return 2 * k * kPi; })});
      // Other zeros are not excluded.
      out.cosine.exclusive = out.sine.exclusive = false;
      break;
    case RegionTag::sign_change_zone:
      out.cosine.source = out.sine.source = "sign changes infinitely often";
      out.cosine.k_max = out.sine.k_max = k_max;
      out.cosine.expects_sign_change = out.sine.expects_sign_change = true;
      break;
    case RegionTag::excluded_point:
    case RegionTag::unknown:
      break;
  }
  return out;
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view to_string(RegionTag t) {
  switch (t) {
    case RegionTag::Pc: return "Pc";
    case RegionTag::Ps_minus_Pc: return "Ps_minus_Pc";
    case RegionTag::Pc_star: return "Pc_star";
    case RegionTag::Ps_star_minus_Pc_star: return "Ps_star_minus_Pc_star";
    case RegionTag::mono_C: return "mono_C";
    case RegionTag::mono_D: return "mono_D";
    case RegionTag::mono_C_star: return "mono_C_star";
    case RegionTag::mono_D_star: return "mono_D_star";
    case RegionTag::concave_strip: return "concave_strip";
    case RegionTag::diagonal: return "diagonal";
    case RegionTag::sign_change_zone: return "sign_change_zone";
    case RegionTag::excluded_point: return "excluded_point";
    case RegionTag::unknown: return "unknown";
  }
  return "unknown";
}

RegionTag region_from_string(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(RegionTag::unknown); ++i) {
    const auto t = static_cast<RegionTag>(i);
    if (to_string(t) == name) return t;
  }
  throw std::invalid_argument("unknown region label '" + std::string(name) + "'");
}

bool in_Pc(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) return false;
  const bool wedge = a >= 5.0 / 3.0 && b <= std::min(1.0, a - 1.0) && !(a == 2.0 && b == 1.0);
  const bool rectangle = a >= 1.0 && a <= 5.0 / 3.0 && b <= 2.0 / 3.0;
  return wedge || rectangle;
}

bool in_Ps(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) return false;
  return a >= 0.5 && b <= std::min({2.0, (a + 1.0) / 2.0, 2.0 * a - 1.0}) &&
         !(a == 1.0 && b == 1.0);
}

bool in_Pc_star(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) return false;
  const bool wedge = a <= 1.0 && b >= std::max(5.0 / 3.0, a + 1.0) && !(a == 1.0 && b == 2.0);
  const bool rectangle = a <= 2.0 / 3.0 && b >= 1.0 && b <= 5.0 / 3.0;
  return wedge || rectangle;
}

bool in_Ps_star(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) return false;
  return a <= 2.0 && b >= std::max({0.5, (a + 1.0) / 2.0, 2.0 * a - 1.0}) &&
         !(a == 1.0 && b == 1.0);
}

RegionLabel classify_beta_params(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw std::invalid_argument("beta parameters must be positive and finite");
  }
  const double a = alpha;
  const double b = beta;
  std::vector<RegionTag> tags;
  if (in_Pc(a, b)) tags.push_back(RegionTag::Pc);
  if (in_Pc_star(a, b)) tags.push_back(RegionTag::Pc_star);
  if (in_Ps(a, b) && !in_Pc(a, b)) tags.push_back(RegionTag::Ps_minus_Pc);
  if (in_Ps_star(a, b) && !in_Pc_star(a, b)) tags.push_back(RegionTag::Ps_star_minus_Pc_star);
  if (a > 1.0 && a < 2.0 && b == 1.0) tags.push_back(RegionTag::concave_strip);
  if (in_C(a, b)) tags.push_back(RegionTag::mono_C);
  if (in_C(b, a)) tags.push_back(RegionTag::mono_C_star);
  if (in_D(a, b)) tags.push_back(RegionTag::mono_D);
  if (in_D(b, a)) tags.push_back(RegionTag::mono_D_star);
  if (a == b) tags.push_back(RegionTag::diagonal);
  if (b > a && !in_Ps_star(a, b)) tags.push_back(RegionTag::sign_change_zone);

  RegionLabel label;
  label.alpha = a;
  label.beta = b;
  if (is_excluded(a, b)) {
    label.tag = RegionTag::excluded_point;
    label.secondary = tags;
  } else if (!tags.empty()) {
    label.tag = tags.front();
    label.secondary.assign(tags.begin() + 1, tags.end());
  }
  label.provenance = provenance(label.tag);
  return label;
}

PredictionPair predict(const RegionLabel& label, int k_max) {
  if (label.tag == RegionTag::unknown) {
    throw NoPredictionError("no prediction for an unclassified parameter point");
  }
  std::vector<RegionTag> order{label.tag};
  order.insert(order.end(), label.secondary.begin(), label.secondary.end());
  PredictionPair out;
  std::optional<RegionTag> cosine_from;
  std::optional<RegionTag> sine_from;
  for (RegionTag t : order) {
    const PredictionPair p = tag_prediction(t, label.alpha, label.beta, k_max);
    if (!cosine_from && !p.cosine.empty()) {
      out.cosine = p.cosine;
      cosine_from = t;
    }
    if (!sine_from && !p.sine.empty()) {
      out.sine = p.sine;
      sine_from = t;
    }
    if (!out.d_cosine && p.d_cosine) out.d_cosine = p.d_cosine;
    if (!out.d_sine && p.d_sine) out.d_sine = p.d_sine;
    if (cosine_from && sine_from && cosine_from == sine_from && cosine_from == t) {
      out.no_common_zeros = p.no_common_zeros;
    }
  }
  return out;
}

PredictionPair predict_from_shape(const ShapeReport& s, int k_max) {
  PredictionPair out;
  out.cosine.k_max = out.sine.k_max = k_max;
  if (!s.general_case || s.low_confidence) return out;

  if (s.decreasing()) {
    out.sine = positivity("V > 0 for a decreasing density", k_max);
    const ShapeReport* d = s.deriv_shape.get();
    const bool convex_derivative_rule = d != nullptr && d->increasing() && d->weakly_convex() &&
                                          d->general_case && !d->low_confidence &&
                                          s.neg_deriv_at_0 && std::isfinite(*s.neg_deriv_at_0) &&
                                          std::isfinite(s.f_at_0) && std::isfinite(s.f_at_1);
    if (s.strictly_convex() && s.f_at_1 == 0.0) {
      out.cosine = positivity("U > 0 for a decreasing convex density vanishing at 1", k_max);
    } else if (convex_derivative_rule) {
      const double L = *s.neg_deriv_at_0;
      const double M = s.f_at_1;
      if (L == 0.0 || (L > 0.0 && 2.0 * L <= 3.0 * kPi * M)) {
        out.cosine = pattern("-f' increasing convex, small L", k_max,
                             {band("U zero in (k pi, (k+1/2)pi)", 0.0, 0.5)});
      } else {
        out.cosine = pattern("-f' increasing convex", k_max,
                             {alternating_windows("U zero in ((2k-1)pi, 2k pi) or (2k pi, (2k+1/2)pi)")});
      }
      out.cosine.sign_claims.push_back(positive_on(kPi, "U > 0 on (0, pi]"));
    } else if (s.strictly_concave()) {
      out.cosine = pattern("decreasing concave density", k_max,
                           {band("U zero in (k pi, (k+1)pi)", 0.0, 1.0)});
      out.cosine.sign_claims.push_back(positive_on(kPi, "U > 0 on (0, pi]"));
    } else {
      out.cosine = positivity("U > 0 on (0, pi] for a decreasing density", k_max, kPi);
    }
    return out;
  }

  if (s.increasing()) {
    if (s.strictly_convex()) {
      out.cosine = pattern("increasing convex density", k_max,
                           {band("U zero in ((k-1/2)pi, k pi)", -0.5, 0.0)});
    } else {
      out.cosine = pattern("increasing density", k_max,
                           shifted_windows("U zero in ((k+1/2)pi, (k+3/2)pi)"));
    }
    out.cosine.sign_claims.push_back(positive_on(0.5 * kPi, "U > 0 on (0, pi/2]"));

    if (s.weakly_convex() && s.f_at_0 == 0.0) {
      out.sine = pattern("increasing convex density vanishing at 0", k_max,
                         {band("V zero in (k pi, (k+1/2)pi)", 0.0, 0.5)});
    } else if (s.weakly_convex()) {
      out.sine = pattern("increasing convex density", k_max,
                         {alternating_windows("V zero in ((2k-1)pi, 2k pi) or (2k pi, (2k+1/2)pi)")});
    } else {
      out.sine = pattern("increasing density", k_max, {band("V zero in (k pi, (k+1)pi)", 0.0, 1.0)});
    }
    out.sine.sign_claims.push_back(positive_on(kPi, "V > 0 on (0, pi]"));
    out.no_common_zeros = true;

    Prediction du = s.weakly_convex()
                        ? pattern("increasing convex density", k_max,
                                  {sigma_windows("U' zero in (k pi, sigma_k)", k_max)})
                        : pattern("increasing density", k_max,
                                  {band("U' zero in (k pi, (k+1)pi)", 0.0, 1.0)});
    du.sign_claims.push_back(positive_on(kPi, "U' < 0 on (0, pi]", -1));
    out.d_cosine = std::move(du);

    Prediction dv = s.weakly_convex()
                        ? pattern("increasing convex density", k_max,
                                  {band("V' zero in ((k-1/2)pi, k pi)", -0.5, 0.0)})
                        : pattern("increasing density", k_max,
                                  shifted_windows("V' zero in ((k+1/2)pi, (k+3/2)pi)"));
    dv.sign_claims.push_back(positive_on(0.5 * kPi, "V' > 0 on (0, pi/2]"));
    out.d_sine = std::move(dv);
  }
  return out;
}

Prediction kuttner_predict(double delta, double lambda, int k_max) {
  if (!(delta > 0.0) || !(lambda > 0.0)) {
    throw std::invalid_argument("kuttner parameters must be positive");
  }
  if (delta <= 1.0 && 1.0 <= lambda) {
    const bool strict = !(delta == 1.0 && lambda == 1.0);
    Prediction p;
    p.source = "decreasing convex density vanishing at 1";
    p.k_max = k_max;
    p.sign_claims.push_back(
        positive_on(kInf, strict ? "Omega > 0" : "Omega >= 0", 1, strict));
    return p;
  }
  if (lambda <= 1.0 && 1.0 <= delta) {
    Prediction p;
    if (lambda == 1.0 && delta >= 2.0 && delta <= 3.0) {
      p = pattern("1 - t^delta, 2 <= delta <= 3", k_max,
                  {band("Omega zero in (k pi, (k+1/2)pi)", 0.0, 0.5)});
      if (delta == 2.0) {
        const std::vector<double> sigma = sigma_roots(k_max);
        p.items.push_back(exact_points("Omega(sigma_k) = 0", [sigma](int k) {
          return sigma[static_cast<std::size_t>(k - 1)];
        }));
      }
    } else if (lambda == 1.0 && delta > 3.0) {
      p = pattern("1 - t^delta, delta > 3", k_max, {sigma_windows("Omega zero in (k pi, sigma_k)", k_max)});
    } else {
      p = pattern("decreasing concave density", k_max,
                  {band("Omega zero in (k pi, (k+1)pi)", 0.0, 1.0)});
    }
    p.sign_claims.push_back(positive_on(kPi, "Omega > 0 on (0, pi]"));
    return p;
  }
  Prediction none;
  none.source = "no prediction";
  none.k_max = k_max;
  return none;
}

LommelPrediction lommel_predict(double mu, int k_max) {
  if (!(mu > -1.5) || mu == -0.5 || mu == 0.5 || !std::isfinite(mu)) {
    throw std::invalid_argument("Lommel order must satisfy mu > -3/2, mu != +-1/2");
  }
  LommelPrediction out;
  if (mu < -0.5) {
    out.alpha = mu + 1.5;
    out.kind = TransformKind::cosine;
    out.prediction = mu <= -5.0 / 6.0
                         ? pattern("Lommel, -3/2 < mu <= -5/6", k_max,
                                   {band("zero in ((k-1/2)pi, k pi)", -0.5, 0.0)})
                         : pattern("Lommel, -5/6 < mu < -1/2", k_max,
                                   {band("zero in ((k-1/2)pi, (k+1/2)pi)", -0.5, 0.5)});
    return out;
  }
  out.alpha = mu + 0.5;
  out.kind = TransformKind::sine;
  if (mu <= 1.0 / 6.0) {
    out.prediction = pattern("Lommel, -1/2 < mu <= 1/6", k_max,
                             {band("zero in (k pi, (k+1/2)pi)", 0.0, 0.5)});
  } else if (mu < 0.5) {
    out.prediction = pattern("Lommel, 1/6 < mu < 1/2", k_max,
                             {band("zero in (k pi, (k+1)pi)", 0.0, 1.0)});
  } else {
    out.prediction = positivity("Lommel, mu > 1/2: positive", k_max);
  }
  return out;
}

Prediction williamson_predict(double alpha, int k_max) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (alpha <= 1.0) {
    return pattern("Psi_alpha, 0 < alpha <= 1", k_max, {band("zero in (k pi, (k+1/2)pi)", 0.0, 0.5)});
  }
  if (alpha <= 1.5) {
    return pattern("Psi_alpha, 1 < alpha <= 3/2", k_max, {band("zero in (k pi, (k+1)pi)", 0.0, 1.0)});
  }
  if (alpha < 3.0) {
    Prediction p;
    p.source = "Psi_alpha, 3/2 < alpha < 3: changes sign";
    p.k_max = k_max;
    p.expects_sign_change = true;
    return p;
  }
  return positivity("Psi_alpha, alpha >= 3: positive", k_max);
}

double steinerberger_value(double beta, double x, double tol) {
  if (!(beta > -1.0)) throw std::invalid_argument("Steinerberger parameter must exceed -1");
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("x must be finite and >= 0");
  if (x == 0.0) return 1.0;
  if (x <= kSeriesMaxX) {
    return hyp_pfq({{(1.0 + beta) / 2.0}, {1.5, (3.0 + beta) / 2.0}, -x * x / 4.0}).value;
  }
  const quad::Integrand g = [beta](double t, double) { return std::pow(t, beta - 1.0); };
  const EvalResult r = oscillatory_integral(g, Trig::sine, x, {}, tol);
  return (1.0 + beta) / x * r.value;
}

std::vector<SteinerbergerTerm> steinerberger_signs(double beta, int k_max, double tol) {
  if (!(beta > -1.0)) throw std::invalid_argument("Steinerberger parameter must exceed -1");
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  std::vector<SteinerbergerTerm> out;
  for (int k = 1; k <= k_max; ++k) {
    SteinerbergerTerm term;
    term.k = k;
    term.value = steinerberger_value(beta, (k - 0.5) * kPi, tol);
    term.abs_error_estimate = tol;
    if (std::abs(term.value) >= 10.0 * tol) term.sign = term.value > 0.0 ? 1 : -1;
    out.push_back(term);
  }
  return out;
}

std::optional<int> steinerberger_expected_sign(double beta, int k) {
  if (beta >= 2.0) return k % 2 ? 1 : -1;
  if (beta > -1.0 && beta <= 5.0 / 3.0) return 1;
  return std::nullopt;
}

double min_cross_residual(const Density& d, const std::vector<ZeroRecord>& cosine_zeros,
                          const std::vector<ZeroRecord>& sine_zeros, double tol) {
  double m = kInf;
  for (const ZeroRecord& z : cosine_zeros) {
    m = std::min(m, std::abs(eval(d, TransformKind::sine, z.abscissa, tol).value));
  }
  for (const ZeroRecord& z : sine_zeros) {
    m = std::min(m, std::abs(eval(d, TransformKind::cosine, z.abscissa, tol).value));
  }
  return m;
}

AtlasRecord verify_cell(double alpha, double beta, int k_max, double tol) {
  AtlasRecord r;
  r.alpha = alpha;
  r.beta = beta;
  r.k_max = k_max;
  r.horizon = (k_max + 1) * kPi;
  try {
    const RegionLabel label = classify_beta_params(alpha, beta);
    r.label = label.tag;
    if (label.tag == RegionTag::unknown) {
      r.status = "unclassified";
      return r;
    }
    const PredictionPair pair = predict(label, k_max);
    if (pair.empty() && !pair.d_cosine && !pair.d_sine) {
      r.status = "unclassified";
      return r;
    }
    const Density d = make_density(Family::beta, {alpha, beta});
    bool indeterminate = false;
    std::vector<ZeroRecord> zeros_of[2];
    const auto run = [&](TransformKind kind, const Prediction& p, int slot) {
      if (p.empty()) return;
      const VerificationReport rep = verify_pattern(d, kind, p, tol);
      for (const Violation& v : rep.violations) {
        r.violations.push_back({std::string(to_string(kind)), v.k, v.lo, v.hi, v.expected, v.found});
        r.notes.push_back(std::string(to_string(kind)) + ": " + v.detail);
      }
      for (const std::string& s : rep.indeterminate) {
        indeterminate = true;
        r.notes.push_back(std::string(to_string(kind)) + ": " + s);
      }
      if (slot >= 0) {
        for (const ZeroRecord& z : rep.zeros) {
          if (z.abscissa <= rep.horizon) zeros_of[slot].push_back(z);
        }
      }
    };
    run(TransformKind::cosine, pair.cosine, 0);
    run(TransformKind::sine, pair.sine, 1);
    if (pair.d_cosine) run(TransformKind::d_cosine, *pair.d_cosine, -1);
    if (pair.d_sine) run(TransformKind::d_sine, *pair.d_sine, -1);
    if (pair.no_common_zeros) {
      const double cross = min_cross_residual(d, zeros_of[0], zeros_of[1], tol);
      if (!(cross > kCommonZeroFloor)) {
        r.violations.push_back({"cosine/sine", 0, 0.0, r.horizon, "no_common_zeros", 1});
        r.notes.push_back("min cross residual " + format17(cross) + " <= " +
                          format17(kCommonZeroFloor));
      }
    }
    r.pass = r.violations.empty();
    r.status = !r.pass ? "fail" : indeterminate ? "indeterminate" : "pass";
  } catch (const std::exception& e) {
    r.pass = false;
    r.status = "error";
    r.notes.push_back(e.what());
  }
  return r;
}

std::vector<AtlasRecord> sweep(const std::vector<double>& alpha_grid,
                               const std::vector<double>& beta_grid, const SweepOptions& opts) {
  for (const auto* g : {&alpha_grid, &beta_grid}) {
    for (double v : *g) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("sweep grid values must be positive and finite");
      }
    }
  }
  std::vector<double> as = alpha_grid;
  std::vector<double> bs = beta_grid;
  std::sort(as.begin(), as.end());
  std::sort(bs.begin(), bs.end());
  as.erase(std::unique(as.begin(), as.end()), as.end());
  bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
  std::vector<std::pair<double, double>> cells;
  for (double a : as) {
    for (double b : bs) cells.emplace_back(a, b);
  }

  std::vector<std::optional<AtlasRecord>> done(cells.size());
  std::vector<AtlasRecord> out;
  out.reserve(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex emit;
  std::size_t emitted = 0;
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      AtlasRecord rec = verify_cell(cells[i].first, cells[i].second, opts.k_max, opts.tol);
      const std::lock_guard lock(emit);
      done[i] = std::move(rec);
      while (emitted < done.size() && done[emitted]) {
        if (opts.on_record) opts.on_record(*done[emitted]);
        ++emitted;
      }
    }
  };
  unsigned jobs = opts.jobs ? opts.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(cells.size(), 1)));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  for (auto& r : done) out.push_back(std::move(*r));
  return out;
}

std::vector<double> parse_grid(std::string_view spec) {
  std::vector<double> parts;
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t end = i < 2 ? spec.find(':', start) : spec.size();
    if (end == std::string_view::npos) break;
    const std::string_view piece = spec.substr(start, end - start);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
    if (ec != std::errc() || ptr != piece.data() + piece.size() || piece.empty()) {
      throw std::invalid_argument("grid must be LO:HI:STEP, got '" + std::string(spec) + "'");
    }
    parts.push_back(v);
    start = end + 1;
  }
  if (parts.size() != 3 || start != spec.size() + 1) {
    throw std::invalid_argument("grid must be LO:HI:STEP, got '" + std::string(spec) + "'");
  }
  const double lo = parts[0];
  const double hi = parts[1];
  const double step = parts[2];
  if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("grid needs finite LO <= HI and STEP > 0");
  }
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  if (n > 1000000) throw std::invalid_argument("grid has too many points");
  std::vector<double> out;
  for (long i = 0; i <= n; ++i) {
    out.push_back(std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12);
  }
  return out;
}

std::string to_json(const AtlasRecord& r) {
  nlohmann::ordered_json j;
  j["alpha"] = r.alpha;
  j["beta"] = r.beta;
  j["label"] = std::string(to_string(r.label));
  j["k_max"] = r.k_max;
  j["pass"] = r.pass;
  j["status"] = r.status;
  nlohmann::ordered_json vs = nlohmann::ordered_json::array();
  for (const AtlasViolation& v : r.violations) {
    nlohmann::ordered_json o;
    o["transform"] = v.transform;
    o["k"] = v.k;
    o["interval"] = {v.lo, v.hi};
    o["expected"] = v.expected;
    o["found"] = v.found;
    vs.push_back(std::move(o));
  }
  j["violations"] = std::move(vs);
  j["horizon"] = r.horizon;
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

std::string csv_header() { return "alpha,beta,label,k_max,pass,status,horizon,violations"; }

std::string to_csv(const AtlasRecord& r) {
  std::ostringstream s;
  s << format17(r.alpha) << ',' << format17(r.beta) << ',' << to_string(r.label) << ','
    << r.k_max << ',' << (r.pass ? "true" : "false") << ',' << r.status << ','
    << format17(r.horizon) << ',';
  // transform:k:lo:hi:expected:found entries separated by ';'.
  for (std::size_t i = 0; i < r.violations.size(); ++i) {
    const AtlasViolation& v = r.violations[i];
    if (i) s << ';';
    s << v.transform << ':' << v.k << ':' << format17(v.lo) << ':' << format17(v.hi) << ':'
      << v.expected << ':' << v.found;
  }
  return s.str();
}

}  // namespace oscilla
