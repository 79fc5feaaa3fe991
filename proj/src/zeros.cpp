#include "oscilla/zeros.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace oscilla {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kShrink = 1e-9;

double checked(const RealFunction& F, double x) {
  const double v = F(x);
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "function value is not finite at x = " << x;
    throw EvaluationError(msg.str(), x);
  }
  return v;
}

// Bracketed refinement of a sign change between (a, fa) and (b, fb).
ZeroRecord refine(const RealFunction& F, double a, double fa, double b, double fb, double tol,
                  double scale) {
  ZeroRecord z;
  z.lo = a;
  z.hi = b;
  std::uintmax_t iters = 200;
  const auto done = [tol](double l, double r) { return r - l <= tol; };
  const auto f = [&](double x) { return checked(F, x); };
  const auto [l, r] = boost::math::tools::toms748_solve(f, a, b, fa, fb, done, iters);
  z.abscissa = std::clamp(0.5 * (l + r), std::nextafter(a, b), std::nextafter(b, a));
  z.residual = std::abs(f(z.abscissa));
  const double h = kSimplicityStep;
  const double fm = f(z.abscissa - h);
  const double fp = f(z.abscissa + h);
  const double slope = std::abs(fp - fm) / (2.0 * h);
  z.simple = fm * fp < 0.0 && slope > kSlopeFloor * scale;
  return z;
}

// A grid value that is exactly zero is a zero; its simplicity is decided from
// the neighbouring samples.
ZeroRecord exact_zero(const RealFunction& F, double prev, double x, double next, double scale) {
  ZeroRecord z;
  z.lo = prev;
  z.hi = next;
  z.abscissa = x;
  z.residual = 0.0;
  const double h = kSimplicityStep;
  const double fm = checked(F, x - h);
  const double fp = checked(F, x + h);
  z.simple = fm * fp < 0.0 && std::abs(fp - fm) / (2.0 * h) > kSlopeFloor * scale;
  return z;
}

struct Samples {
  std::vector<double> x;
  std::vector<double> v;
};

std::vector<ZeroRecord> zeros_from_samples(const RealFunction& F, const Samples& s, double tol,
                                           double scale) {
  std::vector<ZeroRecord> out;
  const std::size_t n = s.x.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (s.v[i] == 0.0) {
      if (i == 0 || i + 1 == n) continue;
      out.push_back(exact_zero(F, s.x[i - 1], s.x[i], s.x[i + 1], scale));
      continue;
    }
    if (i + 1 < n && s.v[i] * s.v[i + 1] < 0.0) {
      out.push_back(refine(F, s.x[i], s.v[i], s.x[i + 1], s.v[i + 1], tol, scale));
    }
  }
  return out;
}

// Smallest interior local minimum of |F| among the samples in (lo, hi).
double interior_min_abs(const Samples& s, double lo, double hi) {
  double best = kInf;
  const std::size_t n = s.x.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (s.x[i] <= lo || s.x[i] >= hi) continue;
    const double a = std::abs(s.v[i]);
    if (a <= std::abs(s.v[i - 1]) && a <= std::abs(s.v[i + 1])) best = std::min(best, a);
  }
  return best;
}

struct Span {
  double lo;
  double hi;
};

std::string describe_interval(double lo, double hi) {
  std::ostringstream s;
  s.precision(10);
  s << "(" << lo << ", " << hi << ")";
  return s.str();
}

}  // namespace

std::vector<ZeroRecord> scan_and_refine(const RealFunction& F, double lo, double hi,
                                        int grid_points, double tol) {
  if (!(lo < hi)) throw std::invalid_argument("scan interval must satisfy lo < hi");
  if (grid_points < 8) throw std::invalid_argument("scan needs at least 8 grid points");
  Samples s;
  double scale = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double x = i + 1 == grid_points ? hi : lo + (hi - lo) * i / (grid_points - 1.0);
    s.x.push_back(x);
    s.v.push_back(checked(F, x));
    scale = std::max(scale, std::abs(s.v.back()));
  }
  return zeros_from_samples(F, s, tol, scale);
}

std::vector<double> sigma_roots(int k_max) {
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k_max));
  const auto f = [](double x) { return std::sin(x) - x * std::cos(x); };
  for (int k = 1; k <= k_max; ++k) {
    const double a = k * kPi;
    const double b = (k + 0.5) * kPi;
    std::uintmax_t iters = 200;
    const auto [l, r] = boost::math::tools::toms748_solve(
        f, a, b, f(a), f(b), boost::math::tools::eps_tolerance<double>(52), iters);
    // Keep whichever end of the final bracket has the smaller residual.
    out.push_back(std::abs(f(l)) <= std::abs(f(r)) ? l : r);
  }
  return out;
}

std::string_view to_string(Expectation e) {
  switch (e) {
    case Expectation::exactly_one: return "exactly_one";
    case Expectation::at_least_one: return "at_least_one";
    case Expectation::none_here: return "none_here";
    case Expectation::exact_zero_at: return "exact_zero_at";
  }
  return "exactly_one";
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::fail: return "fail";
    case Outcome::indeterminate: return "indeterminate";
  }
  return "fail";
}

double Prediction::horizon() const { return (k_max + 1) * kPi; }

Outcome VerificationReport::status() const {
  if (!violations.empty()) return Outcome::fail;
  if (!indeterminate.empty()) return Outcome::indeterminate;
  return Outcome::pass;
}

VerificationReport verify_function(const RealFunction& F, const Prediction& pred,
                                   const VerifyOptions& opts) {
  if (pred.k_max < 1 || pred.k_max > 1000) {
    throw std::invalid_argument("prediction k_max must lie in [1, 1000]");
  }
  if (opts.grid_per_pi < 8) throw std::invalid_argument("grid density must be >= 8 per pi");
  VerificationReport report;
  report.horizon = pred.horizon();
  const double tol = opts.tol;

  struct Checked {
    std::size_t item;
    int k;
    double lo;
    double hi;
  };
  std::vector<Checked> checked_intervals;
  std::vector<Span> cover;  // everything a zero may legitimately occupy
  double top = report.horizon;
  for (std::size_t i = 0; i < pred.items.size(); ++i) {
    const PredictionItem& item = pred.items[i];
    const int last = item.k_last < 0 ? pred.k_max : std::min(item.k_last, pred.k_max);
    if (item.expectation == Expectation::exact_zero_at) continue;
    for (int k = item.k_first; k <= last; ++k) {
      const auto [lo, hi] = item.interval(k);
      checked_intervals.push_back({i, k, lo, hi});
      if (item.expectation != Expectation::none_here) cover.push_back({lo, hi});
      top = std::max(top, hi);
    }
    // Intervals past k_max only shield the gap scan near the horizon.
    if (item.expectation != Expectation::none_here && item.k_last < 0) {
      for (int k = last + 1;; ++k) {
        const auto [lo, hi] = item.interval(k);
        if (lo >= report.horizon) break;
        cover.push_back({lo, hi});
      }
    }
  }

  // Sample set: uniform grid plus shrunken interval ends.
  Samples s;
  {
    std::vector<double> xs;
    const double step = kPi / opts.grid_per_pi;
    for (int i = 1;; ++i) {
      const double x = i * step;
      if (x > top + 0.5 * step) break;
      xs.push_back(x);
    }
    for (const Checked& c : checked_intervals) {
      xs.push_back(c.lo + kShrink);
      xs.push_back(c.hi - kShrink);
    }
    for (const Span& c : cover) {
      if (c.lo + kShrink < top) xs.push_back(c.lo + kShrink);
      if (c.hi - kShrink < top) xs.push_back(c.hi - kShrink);
    }
    for (const SignClaim& c : pred.sign_claims) {
      if (std::isfinite(c.hi)) xs.push_back(c.hi);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    xs.erase(std::remove_if(xs.begin(), xs.end(), [](double x) { return !(x > 0.0); }),
             xs.end());
    for (double x : xs) {
      s.x.push_back(x);
      s.v.push_back(checked(F, x));
    }
  }
  double scale = 0.0;
  for (double v : s.v) scale = std::max(scale, std::abs(v));

  report.zeros = zeros_from_samples(F, s, kRootTol, scale);
  const double tangency = 100.0 * tol;

  // Interval expectations.
  for (const Checked& c : checked_intervals) {
    const PredictionItem& item = pred.items[c.item];
    IntervalOutcome io;
    io.item = item.description;
    io.k = c.k;
    io.lo = c.lo;
    io.hi = c.hi;
    io.expected = item.expectation;
    const double a = c.lo + kShrink;
    const double b = c.hi - kShrink;
    for (const ZeroRecord& z : report.zeros) {
      if (z.abscissa > a && z.abscissa < b) io.records.push_back(z);
    }
    io.found = static_cast<int>(io.records.size());
    const bool near_tangent = interior_min_abs(s, a, b) < tangency;
    std::string problem;
    switch (item.expectation) {
      case Expectation::exactly_one:
        if (io.found == 1 && !io.records.front().simple) problem = "zero is not simple";
        else if (io.found == 0 && near_tangent) io.outcome = Outcome::indeterminate;
        else if (io.found != 1) problem = "expected exactly one zero";
        break;
      case Expectation::at_least_one:
        if (io.found == 0) {
          if (near_tangent) io.outcome = Outcome::indeterminate;
          else problem = "expected at least one zero";
        }
        break;
      case Expectation::none_here:
        if (io.found > 0) problem = "expected no zeros";
        else if (near_tangent) io.outcome = Outcome::indeterminate;
        break;
      case Expectation::exact_zero_at:
        break;
    }
    if (!problem.empty()) {
      io.outcome = Outcome::fail;
      report.violations.push_back({c.k, c.lo, c.hi, std::string(to_string(item.expectation)),
                                   io.found, item.description + ": " + problem});
    } else if (io.outcome == Outcome::indeterminate) {
      report.indeterminate.push_back(item.description + " k=" + std::to_string(c.k) +
                                     ": near-tangency in " + describe_interval(c.lo, c.hi));
    }
    report.intervals.push_back(std::move(io));
  }

  // Exact zeros at points.
  for (const PredictionItem& item : pred.items) {
    if (item.expectation != Expectation::exact_zero_at) continue;
    const int last = item.k_last < 0 ? pred.k_max : std::min(item.k_last, pred.k_max);
    for (int k = item.k_first; k <= last; ++k) {
      const double p = item.point(k);
      const double v = checked(F, p);
      IntervalOutcome io;
      io.item = item.description;
      io.k = k;
      io.lo = io.hi = p;
      io.expected = Expectation::exact_zero_at;
      io.found = std::abs(v) <= 10.0 * tol ? 1 : 0;
      io.records.push_back({p, p, p, std::abs(v), false});
      if (io.found == 0) {
        io.outcome = Outcome::fail;
        std::ostringstream msg;
        msg.precision(6);
        msg << item.description << ": |F(p)| = " << std::abs(v) << " exceeds " << 10.0 * tol;
        report.violations.push_back({k, p, p, "exact_zero_at", 0, msg.str()});
      }
      report.intervals.push_back(std::move(io));
    }
  }

  // Gaps between the predicted intervals, up to the horizon.
  if (pred.exclusive) {
    for (const ZeroRecord& z : report.zeros) {
      if (z.abscissa > report.horizon) continue;
      const bool covered = std::any_of(cover.begin(), cover.end(), [&](const Span& c) {
        return z.abscissa > c.lo && z.abscissa < c.hi;
      });
      if (!covered) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "zero at x = " << z.abscissa << " lies outside every predicted interval";
        report.violations.push_back({0, z.lo, z.hi, "none_here", 1, msg.str()});
      }
    }
  }

  // Sign claims, with Brent refinement of sampled local minima.
  if (!pred.sign_claims.empty()) {
    Outcome so = Outcome::pass;
    for (const SignClaim& c : pred.sign_claims) {
      const double hi = std::isfinite(c.hi) ? c.hi : report.horizon;
      const auto g = [&](double x) { return c.sign * checked(F, x); };
      double worst = kInf;
      double worst_x = 0.0;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double x = s.x[i];
        if (x <= c.lo || x > hi) continue;
        double val = c.sign * s.v[i];
        double at = x;
        const bool local_min = i > 0 && i + 1 < s.x.size() &&
                               val <= c.sign * s.v[i - 1] && val <= c.sign * s.v[i + 1];
        if (local_min && val < 1e3 * tangency) {
          const double a = std::max(s.x[i - 1], c.lo + kShrink);
          const double b = std::min(s.x[i + 1], hi);
          const auto [xm, fm] = boost::math::tools::brent_find_minima(g, a, b, 40);
          if (fm < val) {
            val = fm;
            at = xm;
          }
        }
        if (val < worst) {
          worst = val;
          worst_x = at;
        }
      }
      const bool broken = c.strict ? !(worst > 0.0) : worst < -10.0 * tol;
      if (broken) {
        so = Outcome::fail;
        std::ostringstream msg;
        msg.precision(17);
        msg << c.description << ": sign * F = " << worst << " at x = " << worst_x;
        report.violations.push_back({0, c.lo, hi, c.description, 1, msg.str()});
      } else if (c.strict && worst < 10.0 * tol) {
        if (so == Outcome::pass) so = Outcome::indeterminate;
        std::ostringstream msg;
        msg.precision(6);
        msg << c.description << ": minimum " << worst << " is within tolerance of zero";
        report.indeterminate.push_back(msg.str());
      }
    }
    report.sign_outcome = so;
  }

  if (pred.expects_sign_change) {
    const bool found = std::any_of(report.zeros.begin(), report.zeros.end(), [&](const ZeroRecord& z) {
      return z.abscissa <= report.horizon;
    });
    if (!found) {
      report.indeterminate.push_back("no sign change found up to the horizon " +
                                     std::to_string(report.horizon));
    }
  }

  report.pass = report.violations.empty();
  return report;
}

VerificationReport verify_pattern(const Density& d, TransformKind kind, const Prediction& pred,
                                  double tol) {
  const RealFunction F = [&d, kind, tol](double x) { return eval(d, kind, x, tol).value; };
  VerifyOptions opts;
  opts.tol = tol;
  return verify_function(F, pred, opts);
}

bool interlace_check(const std::vector<double>& a, const std::vector<double>& b) {
  const auto strictly_increasing = [](const std::vector<double>& v) {
    return std::adjacent_find(v.begin(), v.end(), std::greater_equal<double>()) == v.end();
  };
  if (!strictly_increasing(a) || !strictly_increasing(b)) {
    throw std::invalid_argument("interlace_check needs strictly increasing lists");
  }
  if (a.empty() || b.empty()) return true;
  const double lo = std::max(a.front(), b.front());
  const double hi = std::min(a.back(), b.back());
  if (lo > hi) return true;
  std::vector<std::pair<double, int>> merged;
  for (double x : a) {
    if (x >= lo && x <= hi) merged.emplace_back(x, 0);
  }
  for (double x : b) {
    if (x >= lo && x <= hi) merged.emplace_back(x, 1);
  }
  std::sort(merged.begin(), merged.end());
  for (std::size_t i = 1; i < merged.size(); ++i) {
    if (merged[i].first == merged[i - 1].first) return false;
    if (merged[i].second == merged[i - 1].second) return false;
  }
  return true;
}

}  // namespace oscilla
