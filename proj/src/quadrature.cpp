#include "oscilla/quadrature.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numbers>
#include <vector>

namespace oscilla::quad {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes, computed once by Newton iteration on P_n.

template <int N>
struct GaussRule {
  std::array<double, N> x{};
  std::array<double, N> w{};

  GaussRule() {
    for (int i = 0; i < N; ++i) {
      double z = std::cos(kPi * (i + 0.75) / (N + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = z;
        for (int j = 2; j <= N; ++j) {
          const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = N * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-17) break;
      }
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

const GaussRule<10>& gauss10() {
  static const GaussRule<10> rule;
  return rule;
}

const GaussRule<20>& gauss20() {
  static const GaussRule<20> rule;
  return rule;
}

template <int N>
double apply_rule(const GaussRule<N>& rule, const Integrand& g, double a, double b,
                  double& abs_sum) {
  const double mid = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  CompensatedSum s;
  double as = 0.0;
  for (int i = 0; i < N; ++i) {
    const double t = mid + hw * rule.x[i];
    const double v = rule.w[i] * g(t, 1.0 - t);
    s.add(v);
    as += std::abs(v);
  }
  abs_sum = hw * as;
  return hw * s.value();
}

// ---------------------------------------------------------------------------
// Double-exponential nodes. For abscissa s >= 0 the map is
//   y = tanh(pi/2 sinh s),  dy/ds = (pi/2) cosh s / cosh^2(pi/2 sinh s),
// and c = 1 - y is stored directly so endpoint distances never cancel.

constexpr int kMaxLevel = 8;
constexpr double kSMax = 6.0;

struct DeNode {
  double s;
  double w;  // dy/ds
  double c;  // 1 - y
};

DeNode de_node(double s) {
  const double z = 0.5 * kPi * std::sinh(s);
  const double e = std::exp(-2.0 * z);
  const double w = 0.5 * kPi * std::cosh(s) * 4.0 * e / ((1.0 + e) * (1.0 + e));
  return {s, w, 2.0 * e / (1.0 + e)};
}

struct DeTable {
  // levels[0] holds s = 1, 2, ..., 6; levels[k] holds odd multiples of 2^-k.
  std::array<std::vector<DeNode>, kMaxLevel + 1> levels;

  DeTable() {
    for (int k = 0; k <= kMaxLevel; ++k) {
      const double h = std::ldexp(1.0, -k);
      for (int j = 1;; j += (k == 0 ? 1 : 2)) {
        const double s = j * h;
        if (s > kSMax) break;
        levels[k].push_back(de_node(s));
      }
    }
  }
};

const DeTable& de_table() {
  static const DeTable table;
  return table;
}

struct SidePoint {
  double t;
  double u;
  double dist;  // distance to the endpoint this side approaches
};

// Abscissa at complement c on the right (towards b) or left (towards a).
SidePoint right_point(double b, double hw, double c) {
  const double db = hw * c;
  return {b - db, (1.0 - b) + db, db};
}

SidePoint left_point(double a, double hw, double c) {
  const double da = hw * c;
  return {a + da, (1.0 - a) - da, da};
}

struct TailModel {
  bool active = false;
  double g_last = 0.0;
  double d_last = 0.0;
  double power = 0.0;
};

// Fits g ~ C d^p through the two outermost level-0 nodes.
TailModel fit_tail(double g5, double d5, double g6, double d6) {
  TailModel m;
  if (g5 == 0.0 || g6 == 0.0 || (g5 > 0) != (g6 > 0) || d5 <= 0.0 || d6 <= 0.0) {
    return m;
  }
  const double p = std::log(g6 / g5) / std::log(d6 / d5);
  if (!std::isfinite(p)) return m;
  if (p <= -1.0) {
    throw QuadratureError("integrand is not integrable at an endpoint", 0.0,
                          std::numeric_limits<double>::infinity());
  }
  m.active = true;
  m.g_last = g6;
  m.d_last = d6;
  m.power = p;
  return m;
}

// Remainder of a side whose trapezoid sum stops at the last node s_N while the
// integrand F(s) = hw w(s) g(d(s)) is still non-negligible. Under the model
// g = C d^p, ln F = const - (1+p) pi sinh s + ln cosh s, the truncated sum is
// corrected with Euler-Maclaurin boundary terms and the model integral over
// (0, d_N) is added.
double tail_correction(const TailModel& m, double hw, double w_last, double h) {
  if (!m.active) return 0.0;
  const double s = kSMax;
  const double q = 1.0 + m.power;
  const double ch = std::cosh(s);
  const double sh = std::sinh(s);
  const double th = std::tanh(s);
  const double sech2 = 1.0 / (ch * ch);
  const double l1 = -q * kPi * ch + th;
  const double l2 = -q * kPi * sh + sech2;
  const double l3 = -q * kPi * ch - 2.0 * sech2 * th;
  const double f = hw * w_last * m.g_last;
  const double f1 = f * l1;
  const double f3 = f * (l3 + 3.0 * l1 * l2 + l1 * l1 * l1);
  const double h2 = h * h;
  const double boundary = -0.5 * h * f - h2 / 12.0 * f1 + h2 * h2 / 720.0 * f3;
  return boundary + m.g_last * m.d_last / q;
}

Result tanh_sinh_impl(const Integrand& g, double a, double b, double tol, int depth) {
  const DeTable& table = de_table();
  const double hw = 0.5 * (b - a);
  Result r;

  auto eval_checked = [&](const SidePoint& p) {
    const double v = g(p.t, p.u);
    ++r.evaluations;
    if (!std::isfinite(v)) {
      throw QuadratureError("integrand is not finite near an endpoint", 0.0,
                            std::numeric_limits<double>::infinity());
    }
    return v;
  };

  // Level 0: walk outwards on each side and decide how far the table is used.
  CompensatedSum sum;
  double abs_sum = 0.0;
  {
    const double v = eval_checked({a + hw, 1.0 - (a + hw), hw});
    sum.add(0.5 * kPi * v);
    abs_sum += 0.5 * kPi * std::abs(v);
  }
  double limit_right = kSMax;
  double limit_left = kSMax;
  std::array<double, 7> g_right{};
  std::array<double, 7> g_left{};
  bool right_open = true;
  bool left_open = true;
  for (const DeNode& n : table.levels[0]) {
    const int idx = static_cast<int>(n.s);
    if (right_open) {
      const double v = eval_checked(right_point(b, hw, n.c));
      g_right[idx] = v;
      const double term = n.w * v;
      sum.add(term);
      abs_sum += std::abs(term);
      if (n.s >= 3.0 && std::abs(term) < 1e-20 * abs_sum) {
        right_open = false;
        limit_right = n.s;
      }
    }
    if (left_open) {
      const double v = eval_checked(left_point(a, hw, n.c));
      g_left[idx] = v;
      const double term = n.w * v;
      sum.add(term);
      abs_sum += std::abs(term);
      if (n.s >= 3.0 && std::abs(term) < 1e-20 * abs_sum) {
        left_open = false;
        limit_left = n.s;
      }
    }
  }

  // Sides that never decayed inside the table get an algebraic tail.
  TailModel tail_right;
  TailModel tail_left;
  const DeNode n5 = de_node(5.0);
  const DeNode n6 = de_node(6.0);
  if (right_open) tail_right = fit_tail(g_right[5], hw * n5.c, g_right[6], hw * n6.c);
  if (left_open) tail_left = fit_tail(g_left[5], hw * n5.c, g_left[6], hw * n6.c);

  auto tails = [&](double h) {
    return tail_correction(tail_right, hw, n6.w, h) + tail_correction(tail_left, hw, n6.w, h);
  };

  double h = 1.0;
  double prev = hw * h * sum.value() + tails(h);
  double est = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= kMaxLevel; ++k) {
    for (const DeNode& n : table.levels[k]) {
      if (n.s <= limit_right) {
        const double term = n.w * eval_checked(right_point(b, hw, n.c));
        sum.add(term);
        abs_sum += std::abs(term);
      }
      if (n.s <= limit_left) {
        const double term = n.w * eval_checked(left_point(a, hw, n.c));
        sum.add(term);
        abs_sum += std::abs(term);
      }
    }
    h *= 0.5;
    const double cur = hw * h * sum.value() + tails(h);
    est = std::abs(cur - prev);
    prev = cur;
    const double floor = 64.0 * kEps * hw * h * abs_sum;
    if (k >= 3 && est <= std::max(tol, floor)) {
      r.value = cur;
      r.abs_error = std::max(est, floor);
      return r;
    }
  }

  if (depth < 6) {
    const double mid = 0.5 * (a + b);
    Result lhs = tanh_sinh_impl(g, a, mid, 0.5 * tol, depth + 1);
    Result rhs = tanh_sinh_impl(g, mid, b, 0.5 * tol, depth + 1);
    r.value = lhs.value + rhs.value;
    r.abs_error = lhs.abs_error + rhs.abs_error;
    r.evaluations += lhs.evaluations + rhs.evaluations;
    return r;
  }
  throw QuadratureError("double-exponential rule did not converge", prev, est);
}

}  // namespace

Result tanh_sinh(const Integrand& g, double a, double b, double tol) {
  return tanh_sinh_impl(g, a, b, tol, 0);
}

Result gauss_legendre(const Integrand& g, double a, double b, double tol) {
  struct Panel {
    double a;
    double b;
    double tol;
    int depth;
  };
  constexpr std::size_t kBudget = 200000;
  Result r;
  CompensatedSum sum;
  double err = 0.0;
  std::vector<Panel> stack{{a, b, tol, 0}};
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    double abs20 = 0.0;
    double abs10 = 0.0;
    const double q20 = apply_rule(gauss20(), g, p.a, p.b, abs20);
    const double q10 = apply_rule(gauss10(), g, p.a, p.b, abs10);
    r.evaluations += 30;
    const double diff = std::abs(q20 - q10);
    const double floor = 64.0 * kEps * abs20;
    if (diff <= std::max(p.tol, floor) || p.depth >= 40) {
      sum.add(q20);
      err += std::max(diff, floor);
      continue;
    }
    if (r.evaluations > kBudget) {
      throw QuadratureError("Gauss-Legendre subdivision budget exhausted", sum.value() + q20,
                            err + diff);
    }
    const double mid = 0.5 * (p.a + p.b);
    stack.push_back({mid, p.b, 0.5 * p.tol, p.depth + 1});
    stack.push_back({p.a, mid, 0.5 * p.tol, p.depth + 1});
  }
  r.value = sum.value();
  r.abs_error = err;
  return r;
}

Result integrate_unit(const Integrand& g, std::span<const double> cuts, double tol) {
  std::vector<double> points;
  points.reserve(cuts.size() + 2);
  points.push_back(0.0);
  for (double c : cuts) {
    if (c > points.back() && c < 1.0) points.push_back(c);
  }
  points.push_back(1.0);

  const double panel_tol = tol / static_cast<double>(points.size() - 1);
  Result total;
  CompensatedSum sum;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double a = points[i];
    const double b = points[i + 1];
    Result part;
    try {
      part = (a == 0.0 || b == 1.0) ? tanh_sinh(g, a, b, panel_tol)
                                    : gauss_legendre(g, a, b, panel_tol);
    } catch (const QuadratureError& e) {
      throw QuadratureError(e.what(), sum.value() + e.partial_estimate(),
                            total.abs_error + e.error_estimate());
    }
    sum.add(part.value);
    total.abs_error += part.abs_error;
    total.evaluations += part.evaluations;
  }
  total.value = sum.value();
  return total;
}

}  // namespace oscilla::quad
