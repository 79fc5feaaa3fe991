#include "oscilla/density.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "oscilla/quadrature.hpp"

namespace oscilla {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string join_params(std::string_view family, std::span<const double> params) {
  std::string s(family);
  s += ':';
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) s += ',';
    s += format_number(params[i]);
  }
  return s;
}

// Shape of c * (1 - t)^p on (0, 1) for c > 0.
ShapeReport power_of_complement_shape(double c, double p) {
  ShapeReport s;
  if (p == 0.0) {
    s.monotonicity = Monotonicity::constant;
    s.convexity = Convexity::linear;
    s.general_case = false;
  } else {
    s.monotonicity = p > 0.0 ? Monotonicity::decreasing : Monotonicity::increasing;
    const double curv = p * (p - 1.0);
    s.convexity = curv > 0.0 ? Convexity::convex
                             : (curv < 0.0 ? Convexity::concave : Convexity::linear);
  }
  s.f_at_0 = c;
  s.f_at_1 = p > 0.0 ? 0.0 : (p == 0.0 ? c : kInf);
  return s;
}

// Shape of c * t^p on (0, 1) for c > 0.
ShapeReport power_shape(double c, double p) {
  ShapeReport s;
  if (p == 0.0) {
    s.monotonicity = Monotonicity::constant;
    s.convexity = Convexity::linear;
    s.general_case = false;
  } else {
    s.monotonicity = p > 0.0 ? Monotonicity::increasing : Monotonicity::decreasing;
    const double curv = p * (p - 1.0);
    s.convexity = curv > 0.0 ? Convexity::convex
                             : (curv < 0.0 ? Convexity::concave : Convexity::linear);
  }
  s.f_at_0 = p > 0.0 ? 0.0 : (p == 0.0 ? c : kInf);
  s.f_at_1 = c;
  return s;
}

std::shared_ptr<const ShapeReport> share(ShapeReport s) {
  return std::make_shared<const ShapeReport>(std::move(s));
}

// Sign of q(r) = A r^2 + B r + C on r > 0: +1 if q >= 0 (not identically 0),
// -1 if q <= 0, 0 if q == 0 identically, 2 if it changes sign.
int quadratic_sign_on_positive(double A, double B, double C) {
  if (A == 0.0 && B == 0.0 && C == 0.0) return 0;
  auto nonneg = [](double a, double b, double c) {
    if (c < 0.0 || a < 0.0) return false;
    if (a == 0.0) return b >= 0.0;
    const double r = -b / (2.0 * a);
    if (r <= 0.0) return true;
    return c - b * b / (4.0 * a) >= 0.0;
  };
  if (nonneg(A, B, C)) return 1;
  if (nonneg(-A, -B, -C)) return -1;
  return 2;
}

ShapeReport beta_shape(double alpha, double beta, double norm) {
  const double a = alpha - 1.0;
  const double b = beta - 1.0;
  ShapeReport s;
  if (a == 0.0 && b == 0.0) {
    s.monotonicity = Monotonicity::constant;
    s.convexity = Convexity::linear;
    s.general_case = false;
    s.f_at_0 = s.f_at_1 = norm;
    s.neg_deriv_at_0 = 0.0;
    return s;
  }
  // f' has the sign of b(1 - t) - a t.
  if (b >= 0.0 && a <= 0.0) {
    s.monotonicity = Monotonicity::increasing;
  } else if (b <= 0.0 && a >= 0.0) {
    s.monotonicity = Monotonicity::decreasing;
  } else {
    s.monotonicity = Monotonicity::neither;
  }
  // f'' has the sign of b(b-1)(1-t)^2 - 2ab t(1-t) + a(a-1) t^2.
  switch (quadratic_sign_on_positive(a * (a - 1.0), -2.0 * a * b, b * (b - 1.0))) {
    case 0: s.convexity = Convexity::linear; break;
    case 1: s.convexity = Convexity::convex; break;
    case -1: s.convexity = Convexity::concave; break;
    default: s.convexity = Convexity::neither; break;
  }
  s.f_at_0 = b > 0.0 ? 0.0 : (b == 0.0 ? norm : kInf);
  s.f_at_1 = a > 0.0 ? 0.0 : (a == 0.0 ? norm : kInf);
  // -f'(0+) = [a t^b u^(a-1) - b t^(b-1) u^a] / B as t -> 0.
  if (b < 0.0) {
    s.neg_deriv_at_0 = kInf;
  } else if (b == 0.0) {
    if (a >= 0.0) s.neg_deriv_at_0 = a * norm;
  } else if (b > 1.0) {
    s.neg_deriv_at_0 = 0.0;
  }

  if (s.decreasing()) {
    if (b == 0.0) {
      // -f' = a norm (1 - t)^(a - 1).
      ShapeReport d = power_of_complement_shape(a * norm, a - 1.0);
      d.general_case = a != 1.0;
      s.deriv_shape = share(d);
    } else {
      const auto neg_deriv = [=](double t) {
        const double u = 1.0 - t;
        return norm * (a * std::pow(t, b) * std::pow(u, a - 1.0) -
                       b * std::pow(t, b - 1.0) * std::pow(u, a));
      };
      s.deriv_shape = share(infer_shape(neg_deriv));
    }
  }
  return s;
}

ShapeReport kuttner_shape(double delta, double lambda) {
  ShapeReport s;
  s.monotonicity = Monotonicity::decreasing;
  // f'' has the sign of -[(delta-1)(1-s) - (lambda-1) delta s], s = t^delta.
  const double h0 = delta - 1.0;
  const double h1 = -(lambda - 1.0) * delta;
  if (h0 == 0.0 && h1 == 0.0) {
    s.convexity = Convexity::linear;
  } else if (h0 <= 0.0 && h1 <= 0.0) {
    s.convexity = Convexity::convex;
  } else if (h0 >= 0.0 && h1 >= 0.0) {
    s.convexity = Convexity::concave;
  } else {
    s.convexity = Convexity::neither;
  }
  s.f_at_0 = 1.0;
  s.f_at_1 = 0.0;
  s.neg_deriv_at_0 = delta > 1.0 ? 0.0 : (delta == 1.0 ? lambda : kInf);
  if (lambda == 1.0) {
    ShapeReport d = power_shape(delta, delta - 1.0);
    d.general_case = delta != 1.0;
    s.deriv_shape = share(d);
  } else {
    const auto neg_deriv = [=](double t) {
      return lambda * delta * std::pow(t, delta - 1.0) *
             std::pow(-std::expm1(delta * std::log(t)), lambda - 1.0);
    };
    s.deriv_shape = share(infer_shape(neg_deriv));
  }
  return s;
}

ShapeReport gegenbauer_shape(double nu) {
  const double e = nu - 0.5;
  ShapeReport s;
  s.f_at_0 = 1.0;
  if (e == 0.0) {
    s.monotonicity = Monotonicity::constant;
    s.convexity = Convexity::linear;
    s.general_case = false;
    s.f_at_1 = 1.0;
    s.neg_deriv_at_0 = 0.0;
    return s;
  }
  if (e < 0.0) {
    s.monotonicity = Monotonicity::increasing;
    s.convexity = Convexity::convex;
    s.f_at_1 = kInf;
    return s;
  }
  s.monotonicity = Monotonicity::decreasing;
  s.convexity = e <= 1.0 ? Convexity::concave : Convexity::neither;
  s.f_at_1 = 0.0;
  s.neg_deriv_at_0 = 0.0;
  // -f' = 2e t (1 - t^2)^(e - 1).
  if (e <= 1.0) {
    ShapeReport d;
    d.monotonicity = Monotonicity::increasing;
    d.convexity = e == 1.0 ? Convexity::linear : Convexity::convex;
    d.f_at_0 = 0.0;
    d.f_at_1 = e == 1.0 ? 2.0 : kInf;
    s.deriv_shape = share(d);
  } else {
    const auto neg_deriv = [=](double t) {
      return 2.0 * e * t * std::pow((1.0 - t) * (1.0 + t), e - 1.0);
    };
    s.deriv_shape = share(infer_shape(neg_deriv));
  }
  return s;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw DensityError(message);
}

std::vector<double> binomial_reflect(const std::vector<double>& c) {
  // p(1 - t) expanded in powers of t.
  const std::size_t n = c.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double binom = 1.0;
    for (std::size_t j = 0; j <= k; ++j) {
      out[j] += c[k] * binom * ((j % 2) ? -1.0 : 1.0);
      binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
    }
  }
  return out;
}

}  // namespace

// Assembles densities and validates them on construction.
class DensityBuilder {
 public:
  static Density build(DensityKernel kernel, Family family, std::vector<double> params,
                       ShapeReport shape, std::string name,
                       std::vector<double> breakpoints = {},
                       std::optional<std::vector<double>> polynomial = std::nullopt) {
    Density d;
    d.kernel_ = std::move(kernel);
    d.family_ = family;
    d.params_ = std::move(params);
    d.shape_ = std::move(shape);
    d.name_ = std::move(name);
    d.breakpoints_ = std::move(breakpoints);
    d.polynomial_ = std::move(polynomial);
    validate(d);
    return d;
  }

  static Density reflected(const Density& src) {
    Density d;
    const DensityKernel inner = src.kernel_;
    d.kernel_ = [inner](double t, double u) { return inner(u, t); };
    d.family_ = src.family_;
    d.reflected_ = !src.reflected_;
    for (auto it = src.breakpoints_.rbegin(); it != src.breakpoints_.rend(); ++it) {
      d.breakpoints_.push_back(1.0 - *it);
    }
    if (src.polynomial_) d.polynomial_ = binomial_reflect(*src.polynomial_);

    if (src.family_ == Family::beta) {
      const double alpha = src.params_[1];
      const double beta = src.params_[0];
      d.params_ = {alpha, beta};
      d.shape_ = beta_shape(alpha, beta, 1.0 / std::beta(alpha, beta));
      d.name_ = join_params("beta", d.params_);
      d.reflected_ = false;
      return d;
    }

    d.params_ = src.params_;
    d.name_ = src.reflected_ ? src.name_.substr(std::string_view("reflect:").size())
                             : "reflect:" + src.name_;
    const ShapeReport& s = src.shape_;
    ShapeReport r;
    switch (s.monotonicity) {
      case Monotonicity::increasing: r.monotonicity = Monotonicity::decreasing; break;
      case Monotonicity::decreasing: r.monotonicity = Monotonicity::increasing; break;
      default: r.monotonicity = s.monotonicity; break;
    }
    r.convexity = s.convexity;
    r.general_case = s.general_case;
    r.f_at_0 = s.f_at_1;
    r.f_at_1 = s.f_at_0;
    r.numerically_inferred = s.numerically_inferred;
    r.low_confidence = s.low_confidence;
    // -g'(0+) = f'(1-) for g(t) = f(1 - t).
    if (r.monotonicity == Monotonicity::constant) {
      r.neg_deriv_at_0 = 0.0;
    } else if (r.decreasing()) {
      if (std::isinf(r.f_at_0)) {
        r.neg_deriv_at_0 = kInf;
      } else {
        const double h = 1e-6;
        const double slope = (src.at(1.0 - h, h) - src.at(1.0 - 2.0 * h, 2.0 * h)) / h;
        if (slope >= 0.0) r.neg_deriv_at_0 = slope;
      }
    }
    d.shape_ = r;
    return d;
  }

 private:
  static void validate(const Density& d) {
    constexpr int kGrid = 1000;
    for (int i = 0; i < kGrid; ++i) {
      const double t = (i + 0.5) / kGrid;
      const double v = d.at(t, 1.0 - t);
      if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream msg;
        msg << "density " << d.name_ << " is not positive and finite at t = " << t;
        throw DensityError(msg.str());
      }
    }
    try {
      const auto r = quad::integrate_unit(
          [&](double t, double u) { return d.at(t, u); }, d.breakpoints_, 1e-8);
      if (!std::isfinite(r.value)) throw NonIntegrableError("integral is not finite");
    } catch (const quad::QuadratureError& e) {
      // Slow convergence with a finite estimate still certifies a finite integral.
      if (!std::isfinite(e.partial_estimate()) || !std::isfinite(e.error_estimate())) {
        throw NonIntegrableError("density " + d.name_ + " is not integrable: " + e.what());
      }
    }
  }
};

std::string_view to_string(Family f) {
  switch (f) {
    case Family::beta: return "beta";
    case Family::kuttner: return "kuttner";
    case Family::power: return "power";
    case Family::gegenbauer: return "gegenbauer";
    case Family::piecewise_constant: return "piecewise_constant";
    case Family::custom: return "custom";
  }
  return "custom";
}

std::string_view to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::increasing: return "increasing";
    case Monotonicity::decreasing: return "decreasing";
    case Monotonicity::constant: return "constant";
    case Monotonicity::neither: return "neither";
  }
  return "neither";
}

std::string_view to_string(Convexity c) {
  switch (c) {
    case Convexity::convex: return "convex";
    case Convexity::concave: return "concave";
    case Convexity::linear: return "linear";
    case Convexity::neither: return "neither";
  }
  return "neither";
}

Family family_from_string(std::string_view name) {
  for (Family f : {Family::beta, Family::kuttner, Family::power, Family::gegenbauer,
                   Family::piecewise_constant, Family::custom}) {
    if (to_string(f) == name) return f;
  }
  throw DensityError("unknown density family '" + std::string(name) + "'");
}

std::string Density::describe() const { return name_; }

Density make_density(Family family, std::initializer_list<double> params) {
  return make_density(family, std::span<const double>(params.begin(), params.size()));
}

Density make_density(Family family, std::span<const double> params) {
  std::vector<double> p(params.begin(), params.end());
  for (double v : p) require(std::isfinite(v), "density parameters must be finite");
  switch (family) {
    case Family::beta: {
      require(p.size() == 2, "beta density takes parameters (alpha, beta)");
      const double alpha = p[0];
      const double beta = p[1];
      require(alpha > 0.0, "beta density requires alpha > 0");
      require(beta > 0.0, "beta density requires beta > 0");
      const double norm = 1.0 / std::beta(alpha, beta);
      require(std::isfinite(norm) && norm > 0.0, "beta normalization is not representable");
      const double a = alpha - 1.0;
      const double b = beta - 1.0;
      DensityKernel k = [=](double t, double u) {
        return std::pow(u, a) * std::pow(t, b) * norm;
      };
      std::optional<std::vector<double>> poly;
      if (alpha == 1.0 && beta == 1.0) poly = std::vector<double>{1.0};
      if (alpha == 2.0 && beta == 1.0) poly = std::vector<double>{2.0, -2.0};
      if (alpha == 1.0 && beta == 2.0) poly = std::vector<double>{0.0, 2.0};
      return DensityBuilder::build(std::move(k), family, p, beta_shape(alpha, beta, norm),
                                   join_params("beta", p), {}, poly);
    }
    case Family::kuttner: {
      require(p.size() == 2, "kuttner density takes parameters (delta, lambda)");
      const double delta = p[0];
      const double lambda = p[1];
      require(delta > 0.0, "kuttner density requires delta > 0");
      require(lambda > 0.0, "kuttner density requires lambda > 0");
      DensityKernel k = [=](double t, double u) {
        // 1 - t^delta, computed from u near t = 1.
        const double base = t < 0.5 ? -std::expm1(delta * std::log(t))
                                    : -std::expm1(delta * std::log1p(-u));
        return std::pow(base, lambda);
      };
      std::optional<std::vector<double>> poly;
      if (lambda == 1.0 && delta == std::floor(delta) && delta <= 4.0) {
        std::vector<double> c(static_cast<std::size_t>(delta) + 1, 0.0);
        c.front() = 1.0;
        c.back() = -1.0;
        poly = c;
      }
      return DensityBuilder::build(std::move(k), family, p, kuttner_shape(delta, lambda),
                                   join_params("kuttner", p), {}, poly);
    }
    case Family::power: {
      require(p.size() == 1, "power density takes one parameter (a)");
      const double a = p[0];
      if (a >= 1.0) throw NonIntegrableError("power density t^-a is not integrable for a >= 1");
      require(a > 0.0, "power density requires 0 < a < 1");
      DensityKernel k = [=](double t, double) { return std::pow(t, -a); };
      ShapeReport s = power_shape(1.0, -a);
      s.neg_deriv_at_0 = kInf;
      s.deriv_shape = share(power_shape(a, -a - 1.0));
      return DensityBuilder::build(std::move(k), family, p, s, join_params("power", p));
    }
    case Family::gegenbauer: {
      require(p.size() == 1, "gegenbauer density takes one parameter (nu)");
      const double nu = p[0];
      require(nu > -0.5, "gegenbauer density requires nu > -1/2");
      const double e = nu - 0.5;
      DensityKernel k = [=](double t, double u) { return std::pow(u * (1.0 + t), e); };
      std::optional<std::vector<double>> poly;
      if (e == 0.0) poly = std::vector<double>{1.0};
      if (e == 1.0) poly = std::vector<double>{1.0, 0.0, -1.0};
      return DensityBuilder::build(std::move(k), family, p, gegenbauer_shape(nu),
                                   join_params("gegenbauer", p), {}, poly);
    }
    case Family::piecewise_constant: {
      require(p.size() >= 3 && p.size() % 2 == 1,
              "piecewise_constant takes n+1 breakpoints followed by n levels");
      const std::size_t n = (p.size() - 1) / 2;
      std::vector<double> b(p.begin(), p.begin() + static_cast<long>(n + 1));
      std::vector<double> levels(p.begin() + static_cast<long>(n + 1), p.end());
      return make_piecewise_constant(std::move(b), std::move(levels));
    }
    case Family::custom:
      throw DensityError("custom densities are built with make_custom");
  }
  throw DensityError("unknown density family");
}

namespace {

Density build_piecewise(std::vector<double> b, std::vector<double> levels, bool rational,
                        std::string name) {
  require(b.size() >= 2 && levels.size() + 1 == b.size(),
          "piecewise_constant needs one more breakpoint than levels");
  require(b.front() == 0.0 && b.back() == 1.0, "piecewise_constant breakpoints must span [0, 1]");
  for (std::size_t i = 1; i < b.size(); ++i) {
    require(b[i] > b[i - 1], "piecewise_constant breakpoints must be strictly increasing");
  }
  for (double l : levels) require(l > 0.0 && std::isfinite(l), "piecewise_constant levels must be positive");

  std::vector<double> interior(b.begin() + 1, b.end() - 1);
  const bool constant =
      std::all_of(levels.begin(), levels.end(), [&](double l) { return l == levels.front(); });

  ShapeReport s;
  s.general_case = !rational && !constant;
  s.f_at_0 = levels.front();
  s.f_at_1 = levels.back();
  s.neg_deriv_at_0 = 0.0;
  if (constant) {
    s.monotonicity = Monotonicity::constant;
    s.convexity = Convexity::linear;
  } else {
    // Steps are weakly monotone; they count as monotone only in the general case.
    const bool up = std::is_sorted(levels.begin(), levels.end());
    const bool down = std::is_sorted(levels.rbegin(), levels.rend());
    if (s.general_case && up) s.monotonicity = Monotonicity::increasing;
    if (s.general_case && down) s.monotonicity = Monotonicity::decreasing;
    s.convexity = Convexity::neither;
  }

  std::vector<double> params = b;
  params.insert(params.end(), levels.begin(), levels.end());
  DensityKernel k = [b, levels](double t, double) {
    const auto it = std::upper_bound(b.begin() + 1, b.end() - 1, t);
    return levels[static_cast<std::size_t>(it - (b.begin() + 1))];
  };
  std::optional<std::vector<double>> poly;
  if (constant) poly = std::vector<double>{levels.front()};
  return DensityBuilder::build(std::move(k), Family::piecewise_constant, std::move(params), s,
                               std::move(name), std::move(interior), poly);
}

std::string piecewise_name(const std::vector<std::string>& b, std::span<const double> levels) {
  std::string s = "piecewise_constant:";
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (i) s += ',';
    s += b[i];
  }
  s += ';';
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (i) s += ',';
    s += format_number(levels[i]);
  }
  return s;
}

}  // namespace

Density make_piecewise_constant(std::vector<double> breakpoints, std::vector<double> levels) {
  std::vector<std::string> names;
  for (double v : breakpoints) names.push_back(format_number(v));
  std::string name = piecewise_name(names, levels);
  return build_piecewise(std::move(breakpoints), std::move(levels), false, std::move(name));
}

Density make_piecewise_constant_rational(std::vector<std::pair<long, long>> breakpoints,
                                         std::vector<double> levels) {
  std::vector<double> b;
  std::vector<std::string> names;
  for (const auto& [num, den] : breakpoints) {
    require(den > 0, "rational breakpoint needs a positive denominator");
    b.push_back(static_cast<double>(num) / static_cast<double>(den));
    names.push_back(den == 1 ? std::to_string(num)
                             : std::to_string(num) + "/" + std::to_string(den));
  }
  std::string name = piecewise_name(names, levels);
  return build_piecewise(std::move(b), std::move(levels), true, std::move(name));
}

Density make_custom(DensityKernel kernel, bool general_case, std::string name) {
  ShapeReport s = infer_shape([&](double t) { return kernel(t, 1.0 - t); });
  s.general_case = general_case;
  return DensityBuilder::build(std::move(kernel), Family::custom, {}, s, std::move(name));
}

Density make_custom(std::function<double(double)> f, bool general_case, std::string name) {
  return make_custom(DensityKernel([f = std::move(f)](double t, double) { return f(t); }),
                     general_case, std::move(name));
}

Density make_quadratic(double a, double b) {
  require(b > 0.0 && b <= a, "quadratic density a - b t^2 requires 0 < b <= a");
  DensityKernel k = [=](double t, double) { return a - b * t * t; };
  ShapeReport s;
  s.monotonicity = Monotonicity::decreasing;
  s.convexity = Convexity::concave;
  s.f_at_0 = a;
  s.f_at_1 = a - b;
  s.neg_deriv_at_0 = 0.0;
  ShapeReport d = power_shape(2.0 * b, 1.0);
  s.deriv_shape = share(d);
  std::vector<double> params{a, b};
  return DensityBuilder::build(std::move(k), Family::custom, params, s,
                               join_params("quadratic", params), {},
                               std::vector<double>{a, 0.0, -b});
}

Density reflect(const Density& d) { return DensityBuilder::reflected(d); }

ShapeReport shape_report(const Density& d) { return d.shape(); }

namespace {

struct SampledShape {
  Monotonicity mono;
  Convexity conv;
};

SampledShape sample_shape(const std::function<double(double)>& f, int grid) {
  std::vector<double> v(static_cast<std::size_t>(grid));
  double scale = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double t = (i + 1.0) / (grid + 1.0);
    v[static_cast<std::size_t>(i)] = f(t);
    scale = std::max(scale, std::abs(v[static_cast<std::size_t>(i)]));
  }
  const double eps = 1e-12 * scale;
  bool up = true, down = true, flat = true;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double d = v[i] - v[i - 1];
    if (d < -eps) up = false;
    if (d > eps) down = false;
    if (std::abs(d) > eps) flat = false;
  }
  bool convex = true, concave = true, straight = true;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const double d2 = v[i + 1] - 2.0 * v[i] + v[i - 1];
    const double local = 1e-10 * (std::abs(v[i + 1]) + std::abs(v[i]) + std::abs(v[i - 1]));
    if (d2 < -local) convex = false;
    if (d2 > local) concave = false;
    if (std::abs(d2) > local) straight = false;
  }
  SampledShape s{};
  s.mono = flat ? Monotonicity::constant
                : (up ? Monotonicity::increasing
                      : (down ? Monotonicity::decreasing : Monotonicity::neither));
  s.conv = straight ? Convexity::linear
                    : (convex ? Convexity::convex
                              : (concave ? Convexity::concave : Convexity::neither));
  return s;
}

double endpoint_limit(const std::function<double(double)>& f, bool at_zero) {
  auto at = [&](double h) { return at_zero ? f(h) : f(1.0 - h); };
  const double v1 = at(1e-6);
  const double v2 = at(1e-9);
  const double v3 = at(1e-12);
  const double mag = std::max({1.0, std::abs(v1), std::abs(v2)});
  if (std::abs(v3 - v2) <= 1e-5 * mag) return v3;
  if (v3 > v2 && v2 > v1 && (v3 - v2) > (v2 - v1) * 0.5) return kInf;
  return v3;
}

}  // namespace

ShapeReport infer_shape(const std::function<double(double)>& f, int grid) {
  const SampledShape coarse = sample_shape(f, grid);
  const SampledShape fine = sample_shape(f, 2 * grid);
  ShapeReport s;
  s.numerically_inferred = true;
  if (coarse.mono == fine.mono && coarse.conv == fine.conv) {
    s.monotonicity = coarse.mono;
    s.convexity = coarse.conv;
  } else {
    s.low_confidence = true;
  }
  s.general_case = s.monotonicity != Monotonicity::constant;
  s.f_at_0 = std::max(0.0, endpoint_limit(f, true));
  s.f_at_1 = std::max(0.0, endpoint_limit(f, false));
  if (std::isinf(s.f_at_0) && s.decreasing()) {
    s.neg_deriv_at_0 = kInf;
  } else {
    const double h = 1e-6;
    const double slope = -(f(2.0 * h) - f(h)) / h;
    if (slope >= 0.0) s.neg_deriv_at_0 = slope;
  }
  return s;
}

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DensityError("cannot parse number '" + std::string(s) + "'");
  }
  return v;
}

std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_number(part));
  return out;
}

std::pair<long, long> parse_rational(std::string_view s) {
  const auto parts = split(s, '/');
  auto as_long = [](std::string_view p) {
    long v = 0;
    const auto res = std::from_chars(p.data(), p.data() + p.size(), v);
    if (res.ec != std::errc() || res.ptr != p.data() + p.size()) {
      throw DensityError("cannot parse rational breakpoint '" + std::string(p) + "'");
    }
    return v;
  };
  if (parts.size() == 1) return {as_long(parts[0]), 1};
  if (parts.size() == 2) return {as_long(parts[0]), as_long(parts[1])};
  throw DensityError("cannot parse rational breakpoint '" + std::string(s) + "'");
}

}  // namespace

Density parse_density_spec(std::string_view spec) {
  constexpr std::string_view kReflect = "reflect:";
  if (spec.substr(0, kReflect.size()) == kReflect) {
    return reflect(parse_density_spec(spec.substr(kReflect.size())));
  }
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) {
    if (spec == "uniform") return make_density(Family::beta, {1.0, 1.0});
    throw DensityError("density spec must look like family:p1,p2,... (got '" +
                       std::string(spec) + "')");
  }
  const std::string_view family = spec.substr(0, colon);
  const std::string_view rest = spec.substr(colon + 1);
  if (family == "quadratic") {
    const auto p = parse_list(rest);
    require(p.size() == 2, "quadratic density takes parameters (a, b)");
    return make_quadratic(p[0], p[1]);
  }
  const Family f = family_from_string(family);
  if (f == Family::piecewise_constant) {
    const auto halves = split(rest, ';');
    require(halves.size() == 2, "piecewise_constant spec is b0,...,bn;l1,...,ln");
    const auto levels = parse_list(halves[1]);
    const auto parts = split(halves[0], ',');
    const bool rational = std::any_of(parts.begin(), parts.end(), [](const std::string& p) {
      return p.find('/') != std::string::npos;
    });
    if (rational) {
      std::vector<std::pair<long, long>> b;
      for (const auto& p : parts) b.push_back(parse_rational(p));
      return make_piecewise_constant_rational(std::move(b), levels);
    }
    return make_piecewise_constant(parse_list(halves[0]), levels);
  }
  const auto params = parse_list(rest);
  return make_density(f, params);
}

}  // namespace oscilla
