#include "oscilla/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "oscilla/atlas.hpp"

namespace oscilla::cli {

namespace {

constexpr double kPi = std::numbers::pi;

// Bad flag values found after parsing.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// CSV field quoting for density specs, which contain commas.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

double default_tol() {
  const char* env = std::getenv("OSCILLA_TOL");
  if (env == nullptr || *env == '\0') return kDefaultTol;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v >= 1e-14 && v <= 1e-3)) {
    throw UsageError(std::string("OSCILLA_TOL must be a number in [1e-14, 1e-3], got '") + env +
                     "'");
  }
  return v;
}

Density parse_density_flag(const std::string& spec) {
  try {
    return parse_density_spec(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--density: ") + e.what());
  }
}

TransformKind parse_kind_flag(const std::string& name) {
  try {
    return kind_from_string(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--kind: ") + e.what());
  }
}

struct Output {
  std::ofstream file;
  std::ostream* stream = nullptr;

  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream = &fallback;
      return;
    }
    file.open(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    stream = &file;
  }
};

int cmd_eval(const std::string& spec, const std::string& kind_name, double x, double tol,
             std::ostream& out) {
  const Density d = parse_density_flag(spec);
  const TransformKind kind = parse_kind_flag(kind_name);
  const EvalResult r = eval(d, kind, x, tol);
  out << "density,kind,x,value,abs_error_estimate,method\n"
      << csv_field(d.describe()) << ',' << to_string(kind) << ',' << g17(x) << ','
      << g17(r.value) << ',' << g17(r.abs_error_estimate) << ',' << to_string(r.method) << '\n';
  return kExitOk;
}

int cmd_zeros(const std::string& spec, const std::string& kind_name, int k_max, double tol,
              const std::string& path, std::ostream& out) {
  const Density d = parse_density_flag(spec);
  const TransformKind kind = parse_kind_flag(kind_name);
  const RealFunction F = [&](double x) { return eval(d, kind, x, tol).value; };
  // Start one grid step above 0, where sine-type transforms vanish trivially.
  const double lo = kPi / 64.0;
  const double hi = (k_max + 1) * kPi;
  const int points = 64 * (k_max + 1);
  const auto zeros = scan_and_refine(F, lo, hi, points);
  Output o(path, out);
  *o.stream << "density,kind,k,lo,hi,abscissa,residual,simple\n";
  const std::string name = csv_field(d.describe());
  int k = 0;
  for (const ZeroRecord& z : zeros) {
    *o.stream << name << ',' << to_string(kind) << ',' << ++k << ',' << g17(z.lo) << ','
              << g17(z.hi) << ',' << g17(z.abscissa) << ',' << g17(z.residual) << ','
              << (z.simple ? "true" : "false") << '\n';
  }
  o.stream->flush();
  return kExitOk;
}

nlohmann::ordered_json report_json(TransformKind kind, const Prediction& p,
                                   const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["transform"] = std::string(to_string(kind));
  j["source"] = p.source;
  j["status"] = std::string(to_string(r.status()));
  j["pass"] = r.pass;
  j["horizon"] = r.horizon;
  auto intervals = nlohmann::ordered_json::array();
  for (const IntervalOutcome& io : r.intervals) {
    nlohmann::ordered_json e;
    e["item"] = io.item;
    e["k"] = io.k;
    e["interval"] = {io.lo, io.hi};
    e["expected"] = std::string(to_string(io.expected));
    e["found"] = io.found;
    e["outcome"] = std::string(to_string(io.outcome));
    intervals.push_back(std::move(e));
  }
  j["intervals"] = std::move(intervals);
  if (r.sign_outcome) j["sign_claims"] = std::string(to_string(*r.sign_outcome));
  auto violations = nlohmann::ordered_json::array();
  for (const Violation& v : r.violations) {
    nlohmann::ordered_json e;
    e["k"] = v.k;
    e["interval"] = {v.lo, v.hi};
    e["expected"] = v.expected;
    e["found"] = v.found;
    e["detail"] = v.detail;
    violations.push_back(std::move(e));
  }
  j["violations"] = std::move(violations);
  j["indeterminate"] = r.indeterminate;
  auto zeros = nlohmann::ordered_json::array();
  for (const ZeroRecord& z : r.zeros) {
    if (z.abscissa <= r.horizon) zeros.push_back(z.abscissa);
  }
  j["zeros"] = std::move(zeros);
  return j;
}

PredictionPair choose_prediction(const Density& d, const std::string& name, int k_max,
                                 std::string& chosen) {
  const bool plain_beta = d.family() == Family::beta && !d.reflected();
  if (name == "auto") {
    if (plain_beta) {
      const RegionLabel label = classify_beta_params(d.params()[0], d.params()[1]);
      chosen = std::string(to_string(label.tag));
      if (label.tag == RegionTag::unknown) return {};
      return predict(label, k_max);
    }
    chosen = "shape";
    return predict_from_shape(d.shape(), k_max);
  }
  chosen = name;
  if (name == "shape") return predict_from_shape(d.shape(), k_max);
  if (name == "kuttner") {
    if (d.family() != Family::kuttner || d.reflected()) {
      throw UsageError("--prediction kuttner needs a kuttner density");
    }
    PredictionPair p;
    p.cosine = kuttner_predict(d.params()[0], d.params()[1], k_max);
    return p;
  }
  RegionTag tag;
  try {
    tag = region_from_string(name);
  } catch (const std::invalid_argument&) {
    throw UsageError("--prediction must be auto, shape, kuttner or a region label, got '" + name +
                     "'");
  }
  if (!plain_beta) throw UsageError("region predictions need a beta density");
  RegionLabel label;
  label.tag = tag;
  label.alpha = d.params()[0];
  label.beta = d.params()[1];
  try {
    return predict(label, k_max);
  } catch (const NoPredictionError& e) {
    throw UsageError(e.what());
  }
}

int cmd_verify(const std::string& spec, const std::string& prediction, int k_max, double tol,
               std::ostream& out) {
  const Density d = parse_density_flag(spec);
  std::string chosen;
  const PredictionPair pair = choose_prediction(d, prediction, k_max, chosen);

  nlohmann::ordered_json j;
  j["density"] = d.describe();
  j["prediction"] = chosen;
  j["k_max"] = k_max;
  j["tol"] = tol;
  auto reports = nlohmann::ordered_json::array();
  bool failed = false;
  bool indeterminate = false;
  std::vector<ZeroRecord> zeros[2];
  const auto run_one = [&](TransformKind kind, const Prediction& p, int slot) {
    if (p.empty()) return;
    const VerificationReport r = verify_pattern(d, kind, p, tol);
    failed = failed || r.status() == Outcome::fail;
    indeterminate = indeterminate || r.status() == Outcome::indeterminate;
    if (slot >= 0) {
      for (const ZeroRecord& z : r.zeros) {
        if (z.abscissa <= r.horizon) zeros[slot].push_back(z);
      }
    }
    reports.push_back(report_json(kind, p, r));
  };
  run_one(TransformKind::cosine, pair.cosine, 0);
  run_one(TransformKind::sine, pair.sine, 1);
  if (pair.d_cosine) run_one(TransformKind::d_cosine, *pair.d_cosine, -1);
  if (pair.d_sine) run_one(TransformKind::d_sine, *pair.d_sine, -1);
  j["reports"] = std::move(reports);
  if (pair.no_common_zeros) {
    const double cross = min_cross_residual(d, zeros[0], zeros[1], tol);
    const bool ok = cross > kCommonZeroFloor;
    failed = failed || !ok;
    j["no_common_zeros"] = {{"min_cross_residual", cross}, {"pass", ok}};
  }
  const bool nothing = j["reports"].empty();
  const char* status = nothing ? "no_prediction" : failed ? "fail" : indeterminate ? "indeterminate" : "pass";
  j["status"] = status;
  out << j.dump(2) << '\n';
  if (failed) return kExitFail;
  if (indeterminate || nothing) return kExitIndeterminate;
  return kExitOk;
}

int cmd_sweep(const std::string& alpha, const std::string& beta, int k_max, double tol,
              unsigned jobs, const std::string& path, const std::string& format,
              std::ostream& out) {
  std::vector<double> as;
  std::vector<double> bs;
  try {
    as = parse_grid(alpha);
    bs = parse_grid(beta);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (as.front() <= 0.0 || bs.front() <= 0.0) throw UsageError("sweep grids must be positive");
  Output o(path, out);
  const bool csv = format == "csv";
  if (csv) *o.stream << csv_header() << '\n';
  SweepOptions opts;
  opts.k_max = k_max;
  opts.tol = tol;
  opts.jobs = jobs;
  opts.on_record = [&](const AtlasRecord& r) {
    *o.stream << (csv ? to_csv(r) : to_json(r)) << '\n';
    o.stream->flush();
  };
  const std::vector<AtlasRecord> records = sweep(as, bs, opts);
  std::map<std::string, int> counts;
  for (const AtlasRecord& r : records) ++counts[r.status];
  if (!path.empty()) {
    out << "status,count\n";
    for (const auto& [status, n] : counts) out << status << ',' << n << '\n';
  }
  if (counts.count("fail") || counts.count("error")) return kExitFail;
  return kExitOk;
}

int cmd_sigma(int k_max, std::ostream& out) {
  out << "k,sigma\n";
  int k = 0;
  for (double s : sigma_roots(k_max)) out << ++k << ',' << g17(s) << '\n';
  return kExitOk;
}

int cmd_steinerberger(double beta, int k_max, double tol, std::ostream& out) {
  if (!(beta > -1.0)) throw UsageError("--beta must exceed -1");
  out << "k,x,a_k,sign,expected\n";
  const auto sign_text = [](std::optional<int> s) -> const char* {
    if (!s || *s == 0) return "indeterminate";
    return *s > 0 ? "+" : "-";
  };
  for (const SteinerbergerTerm& t : steinerberger_signs(beta, k_max, tol)) {
    out << t.k << ',' << g17((t.k - 0.5) * kPi) << ',' << g17(t.value) << ','
        << sign_text(t.sign) << ',' << sign_text(steinerberger_expected_sign(beta, t.k)) << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zeros of finite Fourier transforms of densities on (0, 1)", "oscilla"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  std::string density;
  std::string kind = "cosine";
  std::string prediction = "auto";
  std::string out_path;
  std::string alpha_grid;
  std::string beta_grid;
  std::string format = "jsonl";
  double x = 0.0;
  double beta = 0.0;
  std::optional<double> tol_flag;
  int k_max = 20;
  unsigned jobs = 0;

  const auto tol_option = [&](CLI::App* sub) {
    sub->add_option("--tol", tol_flag, "Absolute tolerance (default: OSCILLA_TOL or 1e-10)")
        ->check(CLI::Range(1e-14, 1e-3));
  };
  const auto kmax_option = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--kmax", k_max, "Largest zero index k")->check(CLI::Range(1, 1000));
    if (required) o->required();
  };

  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a transform at one point");
  eval_cmd->add_option("--density", density, "Density spec, e.g. beta:0.5,2")->required();
  eval_cmd->add_option("--kind", kind, "cosine, sine, d_cosine, d_sine, *_reflected")->required();
  eval_cmd->add_option("--x", x, "Argument x >= 0")->required()->check(CLI::NonNegativeNumber);
  tol_option(eval_cmd);

  CLI::App* zeros_cmd = app.add_subcommand("zeros", "Tabulate zeros up to (kmax + 1) pi");
  zeros_cmd->add_option("--density", density, "Density spec")->required();
  zeros_cmd->add_option("--kind", kind, "Transform kind")->required();
  kmax_option(zeros_cmd, true);
  zeros_cmd->add_option("--out", out_path, "CSV output file (default: stdout)");
  tol_option(zeros_cmd);

  CLI::App* verify_cmd = app.add_subcommand("verify", "Check a predicted zero pattern");
  verify_cmd->add_option("--density", density, "Density spec")->required();
  verify_cmd->add_option("--prediction", prediction,
                         "auto, shape, kuttner or a region label such as Pc_star");
  kmax_option(verify_cmd, true);
  tol_option(verify_cmd);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Verify every cell of an (alpha, beta) grid");
  sweep_cmd->add_option("--alpha", alpha_grid, "LO:HI:STEP")->required();
  sweep_cmd->add_option("--beta", beta_grid, "LO:HI:STEP")->required();
  kmax_option(sweep_cmd, true);
  sweep_cmd->add_option("--out", out_path, "Output file")->required();
  sweep_cmd->add_option("--format", format, "jsonl or csv")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  sweep_cmd->add_option("--jobs", jobs, "Worker threads (default: all cores)")
      ->check(CLI::Range(0u, 1024u));
  tol_option(sweep_cmd);

  CLI::App* sigma_cmd = app.add_subcommand("sigma", "Positive roots of tan x = x");
  kmax_option(sigma_cmd, true);

  CLI::App* stein_cmd = app.add_subcommand("steinerberger", "Signs of a_k = S_beta((k - 1/2) pi)");
  stein_cmd->add_option("--beta", beta, "Parameter beta > -1")->required();
  kmax_option(stein_cmd, true);
  tol_option(stein_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (sigma_cmd->parsed()) return cmd_sigma(k_max, out);
    const double tol = tol_flag ? *tol_flag : default_tol();
    if (eval_cmd->parsed()) return cmd_eval(density, kind, x, tol, out);
    if (zeros_cmd->parsed()) return cmd_zeros(density, kind, k_max, tol, out_path, out);
    if (verify_cmd->parsed()) return cmd_verify(density, prediction, k_max, tol, out);
    if (sweep_cmd->parsed()) {
      return cmd_sweep(alpha_grid, beta_grid, k_max, tol, jobs, out_path, format, out);
    }
    if (stein_cmd->parsed()) return cmd_steinerberger(beta, k_max, tol, out);
  } catch (const UsageError& e) {
    err << "oscilla: " << e.what() << "\nRun with --help for more information.\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "oscilla: error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace oscilla::cli
