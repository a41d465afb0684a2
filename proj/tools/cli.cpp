#include "cli.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "output.hpp"
#include "poissonk/error.hpp"
#include "poissonk/pmf.hpp"
#include "poissonk/roots.hpp"
#include "poissonk/scan.hpp"
#include "poissonk/structure.hpp"
#include "poissonk/verify.hpp"

namespace poissonk::cli {
namespace {

// A real number or a quotient of two, e.g. "0.6026076" or "4.02373/3".
Real parse_real_expr(const std::string& text) {
  auto parse_one = [&text](const std::string& s) {
    errno = 0;
    char* end = nullptr;
    const Real v = std::strtold(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
      throw InvalidArgument(fmt::format("cannot parse '{}' as a number", text));
    }
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_one(text);
  const Real den = parse_one(text.substr(slash + 1));
  if (den == 0) throw InvalidArgument(fmt::format("zero denominator in '{}'", text));
  return parse_one(text.substr(0, slash)) / den;
}

struct Common {
  std::string format = "csv";
  std::string out_path;
  std::string tol = "1e-13";
  std::string tie_tol = "1e-9";
  std::string epsilon = "1e-12";

  Format fmt() const { return format == "json" ? Format::kJson : Format::kCsv; }
  Real tol_value() const { return positive(tol, "--tol"); }
  Real tie_tol_value() const { return positive(tie_tol, "--tie-tol"); }
  Real epsilon_value() const {
    const Real e = positive(epsilon, "--epsilon");
    if (!(e < 1)) throw InvalidArgument("--epsilon must be < 1");
    return e;
  }
  static Real positive(const std::string& s, const char* name) {
    const Real v = parse_real_expr(s);
    if (!(v > 0)) throw InvalidArgument(fmt::format("{} must be > 0, got {}", name, s));
    return v;
  }
};

Cell opt_real(const std::optional<Real>& v) { return v ? Cell{*v} : Cell{}; }
Cell idx(std::size_t n) { return static_cast<std::int64_t>(n); }

std::string join_indices(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
  return s;
}

// Emits `table` (plus, for JSON, extra top-level members) to the sink.
class Sink {
 public:
  Sink(const Common& common, std::ostream& out) : common_(common), out_(&out) {
    if (!common.out_path.empty()) {
      file_.open(common.out_path, std::ios::binary);
      if (!file_) throw InvalidArgument(fmt::format("cannot open '{}' for writing", common.out_path));
      out_ = &file_;
    }
  }

  void emit(const Table& table, const std::optional<nlohmann::ordered_json>& extra = std::nullopt) {
    if (common_.fmt() == Format::kCsv) {
      table.write_csv(*out_);
    } else if (!extra) {
      *out_ << table.to_json() << '\n';
    } else {
      nlohmann::ordered_json doc = nlohmann::ordered_json::object();
      doc["rows"] = nlohmann::ordered_json::parse(table.to_json());
      for (const auto& [key, value] : extra->items()) doc[key] = value;
      *out_ << doc.dump(2) << '\n';
    }
    out_->flush();
  }

  std::ostream& stream() { return *out_; }

 private:
  const Common& common_;
  std::ostream* out_;
  std::ofstream file_;
};

// -- pmf -------------------------------------------------------------------

struct PmfArgs {
  int k = 0;
  std::string lambda;
  std::optional<std::size_t> n_max;
};

int cmd_pmf(const PmfArgs& a, const Common& common, std::ostream& out) {
  const Params params(a.k, parse_real_expr(a.lambda));
  const PmfTable table =
      a.n_max ? build_table(params, *a.n_max) : build_adaptive_table(params, common.epsilon_value());
  const auto f = normalize(table);
  Table t({"n", "p", "f", "cumulative"});
  Real cumulative = 0;
  for (std::size_t n = 0; n <= table.n_max(); ++n) {
    cumulative += f[n];
    t.add_row({idx(n), table[n], f[n], cumulative});
  }
  Sink(common, out).emit(t);
  return kExitOk;
}

// -- roots -----------------------------------------------------------------

struct RootsArgs {
  int k = 0;
  int n = 0;
  std::string c = "1";
};

int cmd_roots(const RootsArgs& a, const Common& common, std::ostream& out) {
  const Real c = parse_real_expr(a.c);
  const RootResult r = solve_h_equals_c(a.k, a.n, c, common.tol_value());
  Table t({"k", "n", "c", "root", "bracket_low", "bracket_high", "tol", "iterations", "residual",
           "upper_bound"});
  t.add_row({static_cast<std::int64_t>(r.k), static_cast<std::int64_t>(r.n), r.c, r.root, r.bracket_low,
             r.bracket_high, r.tol, static_cast<std::int64_t>(r.iterations), h_value(r.k, r.n, r.root) - r.c,
             upper_bound_r(r.k, r.n, r.c)});
  Sink(common, out).emit(t);
  return kExitOk;
}

// -- bounds ----------------------------------------------------------------

struct KRange {
  std::optional<int> k;
  int k_min = 2;
  int k_max = 2;

  std::pair<int, int> resolve() const {
    const int lo = k ? *k : k_min;
    const int hi = k ? *k : k_max;
    if (lo < 1 || hi < lo) throw InvalidArgument(fmt::format("k range needs 1 <= k_min <= k_max, got [{}, {}]", lo, hi));
    return {lo, hi};
  }
};

int cmd_bounds(const KRange& range, const Common& common, std::ostream& out, std::ostream& err) {
  const auto [lo, hi] = range.resolve();
  const Real tol = common.tol_value();
  Table t({"k", "r_k", "r_k_upper", "t_k", "t_k_upper", "q_k", "lambda_monotone", "lambda_empirical",
           "shoulder_lambda", "status"});
  bool violation = false;
  for (int k = lo; k <= hi; ++k) {
    BoundsRecord rec{};
    try {
      rec = compute_bounds(k, tol);
    } catch (const ComputationError& e) {
      throw ComputationError(fmt::format("k = {}: {}", k, e.what()));
    }
    const bool ok = rec.bounds_hold();
    violation = violation || !ok;
    t.add_row({static_cast<std::int64_t>(k), rec.r_k, rec.r_k_upper, rec.t_k, rec.t_k_upper, opt_real(rec.q_k),
               opt_real(rec.lambda_monotone), opt_real(rec.lambda_empirical), opt_real(rec.shoulder_lambda),
               std::string(ok ? "ok" : "violation")});
  }
  Sink(common, out).emit(t);
  if (violation) err << "warning: at least one published bound is violated; see the status column\n";
  return kExitOk;
}

// -- scan ------------------------------------------------------------------

struct ScanArgs {
  KRange range;
  std::string rule = "grid";
  std::string start = "0.01";
  std::string stop = "10";
  std::size_t count = 20;
  std::string spacing = "geom";
  std::string tail_tol = "1e-12";
  bool serial = false;
};

LambdaRule parse_rule(const std::string& s) {
  if (s == "grid") return LambdaRule::kGrid;
  if (s == "empirical") return LambdaRule::kEmpirical;
  if (s == "monotone") return LambdaRule::kMonotone;
  return LambdaRule::kShoulder;
}

Table scan_table(const std::vector<ScanRow>& rows) {
  Table t({"k", "lambda", "n_max", "mass_captured", "modes", "local_maxima", "initial_increase_ok",
           "monotone_tail_from_k", "tail_strict", "first_tail_violation", "mean", "mean_mode_gap", "floor_mean",
           "thm21_ok", "conj_lower_ok", "conj_strict_ok", "block_assumption_ok", "block_min_condition", "gap_flag",
           "triple_tie_found", "error"});
  for (const auto& row : rows) {
    const Cell k = static_cast<std::int64_t>(row.point.k);
    if (!row.report) {
      std::vector<Cell> cells(t.header().size());
      cells[0] = k;
      cells[1] = row.point.lambda;
      cells.back() = row.error;
      t.add_row(std::move(cells));
      continue;
    }
    const auto& r = *row.report;
    const Cell first_violation = r.first_tail_violation ? idx(*r.first_tail_violation) : Cell{};
    const Cell block = r.block_assumption ? Cell{r.block_assumption->nonincreasing} : Cell{};
    const Cell block_min = r.block_assumption ? Cell{r.block_assumption->min_condition} : Cell{};
    t.add_row({k, row.point.lambda, idx(r.n_max), r.mass_captured, join_indices(r.mode_set.indices),
               join_indices(r.local_maxima), r.initial_increase_ok, r.monotone_tail_from_k, r.tail_strict,
               first_violation, r.mean, r.mean_mode_gap, static_cast<std::int64_t>(r.mode_bounds.floor_mean),
               r.thm21_ok, r.conj_lower_ok, r.mode_bounds.conj_strict_ok, block, block_min, r.gap_flag,
               r.triple_tie_found, std::string{}});
  }
  return t;
}

nlohmann::ordered_json summary_json(const ScanSummary& s) {
  nlohmann::ordered_json j;
  j["points"] = s.points;
  j["failures"] = s.failures;
  j["thm21_violations"] = s.thm21_violations;
  j["conj_lower_violations"] = s.conj_lower_violations;
  j["conj_strict_violations"] = s.conj_strict_violations;
  j["min_mode_violations"] = s.min_mode_violations;
  j["initial_increase_violations"] = s.initial_increase_violations;
  j["monotone_tail_failures"] = s.monotone_tail_failures;
  j["gap_flags"] = s.gap_flags;
  j["triple_ties"] = s.triple_ties;
  j["multimodal"] = s.multimodal;
  return j;
}

int cmd_scan(const ScanArgs& a, const Common& common, std::ostream& out, std::ostream& err) {
  const auto [lo, hi] = a.range.resolve();
  LambdaGrid grid;
  grid.start = parse_real_expr(a.start);
  grid.stop = parse_real_expr(a.stop);
  grid.count = a.count;
  grid.spacing = a.spacing == "lin" ? Spacing::kLinear : Spacing::kGeometric;
  const auto points = make_scan_points(lo, hi, parse_rule(a.rule), grid);

  AnalysisOptions options;
  options.epsilon = common.epsilon_value();
  options.tie_tol = common.tie_tol_value();
  options.tail_tol = Common::positive(a.tail_tol, "--tail-tol");
  const auto rows = a.serial ? scan_serial(points, options) : scan_parallel(points, options);
  const ScanSummary s = summarize(rows);

  Sink sink(common, out);
  sink.emit(scan_table(rows), summary_json(s));
  if (common.fmt() == Format::kCsv) {
    err << fmt::format(
        "summary: points={} failures={} thm21_violations={} conj_lower_violations={} conj_strict_violations={} "
        "min_mode_violations={} initial_increase_violations={} monotone_tail_failures={} gap_flags={} "
        "triple_ties={} multimodal={}\n",
        s.points, s.failures, s.thm21_violations, s.conj_lower_violations, s.conj_strict_violations,
        s.min_mode_violations, s.initial_increase_violations, s.monotone_tail_failures, s.gap_flags, s.triple_ties,
        s.multimodal);
  }
  return s.failures == 0 ? kExitOk : kExitComputation;
}

// -- verify ----------------------------------------------------------------

int cmd_verify(const Common& common, std::ostream& out) {
  const auto suites = run_all_suites();
  bool all = true;
  Sink sink(common, out);
  if (common.fmt() == Format::kJson) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& s : suites) {
      all = all && s.passed;
      arr.push_back({{"suite", s.name}, {"scope", s.scope}, {"passed", s.passed}, {"checks", s.checks},
                     {"failures", s.failures}});
    }
    sink.stream() << arr.dump(2) << '\n';
  } else {
    for (const auto& s : suites) {
      all = all && s.passed;
      sink.stream() << fmt::format("{}: {} ({}, {} checks)\n", s.name, s.passed ? "pass" : "FAIL", s.scope,
                                   s.checks);
      for (const auto& f : s.failures) sink.stream() << "  " << f << '\n';
    }
  }
  sink.stream().flush();
  return all ? kExitOk : kExitVerification;
}

// -- figs ------------------------------------------------------------------

int cmd_figs(int id, const Common& common, std::ostream& out) {
  Sink sink(common, out);
  if (id == 1) {
    Table t({"k", "q_k", "asymptote"});
    const Real asymptote = std::sqrt(Real{5}) - 1;
    for (int k = 2; k <= 100; ++k) t.add_row({static_cast<std::int64_t>(k), q_k(k), asymptote});
    sink.emit(t);
    return kExitOk;
  }
  struct Caption {
    int k;
    Real lambda;
  };
  const Caption caption = id == 2 ? Caption{4, 0.6026076L} : id == 3 ? Caption{2, 4.0L / 3} : Caption{2, 4.02373L / 3};
  const PmfTable table = build_adaptive_table(Params(caption.k, caption.lambda), common.epsilon_value());
  Table t({"n", "p"});
  for (std::size_t n = 0; n <= table.n_max(); ++n) t.add_row({idx(n), table[n]});
  sink.emit(t);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Poisson distribution of order k: pmf tables, thresholds, and structure audits", "poissonk"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common common;
  auto add_common = [&common](CLI::App* sub) {
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", common.out_path, "Write output to PATH instead of standard output");
    sub->add_option("--tol", common.tol, "Root-finding tolerance (relative)");
    sub->add_option("--tie-tol", common.tie_tol, "Relative tolerance for equal bins");
    sub->add_option("--epsilon", common.epsilon, "Mass left outside adaptive tables");
  };

  PmfArgs pmf;
  auto* pmf_cmd = app.add_subcommand("pmf", "Tabulate p_n = h_k(n; lambda) and the normalized pmf");
  pmf_cmd->add_option("--k", pmf.k, "Order k >= 1")->required();
  pmf_cmd->add_option("--lambda", pmf.lambda, "Rate lambda > 0 (a number or a quotient a/b)")->required();
  pmf_cmd->add_option("--n-max", pmf.n_max, "Last index; adaptive when omitted");
  add_common(pmf_cmd);

  RootsArgs roots;
  auto* roots_cmd = app.add_subcommand("roots", "Solve h_k(n; lambda) = c for its positive root");
  roots_cmd->add_option("--k", roots.k, "Order k >= 1")->required();
  roots_cmd->add_option("--n", roots.n, "Index n >= 1")->required();
  roots_cmd->add_option("--c", roots.c, "Right-hand side c > 0")->capture_default_str();
  add_common(roots_cmd);

  KRange bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "r_k, t_k, q_k, monotone and shoulder thresholds per k");
  auto* bounds_k = bounds_cmd->add_option("--k", bounds.k, "Single order k");
  bounds_cmd->add_option("--k-min", bounds.k_min, "First k of a range")->excludes(bounds_k);
  bounds_cmd->add_option("--k-max", bounds.k_max, "Last k of a range")->excludes(bounds_k);
  add_common(bounds_cmd);

  ScanArgs scan;
  auto* scan_cmd = app.add_subcommand("scan", "Structure audit over a (k, lambda) grid");
  auto* scan_k = scan_cmd->add_option("--k", scan.range.k, "Single order k");
  scan_cmd->add_option("--k-min", scan.range.k_min, "First k")->excludes(scan_k);
  scan_cmd->add_option("--k-max", scan.range.k_max, "Last k")->excludes(scan_k);
  scan_cmd->add_option("--lambda-rule", scan.rule, "How lambda is chosen per k")
      ->check(CLI::IsMember({"grid", "empirical", "monotone", "shoulder"}))
      ->capture_default_str();
  scan_cmd->add_option("--lambda-start", scan.start, "Grid start")->capture_default_str();
  scan_cmd->add_option("--lambda-stop", scan.stop, "Grid stop (inclusive)")->capture_default_str();
  scan_cmd->add_option("--lambda-count", scan.count, "Grid points")->capture_default_str();
  scan_cmd->add_option("--spacing", scan.spacing, "Grid spacing")
      ->check(CLI::IsMember({"lin", "geom"}))
      ->capture_default_str();
  scan_cmd->add_option("--tail-tol", scan.tail_tol, "Relative rise tolerated in the tail check")
      ->capture_default_str();
  scan_cmd->add_flag("--serial", scan.serial, "Evaluate grid points on one thread");
  add_common(scan_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "Run the built-in cross-check suites");
  add_common(verify_cmd);

  int fig_id = 0;
  auto* figs_cmd = app.add_subcommand("figs", "Data behind figures 1-4");
  figs_cmd->add_option("id", fig_id, "Figure id")->required()->check(CLI::Range(1, 4));
  add_common(figs_cmd);

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      out << app.help();
      return kExitOk;
    }
    std::ostringstream msg;
    app.exit(e, msg, msg);
    err << msg.str();
    return kExitValidation;
  }

  try {
    if (*pmf_cmd) return cmd_pmf(pmf, common, out);
    if (*roots_cmd) return cmd_roots(roots, common, out);
    if (*bounds_cmd) return cmd_bounds(bounds, common, out, err);
    if (*scan_cmd) return cmd_scan(scan, common, out, err);
    if (*verify_cmd) return cmd_verify(common, out);
    if (*figs_cmd) return cmd_figs(fig_id, common, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitComputation;
  }
  return kExitValidation;
}

}  // namespace poissonk::cli
