#ifndef CXORDER_CLI_HPP
#define CXORDER_CLI_HPP

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "cxorder/error.hpp"
#include "cxorder/json_io.hpp"
#include "cxorder/measure.hpp"
#include "cxorder/oracle.hpp"
#include "cxorder/ordering.hpp"
#include "cxorder/quadrature.hpp"

namespace cxorder::cli {

enum class Format { Text, Json };

enum class Engine { Global, Crossing, Ohlin, LevinSteckin, Szostok };

struct RunConfig {
  std::string subcommand = "check";
  int order = 1;
  double tolerance = kDefaultTolerance;
  std::vector<std::string> inputs;
  Format format = Format::Text;
  Engine engine = Engine::Global;
  std::uint64_t seed = 42;
  int grid = 2001;
  int trials = 10000;
  int upto = 3;
  /// Target interval for builtin:<rule> inputs; [-1, 1] when unset.
  std::optional<std::pair<double, double>> interval;
};

inline constexpr int kExitHolds = 0;
inline constexpr int kExitNotOrdered = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitInputError = 3;

/// `builtin:<rule>` or a path to a measure-spec JSON file.
inline SignedMeasure load_measure(const std::string& source, const RunConfig& cfg) {
  constexpr std::string_view prefix = "builtin:";
  if (source.starts_with(prefix)) {
    const QuadratureRule rule = builtin(source.substr(prefix.size()));
    if (cfg.interval) return rescale(rule, cfg.interval->first, cfg.interval->second);
    return rule.measure;
  }
  std::ifstream in(source);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + source + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return measure_from_text(ss.str());
}

namespace detail {

inline int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Holds:
    case Verdict::HoldsReversed: return kExitHolds;
    case Verdict::NotOrdered: return kExitNotOrdered;
    case Verdict::Inconclusive: return kExitInconclusive;
  }
  return kExitInconclusive;
}

inline std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

inline void print_list(std::ostream& out, const char* label, const std::vector<double>& xs) {
  out << label << ":";
  for (double x : xs) out << ' ' << num(x);
  out << '\n';
}

inline void print_text(std::ostream& out, const OrderingVerdict& v, std::string_view title) {
  out << title << ": " << to_string(v.verdict);
  if (v.verdict == Verdict::Inconclusive) out << " (" << to_string(v.reason) << ')';
  out << "\norder n: " << v.order << "\nm: " << v.m << '\n';
  print_list(out, "crossings", v.crossings);
  for (const auto& c : v.checkpoints) out << "checkpoint " << num(c.x) << ": " << num(c.value) << '\n';
  print_list(out, "endpoint residuals", v.endpoint_residuals);
  if (v.witness) {
    const Witness& w = *v.witness;
    if (w.kind == Witness::Kind::Spline)
      out << "witness: (t - " << num(w.param) << ")_+^" << w.degree << '\n';
    else
      out << "witness: " << (w.sign < 0 ? "-" : "") << "(t - " << num(w.center) << ")^" << w.param << '\n';
  }
}

inline void require_inputs(const RunConfig& cfg, std::size_t n) {
  if (cfg.inputs.size() != n)
    throw Error(ErrorCode::InvalidArgument, cfg.subcommand + " expects " + std::to_string(n) + " input(s)");
}

inline OrderingVerdict run_engine(const RunConfig& cfg, const SignedMeasure& a, const SignedMeasure& b) {
  const bool n1 = cfg.engine != Engine::Global && cfg.engine != Engine::Crossing;
  if (n1 && cfg.order != 1)
    throw Error(ErrorCode::InvalidArgument, "the ohlin, levin-steckin and szostok engines need --order 1");
  switch (cfg.engine) {
    case Engine::Global: return global_check(a, b, cfg.order, cfg.tolerance);
    case Engine::Crossing: return crossing_decision(a, b, cfg.order, cfg.tolerance);
    case Engine::Ohlin: return ohlin_check(a, b, cfg.tolerance);
    case Engine::LevinSteckin: return levin_steckin_check(a, b, cfg.tolerance);
    case Engine::Szostok: return szostok_check(a, b, cfg.tolerance).verdict;
  }
  return global_check(a, b, cfg.order, cfg.tolerance);
}

inline int run_check(const RunConfig& cfg, std::ostream& out) {
  require_inputs(cfg, 2);
  const SignedMeasure a = load_measure(cfg.inputs[0], cfg), b = load_measure(cfg.inputs[1], cfg);
  const OrderingVerdict v = run_engine(cfg, a, b);
  if (cfg.format == Format::Json)
    out << to_json(v).dump(2) << '\n';
  else
    print_text(out, v, "verdict");
  return exit_code(v.verdict);
}

inline int run_compare(const RunConfig& cfg, std::ostream& out) {
  require_inputs(cfg, 2);
  const SignedMeasure a = load_measure(cfg.inputs[0], cfg), b = load_measure(cfg.inputs[1], cfg);
  const Comparison c = compare(a, b, cfg.order, cfg.tolerance);
  if (cfg.format == Format::Json) {
    json j;
    j["global"] = to_json(c.global);
    j["crossing"] = to_json(c.crossing);
    out << j.dump(2) << '\n';
  } else {
    print_text(out, c.global, "global");
    print_text(out, c.crossing, "crossing");
  }
  return exit_code(c.global.verdict);
}

inline int run_moments(const RunConfig& cfg, std::ostream& out) {
  require_inputs(cfg, 1);
  if (cfg.upto < 0) throw Error(ErrorCode::InvalidArgument, "--upto must be non-negative");
  const SignedMeasure mu = load_measure(cfg.inputs[0], cfg);
  std::vector<double> ms;
  for (int k = 0; k <= cfg.upto; ++k) ms.push_back(moment(mu, k));
  if (cfg.format == Format::Json)
    out << json(ms).dump() << '\n';
  else
    print_list(out, "moments", ms);
  return kExitHolds;
}

inline int run_hfunction(const RunConfig& cfg, std::ostream& out) {
  require_inputs(cfg, 2);
  const SignedMeasure a = load_measure(cfg.inputs[0], cfg), b = load_measure(cfg.inputs[1], cfg);
  const HProfile prof = h_sequence(a, b, cfg.order, cfg.tolerance);
  json j;
  j["order_n"] = cfg.order;
  j["h"] = json::array();
  for (const auto& h : prof.h) j["h"].push_back(to_json(h));
  j["route_discrepancy"] = prof.route_discrepancy;
  if (cfg.format == Format::Json) {
    out << j.dump(2) << '\n';
  } else {
    for (std::size_t k = 0; k < prof.h.size(); ++k)
      out << "H_" << k << ": " << prof.h[k].piece_count() << " pieces, H_" << k
          << "(b) = " << num(prof.endpoint_values[k]) << '\n';
    print_list(out, "crossings of H_{n-1}", prof.catalogue.points);
    out << "route discrepancy: " << num(prof.route_discrepancy) << '\n';
  }
  return kExitHolds;
}

inline int run_oracle(const RunConfig& cfg, std::ostream& out) {
  require_inputs(cfg, 2);
  const SignedMeasure a = load_measure(cfg.inputs[0], cfg), b = load_measure(cfg.inputs[1], cfg);
  const GridReport grid = grid_report(a, b, cfg.order, cfg.grid, cfg.tolerance);
  const SuiteResult suite = random_nconvex_suite(a, b, cfg.order, cfg.trials, cfg.seed, cfg.tolerance);
  if (cfg.format == Format::Json) {
    json j;
    j["order_n"] = cfg.order;
    j["grid_holds"] = grid.holds;
    j["moments_match"] = grid.moments_match;
    j["worst_x"] = grid.worst_x;
    j["worst_margin"] = grid.worst_margin;
    j["trials"] = suite.trials;
    j["seed"] = cfg.seed;
    j["violations"] = suite.violations;
    out << j.dump(2) << '\n';
  } else {
    out << "grid condition: " << (grid.holds ? "holds" : "fails") << " (worst margin " << num(grid.worst_margin)
        << " at x = " << num(grid.worst_x) << ")\n";
    out << "random n-convex suite: " << suite.violations << " violation(s) in " << suite.trials << " trials\n";
  }
  return grid.holds && suite.violations == 0 ? kExitHolds : kExitNotOrdered;
}

}  // namespace detail

/// Runs one subcommand. Input problems are reported on `err` as a single line
/// and mapped to exit status 3.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.order < 1) throw Error(ErrorCode::OrderOverflow, "--order must be at least 1");
    if (!(cfg.tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "--tol must be positive");
    if (cfg.subcommand == "check") return detail::run_check(cfg, out);
    if (cfg.subcommand == "compare") return detail::run_compare(cfg, out);
    if (cfg.subcommand == "moments") return detail::run_moments(cfg, out);
    if (cfg.subcommand == "hfunction") return detail::run_hfunction(cfg, out);
    if (cfg.subcommand == "oracle") return detail::run_oracle(cfg, out);
    throw Error(ErrorCode::InvalidArgument, "unknown subcommand '" + cfg.subcommand + "'");
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

/// Parses argv with CLI11 and runs. Usage errors exit with 3 as well.
inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Checks (n+1)-convex ordering of signed measures"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string format = "text", engine = "global";
  std::vector<double> interval;

  auto common = [&](CLI::App* sub, std::size_t n_inputs) {
    sub->add_option("--tol", cfg.tolerance, "relative tolerance")->capture_default_str();
    sub->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--interval", interval, "map builtin rules onto [a, b]")->expected(2);
    sub->add_option("inputs", cfg.inputs, "builtin:<rule> or measure-spec JSON file")
        ->required()
        ->expected(static_cast<int>(n_inputs));
  };
  auto ordered = [&](CLI::App* sub) {
    sub->add_option("--order,-n", cfg.order, "n: compare against n-convex functions")->capture_default_str();
  };

  auto* check = app.add_subcommand("check", "decide mu1 <= mu2 in the (n+1)-convex order");
  common(check, 2);
  ordered(check);
  check->add_option("--engine", engine, "global, crossing, ohlin, levin-steckin or szostok")
      ->check(CLI::IsMember({"global", "crossing", "ohlin", "levin-steckin", "szostok"}));

  auto* cmp = app.add_subcommand("compare", "run both exact engines on two measures or rules");
  common(cmp, 2);
  ordered(cmp);

  auto* mom = app.add_subcommand("moments", "print moments 0..k");
  common(mom, 1);
  mom->add_option("--upto", cfg.upto, "highest moment")->capture_default_str();

  auto* hf = app.add_subcommand("hfunction", "dump H_0..H_n");
  common(hf, 2);
  ordered(hf);

  auto* orc = app.add_subcommand("oracle", "brute-force grid and random-function checks");
  common(orc, 2);
  ordered(orc);
  orc->add_option("--trials", cfg.trials, "random n-convex functions")->capture_default_str();
  orc->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  orc->add_option("--grid", cfg.grid, "grid points")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  cfg.format = format == "json" ? Format::Json : Format::Text;
  if (engine == "crossing") cfg.engine = Engine::Crossing;
  if (engine == "ohlin") cfg.engine = Engine::Ohlin;
  if (engine == "levin-steckin") cfg.engine = Engine::LevinSteckin;
  if (engine == "szostok") cfg.engine = Engine::Szostok;
  if (interval.size() == 2) cfg.interval = std::make_pair(interval[0], interval[1]);
  return run(cfg, out, err);
}

}  // namespace cxorder::cli

#endif  // CXORDER_CLI_HPP
