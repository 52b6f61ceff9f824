#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "threshold_lab/bayes.hpp"
#include "threshold_lab/binomial.hpp"
#include "threshold_lab/power.hpp"
#include "threshold_lab/replicability.hpp"
#include "threshold_lab/sweep.hpp"

namespace threshold_lab::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kThreadsEnv = "THRESHOLD_LAB_THREADS";

// Bad user input discovered after CLI11 has finished parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

CLI::Validator open_unit_interval() {
  return CLI::Validator(
      [](std::string& value) -> std::string {
        double x = 0.0;
        if (!CLI::detail::lexical_cast(value, x)) return "'" + value + "' is not a number";
        if (!(x > 0.0 && x < 1.0)) return "value " + value + " must lie in (0, 1)";
        return {};
      },
      "in (0,1)");
}

CLI::Validator positive_real() {
  return CLI::Validator(
      [](std::string& value) -> std::string {
        double x = 0.0;
        if (!CLI::detail::lexical_cast(value, x)) return "'" + value + "' is not a number";
        if (!(x > 0.0) || !std::isfinite(x)) return "value " + value + " must be positive";
        return {};
      },
      "> 0");
}

CLI::Validator finite_real() {
  return CLI::Validator(
      [](std::string& value) -> std::string {
        double x = 0.0;
        if (!CLI::detail::lexical_cast(value, x) || !std::isfinite(x)) return "'" + value + "' is not a finite number";
        return {};
      },
      "");
}

CLI::Validator positive_count() {
  return CLI::Validator(
      [](std::string& value) -> std::string {
        long long x = 0;
        if (!CLI::detail::lexical_cast(value, x)) return "'" + value + "' is not an integer";
        if (x < 1) return "value " + value + " must be >= 1";
        return {};
      },
      ">= 1");
}

struct SelectionOptions {
  std::string mode_name = "nearest";
  std::string tail_name = "two";

  void add_to(CLI::App& cmd) {
    cmd.add_option("--mode", mode_name, "Barely-significant selection rule: nearest|strict")
        ->check(CLI::IsMember({"nearest", "strict"}))
        ->capture_default_str();
    cmd.add_option("--tail", tail_name, "Sign-test tail convention: two|one")
        ->check(CLI::IsMember({"two", "one"}))
        ->capture_default_str();
  }

  SelectionMode mode() const { return parse_mode(mode_name); }
  TailConvention tail() const { return parse_tail(tail_name); }
};

struct PriorOptions {
  double a = 1.0;
  double b = 1.0;
  double pi0 = 0.5;

  void add_to(CLI::App& cmd, bool with_pi0) {
    cmd.add_option("--prior-a", a, "Beta prior shape a under H1")->check(positive_real())->capture_default_str();
    cmd.add_option("--prior-b", b, "Beta prior shape b under H1")->check(positive_real())->capture_default_str();
    if (with_pi0) {
      cmd.add_option("--pi0", pi0, "Prior probability of H0")->check(open_unit_interval())->capture_default_str();
    }
  }

  BetaPrior prior() const { return BetaPrior{a, b}; }
};

Json selection_json(const ThresholdEvidence& point) {
  Json j;
  j["alpha"] = point.alpha;
  j["n"] = point.n;
  j["s"] = point.selection.s;
  j["p_achieved"] = point.selection.p_achieved;
  j["posterior_h0"] = point.evidence.posterior_h0;
  j["posterior_odds_h1"] = point.evidence.posterior_odds_h1;
  return j;
}

OperatingPoint parse_operating_point(const std::string& text, const char* flag) {
  const auto comma = text.find(',');
  const auto fail = [&]() -> UsageError {
    return UsageError(std::string(flag) + ": expected ALPHA,N but got '" + text + "'");
  };
  if (comma == std::string::npos) throw fail();
  OperatingPoint point;
  long long n = 0;
  if (!CLI::detail::lexical_cast(text.substr(0, comma), point.alpha)) throw fail();
  if (!CLI::detail::lexical_cast(text.substr(comma + 1), n)) throw fail();
  if (!(point.alpha > 0.0 && point.alpha < 1.0)) {
    throw UsageError(std::string(flag) + ": alpha in '" + text + "' must lie in (0, 1)");
  }
  if (n < 1) throw UsageError(std::string(flag) + ": n in '" + text + "' must be >= 1");
  point.n = n;
  return point;
}

std::vector<std::int64_t> read_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--grid: cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("--grid: '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_array()) throw UsageError("--grid: '" + path + "' must hold a JSON list of integers");
  std::vector<std::int64_t> values;
  for (const auto& item : doc) {
    if (!item.is_number_integer()) {
      throw UsageError("--grid: '" + path + "' contains non-integer entry " + item.dump());
    }
    values.push_back(item.get<std::int64_t>());
  }
  return values;
}

unsigned threads_from_environment() {
  const char* raw = std::getenv(kThreadsEnv);
  if (raw == nullptr || *raw == '\0') return 0;
  long long value = 0;
  if (!CLI::detail::lexical_cast(std::string(raw), value) || value < 1) {
    throw UsageError(std::string(kThreadsEnv) + ": expected a positive integer, got '" + raw + "'");
  }
  const unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<long long>(value, hardware));
}

void print_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evidence carried by a barely significant sign test at a given alpha", "threshold_lab"};
  app.require_subcommand(1);
  app.fallthrough(false);

  // posterior
  auto* posterior_cmd = app.add_subcommand("posterior", "Posterior probability of H0 for an observed (n, s)");
  std::int64_t post_n = 0;
  std::int64_t post_s = 0;
  PriorOptions post_prior;
  posterior_cmd->add_option("--n", post_n, "Number of trials")->required()->check(positive_count());
  posterior_cmd->add_option("--s", post_s, "Number of successes")->required()->check(CLI::NonNegativeNumber);
  post_prior.add_to(*posterior_cmd, true);

  // critical
  auto* critical_cmd = app.add_subcommand("critical", "Barely significant success count for (n, alpha)");
  std::int64_t crit_n = 0;
  double crit_alpha = 0.05;
  SelectionOptions crit_sel;
  critical_cmd->add_option("--n", crit_n, "Number of trials")->required()->check(positive_count());
  critical_cmd->add_option("--alpha", crit_alpha, "Significance threshold")->required()->check(open_unit_interval());
  crit_sel.add_to(*critical_cmd);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Posterior of H0 over an (alpha x n) grid");
  std::string grid_path;
  std::vector<double> sweep_alphas = default_alphas();
  SelectionOptions sweep_sel;
  PriorOptions sweep_prior;
  std::string sweep_format = "csv";
  std::string sweep_out;
  bool sweep_diagnostics = false;
  sweep_cmd
      ->add_option("--grid", grid_path,
                   "JSON file with a list of n values (default 20,40,60,80,100,200,400,600,800,1000,2000,4000,6000,"
                   "8000,10000)")
      ->check(CLI::ExistingFile);
  sweep_cmd->add_option("--alphas", sweep_alphas, "Comma-separated thresholds, strictly decreasing")
      ->delimiter(',')
      ->check(open_unit_interval())
      ->default_str("0.05,0.01,0.001,0.0001");
  sweep_sel.add_to(*sweep_cmd);
  sweep_prior.add_to(*sweep_cmd, true);
  sweep_cmd->add_option("--format", sweep_format, "Output format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "Output file (default: standard output)");
  sweep_cmd->add_flag("--diagnostics", sweep_diagnostics,
                      "Report non-monotone steps and the other tail convention's posteriors on standard error");

  // crossing
  auto* crossing_cmd = app.add_subcommand("crossing", "First n whose posterior of H0 reaches a level");
  double cross_alpha = 0.05;
  double cross_level = 0.5;
  std::int64_t cross_n_max = 20000;
  SelectionOptions cross_sel;
  PriorOptions cross_prior;
  crossing_cmd->add_option("--alpha", cross_alpha, "Significance threshold")->required()->check(open_unit_interval());
  crossing_cmd->add_option("--level", cross_level, "Posterior level to reach")->required()->check(open_unit_interval());
  crossing_cmd->add_option("--n-max", cross_n_max, "Largest n scanned")->check(positive_count())->capture_default_str();
  cross_sel.add_to(*crossing_cmd);
  cross_prior.add_to(*crossing_cmd, false);

  // prep
  auto* prep_cmd = app.add_subcommand("prep", "Replication probability p_rep for a one-tailed p-value");
  double prep_p = 0.05;
  prep_cmd->add_option("--p", prep_p, "Realized p-value")->required()->check(open_unit_interval());

  // power
  auto* power_cmd = app.add_subcommand("power", "Minimal n for a one-sided z-test");
  double mu0 = 0.0;
  double mu_alt = 0.0;
  double sigma = 1.0;
  double power_alpha = 0.05;
  double power_beta = 0.2;
  std::optional<std::int64_t> show_power_at;
  power_cmd->add_option("--mu0", mu0, "Mean under H0")->required()->check(finite_real());
  power_cmd->add_option("--mu-alt", mu_alt, "Mean under the alternative")->required()->check(finite_real());
  power_cmd->add_option("--sigma", sigma, "Known standard deviation")->required()->check(positive_real());
  power_cmd->add_option("--alpha", power_alpha, "Type-I rate")->required()->check(open_unit_interval());
  power_cmd->add_option("--beta", power_beta, "Largest acceptable type-II rate")->required()->check(open_unit_interval());
  power_cmd->add_option("--show-power-at", show_power_at, "Also report the power at this n")->check(positive_count());

  // diagnosticity
  auto* diag_cmd = app.add_subcommand("diagnosticity", "Posterior odds for H1 at two (alpha, n) operating points");
  std::string diag_a;
  std::string diag_b;
  SelectionOptions diag_sel;
  PriorOptions diag_prior;
  diag_cmd->add_option("--a", diag_a, "First point as ALPHA,N")->required();
  diag_cmd->add_option("--b", diag_b, "Second point as ALPHA,N")->required();
  diag_sel.add_to(*diag_cmd);
  diag_prior.add_to(*diag_cmd, false);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitUsage;
  }

  try {
    if (posterior_cmd->parsed()) {
      if (post_s > post_n) {
        throw UsageError("--s: value " + std::to_string(post_s) + " exceeds --n " + std::to_string(post_n));
      }
      const auto report = posterior_h0(BinomialOutcome{post_n, post_s}, post_prior.prior(), post_prior.pi0);
      Json j;
      j["n"] = post_n;
      j["s"] = post_s;
      j["prior_a"] = post_prior.a;
      j["prior_b"] = post_prior.b;
      j["pi0"] = post_prior.pi0;
      j["log_l0"] = report.log_l0;
      j["log_l1"] = report.log_l1;
      j["log_bf01"] = report.log_bf01;
      j["bf01"] = report.bf01;
      j["posterior_h0"] = report.posterior_h0;
      j["posterior_odds_h1"] = report.posterior_odds_h1;
      print_json(out, j);
    } else if (critical_cmd->parsed()) {
      const auto sel = select_barely_significant(crit_n, crit_alpha, crit_sel.mode(), crit_sel.tail());
      Json j;
      j["n"] = crit_n;
      j["alpha"] = crit_alpha;
      j["mode"] = std::string(to_string(crit_sel.mode()));
      j["tail"] = std::string(to_string(crit_sel.tail()));
      j["s"] = sel.s;
      j["p_achieved"] = sel.p_achieved;
      print_json(out, j);
    } else if (sweep_cmd->parsed()) {
      std::vector<std::int64_t> n_values = grid_path.empty() ? default_n_values() : read_grid_file(grid_path);
      std::optional<SweepGrid> grid;
      try {
        grid.emplace(std::move(n_values), sweep_alphas, sweep_sel.mode(), sweep_sel.tail(), sweep_prior.prior(),
                     sweep_prior.pi0);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const unsigned threads = threads_from_environment();
      const auto rows = run_sweep(*grid, threads);
      const auto format = parse_format(sweep_format);
      if (sweep_out.empty()) {
        emit(rows, format, out);
      } else {
        emit(rows, format, std::filesystem::path(sweep_out));
      }

      if (sweep_diagnostics) {
        for (const auto& entry : jitter_report(rows)) {
          err << "jitter: alpha=" << entry.alpha << " n " << entry.n_prev << " -> " << entry.n
              << " posterior drops by " << entry.posterior_drop << '\n';
        }
        const TailConvention other = sweep_sel.tail() == TailConvention::TwoSidedSymmetric
                                         ? TailConvention::OneSidedUpper
                                         : TailConvention::TwoSidedSymmetric;
        const SweepGrid alt(grid->n_values(), grid->alphas(), grid->mode(), other, grid->prior(),
                            grid->prior_prob_h0());
        const auto alt_rows = run_sweep(alt, threads);
        for (std::size_t i = 0; i < rows.size(); ++i) {
          err << "tail: alpha=" << rows[i].alpha << " n=" << rows[i].n << ' ' << to_string(rows[i].tail) << '=';
          rows[i].feasible ? err << rows[i].posterior_h0 : err << "NA";
          err << ' ' << to_string(other) << '=';
          alt_rows[i].feasible ? err << alt_rows[i].posterior_h0 : err << "NA";
          err << '\n';
        }
      }
    } else if (crossing_cmd->parsed()) {
      const auto hit =
          find_crossing(cross_alpha, cross_level, cross_sel.mode(), cross_sel.tail(), cross_prior.prior(), cross_n_max);
      Json j;
      j["alpha"] = cross_alpha;
      j["level"] = cross_level;
      j["n_max"] = cross_n_max;
      j["mode"] = std::string(to_string(cross_sel.mode()));
      j["tail"] = std::string(to_string(cross_sel.tail()));
      if (hit) {
        j["crossing"] = Json{{"n", hit->n}, {"s", hit->s}, {"p_achieved", hit->p_achieved},
                             {"posterior_h0", hit->posterior_h0}};
      } else {
        j["crossing"] = nullptr;
      }
      print_json(out, j);
    } else if (prep_cmd->parsed()) {
      const auto report = p_rep(prep_p);
      print_json(out, Json{{"p", report.p_in}, {"p_rep", report.p_rep}, {"failure_prob", report.failure_prob}});
    } else if (power_cmd->parsed()) {
      std::optional<ZTestDesign> design;
      try {
        design.emplace(mu0, mu_alt, sigma, power_alpha, power_beta);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const auto n = required_n(*design);
      Json j;
      j["mu0"] = mu0;
      j["mu_alt"] = mu_alt;
      j["sigma"] = sigma;
      j["alpha"] = power_alpha;
      j["beta"] = power_beta;
      j["sided"] = "one";
      j["required_n"] = n;
      j["achieved_power"] = achieved_power(n, *design);
      if (show_power_at) {
        j["power_at"] = Json{{"n", *show_power_at}, {"power", achieved_power(*show_power_at, *design)}};
      }
      print_json(out, j);
    } else if (diag_cmd->parsed()) {
      const auto a = parse_operating_point(diag_a, "--a");
      const auto b = parse_operating_point(diag_b, "--b");
      const auto gain = diagnosticity_gain(a, b, diag_sel.mode(), diag_prior.prior(), diag_sel.tail());
      Json j;
      j["mode"] = std::string(to_string(diag_sel.mode()));
      j["tail"] = std::string(to_string(diag_sel.tail()));
      j["a"] = selection_json(gain.at_a);
      j["b"] = selection_json(gain.at_b);
      j["odds_a"] = gain.odds_a;
      j["odds_b"] = gain.odds_b;
      j["ratio"] = gain.ratio;
      print_json(out, j);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InfeasibleSelection& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const SweepIoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace threshold_lab::cli
