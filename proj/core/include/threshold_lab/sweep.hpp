#pragma once

// Posterior-vs-N grids over several significance levels, first-crossing
// search, monotonicity diagnostics and CSV/JSON serialization.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <stdexcept>
#include <vector>

#include "threshold_lab/bayes.hpp"
#include "threshold_lab/binomial.hpp"

namespace threshold_lab {

/// 20, 40, 60, 80, 100, 200, ..., 1000, 2000, ..., 10000 (15 points).
std::vector<std::int64_t> default_n_values();
/// .05, .01, .001, .0001.
std::vector<double> default_alphas();

/// n_values strictly increasing and positive; alphas strictly decreasing in (0, 1).
class SweepGrid {
 public:
  SweepGrid();  // the default 4 x 15 grid
  SweepGrid(std::vector<std::int64_t> n_values, std::vector<double> alphas,
            SelectionMode mode = SelectionMode::NearestToAlpha,
            TailConvention tail = TailConvention::TwoSidedSymmetric, BetaPrior prior = {},
            double prior_prob_h0 = 0.5);

  const std::vector<std::int64_t>& n_values() const noexcept { return n_values_; }
  const std::vector<double>& alphas() const noexcept { return alphas_; }
  SelectionMode mode() const noexcept { return mode_; }
  TailConvention tail() const noexcept { return tail_; }
  const BetaPrior& prior() const noexcept { return prior_; }
  double prior_prob_h0() const noexcept { return prior_prob_h0_; }
  std::size_t size() const noexcept { return n_values_.size() * alphas_.size(); }

 private:
  std::vector<std::int64_t> n_values_;
  std::vector<double> alphas_;
  SelectionMode mode_;
  TailConvention tail_;
  BetaPrior prior_;
  double prior_prob_h0_;
};

/// One (alpha, n) cell. Cells where no s reaches alpha keep their place in the
/// grid with feasible = false; their numeric fields are then meaningless.
struct SweepRow {
  double alpha = 0.0;
  std::int64_t n = 0;
  bool feasible = false;
  std::int64_t s_selected = 0;
  double p_achieved = 0.0;
  double log_bf01 = 0.0;
  double posterior_h0 = 0.0;
  SelectionMode mode = SelectionMode::NearestToAlpha;
  TailConvention tail = TailConvention::TwoSidedSymmetric;
};

SweepRow evaluate_cell(double alpha, std::int64_t n, const SweepGrid& grid);

/// Rows in alpha-major, n-minor order. `threads` = 0 picks the hardware
/// concurrency; output is identical for every thread count.
std::vector<SweepRow> run_sweep(const SweepGrid& grid, unsigned threads = 0);

struct Crossing {
  std::int64_t n = 0;
  std::int64_t s = 0;
  double p_achieved = 0.0;
  double posterior_h0 = 0.0;
};

/// First n in [1, n_max] whose posterior reaches `level` (first touch: later n
/// may dip below again). Infeasible n are skipped. nullopt when none does.
std::optional<Crossing> find_crossing(double alpha, double level,
                                      SelectionMode mode = SelectionMode::NearestToAlpha,
                                      TailConvention tail = TailConvention::TwoSidedSymmetric,
                                      const BetaPrior& prior = {}, std::int64_t n_max = 20000);

struct JitterEntry {
  double alpha = 0.0;
  std::int64_t n_prev = 0;
  std::int64_t n = 0;
  double posterior_drop = 0.0;  // posterior(n_prev) - posterior(n), > 0
};

/// Adjacent feasible rows of the same alpha series where the posterior falls
/// as n grows.
std::vector<JitterEntry> jitter_report(const std::vector<SweepRow>& rows);

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(std::string_view text);

/// Header: alpha,n,s_selected,p_achieved,log_bf01,posterior_h0,mode,tail.
/// Reals use 12 significant digits; infeasible cells print NA.
void write_csv(const std::vector<SweepRow>& rows, std::ostream& out);
/// Array of objects with the CSV column names; infeasible cells are null.
void write_json(const std::vector<SweepRow>& rows, std::ostream& out);
void emit(const std::vector<SweepRow>& rows, OutputFormat format, std::ostream& out);

/// Writes to a file; failures raise SweepIoError naming the path.
void emit(const std::vector<SweepRow>& rows, OutputFormat format, const std::filesystem::path& destination);

class SweepIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inverse of write_csv / write_json. Throws std::invalid_argument on
/// malformed input.
std::vector<SweepRow> parse_csv(std::istream& in);
std::vector<SweepRow> parse_json(std::istream& in);

}  // namespace threshold_lab
