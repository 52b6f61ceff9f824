#include "threshold_lab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include <json.hpp>

namespace threshold_lab {

namespace {

constexpr const char* kCsvHeader = "alpha,n,s_selected,p_achieved,log_bf01,posterior_h0,mode,tail";
constexpr const char* kMissing = "NA";

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

double parse_real(const std::string& token, const char* column) {
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size() || errno == ERANGE) {
    throw std::invalid_argument(std::string("bad value for ") + column + ": '" + token + "'");
  }
  return value;
}

std::int64_t parse_count(const std::string& token, const char* column) {
  errno = 0;
  char* end = nullptr;
  const long long value = std::strtoll(token.c_str(), &end, 10);
  if (token.empty() || end != token.c_str() + token.size() || errno == ERANGE) {
    throw std::invalid_argument(std::string("bad integer for ") + column + ": '" + token + "'");
  }
  return value;
}

// Rounds to the 12-digit decimal that the CSV would carry, so both formats
// describe the same numbers.
double round_to_serialized(double value) { return std::strtod(format_real(value).c_str(), nullptr); }

}  // namespace

std::vector<std::int64_t> default_n_values() {
  return {20, 40, 60, 80, 100, 200, 400, 600, 800, 1000, 2000, 4000, 6000, 8000, 10000};
}

std::vector<double> default_alphas() { return {0.05, 0.01, 0.001, 0.0001}; }

SweepGrid::SweepGrid() : SweepGrid(default_n_values(), default_alphas()) {}

SweepGrid::SweepGrid(std::vector<std::int64_t> n_values, std::vector<double> alphas, SelectionMode mode,
                     TailConvention tail, BetaPrior prior, double prior_prob_h0)
    : n_values_(std::move(n_values)),
      alphas_(std::move(alphas)),
      mode_(mode),
      tail_(tail),
      prior_(prior),
      prior_prob_h0_(prior_prob_h0) {
  if (n_values_.empty()) throw std::invalid_argument("SweepGrid: n_values is empty");
  if (alphas_.empty()) throw std::invalid_argument("SweepGrid: alphas is empty");
  for (std::size_t i = 0; i < n_values_.size(); ++i) {
    if (n_values_[i] < 1) {
      throw std::invalid_argument("SweepGrid: n values must be >= 1, got " + std::to_string(n_values_[i]));
    }
    if (i > 0 && n_values_[i] <= n_values_[i - 1]) {
      throw std::invalid_argument("SweepGrid: n values must be strictly increasing at " +
                                  std::to_string(n_values_[i]));
    }
  }
  for (std::size_t i = 0; i < alphas_.size(); ++i) {
    if (!(alphas_[i] > 0.0 && alphas_[i] < 1.0)) {
      throw std::invalid_argument("SweepGrid: alpha must lie in (0, 1), got " + format_real(alphas_[i]));
    }
    if (i > 0 && alphas_[i] >= alphas_[i - 1]) {
      throw std::invalid_argument("SweepGrid: alphas must be strictly decreasing at " + format_real(alphas_[i]));
    }
  }
  if (!(prior_prob_h0_ > 0.0 && prior_prob_h0_ < 1.0)) {
    throw std::invalid_argument("SweepGrid: prior probability of H0 must lie in (0, 1)");
  }
}

SweepRow evaluate_cell(double alpha, std::int64_t n, const SweepGrid& grid) {
  SweepRow row;
  row.alpha = alpha;
  row.n = n;
  row.mode = grid.mode();
  row.tail = grid.tail();
  try {
    const auto point = evidence_at_threshold(n, alpha, grid.mode(), grid.tail(), grid.prior(), grid.prior_prob_h0());
    row.feasible = true;
    row.s_selected = point.selection.s;
    row.p_achieved = point.selection.p_achieved;
    row.log_bf01 = point.evidence.log_bf01;
    row.posterior_h0 = point.evidence.posterior_h0;
  } catch (const InfeasibleSelection&) {
    row.feasible = false;
    row.s_selected = 0;
    row.p_achieved = std::numeric_limits<double>::quiet_NaN();
    row.log_bf01 = std::numeric_limits<double>::quiet_NaN();
    row.posterior_h0 = std::numeric_limits<double>::quiet_NaN();
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepGrid& grid, unsigned threads) {
  const std::size_t cells = grid.size();
  const std::size_t per_alpha = grid.n_values().size();
  std::vector<SweepRow> rows(cells);

  // Cost grows with n, so hand out cells largest-n first for better balance.
  std::vector<std::size_t> order(cells);
  for (std::size_t i = 0; i < cells; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return grid.n_values()[a % per_alpha] > grid.n_values()[b % per_alpha];
  });

  auto compute = [&](std::size_t index) {
    rows[index] = evaluate_cell(grid.alphas()[index / per_alpha], grid.n_values()[index % per_alpha], grid);
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cells));

  if (threads <= 1) {
    for (std::size_t i : order) compute(i);
    return rows;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t k = next.fetch_add(1); k < cells; k = next.fetch_add(1)) {
          try {
            compute(order[k]);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
            return;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::optional<Crossing> find_crossing(double alpha, double level, SelectionMode mode, TailConvention tail,
                                      const BetaPrior& prior, std::int64_t n_max) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("find_crossing: level must lie in (0, 1), got " + format_real(level));
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("find_crossing: alpha must lie in (0, 1), got " + format_real(alpha));
  }
  for (std::int64_t n = 1; n <= n_max; ++n) {
    ThresholdEvidence point;
    try {
      point = evidence_at_threshold(n, alpha, mode, tail, prior);
    } catch (const InfeasibleSelection&) {
      continue;
    }
    if (point.evidence.posterior_h0 >= level) {
      return Crossing{n, point.selection.s, point.selection.p_achieved, point.evidence.posterior_h0};
    }
  }
  return std::nullopt;
}

std::vector<JitterEntry> jitter_report(const std::vector<SweepRow>& rows) {
  std::vector<JitterEntry> report;
  const SweepRow* prev = nullptr;
  for (const auto& row : rows) {
    if (prev != nullptr && (prev->alpha != row.alpha || prev->mode != row.mode || prev->tail != row.tail ||
                            row.n <= prev->n)) {
      prev = nullptr;
    }
    if (!row.feasible) continue;
    if (prev != nullptr && row.posterior_h0 < prev->posterior_h0) {
      report.push_back({row.alpha, prev->n, row.n, prev->posterior_h0 - row.posterior_h0});
    }
    prev = &row;
  }
  return report;
}

OutputFormat parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown output format '" + std::string(text) + "' (expected csv|json)");
}

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& row : rows) {
    out << format_real(row.alpha) << ',' << row.n << ',';
    if (row.feasible) {
      out << row.s_selected << ',' << format_real(row.p_achieved) << ',' << format_real(row.log_bf01) << ','
          << format_real(row.posterior_h0);
    } else {
      out << kMissing << ',' << kMissing << ',' << kMissing << ',' << kMissing;
    }
    out << ',' << to_string(row.mode) << ',' << to_string(row.tail) << '\n';
  }
}

void write_json(const std::vector<SweepRow>& rows, std::ostream& out) {
  auto doc = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json obj;
    obj["alpha"] = round_to_serialized(row.alpha);
    obj["n"] = row.n;
    if (row.feasible) {
      obj["s_selected"] = row.s_selected;
      obj["p_achieved"] = round_to_serialized(row.p_achieved);
      obj["log_bf01"] = round_to_serialized(row.log_bf01);
      obj["posterior_h0"] = round_to_serialized(row.posterior_h0);
    } else {
      obj["s_selected"] = nullptr;
      obj["p_achieved"] = nullptr;
      obj["log_bf01"] = nullptr;
      obj["posterior_h0"] = nullptr;
    }
    obj["mode"] = std::string(to_string(row.mode));
    obj["tail"] = std::string(to_string(row.tail));
    doc.push_back(std::move(obj));
  }
  out << doc.dump(2) << '\n';
}

void emit(const std::vector<SweepRow>& rows, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::Csv) {
    write_csv(rows, out);
  } else {
    write_json(rows, out);
  }
}

void emit(const std::vector<SweepRow>& rows, OutputFormat format, const std::filesystem::path& destination) {
  std::ofstream file(destination, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw SweepIoError("cannot open '" + destination.string() + "' for writing: " + std::strerror(errno));
  }
  emit(rows, format, file);
  file.flush();
  if (!file) throw SweepIoError("write to '" + destination.string() + "' failed");
}

std::vector<SweepRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("CSV input is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw std::invalid_argument("unexpected CSV header: '" + line + "'");

  std::vector<SweepRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 8) {
      throw std::invalid_argument("CSV line " + std::to_string(line_no) + ": expected 8 fields, got " +
                                  std::to_string(fields.size()));
    }

    SweepRow row;
    row.alpha = parse_real(fields[0], "alpha");
    row.n = parse_count(fields[1], "n");
    row.feasible = fields[2] != kMissing;
    if (row.feasible) {
      row.s_selected = parse_count(fields[2], "s_selected");
      row.p_achieved = parse_real(fields[3], "p_achieved");
      row.log_bf01 = parse_real(fields[4], "log_bf01");
      row.posterior_h0 = parse_real(fields[5], "posterior_h0");
    } else {
      row.p_achieved = row.log_bf01 = row.posterior_h0 = std::numeric_limits<double>::quiet_NaN();
    }
    row.mode = parse_mode(fields[6]);
    row.tail = parse_tail(fields[7]);
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> parse_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("JSON parse error: ") + e.what());
  }
  if (!doc.is_array()) throw std::invalid_argument("sweep JSON must be an array of rows");

  std::vector<SweepRow> rows;
  rows.reserve(doc.size());
  try {
    for (const auto& obj : doc) {
      SweepRow row;
      row.alpha = obj.at("alpha").get<double>();
      row.n = obj.at("n").get<std::int64_t>();
      row.feasible = !obj.at("s_selected").is_null();
      if (row.feasible) {
        row.s_selected = obj.at("s_selected").get<std::int64_t>();
        row.p_achieved = obj.at("p_achieved").get<double>();
        row.log_bf01 = obj.at("log_bf01").get<double>();
        row.posterior_h0 = obj.at("posterior_h0").get<double>();
      } else {
        row.p_achieved = row.log_bf01 = row.posterior_h0 = std::numeric_limits<double>::quiet_NaN();
      }
      row.mode = parse_mode(obj.at("mode").get<std::string>());
      row.tail = parse_tail(obj.at("tail").get<std::string>());
      rows.push_back(row);
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed sweep row: ") + e.what());
  }
  return rows;
}

}  // namespace threshold_lab
