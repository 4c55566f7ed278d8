#pragma once

#include "emm/catalog.hpp"
#include "emm/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace emm {

enum class OutputFormat { Table, Csv, Json };
const char* to_string(OutputFormat f);
OutputFormat parse_format(const std::string& text);

struct RunConfig {
  std::string problem = "sextic-stieltjes";
  ProblemParams params;
  Order order = Order::uniform(3);
  std::optional<double> e_min;  // unset: the problem's default window
  std::optional<double> e_max;
  int scan_points = 12;
  double bisect_tol = 1e-8;
  unsigned bits = 256;
  OutputFormat format = OutputFormat::Table;
  bool ladder = true;
  std::optional<bool> geometric;  // unset: the problem's preference

  // Applies one key = value setting; keys match the long flag names
  // (problem, I, moments, e-min, e-max, scan-points, tol, bits, b-over-a,
  // g, m, eps, L, format, ladder, geometric).
  void set(const std::string& key, const std::string& value);
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Flat "key = value" lines; '#' starts a comment.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});

struct RungSummary {
  std::string order;
  std::string lower;
  std::string upper;
  int checks = 0;

  friend bool operator==(const RungSummary&, const RungSummary&) = default;
};

// Every real is a signed decimal string; lower is rounded down and upper up.
struct RunReport {
  RunConfig config;
  std::string problem_description;
  std::string order;
  std::string lower;
  std::string upper;
  std::string width;  // rounded up
  std::string inner_lower;
  std::string inner_upper;
  bool lower_certified = false;
  bool upper_certified = false;
  std::string window_lo;
  std::string window_hi;
  int checks = 0;
  int cut_rounds = 0;
  int undetermined = 0;
  std::string seconds;
  unsigned effective_bits = 0;
  std::string psd_tolerance;
  std::string lp_tolerance;
  std::vector<RungSummary> rungs;
  std::vector<std::string> notes;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

// Builds the problem, runs the (laddered) scan and collects the report.
RunReport run(const RunConfig& config);

// Digits needed for [lower, upper] to print distinctly, between 10 and 60.
int interval_digits(const Real& lower, const Real& upper);

std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);
std::string render(const RunReport& report, OutputFormat format);

struct LensRow {
  double b_over_a = 0.0;
  int order = 0;
  bool ok = false;
  std::string lower;
  std::string upper;
  std::string width;
  std::string error;  // set when the row failed
};

// One lens-m0 run per ratio at uniform order I; a failing row is recorded
// and the rest still run.
std::vector<LensRow> reproduce_lens_table(int order, const std::vector<double>& ratios,
                                          const RunConfig& base);

// CSV header: b_over_a,E_L,E_U,I,width
std::string lens_table_csv(const std::vector<LensRow>& rows);
std::string lens_table_text(const std::vector<LensRow>& rows);
std::string lens_table_json(const std::vector<LensRow>& rows);

// "%+.17g", explicit sign and round-trip exact.
std::string format_double(double x);

}  // namespace emm
