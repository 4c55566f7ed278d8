#include "emm/report.hpp"

#include "emm/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace emm {

using nlohmann::json;

const char* to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Table: return "table";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
  }
  return "?";
}

OutputFormat parse_format(const std::string& text) {
  if (text == "table") return OutputFormat::Table;
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw Error(ErrorKind::Config, "unknown format '" + text + "'; use table, csv or json");
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%+.17g", x);
  return buf;
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || !std::isfinite(v))
    throw Error(ErrorKind::Config, key + ": expected a finite number, got '" + value + "'");
  return v;
}

long parse_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size())
    throw Error(ErrorKind::Config, key + ": expected an integer, got '" + value + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw Error(ErrorKind::Config, key + ": expected true or false, got '" + value + "'");
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "problem") {
    problem = value;
  } else if (key == "I") {
    order = Order::uniform(static_cast<int>(parse_int(key, value)));
  } else if (key == "moments") {
    order = Order::budget(static_cast<int>(parse_int(key, value)));
  } else if (key == "e-min") {
    e_min = parse_double(key, value);
  } else if (key == "e-max") {
    e_max = parse_double(key, value);
  } else if (key == "scan-points") {
    scan_points = static_cast<int>(parse_int(key, value));
  } else if (key == "tol") {
    bisect_tol = parse_double(key, value);
  } else if (key == "bits") {
    const long b = parse_int(key, value);
    if (b <= 0) throw Error(ErrorKind::Config, "bits must be positive");
    bits = static_cast<unsigned>(b);
  } else if (key == "b-over-a") {
    params.lens.b_over_a = parse_double(key, value);
  } else if (key == "g") {
    params.sextic.coupling = parse_double(key, value);
  } else if (key == "m") {
    params.sextic.mass = parse_double(key, value);
  } else if (key == "eps") {
    params.sextic.epsilon = parse_double(key, value);
  } else if (key == "L") {
    params.well.half_width = parse_double(key, value);
  } else if (key == "format") {
    format = parse_format(value);
  } else if (key == "ladder") {
    ladder = parse_bool(key, value);
  } else if (key == "geometric") {
    geometric = parse_bool(key, value);
  } else {
    throw Error(ErrorKind::Config, "unknown setting '" + key + "'");
  }
}

void RunConfig::validate() const {
  if (order.value < 0) throw Error(ErrorKind::Config, "order must be >= 0");
  if (scan_points < 3) throw Error(ErrorKind::Config, "scan-points must be >= 3");
  if (!(bisect_tol > 0.0)) throw Error(ErrorKind::Config, "tol must be > 0");
  PrecisionConfig::for_bits(bits).validate();
  make_problem(problem, params).validate();
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::Config,
                  "config line " + std::to_string(number) + ": expected key = value");
    base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

int interval_digits(const Real& lower, const Real& upper) {
  const Real width = upper - lower;
  const Real scale = max(abs(lower), abs(upper));
  if (scale == 0) return 10;
  if (width <= 0) return 60;
  const double d = std::ceil(log10(scale / width).convert_to<double>()) + 3;
  return static_cast<int>(std::clamp(d, 10.0, 60.0));
}

RunReport run(const RunConfig& config) {
  config.validate();
  const PrecisionConfig cfg = PrecisionConfig::for_bits(config.bits);
  PrecisionScope scope(cfg);
  const ProblemSpec spec = make_problem(config.problem, config.params);

  ScanOptions opt;
  opt.e_min = config.e_min.value_or(spec.default_window.lo);
  opt.e_max = config.e_max.value_or(spec.default_window.hi);
  opt.scan_points = config.scan_points;
  opt.bisect_tol = config.bisect_tol;
  opt.geometric = config.geometric.value_or(spec.geometric_scan);

  const auto start = std::chrono::steady_clock::now();
  std::vector<EnergyInterval> rungs;
  if (config.ladder)
    rungs = energy_bounds_ladder(spec, config.order, opt, cfg);
  else
    rungs.push_back(energy_bounds(spec, config.order, opt, cfg));
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const EnergyInterval& last = rungs.back();
  RunReport r;
  r.config = config;
  r.problem_description = spec.description;
  r.order = last.order.describe();
  const int digits = interval_digits(last.lower, last.upper);
  r.lower = to_decimal(last.lower, digits, Rounding::Down);
  r.upper = to_decimal(last.upper, digits, Rounding::Up);
  r.width = to_decimal(Real(last.upper - last.lower), 6, Rounding::Up);
  r.inner_lower = to_decimal(last.inner_lower, digits);
  r.inner_upper = to_decimal(last.inner_upper, digits);
  r.lower_certified = last.lower_certified;
  r.upper_certified = last.upper_certified;
  r.window_lo = format_double(opt.e_min);
  r.window_hi = format_double(opt.e_max);
  for (const EnergyInterval& e : rungs) {
    r.checks += e.checks;
    r.cut_rounds += e.cut_rounds;
    r.undetermined += e.undetermined;
    const int d = interval_digits(e.lower, e.upper);
    r.rungs.push_back({e.order.describe(), to_decimal(e.lower, d, Rounding::Down),
                       to_decimal(e.upper, d, Rounding::Up), e.checks});
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%+.6e", seconds);
  r.seconds = buf;
  r.effective_bits = effective_bits(cfg.significand_bits);
  r.psd_tolerance = format_double(cfg.psd_tolerance);
  r.lp_tolerance = format_double(cfg.lp_tolerance);
  r.notes = spec.notes;
  if (!last.lower_certified) r.notes.push_back("lower endpoint is the window edge, not certified");
  if (!last.upper_certified) r.notes.push_back("upper endpoint is the window edge, not certified");
  if (last.undetermined > 0)
    r.notes.push_back(std::to_string(last.undetermined) +
                      " undetermined checks were treated as feasible");
  return r;
}

namespace {

json optional_double(const std::optional<double>& v) {
  return v ? json(format_double(*v)) : json(nullptr);
}

std::optional<double> optional_double(const json& j, const char* key) {
  if (j.at(key).is_null()) return std::nullopt;
  return parse_double(key, j.at(key).get<std::string>());
}

json config_to_json(const RunConfig& c) {
  return {{"problem", c.problem},
          {"eps", format_double(c.params.sextic.epsilon)},
          {"m", format_double(c.params.sextic.mass)},
          {"g", format_double(c.params.sextic.coupling)},
          {"L", format_double(c.params.well.half_width)},
          {"b_over_a", format_double(c.params.lens.b_over_a)},
          {"order_kind", c.order.kind == Order::Kind::Uniform ? "uniform" : "budget"},
          {"order", c.order.value},
          {"e_min", optional_double(c.e_min)},
          {"e_max", optional_double(c.e_max)},
          {"scan_points", c.scan_points},
          {"bisect_tol", format_double(c.bisect_tol)},
          {"bits", c.bits},
          {"format", to_string(c.format)},
          {"ladder", c.ladder},
          {"geometric", c.geometric ? json(*c.geometric) : json(nullptr)}};
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.problem = j.at("problem").get<std::string>();
  c.params.sextic.epsilon = parse_double("eps", j.at("eps").get<std::string>());
  c.params.sextic.mass = parse_double("m", j.at("m").get<std::string>());
  c.params.sextic.coupling = parse_double("g", j.at("g").get<std::string>());
  c.params.well.half_width = parse_double("L", j.at("L").get<std::string>());
  c.params.lens.b_over_a = parse_double("b_over_a", j.at("b_over_a").get<std::string>());
  const int value = j.at("order").get<int>();
  c.order = j.at("order_kind").get<std::string>() == "uniform" ? Order::uniform(value)
                                                              : Order::budget(value);
  c.e_min = optional_double(j, "e_min");
  c.e_max = optional_double(j, "e_max");
  c.scan_points = j.at("scan_points").get<int>();
  c.bisect_tol = parse_double("bisect_tol", j.at("bisect_tol").get<std::string>());
  c.bits = j.at("bits").get<unsigned>();
  c.format = parse_format(j.at("format").get<std::string>());
  c.ladder = j.at("ladder").get<bool>();
  if (!j.at("geometric").is_null()) c.geometric = j.at("geometric").get<bool>();
  return c;
}

}  // namespace

std::string report_to_json(const RunReport& r) {
  json rungs = json::array();
  for (const RungSummary& s : r.rungs)
    rungs.push_back({{"order", s.order}, {"lower", s.lower}, {"upper", s.upper},
                     {"checks", s.checks}});
  json j = {{"config", config_to_json(r.config)},
            {"problem_description", r.problem_description},
            {"order", r.order},
            {"interval",
             {{"lower", r.lower},
              {"upper", r.upper},
              {"width", r.width},
              {"inner_lower", r.inner_lower},
              {"inner_upper", r.inner_upper},
              {"lower_certified", r.lower_certified},
              {"upper_certified", r.upper_certified}}},
            {"window", {{"lo", r.window_lo}, {"hi", r.window_hi}}},
            {"statistics",
             {{"checks", r.checks},
              {"cut_rounds", r.cut_rounds},
              {"undetermined", r.undetermined},
              {"seconds", r.seconds}}},
            {"precision",
             {{"effective_bits", r.effective_bits},
              {"psd_tolerance", r.psd_tolerance},
              {"lp_tolerance", r.lp_tolerance}}},
            {"rungs", rungs},
            {"notes", r.notes}};
  return j.dump(2);
}

RunReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("report is not valid JSON: ") + e.what());
  }
  try {
    RunReport r;
    r.config = config_from_json(j.at("config"));
    r.problem_description = j.at("problem_description").get<std::string>();
    r.order = j.at("order").get<std::string>();
    const json& iv = j.at("interval");
    r.lower = iv.at("lower").get<std::string>();
    r.upper = iv.at("upper").get<std::string>();
    r.width = iv.at("width").get<std::string>();
    r.inner_lower = iv.at("inner_lower").get<std::string>();
    r.inner_upper = iv.at("inner_upper").get<std::string>();
    r.lower_certified = iv.at("lower_certified").get<bool>();
    r.upper_certified = iv.at("upper_certified").get<bool>();
    r.window_lo = j.at("window").at("lo").get<std::string>();
    r.window_hi = j.at("window").at("hi").get<std::string>();
    const json& st = j.at("statistics");
    r.checks = st.at("checks").get<int>();
    r.cut_rounds = st.at("cut_rounds").get<int>();
    r.undetermined = st.at("undetermined").get<int>();
    r.seconds = st.at("seconds").get<std::string>();
    const json& pr = j.at("precision");
    r.effective_bits = pr.at("effective_bits").get<unsigned>();
    r.psd_tolerance = pr.at("psd_tolerance").get<std::string>();
    r.lp_tolerance = pr.at("lp_tolerance").get<std::string>();
    for (const json& s : j.at("rungs"))
      r.rungs.push_back({s.at("order").get<std::string>(), s.at("lower").get<std::string>(),
                         s.at("upper").get<std::string>(), s.at("checks").get<int>()});
    r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("malformed report: ") + e.what());
  }
}

std::string render(const RunReport& r, OutputFormat format) {
  if (format == OutputFormat::Json) return report_to_json(r) + "\n";
  if (format == OutputFormat::Csv) {
    std::ostringstream os;
    os << "problem,order,E_L,E_U,width,lower_certified,upper_certified,checks\n"
       << r.config.problem << ',' << r.order << ',' << r.lower << ',' << r.upper << ','
       << r.width << ',' << (r.lower_certified ? "true" : "false") << ','
       << (r.upper_certified ? "true" : "false") << ',' << r.checks << '\n';
    return os.str();
  }
  std::ostringstream os;
  os << r.config.problem << "  " << r.problem_description << '\n'
     << "order       " << r.order << '\n'
     << "window      [" << r.window_lo << ", " << r.window_hi << "]\n"
     << "E_L         " << r.lower << (r.lower_certified ? "" : "  (window edge)") << '\n'
     << "E_U         " << r.upper << (r.upper_certified ? "" : "  (window edge)") << '\n'
     << "width       " << r.width << '\n'
     << "checks      " << r.checks << "  cut rounds " << r.cut_rounds << "  undetermined "
     << r.undetermined << '\n'
     << "precision   " << r.effective_bits << " bits\n"
     << "time        " << r.seconds << " s\n";
  if (r.rungs.size() > 1) {
    os << "ladder\n";
    for (const RungSummary& s : r.rungs)
      os << "  " << s.order << "  [" << s.lower << ", " << s.upper << "]  " << s.checks
         << " checks\n";
  }
  for (const std::string& n : r.notes) os << "note: " << n << '\n';
  return os.str();
}

std::vector<LensRow> reproduce_lens_table(int order, const std::vector<double>& ratios,
                                          const RunConfig& base) {
  std::vector<LensRow> rows;
  for (double ratio : ratios) {
    LensRow row;
    row.b_over_a = ratio;
    row.order = order;
    try {
      if (!(ratio > 0.0 && ratio <= 1.0))
        throw Error(ErrorKind::Config, "b/a must lie in (0, 1]");
      RunConfig c = base;
      c.problem = "lens-m0";
      c.params.lens.b_over_a = ratio;
      c.order = Order::uniform(order);
      if (!base.e_min || !base.e_max) {
        const EnergyWindow w = lens_default_window(ratio);
        c.e_min = base.e_min.value_or(w.lo);
        c.e_max = base.e_max.value_or(w.hi);
      }
      const RunReport r = run(c);
      row.ok = true;
      row.lower = r.lower;
      row.upper = r.upper;
      row.width = r.width;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string lens_table_csv(const std::vector<LensRow>& rows) {
  std::ostringstream os;
  os << "b_over_a,E_L,E_U,I,width\n";
  for (const LensRow& r : rows) {
    os << format_double(r.b_over_a) << ',' << (r.ok ? r.lower : "") << ','
       << (r.ok ? r.upper : "") << ',' << r.order << ',' << (r.ok ? r.width : "") << '\n';
  }
  return os.str();
}

std::string lens_table_text(const std::vector<LensRow>& rows) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %-30s %-30s %3s %s\n", "b/a", "E_L", "E_U", "I",
                "width");
  os << line;
  for (const LensRow& r : rows) {
    if (r.ok) {
      std::snprintf(line, sizeof line, "%-24s %-30s %-30s %3d %s\n",
                    format_double(r.b_over_a).c_str(), r.lower.c_str(), r.upper.c_str(),
                    r.order, r.width.c_str());
      os << line;
    } else {
      os << format_double(r.b_over_a) << "  failed: " << r.error << '\n';
    }
  }
  return os.str();
}

std::string lens_table_json(const std::vector<LensRow>& rows) {
  json out = json::array();
  for (const LensRow& r : rows) {
    json row = {{"b_over_a", format_double(r.b_over_a)}, {"I", r.order}};
    if (r.ok) {
      row["E_L"] = r.lower;
      row["E_U"] = r.upper;
      row["width"] = r.width;
    } else {
      row["error"] = r.error;
    }
    out.push_back(std::move(row));
  }
  return out.dump(2) + "\n";
}

}  // namespace emm
