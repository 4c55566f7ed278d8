// Command-line front end; talks to the library only through emm.h.
#include "emm/emm.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct ConfigDeleter {
  void operator()(emm_config* c) const { emm_config_destroy(c); }
};
struct ProblemDeleter {
  void operator()(emm_problem* p) const { emm_problem_destroy(p); }
};
using ConfigPtr = std::unique_ptr<emm_config, ConfigDeleter>;
using ProblemPtr = std::unique_ptr<emm_problem, ProblemDeleter>;

struct Failure {
  emm_status status;
};

void check(emm_status s) {
  if (s != EMM_OK) throw Failure{s};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  emm_string_free(s);
  return out;
}

// Options shared by run, check and lens-table, applied after --config.
struct ConfigOptions {
  std::string config_file;
  std::map<std::string, std::string> values;
  bool geometric = false;
  bool no_ladder = false;

  void attach(CLI::App* app, bool with_problem) {
    app->add_option("--config", config_file, "flat key = value configuration file");
    static const std::vector<std::pair<std::string, std::string>> keys = {
        {"problem", "problem label (see `emm labels`)"},
        {"I", "uniform order"},
        {"moments", "moment budget K (one-dimensional problems)"},
        {"e-min", "lower edge of the energy window"},
        {"e-max", "upper edge of the energy window"},
        {"scan-points", "coarse scan points"},
        {"tol", "bisection tolerance"},
        {"bits", "significand bits"},
        {"b-over-a", "lens thickness ratio b/a"},
        {"g", "sextic coupling"},
        {"m", "sextic quadratic coefficient"},
        {"eps", "kinetic coefficient"},
        {"L", "square-well half width"},
        {"format", "table, csv or json"}};
    for (const auto& [key, help] : keys) {
      if (!with_problem && (key == "problem" || key == "I" || key == "moments" || key == "b-over-a"))
        continue;
      app->add_option("--" + key, values[key], help);
    }
    app->add_flag("--geometric", geometric, "geometric scan grid");
    app->add_flag("--no-ladder", no_ladder, "scan the requested order directly");
  }

  ConfigPtr build(const CLI::App* app) const {
    emm_config* raw = nullptr;
    check(emm_config_create(&raw));
    ConfigPtr cfg(raw);
    if (!config_file.empty()) check(emm_config_load_file(cfg.get(), config_file.c_str()));
    for (const auto& [key, value] : values)
      if (app->count("--" + key) > 0) check(emm_config_set(cfg.get(), key.c_str(), value.c_str()));
    if (geometric) check(emm_config_set(cfg.get(), "geometric", "true"));
    if (no_ladder) check(emm_config_set(cfg.get(), "ladder", "false"));
    return cfg;
  }
};

emm_format format_of(const emm_config* cfg) {
  emm_format f = EMM_FORMAT_TABLE;
  check(emm_config_format(cfg, &f));
  return f;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out || !(out << text)) {
    std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
    throw Failure{EMM_ERROR_CONFIG};
  }
}

std::vector<double> parse_ratios(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      std::fprintf(stderr, "error: bad ratio '%s'\n", item.c_str());
      throw Failure{EMM_ERROR_CONFIG};
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigenvalue Moment Method energy bounds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", emm_version());
  std::string out_path;

  ConfigOptions run_opts;
  CLI::App* run = app.add_subcommand("run", "bound an energy level");
  run_opts.attach(run, true);
  run->add_option("--out", out_path, "write the report to a file");

  ConfigOptions check_opts;
  std::string energy;
  CLI::App* chk = app.add_subcommand("check", "test feasibility at one energy");
  check_opts.attach(chk, true);
  chk->add_option("--energy", energy, "trial energy")->required();

  ConfigOptions table_opts;
  int table_order = 2;
  std::string ratios = "0.5,0.2,0.05";
  CLI::App* table = app.add_subcommand("lens-table", "lens ground-state bounds for several b/a");
  table_opts.attach(table, false);
  table->add_option("--I", table_order, "uniform order");
  table->add_option("--ratios", ratios, "comma-separated b/a values in (0, 1]");
  table->add_option("--out", out_path, "write the table to a file");

  std::string which;
  int rho_max = 6;
  unsigned bits = 256;
  CLI::App* oracle = app.add_subcommand("oracle", "reference values from direct computation");
  oracle->add_option("which", which, "well (square-well moments) or hemisphere")
      ->required()
      ->check(CLI::IsMember({"well", "hemisphere"}));
  oracle->add_option("--rho-max", rho_max, "largest moment index for `well`");
  oracle->add_option("--bits", bits, "significand bits");

  CLI::App* labels = app.add_subcommand("labels", "list problem labels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      ConfigPtr cfg = run_opts.build(run);
      char* report = nullptr;
      check(emm_run(cfg.get(), &report));
      emit(take(report), out_path);
    } else if (*chk) {
      ConfigPtr cfg = check_opts.build(chk);
      emm_problem* raw = nullptr;
      check(emm_problem_create(cfg.get(), &raw));
      ProblemPtr problem(raw);
      emm_verdict verdict = EMM_UNDETERMINED;
      char* detail = nullptr;
      check(emm_check_feasibility(problem.get(), energy.c_str(), &verdict, &detail));
      std::cout << take(detail);
    } else if (*table) {
      ConfigPtr cfg = table_opts.build(table);
      const std::vector<double> list = parse_ratios(ratios);
      char* text = nullptr;
      check(emm_lens_table(cfg.get(), table_order, list.data(), list.size(), format_of(cfg.get()),
                           &text));
      emit(take(text), out_path);
    } else if (*oracle) {
      char* text = nullptr;
      if (which == "well")
        check(emm_square_well_oracle(rho_max, bits, &text));
      else
        check(emm_hemisphere_oracle(bits, &text));
      std::cout << take(text);
    } else if (*labels) {
      char* text = nullptr;
      check(emm_problem_labels(&text));
      std::cout << take(text);
    }
  } catch (const Failure& f) {
    const char* msg = emm_last_error();
    if (msg && *msg) std::fprintf(stderr, "error: %s\n", msg);
    return emm_exit_code(f.status);
  }
  return 0;
}
