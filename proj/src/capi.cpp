#include "emm/emm.h"

#include "emm/error.hpp"
#include "emm/oracles.hpp"
#include "emm/report.hpp"
#include "emm/solver.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct emm_config {
  emm::RunConfig config;
};

struct emm_problem {
  emm::RunConfig config;
  emm::ProblemSpec spec;
};

namespace {

thread_local std::string last_error;

emm_status status_of(emm::ErrorKind kind) {
  switch (kind) {
    case emm::ErrorKind::Config: return EMM_ERROR_CONFIG;
    case emm::ErrorKind::Domain: return EMM_ERROR_DOMAIN;
    case emm::ErrorKind::Structural: return EMM_ERROR_STRUCTURAL;
    case emm::ErrorKind::Numerical: return EMM_ERROR_NUMERICAL;
    case emm::ErrorKind::NoFeasible: return EMM_ERROR_NO_FEASIBLE;
    case emm::ErrorKind::MultiInterval: return EMM_ERROR_MULTI_INTERVAL;
  }
  return EMM_ERROR_INTERNAL;
}

template <class F>
emm_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return EMM_OK;
  } catch (const emm::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return EMM_ERROR_INTERNAL;
}

emm_status null_argument(const char* name) {
  last_error = std::string("null argument: ") + name;
  return EMM_ERROR_CONFIG;
}

char* copy_out(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

emm::OutputFormat to_format(emm_format f) {
  switch (f) {
    case EMM_FORMAT_TABLE: return emm::OutputFormat::Table;
    case EMM_FORMAT_CSV: return emm::OutputFormat::Csv;
    case EMM_FORMAT_JSON: return emm::OutputFormat::Json;
  }
  throw emm::Error(emm::ErrorKind::Config, "unknown output format");
}

}  // namespace

extern "C" {

const char* emm_version(void) { return "1.0.0"; }

int emm_exit_code(emm_status status) {
  switch (status) {
    case EMM_OK: return 0;
    case EMM_ERROR_CONFIG:
    case EMM_ERROR_DOMAIN: return 2;
    case EMM_ERROR_NO_FEASIBLE: return 3;
    case EMM_ERROR_MULTI_INTERVAL: return 4;
    default: return 5;
  }
}

const char* emm_last_error(void) { return last_error.c_str(); }

void emm_string_free(char* s) { std::free(s); }

emm_status emm_problem_labels(char** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    std::string text;
    for (const std::string& l : emm::problem_labels()) text += l + "\n";
    *out = copy_out(text);
  });
}

emm_status emm_config_create(emm_config** out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = new emm_config(); });
}

void emm_config_destroy(emm_config* cfg) { delete cfg; }

emm_status emm_config_set(emm_config* cfg, const char* key, const char* value) {
  if (!cfg) return null_argument("cfg");
  if (!key || !value) return null_argument("key/value");
  return guarded([&] { cfg->config.set(key, value); });
}

emm_status emm_config_load_file(emm_config* cfg, const char* path) {
  if (!cfg) return null_argument("cfg");
  if (!path) return null_argument("path");
  return guarded([&] { cfg->config = emm::load_config_file(path, cfg->config); });
}

emm_status emm_config_format(const emm_config* cfg, emm_format* out) {
  if (!cfg || !out) return null_argument("cfg/out");
  switch (cfg->config.format) {
    case emm::OutputFormat::Table: *out = EMM_FORMAT_TABLE; break;
    case emm::OutputFormat::Csv: *out = EMM_FORMAT_CSV; break;
    case emm::OutputFormat::Json: *out = EMM_FORMAT_JSON; break;
  }
  return EMM_OK;
}

emm_status emm_run(const emm_config* cfg, char** report) {
  if (!cfg || !report) return null_argument("cfg/report");
  return guarded([&] {
    const emm::RunReport r = emm::run(cfg->config);
    *report = copy_out(emm::render(r, cfg->config.format));
  });
}

emm_status emm_lens_table(const emm_config* cfg, int order, const double* ratios, size_t count,
                          emm_format format, char** out) {
  if (!cfg || !out) return null_argument("cfg/out");
  if (count > 0 && !ratios) return null_argument("ratios");
  return guarded([&] {
    if (order < 0) throw emm::Error(emm::ErrorKind::Config, "order must be >= 0");
    const std::vector<double> list(ratios, ratios + count);
    const auto rows = emm::reproduce_lens_table(order, list, cfg->config);
    switch (to_format(format)) {
      case emm::OutputFormat::Table: *out = copy_out(emm::lens_table_text(rows)); break;
      case emm::OutputFormat::Csv: *out = copy_out(emm::lens_table_csv(rows)); break;
      case emm::OutputFormat::Json: *out = copy_out(emm::lens_table_json(rows)); break;
    }
  });
}

emm_status emm_problem_create(const emm_config* cfg, emm_problem** out) {
  if (!cfg || !out) return null_argument("cfg/out");
  return guarded([&] {
    cfg->config.validate();
    const emm::PrecisionConfig pc = emm::PrecisionConfig::for_bits(cfg->config.bits);
    emm::PrecisionScope scope(pc);
    *out = new emm_problem{cfg->config, emm::make_problem(cfg->config.problem, cfg->config.params)};
  });
}

void emm_problem_destroy(emm_problem* problem) { delete problem; }

emm_status emm_problem_describe(const emm_problem* problem, char** out) {
  if (!problem || !out) return null_argument("problem/out");
  return guarded([&] {
    const emm::PrecisionConfig pc = emm::PrecisionConfig::for_bits(problem->config.bits);
    emm::PrecisionScope scope(pc);
    const emm::ProblemSpec spec = emm::for_order(problem->spec, problem->config.order);
    nlohmann::json j = {{"label", spec.label},
                        {"description", spec.description},
                        {"order", problem->config.order.describe()},
                        {"missing_moments", spec.free_count()},
                        {"notes", spec.notes}};
    *out = copy_out(j.dump(2) + "\n");
  });
}

emm_status emm_check_feasibility(const emm_problem* problem, const char* energy,
                                 emm_verdict* verdict, char** detail) {
  if (!problem || !energy || !verdict) return null_argument("problem/energy/verdict");
  return guarded([&] {
    const emm::PrecisionConfig pc = emm::PrecisionConfig::for_bits(problem->config.bits);
    emm::PrecisionScope scope(pc);
    const emm::Real e = emm::parse_real(energy);
    const emm::FeasibilityOutcome o =
        emm::check_feasibility(problem->spec, e, problem->config.order, pc);
    switch (o.verdict) {
      case emm::Verdict::Feasible: *verdict = EMM_FEASIBLE; break;
      case emm::Verdict::Infeasible: *verdict = EMM_INFEASIBLE; break;
      case emm::Verdict::Undetermined: *verdict = EMM_UNDETERMINED; break;
    }
    if (detail) {
      nlohmann::json j = {{"problem", problem->spec.label},
                          {"order", problem->config.order.describe()},
                          {"energy", emm::to_decimal(e, 20)},
                          {"verdict", emm::to_string(o.verdict)},
                          {"margin", emm::to_decimal(o.margin, 8)},
                          {"cut_rounds", o.iterations},
                          {"lp_pivots", o.lp_pivots}};
      if (o.chain && !o.chain->pass) {
        j["failed_sigma"] = problem->spec.family.sigmas[o.chain->failed_sigma].label;
        j["failed_minor"] = o.chain->failed_index + 1;
      }
      *detail = copy_out(j.dump(2) + "\n");
    }
  });
}

emm_status emm_square_well_oracle(int rho_max, unsigned bits, char** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    const emm::PrecisionConfig pc = emm::PrecisionConfig::for_bits(bits);
    emm::PrecisionScope scope(pc);
    std::string text;
    int rho = 0;
    for (const emm::Real& u : emm::square_well_oracle_moments(rho_max, pc))
      text += "u(" + std::to_string(rho++) + ") = " + emm::to_decimal(u, 40) + "\n";
    *out = copy_out(text);
  });
}

emm_status emm_hemisphere_oracle(unsigned bits, char** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    const emm::PrecisionConfig pc = emm::PrecisionConfig::for_bits(bits);
    emm::PrecisionScope scope(pc);
    *out = copy_out(emm::to_decimal(emm::hemisphere_oracle_energy(pc), 40) + "\n");
  });
}

}  // extern "C"
