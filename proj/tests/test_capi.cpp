#include "emm/emm.h"

#include <doctest.h>
#include <json.hpp>

#include <string>

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  emm_string_free(s);
  return out;
}

struct Config {
  emm_config* ptr = nullptr;
  Config() { REQUIRE(emm_config_create(&ptr) == EMM_OK); }
  ~Config() { emm_config_destroy(ptr); }
  void set(const char* k, const char* v) { REQUIRE(emm_config_set(ptr, k, v) == EMM_OK); }
};

}  // namespace

TEST_SUITE("capi") {
  TEST_CASE("labels, version and exit codes") {
    CHECK(std::string(emm_version()).size() > 0);
    char* out = nullptr;
    REQUIRE(emm_problem_labels(&out) == EMM_OK);
    const std::string labels = take(out);
    CHECK(labels.find("well-boundary\n") != std::string::npos);
    CHECK(labels.find("lens-m0\n") != std::string::npos);
    CHECK(emm_exit_code(EMM_OK) == 0);
    CHECK(emm_exit_code(EMM_ERROR_CONFIG) == 2);
    CHECK(emm_exit_code(EMM_ERROR_DOMAIN) == 2);
    CHECK(emm_exit_code(EMM_ERROR_NO_FEASIBLE) == 3);
    CHECK(emm_exit_code(EMM_ERROR_MULTI_INTERVAL) == 4);
    CHECK(emm_exit_code(EMM_ERROR_NUMERICAL) == 5);
  }

  TEST_CASE("bad input reports a status and a message") {
    Config c;
    CHECK(emm_config_set(c.ptr, "nonsense", "1") == EMM_ERROR_CONFIG);
    CHECK(std::string(emm_last_error()).find("nonsense") != std::string::npos);
    CHECK(emm_config_set(nullptr, "I", "1") == EMM_ERROR_CONFIG);
    CHECK(emm_config_load_file(c.ptr, "/nonexistent/file") == EMM_ERROR_CONFIG);
    c.set("problem", "nope");
    char* out = nullptr;
    CHECK(emm_run(c.ptr, &out) == EMM_ERROR_CONFIG);
    CHECK(out == nullptr);
    CHECK(std::string(emm_last_error()).find("sextic-stieltjes") != std::string::npos);
  }

  TEST_CASE("run renders JSON") {
    Config c;
    c.set("problem", "well-boundary");
    c.set("moments", "6");
    c.set("tol", "1e-10");
    c.set("format", "json");
    emm_format f = EMM_FORMAT_TABLE;
    REQUIRE(emm_config_format(c.ptr, &f) == EMM_OK);
    CHECK(f == EMM_FORMAT_JSON);
    char* out = nullptr;
    REQUIRE(emm_run(c.ptr, &out) == EMM_OK);
    const auto j = nlohmann::json::parse(take(out));
    const double lo = std::stod(j["interval"]["lower"].get<std::string>());
    const double hi = std::stod(j["interval"]["upper"].get<std::string>());
    CHECK(lo < 2.4674011002723395);
    CHECK(hi > 2.4674011002723395);
    CHECK(hi - lo < 5e-7);
    CHECK(j["interval"]["lower_certified"].get<bool>());
  }

  TEST_CASE("no feasible window maps to its status") {
    Config c;
    c.set("problem", "well-boundary");
    c.set("I", "2");
    c.set("e-min", "3");
    c.set("e-max", "10");
    c.set("ladder", "false");
    char* out = nullptr;
    CHECK(emm_run(c.ptr, &out) == EMM_ERROR_NO_FEASIBLE);
  }

  TEST_CASE("problem handle and single checks") {
    Config c;
    c.set("problem", "well-boundary");
    c.set("I", "0");
    emm_problem* p = nullptr;
    REQUIRE(emm_problem_create(c.ptr, &p) == EMM_OK);
    char* desc = nullptr;
    REQUIRE(emm_problem_describe(p, &desc) == EMM_OK);
    CHECK(nlohmann::json::parse(take(desc))["missing_moments"].get<int>() == 0);
    emm_verdict v = EMM_UNDETERMINED;
    char* detail = nullptr;
    REQUIRE(emm_check_feasibility(p, "1.5", &v, &detail) == EMM_OK);
    CHECK(v == EMM_INFEASIBLE);
    const auto j = nlohmann::json::parse(take(detail));
    CHECK(j["failed_sigma"].get<std::string>() == "x");
    REQUIRE(emm_check_feasibility(p, "2.5", &v, nullptr) == EMM_OK);
    CHECK(v == EMM_FEASIBLE);
    CHECK(emm_check_feasibility(p, "0", &v, nullptr) == EMM_ERROR_DOMAIN);
    CHECK(emm_check_feasibility(p, "abc", &v, nullptr) != EMM_OK);
    emm_problem_destroy(p);
  }

  TEST_CASE("oracles") {
    char* out = nullptr;
    REQUIRE(emm_hemisphere_oracle(256, &out) == EMM_OK);
    CHECK(take(out).rfind("+2.0190728556426629974", 0) == 0);
    REQUIRE(emm_square_well_oracle(1, 256, &out) == EMM_OK);
    const std::string u = take(out);
    CHECK(u.find("u(0) = +4.05284734569351") != std::string::npos);
    CHECK(u.find("u(1) = +7.67733024194523") != std::string::npos);
    CHECK(emm_square_well_oracle(-1, 256, &out) == EMM_ERROR_CONFIG);
  }

  TEST_CASE("lens table keeps failed rows") {
    Config c;
    const double ratios[] = {2.0, 0.5};
    char* out = nullptr;
    REQUIRE(emm_lens_table(c.ptr, 0, ratios, 2, EMM_FORMAT_CSV, &out) == EMM_OK);
    const std::string csv = take(out);
    CHECK(csv.rfind("b_over_a,E_L,E_U,I,width\n", 0) == 0);
    CHECK(csv.find("+2,,,0,") != std::string::npos);
  }
}
