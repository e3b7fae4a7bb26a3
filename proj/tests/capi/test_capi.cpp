// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "fhl/fhl.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  fhl_string_free(s);
  return out;
}

void count_line(const char*, void* user) { ++*static_cast<int*>(user); }

}  // namespace

TEST_CASE("version and kinds") {
  CHECK(std::string(fhl_version()).size() > 0);
  REQUIRE(fhl_kind_count() >= 6);
  std::vector<std::string> kinds;
  for (size_t i = 0; i < fhl_kind_count(); ++i) kinds.push_back(fhl_kind_name(i));
  for (const char* k : {"hitprob", "sn", "hn", "boxdim", "lemma23", "prop14-count"}) {
    CHECK(std::find(kinds.begin(), kinds.end(), k) != kinds.end());
  }
  CHECK(fhl_kind_name(fhl_kind_count()) == nullptr);
  CHECK(std::string(fhl_status_name(FHL_LEVEL_CAP_EXCEEDED)) == "LevelCapExceeded");
}

TEST_CASE("models") {
  fhl_model* m = nullptr;
  REQUIRE(fhl_model_create(R"({"kind":"prop13","blocks":[2],"t":["9/10"]})", &m) == FHL_OK);
  char* p = nullptr;
  REQUIRE(fhl_model_hit_prob_exact(m, 2, &p) == FHL_OK);
  CHECK(take(p) == "37/64");
  double d = 0;
  CHECK(fhl_model_hit_prob(m, 2, &d) == FHL_OK);
  CHECK(d == doctest::Approx(0.578125));
  CHECK(fhl_model_hit_prob(m, 99, &d) == FHL_LEVEL_CAP_EXCEEDED);
  CHECK(std::string(fhl_last_error()).find("exceeds cap") != std::string::npos);
  fhl_model_free(m);

  fhl_model* bad = nullptr;
  CHECK(fhl_model_create(R"({"kind":"bernoulli","gamma":1,"extra":2})", &bad) == FHL_CONFIG_INVALID);
  CHECK(bad == nullptr);
  CHECK(std::string(fhl_last_error()).find("$.model.extra") != std::string::npos);
  CHECK(fhl_model_create("{not json", &bad) == FHL_CONFIG_INVALID);
  CHECK(fhl_model_create(nullptr, nullptr) == FHL_NULL_ARGUMENT);
}

TEST_CASE("targets and schedules") {
  fhl_target* t = nullptr;
  REQUIRE(fhl_target_create(R"({"kind":"uniform","count":4,"ratio":"1/16","depth":2})", &t) == FHL_OK);
  char* s = nullptr;
  REQUIRE(fhl_target_covering_count(t, 8, &s) == FHL_OK);
  CHECK(take(s) == "16");
  REQUIRE(fhl_target_closed_count(t, 8, &s) == FHL_OK);
  CHECK(take(s) == "46");
  CHECK(fhl_target_covering_count(t, 9, &s) == FHL_DEPTH_INSUFFICIENT);

  fhl_model* m = nullptr;
  REQUIRE(fhl_model_create(R"({"kind":"bernoulli","gamma":"1/2"})", &m) == FHL_OK);
  fhl_window_result w{};
  REQUIRE(fhl_window_hit(m, t, 4, 8, 4000, 7, 2, &w) == FHL_OK);
  CHECK(w.trials == 4000);
  CHECK(w.agrees == 1);
  CHECK(w.oracle > 0);
  fhl_model_free(m);
  fhl_target_free(t);

  fhl_schedule* sc = nullptr;
  REQUIRE(fhl_schedule_create(R"({"kind":"prop13","m1":2,"depth":3})", &sc) == FHL_OK);
  CHECK(fhl_schedule_depth(sc) == 4);  // m_1..m_{K+1}
  double lc = 0, ll = 0;
  REQUIRE(fhl_schedule_generation(sc, 1, &lc, &ll) == FHL_OK);
  CHECK(lc == 2);
  CHECK(ll == -14);
  CHECK(fhl_schedule_generation(sc, 9, &lc, &ll) == FHL_DEPTH_INSUFFICIENT);
  REQUIRE(fhl_schedule_export_levels(sc, 1, &s) == FHL_OK);
  std::string rows = take(s);
  CHECK(rows.find("1\t3\t16383/16384\t1/1") != std::string::npos);
  fhl_schedule_free(sc);
  CHECK(fhl_schedule_create(R"({"kind":"full"})", &sc) == FHL_INVALID_ARGUMENT);
}

TEST_CASE("grid") {
  uint64_t k = 5;
  char* s = nullptr;
  REQUIRE(fhl_grid_describe(3, &k, 1, 0, &s) == FHL_OK);
  std::string j = take(s);
  CHECK(j.find("[5/8, 3/4]") != std::string::npos);
  k = 4;
  CHECK(fhl_grid_describe(2, &k, 1, 0, &s) == FHL_COORD_OUT_OF_RANGE);
}

TEST_CASE("run_manifest") {
  const char* cfg = R"({"schema":1,"kind":"hitprob","seed":7,"trials":10000,
    "model":{"kind":"bernoulli","gamma":"1/2"},"target":{"kind":"point","x":"0"},
    "params":{"windows":[[4,6]]}})";
  int lines = 0;
  fhl_run_options opts{};
  opts.on_record = count_line;
  opts.user = &lines;
  opts.workers = 3;
  fhl_run_result a{};
  REQUIRE(fhl_run_manifest(cfg, &opts, &a) == FHL_OK);
  CHECK(a.passed == 1);
  CHECK(a.rows == 1);
  CHECK(lines == 3);  // manifest, row, summary
  CHECK(std::string(a.jsonl).find("\"oracle\":0.459759") != std::string::npos);

  fhl_run_options one{};
  one.workers = 1;
  fhl_run_result b{};
  REQUIRE(fhl_run_manifest(cfg, &one, &b) == FHL_OK);
  CHECK(std::string(a.jsonl) == std::string(b.jsonl));
  fhl_run_result_free(&a);
  fhl_run_result_free(&b);
  CHECK(a.jsonl == nullptr);

  fhl_run_options wrong{};
  wrong.kind = "sn";
  fhl_run_result c{};
  CHECK(fhl_run_manifest(cfg, &wrong, &c) == FHL_CONFIG_INVALID);
  fhl_run_options zero{};
  zero.has_trials = 1;
  zero.trials = 0;
  CHECK(fhl_run_manifest(cfg, &zero, &c) == FHL_CONFIG_INVALID);
}
