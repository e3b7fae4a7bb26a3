#include <doctest.h>

#include "support.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "limits.hpp"
#include "manifest.hpp"

using namespace fhl;

namespace {

const char* kHit = R"({
  "schema": 1, "kind": "hitprob", "seed": 7, "trials": 10000,
  "model": {"kind": "bernoulli", "gamma": 0.5},
  "target": {"kind": "point", "x": 0},
  "params": {"windows": [[4, 6]]}
})";

std::string error_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

Json first_row(const RunSummary& s) {
  std::istringstream in(s.jsonl);
  std::string line;
  while (std::getline(in, line)) {
    Json j = Json::parse(line);
    if (j["record"] == "row") return j;
  }
  return Json();
}

}  // namespace

TEST_CASE("hitprob manifest reproduces the window oracle") {
  Manifest m = parse_manifest(kHit);
  RunSummary s = run_manifest(m);
  CHECK(s.passed);
  CHECK(s.rows == 1);
  Json row = first_row(s);
  CHECK(row["oracle"].get<double>() == doctest::Approx(0.4597597).epsilon(1e-6));
  CHECK(row["agrees"].get<bool>());
  CHECK(row["radius"].get<double>() > 0);
}

TEST_CASE("manifests round-trip through their canonical JSON") {
  Manifest m = parse_manifest(kHit);
  Manifest again = parse_manifest(to_json(m).dump());
  CHECK(again == m);
  CHECK(to_json(m)["model"]["gamma"] == "1/2");
  CHECK(manifest_digest(m) == manifest_digest(again));
  Manifest w = m;
  w.workers = 8;
  w.out_dir = "/tmp/elsewhere";
  CHECK(manifest_digest(w) == manifest_digest(m));
  w.seed = 8;
  CHECK(manifest_digest(w) != manifest_digest(m));
}

TEST_CASE("unknown keys and bad values name their field") {
  std::string with_typo = kHit;
  with_typo.replace(with_typo.find("\"windows\""), 9, "\"windws\"");
  CHECK(error_of([&] { parse_manifest(with_typo); }).find("$.params.windws") != std::string::npos);
  CHECK(error_of([] { parse_manifest(R"({"schema":1,"kind":"sn","model":{"kind":"bernoulli","gama":1},"target":{"kind":"full"},"params":{"levels":[3]}})"); })
            .find("$.model.gama") != std::string::npos);
  CHECK(error_of([] { parse_manifest(R"({"schema":2,"kind":"sn"})"); }).find("$.schema") != std::string::npos);
  CHECK(error_of([] { parse_manifest(R"({"schema":1,"kind":"warp"})"); }).find("$.kind") != std::string::npos);
  CHECK(error_of([] { parse_manifest(R"({"schema":1,"kind":"hn","model":{"kind":"bernoulli","gamma":"x/y"},"target":{"kind":"full"},"params":{"levels":[3]}})"); })
            .find("$.model.gamma") != std::string::npos);
  CHECK(error_of([] { parse_manifest(R"({"schema":1,"kind":"sn","target":{"kind":"full"},"params":{"levels":[3]}})"); })
            .find("$.model") != std::string::npos);
  CHECK(error_of([] { parse_manifest(kHit, "sn"); }).find("ConfigInvalid") == 0);
}

TEST_CASE("level cap violations surface before sampling") {
  std::string text = kHit;
  text.replace(text.find("[4, 6]"), 6, "[4, 40]");
  Manifest m = parse_manifest(text);
  std::size_t lines = 0;
  try {
    run_manifest(m, [&](const std::string&) { ++lines; });
    FAIL("expected LevelCapExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::LevelCapExceeded);
  }
  CHECK(lines == 0);
}

TEST_CASE("side-condition failures surface before sampling") {
  Manifest m = parse_manifest(R"({"schema":1,"kind":"hitprob","model":{"kind":"bernoulli","gamma":"1/2"},
    "target":{"kind":"prop14","t":"1/10","n":[4],"depth":2},"params":{"windows":[[2,4]]}})");
  std::size_t lines = 0;
  try {
    run_manifest(m, [&](const std::string&) { ++lines; });
    FAIL("expected DegenerateGeneration");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateGeneration);
  }
  CHECK(lines == 0);
}

TEST_CASE("output is independent of worker count") {
  Manifest m = parse_manifest(kHit);
  m.workers = 1;
  RunSummary a = run_manifest(m);
  m.workers = 4;
  RunSummary b = run_manifest(m);
  CHECK(a.jsonl == b.jsonl);
  CHECK(a.csv == b.csv);
  m.seed = 8;
  CHECK(run_manifest(m).jsonl != a.jsonl);
  CHECK(a.jsonl.find("wall") == std::string::npos);
}

TEST_CASE("files are written with documented CSV headers") {
  auto dir = std::filesystem::temp_directory_path() / "fhl_manifest_test";
  std::filesystem::remove_all(dir);
  Manifest m = parse_manifest(kHit);
  m.out_dir = dir.string();
  RunSummary s = run_manifest(m);
  REQUIRE(std::filesystem::exists(dir / "hitprob.jsonl"));
  REQUIRE(std::filesystem::exists(dir / "hitprob.csv"));
  std::ifstream csv(dir / "hitprob.csv");
  std::string line, header;
  std::size_t docs = 0;
  while (std::getline(csv, line)) {
    if (line.rfind("# ", 0) == 0) {
      ++docs;
    } else {
      header = line;
      break;
    }
  }
  std::size_t columns = 1 + static_cast<std::size_t>(std::count(header.begin(), header.end(), ','));
  CHECK(docs == columns);
  CHECK(header.rfind("n_lo,n_hi,", 0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("every experiment kind runs from a small manifest") {
  const char* configs[] = {
      R"({"schema":1,"kind":"sn","seed":1,"trials":2000,"model":{"kind":"bernoulli","gamma":1},
          "target":{"kind":"full"},"params":{"levels":[3,4]}})",
      R"({"schema":1,"kind":"hn","model":{"kind":"bernoulli","gamma":"1/2"},
          "target":{"kind":"uniform","count":2,"ratio":"1/16","depth":4},"params":{"levels":[12,16]}})",
      R"({"schema":1,"kind":"boxdim","target":{"kind":"uniform","count":4,"ratio":"1/16","depth":4},
          "params":{"n_lo":4,"n_hi":16,"expect":0.5,"tolerance":0.02}})",
      R"({"schema":1,"kind":"lemma23","seed":3,"trials":200,"params":{"gamma0":"1/2","beta":"1/4","levels":[12,16]}})",
      R"({"schema":1,"kind":"prop14-count","params":{"t":"1/2","depth":1,"n":[4,100],"m":[20],"tm":["2/5"]}})",
      R"({"schema":1,"kind":"prop14-count","params":{"t":"1/2","depth":20,"conforming":{"gamma0":"1/4","n1":4}}})",
      R"({"schema":1,"kind":"corr","model":{"kind":"prop14","gamma0":"1/2"},
          "params":{"n_lo":8,"n_hi":16,"epsilons":["1/10","1/2",1],"max_delta":0.05,"expect_f":1}})",
      R"({"schema":1,"kind":"corr","model":{"kind":"prop13","generations":2},
          "params":{"n_lo":10,"n_hi":20,"epsilons":["1/2"]}})",
      R"({"schema":1,"kind":"grid","params":{"level":3,"coords":[5],"beta":"1/3"}})",
      R"({"schema":1,"kind":"levels","target":{"kind":"prop14","t":"1/2","n":[4],"depth":2},"params":{}})",
  };
  for (const char* text : configs) {
    CAPTURE(text);
    Manifest m = parse_manifest(text);
    RunSummary s = run_manifest(m);
    CHECK(s.passed);
    CHECK(s.rows > 0);
    CHECK(parse_manifest(to_json(m).dump()) == m);
  }
}

TEST_CASE("prop14-count reproduces #F_1 = 56 as an exact field") {
  Manifest m = parse_manifest(
      R"({"schema":1,"kind":"prop14-count","params":{"t":"1/2","depth":1,"n":[4,100],"m":[20],"tm":["2/5"]}})");
  Json row = first_row(run_manifest(m));
  CHECK(row["f_count"] == 56);
  CHECK(row["g_count"] == 4);
}

TEST_CASE("manifest level cap") {
  Manifest m = parse_manifest(R"({"schema":1,"kind":"grid","level_cap":40,"params":{"level":35,"coords":[1]}})");
  CHECK(run_manifest(m).passed);
  set_level_cap(kDefaultLevelCap);
}
