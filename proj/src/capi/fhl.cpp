#include "fhl/fhl.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "cantor.hpp"
#include "error.hpp"
#include "grid.hpp"
#include "hitting.hpp"
#include "limits.hpp"
#include "manifest.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "selection.hpp"

struct fhl_model {
  fhl::SelectionModel model;
};
struct fhl_target {
  fhl::TargetSet target;
};
struct fhl_schedule {
  fhl::CantorSchedule schedule;
};

namespace {

thread_local std::string g_last_error;

fhl_status fail_with(fhl_status s, const char* what) {
  g_last_error = what;
  return s;
}

// Runs body, mapping exceptions to status codes and recording the message.
template <class Body>
fhl_status guard(Body&& body) {
  g_last_error.clear();
  try {
    body();
    return FHL_OK;
  } catch (const fhl::Error& e) {
    return fail_with(static_cast<fhl_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail_with(FHL_BUDGET_EXCEEDED, "out of memory");
  } catch (const std::exception& e) {
    return fail_with(FHL_INTERNAL, e.what());
  } catch (...) {
    return fail_with(FHL_INTERNAL, "unknown exception");
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* name) {
  if (p == nullptr) throw fhl::Error(fhl::Errc::InvalidArgument, std::string(name) + " is null");
}

fhl::Json parse_object(const char* json, const char* what) {
  need(json, what);
  try {
    return fhl::Json::parse(json);
  } catch (const fhl::Json::parse_error& e) {
    fhl::fail(fhl::Errc::ConfigInvalid, std::string(what) + " is not valid JSON: " + e.what());
  }
}

}  // namespace

extern "C" {

const char* fhl_version(void) { return fhl::kToolVersion; }

const char* fhl_status_name(fhl_status status) {
  switch (status) {
    case FHL_OK: return "Ok";
    case FHL_NULL_ARGUMENT: return "NullArgument";
    case FHL_INTERNAL: return "Internal";
    default: return fhl::errc_name(static_cast<fhl::Errc>(static_cast<int>(status)));
  }
}

const char* fhl_last_error(void) { return g_last_error.c_str(); }

void fhl_string_free(char* s) { std::free(s); }

fhl_status fhl_set_level_cap(int cap) {
  return guard([&] { fhl::set_level_cap(cap); });
}

int fhl_level_cap(void) {
  int cap = fhl::kDefaultLevelCap;
  guard([&] { cap = fhl::level_cap(); });
  return cap;
}

size_t fhl_kind_count(void) { return fhl::manifest_kinds().size(); }

const char* fhl_kind_name(size_t index) {
  const auto& kinds = fhl::manifest_kinds();
  return index < kinds.size() ? kinds[index].c_str() : nullptr;
}

fhl_status fhl_model_create(const char* json, fhl_model** out) {
  if (out == nullptr) return fail_with(FHL_NULL_ARGUMENT, "out is null");
  *out = nullptr;
  return guard([&] {
    *out = new fhl_model{fhl::build_model(fhl::parse_model_config(parse_object(json, "model")))};
  });
}

void fhl_model_free(fhl_model* model) { delete model; }

fhl_status fhl_model_hit_prob(const fhl_model* model, int level, double* out) {
  if (model == nullptr || out == nullptr) return fail_with(FHL_NULL_ARGUMENT, "model or out is null");
  return guard([&] {
    fhl::check_level(level);
    *out = fhl::exact_hit_prob(model->model, level);
  });
}

fhl_status fhl_model_hit_prob_exact(const fhl_model* model, int level, char** out) {
  if (model == nullptr || out == nullptr) return fail_with(FHL_NULL_ARGUMENT, "model or out is null");
  *out = nullptr;
  return guard([&] {
    fhl::check_level(level);
    auto q = fhl::exact_hit_prob_rational(model->model, level);
    if (!q) fhl::fail(fhl::Errc::InsufficientPrecision, "P_" + std::to_string(level) + " is not rational");
    *out = dup(fhl::to_string(*q));
  });
}

fhl_status fhl_target_create(const char* json, fhl_target** out) {
  if (out == nullptr) return fail_with(FHL_NULL_ARGUMENT, "out is null");
  *out = nullptr;
  return guard([&] {
    *out = new fhl_target{fhl::build_target(fhl::parse_target_config(parse_object(json, "target")))};
  });
}

void fhl_target_free(fhl_target* target) { delete target; }

fhl_status fhl_target_covering_count(const fhl_target* target, int level, char** out) {
  if (target == nullptr || out == nullptr) return fail_with(FHL_NULL_ARGUMENT, "target or out is null");
  *out = nullptr;
  return guard([&] {
    target->target.require_depth(level);
    *out = dup(target->target.covering_count(level).get_str());
  });
}

fhl_status fhl_target_closed_count(const fhl_target* target, int level, char** out) {
  if (target == nullptr || out == nullptr) return fail_with(FHL_NULL_ARGUMENT, "target or out is null");
  *out = nullptr;
  return guard([&] {
    target->target.require_depth(level);
    *out = dup(target->target.closed_count(level).get_str());
  });
}

fhl_status fhl_schedule_create(const char* json, fhl_schedule** out) {
  if (out == nullptr) return fail_with(FHL_NULL_ARGUMENT, "out is null");
  *out = nullptr;
  return guard([&] {
    *out = new fhl_schedule{fhl::build_schedule(fhl::parse_target_config(parse_object(json, "schedule")))};
  });
}

void fhl_schedule_free(fhl_schedule* schedule) { delete schedule; }

size_t fhl_schedule_depth(const fhl_schedule* schedule) { return schedule ? schedule->schedule.depth() : 0; }

fhl_status fhl_schedule_generation(const fhl_schedule* schedule, size_t k, double* log2_count, double* log2_length) {
  if (schedule == nullptr || log2_count == nullptr || log2_length == nullptr) {
    return fail_with(FHL_NULL_ARGUMENT, "null argument");
  }
  return guard([&] {
    fhl::require(k >= 1 && k <= schedule->schedule.depth(), fhl::Errc::DepthInsufficient,
                 "generation " + std::to_string(k) + " is outside the schedule");
    *log2_count = schedule->schedule.interval_count(k).log2();
    *log2_length = schedule->schedule.interval_length(k).log2();
  });
}

fhl_status fhl_schedule_export_levels(const fhl_schedule* schedule, size_t depth, char** out) {
  if (schedule == nullptr || out == nullptr) return fail_with(FHL_NULL_ARGUMENT, "schedule or out is null");
  *out = nullptr;
  return guard([&] { *out = dup(fhl::export_levels(fhl::build_levels(schedule->schedule, depth))); });
}

fhl_status fhl_window_hit(const fhl_model* model, const fhl_target* target, int n_lo, int n_hi, uint64_t trials,
                          uint64_t seed, unsigned workers, fhl_window_result* out) {
  if (model == nullptr || target == nullptr || out == nullptr) {
    return fail_with(FHL_NULL_ARGUMENT, "model, target or out is null");
  }
  return guard([&] {
    fhl::TrialRng rng{seed, fhl::stream_tag("hitprob"), workers};
    fhl::WindowHit w = fhl::window_hit_probability(model->model, target->target, n_lo, n_hi, trials, rng);
    out->oracle = w.oracle.value_or(-1.0);
    out->empirical = w.empirical;
    out->radius = w.radius;
    out->hits = w.hits;
    out->trials = w.trials;
    out->agrees = w.agrees ? 1 : 0;
  });
}

fhl_status fhl_grid_describe(int level, const uint64_t* coords, size_t dim, int half_open, char** out) {
  if (coords == nullptr || out == nullptr) return fail_with(FHL_NULL_ARGUMENT, "coords or out is null");
  *out = nullptr;
  return guard([&] {
    fhl::Cube q = fhl::make_cube(level, std::vector<std::uint64_t>(coords, coords + dim),
                                 half_open ? fhl::Closure::HalfOpen : fhl::Closure::Closed);
    fhl::Json j;
    j["cube"] = fhl::describe(q);
    fhl::Json ext = fhl::Json::array();
    for (std::size_t a = 0; a < q.dim(); ++a) ext.push_back(fhl::to_string(q.extent(a)));
    j["extent"] = ext;
    j["volume"] = fhl::to_string(q.volume());
    j["linear_index"] = q.linear_index();
    j["parent"] = q.level() > 0 ? fhl::Json(fhl::describe(fhl::parent(q))) : fhl::Json(nullptr);
    fhl::Json ch = fhl::Json::array();
    for (const auto& c : fhl::children(q)) ch.push_back(fhl::describe(c));
    j["children"] = ch;
    *out = dup(j.dump());
  });
}

fhl_status fhl_run_manifest(const char* config_json, const fhl_run_options* options, fhl_run_result* result) {
  if (config_json == nullptr || result == nullptr) return fail_with(FHL_NULL_ARGUMENT, "config or result is null");
  *result = fhl_run_result{};
  return guard([&] {
    std::string kind = options && options->kind ? options->kind : "";
    fhl::Manifest m = fhl::parse_manifest(config_json, kind);
    fhl::RecordSink sink;
    if (options) {
      if (options->has_seed) m.seed = options->seed;
      if (options->has_trials) {
        fhl::require(options->trials > 0, fhl::Errc::ConfigInvalid, "--trials: must be >= 1");
        m.trials = options->trials;
      }
      if (options->workers > 0) m.workers = options->workers;
      if (options->out_dir) m.out_dir = options->out_dir;
      if (options->on_record) {
        fhl_record_fn fn = options->on_record;
        void* user = options->user;
        sink = [fn, user](const std::string& line) { fn(line.c_str(), user); };
      }
    }
    fhl::RunSummary s = fhl::run_manifest(m, sink);
    result->passed = s.passed ? 1 : 0;
    result->rows = s.rows;
    result->failures = s.failures;
    result->digest = dup(s.digest);
    result->jsonl = dup(s.jsonl);
    result->csv = dup(s.csv);
  });
}

void fhl_run_result_free(fhl_run_result* result) {
  if (result == nullptr) return;
  std::free(result->digest);
  std::free(result->jsonl);
  std::free(result->csv);
  *result = fhl_run_result{};
}

}  // extern "C"
