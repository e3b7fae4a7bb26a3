#include "correlation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "error.hpp"
#include "limits.hpp"

namespace fhl {

namespace {

constexpr std::uint64_t kExactBitBudget = 1u << 22;

bool exact_affordable(int n, std::uint64_t count) {
  return count <= kExactBitBudget / (2 * static_cast<std::uint64_t>(std::max(n, 1)));
}

Integer ipow(const Integer& base, std::uint64_t e) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
  return out;
}

// (1 - j 2^-n)^C as an exact rational.
Rational miss_power(int n, std::uint64_t j, std::uint64_t count) {
  Integer scale = pow2_int(static_cast<std::uint64_t>(n));
  Rational out(ipow(scale - Integer(static_cast<unsigned long>(j)), count),
               pow2_int(static_cast<std::uint64_t>(n) * count));
  out.canonicalize();
  return out;
}

// Cov for two distinct cubes, stable in double: (1-2p)^C - (1-p)^(2C)
// = -r^C expm1(C log1p(p^2 / r)) with r = 1 - 2p.
double pp_cov_distinct(int n, std::uint64_t count) {
  if (count == 0) return 0.0;
  double p = std::ldexp(1.0, -n);
  double c = static_cast<double>(count);
  double r = 1.0 - 2.0 * p;
  if (r == 0.0) return -std::exp(2.0 * c * std::log1p(-p));
  return -std::exp(c * std::log(r)) * std::expm1(c * std::log1p(p * p / r));
}

std::uint64_t cube_count(const SelectionModel& model, int n) {
  std::uint64_t bits = static_cast<std::uint64_t>(n) * model.dim();
  require(bits <= 62, Errc::LevelCapExceeded, "level times dimension exceeds 62");
  return std::uint64_t{1} << bits;
}

std::size_t resolve_window(std::size_t window, std::size_t count) {
  if (window == 0) return std::max<std::size_t>(1, count / 2);
  return std::min(window, count);
}

void finish_report(CorrelationReport& report) {
  auto begin = report.levels.end() - static_cast<std::ptrdiff_t>(report.window);
  report.delta_est = -std::numeric_limits<double>::infinity();
  for (auto it = begin; it != report.levels.end(); ++it) report.delta_est = std::max(report.delta_est, it->log2f_over_n);
}

}  // namespace

double pp_joint(int n, std::uint64_t count, bool same_cube) {
  if (count == 0) return 0.0;
  double p = std::ldexp(1.0, -n);
  double c = static_cast<double>(count);
  double miss_one = std::exp(c * std::log1p(-p));
  if (same_cube) return -std::expm1(c * std::log1p(-p));
  double miss_both = 1.0 - 2.0 * p <= 0.0 ? 0.0 : std::exp(c * std::log1p(-2.0 * p));
  return 1.0 - 2.0 * miss_one + miss_both;
}

std::optional<Rational> pp_joint_exact(int n, std::uint64_t count, bool same_cube) {
  if (count == 0) return Rational(0);
  if (!exact_affordable(n, count)) return std::nullopt;
  if (same_cube) return 1 - miss_power(n, 1, count);
  Rational out = 1 - 2 * miss_power(n, 1, count) + miss_power(n, 2, count);
  out.canonicalize();
  return out;
}

CovEstimate exact_pp_cov_count(int n, std::uint64_t count, std::uint64_t a, std::uint64_t b) {
  CovEstimate est;
  est.level = n;
  est.a = a;
  est.b = b;
  if (count == 0) {
    est.value = 0.0;
    est.exact = Rational(0);
    return est;
  }
  double p_hit = pp_hit_prob(n, count);
  if (a == b) {
    est.value = p_hit * (1.0 - p_hit);
  } else {
    est.value = pp_cov_distinct(n, count);
  }
  if (exact_affordable(n, count)) {
    Rational ph = pp_hit_prob_exact(n, count);
    Rational joint = *pp_joint_exact(n, count, a == b);
    Rational cov = joint - ph * ph;
    cov.canonicalize();
    est.exact = cov;
    est.value = cov.get_d();
  }
  return est;
}

CovEstimate exact_pp_cov(const PointProcessSpec& spec, int n, const Cube& a, const Cube& b) {
  require(a.dim() == 1 && b.dim() == 1, Errc::UnsupportedDimension, "point-process covariance is d = 1 only");
  require(a.level() == n && b.level() == n, Errc::LevelMismatch, "cubes must sit at level n");
  return exact_pp_cov_count(n, block_count(spec, n), a.linear_index(), b.linear_index());
}

std::vector<CovEstimate> empirical_cov(const SelectionModel& model, int n,
                                       const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs,
                                       std::uint64_t trials, const TrialRng& rng) {
  require(trials >= 100, Errc::InvalidArgument, "empirical covariance needs T >= 100");
  check_level(n);
  std::uint64_t total = cube_count(model, n);
  std::vector<std::uint64_t> cells;
  for (auto [a, b] : pairs) {
    require(a < total && b < total, Errc::CoordOutOfRange, "pair index outside level " + std::to_string(n));
    cells.push_back(a);
    cells.push_back(b);
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  auto slot = [&](std::uint64_t idx) {
    return static_cast<std::size_t>(std::lower_bound(cells.begin(), cells.end(), idx) - cells.begin());
  };

  auto draws = map_trials<std::vector<std::uint8_t>>(trials, rng.workers, [&](std::uint64_t i) {
    Stream stream = rng.stream(i);
    std::vector<std::uint8_t> z(cells.size(), 0);
    for (auto pos : sample_among(model, n, cells, stream)) z[pos] = 1;
    return z;
  });

  std::vector<CovEstimate> out;
  const double t = static_cast<double>(trials);
  for (auto [a, b] : pairs) {
    std::size_t sa = slot(a), sb = slot(b);
    // joint outcome counts: [za][zb]
    double cnt[2][2] = {{0, 0}, {0, 0}};
    for (const auto& z : draws) cnt[z[sa]][z[sb]] += 1;
    double ma = (cnt[1][0] + cnt[1][1]) / t;
    double mb = (cnt[0][1] + cnt[1][1]) / t;
    double mean = 0, sq = 0;
    for (int za = 0; za < 2; ++za) {
      for (int zb = 0; zb < 2; ++zb) {
        double d = (za - ma) * (zb - mb);
        mean += cnt[za][zb] * d;
        sq += cnt[za][zb] * d * d;
      }
    }
    mean /= t;
    double var = std::max(0.0, sq / t - mean * mean);
    CovEstimate est;
    est.level = n;
    est.a = a;
    est.b = b;
    est.value = mean;
    est.monte_carlo = true;
    est.trials = trials;
    est.radius = 3.0 * std::sqrt(var / t);
    out.push_back(est);
  }
  return out;
}

SignSweep pp_cov_sign_sweep(int max_level, std::uint64_t max_count) {
  require(max_level >= 1 && max_count >= 1, Errc::InvalidArgument, "sweep bounds must be positive");
  SignSweep sweep;
  sweep.max_level = max_level;
  sweep.max_count = max_count;
  for (int n = 1; n <= max_level; ++n) {
    Integer scale = pow2_int(static_cast<std::uint64_t>(n));
    Integer a = (scale - 2) * scale;          // (1-2p) * 2^(2n)
    Integer b = (scale - 1) * (scale - 1);    // (1-p)^2 * 2^(2n)
    Integer lhs = 1, rhs = 1;
    for (std::uint64_t c = 1; c <= max_count; ++c) {
      lhs *= a;
      rhs *= b;
      ++sweep.configurations;
      if (!(lhs < rhs) && sweep.all_negative) {
        sweep.all_negative = false;
        sweep.first_failure_level = n;
        sweep.first_failure_count = c;
      }
    }
  }
  return sweep;
}

CorrelationReport f_and_delta(const SelectionModel& model, int n_lo, int n_hi, const Rational& epsilon,
                              std::size_t window) {
  require(epsilon > 0, Errc::InvalidArgument, "epsilon must be > 0");
  require(n_lo >= 1 && n_lo <= n_hi, Errc::InvalidArgument, "f_and_delta needs 1 <= n_lo <= n_hi");
  check_level(n_hi);
  CorrelationReport report;
  report.epsilon = epsilon;
  report.window = resolve_window(window, static_cast<std::size_t>(n_hi - n_lo + 1));
  const double eps = epsilon.get_d();
  for (int n = n_lo; n <= n_hi; ++n) {
    std::uint64_t total = cube_count(model, n);
    bool self_ok = false, distinct_ok = false;
    auto p_exact = exact_hit_prob_rational(model, n);
    std::optional<Rational> distinct_cov;
    std::uint64_t count = 0;
    if (model.is_bernoulli()) {
      distinct_cov = Rational(0);
    } else {
      count = model.block_count(n);
      distinct_cov = exact_pp_cov_count(n, count, 0, 1).exact;
      if (count > 0 && !exact_affordable(n, count)) p_exact.reset();
    }
    if (p_exact && distinct_cov) {
      const Rational& p = *p_exact;
      Rational thr = epsilon * p * p;
      self_ok = p * (1 - p) >= thr;
      distinct_ok = *distinct_cov >= thr;
    } else {
      double p = exact_hit_prob(model, n);
      double thr = eps * p * p;
      double cov = model.is_bernoulli() ? 0.0 : pp_cov_distinct(n, count);
      self_ok = p * (1.0 - p) >= thr;
      distinct_ok = cov >= thr;
    }
    Integer f = Integer(self_ok ? 1 : 0) + (distinct_ok ? Integer(static_cast<unsigned long>(total - 1)) : Integer(0));
    LevelF row;
    row.level = n;
    row.f = f;
    row.log2f_over_n = f > 0 ? log2_of(f) / n : -std::numeric_limits<double>::infinity();
    row.source = "exact";
    report.levels.push_back(row);
  }
  finish_report(report);
  return report;
}

CorrelationReport f_and_delta_empirical(const SelectionModel& model, int n_lo, int n_hi, const Rational& epsilon,
                                        std::uint64_t trials, const TrialRng& rng, std::size_t window) {
  require(model.dim() == 1, Errc::UnsupportedDimension, "empirical f(n, eps) is implemented for d = 1");
  require(epsilon > 0, Errc::InvalidArgument, "epsilon must be > 0");
  require(n_lo >= 3 && n_lo <= n_hi, Errc::InvalidArgument, "empirical f_and_delta needs 3 <= n_lo <= n_hi");
  check_level(n_hi);
  CorrelationReport report;
  report.epsilon = epsilon;
  report.window = resolve_window(window, static_cast<std::size_t>(n_hi - n_lo + 1));
  const double eps = epsilon.get_d();
  for (int n = n_lo; n <= n_hi; ++n) {
    std::uint64_t mid = std::uint64_t{1} << (n - 1);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs = {{mid, mid}, {mid, mid + 1}, {mid, mid + 3}};
    auto est = empirical_cov(model, n, pairs, trials, rng.with_tag(rng.tag + static_cast<std::uint64_t>(n)));
    double p = exact_hit_prob(model, n);
    double thr = eps * p * p;
    bool ok[3];
    for (int c = 0; c < 3; ++c) {
      if (est[c].value - est[c].radius >= thr) {
        ok[c] = true;
      } else if (est[c].value + est[c].radius < thr) {
        ok[c] = false;
      } else {
        fail(Errc::InsufficientPrecision, "level " + std::to_string(n) + ": covariance interval straddles eps P^2");
      }
    }
    std::uint64_t total = std::uint64_t{1} << n;
    // interior cube: one self pair, two adjacent cubes, the rest separated
    Integer f = Integer(ok[0] ? 1 : 0) + Integer(ok[1] ? 2 : 0) +
                (ok[2] ? Integer(static_cast<unsigned long>(total - 3)) : Integer(0));
    LevelF row;
    row.level = n;
    row.f = f;
    row.log2f_over_n = f > 0 ? log2_of(f) / n : -std::numeric_limits<double>::infinity();
    row.source = "monte_carlo";
    report.levels.push_back(row);
  }
  finish_report(report);
  return report;
}

}  // namespace fhl
