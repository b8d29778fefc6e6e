// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Pass criterion numbers as arguments to run
// a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "atsp/bench.hpp"
#include "atsp/exact.hpp"
#include "atsp/heuristic.hpp"
#include "atsp/model_export.hpp"
#include "atsp/oracle.hpp"
#include "golden_io.hpp"
#include "golden_cases.hpp"
#include "support.hpp"

using namespace atsp;
using namespace testing_support;

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kOracleSuiteBudgetS = 60.0;
constexpr double kWarmGapLimitPercent = 5.0;
constexpr int kWarmGapMinPasses = 14;
constexpr double kWarmTimeLimitS = 10.0;
constexpr double kSeedSpreadLimit = 3.0;
constexpr double kRangeSpreadLimit = 3.0;
constexpr double kExponentTolerance = 0.01;
constexpr std::int64_t kMediumTimeLimitMs = 120'000;
constexpr int kMediumMinOptimal = 4;
const std::vector<std::uint64_t> kReferenceSeeds{42, 65, 7, 29, 133};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Solved {
  CostMatrix m;
  TabuResult warm;
  SolveReport report;
  double warm_s = 0.0;
  double total_s = 0.0;
};

Solved solve_gta(const CostMatrix& m, std::int64_t time_limit_ms = 0) {
  Solved s{m, {}, {}};
  const auto t0 = Clock::now();
  s.warm = warm_start(m, TabuParams::defaults_for(m.size()));
  s.warm_s = seconds_since(t0);
  SolveOptions o;
  o.limits.time_limit_ms = time_limit_ms;
  s.report = solve_exact(m, s.warm.tour, o);
  s.total_s = seconds_since(t0);
  return s;
}

// Instances shared between criteria, built on first use.
struct Shared {
  std::vector<Solved> small;   // n in 5..11, seeds 1..100, range (1,10)
  std::vector<Cost> small_opt;  // brute force optimum per small instance
  double small_seconds = 0.0;
  bool small_ready = false;
  std::vector<Solved> medium;  // n in {50,100,200} x reference seeds
  bool medium_ready = false;
  std::vector<Solved> large;   // n = 500 x reference seeds
  bool large_ready = false;
  std::vector<BenchRecord> n200;
  bool n200_ready = false;
};

Shared& shared() {
  static Shared s;
  return s;
}

Outcome oracle_equivalence() {
  auto& sh = shared();
  int matched = 0, hk_matched = 0;
  const auto t0 = Clock::now();
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const int n = 5 + static_cast<int>((seed - 1) % 7);
    const auto m = generate({n, seed, {1, 10}}).matrix;
    auto s = solve_gta(m);
    const auto bf = brute_force(m);
    const auto hk = held_karp(m);
    const auto& r = s.report;
    const bool valid = is_permutation_of_nodes(r.tour.order, n) &&
                       tour_cost(m, r.tour.order) == r.optimal_cost;
    if (valid && r.optimal && r.gap_percent == 0.0 && r.optimal_cost == bf.cost) ++matched;
    if (hk.cost == bf.cost) ++hk_matched;
    sh.small_opt.push_back(bf.cost);
    sh.small.push_back(std::move(s));
  }
  sh.small_seconds = seconds_since(t0);
  sh.small_ready = true;
  const bool pass = matched == 100 && hk_matched == 100 && sh.small_seconds < kOracleSuiteBudgetS;
  return {pass, fmt("solve_exact = brute_force on %d/100, held_karp = brute_force on %d/100, "
                    "%.1f s (limit %.0f s)",
                    matched, hk_matched, sh.small_seconds, kOracleSuiteBudgetS)};
}

void ensure_small() {
  if (!shared().small_ready) oracle_equivalence();
}

Outcome warm_start_quality() {
  auto& sh = shared();
  int within = 0, fast = 0;
  double worst_gap = 0.0, worst_time = 0.0;
  for (int n : {50, 100, 200}) {
    for (auto seed : kReferenceSeeds) {
      auto s = solve_gta(generate({n, seed, {1, 10}}).matrix);
      const double gap = heuristic_gap_percent(s.warm.tour.cost, s.report.optimal_cost);
      if (s.report.optimal && gap <= kWarmGapLimitPercent) ++within;
      if (s.warm_s <= kWarmTimeLimitS) ++fast;
      worst_gap = std::max(worst_gap, gap);
      worst_time = std::max(worst_time, s.warm_s);
      sh.medium.push_back(std::move(s));
    }
  }
  sh.medium_ready = true;
  const bool pass = within >= kWarmGapMinPasses && fast == 15;
  return {pass, fmt("gap <= %.1f%% on %d/15 (need %d), worst gap %.2f%%, tabu <= %.0f s on %d/15 "
                    "(worst %.2f s)",
                    kWarmGapLimitPercent, within, kWarmGapMinPasses, worst_gap, kWarmTimeLimitS,
                    fast, worst_time)};
}

void ensure_medium() {
  if (!shared().medium_ready) warm_start_quality();
}

// Deterministic report hashes of two fixed solves, frozen from a reference
// run; they tie results to the algorithm rather than to one machine.
constexpr std::uint64_t kFrozenHashN10 = 0xbed7e2747e0877ebULL;
constexpr std::uint64_t kFrozenHashN60 = 0x71d4bac4a63c5902ULL;

Outcome determinism() {
  ensure_small();
  ensure_medium();
  int same = 0, total = 0;
  for (const auto* group : {&shared().small, &shared().medium}) {
    for (const auto& s : *group) {
      const auto again = solve_gta(s.m);
      ++total;
      if (again.report.deterministic_fields_hash == s.report.deterministic_fields_hash &&
          again.warm.tour == s.warm.tour && again.warm.iterations == s.warm.iterations) {
        ++same;
      }
    }
  }
  const auto h10 = solve_gta(generate({10, 42, {1, 10}}).matrix).report.deterministic_fields_hash;
  const auto h60 = solve_gta(generate({60, 9, {10, 100}}).matrix).report.deterministic_fields_hash;
  const bool frozen = h10 == kFrozenHashN10 && h60 == kFrozenHashN60;
  return {same == total && frozen,
          fmt("%d/%d repeated solves bit-identical; frozen hashes %s (%016llx, %016llx)", same, total,
              frozen ? "match" : "DIFFER", static_cast<unsigned long long>(h10),
              static_cast<unsigned long long>(h60))};
}

Outcome warm_start_dominance() {
  ensure_small();
  ensure_medium();
  int dominated = 0, total = 0;
  for (const auto* group : {&shared().small, &shared().medium, &shared().large}) {
    for (const auto& s : *group) {
      ++total;
      if (s.report.optimal_cost <= s.warm.tour.cost &&
          s.report.warm_start_cost == s.warm.tour.cost) {
        ++dominated;
      }
    }
  }
  int equal = 0;
  for (const auto& s : shared().small) {
    const auto cold = solve_exact(s.m, std::nullopt);
    if (cold.optimal && cold.optimal_cost == s.report.optimal_cost) ++equal;
  }
  const int small = static_cast<int>(shared().small.size());
  return {dominated == total && equal == small,
          fmt("exact <= warm start on %d/%d; warm start on/off agree on %d/%d", dominated, total,
              equal, small)};
}

void ensure_n200() {
  auto& sh = shared();
  if (sh.n200_ready) return;
  SuiteSpec spec;
  spec.sizes = {200};
  spec.seeds = kReferenceSeeds;
  spec.ranges = {{1, 10}, {10, 100}};
  spec.repetitions = 3;
  sh.n200 = run_suite(spec).records;
  sh.n200_ready = true;
}

Outcome seed_invariance() {
  ensure_n200();
  std::vector<BenchRecord> narrow;
  for (const auto& r : shared().n200)
    if (r.range == CostRange{1, 10}) narrow.push_back(r);
  const double ratio = seed_spread(narrow).at(200);
  std::string medians;
  for (auto seed : kReferenceSeeds) {
    std::vector<double> t;
    for (const auto& r : narrow)
      if (r.seed == seed) t.push_back(r.runtime_ms);
    medians += fmt(" %llu:%.0f", static_cast<unsigned long long>(seed), median(t));
  }
  return {ratio <= kSeedSpreadLimit,
          fmt("n=200 max/min median runtime %.2f (limit %.1f); medians ms%s", ratio,
              kSeedSpreadLimit, medians.c_str())};
}

Outcome range_invariance() {
  ensure_n200();
  ensure_small();
  const double ratio = range_spread(shared().n200, {1, 10}, {10, 100}).at(200);
  const bool ratio_ok = ratio >= 1.0 / kRangeSpreadLimit && ratio <= kRangeSpreadLimit;
  int scaled_ok = 0;
  for (const auto& s : shared().small) {
    const auto big = solve_gta(scale(s.m, 10));
    if (big.report.optimal && big.report.tour.order == s.report.tour.order &&
        big.report.optimal_cost == 10 * s.report.optimal_cost) {
      ++scaled_ok;
    }
  }
  const int small = static_cast<int>(shared().small.size());
  return {ratio_ok && scaled_ok == small,
          fmt("n=200 median runtime (1,10)/(10,100) = %.2f (allowed [%.2f, %.1f]); "
              "scale x10 keeps tour and multiplies cost on %d/%d",
              ratio, 1.0 / kRangeSpreadLimit, kRangeSpreadLimit, scaled_ok, small)};
}

std::vector<BenchRecord> planted(double exponent, double noise) {
  SplitMix64 rng(2024);
  std::vector<BenchRecord> out;
  for (int n : {10, 20, 50, 100, 200, 500}) {
    for (int rep = 0; rep < 3; ++rep) {
      BenchRecord r;
      r.n = n;
      r.repetition = rep;
      r.runtime_ms = 0.002 * std::pow(n, exponent) * (1.0 + noise * (2.0 * rng.next_unit() - 1.0));
      out.push_back(r);
    }
  }
  return out;
}

Outcome exponent_fit() {
  double worst = 0.0;
  std::string fits;
  for (double e : {1.0, 2.0, 2.02, 3.0}) {
    for (double noise : {0.0, 0.01}) {
      const double got = fit_exponent(planted(e, noise)).exponent;
      worst = std::max(worst, std::abs(got - e));
      fits += fmt(" %.2f->%.4f", e, got);
    }
  }
  return {worst <= kExponentTolerance,
          fmt("worst error %.5f (tolerance %.2f); planted->fitted%s", worst, kExponentTolerance,
              fits.c_str())};
}

Outcome model_counts() {
  const bool closed = count_model(5000, Formulation::kDfj).binaries == 24'995'000 &&
                      count_model(10, Formulation::kMtz) == ModelCounts{90, 9, 92};
  int materialized_ok = 0;
  for (int n : {3, 10, 50, 200}) {
    const auto m = generate({n, 1, {1, 10}}).matrix;
    for (auto f : {Formulation::kMtz, Formulation::kDfj}) {
      if (materialized_counts(emit_lp(m, f)) == count_model(n, f)) ++materialized_ok;
    }
  }
  int golden_ok = 0;
  const auto lps = lp_artifacts();
  for (const auto& [name, content] : lps)
    if (read_golden(name) == content) ++golden_ok;
  return {closed && materialized_ok == 8 && golden_ok == static_cast<int>(lps.size()),
          fmt("closed forms %s; emitted counts match on %d/8; golden LP files %d/%zu",
              closed ? "ok" : "WRONG", materialized_ok, golden_ok, lps.size())};
}

Outcome cut_loop_soundness() {
  int ok = 0, max_rounds = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const int n = 4 + static_cast<int>((seed - 1) % 5);
    const auto m = generate({n, seed, {1, 10}}).matrix;
    CutLoopState s;
    s.n = n;
    bool clean = true;
    while (clean && s.status != CutLoopStatus::kTourFound) {
      try {
        s = cut_loop_step(s, parse_solution(solution_text(ref_assignment(m, s.cuts)), n));
      } catch (const std::exception&) {
        clean = false;
      }
      if (s.round > 10'000) clean = false;
    }
    max_rounds = std::max(max_rounds, s.round);
    if (!clean) continue;
    const auto order = tour_order_from_arcs(s.last_solution, n);
    if (ref_tour_cost(m, order) == brute_force(m).cost) ++ok;
  }
  return {ok == 50, fmt("%d/50 loops end in an optimal single tour (max %d rounds)", ok, max_rounds)};
}

Outcome medium_scale() {
  auto& sh = shared();
  int optimal = 0, clean = 0;
  std::string detail;
  for (auto seed : kReferenceSeeds) {
    auto s = solve_gta(generate({500, seed, {1, 10}}).matrix, kMediumTimeLimitMs);
    const auto& r = s.report;
    const bool proven = r.optimal && s.total_s <= kMediumTimeLimitMs / 1000.0;
    if (proven) ++optimal;
    if (proven || (!r.optimal && r.gap_percent > 0.0 && r.lower_bound_at_end <= r.optimal_cost)) {
      ++clean;
    }
    detail += fmt(" %llu:%.1fs%s", static_cast<unsigned long long>(seed), s.total_s,
                  r.optimal ? "" : fmt("(gap %.3f%%)", r.gap_percent).c_str());
    sh.large.push_back(std::move(s));
  }
  sh.large_ready = true;
  return {optimal >= kMediumMinOptimal && clean == 5,
          fmt("n=500 proven optimal within %lld s on %d/5 (need %d);%s",
              static_cast<long long>(kMediumTimeLimitMs / 1000), optimal, kMediumMinOptimal,
              detail.c_str())};
}

Outcome rendering_golden() {
  int ok = 0;
  const auto svgs = svg_artifacts();
  for (const auto& [name, content] : svgs)
    if (read_golden(name) == content) ++ok;
  return {ok == static_cast<int>(svgs.size()), fmt("golden SVG files %d/%zu identical", ok, svgs.size())};
}

Outcome informational_exponent() {
  SuiteSpec spec;
  spec.sizes = {20, 50, 100, 200};
  spec.seeds = {42};
  const auto fit = fit_exponent(run_suite(spec).records);
  return {true, fmt("measured gta runtime exponent %.2f (r^2 %.3f), reported only", fit.exponent,
                    fit.r_squared)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"oracle equivalence", oracle_equivalence},
      {"warm-start quality", warm_start_quality},
      {"determinism", determinism},
      {"warm-start dominance", warm_start_dominance},
      {"seed invariance", seed_invariance},
      {"cost-range invariance", range_invariance},
      {"exponent fit", exponent_fit},
      {"model counts", model_counts},
      {"cut-loop soundness", cut_loop_soundness},
      {"medium-scale solve", medium_scale},
      {"rendering golden files", rendering_golden},
  };
  std::set<int> wanted;
  for (int a = 1; a < argc; ++a) wanted.insert(std::atoi(argv[a]));

  // Criterion 10 runs before 4 so that dominance also covers n = 500.
  std::vector<int> order{1, 2, 3, 10, 4, 5, 6, 7, 8, 9, 11};
  std::map<int, Outcome> results;
  int failed = 0;
  for (int k : order) {
    if (!wanted.empty() && !wanted.count(k)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[k - 1].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", k, criteria[k - 1].first,
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    results[k] = o;
    if (!o.pass) ++failed;
  }
  if (wanted.empty() || wanted.count(0)) {
    const auto info = informational_exponent();
    std::printf("[INFO]    %s\n", info.detail.c_str());
  }
  std::printf("acceptance: %zu run, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}
