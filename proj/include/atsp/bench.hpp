#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "atsp/instance.hpp"

namespace atsp {

enum class Algorithm {
  kGta,         // warm_start + solve_exact
  kExactCold,   // solve_exact seeded by nearest neighbor only
  kTabuOnly,
  kNearestNeighbor,
  kGreedyEdge,
  kTwoOpt,      // nearest neighbor + two_opt_descent
  kHeldKarp,
  kBruteForce,
};

std::string to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view s);

/// One timed run. For heuristics `optimal` and `gap_percent` are measured
/// against the root assignment bound, so optimal means provably optimal.
struct BenchRecord {
  Algorithm algorithm = Algorithm::kGta;
  int n = 0;
  std::uint64_t seed = 0;
  CostRange range{};
  int repetition = 0;
  double runtime_ms = 0.0;
  Cost cost = 0;
  bool optimal = false;
  double gap_percent = 0.0;
  std::int64_t bnb_nodes = 0;
  bool parallel = false;

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

struct SuiteSpec {
  std::vector<Algorithm> algorithms{Algorithm::kGta};
  std::vector<int> sizes{10, 20, 50, 100, 200, 500};
  std::vector<std::uint64_t> seeds{42};
  std::vector<CostRange> ranges{{1, 10}};
  int repetitions = 3;
  std::int64_t time_limit_ms = 0;  // per exact solve; 0 = unlimited
  bool parallel = false;
  int threads = 0;  // 0 = hardware concurrency
};

struct SkippedCell {
  Algorithm algorithm = Algorithm::kGta;
  int n = 0;
  std::string reason;
};

struct SuiteResult {
  std::vector<BenchRecord> records;
  std::vector<SkippedCell> skipped;
};

SuiteSpec parse_suite_spec(std::string_view json_text);
SuiteResult run_suite(const SuiteSpec& spec);

/// Sorts by (algorithm name, n, seed, range, repetition).
void sort_records(std::vector<BenchRecord>& records);

struct FitResult {
  double exponent = 0.0;
  double intercept = 0.0;  // natural-log intercept: ln t = intercept + exponent * ln n
  double r_squared = 0.0;
  bool clamped = false;    // some median runtime was 0 and raised to 1 ms
  int points = 0;
};

/// Least squares on (ln n, ln median runtime). Needs >= 3 distinct n.
FitResult fit_exponent(std::span<const BenchRecord> records);

/// Per n: max/min over seeds of the per-seed median runtime.
std::map<int, double> seed_spread(std::span<const BenchRecord> records);
/// Per n: median runtime under range `a` divided by median runtime under `b`.
std::map<int, double> range_spread(std::span<const BenchRecord> records, CostRange a,
                                   CostRange b);

double median(std::vector<double> values);

std::string write_bench_csv(std::span<const BenchRecord> records);
std::vector<BenchRecord> parse_bench_csv(std::string_view text);

}  // namespace atsp
