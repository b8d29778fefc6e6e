#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "atsp/bench.hpp"
#include "atsp/error.hpp"
#include "atsp/oracle.hpp"

using namespace atsp;

namespace {

std::vector<BenchRecord> power_law(double c, double exponent, std::vector<int> sizes) {
  std::vector<BenchRecord> out;
  for (int n : sizes) {
    for (int rep = 0; rep < 3; ++rep) {
      BenchRecord r;
      r.n = n;
      r.repetition = rep;
      r.runtime_ms = c * std::pow(static_cast<double>(n), exponent);
      out.push_back(r);
    }
  }
  return out;
}

}  // namespace

TEST(RunSuite, SingleGtaCell) {
  SuiteSpec spec;
  spec.sizes = {10};
  spec.seeds = {42};
  spec.repetitions = 1;
  const auto res = run_suite(spec);
  ASSERT_EQ(res.records.size(), 1u);
  EXPECT_TRUE(res.skipped.empty());
  const auto& r = res.records[0];
  EXPECT_TRUE(r.optimal);
  EXPECT_EQ(r.cost, brute_force(generate({10, 42, {1, 10}}).matrix).cost);
  EXPECT_EQ(r.gap_percent, 0.0);
  EXPECT_FALSE(r.parallel);
}

TEST(RunSuite, GridShapeAndDeterminism) {
  SuiteSpec spec;
  spec.algorithms = {Algorithm::kGta, Algorithm::kNearestNeighbor, Algorithm::kHeldKarp};
  spec.sizes = {8, 12};
  spec.seeds = {42, 65, 7, 29, 133};
  spec.ranges = {{1, 10}, {10, 100}};
  spec.repetitions = 2;
  const auto a = run_suite(spec);
  EXPECT_EQ(a.records.size(), 3u * 2 * 5 * 2 * 2);
  auto b = run_suite(spec);
  spec.parallel = true;
  spec.threads = 3;
  auto c = run_suite(spec);
  ASSERT_EQ(a.records.size(), b.records.size());
  ASSERT_EQ(a.records.size(), c.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    auto x = a.records[k], y = b.records[k], z = c.records[k];
    EXPECT_TRUE(z.parallel);
    x.runtime_ms = y.runtime_ms = z.runtime_ms = 0;
    z.parallel = false;
    EXPECT_EQ(x, y);
    EXPECT_EQ(x, z);
  }
  for (const auto& r : a.records) {
    if (r.algorithm != Algorithm::kNearestNeighbor) {
      EXPECT_TRUE(r.optimal) << to_string(r.algorithm) << " " << r.n;
    }
  }
}

TEST(RunSuite, OracleSizeCapsAreSkipped) {
  SuiteSpec spec;
  spec.algorithms = {Algorithm::kBruteForce};
  spec.sizes = {6, 14};
  spec.repetitions = 1;
  const auto res = run_suite(spec);
  EXPECT_EQ(res.records.size(), 1u);
  ASSERT_EQ(res.skipped.size(), 1u);
  EXPECT_EQ(res.skipped[0].n, 14);
}

TEST(SuiteSpecParsing, Fields) {
  const auto s = parse_suite_spec(
      R"({"algorithms": ["gta", "nn"], "sizes": [10, 20], "seeds": [1, 2],
          "ranges": ["1:10", [10, 100]], "repetitions": 4, "time_limit_ms": 500})");
  EXPECT_EQ(s.algorithms, (std::vector<Algorithm>{Algorithm::kGta, Algorithm::kNearestNeighbor}));
  EXPECT_EQ(s.sizes, (std::vector<int>{10, 20}));
  EXPECT_EQ(s.ranges, (std::vector<CostRange>{{1, 10}, {10, 100}}));
  EXPECT_EQ(s.repetitions, 4);
  EXPECT_EQ(s.time_limit_ms, 500);
  EXPECT_THROW(parse_suite_spec("{"), FormatError);
  EXPECT_THROW(parse_suite_spec(R"({"repetitions": 0})"), std::invalid_argument);
  EXPECT_THROW(parse_suite_spec(R"({"algorithms": ["lkh"]})"), std::invalid_argument);
}

TEST(FitExponent, ExactPowerLaw) {
  const auto r = power_law(3.0, 2.0, {10, 20, 50, 100, 200, 500});
  const auto f = fit_exponent(r);
  EXPECT_NEAR(f.exponent, 2.0, 1e-6);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-9);
  EXPECT_NEAR(f.intercept, std::log(3.0), 1e-6);
  EXPECT_EQ(f.points, 6);
  EXPECT_FALSE(f.clamped);
}

TEST(FitExponent, PlantedExponents) {
  for (double e : {1.0, 2.0, 2.02, 3.0}) {
    EXPECT_NEAR(fit_exponent(power_law(0.05, e, {10, 20, 50, 100, 200, 500})).exponent, e, 1e-2);
  }
}

TEST(FitExponent, ConstantRuntime) {
  EXPECT_NEAR(fit_exponent(power_law(7.0, 0.0, {10, 20, 50})).exponent, 0.0, 1e-12);
}

TEST(FitExponent, ClampsZeroRuntimes) {
  auto r = power_law(1.0, 1.0, {10, 20, 50});
  for (auto& x : r)
    if (x.n == 10) x.runtime_ms = 0.0;
  EXPECT_TRUE(fit_exponent(r).clamped);
  EXPECT_THROW(fit_exponent(power_law(1.0, 1.0, {10, 20})), std::invalid_argument);
}

TEST(Spread, Definitions) {
  std::vector<BenchRecord> rs;
  for (std::uint64_t seed : {1, 2}) {
    BenchRecord r;
    r.n = 50;
    r.seed = seed;
    r.runtime_ms = seed == 1 ? 100.0 : 250.0;
    rs.push_back(r);
  }
  EXPECT_DOUBLE_EQ(seed_spread(rs).at(50), 2.5);
  rs[1].runtime_ms = 100.0;
  EXPECT_DOUBLE_EQ(seed_spread(rs).at(50), 1.0);
  rs[1].range = {10, 100};
  rs[1].runtime_ms = 40.0;
  EXPECT_DOUBLE_EQ(range_spread(rs, {1, 10}, {10, 100}).at(50), 2.5);
  EXPECT_DOUBLE_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_DOUBLE_EQ(median({4.0, 1.0}), 2.5);
}

TEST(BenchCsv, HeaderAndRoundTrip) {
  const std::string header =
      "algorithm,n,seed,range_low,range_high,repetition,runtime_ms,cost,optimal,gap_percent,"
      "bnb_nodes,parallel\n";
  EXPECT_EQ(write_bench_csv({}), header);
  SuiteSpec spec;
  spec.algorithms = {Algorithm::kGta, Algorithm::kTwoOpt, Algorithm::kGreedyEdge};
  spec.sizes = {7, 9};
  spec.repetitions = 1;
  auto rs = run_suite(spec).records;
  const auto text = write_bench_csv(std::span(rs).first(1));
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  const auto back = parse_bench_csv(write_bench_csv(rs));
  EXPECT_EQ(back, rs);
  EXPECT_THROW(parse_bench_csv("algorithm,n\n"), FormatError);
}

TEST(BenchCsv, SortOrder) {
  std::vector<BenchRecord> rs(3);
  rs[0].algorithm = Algorithm::kNearestNeighbor;
  rs[1].n = 20;
  rs[2].n = 10;
  sort_records(rs);
  EXPECT_EQ(rs[0].n, 10);
  EXPECT_EQ(rs[1].n, 20);
  EXPECT_EQ(rs[2].algorithm, Algorithm::kNearestNeighbor);
}
