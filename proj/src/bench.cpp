#include "atsp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <Eigen/Dense>

#include "atsp/error.hpp"
#include "atsp/exact.hpp"
#include "atsp/heuristic.hpp"
#include "atsp/oracle.hpp"
#include "json.hpp"

namespace atsp {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::pair<Algorithm, std::string_view> kAlgorithmNames[] = {
    {Algorithm::kGta, "gta"},
    {Algorithm::kExactCold, "exact_cold"},
    {Algorithm::kTabuOnly, "tabu_only"},
    {Algorithm::kNearestNeighbor, "nn"},
    {Algorithm::kGreedyEdge, "greedy_edge"},
    {Algorithm::kTwoOpt, "two_opt"},
    {Algorithm::kHeldKarp, "held_karp"},
    {Algorithm::kBruteForce, "brute_force"},
};

std::optional<std::string> cap_violation(Algorithm a, int n) {
  if (a == Algorithm::kHeldKarp && n > kHeldKarpMaxNodes) {
    return "held_karp is capped at " + std::to_string(kHeldKarpMaxNodes) + " nodes";
  }
  if (a == Algorithm::kBruteForce && n > kBruteForceMaxNodes) {
    return "brute_force is capped at " + std::to_string(kBruteForceMaxNodes) + " nodes";
  }
  return std::nullopt;
}

struct Cell {
  Algorithm algorithm;
  int n;
  std::uint64_t seed;
  CostRange range;
  int repetition;
  std::size_t instance;
};

BenchRecord run_cell(const Cell& cell, const CostMatrix& m, Cost root_bound,
                     std::int64_t time_limit_ms) {
  BenchRecord r;
  r.algorithm = cell.algorithm;
  r.n = cell.n;
  r.seed = cell.seed;
  r.range = cell.range;
  r.repetition = cell.repetition;

  std::optional<SolveReport> report;
  Tour tour;
  SolveOptions options;
  options.limits.time_limit_ms = time_limit_ms;

  const auto start = Clock::now();
  switch (cell.algorithm) {
    case Algorithm::kGta: {
      auto warm = warm_start(m, TabuParams::defaults_for(m.size()));
      report = solve_exact(m, warm.tour, options);
      break;
    }
    case Algorithm::kExactCold:
      report = solve_exact(m, std::nullopt, options);
      break;
    case Algorithm::kTabuOnly:
      tour = warm_start(m, TabuParams::defaults_for(m.size())).tour;
      break;
    case Algorithm::kNearestNeighbor:
      tour = nearest_neighbor(m, 0);
      break;
    case Algorithm::kGreedyEdge:
      tour = greedy_edge(m);
      break;
    case Algorithm::kTwoOpt:
      tour = two_opt_descent(m, nearest_neighbor(m, 0));
      break;
    case Algorithm::kHeldKarp:
      tour = held_karp(m);
      break;
    case Algorithm::kBruteForce:
      tour = brute_force(m);
      break;
  }
  r.runtime_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();

  if (report) {
    r.cost = report->optimal_cost;
    r.optimal = report->optimal;
    r.gap_percent = report->gap_percent;
    r.bnb_nodes = report->bnb_nodes_explored;
  } else if (cell.algorithm == Algorithm::kHeldKarp ||
             cell.algorithm == Algorithm::kBruteForce) {
    r.cost = tour.cost;
    r.optimal = true;
    r.gap_percent = 0.0;
  } else {
    r.cost = tour.cost;
    r.gap_percent = gap_percent(tour.cost, root_bound);
    r.optimal = tour.cost == root_bound;
  }
  return r;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename T>
T parse_number(std::string_view s, const char* field) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw FormatError(std::string("invalid ") + field + " in bench CSV: " + std::string(s));
  }
  return v;
}

constexpr std::string_view kCsvHeader =
    "algorithm,n,seed,range_low,range_high,repetition,runtime_ms,cost,optimal,gap_percent,"
    "bnb_nodes,parallel";

double floor_runtime(double ms) { return std::max(ms, 1e-3); }

}  // namespace

std::string to_string(Algorithm a) {
  for (const auto& [alg, name] : kAlgorithmNames)
    if (alg == a) return std::string(name);
  return "gta";
}

Algorithm parse_algorithm(std::string_view s) {
  for (const auto& [alg, name] : kAlgorithmNames)
    if (name == s) return alg;
  throw std::invalid_argument("unknown algorithm: " + std::string(s));
}

SuiteSpec parse_suite_spec(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid suite JSON: ") + e.what());
  }
  SuiteSpec spec;
  try {
    if (j.contains("algorithms")) {
      spec.algorithms.clear();
      for (const auto& a : j["algorithms"]) spec.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    }
    if (j.contains("sizes")) spec.sizes = j["sizes"].get<std::vector<int>>();
    if (j.contains("seeds")) spec.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    if (j.contains("ranges")) {
      spec.ranges.clear();
      for (const auto& r : j["ranges"]) {
        if (r.is_string()) {
          spec.ranges.push_back(parse_range(r.get<std::string>()));
        } else {
          spec.ranges.push_back({r.at(0).get<Cost>(), r.at(1).get<Cost>()});
        }
      }
    }
    spec.repetitions = j.value("repetitions", spec.repetitions);
    spec.time_limit_ms = j.value("time_limit_ms", spec.time_limit_ms);
    spec.parallel = j.value("parallel", spec.parallel);
    spec.threads = j.value("threads", spec.threads);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid suite field: ") + e.what());
  }
  if (spec.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  for (int n : spec.sizes)
    if (n < 2) throw std::invalid_argument("suite sizes must be >= 2");
  for (const auto& r : spec.ranges)
    if (r.low < 1 || r.high < r.low) throw std::invalid_argument("invalid cost range in suite");
  return spec;
}

SuiteResult run_suite(const SuiteSpec& spec) {
  SuiteResult result;

  struct Instance {
    CostMatrix matrix;
    Cost root_bound;
  };
  std::vector<Instance> instances;
  std::map<std::tuple<int, std::uint64_t, CostRange>, std::size_t> instance_index;
  std::vector<Cell> cells;

  for (Algorithm a : spec.algorithms) {
    for (int n : spec.sizes) {
      if (auto why = cap_violation(a, n)) {
        result.skipped.push_back({a, n, *why});
        continue;
      }
      for (std::uint64_t seed : spec.seeds) {
        for (const CostRange& range : spec.ranges) {
          const auto key = std::make_tuple(n, seed, range);
          auto it = instance_index.find(key);
          if (it == instance_index.end()) {
            auto m = generate({n, seed, range, GenMode::kUniformMatrix}).matrix;
            const Cost bound = hungarian(m)->bound;
            instances.push_back({std::move(m), bound});
            it = instance_index.emplace(key, instances.size() - 1).first;
          }
          for (int rep = 0; rep < spec.repetitions; ++rep) {
            cells.push_back({a, n, seed, range, rep, it->second});
          }
        }
      }
    }
  }

  result.records.resize(cells.size());
  auto run = [&](std::size_t k) {
    const Cell& c = cells[k];
    const Instance& inst = instances[c.instance];
    result.records[k] = run_cell(c, inst.matrix, inst.root_bound, spec.time_limit_ms);
    result.records[k].parallel = spec.parallel;
  };

  if (spec.parallel) {
    unsigned threads = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                        : std::max(1U, std::thread::hardware_concurrency());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < cells.size(); k = next++) run(k);
      });
    }
    for (auto& th : pool) th.join();
  } else {
    for (std::size_t k = 0; k < cells.size(); ++k) run(k);
  }
  sort_records(result.records);
  return result;
}

void sort_records(std::vector<BenchRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const BenchRecord& a, const BenchRecord& b) {
    const auto an = to_string(a.algorithm);
    const auto bn = to_string(b.algorithm);
    return std::tie(an, a.n, a.seed, a.range, a.repetition) <
           std::tie(bn, b.n, b.seed, b.range, b.repetition);
  });
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

FitResult fit_exponent(std::span<const BenchRecord> records) {
  std::map<int, std::vector<double>> by_n;
  for (const auto& r : records) {
    if (r.algorithm != records.front().algorithm) {
      throw std::invalid_argument("fit_exponent expects records of a single algorithm");
    }
    by_n[r.n].push_back(r.runtime_ms);
  }
  if (by_n.size() < 3) throw std::invalid_argument("need at least 3 distinct n to fit");

  FitResult fit;
  const auto k = static_cast<Eigen::Index>(by_n.size());
  Eigen::MatrixXd design(k, 2);
  Eigen::VectorXd y(k);
  Eigen::Index row = 0;
  for (const auto& [n, times] : by_n) {
    double t = median(times);
    if (t <= 0.0) {
      t = 1.0;
      fit.clamped = true;
    }
    design(row, 0) = 1.0;
    design(row, 1) = std::log(static_cast<double>(n));
    y(row) = std::log(t);
    ++row;
  }
  const Eigen::Vector2d beta = design.colPivHouseholderQr().solve(y);
  fit.intercept = beta(0);
  fit.exponent = beta(1);
  fit.points = static_cast<int>(k);
  const double ss_res = (y - design * beta).squaredNorm();
  const double ss_tot = (y.array() - y.mean()).matrix().squaredNorm();
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

std::map<int, double> seed_spread(std::span<const BenchRecord> records) {
  std::map<int, std::map<std::uint64_t, std::vector<double>>> cells;
  for (const auto& r : records) cells[r.n][r.seed].push_back(r.runtime_ms);
  std::map<int, double> out;
  for (const auto& [n, by_seed] : cells) {
    if (by_seed.size() < 2) {
      throw std::invalid_argument("seed_spread needs >= 2 seeds at n = " + std::to_string(n));
    }
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& [seed, times] : by_seed) {
      const double t = floor_runtime(median(times));
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    out[n] = hi / lo;
  }
  return out;
}

std::map<int, double> range_spread(std::span<const BenchRecord> records, CostRange a,
                                   CostRange b) {
  std::map<int, std::vector<double>> ta, tb;
  std::set<int> sizes;
  for (const auto& r : records) {
    sizes.insert(r.n);
    if (r.range == a) ta[r.n].push_back(r.runtime_ms);
    if (r.range == b) tb[r.n].push_back(r.runtime_ms);
  }
  std::map<int, double> out;
  for (int n : sizes) {
    if (!ta.contains(n) || !tb.contains(n)) {
      throw std::invalid_argument("range_spread is missing a range at n = " + std::to_string(n));
    }
    out[n] = floor_runtime(median(ta[n])) / floor_runtime(median(tb[n]));
  }
  return out;
}

std::string write_bench_csv(std::span<const BenchRecord> records) {
  std::vector<BenchRecord> sorted(records.begin(), records.end());
  sort_records(sorted);
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : sorted) {
    out << to_string(r.algorithm) << ',' << r.n << ',' << r.seed << ',' << r.range.low << ','
        << r.range.high << ',' << r.repetition << ',' << format_double(r.runtime_ms) << ','
        << r.cost << ',' << (r.optimal ? 1 : 0) << ',' << format_double(r.gap_percent) << ','
        << r.bnb_nodes << ',' << (r.parallel ? 1 : 0) << '\n';
  }
  return out.str();
}

std::vector<BenchRecord> parse_bench_csv(std::string_view text) {
  std::vector<BenchRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw FormatError("bench CSV header mismatch");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (f.size() != 12) throw FormatError("bench CSV row needs 12 fields");
    BenchRecord r;
    try {
      r.algorithm = parse_algorithm(f[0]);
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
    r.n = parse_number<int>(f[1], "n");
    r.seed = parse_number<std::uint64_t>(f[2], "seed");
    r.range.low = parse_number<Cost>(f[3], "range_low");
    r.range.high = parse_number<Cost>(f[4], "range_high");
    r.repetition = parse_number<int>(f[5], "repetition");
    r.runtime_ms = parse_number<double>(f[6], "runtime_ms");
    r.cost = parse_number<Cost>(f[7], "cost");
    r.optimal = parse_number<int>(f[8], "optimal") != 0;
    r.gap_percent = parse_number<double>(f[9], "gap_percent");
    r.bnb_nodes = parse_number<std::int64_t>(f[10], "bnb_nodes");
    r.parallel = parse_number<int>(f[11], "parallel") != 0;
    out.push_back(r);
  }
  return out;
}

}  // namespace atsp
