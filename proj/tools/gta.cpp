// Command-line driver: instance generation, warm start, exact solve, model
// export with an external-solver cut loop, benchmarks and plots.
//
// Exit codes: 0 ok, 2 usage, 3 non-optimal or incomplete, 4 I/O, 5 format.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "atsp/bench.hpp"
#include "atsp/error.hpp"
#include "atsp/exact.hpp"
#include "atsp/heuristic.hpp"
#include "atsp/instance.hpp"
#include "atsp/model_export.hpp"
#include "atsp/oracle.hpp"
#include "atsp/report.hpp"
#include "json.hpp"

namespace {

using namespace atsp;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNonOptimal = 3;
constexpr int kExitIo = 4;
constexpr int kExitFormat = 5;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << contents;
  if (!out) throw IoError("failed writing " + path);
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Either --in FILE or generation flags mirroring GenSpec.
struct InstanceArgs {
  std::string in;
  int n = 0;
  std::uint64_t seed = 42;
  std::string range = "1:10";
  std::string mode = "uniform";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--in", in, "Instance file (TSPLIB FULL_MATRIX, or .csv)");
    cmd->add_option("--n", n, "Generate an instance with this many nodes");
    cmd->add_option("--seed", seed, "Generator seed");
    cmd->add_option("--range", range, "Inclusive cost range lo:hi");
    cmd->add_option("--mode", mode, "uniform | euclidean");
  }

  GeneratedInstance load() const {
    if (!in.empty()) {
      const auto text = read_file(in);
      const bool csv = std::filesystem::path(in).extension() == ".csv";
      return {csv ? parse_csv(text) : parse_tsplib(text), std::nullopt};
    }
    if (n == 0) throw std::invalid_argument("either --in or --n is required");
    return generate({n, seed, parse_range(range), parse_gen_mode(mode)});
  }
};

std::int64_t default_time_limit() {
  if (const char* env = std::getenv("GTA_TIME_LIMIT_MS")) {
    try {
      return std::stoll(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("GTA_TIME_LIMIT_MS must be an integer");
    }
  }
  return 0;
}

TabuParams tabu_params(int n, int tenure, int max_stall, std::int64_t time_limit, bool no_reversal) {
  TabuParams p = TabuParams::defaults_for(n);
  if (tenure > 0) p.tenure = tenure;
  if (max_stall > 0) p.max_stall = max_stall;
  p.time_limit_ms = time_limit;
  p.enable_reversal = !no_reversal;
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact asymmetric TSP solver with tabu warm start"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a seeded random instance");
  int gen_n = 0;
  std::uint64_t gen_seed = 42;
  std::string gen_range = "1:10", gen_mode = "uniform", gen_format = "tsplib", gen_out;
  std::string gen_layout_out;
  gen->add_option("--n", gen_n, "Node count")->required();
  gen->add_option("--seed", gen_seed, "Seed");
  gen->add_option("--range", gen_range, "Inclusive cost range lo:hi");
  gen->add_option("--mode", gen_mode, "uniform | euclidean");
  gen->add_option("--format", gen_format, "tsplib | csv")->check(CLI::IsMember({"tsplib", "csv"}));
  gen->add_option("--out", gen_out, "Output path")->required();
  gen->add_option("--layout-out", gen_layout_out, "Write node coordinates as JSON (euclidean mode)");

  // solve
  auto* solve = app.add_subcommand("solve", "Warm start then prove optimality");
  InstanceArgs solve_inst;
  solve_inst.add_to(solve);
  std::string warm_flag = "on", report_out, tour_out;
  std::int64_t solve_time_limit = -1, node_limit = 0;
  bool quiet = false;
  solve->add_option("--warmstart", warm_flag, "on | off")->check(CLI::IsMember({"on", "off"}));
  solve->add_option("--time-limit", solve_time_limit, "Branch-and-bound limit in ms (0 = none)");
  solve->add_option("--node-limit", node_limit, "Branch-and-bound node limit (0 = none)");
  solve->add_option("--report", report_out, "Write the solve report as JSON");
  solve->add_option("--tour-out", tour_out, "Write the tour as JSON");
  solve->add_flag("--quiet", quiet, "Suppress progress lines");

  // warmstart
  auto* warm = app.add_subcommand("warmstart", "Nearest neighbor + tabu search only");
  InstanceArgs warm_inst;
  warm_inst.add_to(warm);
  int tenure = 0, max_stall = 0;
  std::int64_t tabu_time = 0;
  bool no_reversal = false;
  std::string warm_out;
  warm->add_option("--tenure", tenure, "Tabu tenure (default max(10, n/10))");
  warm->add_option("--max-stall", max_stall, "Stall iterations (default max(100, 20n))");
  warm->add_option("--time-limit", tabu_time, "Tabu wall-clock cap in ms (0 = none)");
  warm->add_flag("--no-reversal", no_reversal, "Disable the segment-reversal move");
  warm->add_option("--out", warm_out, "Write the tour as JSON");

  // export-model
  auto* exp = app.add_subcommand("export-model", "Write an MTZ or DFJ model in LP format");
  InstanceArgs exp_inst;
  exp_inst.add_to(exp);
  std::string formulation = "dfj", exp_out, cuts_path;
  bool count_only = false;
  exp->add_option("--formulation", formulation, "mtz | dfj");
  exp->add_option("--cuts", cuts_path, "JSON array of node subsets (DFJ)");
  exp->add_flag("--count-only", count_only, "Print closed-form model sizes only");
  exp->add_option("--out", exp_out, "Output LP path");

  // cutloop
  auto* loop = app.add_subcommand("cutloop", "Drive DFJ cut rounds with an external MIP solver");
  InstanceArgs loop_inst;
  loop_inst.add_to(loop);
  std::string state_path, solution_path, model_path;
  loop->add_option("--state", state_path, "Cut loop state JSON (created if absent)")->required();
  loop->add_option("--solution", solution_path, "Solver solution file for the current model");
  loop->add_option("--model", model_path, "Where to write the next LP model")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "Run a benchmark suite and write CSV");
  std::string suite_path, bench_out;
  bool bench_parallel = false;
  bench->add_option("--suite", suite_path, "Suite JSON")->required();
  bench->add_option("--out", bench_out, "CSV output path")->required();
  bench->add_flag("--parallel", bench_parallel, "Run cells concurrently");

  // plot
  auto* plot = app.add_subcommand("plot", "Render SVG figures");
  plot->require_subcommand(1);
  auto* plot_route = plot->add_subcommand("route", "Route map of a tour");
  InstanceArgs route_inst;
  route_inst.add_to(plot_route);
  std::string route_tour, route_out, route_title;
  plot_route->add_option("--tour", route_tour, "Tour JSON (default: solve the instance)");
  plot_route->add_option("--out", route_out, "SVG path")->required();
  plot_route->add_option("--title", route_title, "Title");
  auto* plot_scaling = plot->add_subcommand("scaling", "Runtime scaling plot from bench CSV");
  std::string scaling_csv, scaling_out, axes = "loglog", scaling_title, scaling_alg;
  plot_scaling->add_option("--csv", scaling_csv, "Bench CSV")->required();
  plot_scaling->add_option("--out", scaling_out, "SVG path")->required();
  plot_scaling->add_option("--axes", axes, "loglog | loglin | linlin");
  plot_scaling->add_option("--title", scaling_title, "Title");
  plot_scaling->add_option("--algorithm", scaling_alg, "Only plot this algorithm");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Brute force / Held-Karp reference solves");
  InstanceArgs oracle_inst;
  oracle_inst.add_to(oracle);
  std::string method = "compare";
  oracle->add_option("method", method, "brute | held-karp | compare")
      ->check(CLI::IsMember({"brute", "held-karp", "compare"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) {
      auto inst = generate({gen_n, gen_seed, parse_range(gen_range), parse_gen_mode(gen_mode)});
      write_file(gen_out, gen_format == "csv" ? write_csv(inst.matrix)
                                              : write_tsplib(inst.matrix, "gta_n" + std::to_string(gen_n)));
      if (!gen_layout_out.empty()) {
        const auto layout = inst.layout ? *inst.layout : circular_layout(gen_n);
        nlohmann::json j = nlohmann::json::array();
        for (const auto& c : layout.coords) j.push_back({c.x(), c.y()});
        write_file(gen_layout_out, j.dump() + "\n");
      }
      std::cout << gen_out << ' ' << hex64(digest(inst.matrix)) << '\n';
      return kExitOk;
    }

    if (*solve) {
      const auto inst = solve_inst.load();
      const auto& m = inst.matrix;
      SolveOptions options;
      options.limits.time_limit_ms = solve_time_limit >= 0 ? solve_time_limit : default_time_limit();
      options.limits.node_limit = node_limit;
      if (!quiet) {
        options.on_progress = [](const SolveProgress& p) {
          std::cerr << "[" << p.elapsed_ms << " ms] nodes=" << p.nodes
                    << " incumbent=" << p.incumbent << " bound=" << p.bound << '\n';
        };
      }
      std::optional<Tour> warm_tour;
      if (warm_flag == "on") {
        auto w = warm_start(m, TabuParams::defaults_for(m.size()));
        if (!quiet) {
          std::cerr << "warm start cost=" << w.tour.cost << " iterations=" << w.iterations << '\n';
        }
        warm_tour = std::move(w.tour);
      }
      const auto report = solve_exact(m, warm_tour, options);
      if (!report_out.empty()) write_file(report_out, report_to_json(report));
      if (!tour_out.empty()) write_file(tour_out, tour_to_json(report.tour) + "\n");
      std::cout << "cost " << report.optimal_cost << "\n"
                << "lower_bound " << report.lower_bound_at_end << "\n"
                << "gap_percent " << report.gap_percent << "\n"
                << "optimal " << (report.optimal ? "true" : "false") << "\n"
                << "nodes " << report.bnb_nodes_explored << "\n"
                << "warm_start_cost " << report.warm_start_cost << "\n"
                << "wall_time_ms " << report.wall_time_ms << "\n"
                << "tour " << tour_to_line(report.tour);
      return report.optimal ? kExitOk : kExitNonOptimal;
    }

    if (*warm) {
      const auto inst = warm_inst.load();
      const auto result = warm_start(
          inst.matrix, tabu_params(inst.matrix.size(), tenure, max_stall, tabu_time, no_reversal));
      if (!warm_out.empty()) write_file(warm_out, tour_to_json(result.tour) + "\n");
      std::cout << "cost " << result.tour.cost << "\n"
                << "iterations " << result.iterations << "\n"
                << "tour " << tour_to_line(result.tour);
      return kExitOk;
    }

    if (*exp) {
      const auto f = parse_formulation(formulation);
      std::vector<NodeSubset> cuts;
      if (!cuts_path.empty()) {
        try {
          cuts = nlohmann::json::parse(read_file(cuts_path)).get<std::vector<NodeSubset>>();
        } catch (const nlohmann::json::exception& e) {
          throw FormatError(std::string("invalid cuts file: ") + e.what());
        }
      }
      if (count_only) {
        const int n = exp_inst.n > 0 ? exp_inst.n : exp_inst.load().matrix.size();
        const auto c = count_model(n, f, static_cast<std::int64_t>(cuts.size()));
        std::cout << "binaries " << c.binaries << "\n"
                  << "continuous " << c.continuous << "\n"
                  << "constraints " << c.constraints << "\n";
        return kExitOk;
      }
      if (exp_out.empty()) throw std::invalid_argument("--out is required unless --count-only");
      const auto inst = exp_inst.load();
      write_file(exp_out, emit_lp(inst.matrix, f, cuts));
      std::cout << exp_out << '\n';
      return kExitOk;
    }

    if (*loop) {
      const auto inst = loop_inst.load();
      const int n = inst.matrix.size();
      CutLoopState state;
      state.n = n;
      if (std::filesystem::exists(state_path)) {
        state = cut_loop_state_from_json(read_file(state_path));
        if (state.n != n) throw FormatError("state was created for a different instance size");
      }
      if (!solution_path.empty()) {
        state = cut_loop_step(state, parse_solution(read_file(solution_path), n));
      }
      write_file(state_path, cut_loop_state_to_json(state));
      if (state.status == CutLoopStatus::kTourFound) {
        const auto t = make_tour(inst.matrix, tour_order_from_arcs(state.last_solution, n));
        std::cout << "status tour_found\nround " << state.round << "\ncost " << t.cost
                  << "\ntour " << tour_to_line(t);
        return kExitOk;
      }
      write_file(model_path, emit_lp(inst.matrix, Formulation::kDfj, state.cuts));
      std::cout << "status " << to_string(state.status) << "\nround " << state.round << "\ncuts "
                << state.cuts.size() << "\nnext solve " << model_path
                << " and rerun with --solution <file>\n";
      return kExitOk;
    }

    if (*bench) {
      auto spec = parse_suite_spec(read_file(suite_path));
      if (bench_parallel) spec.parallel = true;
      const auto result = run_suite(spec);
      write_file(bench_out, write_bench_csv(result.records));
      for (const auto& s : result.skipped) {
        std::cerr << "skipped " << to_string(s.algorithm) << " n=" << s.n << ": " << s.reason << '\n';
      }
      std::cout << bench_out << ' ' << result.records.size() << " records\n";
      return result.skipped.empty() ? kExitOk : kExitNonOptimal;
    }

    if (*plot_route) {
      const auto inst = route_inst.load();
      const auto& m = inst.matrix;
      Tour t;
      if (!route_tour.empty()) {
        t = tour_from_json(read_file(route_tour), m);
      } else {
        auto w = warm_start(m, TabuParams::defaults_for(m.size()));
        t = solve_exact(m, w.tour).tour;
      }
      const auto layout = inst.layout ? *inst.layout : circular_layout(m.size());
      write_file(route_out, render_route(layout, t, {600, 600, route_title}));
      std::cout << route_out << '\n';
      return kExitOk;
    }

    if (*plot_scaling) {
      auto records = parse_bench_csv(read_file(scaling_csv));
      if (!scaling_alg.empty()) {
        const auto a = parse_algorithm(scaling_alg);
        std::erase_if(records, [a](const BenchRecord& r) { return r.algorithm != a; });
      }
      ScalingOptions opts;
      opts.title = scaling_title;
      write_file(scaling_out, render_scaling(records, parse_axes(axes), opts));
      std::cout << scaling_out << '\n';
      return kExitOk;
    }

    if (*oracle) {
      const auto inst = oracle_inst.load();
      const auto& m = inst.matrix;
      if (method == "brute") {
        const auto t = brute_force(m);
        std::cout << "brute_force " << t.cost << "\ntour " << tour_to_line(t);
        return kExitOk;
      }
      if (method == "held-karp") {
        const auto t = held_karp(m);
        std::cout << "held_karp " << t.cost << "\ntour " << tour_to_line(t);
        return kExitOk;
      }
      const auto bf = brute_force(m);
      const auto hk = held_karp(m);
      std::cout << "brute_force " << bf.cost << "\nheld_karp " << hk.cost << "\n"
                << (bf.cost == hk.cost ? "agree" : "DISAGREE") << '\n';
      return bf.cost == hk.cost ? kExitOk : kExitNonOptimal;
    }
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
