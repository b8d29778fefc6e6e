#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "atsp/heuristic.hpp"
#include "atsp/instance.hpp"

namespace atsp {

/// Optimal assignment (successor map) together with its dual certificate.
struct ApSolution {
  std::vector<Node> successor;
  std::vector<Cost> row_potentials;
  std::vector<Cost> col_potentials;
  Cost bound = 0;
};

/// Solves the linear assignment relaxation with self-arcs and `excluded` arcs
/// forbidden and every `included` arc forced. Returns nullopt when no perfect
/// assignment satisfies the constraints.
std::optional<ApSolution> hungarian(const CostMatrix& m, std::span<const Arc> excluded = {},
                                    std::span<const Arc> included = {});

/// True when potentials are dual feasible on every permitted arc and their sum
/// equals the assignment cost.
bool verify_dual_certificate(const CostMatrix& m, const ApSolution& ap,
                             std::span<const Arc> excluded = {},
                             std::span<const Arc> included = {});

/// Orbit decomposition of a successor permutation. Each cycle starts at its
/// smallest node; cycles are ordered by that node. Throws on non-permutations.
std::vector<std::vector<Node>> cycles(std::span<const Node> successor);

struct BnbNode {
  std::vector<Arc> excluded;
  std::vector<Arc> included;
  Cost lower_bound = 0;
  int depth = 0;
};

/// Subtour branching: child t excludes the t-th arc of `subtour` and forces
/// the arcs before it.
std::vector<BnbNode> branch(const BnbNode& node, std::span<const Node> subtour);

struct ExactLimits {
  std::int64_t time_limit_ms = 0;  // 0 = unlimited
  std::int64_t node_limit = 0;     // 0 = unlimited
};

struct SolveProgress {
  std::int64_t nodes = 0;
  Cost incumbent = 0;
  Cost bound = 0;
  std::int64_t elapsed_ms = 0;
};

struct SolveReport {
  Tour tour;
  Cost optimal_cost = 0;  // cost of the returned tour
  Cost lower_bound_at_end = 0;
  double gap_percent = 0.0;
  bool optimal = false;
  std::int64_t bnb_nodes_explored = 0;
  std::int64_t ap_resolves = 0;
  Cost warm_start_cost = 0;
  Cost root_bound = 0;
  std::int64_t wall_time_ms = 0;
  std::uint64_t deterministic_fields_hash = 0;
};

struct SolveOptions {
  ExactLimits limits{};
  /// Called on every incumbent or global-bound improvement.
  std::function<void(const SolveProgress&)> on_progress;
};

/// Best-first branch and bound on the assignment relaxation. `warm` seeds the
/// incumbent; nearest_neighbor(m, 0) is used when it is absent.
SolveReport solve_exact(const CostMatrix& m, const std::optional<Tour>& warm,
                        const SolveOptions& options = {});

/// Solver convention 100 * (ub - lb) / ub. Throws when ub == 0.
double gap_percent(Cost ub, Cost lb);
/// Heuristic-quality convention 100 * (heuristic - optimal) / optimal.
double heuristic_gap_percent(Cost heuristic, Cost optimal);

/// Hash over every report field except wall_time_ms.
std::uint64_t deterministic_hash(const SolveReport& r);
std::string report_to_json(const SolveReport& r);

}  // namespace atsp
