#pragma once

// Shortest-augmenting-path assignment solver shared by hungarian() and the
// branch-and-bound engine, which re-augments a single row per child node.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "atsp/instance.hpp"

namespace atsp::detail {

/// Cost used for self-arcs, excluded arcs and arcs blocked by a forced arc.
inline constexpr Cost kForbidden = Cost{1} << 50;

/// Throws std::invalid_argument when real costs are large enough to be
/// confused with kForbidden inside the dual updates.
void check_cost_magnitude(const CostMatrix& m);

class ArcConstraints {
 public:
  explicit ArcConstraints(int n);

  void exclude(Arc a) { excluded_[index(a)] = 1; }
  void unexclude(Arc a) { excluded_[index(a)] = 0; }
  void force(Arc a) {
    forced_succ_[a.from] = a.to;
    forced_pred_[a.to] = a.from;
  }
  void unforce(Arc a) {
    forced_succ_[a.from] = -1;
    forced_pred_[a.to] = -1;
  }
  void apply(std::span<const Arc> excluded, std::span<const Arc> included);
  void clear(std::span<const Arc> excluded, std::span<const Arc> included);

  bool permitted(Node i, Node j) const {
    if (i == j || excluded_[index({i, j})]) return false;
    if (forced_succ_[i] >= 0 && forced_succ_[i] != j) return false;
    return forced_pred_[j] < 0 || forced_pred_[j] == i;
  }
  Cost cost(const CostMatrix& m, Node i, Node j) const {
    return permitted(i, j) ? m(i, j) : kForbidden;
  }

 private:
  std::size_t index(Arc a) const {
    return static_cast<std::size_t>(a.from) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(a.to);
  }

  int n_;
  std::vector<std::uint8_t> excluded_;
  std::vector<Node> forced_succ_;
  std::vector<Node> forced_pred_;
};

/// Primal assignment plus potentials. col_to_row and v carry one extra slot
/// used as the virtual root column during augmentation.
struct ApState {
  std::vector<Node> row_to_col;
  std::vector<Node> col_to_row;
  std::vector<Cost> u;
  std::vector<Cost> v;
  Cost cost = 0;
};

class AssignmentSolver {
 public:
  explicit AssignmentSolver(int n);

  /// Solves from empty potentials. nullopt when infeasible.
  std::optional<ApState> solve(const CostMatrix& m, const ArcConstraints& c);

  /// Re-matches `row`, which must be the only unassigned row, keeping the
  /// state optimal for `c`. Requires `state` dual feasible under `c`.
  bool augment(const CostMatrix& m, const ArcConstraints& c, ApState& state, Node row);

 private:
  int n_;
  std::vector<Cost> minv_;
  std::vector<Node> way_;
  std::vector<std::uint8_t> used_;
};

}  // namespace atsp::detail
