#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "atsp/instance.hpp"

namespace atsp {

/// Cyclic node order with its total cost (closing arc included).
struct Tour {
  std::vector<Node> order;
  Cost cost = 0;

  int size() const { return static_cast<int>(order.size()); }
  friend bool operator==(const Tour&, const Tour&) = default;
};

struct TabuParams {
  int tenure = 10;
  int max_stall = 100;
  std::int64_t time_limit_ms = 0;  // 0 = unlimited
  bool enable_reversal = true;
  std::uint64_t seed = 0;

  /// tenure = max(10, n/10), max_stall = max(100, 20n).
  static TabuParams defaults_for(int n);
};

struct TabuResult {
  Tour tour;
  std::int64_t iterations = 0;
};

/// Throws std::invalid_argument when `order` is not a permutation of 0..n-1.
Cost tour_cost(const CostMatrix& m, std::span<const Node> order);
Tour make_tour(const CostMatrix& m, std::vector<Node> order);
bool is_permutation_of_nodes(std::span<const Node> order, int n);

Tour nearest_neighbor(const CostMatrix& m, Node start = 0);

// Move operators. Indices are positions in `t.order`. Each returns a tour with
// its cost updated by an O(1) (or prefix-sum) delta; a degenerate move returns
// the input unchanged.

/// Relocates positions [seg_start, seg_start + seg_len) to just after position
/// `insert_after` without reversing it. The segment must not wrap.
Tour or_opt_move(const CostMatrix& m, const Tour& t, int seg_start, int seg_len,
                 int insert_after);
Tour swap_move(const CostMatrix& m, const Tour& t, int i, int j);
/// Reverses positions [i, j], i <= j.
Tour reverse_segment(const CostMatrix& m, const Tour& t, int i, int j);

/// Best-improvement tabu search over swap, or-opt(1..3) and (optionally)
/// segment reversal. Never returns a tour worse than `initial`.
TabuResult tabu_search(const CostMatrix& m, const Tour& initial, const TabuParams& p);

/// nearest_neighbor(m, 0) followed by tabu_search.
TabuResult warm_start(const CostMatrix& m, const TabuParams& p);

std::string tour_to_json(const Tour& t);
Tour tour_from_json(std::string_view text, const CostMatrix& m);
std::string tour_to_line(const Tour& t);
Tour tour_from_line(std::string_view text, const CostMatrix& m);

}  // namespace atsp
