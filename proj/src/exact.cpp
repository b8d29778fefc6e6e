#include "atsp/exact.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <memory>
#include <stdexcept>

#include "assignment_internal.hpp"
#include "json.hpp"

namespace atsp {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ms(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

// Merges the cycles of a successor map into a single tour, each time joining
// the largest cycle with whichever other cycle admits the cheapest two-arc
// exchange.
Tour patch_cycles(const CostMatrix& m, std::vector<Node> succ,
                  const std::vector<std::vector<Node>>& cyc) {
  const int n = m.size();
  std::vector<int> label(n);
  std::vector<int> sizes(cyc.size());
  for (std::size_t c = 0; c < cyc.size(); ++c) {
    sizes[c] = static_cast<int>(cyc[c].size());
    for (Node v : cyc[c]) label[v] = static_cast<int>(c);
  }
  std::size_t remaining = cyc.size();
  while (remaining > 1) {
    const int big = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    Cost best = 0;
    Node bi = -1, bj = -1;
    for (Node i = 0; i < n; ++i) {
      if (label[i] != big) continue;
      const Node si = succ[i];
      const Cost base_i = m(i, si);
      for (Node j = 0; j < n; ++j) {
        if (label[j] == big) continue;
        const Node sj = succ[j];
        const Cost d = m(i, sj) + m(j, si) - base_i - m(j, sj);
        if (bi < 0 || d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    const int absorbed = label[bj];
    for (Node v = 0; v < n; ++v) {
      if (label[v] == absorbed) label[v] = big;
    }
    sizes[big] += sizes[absorbed];
    sizes[absorbed] = 0;
    std::swap(succ[bi], succ[bj]);
    --remaining;
  }
  std::vector<Node> order;
  order.reserve(n);
  Node v = 0;
  do {
    order.push_back(v);
    v = succ[v];
  } while (v != 0);
  return make_tour(m, std::move(order));
}

Tour tour_from_successor(const CostMatrix& m, const std::vector<Node>& succ) {
  std::vector<Node> order;
  order.reserve(succ.size());
  Node v = 0;
  do {
    order.push_back(v);
    v = succ[v];
  } while (v != 0);
  return make_tour(m, std::move(order));
}

struct QueuedNode {
  BnbNode node;
  detail::ApState ap;
  std::int64_t seq = 0;
};

// Min-heap on (bound, creation order).
struct HeapOrder {
  bool operator()(const std::unique_ptr<QueuedNode>& a,
                  const std::unique_ptr<QueuedNode>& b) const {
    if (a->node.lower_bound != b->node.lower_bound) {
      return a->node.lower_bound > b->node.lower_bound;
    }
    return a->seq > b->seq;
  }
};

const std::vector<Node>& shortest_cycle(const std::vector<std::vector<Node>>& cyc) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < cyc.size(); ++c) {
    if (cyc[c].size() < cyc[best].size()) best = c;
  }
  return cyc[best];
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

nlohmann::ordered_json deterministic_fields(const SolveReport& r) {
  nlohmann::ordered_json j;
  j["tour"] = {{"order", r.tour.order}, {"cost", r.tour.cost}};
  j["optimal_cost"] = r.optimal_cost;
  j["lower_bound_at_end"] = r.lower_bound_at_end;
  j["gap_percent"] = r.gap_percent;
  j["optimal"] = r.optimal;
  j["bnb_nodes_explored"] = r.bnb_nodes_explored;
  j["ap_resolves"] = r.ap_resolves;
  j["warm_start_cost"] = r.warm_start_cost;
  j["root_bound"] = r.root_bound;
  return j;
}

}  // namespace

std::vector<std::vector<Node>> cycles(std::span<const Node> successor) {
  const int n = static_cast<int>(successor.size());
  std::vector<char> seen(n, 0);
  for (Node s : successor) {
    if (s < 0 || s >= n || seen[s]) {
      throw std::invalid_argument("successor map is not a permutation");
    }
    seen[s] = 1;
  }
  std::fill(seen.begin(), seen.end(), 0);
  std::vector<std::vector<Node>> out;
  for (Node start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<Node> cycle;
    Node v = start;
    do {
      seen[v] = 1;
      cycle.push_back(v);
      v = successor[v];
    } while (v != start);
    out.push_back(std::move(cycle));
  }
  return out;
}

std::vector<BnbNode> branch(const BnbNode& node, std::span<const Node> subtour) {
  const int k = static_cast<int>(subtour.size());
  std::vector<BnbNode> children;
  std::vector<Arc> forced;
  for (int t = 0; t < k; ++t) {
    const Arc a{subtour[t], subtour[(t + 1) % k]};
    const bool already_forced =
        std::find(node.included.begin(), node.included.end(), a) != node.included.end();
    // Excluding a forced arc yields an empty child.
    if (!already_forced) {
      BnbNode child;
      child.excluded = node.excluded;
      child.excluded.push_back(a);
      child.included = node.included;
      for (const Arc& f : forced) child.included.push_back(f);
      child.lower_bound = node.lower_bound;
      child.depth = node.depth + 1;
      children.push_back(std::move(child));
    }
    if (!already_forced) forced.push_back(a);
  }
  return children;
}

double gap_percent(Cost ub, Cost lb) {
  if (ub == 0) throw std::invalid_argument("gap undefined for zero upper bound");
  return 100.0 * static_cast<double>(ub - lb) / static_cast<double>(ub);
}

double heuristic_gap_percent(Cost heuristic, Cost optimal) {
  if (optimal == 0) throw std::invalid_argument("gap undefined for zero optimum");
  return 100.0 * static_cast<double>(heuristic - optimal) / static_cast<double>(optimal);
}

SolveReport solve_exact(const CostMatrix& m, const std::optional<Tour>& warm,
                        const SolveOptions& options) {
  const auto start = Clock::now();
  const int n = m.size();
  detail::check_cost_magnitude(m);

  SolveReport report;
  Tour incumbent;
  if (warm) {
    if (!is_permutation_of_nodes(warm->order, n) || tour_cost(m, warm->order) != warm->cost) {
      throw std::invalid_argument("warm start is not a valid tour of this instance");
    }
    incumbent = *warm;
  } else {
    incumbent = nearest_neighbor(m, 0);
  }
  report.warm_start_cost = incumbent.cost;

  const auto& limits = options.limits;
  auto limit_hit = [&](std::int64_t explored) {
    if (limits.node_limit > 0 && explored >= limits.node_limit) return true;
    return limits.time_limit_ms > 0 && elapsed_ms(start) >= limits.time_limit_ms;
  };
  Cost reported_bound = std::numeric_limits<Cost>::min();
  auto notify = [&](Cost bound) {
    if (!options.on_progress) return;
    options.on_progress({report.bnb_nodes_explored, incumbent.cost, bound, elapsed_ms(start)});
  };
  auto offer = [&](Tour t, Cost bound) {
    if (t.cost < incumbent.cost) {
      incumbent = std::move(t);
      notify(bound);
    }
  };

  detail::ArcConstraints constraints(n);
  detail::AssignmentSolver solver(n);

  auto root_ap = solver.solve(m, constraints);
  report.ap_resolves = 1;
  report.bnb_nodes_explored = 1;
  // Self-arcs are the only forbidden arcs at the root, so it is always feasible for n >= 2.
  report.root_bound = root_ap->cost;

  std::vector<std::unique_ptr<QueuedNode>> heap;
  std::int64_t seq = 0;
  {
    auto root = std::make_unique<QueuedNode>();
    root->node.lower_bound = root_ap->cost;
    root->ap = std::move(*root_ap);
    root->seq = seq++;
    if (root->node.lower_bound < incumbent.cost) heap.push_back(std::move(root));
  }

  bool stopped_early = false;
  while (!heap.empty()) {
    if (heap.front()->node.lower_bound >= incumbent.cost) {
      heap.clear();
      break;
    }
    if (heap.front()->seq != 0 && limit_hit(report.bnb_nodes_explored)) {
      stopped_early = true;
      break;
    }
    std::pop_heap(heap.begin(), heap.end(), HeapOrder{});
    std::unique_ptr<QueuedNode> cur = std::move(heap.back());
    heap.pop_back();
    // The root counts as explored whether or not it survives to be popped.
    if (cur->seq != 0) ++report.bnb_nodes_explored;
    if (cur->node.lower_bound > reported_bound) {
      reported_bound = cur->node.lower_bound;
      notify(reported_bound);
    }

    const auto cyc = cycles(cur->ap.row_to_col);
    if (cyc.size() == 1) {
      offer(tour_from_successor(m, cur->ap.row_to_col), cur->node.lower_bound);
      continue;
    }
    offer(patch_cycles(m, cur->ap.row_to_col, cyc), cur->node.lower_bound);

    const auto& subtour = shortest_cycle(cyc);
    auto children = branch(cur->node, subtour);

    constraints.apply(cur->node.excluded, cur->node.included);
    for (auto& child : children) {
      const Arc cut = child.excluded.back();
      // Each child's constraints differ from the parent's by one excluded arc
      // plus forced arcs already present in the parent's assignment.
      for (std::size_t f = cur->node.included.size(); f < child.included.size(); ++f) {
        constraints.force(child.included[f]);
      }
      constraints.exclude(cut);

      detail::ApState ap = cur->ap;
      ap.row_to_col[cut.from] = -1;
      ap.col_to_row[cut.to] = -1;
      const bool feasible = solver.augment(m, constraints, ap, cut.from);
      ++report.ap_resolves;

      constraints.unexclude(cut);
      for (std::size_t f = cur->node.included.size(); f < child.included.size(); ++f) {
        constraints.unforce(child.included[f]);
      }

      if (!feasible || ap.cost >= incumbent.cost) continue;
      child.lower_bound = ap.cost;
      auto q = std::make_unique<QueuedNode>();
      q->node = std::move(child);
      q->ap = std::move(ap);
      q->seq = seq++;
      heap.push_back(std::move(q));
      std::push_heap(heap.begin(), heap.end(), HeapOrder{});
    }
    constraints.clear(cur->node.excluded, cur->node.included);
  }

  report.tour = incumbent;
  report.optimal_cost = incumbent.cost;
  if (stopped_early) {
    report.lower_bound_at_end = std::min(incumbent.cost, heap.front()->node.lower_bound);
  } else {
    report.lower_bound_at_end = incumbent.cost;
  }
  report.gap_percent = gap_percent(report.optimal_cost, report.lower_bound_at_end);
  report.optimal = report.lower_bound_at_end == report.optimal_cost;
  report.wall_time_ms = elapsed_ms(start);
  report.deterministic_fields_hash = deterministic_hash(report);
  return report;
}

std::uint64_t deterministic_hash(const SolveReport& r) {
  return fnv1a(deterministic_fields(r).dump());
}

std::string report_to_json(const SolveReport& r) {
  auto j = deterministic_fields(r);
  j["wall_time_ms"] = r.wall_time_ms;
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(r.deterministic_fields_hash));
  j["deterministic_fields_hash"] = hex;
  return j.dump(2) + "\n";
}

}  // namespace atsp
