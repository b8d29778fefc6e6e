#include "atsp/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>

namespace atsp {

Tour brute_force(const CostMatrix& m) {
  const int n = m.size();
  if (n > kBruteForceMaxNodes) {
    throw std::invalid_argument("brute force is capped at " +
                                std::to_string(kBruteForceMaxNodes) + " nodes");
  }
  std::vector<Node> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Node> best = order;
  Cost best_cost = std::numeric_limits<Cost>::max();
  do {
    Cost c = m(order[n - 1], order[0]);
    for (int k = 0; k + 1 < n && c < best_cost; ++k) c += m(order[k], order[k + 1]);
    if (c < best_cost) {
      best_cost = c;
      best = order;
    }
  } while (std::next_permutation(order.begin() + 1, order.end()));
  return Tour{std::move(best), best_cost};
}

Tour held_karp(const CostMatrix& m) {
  const int n = m.size();
  if (n > kHeldKarpMaxNodes) {
    throw std::invalid_argument("Held-Karp is capped at " +
                                std::to_string(kHeldKarpMaxNodes) + " nodes");
  }
  // Node 0 is the fixed start; subsets range over nodes 1..n-1 (bit k-1 = node k).
  const int k = n - 1;
  const std::size_t subsets = std::size_t{1} << k;
  constexpr Cost kInf = std::numeric_limits<Cost>::max() / 4;
  std::vector<Cost> dp(subsets * k, kInf);
  std::vector<std::int8_t> parent(subsets * k, -1);
  auto at = [k](std::size_t mask, int last) { return mask * k + last; };

  for (int v = 0; v < k; ++v) dp[at(std::size_t{1} << v, v)] = m(0, v + 1);
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    for (int last = 0; last < k; ++last) {
      if (!(mask >> last & 1U)) continue;
      const Cost base = dp[at(mask, last)];
      if (base >= kInf) continue;
      for (int next = 0; next < k; ++next) {
        if (mask >> next & 1U) continue;
        const std::size_t nm = mask | (std::size_t{1} << next);
        const Cost c = base + m(last + 1, next + 1);
        if (c < dp[at(nm, next)]) {
          dp[at(nm, next)] = c;
          parent[at(nm, next)] = static_cast<std::int8_t>(last);
        }
      }
    }
  }
  const std::size_t full = subsets - 1;
  Cost best = kInf;
  int last = 0;
  for (int v = 0; v < k; ++v) {
    const Cost c = dp[at(full, v)] + m(v + 1, 0);
    if (c < best) {
      best = c;
      last = v;
    }
  }
  std::vector<Node> reversed;
  std::size_t mask = full;
  while (last >= 0) {
    reversed.push_back(last + 1);
    const int prev = parent[at(mask, last)];
    mask &= ~(std::size_t{1} << last);
    last = prev;
  }
  std::vector<Node> order{0};
  order.insert(order.end(), reversed.rbegin(), reversed.rend());
  return Tour{std::move(order), best};
}

Tour greedy_edge(const CostMatrix& m) {
  const int n = m.size();
  std::vector<std::tuple<Cost, Node, Node>> arcs;
  arcs.reserve(static_cast<std::size_t>(n) * (n - 1));
  for (Node i = 0; i < n; ++i)
    for (Node j = 0; j < n; ++j)
      if (i != j) arcs.emplace_back(m(i, j), i, j);
  std::sort(arcs.begin(), arcs.end());

  std::vector<Node> succ(n, -1), pred(n, -1);
  // Path fragments: head_of[tail] / tail_of[head] for fragment endpoints.
  std::vector<Node> head_of(n), tail_of(n);
  std::iota(head_of.begin(), head_of.end(), 0);
  std::iota(tail_of.begin(), tail_of.end(), 0);
  int added = 0;
  for (const auto& [c, i, j] : arcs) {
    if (added == n - 1) break;
    if (succ[i] >= 0 || pred[j] >= 0) continue;
    // i is a fragment tail and j a fragment head; joining them must not close a cycle.
    if (head_of[i] == j) continue;
    succ[i] = j;
    pred[j] = i;
    const Node h = head_of[i];
    const Node t = tail_of[j];
    head_of[t] = h;
    tail_of[h] = t;
    ++added;
  }
  Node tail = 0;
  while (succ[tail] >= 0) tail = succ[tail];
  succ[tail] = head_of[tail];

  std::vector<Node> order;
  order.reserve(n);
  Node v = 0;
  do {
    order.push_back(v);
    v = succ[v];
  } while (v != 0);
  return make_tour(m, std::move(order));
}

Tour two_opt_descent(const CostMatrix& m, const Tour& t) {
  const int n = t.size();
  Tour cur = make_tour(m, t.order);
  if (n <= 2) return cur;
  std::vector<Cost> fwd(n + 1), bwd(n);
  auto rebuild = [&] {
    const auto& o = cur.order;
    fwd[0] = bwd[0] = 0;
    for (int k = 0; k < n; ++k) fwd[k + 1] = fwd[k] + m(o[k], o[(k + 1) % n]);
    for (int k = 0; k + 1 < n; ++k) bwd[k + 1] = bwd[k] + m(o[k + 1], o[k]);
  };
  // Reversing positions [i, j] replaces the two boundary arcs and flips the
  // direction of every arc inside the segment.
  auto delta = [&](int i, int j) -> Cost {
    const auto& o = cur.order;
    if (j - i + 1 == n) return bwd[n - 1] + m(o[0], o[n - 1]) - cur.cost;
    const Node prev = o[(i - 1 + n) % n];
    const Node next = o[(j + 1) % n];
    return m(prev, o[j]) + m(o[i], next) - m(prev, o[i]) - m(o[j], next) +
           (bwd[j] - bwd[i]) - (fwd[j] - fwd[i]);
  };
  bool improved = true;
  while (improved) {
    improved = false;
    rebuild();
    for (int i = 0; i < n && !improved; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Cost d = delta(i, j);
        if (d < 0) {
          std::reverse(cur.order.begin() + i, cur.order.begin() + j + 1);
          cur.cost += d;
          improved = true;
          break;
        }
      }
    }
  }
  return cur;
}

}  // namespace atsp
