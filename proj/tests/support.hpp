#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "atsp/instance.hpp"
#include "atsp/model_export.hpp"

// Small independent reference implementations. They share no code with the
// library so that agreement means something.

namespace testing_support {

using atsp::Cost;
using atsp::CostMatrix;
using atsp::Node;

inline CostMatrix chain_fixture() {
  return CostMatrix::from_rows({{0, 1, 5, 9}, {9, 0, 2, 8}, {6, 7, 0, 3}, {4, 8, 7, 0}});
}

inline CostMatrix two_cluster_fixture() {
  return CostMatrix::from_rows({{0, 1, 8, 8}, {1, 0, 8, 8}, {8, 8, 0, 1}, {8, 8, 1, 0}});
}

inline std::uint64_t ref_splitmix(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::vector<std::vector<Cost>> ref_uniform(int n, std::uint64_t seed, Cost lo, Cost hi) {
  std::vector<std::vector<Cost>> rows(n, std::vector<Cost>(n, 0));
  std::uint64_t s = seed;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) rows[i][j] = lo + static_cast<Cost>(ref_splitmix(s) % static_cast<std::uint64_t>(hi - lo + 1));
  return rows;
}

inline Cost ref_tour_cost(const CostMatrix& m, const std::vector<Node>& order) {
  Cost c = 0;
  for (std::size_t k = 0; k < order.size(); ++k) c += m(order[k], order[(k + 1) % order.size()]);
  return c;
}

// Depth-first enumeration of every Hamiltonian cycle through node 0.
inline Cost ref_optimum(const CostMatrix& m) {
  const int n = m.size();
  std::vector<char> used(n, 0);
  Cost best = std::numeric_limits<Cost>::max();
  std::function<void(Node, int, Cost)> dfs = [&](Node at, int depth, Cost acc) {
    if (acc >= best) return;
    if (depth == n) {
      best = std::min(best, acc + m(at, 0));
      return;
    }
    for (Node v = 1; v < n; ++v) {
      if (used[v]) continue;
      used[v] = 1;
      dfs(v, depth + 1, acc + m(at, v));
      used[v] = 0;
    }
  };
  used[0] = 1;
  dfs(0, 1, 0);
  return best;
}

// Minimum over all successor maps without fixed points, each required to
// keep every subset in `cuts` from closing on itself. Ties go to the first
// map in lexicographic order of successor vectors.
inline std::vector<atsp::Arc> ref_assignment(const CostMatrix& m,
                                             const std::vector<atsp::NodeSubset>& cuts = {}) {
  const int n = m.size();
  std::vector<Node> sigma(n);
  for (int i = 0; i < n; ++i) sigma[i] = i;
  std::vector<Node> best;
  Cost best_cost = std::numeric_limits<Cost>::max();
  do {
    bool ok = true;
    Cost c = 0;
    for (int i = 0; i < n && ok; ++i) {
      if (sigma[i] == i) ok = false;
      c += m(i, sigma[i]);
    }
    if (!ok || c >= best_cost) continue;
    for (const auto& s : cuts) {
      std::vector<char> in(n, 0);
      for (Node v : s) in[v] = 1;
      int inside = 0;
      for (Node v : s) inside += in[sigma[v]];
      if (inside > static_cast<int>(s.size()) - 1) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    best = sigma;
    best_cost = c;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  std::vector<atsp::Arc> arcs;
  for (int i = 0; i < n; ++i) arcs.push_back({i, best[i]});
  return arcs;
}

inline Cost ref_assignment_cost(const CostMatrix& m) {
  Cost c = 0;
  for (const auto& a : ref_assignment(m)) c += m(a.from, a.to);
  return c;
}

inline std::string solution_text(const std::vector<atsp::Arc>& arcs) {
  std::string s = "# stand-in solver\n";
  for (const auto& a : arcs) s += "x_" + std::to_string(a.from) + "_" + std::to_string(a.to) + " 1\n";
  return s;
}

}  // namespace testing_support
