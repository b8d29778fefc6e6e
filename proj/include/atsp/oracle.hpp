#pragma once

#include "atsp/heuristic.hpp"
#include "atsp/instance.hpp"

// Reference solvers used as ground truth in tests and as comparator rows in
// benchmarks.

namespace atsp {

inline constexpr int kBruteForceMaxNodes = 11;
inline constexpr int kHeldKarpMaxNodes = 20;

/// Enumerates every tour starting at node 0; returns the lexicographically
/// smallest optimal one. Throws std::invalid_argument for n > 11.
Tour brute_force(const CostMatrix& m);

/// Subset dynamic program over (visited set, last node). Throws
/// std::invalid_argument for n > 20.
Tour held_karp(const CostMatrix& m);

/// Adds arcs in ascending (cost, from, to) order while keeping every node at
/// out/in-degree <= 1 and no premature cycle.
Tour greedy_edge(const CostMatrix& m);

/// First-improvement segment reversals until none improves.
Tour two_opt_descent(const CostMatrix& m, const Tour& t);

}  // namespace atsp
