#include <numeric>
#include <stdexcept>

#include "assignment_internal.hpp"
#include "atsp/exact.hpp"

namespace atsp {

namespace detail {

namespace {
constexpr Cost kUnreached = std::numeric_limits<Cost>::max() / 4;
}

void check_cost_magnitude(const CostMatrix& m) {
  const int n = m.size();
  Cost lo = 0, hi = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      lo = std::min(lo, m(i, j));
      hi = std::max(hi, m(i, j));
    }
  }
  const Cost limit = kForbidden / 8 / n;
  if (hi >= limit || lo <= -limit) {
    throw std::invalid_argument("arc costs too large for the assignment solver");
  }
}

ArcConstraints::ArcConstraints(int n)
    : n_(n),
      excluded_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0),
      forced_succ_(n, -1),
      forced_pred_(n, -1) {}

void ArcConstraints::apply(std::span<const Arc> excluded, std::span<const Arc> included) {
  for (const Arc& a : excluded) exclude(a);
  for (const Arc& a : included) force(a);
}

void ArcConstraints::clear(std::span<const Arc> excluded, std::span<const Arc> included) {
  for (const Arc& a : excluded) unexclude(a);
  for (const Arc& a : included) unforce(a);
}

AssignmentSolver::AssignmentSolver(int n)
    : n_(n), minv_(n), way_(n + 1), used_(n + 1) {}

bool AssignmentSolver::augment(const CostMatrix& m, const ArcConstraints& c,
                               ApState& s, Node row) {
  const int n = n_;
  std::fill(minv_.begin(), minv_.end(), kUnreached);
  std::fill(used_.begin(), used_.end(), 0);
  s.col_to_row[n] = row;
  s.v[n] = 0;
  int j0 = n;
  do {
    used_[j0] = 1;
    const Node i0 = s.col_to_row[j0];
    Cost delta = kUnreached;
    int j1 = -1;
    const Cost ui = s.u[i0];
    for (int j = 0; j < n; ++j) {
      if (used_[j]) continue;
      const Cost cur = c.cost(m, i0, j) - ui - s.v[j];
      if (cur < minv_[j]) {
        minv_[j] = cur;
        way_[j] = j0;
      }
      if (minv_[j] < delta) {
        delta = minv_[j];
        j1 = j;
      }
    }
    // Only forbidden arcs leave the labelled set: no augmenting path exists.
    if (j1 < 0 || delta >= kForbidden / 2) return false;
    for (int j = 0; j <= n; ++j) {
      if (used_[j]) {
        s.u[s.col_to_row[j]] += delta;
        s.v[j] -= delta;
      } else {
        minv_[j] -= delta;
      }
    }
    j0 = j1;
  } while (s.col_to_row[j0] != -1);
  do {
    const int j1 = way_[j0];
    s.col_to_row[j0] = s.col_to_row[j1];
    j0 = j1;
  } while (j0 != n);
  s.v[n] = 0;
  s.col_to_row[n] = -1;

  s.cost = 0;
  for (int j = 0; j < n; ++j) {
    if (s.col_to_row[j] >= 0) {
      s.row_to_col[s.col_to_row[j]] = j;
      s.cost += m(s.col_to_row[j], j);
    }
  }
  return true;
}

std::optional<ApState> AssignmentSolver::solve(const CostMatrix& m, const ArcConstraints& c) {
  const int n = n_;
  ApState s;
  s.row_to_col.assign(n, -1);
  s.col_to_row.assign(n + 1, -1);
  s.u.assign(n, 0);
  s.v.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    if (!augment(m, c, s, i)) return std::nullopt;
  }
  return s;
}

}  // namespace detail

std::optional<ApSolution> hungarian(const CostMatrix& m, std::span<const Arc> excluded,
                                    std::span<const Arc> included) {
  const int n = m.size();
  detail::check_cost_magnitude(m);
  detail::ArcConstraints c(n);
  for (const Arc& a : included) {
    if (a.from == a.to || a.from < 0 || a.to < 0 || a.from >= n || a.to >= n) {
      throw std::invalid_argument("forced arc out of range");
    }
  }
  c.apply(excluded, included);
  // Two forced arcs sharing an endpoint, or a forced arc that is also excluded.
  for (const Arc& a : included) {
    if (!c.permitted(a.from, a.to)) return std::nullopt;
  }
  detail::AssignmentSolver solver(n);
  auto state = solver.solve(m, c);
  if (!state) return std::nullopt;
  ApSolution out;
  out.successor = std::move(state->row_to_col);
  out.row_potentials = std::move(state->u);
  state->v.pop_back();
  out.col_potentials = std::move(state->v);
  out.bound = state->cost;
  return out;
}

bool verify_dual_certificate(const CostMatrix& m, const ApSolution& ap,
                             std::span<const Arc> excluded, std::span<const Arc> included) {
  const int n = m.size();
  if (static_cast<int>(ap.successor.size()) != n ||
      static_cast<int>(ap.row_potentials.size()) != n ||
      static_cast<int>(ap.col_potentials.size()) != n) {
    return false;
  }
  detail::ArcConstraints c(n);
  c.apply(excluded, included);
  std::vector<char> hit(n, 0);
  Cost primal = 0;
  for (int i = 0; i < n; ++i) {
    const Node j = ap.successor[i];
    if (j < 0 || j >= n || hit[j] || !c.permitted(i, j)) return false;
    hit[j] = 1;
    primal += m(i, j);
  }
  const Cost dual = std::accumulate(ap.row_potentials.begin(), ap.row_potentials.end(), Cost{0}) +
                    std::accumulate(ap.col_potentials.begin(), ap.col_potentials.end(), Cost{0});
  if (primal != ap.bound || dual != ap.bound) return false;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (c.permitted(i, j) && m(i, j) - ap.row_potentials[i] - ap.col_potentials[j] < 0) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace atsp
