#include "atsp/heuristic.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "atsp/error.hpp"
#include "json.hpp"

namespace atsp {

namespace {

using Clock = std::chrono::steady_clock;

inline int wrap(int k, int n) { return k < 0 ? k + n : (k >= n ? k - n : k); }

// Forward arc costs along the tour plus prefix sums of forward and backward
// arc costs, so any segment's reversed cost is O(1).
struct TourSums {
  std::vector<Cost> arc;      // arc[k] = c(t[k], t[k+1 mod n])
  std::vector<Cost> forward;  // forward[k] = sum_{m<k} arc[m]
  std::vector<Cost> backward; // backward[k] = sum_{m<k} c(t[m+1], t[m]), m <= n-2

  void rebuild(const CostMatrix& m, const std::vector<Node>& t) {
    const int n = static_cast<int>(t.size());
    arc.resize(n);
    forward.assign(n + 1, 0);
    backward.assign(n, 0);
    for (int k = 0; k < n; ++k) {
      arc[k] = m(t[k], t[wrap(k + 1, n)]);
      forward[k + 1] = forward[k] + arc[k];
    }
    for (int k = 0; k + 1 < n; ++k) backward[k + 1] = backward[k] + m(t[k + 1], t[k]);
  }
};

Cost swap_delta(const CostMatrix& m, const std::vector<Node>& t, int i, int j) {
  const int n = static_cast<int>(t.size());
  int ks[4] = {wrap(i - 1, n), i, wrap(j - 1, n), j};
  std::sort(ks, ks + 4);
  auto node_at = [&](int p) { return p == i ? t[j] : (p == j ? t[i] : t[p]); };
  Cost delta = 0;
  for (int a = 0; a < 4; ++a) {
    if (a > 0 && ks[a] == ks[a - 1]) continue;
    const int k = ks[a];
    const int k1 = wrap(k + 1, n);
    delta += m(node_at(k), node_at(k1)) - m(t[k], t[k1]);
  }
  return delta;
}

Cost reversal_delta(const CostMatrix& m, const std::vector<Node>& t,
                    const TourSums& s, Cost tour_total, int i, int j) {
  const int n = static_cast<int>(t.size());
  if (j - i + 1 == n) {
    return s.backward[n - 1] + m(t[0], t[n - 1]) - tour_total;
  }
  const Node prev = t[wrap(i - 1, n)];
  const Node next = t[wrap(j + 1, n)];
  return m(prev, t[j]) + m(t[i], next) - m(prev, t[i]) - m(t[j], next) +
         (s.backward[j] - s.backward[i]) - (s.forward[j] - s.forward[i]);
}

// Delta of relocating [s, s+len) after position q; q must be outside the
// segment and not its predecessor.
Cost or_opt_delta(const CostMatrix& m, const std::vector<Node>& t, int s, int len,
                  int q) {
  const int n = static_cast<int>(t.size());
  const Node prev = t[wrap(s - 1, n)];
  const Node next = t[wrap(s + len, n)];
  const Node first = t[s];
  const Node last = t[s + len - 1];
  const Node a = t[q];
  const Node b = t[wrap(q + 1, n)];
  return m(prev, next) - m(prev, first) - m(last, next) + m(a, first) +
         m(last, b) - m(a, b);
}

std::vector<Node> apply_or_opt(const std::vector<Node>& t, int s, int len, int q) {
  const int n = static_cast<int>(t.size());
  std::vector<Node> out;
  out.reserve(n);
  for (int p = 0; p < n; ++p) {
    if (p >= s && p < s + len) continue;
    out.push_back(t[p]);
    if (p == q) out.insert(out.end(), t.begin() + s, t.begin() + s + len);
  }
  return out;
}

bool or_opt_valid(int n, int s, int len, int q) {
  if (len < 1 || len > n - 2 || s < 0 || s + len > n || q < 0 || q >= n) return false;
  if (q >= s && q < s + len) return false;
  return q != wrap(s - 1, n);
}

void check_index(int i, int n) {
  if (i < 0 || i >= n) throw std::out_of_range("tour position out of range");
}

}  // namespace

TabuParams TabuParams::defaults_for(int n) {
  TabuParams p;
  p.tenure = std::max(10, n / 10);
  p.max_stall = std::max(100, 20 * n);
  return p;
}

bool is_permutation_of_nodes(std::span<const Node> order, int n) {
  if (static_cast<int>(order.size()) != n) return false;
  std::vector<char> seen(n, 0);
  for (Node v : order) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

Cost tour_cost(const CostMatrix& m, std::span<const Node> order) {
  const int n = m.size();
  if (!is_permutation_of_nodes(order, n)) {
    throw std::invalid_argument("tour is not a permutation of the nodes");
  }
  Cost total = 0;
  for (int k = 0; k < n; ++k) total += m(order[k], order[wrap(k + 1, n)]);
  return total;
}

Tour make_tour(const CostMatrix& m, std::vector<Node> order) {
  const Cost c = tour_cost(m, order);
  return Tour{std::move(order), c};
}

Tour nearest_neighbor(const CostMatrix& m, Node start) {
  const int n = m.size();
  if (start < 0 || start >= n) throw std::out_of_range("start node out of range");
  std::vector<char> visited(n, 0);
  std::vector<Node> order;
  order.reserve(n);
  Node cur = start;
  visited[cur] = 1;
  order.push_back(cur);
  for (int step = 1; step < n; ++step) {
    Node best = -1;
    for (Node j = 0; j < n; ++j) {
      if (visited[j]) continue;
      if (best < 0 || m(cur, j) < m(cur, best)) best = j;
    }
    visited[best] = 1;
    order.push_back(best);
    cur = best;
  }
  return make_tour(m, std::move(order));
}

Tour or_opt_move(const CostMatrix& m, const Tour& t, int seg_start, int seg_len,
                 int insert_after) {
  const int n = t.size();
  check_index(seg_start, n);
  check_index(insert_after, n);
  if (seg_len < 1 || seg_len > 3 || seg_start + seg_len > n) {
    throw std::out_of_range("or-opt segment out of range");
  }
  if (insert_after >= seg_start && insert_after < seg_start + seg_len) {
    throw std::invalid_argument("or-opt insertion point inside the segment");
  }
  if (!or_opt_valid(n, seg_start, seg_len, insert_after)) return t;
  Tour out;
  out.cost = t.cost + or_opt_delta(m, t.order, seg_start, seg_len, insert_after);
  out.order = apply_or_opt(t.order, seg_start, seg_len, insert_after);
  return out;
}

Tour swap_move(const CostMatrix& m, const Tour& t, int i, int j) {
  const int n = t.size();
  check_index(i, n);
  check_index(j, n);
  if (i == j || n == 2) return t;
  if (i > j) std::swap(i, j);
  Tour out = t;
  out.cost += swap_delta(m, t.order, i, j);
  std::swap(out.order[i], out.order[j]);
  return out;
}

Tour reverse_segment(const CostMatrix& m, const Tour& t, int i, int j) {
  const int n = t.size();
  check_index(i, n);
  check_index(j, n);
  if (i > j) throw std::invalid_argument("reverse_segment needs i <= j");
  if (i == j || n == 2) return t;
  TourSums sums;
  sums.rebuild(m, t.order);
  Tour out = t;
  out.cost += reversal_delta(m, t.order, sums, t.cost, i, j);
  std::reverse(out.order.begin() + i, out.order.begin() + j + 1);
  return out;
}

TabuResult tabu_search(const CostMatrix& m, const Tour& initial, const TabuParams& p) {
  const int n = m.size();
  if (!is_permutation_of_nodes(initial.order, n)) {
    throw std::invalid_argument("initial tour is not a permutation of the nodes");
  }
  if (p.tenure < 1 || p.max_stall < 1 || p.time_limit_ms < 0) {
    throw std::invalid_argument("invalid tabu parameters");
  }
  TabuResult result{initial, 0};
  if (n <= 2) return result;

  const auto deadline = Clock::now() + std::chrono::milliseconds(p.time_limit_ms);
  // Two position bands: the front and back half of the tour.
  const int band_width = (n + 1) / 2;
  const int bands = (n + band_width - 1) / band_width;
  // tabu_until[node * bands + band]: iteration until which `node` may not be
  // moved back into `band`.
  std::vector<std::int64_t> tabu_until(static_cast<std::size_t>(n) * bands, 0);
  auto band_of = [band_width](int pos) { return pos / band_width; };

  std::vector<Node> cur = initial.order;
  Cost cur_cost = initial.cost;
  Tour& best = result.tour;
  TourSums sums;
  // rows[i*n + j] = c(i, j); cols[j*n + i] = c(i, j). Keeps both scan
  // directions within one contiguous row.
  std::vector<Cost> rows(static_cast<std::size_t>(n) * n), cols(rows.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      rows[static_cast<std::size_t>(i) * n + j] = m(i, j);
      cols[static_cast<std::size_t>(j) * n + i] = m(i, j);
    }
  }
  std::vector<Node> succ_pos(n);
  std::int64_t iter = 0;
  int stall = 0;

  enum class Kind { kNone, kSwap, kOrOpt, kReverse };
  while (stall < p.max_stall) {
    if (p.time_limit_ms > 0 && Clock::now() >= deadline) break;
    ++iter;
    sums.rebuild(m, cur);

    Kind kind = Kind::kNone;
    int bi = 0, bj = 0, blen = 0;
    Cost best_delta = std::numeric_limits<Cost>::max();

    auto is_tabu = [&](Node v, int dest) {
      return tabu_until[static_cast<std::size_t>(v) * bands + band_of(dest)] > iter;
    };
    auto admissible = [&](Cost delta, bool tabu) {
      return !tabu || cur_cost + delta < best.cost;
    };

    for (int k = 0; k < n; ++k) succ_pos[k] = cur[wrap(k + 1, n)];

    // Swaps. Non-adjacent pairs touch four distinct arcs.
    for (int i = 0; i < n; ++i) {
      const Node ti = cur[i];
      const Node pi = cur[wrap(i - 1, n)];
      const Node ni = succ_pos[i];
      const Cost* from_pi = &rows[static_cast<std::size_t>(pi) * n];
      const Cost* to_ni = &cols[static_cast<std::size_t>(ni) * n];
      const Cost* to_ti = &cols[static_cast<std::size_t>(ti) * n];
      const Cost* from_ti = &rows[static_cast<std::size_t>(ti) * n];
      const Cost removed_i = sums.arc[wrap(i - 1, n)] + sums.arc[i];
      for (int j = i + 1; j < n; ++j) {
        Cost d;
        if (j == i + 1 || (i == 0 && j == n - 1)) {
          d = swap_delta(m, cur, i, j);
        } else {
          const Node tj = cur[j];
          const Node pj = cur[j - 1];
          const Node nj = succ_pos[j];
          d = from_pi[tj] + to_ni[tj] + to_ti[pj] + from_ti[nj] - removed_i - sums.arc[j - 1] -
              sums.arc[j];
        }
        if (d >= best_delta) continue;
        if (!admissible(d, is_tabu(ti, j) || is_tabu(cur[j], i))) continue;
        best_delta = d;
        kind = Kind::kSwap;
        bi = i;
        bj = j;
      }
    }

    for (int len = 1; len <= 3 && len <= n - 2; ++len) {
      for (int s = 0; s + len <= n; ++s) {
        const Node prev = cur[wrap(s - 1, n)];
        const Node next = cur[wrap(s + len, n)];
        const Node first = cur[s];
        const Node last = cur[s + len - 1];
        const Cost removal = m(prev, next) - m(prev, first) - m(last, next);
        const Cost* into_first = &cols[static_cast<std::size_t>(first) * n];
        const Cost* out_of_last = &rows[static_cast<std::size_t>(last) * n];
        const int skip = wrap(s - 1, n);
        for (int q = 0; q < n; ++q) {
          if ((q >= s && q < s + len) || q == skip) continue;
          const Cost d = removal + into_first[cur[q]] + out_of_last[succ_pos[q]] - sums.arc[q];
          if (d >= best_delta) continue;
          const int dest = q > s ? q - len + 1 : q + 1;
          if (!admissible(d, is_tabu(first, dest))) continue;
          best_delta = d;
          kind = Kind::kOrOpt;
          bi = s;
          blen = len;
          bj = q;
        }
      }
    }

    if (p.enable_reversal) {
      for (int i = 0; i < n; ++i) {
        const Node prev = cur[wrap(i - 1, n)];
        const Node ti = cur[i];
        const Cost* from_prev = &rows[static_cast<std::size_t>(prev) * n];
        const Cost* from_ti = &rows[static_cast<std::size_t>(ti) * n];
        const Cost arc_in = sums.arc[wrap(i - 1, n)];
        for (int j = i + 1; j < n; ++j) {
          Cost d;
          if (j - i + 1 >= n - 1) {
            d = reversal_delta(m, cur, sums, cur_cost, i, j);
          } else {
            d = from_prev[cur[j]] + from_ti[succ_pos[j]] - arc_in - sums.arc[j] +
                (sums.backward[j] - sums.backward[i]) - (sums.forward[j] - sums.forward[i]);
          }
          if (d >= best_delta) continue;
          if (!admissible(d, is_tabu(ti, j) || is_tabu(cur[j], i))) continue;
          best_delta = d;
          kind = Kind::kReverse;
          bi = i;
          bj = j;
        }
      }
    }

    if (kind == Kind::kNone) {
      ++stall;
      continue;
    }

    auto forbid = [&](Node v, int src) {
      tabu_until[static_cast<std::size_t>(v) * bands + band_of(src)] = iter + p.tenure;
    };
    switch (kind) {
      case Kind::kSwap:
        forbid(cur[bi], bi);
        forbid(cur[bj], bj);
        std::swap(cur[bi], cur[bj]);
        break;
      case Kind::kOrOpt:
        forbid(cur[bi], bi);
        cur = apply_or_opt(cur, bi, blen, bj);
        break;
      case Kind::kReverse:
        forbid(cur[bi], bi);
        forbid(cur[bj], bj);
        std::reverse(cur.begin() + bi, cur.begin() + bj + 1);
        break;
      case Kind::kNone:
        break;
    }
    cur_cost += best_delta;

    if (cur_cost < best.cost) {
      best.order = cur;
      best.cost = cur_cost;
      stall = 0;
    } else {
      ++stall;
    }
  }
  result.iterations = iter;
  return result;
}

TabuResult warm_start(const CostMatrix& m, const TabuParams& p) {
  return tabu_search(m, nearest_neighbor(m, 0), p);
}

std::string tour_to_json(const Tour& t) {
  nlohmann::ordered_json j;
  j["order"] = t.order;
  j["cost"] = t.cost;
  return j.dump();
}

Tour tour_from_json(std::string_view text, const CostMatrix& m) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid tour JSON: ") + e.what());
  }
  if (!j.contains("order") || !j["order"].is_array()) {
    throw FormatError("tour JSON needs an 'order' array");
  }
  std::vector<Node> order;
  for (const auto& v : j["order"]) {
    if (!v.is_number_integer()) throw FormatError("tour nodes must be integers");
    order.push_back(v.get<Node>());
  }
  if (!is_permutation_of_nodes(order, m.size())) {
    throw FormatError("tour is not a permutation of the instance nodes");
  }
  Tour t = make_tour(m, std::move(order));
  if (j.contains("cost") && j["cost"].get<Cost>() != t.cost) {
    throw FormatError("tour cost does not match the instance");
  }
  return t;
}

std::string tour_to_line(const Tour& t) {
  std::ostringstream out;
  for (int k = 0; k < t.size(); ++k) {
    if (k) out << ' ';
    out << t.order[k];
  }
  out << '\n';
  return out.str();
}

Tour tour_from_line(std::string_view text, const CostMatrix& m) {
  std::vector<Node> order;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    Node v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw FormatError("invalid node id in tour: " + token);
    }
    order.push_back(v);
  }
  if (!is_permutation_of_nodes(order, m.size())) {
    throw FormatError("tour is not a permutation of the instance nodes");
  }
  return make_tour(m, std::move(order));
}

}  // namespace atsp
