#include "atsp/model_export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "atsp/error.hpp"
#include "atsp/exact.hpp"
#include "json.hpp"

namespace atsp {

namespace {

constexpr int kTermsPerLine = 8;

std::string var(Node i, Node j) {
  return "x_" + std::to_string(i) + "_" + std::to_string(j);
}

// Writes "name: t1 + t2 + ... <rel> rhs" with a line break every few terms.
class RowWriter {
 public:
  RowWriter(std::ostringstream& out, const std::string& name) : out_(out) {
    out_ << ' ' << name << ':';
  }
  void term(Cost coef, const std::string& v) {
    if (count_ > 0 && count_ % kTermsPerLine == 0) out_ << "\n   ";
    if (coef < 0) {
      out_ << " - ";
      coef = -coef;
    } else if (count_ > 0) {
      out_ << " + ";
    } else {
      out_ << ' ';
    }
    if (coef != 1) out_ << coef << ' ';
    out_ << v;
    ++count_;
  }
  void finish(std::string_view rel, Cost rhs) { out_ << ' ' << rel << ' ' << rhs << '\n'; }
  void finish() { out_ << '\n'; }

 private:
  std::ostringstream& out_;
  int count_ = 0;
};

std::optional<Arc> parse_var(std::string_view name, int n) {
  if (!name.starts_with("x_")) return std::nullopt;
  name.remove_prefix(2);
  const auto sep = name.find('_');
  if (sep == std::string_view::npos) throw FormatError("malformed variable name");
  int i = -1, j = -1;
  auto r1 = std::from_chars(name.data(), name.data() + sep, i);
  auto r2 = std::from_chars(name.data() + sep + 1, name.data() + name.size(), j);
  if (r1.ec != std::errc{} || r1.ptr != name.data() + sep || r2.ec != std::errc{} ||
      r2.ptr != name.data() + name.size()) {
    throw FormatError("malformed variable name");
  }
  if (i < 0 || j < 0 || i >= n || j >= n || i == j) {
    throw FormatError("arc variable out of range: x_" + std::string(name));
  }
  return Arc{i, j};
}

std::vector<Node> successor_of(const std::vector<Arc>& arcs, int n) {
  std::vector<Node> succ(n, -1);
  std::vector<int> indeg(n, 0);
  for (const Arc& a : arcs) {
    if (a.from < 0 || a.to < 0 || a.from >= n || a.to >= n || a.from == a.to) {
      throw FormatError("arc out of range");
    }
    if (succ[a.from] >= 0) throw FormatError("degree violation: node " + std::to_string(a.from) +
                                             " has out-degree > 1");
    succ[a.from] = a.to;
    ++indeg[a.to];
  }
  for (Node v = 0; v < n; ++v) {
    if (succ[v] < 0) {
      throw FormatError("degree violation: node " + std::to_string(v) + " has out-degree 0");
    }
    if (indeg[v] != 1) {
      throw FormatError("degree violation: node " + std::to_string(v) + " has in-degree " +
                        std::to_string(indeg[v]));
    }
  }
  return succ;
}

}  // namespace

std::string to_string(Formulation f) { return f == Formulation::kMtz ? "mtz" : "dfj"; }

Formulation parse_formulation(std::string_view s) {
  if (s == "mtz" || s == "MTZ") return Formulation::kMtz;
  if (s == "dfj" || s == "DFJ") return Formulation::kDfj;
  throw std::invalid_argument("unknown formulation: " + std::string(s));
}

ModelCounts count_model(std::int64_t n, Formulation f, std::int64_t cuts) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  ModelCounts c;
  c.binaries = n * (n - 1);
  if (f == Formulation::kMtz) {
    c.continuous = n - 1;
    c.constraints = 2 * n + (n - 1) * (n - 2);
  } else {
    c.constraints = 2 * n + cuts;
  }
  return c;
}

std::string emit_lp(const CostMatrix& m, Formulation f, const std::vector<NodeSubset>& cuts) {
  const int n = m.size();
  std::ostringstream out;
  out << "\\ ATSP " << (f == Formulation::kMtz ? "MTZ" : "DFJ") << " model, n = " << n
      << "\n";
  out << "Minimize\n";
  {
    RowWriter row(out, "obj");
    for (Node i = 0; i < n; ++i)
      for (Node j = 0; j < n; ++j)
        if (i != j) row.term(m(i, j), var(i, j));
    row.finish();
  }
  out << "Subject To\n";
  for (Node i = 0; i < n; ++i) {
    RowWriter row(out, "out_" + std::to_string(i));
    for (Node j = 0; j < n; ++j)
      if (i != j) row.term(1, var(i, j));
    row.finish("=", 1);
  }
  for (Node j = 0; j < n; ++j) {
    RowWriter row(out, "in_" + std::to_string(j));
    for (Node i = 0; i < n; ++i)
      if (i != j) row.term(1, var(i, j));
    row.finish("=", 1);
  }
  if (f == Formulation::kMtz) {
    for (Node i = 1; i < n; ++i) {
      for (Node j = 1; j < n; ++j) {
        if (i == j) continue;
        RowWriter row(out, "mtz_" + std::to_string(i) + "_" + std::to_string(j));
        row.term(1, "u_" + std::to_string(i));
        row.term(-1, "u_" + std::to_string(j));
        row.term(n, var(i, j));
        row.finish("<=", n - 1);
      }
    }
  } else {
    for (std::size_t c = 0; c < cuts.size(); ++c) {
      NodeSubset s = cuts[c];
      std::sort(s.begin(), s.end());
      if (s.size() < 2 || static_cast<int>(s.size()) >= n ||
          std::adjacent_find(s.begin(), s.end()) != s.end() || s.front() < 0 || s.back() >= n) {
        throw std::invalid_argument("cut must be a proper subset of at least 2 distinct nodes");
      }
      RowWriter row(out, "cut_" + std::to_string(c));
      for (Node i : s)
        for (Node j : s)
          if (i != j) row.term(1, var(i, j));
      row.finish("<=", static_cast<Cost>(s.size()) - 1);
    }
  }
  if (f == Formulation::kMtz) {
    out << "Bounds\n";
    for (Node i = 1; i < n; ++i) out << " 1 <= u_" << i << " <= " << n - 1 << '\n';
  }
  out << "Binaries\n";
  int on_line = 0;
  for (Node i = 0; i < n; ++i) {
    for (Node j = 0; j < n; ++j) {
      if (i == j) continue;
      out << ' ' << var(i, j);
      if (++on_line == kTermsPerLine) {
        out << '\n';
        on_line = 0;
      }
    }
  }
  if (on_line) out << '\n';
  out << "End\n";
  return out.str();
}

std::vector<Arc> parse_solution(std::string_view text, int n) {
  std::vector<Arc> arcs;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string name, value;
    if (!(ls >> name) || name.starts_with('#')) continue;
    const auto arc = parse_var(name, n);
    if (!arc) continue;
    if (!(ls >> value)) throw FormatError("missing value for " + name);
    double v = 0;
    try {
      std::size_t used = 0;
      v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw FormatError("non-numeric value for " + name + ": " + value);
    }
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-6) {
      throw FormatError("non-integral value for " + name + ": " + value);
    }
    if (r != 0.0 && r != 1.0) throw FormatError("binary variable out of range: " + name);
    if (r == 1.0) arcs.push_back(*arc);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  successor_of(arcs, n);
  return arcs;
}

std::string to_string(CutLoopStatus s) {
  switch (s) {
    case CutLoopStatus::kNeedsSolve:
      return "needs_solve";
    case CutLoopStatus::kIntegralWithSubtours:
      return "integral_with_subtours";
    case CutLoopStatus::kTourFound:
      return "tour_found";
  }
  return "needs_solve";
}

CutLoopStatus parse_cut_loop_status(std::string_view s) {
  if (s == "needs_solve") return CutLoopStatus::kNeedsSolve;
  if (s == "integral_with_subtours") return CutLoopStatus::kIntegralWithSubtours;
  if (s == "tour_found") return CutLoopStatus::kTourFound;
  throw FormatError("unknown cut loop status: " + std::string(s));
}

CutLoopState cut_loop_step(const CutLoopState& state, const std::vector<Arc>& solution) {
  if (state.status == CutLoopStatus::kTourFound) {
    throw std::logic_error("cut loop already finished");
  }
  const auto succ = successor_of(solution, state.n);
  auto cyc = cycles(succ);

  CutLoopState next = state;
  next.last_solution = solution;
  std::sort(next.last_solution.begin(), next.last_solution.end());
  if (cyc.size() == 1) {
    next.status = CutLoopStatus::kTourFound;
    return next;
  }
  for (auto& c : cyc) {
    std::sort(c.begin(), c.end());
    if (std::find(state.cuts.begin(), state.cuts.end(), c) != state.cuts.end()) {
      throw FormatError("solver returned a subtour that an existing cut forbids");
    }
  }
  for (auto& c : cyc) next.cuts.push_back(std::move(c));
  next.round = state.round + 1;
  next.status = CutLoopStatus::kNeedsSolve;
  return next;
}

std::vector<Node> tour_order_from_arcs(const std::vector<Arc>& arcs, int n) {
  const auto succ = successor_of(arcs, n);
  if (cycles(succ).size() != 1) throw FormatError("arc set is not a single tour");
  std::vector<Node> order;
  Node v = 0;
  do {
    order.push_back(v);
    v = succ[v];
  } while (v != 0);
  return order;
}

std::string cut_loop_state_to_json(const CutLoopState& s) {
  nlohmann::ordered_json j;
  j["n"] = s.n;
  j["round"] = s.round;
  j["status"] = to_string(s.status);
  j["cuts"] = s.cuts;
  auto arcs = nlohmann::ordered_json::array();
  for (const Arc& a : s.last_solution) arcs.push_back({a.from, a.to});
  j["last_solution"] = arcs;
  return j.dump(2) + "\n";
}

CutLoopState cut_loop_state_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    CutLoopState s;
    s.n = j.at("n").get<int>();
    s.round = j.at("round").get<int>();
    s.status = parse_cut_loop_status(j.at("status").get<std::string>());
    s.cuts = j.at("cuts").get<std::vector<NodeSubset>>();
    for (const auto& a : j.at("last_solution")) {
      s.last_solution.push_back({a.at(0).get<Node>(), a.at(1).get<Node>()});
    }
    if (s.n < 2) throw FormatError("cut loop state needs n >= 2");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid cut loop state: ") + e.what());
  }
}

}  // namespace atsp
