#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "atsp/instance.hpp"

namespace atsp {

enum class Formulation { kMtz, kDfj };

std::string to_string(Formulation f);
Formulation parse_formulation(std::string_view s);

/// A DFJ subtour cut: sum of x_ij over i, j in the subset <= |subset| - 1.
using NodeSubset = std::vector<Node>;

struct ModelCounts {
  std::int64_t binaries = 0;
  std::int64_t continuous = 0;
  std::int64_t constraints = 0;
  friend bool operator==(const ModelCounts&, const ModelCounts&) = default;
};

/// Closed-form sizes without building the model. `cuts` only affects DFJ.
ModelCounts count_model(std::int64_t n, Formulation f, std::int64_t cuts = 0);

/// Writes the model in the algebraic LP text format (Minimize / Subject To /
/// Bounds / Binaries / End). Output is byte-stable for identical inputs.
std::string emit_lp(const CostMatrix& m, Formulation f,
                    const std::vector<NodeSubset>& cuts = {});

/// Parses "<name> <value>" lines; returns arcs whose x_i_j rounds to 1.
/// Lines starting with '#' and variables other than x_i_j are ignored.
/// Throws FormatError on non-integral values or degree violations.
std::vector<Arc> parse_solution(std::string_view text, int n);

enum class CutLoopStatus { kNeedsSolve, kIntegralWithSubtours, kTourFound };

std::string to_string(CutLoopStatus s);
CutLoopStatus parse_cut_loop_status(std::string_view s);

struct CutLoopState {
  int n = 0;
  int round = 0;
  std::vector<NodeSubset> cuts;
  std::vector<Arc> last_solution;
  CutLoopStatus status = CutLoopStatus::kNeedsSolve;
};

/// Feeds one integral solution of the current model back into the loop.
/// Throws FormatError if the solution repeats an already-cut subtour.
CutLoopState cut_loop_step(const CutLoopState& state, const std::vector<Arc>& solution);

/// Tour order (starting at node 0) of a single-cycle arc set.
std::vector<Node> tour_order_from_arcs(const std::vector<Arc>& arcs, int n);

std::string cut_loop_state_to_json(const CutLoopState& s);
CutLoopState cut_loop_state_from_json(std::string_view text);

}  // namespace atsp
