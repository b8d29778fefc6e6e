#pragma once

#include <span>
#include <string>
#include <string_view>

#include "atsp/bench.hpp"
#include "atsp/heuristic.hpp"
#include "atsp/instance.hpp"

namespace atsp {

struct RouteOptions {
  int width = 600;
  int height = 600;
  std::string title;
};

/// Tour drawn as n arcs (alternating red and black strokes) over n node dots.
/// The first tour node is a large green dot, the node at position n/2 a large
/// blue dot.
std::string render_route(const NodeLayout& layout, const Tour& tour,
                         const RouteOptions& options = {});

enum class Axes { kLogLog, kLogLin, kLinLin };

std::string to_string(Axes a);
Axes parse_axes(std::string_view s);

struct ScalingOptions {
  int width = 720;
  int height = 480;
  std::string title;
};

/// One curve per (algorithm, seed, range), median runtime over repetitions at
/// each n. kLogLin means linear n against log runtime.
std::string render_scaling(std::span<const BenchRecord> records, Axes axes,
                           const ScalingOptions& options = {});

/// Node i at angle 2*pi*i/n on a circle of radius 0.45 centred in the unit
/// square.
NodeLayout circular_layout(int n);

}  // namespace atsp
