#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace atsp {

using Cost = std::int64_t;
using Node = int;

/// Value placed on every self-arc. Large enough that no optimal structure on a
/// supported instance (n * high < 1e6) ever uses one.
inline constexpr Cost kDiagonalSentinel = 1'000'000;

using CostTable =
    Eigen::Matrix<Cost, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Arc {
  Node from = 0;
  Node to = 0;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

/// Dense n x n directed arc costs. The diagonal always holds the sentinel.
class CostMatrix {
 public:
  CostMatrix() = default;

  /// Takes ownership of `costs` and overwrites its diagonal with `sentinel`.
  explicit CostMatrix(CostTable costs, Cost sentinel = kDiagonalSentinel);

  /// Off-diagonal entries all equal to `value`.
  static CostMatrix uniform(int n, Cost value);

  /// Row-major off-diagonal values; diagonal entries of `rows` are ignored.
  static CostMatrix from_rows(
      const std::vector<std::vector<Cost>>& rows);

  int size() const { return static_cast<int>(costs_.rows()); }
  Cost operator()(Node i, Node j) const { return costs_(i, j); }
  Cost diagonal_sentinel() const { return sentinel_; }
  const CostTable& table() const { return costs_; }

  Cost max_off_diagonal() const;
  bool is_symmetric() const;

  friend bool operator==(const CostMatrix& a, const CostMatrix& b) {
    return a.sentinel_ == b.sentinel_ && a.costs_.rows() == b.costs_.rows() &&
           a.costs_ == b.costs_;
  }

 private:
  CostTable costs_;
  Cost sentinel_ = kDiagonalSentinel;
};

enum class GenMode { kUniformMatrix, kEuclideanAsymmetric };

struct CostRange {
  Cost low = 1;
  Cost high = 10;
  friend auto operator<=>(const CostRange&, const CostRange&) = default;
};

struct GenSpec {
  int n = 10;
  std::uint64_t seed = 42;
  CostRange range{};
  GenMode mode = GenMode::kUniformMatrix;
};

/// Planar node positions in the unit square, used only for drawing.
struct NodeLayout {
  std::vector<Eigen::Vector2d> coords;
  int size() const { return static_cast<int>(coords.size()); }
};

struct GeneratedInstance {
  CostMatrix matrix;
  std::optional<NodeLayout> layout;  // set in euclidean-asymmetric mode
};

/// SplitMix64 with the reference constants.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform double in [0, 1) from the top 53 bits.
  double next_unit();

 private:
  std::uint64_t state_;
};

GeneratedInstance generate(const GenSpec& spec);

/// Multiplies every off-diagonal entry by `k`. Throws std::overflow_error.
CostMatrix scale(const CostMatrix& m, Cost k);

CostMatrix parse_tsplib(std::string_view text);
std::string write_tsplib(const CostMatrix& m, std::string_view name = "atsp");

CostMatrix parse_csv(std::string_view text);
std::string write_csv(const CostMatrix& m);

/// FNV-1a 64 over the little-endian bytes of n and every entry.
std::uint64_t digest(const CostMatrix& m);

std::string to_string(GenMode mode);
GenMode parse_gen_mode(std::string_view s);
/// "lo:hi"
CostRange parse_range(std::string_view s);

}  // namespace atsp
