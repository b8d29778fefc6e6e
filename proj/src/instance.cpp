#include "atsp/instance.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "atsp/error.hpp"

namespace atsp {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<Cost> parse_int(std::string_view s) {
  Cost value = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

bool looks_like_keyword(std::string_view token) {
  if (token.empty()) return false;
  for (char c : token) {
    if (!(c == '_' || c == ':' || (c >= 'A' && c <= 'Z'))) return false;
  }
  return true;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

}  // namespace

CostMatrix::CostMatrix(CostTable costs, Cost sentinel)
    : costs_(std::move(costs)), sentinel_(sentinel) {
  if (costs_.rows() != costs_.cols()) {
    throw std::invalid_argument("cost matrix must be square");
  }
  if (costs_.rows() < 2) {
    throw std::invalid_argument("cost matrix needs at least 2 nodes");
  }
  costs_.diagonal().setConstant(sentinel_);
}

CostMatrix CostMatrix::uniform(int n, Cost value) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  return CostMatrix(CostTable::Constant(n, n, value));
}

CostMatrix CostMatrix::from_rows(const std::vector<std::vector<Cost>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  CostTable t(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != n) {
      throw std::invalid_argument("ragged cost rows");
    }
    for (Eigen::Index j = 0; j < n; ++j) t(i, j) = rows[i][j];
  }
  return CostMatrix(std::move(t));
}

Cost CostMatrix::max_off_diagonal() const {
  Cost best = std::numeric_limits<Cost>::min();
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j)
      if (i != j) best = std::max(best, costs_(i, j));
  return best;
}

bool CostMatrix::is_symmetric() const { return costs_ == costs_.transpose(); }

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::next_unit() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

GeneratedInstance generate(const GenSpec& spec) {
  if (spec.n < 2) throw std::invalid_argument("n must be at least 2");
  if (spec.range.low < 1 || spec.range.high < spec.range.low) {
    throw std::invalid_argument("invalid cost range: need 1 <= low <= high");
  }
  const int n = spec.n;
  SplitMix64 rng(spec.seed);
  CostTable t(n, n);
  GeneratedInstance out;

  if (spec.mode == GenMode::kUniformMatrix) {
    const auto width = static_cast<std::uint64_t>(spec.range.high - spec.range.low) + 1;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) t(i, j) = spec.range.low + static_cast<Cost>(rng.next() % width);
  } else {
    NodeLayout layout;
    layout.coords.reserve(n);
    for (int i = 0; i < n; ++i) {
      const double x = rng.next_unit();
      const double y = rng.next_unit();
      layout.coords.emplace_back(x, y);
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double d = (layout.coords[i] - layout.coords[j]).norm();
        const Cost base = static_cast<Cost>(std::llround(100.0 * d));
        const Cost perturb = static_cast<Cost>(rng.next() % 4);
        t(i, j) = std::max(spec.range.low, base + perturb);
      }
    }
    out.layout = std::move(layout);
  }
  out.matrix = CostMatrix(std::move(t));
  return out;
}

CostMatrix scale(const CostMatrix& m, Cost k) {
  if (k < 1) throw std::invalid_argument("scale factor must be >= 1");
  CostTable t = m.table();
  const int n = m.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Cost product = 0;
      if (__builtin_mul_overflow(t(i, j), k, &product)) {
        throw std::overflow_error("cost overflow while scaling");
      }
      t(i, j) = product;
    }
  }
  return CostMatrix(std::move(t), m.diagonal_sentinel());
}

CostMatrix parse_tsplib(std::string_view text) {
  const auto lines = split_lines(text);
  long dimension = -1;
  std::size_t line_no = 0;
  bool in_section = false;

  for (; line_no < lines.size(); ++line_no) {
    const auto line = trim(lines[line_no]);
    if (line.empty()) continue;
    if (line == "EDGE_WEIGHT_SECTION" || line.starts_with("EDGE_WEIGHT_SECTION")) {
      in_section = true;
      ++line_no;
      break;
    }
    if (line == "EOF") break;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw FormatError("unexpected TSPLIB line: " + std::string(line));
    }
    const auto key = trim(line.substr(0, colon));
    const auto value = trim(line.substr(colon + 1));
    if (key == "TYPE") {
      if (value != "ATSP" && value != "TSP") {
        throw FormatError("unsupported TSPLIB TYPE: " + std::string(value));
      }
    } else if (key == "DIMENSION") {
      const auto d = parse_int(value);
      if (!d || *d < 2) throw FormatError("invalid DIMENSION");
      dimension = static_cast<long>(*d);
    } else if (key == "EDGE_WEIGHT_TYPE") {
      if (value != "EXPLICIT") {
        throw FormatError("unsupported EDGE_WEIGHT_TYPE: " + std::string(value));
      }
    } else if (key == "EDGE_WEIGHT_FORMAT") {
      if (value != "FULL_MATRIX") {
        throw FormatError("unsupported EDGE_WEIGHT_FORMAT: " + std::string(value));
      }
    }
    // NAME, COMMENT and unknown keys are ignored.
  }
  if (!in_section) throw FormatError("missing EDGE_WEIGHT_SECTION");
  if (dimension < 0) throw FormatError("missing DIMENSION");

  std::vector<Cost> values;
  values.reserve(static_cast<std::size_t>(dimension * dimension));
  bool done = false;
  for (; line_no < lines.size() && !done; ++line_no) {
    const auto line = lines[line_no];
    std::size_t pos = 0;
    while (pos < line.size()) {
      pos = line.find_first_not_of(" \t\r", pos);
      if (pos == std::string_view::npos) break;
      auto end = line.find_first_of(" \t\r", pos);
      if (end == std::string_view::npos) end = line.size();
      const auto token = line.substr(pos, end - pos);
      pos = end;
      if (auto v = parse_int(token)) {
        values.push_back(*v);
      } else if (looks_like_keyword(token)) {
        done = true;
        break;
      } else {
        throw FormatError("non-integer edge weight: " + std::string(token));
      }
    }
  }
  if (static_cast<long>(values.size()) != dimension * dimension) {
    throw FormatError("dimension mismatch: DIMENSION " + std::to_string(dimension) +
                      " needs " + std::to_string(dimension * dimension) +
                      " weights, found " + std::to_string(values.size()));
  }
  CostTable t(dimension, dimension);
  for (long i = 0; i < dimension; ++i)
    for (long j = 0; j < dimension; ++j) t(i, j) = values[i * dimension + j];
  return CostMatrix(std::move(t));
}

std::string write_tsplib(const CostMatrix& m, std::string_view name) {
  std::ostringstream out;
  out << "NAME: " << name << "\n"
      << "TYPE: ATSP\n"
      << "DIMENSION: " << m.size() << "\n"
      << "EDGE_WEIGHT_TYPE: EXPLICIT\n"
      << "EDGE_WEIGHT_FORMAT: FULL_MATRIX\n"
      << "EDGE_WEIGHT_SECTION\n";
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) {
      if (j) out << ' ';
      out << m(i, j);
    }
    out << '\n';
  }
  out << "EOF\n";
  return out.str();
}

CostMatrix parse_csv(std::string_view text) {
  std::vector<std::vector<Cost>> rows;
  for (auto line : split_lines(text)) {
    line = trim(line);
    if (line.empty()) continue;
    std::vector<Cost> row;
    std::size_t pos = 0;
    while (true) {
      auto comma = line.find(',', pos);
      const auto cell = trim(line.substr(pos, comma == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : comma - pos));
      const auto v = parse_int(cell);
      if (!v) throw FormatError("non-integer CSV cell: " + std::string(cell));
      row.push_back(*v);
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw FormatError("CSV matrix needs at least 2 rows");
  for (const auto& r : rows) {
    if (r.size() != rows.size()) throw FormatError("CSV matrix is not square");
  }
  return CostMatrix::from_rows(rows);
}

std::string write_csv(const CostMatrix& m) {
  std::ostringstream out;
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  return out.str();
}

std::uint64_t digest(const CostMatrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(m.size()));
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) mix(static_cast<std::uint64_t>(m(i, j)));
  return h;
}

std::string to_string(GenMode mode) {
  return mode == GenMode::kUniformMatrix ? "uniform" : "euclidean";
}

GenMode parse_gen_mode(std::string_view s) {
  if (s == "uniform" || s == "uniform-matrix") return GenMode::kUniformMatrix;
  if (s == "euclidean" || s == "euclidean-asymmetric") {
    return GenMode::kEuclideanAsymmetric;
  }
  throw std::invalid_argument("unknown generation mode: " + std::string(s));
}

CostRange parse_range(std::string_view s) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("range must look like lo:hi");
  }
  const auto lo = parse_int(trim(s.substr(0, colon)));
  const auto hi = parse_int(trim(s.substr(colon + 1)));
  if (!lo || !hi) throw std::invalid_argument("range bounds must be integers");
  if (*lo < 1 || *hi < *lo) {
    throw std::invalid_argument("invalid cost range: need 1 <= low <= high");
  }
  return {*lo, *hi};
}

}  // namespace atsp
