#include "atsp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace atsp {

namespace {

constexpr const char* kRed = "#d62728";
constexpr const char* kBlack = "#000000";
constexpr const char* kGreen = "#2ca02c";
constexpr const char* kBlue = "#1f77b4";
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

// Fixed two-decimal formatting keeps the output byte-stable.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  if (std::string_view(buf) == "-0.00") return "0.00";
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void open_svg(std::ostringstream& out, int w, int h) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w
      << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
      << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"#ffffff\"/>\n";
}

std::string tick_label(double v, bool log_scale) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", log_scale ? std::pow(10.0, v) : v);
  return buf;
}

}  // namespace

std::string render_route(const NodeLayout& layout, const Tour& tour, const RouteOptions& options) {
  const int n = tour.size();
  if (layout.size() != n) throw std::invalid_argument("layout and tour sizes differ");
  if (!is_permutation_of_nodes(tour.order, n)) throw std::invalid_argument("invalid tour");

  const double margin = 30.0;
  const double w = options.width, h = options.height;
  auto px = [&](Node v) { return margin + layout.coords[v].x() * (w - 2 * margin); };
  auto py = [&](Node v) { return margin + (1.0 - layout.coords[v].y()) * (h - 2 * margin); };

  std::ostringstream out;
  open_svg(out, options.width, options.height);
  if (!options.title.empty()) {
    out << "<text x=\"" << fmt(w / 2) << "\" y=\"20.00\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"14\">" << escape(options.title) << "</text>\n";
  }
  out << "<g class=\"edges\" stroke-width=\"1.5\">\n";
  for (int k = 0; k < n; ++k) {
    const Node a = tour.order[k];
    const Node b = tour.order[(k + 1) % n];
    out << "<line class=\"edge\" x1=\"" << fmt(px(a)) << "\" y1=\"" << fmt(py(a)) << "\" x2=\""
        << fmt(px(b)) << "\" y2=\"" << fmt(py(b)) << "\" stroke=\"" << (k % 2 ? kBlack : kRed)
        << "\"/>\n";
  }
  out << "</g>\n<g class=\"nodes\" fill=\"#333333\">\n";
  for (Node v = 0; v < n; ++v) {
    out << "<circle class=\"node\" cx=\"" << fmt(px(v)) << "\" cy=\"" << fmt(py(v))
        << "\" r=\"3\"/>\n";
  }
  out << "</g>\n";
  const Node start = tour.order[0];
  const Node mid = tour.order[n / 2];
  out << "<circle class=\"start\" cx=\"" << fmt(px(start)) << "\" cy=\"" << fmt(py(start))
      << "\" r=\"9\" fill=\"" << kGreen << "\"/>\n";
  out << "<circle class=\"mid\" cx=\"" << fmt(px(mid)) << "\" cy=\"" << fmt(py(mid))
      << "\" r=\"9\" fill=\"" << kBlue << "\"/>\n";
  out << "</svg>\n";
  return out.str();
}

std::string to_string(Axes a) {
  switch (a) {
    case Axes::kLogLog: return "loglog";
    case Axes::kLogLin: return "loglin";
    case Axes::kLinLin: return "linlin";
  }
  return "loglog";
}

Axes parse_axes(std::string_view s) {
  if (s == "loglog") return Axes::kLogLog;
  if (s == "loglin") return Axes::kLogLin;
  if (s == "linlin") return Axes::kLinLin;
  throw std::invalid_argument("unknown axes: " + std::string(s));
}

std::string render_scaling(std::span<const BenchRecord> records, Axes axes,
                           const ScalingOptions& options) {
  if (records.empty()) throw std::invalid_argument("no records to plot");

  using Key = std::tuple<std::string, std::uint64_t, CostRange>;
  std::map<Key, std::map<int, std::vector<double>>> raw;
  std::set<CostRange> ranges;
  for (const auto& r : records) {
    raw[{to_string(r.algorithm), r.seed, r.range}][r.n].push_back(r.runtime_ms);
    ranges.insert(r.range);
  }

  const bool log_x = axes == Axes::kLogLog;
  const bool log_y = axes != Axes::kLinLin;
  auto tx = [&](double n) { return log_x ? std::log10(n) : n; };
  auto ty = [&](double t) { return log_y ? std::log10(std::max(t, 1e-3)) : t; };

  struct Series {
    std::string label;
    std::size_t range_index;
    std::vector<std::pair<double, double>> points;
  };
  std::vector<Series> series;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& [key, by_n] : raw) {
    const auto& [alg, seed, range] = key;
    Series s;
    s.label = alg + " seed " + std::to_string(seed) + " [" + std::to_string(range.low) + ", " +
              std::to_string(range.high) + "]";
    s.range_index = static_cast<std::size_t>(std::distance(ranges.begin(), ranges.find(range)));
    for (const auto& [n, times] : by_n) {
      const double x = tx(n), y = ty(median(times));
      s.points.emplace_back(x, y);
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
    series.push_back(std::move(s));
  }
  if (x1 - x0 < 1e-9) { x0 -= 0.5; x1 += 0.5; }
  if (y1 - y0 < 1e-9) { y0 -= 0.5; y1 += 0.5; }

  const double w = options.width, h = options.height;
  const double left = 70, right = 200, top = 40, bottom = 50;
  const double pw = w - left - right, ph = h - top - bottom;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::ostringstream out;
  open_svg(out, options.width, options.height);
  if (!options.title.empty()) {
    out << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"24.00\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"14\">" << escape(options.title) << "</text>\n";
  }
  out << "<g class=\"axes\" stroke=\"#000000\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top + ph) << "\" x2=\"" << fmt(left + pw)
      << "\" y2=\"" << fmt(top + ph) << "\"/>\n";
  out << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(left)
      << "\" y2=\"" << fmt(top + ph) << "\"/>\n";
  constexpr int kTicks = 5;
  for (int k = 0; k < kTicks; ++k) {
    const double fx = x0 + (x1 - x0) * k / (kTicks - 1);
    const double fy = y0 + (y1 - y0) * k / (kTicks - 1);
    out << "<line x1=\"" << fmt(sx(fx)) << "\" y1=\"" << fmt(top + ph) << "\" x2=\""
        << fmt(sx(fx)) << "\" y2=\"" << fmt(top + ph + 5) << "\"/>\n";
    out << "<text x=\"" << fmt(sx(fx)) << "\" y=\"" << fmt(top + ph + 18)
        << "\" stroke=\"none\" text-anchor=\"middle\">" << tick_label(fx, log_x) << "</text>\n";
    out << "<line x1=\"" << fmt(left - 5) << "\" y1=\"" << fmt(sy(fy)) << "\" x2=\""
        << fmt(left) << "\" y2=\"" << fmt(sy(fy)) << "\"/>\n";
    out << "<text x=\"" << fmt(left - 8) << "\" y=\"" << fmt(sy(fy) + 4)
        << "\" stroke=\"none\" text-anchor=\"end\">" << tick_label(fy, log_y) << "</text>\n";
  }
  out << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(h - 10)
      << "\" stroke=\"none\" text-anchor=\"middle\">n" << (log_x ? " (log)" : "") << "</text>\n";
  out << "<text x=\"16.00\" y=\"" << fmt(top + ph / 2) << "\" stroke=\"none\" "
      << "text-anchor=\"middle\" transform=\"rotate(-90 16.00 " << fmt(top + ph / 2)
      << ")\">runtime ms" << (log_y ? " (log)" : "") << "</text>\n";
  out << "</g>\n";

  const bool paired = ranges.size() > 1;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ser = series[s];
    const bool cross = paired && ser.range_index % 2 == 1;
    const char* color = paired ? (ser.range_index % 2 ? kBlue : kRed)
                               : kPalette[s % std::size(kPalette)];
    out << "<g class=\"series\" stroke=\"" << color << "\" fill=\"none\">\n";
    if (ser.points.size() > 1) {
      out << "<polyline points=\"";
      for (std::size_t k = 0; k < ser.points.size(); ++k) {
        if (k) out << ' ';
        out << fmt(sx(ser.points[k].first)) << ',' << fmt(sy(ser.points[k].second));
      }
      out << "\"/>\n";
    }
    for (const auto& [x, y] : ser.points) {
      const double cx = sx(x), cy = sy(y);
      if (cross) {
        out << "<path class=\"marker\" d=\"M" << fmt(cx - 4) << ' ' << fmt(cy - 4) << " L"
            << fmt(cx + 4) << ' ' << fmt(cy + 4) << " M" << fmt(cx - 4) << ' ' << fmt(cy + 4)
            << " L" << fmt(cx + 4) << ' ' << fmt(cy - 4) << "\"/>\n";
      } else {
        out << "<circle class=\"marker\" cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy)
            << "\" r=\"3.5\"/>\n";
      }
    }
    out << "</g>\n";
  }

  out << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ser = series[s];
    const char* color = paired ? (ser.range_index % 2 ? kBlue : kRed)
                               : kPalette[s % std::size(kPalette)];
    const double ly = top + 14.0 * static_cast<double>(s);
    out << "<line x1=\"" << fmt(left + pw + 12) << "\" y1=\"" << fmt(ly) << "\" x2=\""
        << fmt(left + pw + 28) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color << "\"/>\n";
    out << "<text x=\"" << fmt(left + pw + 32) << "\" y=\"" << fmt(ly + 4) << "\">"
        << escape(ser.label) << "</text>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

NodeLayout circular_layout(int n) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  NodeLayout layout;
  layout.coords.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double angle = 2.0 * std::numbers::pi * i / n;
    layout.coords.emplace_back(0.5 + 0.45 * std::cos(angle), 0.5 + 0.45 * std::sin(angle));
  }
  return layout;
}

}  // namespace atsp
