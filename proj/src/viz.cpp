#include "grig/viz.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

namespace grig::viz {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::vector<AttentionScore> parse_attention_csv(std::string_view text) {
  std::vector<AttentionScore> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1 && line.find("graph_index") != std::string_view::npos) continue;

    std::string_view cols[3];
    for (int c = 0; c < 3; ++c) {
      const auto comma = line.find(',');
      if ((c < 2) == (comma == std::string_view::npos)) {
        throw FormatError("attention CSV line " + std::to_string(line_no) +
                          " needs exactly 3 columns");
      }
      cols[c] = trim(line.substr(0, comma));
      line = comma == std::string_view::npos ? std::string_view{} : line.substr(comma + 1);
    }
    AttentionScore row;
    const auto bad = [&] {
      return FormatError("attention CSV line " + std::to_string(line_no) + " is not numeric");
    };
    if (std::from_chars(cols[0].data(), cols[0].data() + cols[0].size(), row.graph_index).ec !=
            std::errc{} ||
        std::from_chars(cols[1].data(), cols[1].data() + cols[1].size(), row.node_id).ec !=
            std::errc{}) {
      throw bad();
    }
    try {
      row.score = std::stod(std::string(cols[2]));
    } catch (const std::exception&) {
      throw bad();
    }
    out.push_back(row);
  }
  return out;
}

std::string render_svg(const ImageGraph& g, const SvgOptions& options) {
  double scale = options.scale;
  if (scale <= 0.0) scale = std::max(1.0, 560.0 / std::max(g.width, g.height));
  const double width = g.width * scale;
  const double height = g.height * scale;

  std::vector<double> attention(g.nodes.size(), 0.0);
  double max_attention = 0.0;
  for (const auto& a : options.attention) {
    if (a.graph_index != options.graph_index || a.node_id >= g.nodes.size()) continue;
    attention[a.node_id] = a.score;
    max_attention = std::max(max_attention, a.score);
  }

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
      << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << " " << fmt(height) << "\">\n";

  if (options.image != nullptr) {
    const GrayImage& img = *options.image;
    svg << "<g id=\"image\" shape-rendering=\"crispEdges\">\n";
    for (int y = 0; y < img.height(); ++y) {
      int x = 0;
      while (x < img.width()) {  // one element per run of equal pixels
        const int v = img.at(x, y);
        int end = x + 1;
        while (end < img.width() && img.at(end, y) == v) ++end;
        svg << "<rect x=\"" << fmt(x * scale) << "\" y=\"" << fmt(y * scale) << "\" width=\""
            << fmt((end - x) * scale) << "\" height=\"" << fmt(scale) << "\" fill=\"rgb(" << v
            << "," << v << "," << v << ")\"/>\n";
        x = end;
      }
    }
    svg << "</g>\n";
  } else {
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"black\"/>\n";
  }

  svg << "<g id=\"regions\" fill=\"none\" stroke=\"#2e86de\" stroke-width=\"1\">\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& r = g.nodes[i];
    svg << "<rect data-id=\"" << r.id << "\" x=\"" << fmt(r.x0() * scale) << "\" y=\""
        << fmt(r.y0() * scale) << "\" width=\"" << fmt((2 * r.rx + 1) * scale) << "\" height=\""
        << fmt((2 * r.ry + 1) * scale) << "\"";
    if (max_attention > 0.0 && attention[i] > 0.0) {
      svg << " fill=\"#e74c3c\" fill-opacity=\"" << fmt(0.8 * attention[i] / max_attention)
          << "\"";
    }
    svg << "/>\n";
  }
  svg << "</g>\n";

  auto center = [scale](const GranularRect& r, bool x) {
    return ((x ? r.cx : r.cy) + 0.5) * scale;
  };
  svg << "<g id=\"edges\" stroke=\"#f1c40f\" stroke-width=\"0.6\" stroke-opacity=\"0.7\">\n";
  for (const auto& [a, b] : g.edges) {
    svg << "<line x1=\"" << fmt(center(g.nodes[a], true)) << "\" y1=\""
        << fmt(center(g.nodes[a], false)) << "\" x2=\"" << fmt(center(g.nodes[b], true))
        << "\" y2=\"" << fmt(center(g.nodes[b], false)) << "\"/>\n";
  }
  svg << "</g>\n";

  svg << "<g id=\"centers\" fill=\"#e67e22\">\n";
  for (const auto& r : g.nodes) {
    svg << "<circle cx=\"" << fmt(center(r, true)) << "\" cy=\"" << fmt(center(r, false))
        << "\" r=\"" << fmt(std::max(1.0, scale * 0.2)) << "\"/>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace grig::viz
