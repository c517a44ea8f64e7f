#include "eegkit/svg_report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace eegkit {

namespace {

// Fixed two-decimal formatting keeps the output byte-stable across
// platforms; coordinates never need more resolution than 0.01 px.
std::string num(double v) {
  if (!std::isfinite(v)) v = 0.0;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape_text(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Rect {
  double x, y, w, h;
};

// value -> pixel mappers
double map_x(double v, double lo, double hi, const Rect& r) {
  if (hi <= lo) return r.x;
  return r.x + (v - lo) / (hi - lo) * r.w;
}
double map_y(double v, double lo, double hi, const Rect& r) {
  if (hi <= lo) return r.y + r.h;
  return r.y + r.h - (v - lo) / (hi - lo) * r.h;
}

std::string tick_label(double v) {
  char buf[48];
  // ticks are human-facing: trim trailing noise
  if (std::fabs(v) >= 100.0 || v == std::floor(v))
    std::snprintf(buf, sizeof(buf), "%.0f", v);
  else
    std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

}  // namespace

std::string render_figure_svg(const FigureSpec& fig) {
  if (fig.x.empty()) throw std::runtime_error("render_figure_svg: empty x axis");
  if (fig.panels.empty()) throw std::runtime_error("render_figure_svg: no panels");
  for (const auto& p : fig.panels)
    for (const auto& s : p.series) {
      if (s.mean.size() != fig.x.size())
        throw std::runtime_error("render_figure_svg: series '" + s.label + "' in panel '" +
                                 p.title + "' has " + std::to_string(s.mean.size()) +
                                 " points, x axis has " + std::to_string(fig.x.size()));
      if (!s.sd.empty() && s.sd.size() != fig.x.size())
        throw std::runtime_error("render_figure_svg: sd length mismatch in panel '" + p.title +
                                 "'");
    }

  const int cols = std::max(1, fig.columns);
  const int rows = (static_cast<int>(fig.panels.size()) + cols - 1) / cols;

  const double plot_w = 250.0, plot_h = 150.0;
  const double margin_l = 56.0, margin_r = 16.0, margin_t = 64.0, margin_b = 48.0;
  const double gap_x = 28.0, gap_y = 40.0;
  const double width = margin_l + cols * plot_w + (cols - 1) * gap_x + margin_r;
  const double height = margin_t + rows * plot_h + (rows - 1) * gap_y + margin_b;

  // Common y range across panels so amplitudes stay comparable.
  double y_lo = std::numeric_limits<double>::infinity();
  double y_hi = -std::numeric_limits<double>::infinity();
  for (const auto& p : fig.panels)
    for (const auto& s : p.series)
      for (size_t i = 0; i < s.mean.size(); ++i) {
        const double band = s.sd.empty() ? 0.0 : s.sd[i];
        y_lo = std::min(y_lo, s.mean[i] - band);
        y_hi = std::max(y_hi, s.mean[i] + band);
      }
  if (!std::isfinite(y_lo) || !std::isfinite(y_hi)) {
    y_lo = -1.0;
    y_hi = 1.0;
  }
  if (y_hi - y_lo < 1e-12) {
    y_lo -= 1.0;
    y_hi += 1.0;
  }
  const double pad = 0.06 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;
  const double x_lo = fig.x.front(), x_hi = fig.x.back();

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(width / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         escape_text(fig.title) + "</text>\n";

  // Legend from the first panel's series.
  if (!fig.panels.front().series.empty()) {
    double lx = margin_l;
    const double ly = 44.0;
    for (const auto& s : fig.panels.front().series) {
      svg += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(lx + 24) +
             "\" y2=\"" + num(ly) + "\" stroke=\"" + s.color + "\" stroke-width=\"2\"/>\n";
      svg += "<text x=\"" + num(lx + 30) + "\" y=\"" + num(ly + 4) +
             "\" font-family=\"sans-serif\" font-size=\"12\">" + escape_text(s.label) +
             "</text>\n";
      lx += 30.0 + 8.0 * static_cast<double>(s.label.size()) + 24.0;
    }
  }

  for (size_t pi = 0; pi < fig.panels.size(); ++pi) {
    const auto& panel = fig.panels[pi];
    const int r = static_cast<int>(pi) / cols;
    const int c = static_cast<int>(pi) % cols;
    const Rect rect{margin_l + c * (plot_w + gap_x), margin_t + r * (plot_h + gap_y), plot_w,
                    plot_h};

    svg += "<rect x=\"" + num(rect.x) + "\" y=\"" + num(rect.y) + "\" width=\"" + num(rect.w) +
           "\" height=\"" + num(rect.h) + "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + num(rect.x + rect.w / 2) + "\" y=\"" + num(rect.y - 6) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
           escape_text(panel.title) + "</text>\n";

    // Zero line when it is inside the range.
    if (y_lo < 0.0 && y_hi > 0.0) {
      const double zy = map_y(0.0, y_lo, y_hi, rect);
      svg += "<line x1=\"" + num(rect.x) + "\" y1=\"" + num(zy) + "\" x2=\"" +
             num(rect.x + rect.w) + "\" y2=\"" + num(zy) +
             "\" stroke=\"#bbb\" stroke-width=\"1\" stroke-dasharray=\"3,3\"/>\n";
    }

    // Significant extents: grey backdrop plus a bar under the traces.
    for (const auto& span : panel.significant) {
      const double sx = map_x(std::max(span.first, x_lo), x_lo, x_hi, rect);
      const double ex = map_x(std::min(span.second, x_hi), x_lo, x_hi, rect);
      if (ex <= sx) continue;
      svg += "<rect x=\"" + num(sx) + "\" y=\"" + num(rect.y) + "\" width=\"" + num(ex - sx) +
             "\" height=\"" + num(rect.h) + "\" fill=\"#000\" fill-opacity=\"0.06\"/>\n";
      svg += "<line x1=\"" + num(sx) + "\" y1=\"" + num(rect.y + rect.h - 4) + "\" x2=\"" +
             num(ex) + "\" y2=\"" + num(rect.y + rect.h - 4) +
             "\" stroke=\"#000\" stroke-width=\"3\"/>\n";
    }

    for (const auto& s : panel.series) {
      if (!s.sd.empty()) {
        std::string pts;
        for (size_t i = 0; i < fig.x.size(); ++i) {
          pts += num(map_x(fig.x[i], x_lo, x_hi, rect)) + "," +
                 num(map_y(s.mean[i] + s.sd[i], y_lo, y_hi, rect)) + " ";
        }
        for (size_t i = fig.x.size(); i-- > 0;) {
          pts += num(map_x(fig.x[i], x_lo, x_hi, rect)) + "," +
                 num(map_y(s.mean[i] - s.sd[i], y_lo, y_hi, rect)) + " ";
        }
        svg += "<polygon points=\"" + pts + "\" fill=\"" + s.color +
               "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
      }
      std::string pts;
      for (size_t i = 0; i < fig.x.size(); ++i) {
        pts += num(map_x(fig.x[i], x_lo, x_hi, rect)) + "," +
               num(map_y(s.mean[i], y_lo, y_hi, rect)) + " ";
      }
      svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + s.color +
             "\" stroke-width=\"1.5\"/>\n";
    }

    // Axis ticks: ends of each axis, labels only on the outer panels.
    const bool bottom_row = r == rows - 1 || pi + cols >= fig.panels.size();
    if (bottom_row) {
      for (double tv : {x_lo, 0.5 * (x_lo + x_hi), x_hi}) {
        const double tx = map_x(tv, x_lo, x_hi, rect);
        svg += "<line x1=\"" + num(tx) + "\" y1=\"" + num(rect.y + rect.h) + "\" x2=\"" + num(tx) +
               "\" y2=\"" + num(rect.y + rect.h + 4) + "\" stroke=\"#444\"/>\n";
        svg += "<text x=\"" + num(tx) + "\" y=\"" + num(rect.y + rect.h + 16) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
               tick_label(tv) + "</text>\n";
      }
    }
    if (c == 0) {
      for (double tv : {y_lo, 0.5 * (y_lo + y_hi), y_hi}) {
        const double ty = map_y(tv, y_lo, y_hi, rect);
        svg += "<line x1=\"" + num(rect.x - 4) + "\" y1=\"" + num(ty) + "\" x2=\"" + num(rect.x) +
               "\" y2=\"" + num(ty) + "\" stroke=\"#444\"/>\n";
        svg += "<text x=\"" + num(rect.x - 7) + "\" y=\"" + num(ty + 3) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" +
               tick_label(tv) + "</text>\n";
      }
    }
  }

  svg += "<text x=\"" + num(width / 2) + "\" y=\"" + num(height - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
         escape_text(fig.x_label) + "</text>\n";
  svg += "<text x=\"16\" y=\"" + num(height / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " +
         num(height / 2) + ")\">" + escape_text(fig.y_label) + "</text>\n";
  svg += "</svg>\n";
  return svg;
}

} // namespace eegkit
