#include "glcmsample/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "glcmsample/error.hpp"

namespace glcmsample {

namespace {

constexpr double kLeft = 70.0;
constexpr double kRight = 70.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 60.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
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

struct Axis {
  double lo;
  double hi;
  double px_lo;
  double px_hi;

  double map(double v) const { return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo); }
};

Axis padded(double lo, double hi, double px_lo, double px_hi) {
  if (hi <= lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  return {lo, hi, px_lo, px_hi};
}

}  // namespace

std::string render_profile_svg(const ProfileTable& table, const std::optional<SamplingPlan>& plan) {
  if (table.entropy.empty()) throw Error("cannot plot an empty profile");
  const double plot_x0 = kLeft;
  const double plot_x1 = kPlotWidth - kRight;
  const double plot_y0 = kPlotHeight - kBottom;  // bottom edge in pixels
  const double plot_y1 = kTop;

  const auto [imin, imax] = std::minmax_element(table.slice_indices.begin(), table.slice_indices.end());
  double emin = *std::min_element(table.entropy.begin(), table.entropy.end());
  double emax = *std::max_element(table.entropy.begin(), table.entropy.end());
  if (table.smoothed) {
    emin = std::min(emin, *std::min_element(table.smoothed->begin(), table.smoothed->end()));
    emax = std::max(emax, *std::max_element(table.smoothed->begin(), table.smoothed->end()));
  }
  const Axis xs = padded(*imin, *imax, plot_x0, plot_x1);
  const Axis ys = padded(emin, emax, plot_y0, plot_y1);
  const Axis cdf_axis{0.0, 1.0, plot_y0, plot_y1};

  auto polyline = [&](const char* cls, const char* color, const std::vector<int>& xsrc, const std::vector<double>& ysrc,
                      const Axis& yaxis) {
    std::string s = "  <polyline class=\"";
    s += cls;
    s += "\" fill=\"none\" stroke=\"";
    s += color;
    s += "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < ysrc.size(); ++i) {
      if (i) s += ' ';
      s += fmt(xs.map(xsrc[i])) + "," + fmt(yaxis.map(ysrc[i]));
    }
    s += "\"/>\n";
    return s;
  };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kPlotWidth) + "\" height=\"" +
         std::to_string(kPlotHeight) + "\" viewBox=\"0 0 " + std::to_string(kPlotWidth) + " " +
         std::to_string(kPlotHeight) + "\">\n";
  svg += "  <rect x=\"0\" y=\"0\" width=\"" + std::to_string(kPlotWidth) + "\" height=\"" +
         std::to_string(kPlotHeight) + "\" fill=\"white\"/>\n";
  if (plan) svg += "  <title>" + escape(plan->volume_id) + " (" + to_string(plan->config.strategy) + ")</title>\n";

  svg += "  <line class=\"axis\" x1=\"" + fmt(plot_x0) + "\" y1=\"" + fmt(plot_y0) + "\" x2=\"" + fmt(plot_x1) +
         "\" y2=\"" + fmt(plot_y0) + "\" stroke=\"black\"/>\n";
  svg += "  <line class=\"axis\" x1=\"" + fmt(plot_x0) + "\" y1=\"" + fmt(plot_y0) + "\" x2=\"" + fmt(plot_x0) +
         "\" y2=\"" + fmt(plot_y1) + "\" stroke=\"black\"/>\n";
  svg += "  <text x=\"" + fmt((plot_x0 + plot_x1) / 2) + "\" y=\"" + fmt(kPlotHeight - 15.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">slice index</text>\n";
  svg += "  <text x=\"20\" y=\"" + fmt((plot_y0 + plot_y1) / 2) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\" transform=\"rotate(-90 20 " + fmt((plot_y0 + plot_y1) / 2) + ")\">entropy (nats)</text>\n";
  svg += "  <text x=\"" + fmt(plot_x0) + "\" y=\"" + fmt(plot_y0 + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + std::to_string(*imin) + "</text>\n";
  svg += "  <text x=\"" + fmt(plot_x1) + "\" y=\"" + fmt(plot_y0 + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + std::to_string(*imax) + "</text>\n";
  svg += "  <text x=\"" + fmt(plot_x0 - 6) + "\" y=\"" + fmt(plot_y0) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt(ys.lo) + "</text>\n";
  svg += "  <text x=\"" + fmt(plot_x0 - 6) + "\" y=\"" + fmt(plot_y1 + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt(ys.hi) + "</text>\n";

  if (plan) {
    const std::set<int> distinct(plan->selected.begin(), plan->selected.end());
    for (int s : distinct) {
      const double x = xs.map(s);
      svg += "  <line class=\"marker\" x1=\"" + fmt(x) + "\" y1=\"" + fmt(plot_y0) + "\" x2=\"" + fmt(x) + "\" y2=\"" +
             fmt(plot_y1) + "\" stroke=\"#d62728\" stroke-dasharray=\"4 3\"/>\n";
    }
  }

  svg += polyline("raw", "#1f77b4", table.slice_indices, table.entropy, ys);
  if (table.smoothed) svg += polyline("smoothed", "#ff7f0e", table.slice_indices, *table.smoothed, ys);

  if (plan && !plan->cdf.empty()) {
    svg += polyline("cdf", "#2ca02c", plan->weight_slices, plan->cdf, cdf_axis);
    svg += "  <line class=\"axis\" x1=\"" + fmt(plot_x1) + "\" y1=\"" + fmt(plot_y0) + "\" x2=\"" + fmt(plot_x1) +
           "\" y2=\"" + fmt(plot_y1) + "\" stroke=\"#2ca02c\"/>\n";
    svg += "  <text x=\"" + fmt(plot_x1 + 30) + "\" y=\"" + fmt((plot_y0 + plot_y1) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" fill=\"#2ca02c\" transform=\"rotate(90 " +
           fmt(plot_x1 + 30) + " " + fmt((plot_y0 + plot_y1) / 2) + ")\">CDF</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace glcmsample
