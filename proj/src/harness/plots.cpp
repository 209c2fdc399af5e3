#include "cbo/harness/plots.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cbo::harness {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string color(std::size_t i) { return kPalette[i % (sizeof kPalette / sizeof kPalette[0])]; }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

Frame make_frame(double x0, double x1, double y0, double y1) {
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double pad = 0.05 * (y1 - y0);
  return {x0, x1, y0 - pad, y1 + pad};
}

void axes(std::ostringstream& s, const Frame& f, const std::string& title, const std::string& xlabel,
          const std::string& ylabel) {
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  const double bx = f.px(f.x0), by = f.py(f.y0);
  s << "<line x1=\"" << bx << "\" y1=\"" << by << "\" x2=\"" << f.px(f.x1) << "\" y2=\"" << by
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << bx << "\" y1=\"" << by << "\" x2=\"" << bx << "\" y2=\"" << f.py(f.y1)
    << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = f.x0 + (f.x1 - f.x0) * i / 5.0;
    const double yv = f.y0 + (f.y1 - f.y0) * i / 5.0;
    s << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << by + 16 << "\" text-anchor=\"middle\">" << tick(xv)
      << "</text>\n";
    s << "<text x=\"" << bx - 6 << "\" y=\"" << num(f.py(yv) + 4) << "\" text-anchor=\"end\">" << tick(yv)
      << "</text>\n";
  }
  s << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">" << xlabel
    << "</text>\n";
  s << "<text transform=\"translate(16," << kHeight / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << ylabel
    << "</text>\n";
}

std::string polyline(const Frame& f, const std::vector<double>& x, const std::vector<double>& y) {
  std::string pts;
  for (std::size_t i = 0; i < x.size(); ++i) pts += num(f.px(x[i])) + "," + num(f.py(y[i])) + " ";
  return pts;
}

void legend(std::ostringstream& s, const std::vector<std::string>& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double y = kTop + 14.0 * static_cast<double>(i);
    s << "<rect x=\"" << kWidth - 150 << "\" y=\"" << y - 9 << "\" width=\"12\" height=\"10\" fill=\"" << color(i)
      << "\"/>\n";
    s << "<text x=\"" << kWidth - 132 << "\" y=\"" << y << "\">" << labels[i] << "</text>\n";
  }
}

std::filesystem::path save(const std::filesystem::path& path, std::ostringstream& s) {
  s << "</svg>\n";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << s.str();
  return path;
}

}  // namespace

std::vector<std::filesystem::path> emit_plots(const std::vector<AggregateCurve>& curves,
                                              const std::filesystem::path& output, const std::string& title) {
  std::vector<std::filesystem::path> written;
  if (curves.empty()) {
    std::cerr << "warning: no curves to plot\n";
    return written;
  }
  std::filesystem::create_directories(output);

  double x1 = 0.0, y0 = std::numeric_limits<double>::infinity(), y1 = -y0;
  for (const auto& c : curves) {
    if (!c.budget.empty()) x1 = std::max(x1, c.budget.back());
    for (double v : c.p25) y0 = std::min(y0, v);
    for (double v : c.p75) y1 = std::max(y1, v);
  }
  if (!std::isfinite(y0)) y0 = y1 = 0.0;
  {
    const Frame f = make_frame(0.0, x1, y0, y1);
    std::ostringstream s;
    axes(s, f, title.empty() ? "Opportunity cost" : title, "budget spent", "opportunity cost");
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < curves.size(); ++i) {
      const auto& c = curves[i];
      std::vector<double> rx(c.budget.rbegin(), c.budget.rend());
      std::vector<double> ry(c.p25.rbegin(), c.p25.rend());
      s << "<polygon fill=\"" << color(i) << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\""
        << polyline(f, c.budget, c.p75) << polyline(f, rx, ry) << "\"/>\n";
      s << "<polyline fill=\"none\" stroke=\"" << color(i) << "\" stroke-width=\"2\" points=\""
        << polyline(f, c.budget, c.median) << "\"/>\n";
      labels.push_back(c.label);
    }
    legend(s, labels);
    written.push_back(save(output / "oc.svg", s));
  }

  for (const auto& c : curves) {
    double top = 0.0;
    for (const auto& series : c.cumulative) {
      for (double v : series) top = std::max(top, v);
    }
    const Frame f = make_frame(0.0, c.budget.empty() ? 1.0 : c.budget.back(), 0.0, top);
    std::ostringstream s;
    axes(s, f, "Cumulative evaluations: " + c.label, "budget spent", "evaluations");
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < c.cumulative.size(); ++k) {
      s << "<polyline fill=\"none\" stroke=\"" << color(k) << "\" stroke-width=\"2\" points=\""
        << polyline(f, c.budget, c.cumulative[k]) << "\"/>\n";
      labels.push_back(k == 0 ? std::string("objective") : "constraint " + std::to_string(k));
    }
    legend(s, labels);
    written.push_back(save(output / ("evaluations_" + c.label + ".svg"), s));
  }
  return written;
}

}  // namespace cbo::harness
