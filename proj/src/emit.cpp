#include "qsr/emit.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qsr {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string Table::csv() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::runtime_error("csv row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_double(row[i]);
    }
    out << '\n';
  }
  return out.str();
}

namespace {

constexpr double kWidth = 800.0, kHeight = 500.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 55.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Axis {
  bool log = false;
  double lo = 0.0, hi = 1.0;

  bool admits(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
  double map(double v) const { return log ? std::log10(v) : v; }

  void fit(const std::vector<Series>& series, bool use_x) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (const auto& s : series)
      for (double v : (use_x ? s.x : s.y))
        if (admits(v)) {
          lo = std::min(lo, map(v));
          hi = std::max(hi, map(v));
        }
    if (!(lo <= hi)) {
      lo = log ? 0.0 : 0.0;
      hi = lo + 1.0;
    }
    if (hi - lo < 1e-12) {
      const double pad = log ? 0.5 : (std::abs(hi) > 0 ? 0.1 * std::abs(hi) : 0.5);
      lo -= pad;
      hi += pad;
    }
  }

  double label_value(double mapped) const { return log ? std::pow(10.0, mapped) : mapped; }
};

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string fmt_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
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

}  // namespace

std::string svg_plot(const PlotSpec& spec) {
  Axis ax{spec.log_x}, ay{spec.log_y};
  ax.fit(spec.series, true);
  ay.fit(spec.series, false);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (ax.map(v) - ax.lo) / (ax.hi - ax.lo) * plot_w; };
  auto py = [&](double v) { return kTop + plot_h - (ay.map(v) - ay.lo) / (ay.hi - ay.lo) * plot_h; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << escape_xml(spec.title) << "</text>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";

  const int n_ticks = 5;
  for (int i = 0; i < n_ticks; ++i) {
    const double f = static_cast<double>(i) / (n_ticks - 1);
    const double xm = ax.lo + f * (ax.hi - ax.lo);
    const double ym = ay.lo + f * (ay.hi - ay.lo);
    const double xp = kLeft + f * plot_w;
    const double yp = kTop + plot_h - f * plot_h;
    out << "<line x1=\"" << fmt_coord(xp) << "\" y1=\"" << kTop + plot_h << "\" x2=\""
        << fmt_coord(xp) << "\" y2=\"" << kTop + plot_h + 5 << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << fmt_coord(xp) << "\" y=\"" << kTop + plot_h + 18
        << "\" text-anchor=\"middle\">" << fmt_tick(ax.label_value(xm)) << "</text>\n";
    out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << fmt_coord(yp) << "\" x2=\"" << kLeft
        << "\" y2=\"" << fmt_coord(yp) << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt_coord(yp + 4)
        << "\" text-anchor=\"end\">" << fmt_tick(ay.label_value(ym)) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\">" << escape_xml(spec.x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << kTop + plot_h / 2 << ")\">"
      << escape_xml(spec.y_label) << "</text>\n";

  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const auto& ser = spec.series[s];
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::ostringstream pts;
    for (std::size_t i = 0; i < ser.x.size() && i < ser.y.size(); ++i) {
      if (!ax.admits(ser.x[i]) || !ay.admits(ser.y[i])) continue;
      if (pts.tellp() > 0) pts << ' ';
      pts << fmt_coord(px(ser.x[i])) << ',' << fmt_coord(py(ser.y[i]));
    }
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
        << pts.str() << "\"/>\n";
    const double ly = kTop + 14 + 16.0 * static_cast<double>(s);
    out << "<line x1=\"" << kLeft + plot_w - 130 << "\" y1=\"" << fmt_coord(ly - 4) << "\" x2=\""
        << kLeft + plot_w - 110 << "\" y2=\"" << fmt_coord(ly - 4) << "\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << kLeft + plot_w - 104 << "\" y=\"" << fmt_coord(ly) << "\">"
        << escape_xml(ser.label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace qsr
