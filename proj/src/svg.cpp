#include "bem_annulus/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace bem::svg {

namespace {

std::string rgb(double t) {
  // Blue -> white -> red diverging ramp.
  t = std::clamp(t, 0.0, 1.0);
  int r, g, b;
  if (t < 0.5) {
    const double s = t / 0.5;
    r = static_cast<int>(std::lround(59 + s * (247 - 59)));
    g = static_cast<int>(std::lround(76 + s * (247 - 76)));
    b = static_cast<int>(std::lround(192 + s * (247 - 192)));
  } else {
    const double s = (t - 0.5) / 0.5;
    r = static_cast<int>(std::lround(247 + s * (180 - 247)));
    g = static_cast<int>(std::lround(247 + s * (4 - 247)));
    b = static_cast<int>(std::lround(247 + s * (38 - 247)));
  }
  std::array<char, 8> buf{};
  std::snprintf(buf.data(), buf.size(), "#%02x%02x%02x", r, g, b);
  return buf.data();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string heatmap(const FieldGrid& grid, const std::string& title) {
  const std::size_t nx = grid.spec.nx;
  const std::size_t ny = grid.spec.ny;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : grid.samples) {
    if (!s.value) continue;
    lo = std::min(lo, *s.value);
    hi = std::max(hi, *s.value);
  }
  const double span = hi > lo ? hi - lo : 1.0;

  constexpr double kPlot = 480.0;
  constexpr double kMargin = 40.0;
  const double cw = kPlot / static_cast<double>(nx);
  const double ch = kPlot / static_cast<double>(ny);
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kPlot + 2 * kMargin + 80
      << "\" height=\"" << kPlot + 2 * kMargin << "\">\n";
  out << "<text x=\"" << kMargin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">"
      << escape(title) << "</text>\n";
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const auto& s = grid.at(ix, iy);
      const double x = kMargin + cw * static_cast<double>(ix);
      const double y = kMargin + ch * static_cast<double>(ny - 1 - iy);
      const std::string fill = s.value ? rgb((*s.value - lo) / span) : "#dddddd";
      out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw << "\" height=\"" << ch
          << "\" fill=\"" << fill << "\"/>\n";
    }
  }
  // Colour bar.
  const double bx = kMargin + kPlot + 20;
  for (int i = 0; i < 50; ++i) {
    const double t = i / 49.0;
    out << "<rect x=\"" << bx << "\" y=\"" << kMargin + kPlot * (1.0 - t) - kPlot / 50 << "\" width=\"16\" height=\""
        << kPlot / 50 + 0.5 << "\" fill=\"" << rgb(t) << "\"/>\n";
  }
  out << "<text x=\"" << bx << "\" y=\"" << kMargin - 6 << "\" font-family=\"sans-serif\" font-size=\"10\">"
      << hi << "</text>\n";
  out << "<text x=\"" << bx << "\" y=\"" << kMargin + kPlot + 14
      << "\" font-family=\"sans-serif\" font-size=\"10\">" << lo << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string loglog_plot(const std::vector<Series>& series, const std::string& title,
                        const std::string& x_label, const std::string& y_label) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (s.x[i] <= 0 || s.y[i] <= 0) continue;
      x_lo = std::min(x_lo, std::log10(s.x[i]));
      x_hi = std::max(x_hi, std::log10(s.x[i]));
      y_lo = std::min(y_lo, std::log10(s.y[i]));
      y_hi = std::max(y_hi, std::log10(s.y[i]));
    }
  }
  if (!(x_hi > x_lo)) { x_lo -= 0.5; x_hi += 0.5; }
  if (!(y_hi > y_lo)) { y_lo -= 0.5; y_hi += 0.5; }

  constexpr double kW = 520.0, kH = 360.0, kLeft = 70.0, kTop = 40.0;
  const auto px = [&](double v) { return kLeft + (std::log10(v) - x_lo) / (x_hi - x_lo) * kW; };
  const auto py = [&](double v) { return kTop + (1.0 - (std::log10(v) - y_lo) / (y_hi - y_lo)) * kH; };
  const std::array<const char*, 4> colors = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW + kLeft + 140 << "\" height=\""
      << kH + kTop + 60 << "\">\n";
  out << "<text x=\"" << kLeft << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << escape(title)
      << "</text>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kW << "\" height=\"" << kH
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(std::ceil(y_lo)); d <= static_cast<int>(std::floor(y_hi)); ++d) {
    const double y = py(std::pow(10.0, d));
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">1e" << d << "</text>\n";
  }
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = colors[si % colors.size()];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (s.x[i] <= 0 || s.y[i] <= 0) continue;
      out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    out << "\"/>\n";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (s.x[i] <= 0 || s.y[i] <= 0) continue;
      out << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"3\" fill=\"" << color
          << "\"/>\n";
      out << "<text x=\"" << px(s.x[i]) << "\" y=\"" << kTop + kH + 16
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << s.x[i] << "</text>\n";
    }
    out << "<text x=\"" << kLeft + kW + 10 << "\" y=\"" << kTop + 16 + 16 * static_cast<double>(si)
        << "\" fill=\"" << color << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s.label)
        << "</text>\n";
  }
  out << "<text x=\"" << kLeft + kW / 2 << "\" y=\"" << kTop + kH + 40
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(x_label)
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << kTop + kH / 2 << "\" transform=\"rotate(-90 16," << kTop + kH / 2
      << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(y_label)
      << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace bem::svg
