#include "roadlpp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

namespace roadlpp::svg {

namespace {

const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
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

struct AxisMap {
  double lo = 0, hi = 1;
  bool log = false;
  double pix_lo = 0, pix_hi = 1;

  double operator()(double v) const {
    const double t = log ? std::log(v) : v;
    const double a = log ? std::log(lo) : lo;
    const double b = log ? std::log(hi) : hi;
    const double frac = b > a ? (t - a) / (b - a) : 0.5;
    return pix_lo + frac * (pix_hi - pix_lo);
  }
};

std::vector<double> axis_ticks(double lo, double hi, bool log_scale) {
  std::vector<double> ticks;
  if (log_scale) {
    const int e0 = static_cast<int>(std::floor(std::log10(lo)));
    const int e1 = static_cast<int>(std::ceil(std::log10(hi)));
    for (int e = e0; e <= e1; ++e) {
      const double t = std::pow(10.0, e);
      if (t >= lo * 0.999 && t <= hi * 1.001) ticks.push_back(t);
    }
    if (ticks.size() < 2) ticks = {lo, hi};
    return ticks;
  }
  const double span = hi - lo;
  if (span <= 0) return {lo};
  const double raw = span / 5;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step)
    ticks.push_back(t);
  return ticks;
}

}  // namespace

PlotResult plot_svg(std::span<const Series> series, const PlotStyle& style) {
  if (series.empty()) throw DomainError("plot_svg: no series");
  PlotResult result;

  // collect drawable points, dropping nonpositive values under log axes
  struct Drawable {
    std::vector<double> x, y, lo, hi;
    std::string label;
  };
  std::vector<Drawable> drawables;
  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const Series& s : series) {
    if (s.x.size() != s.y.size()) throw DomainError("plot_svg: x/y length mismatch");
    const bool banded = !s.band_low.empty();
    if (banded && (s.band_low.size() != s.x.size() || s.band_high.size() != s.x.size()))
      throw DomainError("plot_svg: band length mismatch");
    Drawable d;
    d.label = s.label;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const bool bad_x = style.log_x && !(s.x[i] > 0);
      const bool bad_y = style.log_y && !(s.y[i] > 0);
      if (bad_x || bad_y) {
        ++result.dropped_points;
        continue;
      }
      d.x.push_back(s.x[i]);
      d.y.push_back(s.y[i]);
      if (banded) {
        double lo = s.band_low[i], hi = s.band_high[i];
        if (style.log_y) lo = std::max(lo, s.y[i] * 1e-3);  // clamp band floor under log
        d.lo.push_back(lo);
        d.hi.push_back(hi);
        y_min = std::min(y_min, style.log_y && !(lo > 0) ? s.y[i] : lo);
        y_max = std::max(y_max, hi);
      }
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, s.y[i]);
      y_max = std::max(y_max, s.y[i]);
    }
    if (!d.x.empty()) drawables.push_back(std::move(d));
  }
  if (drawables.empty()) throw DomainError("plot_svg: no drawable points");
  if (x_min == x_max) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  if (y_min == y_max) {
    y_min = style.log_y ? y_min * 0.5 : y_min - 0.5;
    y_max = style.log_y ? y_max * 2.0 : y_max + 0.5;
  }

  const double ml = 64, mr = 16, mt = style.title.empty() ? 16 : 36, mb = 48;
  AxisMap xm{x_min, x_max, style.log_x, ml, style.width - mr};
  AxisMap ym{y_min, y_max, style.log_y, static_cast<double>(style.height) - mb, mt};

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\""
      << style.height << "\" viewBox=\"0 0 " << style.width << ' ' << style.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!style.title.empty())
    out << "<text x=\"" << style.width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << escape_xml(style.title)
        << "</text>\n";

  // axes and ticks
  out << "<g stroke=\"#333\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << style.height - mb << "\" x2=\"" << style.width - mr
      << "\" y2=\"" << style.height - mb << "\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << style.height - mb << "\"/>\n</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (double t : axis_ticks(x_min, x_max, style.log_x)) {
    const double px = xm(t);
    out << "<line x1=\"" << fmt(px) << "\" y1=\"" << style.height - mb << "\" x2=\"" << fmt(px)
        << "\" y2=\"" << style.height - mb + 4 << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << fmt(px) << "\" y=\"" << style.height - mb + 16
        << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
  }
  for (double t : axis_ticks(y_min, y_max, style.log_y)) {
    const double py = ym(t);
    out << "<line x1=\"" << ml - 4 << "\" y1=\"" << fmt(py) << "\" x2=\"" << ml << "\" y2=\""
        << fmt(py) << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << fmt(py + 4) << "\" text-anchor=\"end\">" << fmt(t)
        << "</text>\n";
  }
  if (!style.x_label.empty())
    out << "<text x=\"" << (ml + style.width - mr) / 2 << "\" y=\"" << style.height - 10
        << "\" text-anchor=\"middle\">" << escape_xml(style.x_label) << "</text>\n";
  if (!style.y_label.empty())
    out << "<text x=\"14\" y=\"" << (mt + style.height - mb) / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
        << (mt + style.height - mb) / 2 << ")\">" << escape_xml(style.y_label) << "</text>\n";
  out << "</g>\n";

  for (std::size_t si = 0; si < drawables.size(); ++si) {
    const Drawable& d = drawables[si];
    const char* color = kSeriesColors[si % (sizeof kSeriesColors / sizeof *kSeriesColors)];
    if (!d.lo.empty()) {
      out << "<path class=\"band\" fill=\"" << color << "\" fill-opacity=\"0.18\" stroke=\"none\" d=\"";
      for (std::size_t i = 0; i < d.x.size(); ++i)
        out << (i == 0 ? 'M' : 'L') << fmt(xm(d.x[i])) << ' ' << fmt(ym(d.hi[i]));
      for (std::size_t i = d.x.size(); i-- > 0;)
        out << 'L' << fmt(xm(d.x[i])) << ' ' << fmt(ym(d.lo[i]));
      out << "Z\"/>\n";
    }
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
    for (std::size_t i = 0; i < d.x.size(); ++i) {
      if (i) out << ' ';
      out << fmt(xm(d.x[i])) << ',' << fmt(ym(d.y[i]));
    }
    out << "\"/>\n";
    if (!d.label.empty())
      out << "<text x=\"" << style.width - mr - 6 << "\" y=\"" << mt + 16 + 16 * static_cast<int>(si)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color
          << "\">" << escape_xml(d.label) << "</text>\n";
  }
  out << "</svg>\n";
  result.svg = out.str();
  return result;
}

std::string geodesic_figure(std::span<const lpp::GeodesicPath> paths,
                            const GeodesicFigureStyle& style) {
  if (paths.empty()) throw DomainError("geodesic_figure: no paths");
  // count how many paths use each unit step, keyed by its lower endpoint and
  // direction (0 = right, 1 = up)
  std::map<std::pair<std::pair<Coord, Coord>, int>, int> usage;
  Coord psi_min = std::numeric_limits<Coord>::max(), psi_max = std::numeric_limits<Coord>::min();
  Coord phi_min = psi_min, phi_max = psi_max;
  for (const lpp::GeodesicPath& p : paths) {
    for (std::size_t i = 0; i + 1 < p.points.size(); ++i) {
      const Point a = p.points[i];
      const int dir = p.points[i + 1].x > a.x ? 0 : 1;
      ++usage[{{a.x, a.y}, dir}];
    }
    for (const Point& v : p.points) {
      psi_min = std::min(psi_min, psi_of(v));
      psi_max = std::max(psi_max, psi_of(v));
      phi_min = std::min(phi_min, phi_of(v));
      phi_max = std::max(phi_max, phi_of(v));
    }
  }
  const double sx = static_cast<double>(style.width - 20) /
                    std::max<double>(1.0, static_cast<double>(psi_max - psi_min));
  const double sy = static_cast<double>(style.height - 20) /
                    std::max<double>(1.0, static_cast<double>(phi_max - phi_min));
  auto px = [&](Point v) { return 10 + sx * static_cast<double>(psi_of(v) - psi_min); };
  auto py = [&](Point v) {
    return style.height - 10 - sy * static_cast<double>(phi_of(v) - phi_min);
  };

  int max_usage = 1;
  for (const auto& [key, count] : usage) max_usage = std::max(max_usage, count);
  const double log_max = std::log1p(static_cast<double>(max_usage));

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\""
      << style.height << "\" viewBox=\"0 0 " << style.width << ' ' << style.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"#0b0b16\"/>\n";
  for (const auto& [key, count] : usage) {
    const Point a{key.first.first, key.first.second};
    const Point b = key.second == 0 ? Point{a.x + 1, a.y} : Point{a.x, a.y + 1};
    const double w = style.stroke_scale * std::log1p(static_cast<double>(count));
    const double heat = std::log1p(static_cast<double>(count)) / log_max;  // 0..1
    const int r = static_cast<int>(60 + 195 * heat);
    const int g = static_cast<int>(60 + 160 * heat);
    const int bl = static_cast<int>(110 + 40 * heat);
    out << "<line x1=\"" << fmt(px(a)) << "\" y1=\"" << fmt(py(a)) << "\" x2=\"" << fmt(px(b))
        << "\" y2=\"" << fmt(py(b)) << "\" stroke=\"rgb(" << r << ',' << g << ',' << bl
        << ")\" stroke-width=\"" << fmt(std::max(0.35, w)) << "\" stroke-linecap=\"round\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace roadlpp::svg
