#include "dem/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dem::plot {

namespace {

constexpr int kW = 760;
constexpr int kH = 520;
constexpr int kMargin = 64;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void pad() {
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
    } else {
      const double d = 0.05 * (hi - lo);
      lo -= d;
      hi += d;
    }
  }
  double at(double v) const { return (v - lo) / (hi - lo); }
};

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(4);
  ss << v;
  return ss.str();
}

std::ofstream open_svg(const std::string& path, int w, int h) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w
      << "' height='" << h << "' viewBox='0 0 " << w << ' ' << h << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n";
  return out;
}

void axes(std::ofstream& out, const std::string& title,
          const std::string& xlabel, const std::string& ylabel,
          const Range& rx, const Range& ry) {
  out << "<rect x='" << kMargin << "' y='" << kMargin << "' width='"
      << kW - 2 * kMargin << "' height='" << kH - 2 * kMargin
      << "' fill='none' stroke='#444'/>\n";
  out << "<text x='" << kW / 2 << "' y='28' text-anchor='middle' "
      << "font-family='sans-serif' font-size='16'>" << title << "</text>\n";
  out << "<text x='" << kW / 2 << "' y='" << kH - 12
      << "' text-anchor='middle' font-family='sans-serif' font-size='12'>"
      << xlabel << "</text>\n";
  out << "<text x='16' y='" << kH / 2
      << "' text-anchor='middle' font-family='sans-serif' font-size='12' "
      << "transform='rotate(-90 16 " << kH / 2 << ")'>" << ylabel
      << "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double t = i / 4.0;
    const double px = kMargin + t * (kW - 2 * kMargin);
    const double py = kH - kMargin - t * (kH - 2 * kMargin);
    out << "<text x='" << px << "' y='" << kH - kMargin + 16
        << "' text-anchor='middle' font-family='sans-serif' font-size='10'>"
        << fmt(rx.lo + t * (rx.hi - rx.lo)) << "</text>\n";
    out << "<text x='" << kMargin - 6 << "' y='" << py + 3
        << "' text-anchor='end' font-family='sans-serif' font-size='10'>"
        << fmt(ry.lo + t * (ry.hi - ry.lo)) << "</text>\n";
  }
}

double px_of(const Range& r, double v) {
  return kMargin + r.at(v) * (kW - 2 * kMargin);
}
double py_of(const Range& r, double v) {
  return kH - kMargin - r.at(v) * (kH - 2 * kMargin);
}

// Compact blue-white-red map for signed fields.
std::string colormap(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const auto lerp = [](double a, double b, double s) { return a + (b - a) * s; };
  double r, g, b;
  if (t < 0.5) {
    const double s = t / 0.5;
    r = lerp(33, 245, s);
    g = lerp(65, 245, s);
    b = lerp(154, 245, s);
  } else {
    const double s = (t - 0.5) / 0.5;
    r = lerp(245, 178, s);
    g = lerp(245, 24, s);
    b = lerp(245, 43, s);
  }
  std::ostringstream ss;
  ss << "rgb(" << static_cast<int>(r) << ',' << static_cast<int>(g) << ','
     << static_cast<int>(b) << ')';
  return ss.str();
}

}  // namespace

void line_chart(const std::string& path, const std::string& title,
                const std::string& xlabel, const std::string& ylabel,
                const std::vector<Series>& series) {
  Range rx, ry;
  for (const auto& s : series) {
    for (double v : s.x) rx.add(v);
    for (double v : s.y) ry.add(v);
  }
  rx.pad();
  ry.pad();
  auto out = open_svg(path, kW, kH);
  axes(out, title, xlabel, ylabel, rx, ry);
  int ci = 0;
  for (const auto& s : series) {
    const char* color = kPalette[ci % 8];
    out << "<polyline fill='none' stroke='" << color
        << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      out << px_of(rx, s.x[i]) << ',' << py_of(ry, s.y[i]) << ' ';
    out << "'/>\n";
    out << "<text x='" << kW - kMargin - 8 << "' y='"
        << kMargin + 16 + 16 * ci << "' text-anchor='end' "
        << "font-family='sans-serif' font-size='12' fill='" << color << "'>"
        << s.label << "</text>\n";
    ++ci;
  }
  out << "</svg>\n";
}

void field_map(const std::string& path, const std::string& title,
               const Eigen::MatrixXd& pts, const Eigen::VectorXd& weights,
               const Eigen::VectorXd& values) {
  Range rx, ry, rv;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    rx.add(pts(i, 0));
    ry.add(pts(i, 1));
    rv.add(values[i]);
  }
  rx.pad();
  ry.pad();
  if (!(rv.hi > rv.lo)) {
    rv.lo -= 1.0;
    rv.hi += 1.0;
  }
  auto out = open_svg(path, kW, kH);
  axes(out, title, "x1", "x2", rx, ry);
  const double span_x = rx.hi - rx.lo;
  const double span_y = ry.hi - ry.lo;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    // Cell side from the node weight (area measure).
    const double side = std::sqrt(std::max(weights[i], 0.0));
    const double wpx =
        std::max(1.5, side / span_x * (kW - 2 * kMargin) * 1.05);
    const double hpx =
        std::max(1.5, side / span_y * (kH - 2 * kMargin) * 1.05);
    const double cx = px_of(rx, pts(i, 0));
    const double cy = py_of(ry, pts(i, 1));
    out << "<rect x='" << cx - wpx / 2 << "' y='" << cy - hpx / 2
        << "' width='" << wpx << "' height='" << hpx << "' fill='"
        << colormap(rv.at(values[i])) << "'/>\n";
  }
  // Color bar.
  for (int i = 0; i < 100; ++i) {
    const double y0 = kH - kMargin - (i + 1) / 100.0 * (kH - 2 * kMargin);
    out << "<rect x='" << kW - kMargin + 10 << "' y='" << y0
        << "' width='12' height='" << (kH - 2.0 * kMargin) / 100.0 + 0.5
        << "' fill='" << colormap((i + 0.5) / 100.0) << "'/>\n";
  }
  out << "<text x='" << kW - kMargin + 26 << "' y='" << kH - kMargin
      << "' font-family='sans-serif' font-size='10'>" << fmt(rv.lo)
      << "</text>\n";
  out << "<text x='" << kW - kMargin + 26 << "' y='" << kMargin + 8
      << "' font-family='sans-serif' font-size='10'>" << fmt(rv.hi)
      << "</text>\n";
  out << "</svg>\n";
}

void band_chart(const std::string& path, const std::string& title,
                const std::string& xlabel, const std::vector<Band>& bands) {
  Range rx, ry;
  for (const auto& b : bands)
    for (std::size_t i = 0; i < b.x.size(); ++i) {
      rx.add(b.x[i]);
      ry.add(b.mean[i] - b.stdev[i]);
      ry.add(b.mean[i] + b.stdev[i]);
    }
  rx.pad();
  ry.pad();
  auto out = open_svg(path, kW, kH);
  axes(out, title, xlabel, "mean +- std", rx, ry);
  int ci = 0;
  for (const auto& b : bands) {
    const char* color = kPalette[ci % 8];
    out << "<polygon fill='" << color << "' fill-opacity='0.18' stroke='none' points='";
    for (std::size_t i = 0; i < b.x.size(); ++i)
      out << px_of(rx, b.x[i]) << ',' << py_of(ry, b.mean[i] + b.stdev[i])
          << ' ';
    for (std::size_t i = b.x.size(); i-- > 0;)
      out << px_of(rx, b.x[i]) << ',' << py_of(ry, b.mean[i] - b.stdev[i])
          << ' ';
    out << "'/>\n<polyline fill='none' stroke='" << color
        << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < b.x.size(); ++i)
      out << px_of(rx, b.x[i]) << ',' << py_of(ry, b.mean[i]) << ' ';
    out << "'/>\n";
    out << "<text x='" << kW - kMargin - 8 << "' y='"
        << kMargin + 16 + 16 * ci << "' text-anchor='end' "
        << "font-family='sans-serif' font-size='12' fill='" << color << "'>"
        << b.label << "</text>\n";
    ++ci;
  }
  out << "</svg>\n";
}

}  // namespace dem::plot
