// Copyright 2026 The fresure Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fresure/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "fresure/error.hpp"

namespace fresure {
namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;

  double map(double v) const {
    const double a = log ? std::log10(lo) : lo;
    const double b = log ? std::log10(hi) : hi;
    const double x = log ? std::log10(v) : v;
    return (x - a) / (b - a);
  }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      for (double d = std::floor(std::log10(lo)); d <= std::ceil(std::log10(hi)); d += 1.0) {
        const double t = std::pow(10.0, d);
        if (t >= lo * (1 - 1e-12) && t <= hi * (1 + 1e-12)) {
          out.push_back(t);
        }
      }
      return out;
    }
    const double raw = (hi - lo) / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
      if (raw <= m * mag) {
        step = m * mag;
        break;
      }
    }
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
      out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    }
    return out;
  }
};

bool usable(double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); }

Axis fit_axis(const std::vector<double>& values, bool log) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : values) {
    if (usable(v, log)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(lo <= hi)) {
    lo = log ? 1.0 : 0.0;
    hi = log ? 10.0 : 1.0;
  }
  if (hi == lo) {
    const double pad = log ? 0.0 : (lo == 0.0 ? 1.0 : 0.1 * std::abs(lo));
    lo = log ? lo / 2.0 : lo - pad;
    hi = log ? hi * 2.0 : hi + pad;
  } else if (!log) {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  return {lo, hi, log};
}

}  // namespace

std::string render_svg(const Plot& plot) {
  const double left = 80, right = 170, top = 40, bottom = 60;
  const double pw = plot.width - left - right;
  const double ph = plot.height - top - bottom;

  std::vector<double> xs, ys;
  for (const auto& s : plot.series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (plot.x_range && (s.x[i] < plot.x_range->first || s.x[i] > plot.x_range->second)) {
        continue;
      }
      xs.push_back(s.x[i]);
      ys.push_back(s.y[i]);
    }
  }
  for (const auto& h : plot.hlines) {
    ys.push_back(h.y);
  }
  Axis ax = fit_axis(xs, plot.log_x);
  if (plot.x_range) {
    ax.lo = plot.x_range->first;
    ax.hi = plot.x_range->second;
  }
  const Axis ay = fit_axis(ys, plot.log_y);
  auto px = [&](double v) { return left + ax.map(v) * pw; };
  auto py = [&](double v) { return top + (1.0 - ay.map(v)) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width << "\" height=\""
     << plot.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
     << escape(plot.title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : ax.ticks()) {
    const double x = px(t);
    os << "<line x1=\"" << x << "\" y1=\"" << top + ph << "\" x2=\"" << x << "\" y2=\""
       << top + ph + 5 << "\" stroke=\"black\"/>";
    os << "<text x=\"" << x << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
       << num(t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double y = py(t);
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y
       << "\" stroke=\"black\"/>";
    os << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << num(t)
       << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << plot.height - 15
     << "\" text-anchor=\"middle\">" << escape(plot.x_label) << "</text>\n";
  os << "<text transform=\"translate(18," << top + ph / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(plot.y_label) << "</text>\n";

  os << "<clipPath id=\"plot\"><rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw
     << "\" height=\"" << ph << "\"/></clipPath>\n";
  std::size_t legend_row = 0;
  auto legend = [&](const std::string& label, const char* color, const char* dash) {
    const double y = top + 10 + 18 * static_cast<double>(legend_row++);
    os << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << y << "\" x2=\"" << left + pw + 35
       << "\" y2=\"" << y << "\" stroke=\"" << color << "\" stroke-width=\"2\"" << dash << "/>";
    os << "<text x=\"" << left + pw + 40 << "\" y=\"" << y + 4 << "\">" << escape(label)
       << "</text>\n";
  };

  for (std::size_t si = 0; si < plot.series.size(); ++si) {
    const auto& s = plot.series[si];
    const char* color = kPalette[si % std::size(kPalette)];
    const char* dash = s.dashed ? " stroke-dasharray=\"6,4\"" : "";
    os << "<polyline clip-path=\"url(#plot)\" fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\"" << dash << " points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (usable(s.x[i], plot.log_x) && usable(s.y[i], plot.log_y)) {
        os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
      }
    }
    os << "\"/>\n";
    if (s.markers) {
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (usable(s.x[i], plot.log_x) && usable(s.y[i], plot.log_y)) {
          os << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"3\" fill=\""
             << color << "\"/>";
        }
      }
      os << '\n';
    }
    legend(s.label, color, dash);
  }
  for (const auto& h : plot.hlines) {
    const double y = py(h.y);
    os << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + pw << "\" y2=\"" << y
       << "\" stroke=\"gray\" stroke-dasharray=\"2,3\"/>\n";
    legend(h.label, "gray", " stroke-dasharray=\"2,3\"");
  }
  os << "</svg>\n";
  return os.str();
}

void write_svg(const std::filesystem::path& path, const Plot& plot) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << render_svg(plot);
  out.flush();
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

}  // namespace fresure
