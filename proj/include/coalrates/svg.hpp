#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace coalrates {

// Minimal self-contained SVG line chart: inline styling only, no external
// references, so the output is diffable and viewer-independent.
class SvgChart {
 public:
  SvgChart(std::string title, std::string x_label, std::string y_label)
      : title_(std::move(title)),
        x_label_(std::move(x_label)),
        y_label_(std::move(y_label)) {}

  void add_series(std::string name, std::vector<double> x,
                  std::vector<double> y, std::string color,
                  bool dotted = false) {
    series_.push_back({std::move(name), std::move(x), std::move(y),
                       std::move(color), dotted});
  }

  std::string render() const {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series_)
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        ymin = std::min(ymin, s.y[i]);
        ymax = std::max(ymax, s.y[i]);
      }
    if (!(xmin < xmax)) { xmin = 0; xmax = 1; }
    if (!(ymin < ymax)) { ymin = 0; ymax = 1; }

    std::ostringstream out;
    out.precision(6);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
        << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << " " << kH
        << "\">\n";
    out << "<rect width=\"" << kW << "\" height=\"" << kH
        << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title_
        << "</text>\n";
    // axes
    out << "<line x1=\"" << kML << "\" y1=\"" << kH - kMB << "\" x2=\""
        << kW - kMR << "\" y2=\"" << kH - kMB
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << kML << "\" y1=\"" << kMT << "\" x2=\"" << kML
        << "\" y2=\"" << kH - kMB
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    // ticks
    for (int i = 0; i <= 5; ++i) {
      double fx = xmin + (xmax - xmin) * i / 5.0;
      double px = sx(i / 5.0);
      out << "<line x1=\"" << px << "\" y1=\"" << kH - kMB << "\" x2=\"" << px
          << "\" y2=\"" << kH - kMB + 5
          << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
      out << "<text x=\"" << px << "\" y=\"" << kH - kMB + 18
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"11\">"
          << fx << "</text>\n";
      double fy = ymin + (ymax - ymin) * i / 5.0;
      double py = sy(i / 5.0);
      out << "<line x1=\"" << kML - 5 << "\" y1=\"" << py << "\" x2=\"" << kML
          << "\" y2=\"" << py << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
      out << "<text x=\"" << kML - 8 << "\" y=\"" << py + 4
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
             "font-size=\"11\">"
          << fy << "</text>\n";
    }
    out << "<text x=\"" << (kML + kW - kMR) / 2 << "\" y=\"" << kH - 8
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\">"
        << x_label_ << "</text>\n";
    out << "<text x=\"16\" y=\"" << (kMT + kH - kMB) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\" transform=\"rotate(-90 16 "
        << (kMT + kH - kMB) / 2 << ")\">" << y_label_ << "</text>\n";
    // series
    for (const auto& s : series_) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color
          << "\" stroke-width=\"1.5\"";
      if (s.dotted) out << " stroke-dasharray=\"3,4\"";
      out << " points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        out << sx((s.x[i] - xmin) / (xmax - xmin)) << ","
            << sy((s.y[i] - ymin) / (ymax - ymin)) << " ";
      }
      out << "\"/>\n";
    }
    // legend
    int ly = kMT + 10;
    for (const auto& s : series_) {
      out << "<line x1=\"" << kML + 12 << "\" y1=\"" << ly << "\" x2=\""
          << kML + 42 << "\" y2=\"" << ly << "\" stroke=\"" << s.color
          << "\" stroke-width=\"1.5\""
          << (s.dotted ? " stroke-dasharray=\"3,4\"" : "") << "/>\n";
      out << "<text x=\"" << kML + 48 << "\" y=\"" << ly + 4
          << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.name
          << "</text>\n";
      ly += 18;
    }
    out << "</svg>\n";
    return out.str();
  }

 private:
  struct Series {
    std::string name;
    std::vector<double> x, y;
    std::string color;
    bool dotted;
  };

  static constexpr int kW = 720, kH = 480;
  static constexpr int kML = 64, kMR = 24, kMT = 40, kMB = 52;
  static double sx(double f) { return kML + f * (kW - kML - kMR); }
  static double sy(double f) { return (kH - kMB) - f * (kH - kMB - kMT); }

  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
};

}  // namespace coalrates
