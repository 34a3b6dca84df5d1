#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "mlsb/geometry.hpp"
#include "mlsb/linalg.hpp"

namespace mlsb::svg {

// Fixed-point formatting keeps the output byte-stable.
inline std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s(buf);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

struct Box {
  double x0, y0, x1, y1;
};

inline Box table_box(const BilliardTable& t) {
  Box b{1e300, 1e300, -1e300, -1e300};
  for (int k = 0; k < t.size(); ++k) {
    b.x1 = std::max(b.x1, t[k].support(1, 0));
    b.x0 = std::min(b.x0, -t[k].support(-1, 0));
    b.y1 = std::max(b.y1, t[k].support(0, 1));
    b.y0 = std::min(b.y0, -t[k].support(0, -1));
  }
  double pad = 0.05 * std::max(b.x1 - b.x0, b.y1 - b.y0);
  return {b.x0 - pad, b.y0 - pad, b.x1 + pad, b.y1 + pad};
}

// Table outlines with optional closed orbit polygons (vertices in world coordinates).
inline std::string table_figure(const BilliardTable& t, const std::vector<std::vector<Vec2<double>>>& orbits = {},
                                int samples = 256) {
  Box b = table_box(t);
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + num(b.x0) + " " + num(-b.y1) + " " +
         num(b.x1 - b.x0) + " " + num(b.y1 - b.y0) + "\" width=\"600\" height=\"" +
         num(600.0 * (b.y1 - b.y0) / (b.x1 - b.x0)) + "\">\n";
  double sw = 0.004 * (b.x1 - b.x0);
  for (int k = 0; k < t.size(); ++k) {
    std::string d;
    double tw = 2 * M_PI;
    for (int i = 0; i < samples; ++i) {
      Vec2<double> p = t[k].point_t(tw * i / samples);
      d += (i ? " L" : "M") + num(p.x) + " " + num(-p.y);
    }
    d += " Z";
    out += "<path class=\"obstacle\" id=\"o" + std::to_string(k + 1) + "\" d=\"" + d +
           "\" fill=\"#d8d8d8\" stroke=\"#222\" stroke-width=\"" + num(sw) + "\"/>\n";
  }
  for (const auto& poly : orbits) {
    std::string pts;
    for (std::size_t i = 0; i < poly.size(); ++i) pts += (i ? " " : "") + num(poly[i].x) + "," + num(-poly[i].y);
    out += "<polygon class=\"orbit\" points=\"" + pts + "\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"" +
           num(sw) + "\"/>\n";
    for (const auto& p : poly)
      out += "<circle class=\"bounce\" cx=\"" + num(p.x) + "\" cy=\"" + num(-p.y) + "\" r=\"" + num(2 * sw) +
             "\" fill=\"#c0392b\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

// log10 |D_n| against n, with a fitted slope annotation.
inline std::string deficit_figure(const std::vector<int>& n, const std::vector<double>& log10_abs, double slope) {
  const double W = 600, H = 400, ml = 70, mr = 20, mt = 30, mb = 50;
  double nmin = n.empty() ? 0 : *std::min_element(n.begin(), n.end());
  double nmax = n.empty() ? 1 : *std::max_element(n.begin(), n.end());
  if (nmax == nmin) nmax = nmin + 1;
  double ymin = 0, ymax = 0;
  if (!log10_abs.empty()) {
    ymin = std::floor(*std::min_element(log10_abs.begin(), log10_abs.end()));
    ymax = std::ceil(*std::max_element(log10_abs.begin(), log10_abs.end()));
  }
  if (ymax == ymin) ymax = ymin + 1;
  auto X = [&](double v) { return ml + (W - ml - mr) * (v - nmin) / (nmax - nmin); };
  auto Y = [&](double v) { return mt + (H - mt - mb) * (ymax - v) / (ymax - ymin); };
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 600 400\" width=\"600\" height=\"400\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"600\" height=\"400\" fill=\"white\"/>\n";
  out += "<line class=\"axis\" x1=\"" + num(ml) + "\" y1=\"" + num(H - mb) + "\" x2=\"" + num(W - mr) + "\" y2=\"" +
         num(H - mb) + "\" stroke=\"black\"/>\n";
  out += "<line class=\"axis\" x1=\"" + num(ml) + "\" y1=\"" + num(mt) + "\" x2=\"" + num(ml) + "\" y2=\"" +
         num(H - mb) + "\" stroke=\"black\"/>\n";
  int step = std::max(1, static_cast<int>(std::ceil((ymax - ymin) / 10)));
  for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); e += step) {
    out += "<text class=\"ytick\" x=\"" + num(ml - 6) + "\" y=\"" + num(Y(e) + 4) +
           "\" font-size=\"11\" text-anchor=\"end\">1e" + std::to_string(e) + "</text>\n";
  }
  for (int k = static_cast<int>(nmin); k <= static_cast<int>(nmax); ++k)
    out += "<text class=\"xtick\" x=\"" + num(X(k)) + "\" y=\"" + num(H - mb + 16) +
           "\" font-size=\"11\" text-anchor=\"middle\">" + std::to_string(k) + "</text>\n";
  for (std::size_t i = 0; i < n.size(); ++i)
    out += "<circle class=\"point\" cx=\"" + num(X(n[i])) + "\" cy=\"" + num(Y(log10_abs[i])) +
           "\" r=\"3\" fill=\"#1f4e79\"/>\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "slope %.6f per n (log10)", slope);
  out += "<text class=\"slope\" x=\"" + num(W - mr) + "\" y=\"" + num(mt - 8) +
         "\" font-size=\"12\" text-anchor=\"end\">" + buf + "</text>\n";
  out += "<text x=\"" + num((W + ml) / 2) + "\" y=\"" + num(H - 10) +
         "\" font-size=\"12\" text-anchor=\"middle\">n</text>\n";
  out += "<text x=\"14\" y=\"" + num(H / 2) + "\" font-size=\"12\" transform=\"rotate(-90 14 " + num(H / 2) +
         ")\" text-anchor=\"middle\">|D_n|</text>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace mlsb::svg
