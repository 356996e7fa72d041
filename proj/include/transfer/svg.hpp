#pragma once

// Static SVG dendrogram: leaves on the left with genus-colored labels, the
// root on the right, x proportional to merge height.

#include <algorithm>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "transfer/cluster.hpp"
#include "transfer/metrics.hpp"

namespace transfer {

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace detail

inline const std::vector<std::string>& genus_palette() {
  static const std::vector<std::string> p = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#17becf",
                                             "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"};
  return p;
}

/// Renders the dendrogram. Leaves without a genus label are drawn in black.
inline std::string render_svg(const Dendrogram& dg, const GenusLabeling& labels) {
  dg.validate();
  const int n = dg.num_leaves();
  constexpr double kLabelWidth = 90.0, kPlotWidth = 400.0, kRowHeight = 22.0, kMargin = 16.0;

  // Genus colors in sorted genus order.
  std::map<std::string, std::string> color_of;
  {
    std::vector<std::string> genera;
    for (const auto& [lang, genus] : labels) genera.push_back(genus);
    std::sort(genera.begin(), genera.end());
    genera.erase(std::unique(genera.begin(), genera.end()), genera.end());
    for (std::size_t k = 0; k < genera.size(); ++k)
      color_of[genera[k]] = genus_palette()[k % genus_palette().size()];
  }
  auto leaf_color = [&](int leaf) -> std::string {
    auto it = labels.find(dg.labels[static_cast<std::size_t>(leaf)]);
    return it == labels.end() ? "#000000" : color_of[it->second];
  };

  // x from height; fall back to topological depth when all heights are 0.
  std::vector<double> level(static_cast<std::size_t>(dg.num_nodes()), 0.0);
  double max_level = 0.0;
  bool flat = n > 1 && dg.height(dg.root()) <= 0.0;
  for (int id = n; id < dg.num_nodes(); ++id) {
    auto [a, b] = dg.children(id);
    level[static_cast<std::size_t>(id)] =
        flat ? 1.0 + std::max(level[static_cast<std::size_t>(a)], level[static_cast<std::size_t>(b)])
             : dg.height(id);
    max_level = std::max(max_level, level[static_cast<std::size_t>(id)]);
  }
  auto x_of = [&](int id) {
    double f = max_level > 0.0 ? level[static_cast<std::size_t>(id)] / max_level : 0.0;
    return kMargin + kLabelWidth + f * kPlotWidth;
  };

  std::vector<double> y(static_cast<std::size_t>(dg.num_nodes()), 0.0);
  int row = 0;
  std::vector<int> leaf_order;
  auto place = [&](auto&& self, int id) -> void {
    if (dg.is_leaf(id)) {
      y[static_cast<std::size_t>(id)] = kMargin + kRowHeight * (row++ + 0.5);
      leaf_order.push_back(id);
      return;
    }
    auto [a, b] = dg.children(id);
    self(self, a);
    self(self, b);
    y[static_cast<std::size_t>(id)] = 0.5 * (y[static_cast<std::size_t>(a)] + y[static_cast<std::size_t>(b)]);
  };
  place(place, dg.root());

  const double width = 2 * kMargin + kLabelWidth + kPlotWidth;
  const double height = 2 * kMargin + kRowHeight * n;
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt2(width) + "\" height=\"" +
         detail::fmt2(height) + "\" viewBox=\"0 0 " + detail::fmt2(width) + " " + detail::fmt2(height) +
         "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  out += "<g font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"end\">\n";
  for (int leaf : leaf_order) {
    out += "<text x=\"" + detail::fmt2(kMargin + kLabelWidth - 6.0) + "\" y=\"" +
           detail::fmt2(y[static_cast<std::size_t>(leaf)] + 4.5) + "\" fill=\"" + leaf_color(leaf) +
           "\">" + detail::xml_escape(dg.labels[static_cast<std::size_t>(leaf)]) + "</text>\n";
  }
  out += "</g>\n";
  out += "<g fill=\"none\" stroke-width=\"2\">\n";
  auto parents = dg.parents();
  for (int id = 0; id < dg.num_nodes(); ++id) {
    int p = parents[static_cast<std::size_t>(id)];
    if (p < 0) continue;
    std::string stroke = dg.is_leaf(id) ? leaf_color(id) : "#333333";
    out += "<path d=\"M" + detail::fmt2(x_of(id)) + " " + detail::fmt2(y[static_cast<std::size_t>(id)]) +
           " H" + detail::fmt2(x_of(p)) + "\" stroke=\"" + stroke + "\"/>\n";
  }
  for (int id = n; id < dg.num_nodes(); ++id) {
    auto [a, b] = dg.children(id);
    out += "<path d=\"M" + detail::fmt2(x_of(id)) + " " + detail::fmt2(y[static_cast<std::size_t>(a)]) +
           " V" + detail::fmt2(y[static_cast<std::size_t>(b)]) + "\" stroke=\"#333333\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace transfer
