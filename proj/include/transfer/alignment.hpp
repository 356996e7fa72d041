#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <iterator>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "transfer/error.hpp"
#include "transfer/treebank.hpp"

namespace transfer {

/// Word alignment between an L2 (learner) sentence and its L1 correction.
/// Links are (l2_index, l1_index) with set semantics.
class Alignment {
 public:
  using Link = std::pair<int, int>;

  Alignment() = default;
  Alignment(std::initializer_list<Link> links) : links_(links) {}
  explicit Alignment(std::set<Link> links) : links_(std::move(links)) {}

  void add(int l2, int l1) { links_.emplace(l2, l1); }
  bool contains(int l2, int l1) const { return links_.count({l2, l1}) != 0; }
  std::size_t size() const { return links_.size(); }
  bool empty() const { return links_.empty(); }
  const std::set<Link>& links() const { return links_; }
  auto begin() const { return links_.begin(); }
  auto end() const { return links_.end(); }

  /// True when every link lies inside an l2_len x l1_len grid.
  bool in_bounds(std::size_t l2_len, std::size_t l1_len) const {
    return std::all_of(links_.begin(), links_.end(), [&](const Link& l) {
      return l.first >= 0 && l.second >= 0 && static_cast<std::size_t>(l.first) < l2_len &&
             static_cast<std::size_t>(l.second) < l1_len;
    });
  }

  /// For every L2 token, the sorted L1 indices it links to.
  std::vector<std::vector<int>> l2_to_l1(std::size_t l2_len) const {
    std::vector<std::vector<int>> out(l2_len);
    for (const auto& [i, j] : links_)
      if (i >= 0 && static_cast<std::size_t>(i) < l2_len) out[static_cast<std::size_t>(i)].push_back(j);
    return out;  // std::set order keeps each row sorted
  }

  Alignment reversed() const {
    Alignment r;
    for (const auto& [i, j] : links_) r.add(j, i);
    return r;
  }

  Alignment intersect(const Alignment& other) const {
    Alignment r;
    std::set_intersection(links_.begin(), links_.end(), other.links_.begin(), other.links_.end(),
                          std::inserter(r.links_, r.links_.end()));
    return r;
  }

  /// Pharaoh format, links sorted by (l2, l1).
  std::string to_string() const {
    std::string out;
    for (const auto& [i, j] : links_) {
      if (!out.empty()) out += ' ';
      out += std::to_string(i);
      out += '-';
      out += std::to_string(j);
    }
    return out;
  }

  friend bool operator==(const Alignment&, const Alignment&) = default;

 private:
  std::set<Link> links_;
};

/// Parses whitespace-separated "i-j" links (i = L2 index, j = L1 index).
inline Alignment parse_pharaoh(std::string_view text) {
  Alignment a;
  std::size_t pos = 0;
  auto parse_int = [&](std::string_view field, std::size_t at) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || v < 0)
      throw ParseError("non-numeric alignment index '" + std::string(field) + "'", at);
    return v;
  };
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) break;
    std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    std::string_view tok = text.substr(start, pos - start);
    auto dash = tok.find('-');
    if (dash == std::string_view::npos)
      throw ParseError("alignment link '" + std::string(tok) + "' is missing '-'", start);
    int i = parse_int(tok.substr(0, dash), start);
    int j = parse_int(tok.substr(dash + 1), start + dash + 1);
    a.add(i, j);
  }
  return a;
}

/// L1 positions projected from an L2 token range.
struct Projection {
  /// targets[k] = sorted L1 indices linked to L2 token (range.begin + k).
  std::vector<std::vector<int>> targets;
  /// Representative sequence: min target of each aligned token, in L2 order.
  /// Unaligned tokens are omitted.
  std::vector<int> representative;
  /// L2 token index for each entry of `representative`.
  std::vector<int> positions;
  bool has_unaligned = false;
};

inline Projection projected_targets(const Alignment& a, Span range) {
  if (range.begin < 0 || range.end < range.begin)
    throw Error("projected_targets: invalid range");
  Projection p;
  p.targets.resize(static_cast<std::size_t>(range.length()));
  for (const auto& [i, j] : a) {
    if (range.contains(i)) p.targets[static_cast<std::size_t>(i - range.begin)].push_back(j);
  }
  for (int k = 0; k < range.length(); ++k) {
    const auto& t = p.targets[static_cast<std::size_t>(k)];
    if (t.empty()) {
      p.has_unaligned = true;
      continue;
    }
    p.representative.push_back(t.front());
    p.positions.push_back(range.begin + k);
  }
  return p;
}

}  // namespace transfer
