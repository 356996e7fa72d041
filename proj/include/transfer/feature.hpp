#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "transfer/error.hpp"

namespace transfer {

enum class Family { kWordPair, kCfg, kT2S, kT2T };

inline constexpr Family kAllFamilies[] = {Family::kWordPair, Family::kCfg, Family::kT2S,
                                          Family::kT2T};

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::kWordPair: return "wp";
    case Family::kCfg: return "cfg";
    case Family::kT2S: return "t2s";
    case Family::kT2T: return "t2t";
  }
  return "?";
}

inline Family parse_family(std::string_view s) {
  for (Family f : kAllFamilies)
    if (family_name(f) == s) return f;
  throw Error("unknown feature family '" + std::string(s) + "' (expected wp, cfg, t2s or t2t)");
}

/// A namespaced feature: identical bodies in different families never collide.
struct FeatureKey {
  Family family;
  std::string body;

  std::string str() const { return std::string(family_name(family)) + ":" + body; }
  friend auto operator<=>(const FeatureKey& a, const FeatureKey& b) {
    return a.str() <=> b.str();
  }
  friend bool operator==(const FeatureKey& a, const FeatureKey& b) = default;
};

inline FeatureKey parse_feature_key(std::string_view s) {
  auto colon = s.find(':');
  if (colon == std::string_view::npos) throw Error("feature key without namespace: " + std::string(s));
  return FeatureKey{parse_family(s.substr(0, colon)), std::string(s.substr(colon + 1))};
}

/// Multiset of features keyed by their namespaced string.
using FeatureCounts = std::map<std::string, std::uint64_t>;

inline void add(FeatureCounts& counts, const FeatureKey& key, std::uint64_t n = 1) {
  counts[key.str()] += n;
}

inline void merge_into(FeatureCounts& dst, const FeatureCounts& src) {
  for (const auto& [k, n] : src) dst[k] += n;
}

/// Per-language feature counts.
using LanguageFeatures = std::map<std::string, FeatureCounts>;

/// TSV rows "lang<TAB>key<TAB>count", languages then keys in sorted order.
inline void write_feature_tsv(std::ostream& os, const LanguageFeatures& feats) {
  for (const auto& [lang, counts] : feats)
    for (const auto& [key, n] : counts) os << lang << '\t' << key << '\t' << n << '\n';
}

inline LanguageFeatures read_feature_tsv(std::istream& is) {
  LanguageFeatures out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw Error("feature TSV line " + std::to_string(line_no) + ": expected 3 columns");
    std::string lang = line.substr(0, t1);
    std::string key = line.substr(t1 + 1, t2 - t1 - 1);
    std::uint64_t n = 0;
    try {
      n = std::stoull(line.substr(t2 + 1));
    } catch (const std::exception&) {
      throw Error("feature TSV line " + std::to_string(line_no) + ": bad count");
    }
    out[lang][key] += n;
  }
  return out;
}

}  // namespace transfer
