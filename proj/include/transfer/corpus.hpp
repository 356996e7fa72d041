#pragma once

// Parallel L2/L1 corpus in JSON-lines form, one record per line:
//
//   {"lang": str, "l2": [tok], "l1": [tok], "l2_tree": str,
//    "l1_tree": str|null, "align": "i-j i-j ..."}
//
// "align" may be absent or null when alignments are to be computed later.

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "transfer/alignment.hpp"
#include "transfer/error.hpp"
#include "transfer/treebank.hpp"

namespace transfer {

struct SentencePair {
  std::string native_language;
  std::vector<std::string> l2_tokens;
  std::vector<std::string> l1_tokens;
  ConstTree l2_tree;
  std::optional<ConstTree> l1_tree;
  Alignment alignment;
  bool has_alignment = false;
  std::size_t line = 0;  // 1-based source line, 0 when built in memory
};

/// Checks every SentencePair invariant; returns an empty string when valid.
inline std::string validate(const SentencePair& p) {
  if (p.native_language.empty()) return "empty language label";
  if (p.l2_tree.num_tokens() != p.l2_tokens.size())
    return "l2_tree has " + std::to_string(p.l2_tree.num_tokens()) + " leaves but l2 has " +
           std::to_string(p.l2_tokens.size()) + " tokens";
  if (p.l1_tree && p.l1_tree->num_tokens() != p.l1_tokens.size())
    return "l1_tree has " + std::to_string(p.l1_tree->num_tokens()) + " leaves but l1 has " +
           std::to_string(p.l1_tokens.size()) + " tokens";
  if (!p.alignment.in_bounds(p.l2_tokens.size(), p.l1_tokens.size()))
    return "alignment link out of range";
  for (const auto* side : {&p.l2_tokens, &p.l1_tokens})
    for (const auto& t : *side)
      if (!detail::valid_atom(t)) return "invalid token '" + t + "'";
  return {};
}

inline nlohmann::json to_json(const SentencePair& p) {
  nlohmann::json j;
  j["lang"] = p.native_language;
  j["l2"] = p.l2_tokens;
  j["l1"] = p.l1_tokens;
  j["l2_tree"] = p.l2_tree.to_string();
  j["l1_tree"] = p.l1_tree ? nlohmann::json(p.l1_tree->to_string()) : nlohmann::json(nullptr);
  j["align"] = p.has_alignment ? nlohmann::json(p.alignment.to_string()) : nlohmann::json(nullptr);
  return j;
}

/// Parses and validates one JSONL record. Throws Error on any problem.
inline SentencePair parse_record(const std::string& line, const ParseOptions& opts = {}) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("record is not a JSON object");
  SentencePair p;
  try {
    p.native_language = j.at("lang").get<std::string>();
    p.l2_tokens = j.at("l2").get<std::vector<std::string>>();
    p.l1_tokens = j.at("l1").get<std::vector<std::string>>();
    p.l2_tree = parse_bracketed(j.at("l2_tree").get<std::string>(), opts);
    if (j.contains("l1_tree") && !j["l1_tree"].is_null())
      p.l1_tree = parse_bracketed(j["l1_tree"].get<std::string>(), opts);
    if (j.contains("align") && !j["align"].is_null()) {
      p.alignment = parse_pharaoh(j["align"].get<std::string>());
      p.has_alignment = true;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad record field: ") + e.what());
  }
  if (auto why = validate(p); !why.empty()) throw Error(why);
  return p;
}

struct CorpusStats {
  std::map<std::string, std::size_t> pairs_per_language;
  std::size_t total_pairs = 0;
  std::size_t invalid_records = 0;
  std::size_t min_pairs = 0;

  /// Languages with at least min_pairs valid records, sorted.
  std::vector<std::string> retained_languages() const {
    std::vector<std::string> out;
    for (const auto& [lang, n] : pairs_per_language)
      if (n >= min_pairs) out.push_back(lang);
    return out;
  }

  bool retained(const std::string& lang) const {
    auto it = pairs_per_language.find(lang);
    return it != pairs_per_language.end() && it->second >= min_pairs;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["total_pairs"] = total_pairs;
    j["invalid_records"] = invalid_records;
    j["min_pairs"] = min_pairs;
    j["pairs_per_language"] = pairs_per_language;
    j["retained_languages"] = retained_languages();
    return j;
  }
};

/// Streams validated records one at a time. Invalid records are counted and
/// skipped, or raise Error in strict mode. The language threshold only
/// affects CorpusStats::retained_languages(); filtering is the consumer's job
/// once the stream is exhausted.
class CorpusReader {
 public:
  CorpusReader(const std::string& path, std::size_t min_pairs, bool strict = false,
               ParseOptions opts = {})
      : owned_(std::make_unique<std::ifstream>(path)), in_(owned_.get()), strict_(strict),
        opts_(std::move(opts)) {
    if (!*owned_) throw Error("cannot read corpus file '" + path + "'");
    stats_.min_pairs = min_pairs;
  }

  CorpusReader(std::istream& in, std::size_t min_pairs, bool strict = false, ParseOptions opts = {})
      : in_(&in), strict_(strict), opts_(std::move(opts)) {
    stats_.min_pairs = min_pairs;
  }

  /// Reads the next valid record into `out`; false at end of input.
  bool next(SentencePair& out) {
    std::string line;
    while (std::getline(*in_, line)) {
      ++line_no_;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        out = parse_record(line, opts_);
      } catch (const Error& e) {
        if (strict_) throw Error("line " + std::to_string(line_no_) + ": " + e.what());
        ++stats_.invalid_records;
        continue;
      }
      out.line = line_no_;
      ++stats_.pairs_per_language[out.native_language];
      ++stats_.total_pairs;
      return true;
    }
    return false;
  }

  const CorpusStats& stats() const { return stats_; }
  std::size_t line() const { return line_no_; }

 private:
  std::unique_ptr<std::ifstream> owned_;
  std::istream* in_;
  bool strict_;
  ParseOptions opts_;
  CorpusStats stats_;
  std::size_t line_no_ = 0;
};

}  // namespace transfer
