#pragma once

// End-to-end orchestration behind the CLI subcommands. Every stage reads and
// writes the declared file formats, so stages can also be run one at a time.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "transfer/baselines.hpp"
#include "transfer/cluster.hpp"
#include "transfer/corpus.hpp"
#include "transfer/error.hpp"
#include "transfer/feature.hpp"
#include "transfer/matrix.hpp"
#include "transfer/metrics.hpp"
#include "transfer/model1.hpp"
#include "transfer/newick.hpp"
#include "transfer/pca.hpp"
#include "transfer/svg.hpp"
#include "transfer/synth.hpp"
#include "transfer/t2s.hpp"
#include "transfer/t2t.hpp"

namespace transfer {

struct RunConfig {
  std::string input;
  std::vector<Family> families = {Family::kT2S, Family::kT2T};
  std::size_t min_pairs = 10000;
  std::uint64_t min_count = 2;
  PcaOptions pca;
  Linkage linkage = Linkage::kAverage;
  bool use_counts = false;  // PCA on raw counts instead of relative frequencies
  std::string out_dir = "out";
  bool strict = false;
  std::string labels;
  std::string strip_after;
  unsigned workers = 1;  // affects speed only, never output

  /// Everything that can change outputs; `workers` is deliberately absent.
  nlohmann::json to_json() const {
    nlohmann::json j;
    j["input"] = input;
    std::vector<std::string> fams;
    for (Family f : families) fams.emplace_back(family_name(f));
    j["families"] = fams;
    j["min_pairs"] = min_pairs;
    j["min_count"] = min_count;
    j["pca_components"] = pca.components;
    j["pca_variance"] = pca.variance;
    j["linkage"] = std::string(linkage_name(linkage));
    j["use_counts"] = use_counts;
    j["out_dir"] = out_dir;
    j["strict"] = strict;
    j["labels"] = labels;
    j["strip_after"] = strip_after;
    return j;
  }

  void validate() const {
    if (families.empty()) throw Error("config: select at least one feature family");
    if (workers == 0) throw Error("config: workers must be >= 1");
    if (!input.empty() && !std::filesystem::exists(input))
      throw Error("config: input file '" + input + "' does not exist");
    if (!labels.empty() && !std::filesystem::exists(labels))
      throw Error("config: genus label file '" + labels + "' does not exist");
  }
};

/// Applies keys present in a JSON config object on top of `cfg`.
inline void apply_config_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw Error("config file must contain a JSON object");
  try {
    if (j.contains("input")) cfg.input = j["input"].get<std::string>();
    if (j.contains("families")) {
      cfg.families.clear();
      for (const auto& f : j["families"]) cfg.families.push_back(parse_family(f.get<std::string>()));
    }
    if (j.contains("min_pairs")) cfg.min_pairs = j["min_pairs"].get<std::size_t>();
    if (j.contains("min_count")) cfg.min_count = j["min_count"].get<std::uint64_t>();
    if (j.contains("pca_components")) cfg.pca.components = j["pca_components"].get<int>();
    if (j.contains("pca_variance")) cfg.pca.variance = j["pca_variance"].get<double>();
    if (j.contains("linkage")) cfg.linkage = parse_linkage(j["linkage"].get<std::string>());
    if (j.contains("use_counts")) cfg.use_counts = j["use_counts"].get<bool>();
    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("strict")) cfg.strict = j["strict"].get<bool>();
    if (j.contains("labels")) cfg.labels = j["labels"].get<std::string>();
    if (j.contains("strip_after")) cfg.strip_after = j["strip_after"].get<std::string>();
    if (j.contains("workers")) cfg.workers = j["workers"].get<unsigned>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
}

inline RunConfig load_config_file(const std::string& path, RunConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("config file '" + path + "': " + e.what());
  }
  apply_config_json(base, j);
  return base;
}

/// 64-bit FNV-1a, hex encoded.
inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xf];
  return out;
}

/// Features of one record for the selected families.
inline void extract_record(const SentencePair& p, const std::vector<Family>& families,
                           std::map<Family, FeatureCounts>& out) {
  for (Family f : families) {
    if ((f == Family::kWordPair || f == Family::kT2S || f == Family::kT2T) && !p.has_alignment)
      throw Error("record has no alignment; run the align subcommand first");
    auto& counts = out[f];
    switch (f) {
      case Family::kWordPair:
        for (const auto& k : word_pair_features(p)) add(counts, k);
        break;
      case Family::kCfg:
        for (const auto& k : cfg_features(p)) add(counts, k);
        break;
      case Family::kT2S:
        for (const auto& r : extract_minimal_rules(p.l2_tree, p.l1_tokens.size(), p.alignment))
          add(counts, {Family::kT2S, r.canonical()});
        break;
      case Family::kT2T:
        for (const auto& pat : extract_all(p)) add(counts, {Family::kT2T, pat.canonical()});
        break;
    }
  }
}

struct Extraction {
  std::map<Family, LanguageFeatures> features;  // retained languages only
  CorpusStats stats;
};

/// Streams the corpus once in fixed-size batches; each batch is split across
/// workers and the per-worker counters are summed, so the result does not
/// depend on the worker count.
inline Extraction extract_corpus(CorpusReader& reader, const std::vector<Family>& families,
                                 unsigned workers = 1, std::size_t batch_size = 4096) {
  if (workers == 0) workers = 1;
  Extraction ex;
  std::map<Family, LanguageFeatures> all;
  std::vector<SentencePair> batch;
  batch.reserve(batch_size);

  auto process = [&]() {
    const std::size_t n = batch.size();
    const unsigned w = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    std::vector<std::map<Family, LanguageFeatures>> local(w);
    std::vector<std::exception_ptr> errors(w);
    auto run = [&](unsigned k) {
      try {
        for (std::size_t i = k * n / w; i < (k + 1) * n / w; ++i) {
          std::map<Family, FeatureCounts> rec;
          try {
            extract_record(batch[i], families, rec);
          } catch (const Error& e) {
            throw Error("line " + std::to_string(batch[i].line) + ": " + e.what());
          }
          for (auto& [f, counts] : rec) merge_into(local[k][f][batch[i].native_language], counts);
        }
      } catch (...) {
        errors[k] = std::current_exception();
      }
    };
    if (w == 1) {
      run(0);
    } else {
      std::vector<std::thread> threads;
      for (unsigned k = 0; k < w; ++k) threads.emplace_back(run, k);
      for (auto& t : threads) t.join();
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (auto& part : local)
      for (auto& [f, langs] : part)
        for (auto& [lang, counts] : langs) merge_into(all[f][lang], counts);
    batch.clear();
  };

  SentencePair p;
  while (reader.next(p)) {
    batch.push_back(std::move(p));
    if (batch.size() >= batch_size) process();
  }
  if (!batch.empty()) process();

  ex.stats = reader.stats();
  if (ex.stats.total_pairs == 0) throw Error("no records");
  for (Family f : families) {
    auto& dst = ex.features[f];
    for (const auto& lang : ex.stats.retained_languages()) dst[lang] = all[f][lang];
  }
  return ex;
}

inline Extraction extract_corpus(const RunConfig& cfg) {
  CorpusReader reader(cfg.input, cfg.min_pairs, cfg.strict, ParseOptions{cfg.strip_after});
  return extract_corpus(reader, cfg.families, cfg.workers);
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline GenusLabeling load_genus_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read genus label file '" + path + "'");
  return read_genus_tsv(in);
}

/// `extract`: writes <out>/<family>.features.tsv and <out>/stats.json.
inline Extraction cmd_extract(const RunConfig& cfg) {
  cfg.validate();
  auto ex = extract_corpus(cfg);
  for (const auto& [f, feats] : ex.features) {
    std::ostringstream ss;
    write_feature_tsv(ss, feats);
    write_text_file(std::filesystem::path(cfg.out_dir) / (std::string(family_name(f)) + ".features.tsv"),
                    ss.str());
  }
  write_text_file(std::filesystem::path(cfg.out_dir) / "stats.json", ex.stats.to_json().dump(2) + "\n");
  return ex;
}

/// `cluster` core: matrix -> PCA -> distances -> dendrogram.
inline Dendrogram cluster_matrix(const LangPatternMatrix& m, const PcaOptions& pca, Linkage linkage,
                                 bool use_counts = false) {
  auto reduced = pca_reduce(m, pca, use_counts);
  return cluster(distance_matrix(reduced.coords), linkage, m.languages);
}

inline nlohmann::json evaluate(const Dendrogram& dg, const GenusLabeling& labels,
                               const std::string& feature_set) {
  nlohmann::json j;
  j["feature_set"] = feature_set;
  j["purity"] = dendrogram_purity(dg, labels);
  j["leaf_pair_distance"] = leaf_pair_distance(dg, labels);
  return j;
}

struct FamilyOutputs {
  std::string matrix_tsv;
  std::string newick;
  std::string svg;
  nlohmann::json metrics;
};

inline FamilyOutputs run_family(Family f, const LanguageFeatures& feats, const RunConfig& cfg,
                                const GenusLabeling& labels) {
  FamilyOutputs out;
  auto m = build_matrix(feats, cfg.min_count);
  std::ostringstream ss;
  write_matrix_tsv(ss, m);
  out.matrix_tsv = ss.str();
  auto dg = cluster_matrix(m, cfg.pca, cfg.linkage, cfg.use_counts);
  out.newick = to_newick(dg) + "\n";
  out.svg = render_svg(dg, labels);
  out.metrics = evaluate(dg, labels, std::string(family_name(f)));
  return out;
}

struct PipelineResult {
  nlohmann::json metrics = nlohmann::json::array();
  std::map<Family, std::string> errors;
  std::size_t succeeded = 0;
};

/// `pipeline`: per family, writes <family>.features.tsv, .matrix.tsv, .nwk
/// and .svg, plus metrics.json (one object per family) and run.json.
inline PipelineResult cmd_pipeline(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.labels.empty()) throw Error("pipeline needs a genus label file");
  const auto labels = load_genus_labels(cfg.labels);
  auto ex = extract_corpus(cfg);
  const std::filesystem::path dir(cfg.out_dir);

  PipelineResult res;
  nlohmann::json families = nlohmann::json::object();
  for (Family f : cfg.families) {
    const std::string name(family_name(f));
    {
      std::ostringstream ss;
      write_feature_tsv(ss, ex.features[f]);
      write_text_file(dir / (name + ".features.tsv"), ss.str());
    }
    try {
      auto out = run_family(f, ex.features[f], cfg, labels);
      write_text_file(dir / (name + ".matrix.tsv"), out.matrix_tsv);
      write_text_file(dir / (name + ".nwk"), out.newick);
      write_text_file(dir / (name + ".svg"), out.svg);
      res.metrics.push_back(out.metrics);
      families[name] = "ok";
      ++res.succeeded;
    } catch (const Error& e) {
      res.errors[f] = e.what();
      families[name] = std::string("error: ") + e.what();
    }
  }
  write_text_file(dir / "metrics.json", res.metrics.dump(2) + "\n");

  nlohmann::json run;
  run["config"] = cfg.to_json();
  run["config_hash"] = fnv1a_hex(cfg.to_json().dump());
  run["stats"] = ex.stats.to_json();
  run["families"] = families;
  write_text_file(dir / "run.json", run.dump(2) + "\n");
  return res;
}

struct AlignOptions {
  int iterations = 5;
  bool intersect = false;  // also train L1->L2 and keep links found both ways
  bool overwrite = false;  // realign records that already carry links
};

/// `align`: trains the lexical model on all records and fills in links for
/// records without them. Returns the forward model.
inline Model1 cmd_align(const std::string& input, const std::string& output, const AlignOptions& opts,
                        const std::string& table_out = {}, bool strict = false) {
  CorpusReader reader(input, 0, strict);
  std::vector<SentencePair> records;
  SentencePair p;
  while (reader.next(p)) records.push_back(std::move(p));
  if (records.empty()) throw Error("no records");
  std::vector<TokenPair> fwd, rev;
  for (const auto& r : records) fwd.emplace_back(r.l2_tokens, r.l1_tokens);
  Model1 model = train_model1(fwd, opts.iterations);
  std::optional<Model1> back;
  if (opts.intersect) {
    for (const auto& r : records) rev.emplace_back(r.l1_tokens, r.l2_tokens);
    back.emplace(train_model1(rev, opts.iterations));
  }
  std::ostringstream ss;
  for (auto& r : records) {
    if (r.has_alignment && !opts.overwrite) {
      ss << to_json(r).dump() << '\n';
      continue;
    }
    r.alignment = model.align(r.l2_tokens, r.l1_tokens);
    if (back) r.alignment = r.alignment.intersect(back->align(r.l1_tokens, r.l2_tokens).reversed());
    r.has_alignment = true;
    ss << to_json(r).dump() << '\n';
  }
  write_text_file(output, ss.str());
  if (!table_out.empty()) {
    std::ostringstream ts;
    model.write_tsv(ts);
    write_text_file(table_out, ts.str());
  }
  return model;
}

}  // namespace transfer
