// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance [work_dir]

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles/brute_extract.hpp"
#include "oracles/metric_oracles.hpp"
#include "oracles/naive_cluster.hpp"
#include "oracles/random_pairs.hpp"
#include "transfer/pipeline.hpp"

using namespace transfer;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void check(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::vector<std::string> t2s_of(const SentencePair& p) {
  std::vector<std::string> out;
  for (const auto& r : extract_minimal_rules(p.l2_tree, p.l1_tokens.size(), p.alignment))
    out.push_back(r.canonical());
  return out;
}

std::vector<std::string> t2t_of(const SentencePair& p) {
  std::vector<std::string> out;
  for (const auto& r : extract_all(p)) out.push_back(r.canonical());
  return out;
}

using Strings = std::vector<std::string>;

Outcome golden_patterns() {
  Outcome o;
  auto fig1 = fixtures::figure1();
  o.check(t2s_of(fig1) == Strings{fixtures::kFig2cRule}, "Fig 2(c) tree-to-string rule");
  o.check(t2t_of(fig1) == Strings{fixtures::kFig2cPattern}, "Fig 2(c) tree-to-tree pattern");
  auto a = fixtures::make_pair("(NP (NP w0) (PP w1))", "0-1 1-0", "(NP (NP w1') (NN w0'))");
  o.check(t2t_of(a) == Strings{"(NP (NP x0) (PP x1)) ||| (NP (NP x1) (NN x0))"}, "Fig 2(a) pattern");
  auto b = fixtures::make_pair("(NP (NN w1) (NN w2))", "0-1 1-0", {}, 2);
  o.check(t2s_of(b) == Strings{"(NP (NN x0) (NN x1)) ||| x1 x0"}, "Fig 2(b) rule");
  auto d = fixtures::make_pair("(S (NP w0) (VP (MD w1) (VP w2)))", "0-1 1-0 2-2", {}, 3);
  o.check(t2s_of(d) == Strings{"(S (NP x0) (VP (MD x1) (VP x2))) ||| x1 x0 x2"}, "Fig 2(d) rule");
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  std::mt19937_64 rng(2024);
  int pairs = 0, with_rules = 0, with_patterns = 0;
  for (int trial = 0; trial < 2000 && o.ok; ++trial) {
    auto p = trial % 2 ? oracle::permuted_pair(rng, 8) : oracle::random_pair(rng, 8);
    auto got_s = t2s_of(p), want_s = oracle::brute_t2s(p);
    std::sort(got_s.begin(), got_s.end());
    std::sort(want_s.begin(), want_s.end());
    o.check(got_s == want_s, "t2s mismatch on " + p.l2_tree.to_string() + " / " + p.alignment.to_string());
    o.check(t2t_of(p) == oracle::brute_t2t(p),
            "t2t mismatch on " + p.l2_tree.to_string() + " / " + p.l1_tree->to_string());
    ++pairs;
    with_rules += !got_s.empty();
    with_patterns += !t2t_of(p).empty();
  }
  if (o.ok)
    o.detail = std::to_string(pairs) + " pairs, " + std::to_string(with_rules) + " with rules, " +
               std::to_string(with_patterns) + " with patterns";
  return o;
}

SynthCorpus planted_corpus() {
  SynthOptions opts;
  opts.genera = 4;
  opts.langs_per_genus = {3, 3, 2, 2};
  opts.pairs_per_lang = 2000;
  opts.seed = 1;
  return synthesize(opts);
}

void write_corpus(const SynthCorpus& c, const fs::path& dir) {
  std::ostringstream cs, ls;
  write_corpus_jsonl(cs, c.records);
  write_genus_tsv(ls, c.genus_labels());
  write_text_file(dir / "corpus.jsonl", cs.str());
  write_text_file(dir / "genus.tsv", ls.str());
}

RunConfig planted_config(const fs::path& dir, const std::string& out, unsigned workers) {
  RunConfig cfg;
  cfg.input = (dir / "corpus.jsonl").string();
  cfg.labels = (dir / "genus.tsv").string();
  cfg.out_dir = (dir / out).string();
  cfg.min_pairs = 1000;
  cfg.families = {Family::kWordPair, Family::kCfg, Family::kT2S, Family::kT2T};
  cfg.workers = workers;
  return cfg;
}

bool genera_are_pure_subtrees(const Dendrogram& dg, const GenusLabeling& labels) {
  std::map<std::string, std::set<int>> members;
  for (int i = 0; i < dg.num_leaves(); ++i) members[labels.at(dg.labels[static_cast<std::size_t>(i)])].insert(i);
  for (const auto& [genus, m] : members) {
    bool found = false;
    for (int v = 0; v < dg.num_nodes() && !found; ++v) found = oracle::leaves_below(dg, v) == m;
    if (!found) return false;
  }
  return true;
}

Outcome planted_recovery(const fs::path& dir) {
  Outcome o;
  auto corpus = planted_corpus();
  write_corpus(corpus, dir);
  auto res = cmd_pipeline(planted_config(dir, "run1", 1));
  o.check(res.succeeded == 4, "a feature family failed");
  std::map<std::string, double> purity;
  for (const auto& m : res.metrics) purity[m["feature_set"].get<std::string>()] = m["purity"].get<double>();
  const auto labels = corpus.genus_labels();
  for (const char* fam : {"t2s", "t2t"}) {
    o.check(purity[fam] == 1.0, std::string(fam) + " purity " + std::to_string(purity[fam]));
    auto dg = parse_newick(read_text_file(dir / "run1" / (std::string(fam) + ".nwk")));
    o.check(genera_are_pure_subtrees(dg, labels), std::string(fam) + " has a genus split across subtrees");
  }
  o.check(purity["cfg"] <= purity["t2s"], "cfg purity exceeds t2s");
  if (o.ok) {
    std::ostringstream ss;
    ss << "purity wp=" << purity["wp"] << " cfg=" << purity["cfg"] << " t2s=" << purity["t2s"]
       << " t2t=" << purity["t2t"];
    o.detail = ss.str();
  }
  return o;
}

Outcome numerical_properties() {
  Outcome o;
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    int n = 3 + trial % 10, dim = 2 + trial % 17;
    Eigen::MatrixXd x(n, dim);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < dim; ++j) x(i, j) = g(rng);
    auto res = pca_reduce(x, PcaOptions{n - 1, 0.95});
    Eigen::MatrixXd raw = distance_matrix(x.rowwise() - x.colwise().mean());
    worst = std::max(worst, (raw - distance_matrix(res.coords)).cwiseAbs().maxCoeff());
  }
  o.check(worst <= 1e-9, "PCA distance error " + std::to_string(worst));

  for (int trial = 0; trial < 20; ++trial) {
    std::vector<TokenPair> corpus;
    for (int s = 0; s < 40; ++s) {
      TokenPair p;
      for (int i = 0, n = 1 + static_cast<int>(rng() % 6); i < n; ++i) p.first.push_back("e" + std::to_string(rng() % 8));
      for (int j = 0, m = 1 + static_cast<int>(rng() % 6); j < m; ++j) p.second.push_back("f" + std::to_string(rng() % 8));
      corpus.push_back(p);
    }
    std::vector<double> trace;
    auto model = train_model1(corpus, 10, &trace);
    for (std::size_t k = 1; k < trace.size(); ++k)
      o.check(trace[k] >= trace[k - 1] - 1e-9, "log-likelihood decreased at iteration " + std::to_string(k));
    for (double s : model.row_sums()) o.check(std::abs(s - 1.0) <= 1e-9, "translation row sums to " + std::to_string(s));
  }
  if (o.ok) {
    std::ostringstream ss;
    ss << "max PCA distance error " << worst;
    o.detail = ss.str();
  }
  return o;
}

Outcome clustering_correctness() {
  Outcome o;
  Eigen::MatrixXd line(3, 1);
  line << 0, 1, 10;
  auto hand = cluster(distance_matrix(line), Linkage::kAverage);
  o.check(hand.merges[0].a == 0 && hand.merges[0].b == 1 && hand.merges[0].height == 1.0, "first merge");
  o.check(hand.merges[1].a == 2 && hand.merges[1].b == 3 && hand.merges[1].height == 9.5, "second merge");

  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int trial = 0; trial < 200 && o.ok; ++trial) {
    for (Linkage l : kAllLinkages) {
      Eigen::MatrixXd pts(8, 3);
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 3; ++j) pts(i, j) = g(rng);
      Eigen::MatrixXd d = Eigen::MatrixXd::Zero(8, 8);
      if (l == Linkage::kWard) {
        d = distance_matrix(pts);
      } else {
        for (int i = 0; i < 8; ++i)
          for (int j = i + 1; j < 8; ++j) d(i, j) = d(j, i) = u(rng);
      }
      auto got = cluster(d, l);
      auto want = oracle::naive_cluster(d, l, pts);
      for (std::size_t t = 0; t < want.size(); ++t)
        o.check(got.merges[t].a == want[t].a && got.merges[t].b == want[t].b &&
                    std::abs(got.merges[t].height - want[t].height) <= 1e-9,
                std::string(linkage_name(l)) + " differs at trial " + std::to_string(trial));
    }
  }
  if (o.ok) o.detail = "200 matrices x 4 linkages";
  return o;
}

Outcome metric_correctness() {
  Outcome o;
  const GenusLabeling ab{{"A1", "A"}, {"A2", "A"}, {"B1", "B"}, {"B2", "B"}};
  auto pure = parse_newick("((A1:1,A2:1):1,(B1:1,B2:1):1);");
  auto mixed = parse_newick("((A1:1,B1:1):1,(A2:1,B2:1):1);");
  o.check(dendrogram_purity(pure, ab) == 1.0, "pure purity");
  o.check(dendrogram_purity(mixed, ab) == 0.5, "mixed purity");
  o.check(leaf_pair_distance(pure, ab) == 2.0, "pure leaf-pair distance");
  o.check(leaf_pair_distance(mixed, ab) == 4.0, "mixed leaf-pair distance");

  std::mt19937_64 rng(6);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> names;
    GenusLabeling labels;
    for (int i = 0; i < 10; ++i) {
      names.push_back("n" + std::to_string(i));
      labels[names.back()] = "c" + std::to_string(i < 3 ? i : rng() % 3);
    }
    auto dg = oracle::random_dendrogram(rng, names);
    double exact = dendrogram_purity(dg, labels);
    double sampled = oracle::monte_carlo_purity(dg, labels, rng, 100000);
    worst = std::max(worst, std::abs(exact - sampled));
  }
  o.check(worst <= 0.01, "Monte-Carlo gap " + std::to_string(worst));
  if (o.ok) {
    std::ostringstream ss;
    ss << "max Monte-Carlo gap " << worst;
    o.detail = ss.str();
  }
  return o;
}

Outcome determinism(const fs::path& dir) {
  Outcome o;
  if (!fs::exists(dir / "corpus.jsonl")) write_corpus(planted_corpus(), dir);
  cmd_pipeline(planted_config(dir, "serial", 1));
  cmd_pipeline(planted_config(dir, "parallel", 8));
  int compared = 0;
  for (const char* fam : {"wp", "cfg", "t2s", "t2t"})
    for (const char* ext : {".nwk", ".svg"}) {
      std::string f = std::string(fam) + ext;
      o.check(read_text_file(dir / "serial" / f) == read_text_file(dir / "parallel" / f), f + " differs");
      ++compared;
    }
  o.check(read_text_file(dir / "serial" / "metrics.json") == read_text_file(dir / "parallel" / "metrics.json"),
          "metrics.json differs");
  if (o.ok) o.detail = std::to_string(compared + 1) + " files identical for 1 vs 8 workers";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  fs::path dir = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "transfer_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "golden patterns", 1.0, golden_patterns},
      {2, "oracle equivalence", 60.0, oracle_equivalence},
      {3, "planted-genus recovery", 300.0, [&] { return planted_recovery(dir); }},
      {4, "numerical properties", 60.0, numerical_properties},
      {5, "clustering correctness", 60.0, clustering_correctness},
      {6, "metric correctness", 120.0, metric_correctness},
      {7, "determinism", 300.0, [&] { return determinism(dir); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs > c.limit_s) {
      o.ok = false;
      o.detail = "took longer than " + std::to_string(c.limit_s) + " s";
    }
    failed += !o.ok;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2f s", secs);
    std::cout << (o.ok ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name << ", " << timing
              << "): " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
