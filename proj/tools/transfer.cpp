#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "transfer/pipeline.hpp"

namespace {

using namespace transfer;

std::vector<Family> parse_families(const std::string& list) {
  std::vector<Family> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_family(item));
  return out;
}

std::vector<int> parse_int_list(const std::string& list) {
  std::vector<int> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw Error("expected a comma-separated integer list, got '" + list + "'");
    out.push_back(v);
  }
  return out;
}

// Flags shared by extract and pipeline. Values given on the command line
// override the config file.
struct RunFlags {
  std::string config, input, families, out_dir, labels, strip_after, linkage;
  std::size_t min_pairs = 0;
  std::uint64_t min_count = 0;
  int pca_k = 0;
  double pca_variance = 0.0;
  unsigned workers = 0;
  bool strict = false, use_counts = false;

  void attach(CLI::App* app, bool downstream) {
    app->add_option("-c,--config", config, "JSON config file");
    app->add_option("-i,--input", input, "corpus JSONL");
    app->add_option("-f,--families", families, "comma list of wp,cfg,t2s,t2t");
    app->add_option("-o,--out", out_dir, "output directory");
    app->add_option("--min-pairs", min_pairs, "drop languages with fewer pairs");
    app->add_option("--strip-after", strip_after, "cut node labels at the first of these chars");
    app->add_option("-j,--workers", workers, "extraction threads")->check(CLI::PositiveNumber);
    app->add_flag("--strict", strict, "fail on the first invalid record");
    if (!downstream) return;
    app->add_option("-l,--labels", labels, "genus TSV");
    app->add_option("--min-count", min_count, "drop features rarer than this overall");
    app->add_option("--pca-k", pca_k, "number of PCA components")->check(CLI::PositiveNumber);
    app->add_option("--pca-variance", pca_variance, "explained-variance threshold in (0,1]");
    app->add_option("--linkage", linkage, "single|complete|average|ward");
    app->add_flag("--use-counts", use_counts, "PCA on raw counts");
  }

  RunConfig resolve(const CLI::App* app) const {
    RunConfig cfg = config.empty() ? RunConfig{} : load_config_file(config);
    if (app->count("--input")) cfg.input = input;
    if (app->count("--families")) cfg.families = parse_families(families);
    if (app->count("--out")) cfg.out_dir = out_dir;
    if (app->count("--min-pairs")) cfg.min_pairs = min_pairs;
    if (app->count("--strip-after")) cfg.strip_after = strip_after;
    if (app->count("--workers")) cfg.workers = workers;
    if (strict) cfg.strict = true;
    if (app->get_option_no_throw("--labels") && app->count("--labels")) cfg.labels = labels;
    if (app->get_option_no_throw("--min-count") && app->count("--min-count")) cfg.min_count = min_count;
    if (app->get_option_no_throw("--pca-k") && app->count("--pca-k")) cfg.pca.components = pca_k;
    if (app->get_option_no_throw("--pca-variance") && app->count("--pca-variance")) {
      cfg.pca.variance = pca_variance;
      cfg.pca.components = 0;
    }
    if (app->get_option_no_throw("--linkage") && app->count("--linkage")) cfg.linkage = parse_linkage(linkage);
    if (use_counts) cfg.use_counts = true;
    if (cfg.input.empty()) throw Error("no input corpus given (--input or config \"input\")");
    return cfg;
  }
};

LanguageFeatures read_features(const std::vector<std::string>& paths) {
  LanguageFeatures all;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read feature TSV '" + path + "'");
    for (auto& [lang, counts] : read_feature_tsv(in)) merge_into(all[lang], counts);
  }
  return all;
}

Dendrogram read_newick_file(const std::string& path) { return parse_newick(read_text_file(path)); }

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-")
    std::cout << content;
  else
    write_text_file(path, content);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-linguistic transfer pattern induction and language clustering"};
  app.require_subcommand(1);

  RunFlags extract_flags;
  auto* extract = app.add_subcommand("extract", "corpus JSONL -> per-family feature TSVs");
  extract_flags.attach(extract, false);

  std::vector<std::string> matrix_inputs;
  std::string matrix_out;
  std::uint64_t matrix_min_count = 2;
  auto* matrix = app.add_subcommand("matrix", "feature TSVs -> language-pattern matrix TSV");
  matrix->add_option("features", matrix_inputs, "feature TSV files")->required();
  matrix->add_option("-o,--out", matrix_out, "matrix TSV (default stdout)");
  matrix->add_option("--min-count", matrix_min_count, "drop features rarer than this overall");

  std::string cluster_in, cluster_out, cluster_linkage = "average";
  int cluster_k = 0;
  double cluster_var = 0.95;
  bool cluster_counts = false;
  auto* cluster_cmd = app.add_subcommand("cluster", "matrix TSV -> Newick dendrogram");
  cluster_cmd->add_option("matrix", cluster_in, "matrix TSV")->required();
  cluster_cmd->add_option("-o,--out", cluster_out, "Newick file (default stdout)");
  cluster_cmd->add_option("--pca-k", cluster_k, "number of PCA components")->check(CLI::PositiveNumber);
  cluster_cmd->add_option("--pca-variance", cluster_var, "explained-variance threshold in (0,1]");
  cluster_cmd->add_option("--linkage", cluster_linkage, "single|complete|average|ward");
  cluster_cmd->add_flag("--use-counts", cluster_counts, "PCA on raw counts");

  std::vector<std::string> eval_trees;
  std::string eval_labels, eval_out;
  auto* eval = app.add_subcommand("eval", "Newick trees + genus TSV -> metrics JSON");
  eval->add_option("trees", eval_trees, "Newick files; the feature set name is the file stem")->required();
  eval->add_option("-l,--labels", eval_labels, "genus TSV")->required();
  eval->add_option("-o,--out", eval_out, "metrics JSON (default stdout)");

  std::string plot_tree, plot_labels, plot_out;
  auto* plot = app.add_subcommand("plot", "Newick + genus TSV -> SVG");
  plot->add_option("tree", plot_tree, "Newick file")->required();
  plot->add_option("-l,--labels", plot_labels, "genus TSV");
  plot->add_option("-o,--out", plot_out, "SVG file (default stdout)");

  RunFlags pipeline_flags;
  auto* pipeline = app.add_subcommand("pipeline", "extract, cluster, evaluate and plot each family");
  pipeline_flags.attach(pipeline, true);

  SynthOptions synth_opts;
  std::string synth_langs = "3", synth_out, synth_labels;
  auto* synth = app.add_subcommand("synth", "generate a planted-genus corpus");
  synth->add_option("--genera", synth_opts.genera, "number of genera")->check(CLI::PositiveNumber);
  synth->add_option("--langs-per-genus", synth_langs, "one count, or a comma list with one per genus");
  synth->add_option("--pairs-per-lang", synth_opts.pairs_per_lang, "sentence pairs per language")
      ->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_opts.seed, "RNG seed");
  synth->add_option("--high-rate", synth_opts.high_rate, "reordering rate of owned templates");
  synth->add_option("--low-rate", synth_opts.low_rate, "reordering rate of other templates");
  synth->add_option("--perturbation", synth_opts.perturbation, "per-language rate jitter");
  synth->add_option("-o,--out", synth_out, "corpus JSONL")->required();
  synth->add_option("--labels-out", synth_labels, "genus TSV to write");

  std::string align_in, align_out, align_table;
  AlignOptions align_opts;
  bool align_strict = false;
  auto* align = app.add_subcommand("align", "fill in alignments with IBM Model 1");
  align->add_option("input", align_in, "corpus JSONL")->required();
  align->add_option("-o,--out", align_out, "aligned corpus JSONL")->required();
  align->add_option("--iterations", align_opts.iterations, "EM iterations")->check(CLI::PositiveNumber);
  align->add_flag("--intersect", align_opts.intersect, "intersect with the reverse direction");
  align->add_flag("--overwrite", align_opts.overwrite, "realign records that already have links");
  align->add_option("--table", align_table, "write the translation table TSV");
  align->add_flag("--strict", align_strict, "fail on the first invalid record");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*extract) {
      auto cfg = extract_flags.resolve(extract);
      auto ex = cmd_extract(cfg);
      std::cerr << ex.stats.to_json().dump(2) << '\n';
    } else if (*matrix) {
      auto m = build_matrix(read_features(matrix_inputs), matrix_min_count);
      std::ostringstream ss;
      write_matrix_tsv(ss, m);
      emit(matrix_out, ss.str());
    } else if (*cluster_cmd) {
      std::ifstream in(cluster_in);
      if (!in) throw Error("cannot read matrix TSV '" + cluster_in + "'");
      auto m = read_matrix_tsv(in);
      PcaOptions pca{cluster_k, cluster_var};
      auto dg = cluster_matrix(m, pca, parse_linkage(cluster_linkage), cluster_counts);
      emit(cluster_out, to_newick(dg) + "\n");
    } else if (*eval) {
      auto labels = load_genus_labels(eval_labels);
      auto out = nlohmann::json::array();
      for (const auto& path : eval_trees)
        out.push_back(evaluate(read_newick_file(path), labels, std::filesystem::path(path).stem().string()));
      emit(eval_out, out.dump(2) + "\n");
    } else if (*plot) {
      GenusLabeling labels;
      if (!plot_labels.empty()) labels = load_genus_labels(plot_labels);
      emit(plot_out, render_svg(read_newick_file(plot_tree), labels));
    } else if (*pipeline) {
      auto cfg = pipeline_flags.resolve(pipeline);
      auto res = cmd_pipeline(cfg);
      for (const auto& [f, msg] : res.errors) std::cerr << family_name(f) << ": " << msg << '\n';
      std::cout << res.metrics.dump(2) << '\n';
      if (res.succeeded == 0) return 1;
    } else if (*synth) {
      synth_opts.langs_per_genus = parse_int_list(synth_langs);
      auto corpus = synthesize(synth_opts);
      std::ostringstream ss;
      write_corpus_jsonl(ss, corpus.records);
      write_text_file(synth_out, ss.str());
      if (!synth_labels.empty()) {
        std::ostringstream ls;
        write_genus_tsv(ls, corpus.genus_labels());
        write_text_file(synth_labels, ls.str());
      }
    } else if (*align) {
      cmd_align(align_in, align_out, align_opts, align_table, align_strict);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
