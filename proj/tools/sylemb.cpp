// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line driver: dataset preparation, corpus statistics, training,
// decoding, evaluation, annotation arithmetic and embedding export.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "manifest.hpp"
#include "sylemb.hpp"

namespace fs = std::filesystem;
using namespace sylemb;
using sylemb::cli::Manifest;

namespace {

// Holds the manifest of the running command; written after the artifacts.
struct Run {
  Manifest manifest;
  std::string manifest_path;

  Run(const std::string& command, const CLI::App& app, std::string path)
      : manifest(command), manifest_path(std::move(path)) {
    manifest.record_options(app);
  }

  void finish() {
    if (manifest_path.empty()) return;
    manifest.write(manifest_path);
    spdlog::info("manifest written to {}", manifest_path);
  }
};

std::string default_manifest(const std::string& primary_output) { return primary_output + ".manifest.json"; }

std::ofstream open_out(const std::string& path) {
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path);
}

void ensure_parent(const std::string& path) {
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
}

DecompositionDataset read_decompositions(const std::string& path, DecompositionLoadReport* rep = nullptr) {
  DecompositionLoadReport local;
  auto& r = rep ? *rep : local;
  auto ds = load_decompositions(path, CharFilter::standard(), &r);
  spdlog::info("{}: {} decompositions ({} filtered, {} not rejoining, {} duplicates)", path, ds.size(), r.filtered,
               r.rejoin_mismatch, r.duplicates);
  for (const auto& w : r.warnings) spdlog::debug("{}", w);
  return ds;
}

// Rebuilds a decomposition dataset from the base syllables of a training set.
DecompositionDataset dataset_of(const TrainingSet& ts) {
  std::vector<Decomposition> items;
  items.reserve(ts.size());
  for (const auto& ex : ts.examples) items.push_back({ex.word, ex.base});
  return DecompositionDataset(items);
}

nlohmann::json training_set_summary(const TrainingSet& ts) {
  return {{"words", ts.size()},
          {"syllables", ts.vocab.size()},
          {"dim", ts.dim},
          {"variant_fraction", ts.marking.fraction},
          {"start_variants", ts.marking.start.size()},
          {"end_variants", ts.marking.end.size()}};
}

// ---------------------------------------------------------------- prepare

struct IntersectOpts {
  std::string decomp, emb, out, summary, manifest;
};

void cmd_intersect(const CLI::App& app, const IntersectOpts& o) {
  Run run("prepare intersect", app, o.manifest.empty() ? default_manifest(o.out) : o.manifest);
  run.manifest.input(o.decomp);
  run.manifest.input(o.emb);
  DecompositionLoadReport drep;
  const auto ds = read_decompositions(o.decomp, &drep);
  EmbeddingLoadReport erep;
  const auto emb = load_embeddings(o.emb, &erep);
  spdlog::info("{}: {} vectors of dimension {}", o.emb, emb.size(), emb.dim());
  const auto ts = build_training_set(ds, emb);
  io::save_training_set(o.out, ts);
  run.manifest.output(o.out);
  auto summary = training_set_summary(ts);
  summary["decompositions"] = ds.size();
  summary["decomposition_syllables"] = ds.syllable_counts().size();
  summary["embedding_rows"] = emb.size();
  summary["embedding_duplicates"] = erep.duplicates;
  summary["decomposition_report"] = drep.to_json();
  const auto summary_path = o.summary.empty() ? o.out + ".summary.json" : o.summary;
  write_json(summary_path, summary);
  run.manifest.output(summary_path);
  run.manifest.result("summary", summary);
  spdlog::info("intersection: {} words, {} syllables", ts.size(), ts.vocab.size());
  run.finish();
}

struct VariantsOpts {
  std::string in, decomp, out, summary, manifest;
  double fraction = 0.0;
};

void cmd_variants(const CLI::App& app, const VariantsOpts& o) {
  Run run("prepare variants", app, o.manifest.empty() ? default_manifest(o.out) : o.manifest);
  VariantConfig cfg;
  cfg.fraction = o.fraction;
  cfg.validate();
  run.manifest.input(o.in);
  const auto ts = io::load_training_set(o.in);
  DecompositionDataset ds;
  if (o.decomp.empty()) {
    ds = dataset_of(ts);
  } else {
    run.manifest.input(o.decomp);
    ds = read_decompositions(o.decomp);
  }
  const auto marked = apply_start_end_variants(ts, ds, cfg);
  io::save_training_set(o.out, marked);
  run.manifest.output(o.out);
  auto summary = training_set_summary(marked);
  summary["syllables_before"] = ts.vocab.size();
  summary["syllables_delta"] = static_cast<std::int64_t>(marked.vocab.size()) - static_cast<std::int64_t>(ts.vocab.size());
  const auto summary_path = o.summary.empty() ? o.out + ".summary.json" : o.summary;
  write_json(summary_path, summary);
  run.manifest.output(summary_path);
  run.manifest.result("summary", summary);
  spdlog::info("variants at fraction {}: {} -> {} syllables", o.fraction, ts.vocab.size(), marked.vocab.size());
  run.finish();
}

struct OovOpts {
  std::string in, scope = "eval-only", out, summary, manifest;
  std::vector<std::string> eval_pairs;
  std::int64_t min_count = 3;
};

void cmd_oov(const CLI::App& app, const OovOpts& o) {
  Run run("prepare oov-split", app, o.manifest.empty() ? default_manifest(o.out) : o.manifest);
  const auto scope = parse_oov_scope(o.scope);
  if (scope == OovScope::eval_only && o.eval_pairs.empty()) {
    throw ConfigError("--scope eval-only needs at least one --eval-pairs file");
  }
  if (o.min_count < 1) throw ConfigError("--min-count must be at least 1");
  run.manifest.input(o.in);
  const auto ts = io::load_training_set(o.in);
  std::set<std::string> eval_words;
  for (const auto& p : o.eval_pairs) {
    run.manifest.input(p);
    const auto words = load_pairs(p).unique_words();
    eval_words.insert(words.begin(), words.end());
  }
  const auto split = make_oov_split(ts, eval_words, o.min_count, scope);
  io::save_training_set(o.out, split.retained);
  run.manifest.output(o.out);
  auto summary = split.summary();
  summary["eval_words"] = eval_words.size();
  summary["removed_words"] = split.removed_words;
  summary["variant_fraction"] = ts.marking.fraction;
  const auto summary_path = o.summary.empty() ? o.out + ".summary.json" : o.summary;
  write_json(summary_path, summary);
  run.manifest.output(summary_path);
  run.manifest.result("removed", split.removed_words.size());
  if (!split.composability_violations.empty()) {
    spdlog::warn("{} removed words contain syllables no longer in the retained vocabulary",
                 split.composability_violations.size());
  }
  spdlog::info("OOV split (min count {}, {}): removed {}, retained {}", o.min_count, o.scope,
               split.removed_words.size(), split.retained.size());
  run.finish();
}

// ---------------------------------------------------------------- analyze

struct HistogramOpts {
  std::string decomp, out, manifest;
  std::int64_t bin_width = 20, cap = 1000;
};

void cmd_histogram(const CLI::App& app, const HistogramOpts& o) {
  Run run("analyze histogram", app, o.manifest.empty() ? default_manifest(o.out) : o.manifest);
  run.manifest.input(o.decomp);
  const auto ds = read_decompositions(o.decomp);
  const auto h = syllable_histogram(ds, o.bin_width, o.cap);
  const double total = static_cast<double>(h.total());
  auto out = open_out(o.out);
  out << "min_count\tmax_count\tsyllables\tshare\n";
  for (std::size_t i = 0; i < h.bins.size(); ++i) {
    const auto lo = static_cast<std::int64_t>(i) * h.bin_width + 1;
    out << lo << '\t' << lo + h.bin_width - 1 << '\t' << h.bins[i] << '\t' << h.bins[i] / total << '\n';
  }
  out << h.cap + 1 << "\t\t" << h.overflow << '\t' << h.overflow / total << '\n';
  if (!out) throw std::runtime_error("failed writing " + o.out);
  run.manifest.output(o.out);
  run.manifest.result("syllables", h.total());
  if (!h.bins.empty()) run.manifest.result("first_bin_share", h.bins.front() / total);
  run.finish();
}

struct CoverageOpts {
  std::string decomp, out, manifest;
  int steps = 100;
};

void cmd_coverage(const CLI::App& app, const CoverageOpts& o) {
  Run run("analyze coverage", app, o.manifest.empty() ? default_manifest(o.out) : o.manifest);
  run.manifest.input(o.decomp);
  const auto ds = read_decompositions(o.decomp);
  const auto curve = coverage_curve(ds, o.steps);
  auto out = open_out(o.out);
  out << "fraction\tcoverage\n";
  out << std::setprecision(10);
  for (const auto& p : curve) out << p.fraction << '\t' << p.coverage << '\n';
  if (!out) throw std::runtime_error("failed writing " + o.out);
  run.manifest.output(o.out);
  run.finish();
}

// ---------------------------------------------------------------- train

struct EmbedderOpts {
  std::string train, decomp, kind = "vanilla", out, history, manifest;
  std::optional<double> se_fraction;
  std::size_t dim = 0;
  int epochs = 30;
  double lr = 0.05, init_scale = 0.1, early_stop_tol = 1e-6;
  std::uint64_t seed = 0;
};

void cmd_train_embedder(const CLI::App& app, const EmbedderOpts& o) {
  Run run("train embedder", app, o.manifest.empty() ? default_manifest(o.out) : o.manifest);
  const auto kind = parse_composer_kind(o.kind);
  run.manifest.input(o.train);
  auto ts = io::load_training_set(o.train);
  auto cfg = EmbedderConfig::for_kind(kind, ts.dim);
  if (o.dim) cfg.dim = o.dim;
  cfg.epochs = o.epochs;
  cfg.adam.lr0 = o.lr;
  cfg.init_scale = o.init_scale;
  cfg.early_stop_tol = o.early_stop_tol;
  cfg.seed = o.seed;
  cfg.validate();
  if (o.se_fraction) {
    DecompositionDataset ds;
    if (o.decomp.empty()) {
      ds = dataset_of(ts);
    } else {
      run.manifest.input(o.decomp);
      ds = read_decompositions(o.decomp);
    }
    ts = apply_start_end_variants(ts, ds, VariantConfig{*o.se_fraction});
  }
  spdlog::info("training {} (D={}, out={}) on {} words, {} syllables; {} parameters", o.kind, cfg.dim, cfg.out_dim,
               ts.size(), ts.vocab.size(), param_count(kind, static_cast<std::int64_t>(ts.vocab.size()),
                                                       static_cast<std::int64_t>(cfg.dim),
                                                       static_cast<std::int64_t>(cfg.out_dim)));
  const auto res = train_embedder(ts, cfg, [&](int epoch, double loss) {
    spdlog::info("epoch {:3d}  lr {:.6f}  loss {:.6e}", epoch, nn::lr_at_epoch(epoch, cfg.adam.lr0), loss);
  });
  ensure_parent(o.out);
  save_embedder(o.out, res.model);
  run.manifest.output(o.out);
  const auto history_path = o.history.empty() ? o.out + ".history.tsv" : o.history;
  auto out = open_out(history_path);
  out << "epoch\tlr\tloss\n" << std::setprecision(17);
  for (std::size_t e = 0; e < res.loss_history.size(); ++e) {
    out << e << '\t' << nn::lr_at_epoch(static_cast<int>(e), cfg.adam.lr0) << '\t' << res.loss_history[e] << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + history_path);
  run.manifest.output(history_path);
  run.manifest.result("resolved", {{"kind", o.kind},
                                    {"dim", cfg.dim},
                                    {"out_dim", cfg.out_dim},
                                    {"variant_fraction", ts.marking.fraction},
                                    {"syllables", ts.vocab.size()},
                                    {"words", ts.size()}});
  run.manifest.result("parameters", res.model.parameter_count());
  run.manifest.result("final_loss", res.loss_history.back());
  run.manifest.result("epochs_run", res.loss_history.size());
  run.manifest.result("early_stopped", res.early_stopped);
  run.finish();
}

struct SplitterOpts {
  std::string decomp, eval, out, history, grid_out, manifest;
  SplitterConfig cfg;
  bool grid = false;
};

void cmd_train_splitter(const CLI::App& app, SplitterOpts o) {
  o.cfg.validate();
  if (o.grid && o.eval.empty()) throw ConfigError("--grid needs an --eval set");
  if (!o.grid && o.out.empty()) throw ConfigError("--out is required unless --grid is given");
  const std::string primary = o.grid ? (o.grid_out.empty() ? "splitter_grid.tsv" : o.grid_out) : o.out;
  Run run(o.grid ? "train splitter --grid" : "train splitter", app,
          o.manifest.empty() ? default_manifest(primary) : o.manifest);
  run.manifest.input(o.decomp);
  const auto train = read_decompositions(o.decomp);
  std::optional<DecompositionDataset> eval;
  if (!o.eval.empty()) {
    run.manifest.input(o.eval);
    eval = read_decompositions(o.eval);
  }

  if (o.grid) {
    const auto results = run_grid(train, *eval, o.cfg, full_grid(), [](const GridResult& r) {
      if (r.accuracy) {
        spdlog::info("layers {} emb {} heads {} hidden {}: {:.1f}% ({} bytes)", r.point.layers, r.point.embedding,
                     r.point.heads, r.point.hidden, 100.0 * *r.accuracy, r.model_bytes);
      }
    });
    auto out = open_out(primary);
    write_grid_tsv(out, results);
    if (!out) throw std::runtime_error("failed writing " + primary);
    run.manifest.output(primary);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : results) {
      if (!r.accuracy) continue;
      rows.push_back({{"layers", r.point.layers}, {"embedding", r.point.embedding}, {"heads", r.point.heads},
                      {"hidden", r.point.hidden}, {"accuracy", *r.accuracy}, {"model_bytes", r.model_bytes}});
    }
    run.manifest.result("grid", rows);
    run.finish();
    return;
  }

  const auto res = train_splitter(train, o.cfg, eval ? &*eval : nullptr, [](const SplitterEpoch& e) {
    if (e.eval_loss) {
      spdlog::info("epoch {:3d}  lr {:.6f}  train {:.5f}  eval {:.5f}", e.epoch, e.lr, e.train_loss, *e.eval_loss);
    } else {
      spdlog::info("epoch {:3d}  lr {:.6f}  train {:.5f}", e.epoch, e.lr, e.train_loss);
    }
  });
  ensure_parent(o.out);
  save_splitter(o.out, res.model);
  run.manifest.output(o.out);
  const auto history_path = o.history.empty() ? o.out + ".history.tsv" : o.history;
  auto out = open_out(history_path);
  out << "epoch\tlr\ttrain_loss\teval_loss\n" << std::setprecision(17);
  for (const auto& e : res.history) {
    out << e.epoch << '\t' << e.lr << '\t' << e.train_loss << '\t';
    if (e.eval_loss) out << *e.eval_loss;
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + history_path);
  run.manifest.output(history_path);
  run.manifest.result("resolved", o.cfg.to_json());
  run.manifest.result("parameters", res.model.parameter_count());
  run.manifest.result("best_epoch", res.best_epoch);
  run.manifest.result("model_bytes", serialized_size(res.model));
  if (eval && !eval->empty()) {
    const double acc = splitter_accuracy(res.model, *eval);
    spdlog::info("eval exact-match accuracy {:.2f}%", 100.0 * acc);
    run.manifest.result("eval_accuracy", acc);
  }
  run.finish();
}

// ---------------------------------------------------------------- split

struct SplitOpts {
  std::string splitter, words_file, out, manifest;
  std::vector<std::string> words;
};

std::vector<std::string> read_word_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open word list: " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

void cmd_split(const CLI::App& app, const SplitOpts& o) {
  Run run("split", app, o.manifest.empty() ? (o.out.empty() ? "" : default_manifest(o.out)) : o.manifest);
  run.manifest.input(o.splitter);
  const auto model = load_splitter(o.splitter);
  auto words = o.words;
  if (!o.words_file.empty()) {
    run.manifest.input(o.words_file);
    const auto more = read_word_list(o.words_file);
    words.insert(words.end(), more.begin(), more.end());
  }
  if (words.empty()) throw ConfigError("no words given");
  std::ostringstream text;
  std::size_t decoded = 0;
  for (const auto& w : words) {
    const auto word = utf8::to_lower(w);
    const auto r = greedy_decode(model, word);
    if (!r.ok()) {
      text << word << '\t' << to_string(r.status) << '\t' << r.raw << '\n';
    } else if (!validate_roundtrip(word, *r.decomposition)) {
      text << word << "\troundtrip-failure\t" << r.raw << '\n';
    } else {
      text << word << "\tok\t" << r.decomposition->joined() << '\n';
      ++decoded;
    }
  }
  if (o.out.empty()) {
    std::cout << text.str();
  } else {
    auto out = open_out(o.out);
    out << text.str();
    if (!out) throw std::runtime_error("failed writing " + o.out);
    run.manifest.output(o.out);
  }
  run.manifest.result("decoded", decoded);
  run.manifest.result("words", words.size());
  run.finish();
}

// ---------------------------------------------------------------- eval

struct ModelSources {
  std::string model, emb, splitter, decomp;
};

// Owns whatever the embedding function refers to.
struct Embedder {
  std::optional<EmbeddingTable> table;
  std::optional<EmbedderModel> model;
  std::optional<SplitterModel> splitter;
  DecompositionDataset decomp;
  EmbedFn fn;
};

std::unique_ptr<Embedder> open_embedder(const ModelSources& s, Manifest& manifest) {
  auto e = std::make_unique<Embedder>();
  if (s.model.empty() == s.emb.empty()) throw ConfigError("give exactly one of --model and --emb");
  if (!s.emb.empty()) {
    if (!s.splitter.empty() || !s.decomp.empty()) throw ConfigError("--splitter/--decomp apply to --model only");
    manifest.input(s.emb);
    e->table = load_embeddings(s.emb);
    e->fn = table_embed_fn(*e->table);
    return e;
  }
  manifest.input(s.model);
  e->model = load_embedder(s.model);
  if (!s.decomp.empty()) {
    manifest.input(s.decomp);
    e->decomp = read_decompositions(s.decomp);
  }
  Decoder decoder;
  if (!s.splitter.empty()) {
    manifest.input(s.splitter);
    e->splitter = load_splitter(s.splitter);
    decoder = model_decoder(*e->splitter);
  }
  e->fn = model_embed_fn(*e->model, make_resolver(e->decomp, decoder, e->model->vocab, e->model->marking));
  return e;
}

struct EvalOpts {
  ModelSources src;
  std::string pairs, out, pairs_out, manifest;
};

void cmd_eval(const CLI::App& app, const EvalOpts& o) {
  Run run("eval pairs", app, o.manifest.empty() ? default_manifest(o.out) : o.manifest);
  const auto embedder = open_embedder(o.src, run.manifest);
  run.manifest.input(o.pairs);
  auto ds = load_pairs(o.pairs);
  ds.name = fs::path(o.pairs).stem().string();
  const auto rep = evaluate_pairs(embedder->fn, ds);
  spdlog::info("{}: spearman {:.4f} over {}/{} pairs, {} missing words", ds.name, rep.spearman, rep.pairs_used,
               rep.pairs_total, rep.missing_words);
  auto j = rep.to_json();
  j["splitter"] = !o.src.splitter.empty();
  write_json(o.out, j);
  run.manifest.output(o.out);
  const auto dump = o.pairs_out.empty() ? o.out + ".pairs.tsv" : o.pairs_out;
  auto out = open_out(dump);
  out << std::setprecision(10);
  rep.write_pair_tsv(out);
  if (!out) throw std::runtime_error("failed writing " + dump);
  run.manifest.output(dump);
  run.manifest.result("spearman", rep.spearman);
  run.manifest.result("missing_words", rep.missing_words);
  run.finish();
}

// ---------------------------------------------------------------- annotate

struct AnnotateOpts {
  std::string in, out, manifest;
  double threshold = 1.0;
};

void cmd_agreement(const CLI::App& app, const AnnotateOpts& o) {
  Run run("annotate agreement", app, o.manifest.empty() ? default_manifest(o.out) : o.manifest);
  run.manifest.input(o.in);
  const auto rep = annotator_agreement(load_annotations(o.in));
  write_json(o.out, rep.to_json());
  run.manifest.output(o.out);
  if (rep.average) run.manifest.result("average", *rep.average);
  run.finish();
}

void cmd_flags(const CLI::App& app, const AnnotateOpts& o) {
  Run run("annotate flags", app, o.manifest.empty() ? default_manifest(o.out) : o.manifest);
  run.manifest.input(o.in);
  const auto set = load_annotations(o.in);
  const auto flags = flag_deviations(set, o.threshold);
  auto out = open_out(o.out);
  out << "annotator\tpair_id\n";
  std::size_t n = 0;
  for (std::size_t a = 0; a < flags.size(); ++a) {
    for (const auto& id : flags[a]) {
      out << a + 1 << '\t' << id << '\n';
      ++n;
    }
  }
  if (!out) throw std::runtime_error("failed writing " + o.out);
  run.manifest.output(o.out);
  run.manifest.result("flagged", n);
  run.finish();
}

void cmd_aggregate(const CLI::App& app, const AnnotateOpts& o) {
  Run run("annotate aggregate", app, o.manifest.empty() ? default_manifest(o.out) : o.manifest);
  run.manifest.input(o.in);
  const auto set = load_annotations(o.in);
  const auto scores = aggregate_final_scores(set);
  auto out = open_out(o.out);
  out << "pair_id\tword1\tword2\tscore\n" << std::setprecision(10);
  for (const auto& it : set.items) out << it.id << '\t' << it.word1 << '\t' << it.word2 << '\t' << scores.at(it.id) << '\n';
  if (!out) throw std::runtime_error("failed writing " + o.out);
  run.manifest.output(o.out);
  run.finish();
}

// ---------------------------------------------------------------- export

struct ExportOpts {
  ModelSources src;
  std::string words, out, manifest;
};

void cmd_export(const CLI::App& app, const ExportOpts& o) {
  Run run("export", app, o.manifest.empty() ? default_manifest(o.out) : o.manifest);
  const auto embedder = open_embedder(o.src, run.manifest);
  run.manifest.input(o.words);
  std::vector<std::string> names;
  std::vector<std::vector<double>> vectors;
  std::vector<std::string> missing;
  std::set<std::string> seen;
  for (const auto& w : read_word_list(o.words)) {
    const auto word = utf8::to_lower(w);
    if (!seen.insert(word).second) continue;
    const auto r = embedder->fn(word);
    if (r.ok()) {
      std::string key = word;
      std::replace(key.begin(), key.end(), ' ', '_');
      names.push_back(key);
      vectors.push_back(*r.vector);
    } else {
      missing.push_back(word);
    }
  }
  if (names.empty()) throw std::runtime_error("none of the requested words could be embedded");
  auto out = open_out(o.out);
  write_embeddings(out, names, vectors, vectors.front().size());
  if (!out) throw std::runtime_error("failed writing " + o.out);
  run.manifest.output(o.out);
  run.manifest.result("exported", names.size());
  run.manifest.result("missing", missing);
  spdlog::info("exported {} vectors, {} words missing", names.size(), missing.size());
  run.finish();
}

void add_model_sources(CLI::App* cmd, ModelSources& s) {
  cmd->add_option("--model", s.model, "trained embedder container")->check(CLI::ExistingFile);
  cmd->add_option("--emb", s.emb, "fixed embedding table (word2vec text)")->check(CLI::ExistingFile);
  cmd->add_option("--splitter", s.splitter, "splitter container for words outside the table")->check(CLI::ExistingFile);
  cmd->add_option("--decomp", s.decomp, "decomposition table (word<TAB>syl-syl)")->check(CLI::ExistingFile);
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("sylemb");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%H:%M:%S] [%^%l%$] %v");
  const char* level = std::getenv("SYLEMB_LOG");
  spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::info);
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Syllable-based word embeddings: dataset preparation, training and evaluation"};
  app.set_version_flag("--version", SYLEMB_VERSION);
  app.require_subcommand(1);
  std::function<void()> action;

  // prepare
  auto* prepare = app.add_subcommand("prepare", "build training sets");
  prepare->require_subcommand(1);
  IntersectOpts io_;
  auto* intersect = prepare->add_subcommand("intersect", "words present in both the decompositions and the embeddings");
  intersect->add_option("--decomp", io_.decomp, "decomposition TSV")->required()->check(CLI::ExistingFile);
  intersect->add_option("--emb", io_.emb, "source embeddings (word2vec text)")->required()->check(CLI::ExistingFile);
  intersect->add_option("--out", io_.out, "training-set container")->required();
  intersect->add_option("--summary", io_.summary, "summary JSON [<out>.summary.json]");
  intersect->add_option("--manifest", io_.manifest, "manifest path [<out>.manifest.json]");
  intersect->callback([&] { action = [&] { cmd_intersect(*intersect, io_); }; });

  VariantsOpts vo;
  auto* variants = prepare->add_subcommand("variants", "mark frequent start and end syllables");
  variants->add_option("--in", vo.in, "training-set container")->required()->check(CLI::ExistingFile);
  variants->add_option("--fraction", vo.fraction, "fraction of start/end syllables to mark")->required()->check(CLI::Range(0.0, 1.0));
  variants->add_option("--decomp", vo.decomp, "count syllables over this decomposition TSV instead of the training set")->check(CLI::ExistingFile);
  variants->add_option("--out", vo.out, "training-set container")->required();
  variants->add_option("--summary", vo.summary, "summary JSON [<out>.summary.json]");
  variants->add_option("--manifest", vo.manifest, "manifest path [<out>.manifest.json]");
  variants->callback([&] { action = [&] { cmd_variants(*variants, vo); }; });

  OovOpts oo;
  auto* oov = prepare->add_subcommand("oov-split", "remove evaluation words whose syllables are all frequent");
  oov->add_option("--in", oo.in, "training-set container")->required()->check(CLI::ExistingFile);
  oov->add_option("--min-count", oo.min_count, "minimum variant count")->capture_default_str();
  oov->add_option("--scope", oo.scope, "eval-only or global")->capture_default_str()->check(CLI::IsMember({"eval-only", "global"}));
  oov->add_option("--eval-pairs", oo.eval_pairs, "word-pair TSV(s) whose words are candidates")->check(CLI::ExistingFile);
  oov->add_option("--out", oo.out, "retained training-set container")->required();
  oov->add_option("--summary", oo.summary, "summary JSON [<out>.summary.json]");
  oov->add_option("--manifest", oo.manifest, "manifest path [<out>.manifest.json]");
  oov->callback([&] { action = [&] { cmd_oov(*oov, oo); }; });

  // analyze
  auto* analyze = app.add_subcommand("analyze", "syllable statistics");
  analyze->require_subcommand(1);
  HistogramOpts ho;
  auto* hist = analyze->add_subcommand("histogram", "unique syllables per occurrence-count bin");
  hist->add_option("--decomp", ho.decomp, "decomposition TSV")->required()->check(CLI::ExistingFile);
  hist->add_option("--bin-width", ho.bin_width, "bin width")->capture_default_str();
  hist->add_option("--cap", ho.cap, "counts above this go to the overflow row")->capture_default_str();
  hist->add_option("--out", ho.out, "output TSV")->required();
  hist->add_option("--manifest", ho.manifest, "manifest path [<out>.manifest.json]");
  hist->callback([&] { action = [&] { cmd_histogram(*hist, ho); }; });

  CoverageOpts co;
  auto* cov = analyze->add_subcommand("coverage", "share of words covered by the most frequent syllables");
  cov->add_option("--decomp", co.decomp, "decomposition TSV")->required()->check(CLI::ExistingFile);
  cov->add_option("--steps", co.steps, "number of fraction steps")->capture_default_str();
  cov->add_option("--out", co.out, "output TSV")->required();
  cov->add_option("--manifest", co.manifest, "manifest path [<out>.manifest.json]");
  cov->callback([&] { action = [&] { cmd_coverage(*cov, co); }; });

  // train
  auto* train = app.add_subcommand("train", "train models");
  train->require_subcommand(1);
  EmbedderOpts eo;
  auto* temb = train->add_subcommand("embedder", "syllable embedder");
  temb->add_option("--train", eo.train, "training-set container")->required()->check(CLI::ExistingFile);
  temb->add_option("--kind", eo.kind, "vanilla, attention1 or attention2")->capture_default_str()->check(CLI::IsMember({"vanilla", "attention1", "attention2"}));
  temb->add_option("--se-fraction", eo.se_fraction, "mark start/end syllables at this fraction before training")->check(CLI::Range(0.0, 1.0));
  temb->add_option("--decomp", eo.decomp, "count syllables for --se-fraction over this TSV")->check(CLI::ExistingFile);
  temb->add_option("--dim", eo.dim, "syllable dimension [source dim; 2/3 of it for attention2]");
  temb->add_option("--epochs", eo.epochs, "maximum epochs")->capture_default_str();
  temb->add_option("--lr", eo.lr, "initial learning rate")->capture_default_str();
  temb->add_option("--init-scale", eo.init_scale, "initialisation scale")->capture_default_str();
  temb->add_option("--early-stop-tol", eo.early_stop_tol, "stop when the epoch loss improves by less; 0 disables")->capture_default_str();
  temb->add_option("--seed", eo.seed, "random seed")->capture_default_str();
  temb->add_option("--out", eo.out, "model container")->required();
  temb->add_option("--history", eo.history, "loss history TSV [<out>.history.tsv]");
  temb->add_option("--manifest", eo.manifest, "manifest path [<out>.manifest.json]");
  temb->callback([&] { action = [&] { cmd_train_embedder(*temb, eo); }; });

  SplitterOpts so;
  auto* tspl = train->add_subcommand("splitter", "character-level syllable splitter");
  tspl->add_option("--decomp", so.decomp, "training decompositions")->required()->check(CLI::ExistingFile);
  tspl->add_option("--eval", so.eval, "held-out decompositions (early stopping, accuracy)")->check(CLI::ExistingFile);
  tspl->add_option("--layers", so.cfg.layers, "encoder and decoder layers")->capture_default_str();
  tspl->add_option("--embedding", so.cfg.embedding, "model width")->capture_default_str();
  tspl->add_option("--heads", so.cfg.heads, "attention heads (at most embedding/4)")->capture_default_str();
  tspl->add_option("--hidden", so.cfg.hidden, "feed-forward width")->capture_default_str();
  tspl->add_option("--dropout", so.cfg.dropout, "dropout rate")->capture_default_str();
  tspl->add_option("--epochs", so.cfg.epochs, "maximum epochs")->capture_default_str();
  tspl->add_option("--patience", so.cfg.patience, "epochs without improvement before stopping; 0 disables")->capture_default_str();
  tspl->add_option("--lr", so.cfg.adam.lr0, "initial learning rate")->capture_default_str();
  tspl->add_option("--seed", so.cfg.seed, "random seed")->capture_default_str();
  tspl->add_option("--out", so.out, "model container");
  tspl->add_option("--history", so.history, "loss history TSV [<out>.history.tsv]");
  tspl->add_flag("--grid", so.grid, "train the full configuration grid and report eval accuracy");
  tspl->add_option("--grid-out", so.grid_out, "grid TSV [splitter_grid.tsv]");
  tspl->add_option("--manifest", so.manifest, "manifest path [<out>.manifest.json]");
  tspl->callback([&] { action = [&] { cmd_train_splitter(*tspl, so); }; });

  // split
  SplitOpts sp;
  auto* split = app.add_subcommand("split", "decode words into syllables");
  split->add_option("--splitter", sp.splitter, "splitter container")->required()->check(CLI::ExistingFile);
  split->add_option("--words", sp.words_file, "file with one word per line")->check(CLI::ExistingFile);
  split->add_option("--out", sp.out, "output TSV [stdout]");
  split->add_option("--manifest", sp.manifest, "manifest path [<out>.manifest.json]");
  split->add_option("word", sp.words, "words to split");
  split->callback([&] { action = [&] { cmd_split(*split, sp); }; });

  // eval
  auto* eval = app.add_subcommand("eval", "similarity benchmarks");
  eval->require_subcommand(1);
  EvalOpts ev;
  auto* pairs = eval->add_subcommand("pairs", "Spearman correlation on a word-pair set");
  add_model_sources(pairs, ev.src);
  pairs->add_option("--pairs", ev.pairs, "word-pair TSV")->required()->check(CLI::ExistingFile);
  pairs->add_option("--out", ev.out, "report JSON")->required();
  pairs->add_option("--pairs-out", ev.pairs_out, "per-pair TSV [<out>.pairs.tsv]");
  pairs->add_option("--manifest", ev.manifest, "manifest path [<out>.manifest.json]");
  pairs->callback([&] { action = [&] { cmd_eval(*pairs, ev); }; });

  // annotate
  auto* annotate = app.add_subcommand("annotate", "annotation arithmetic");
  annotate->require_subcommand(1);
  AnnotateOpts ao;
  auto add_annotation_io = [&](CLI::App* cmd) {
    cmd->add_option("--in", ao.in, "annotation TSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", ao.out, "output file")->required();
    cmd->add_option("--manifest", ao.manifest, "manifest path [<out>.manifest.json]");
  };
  auto* agree = annotate->add_subcommand("agreement", "pairwise Pearson between annotators");
  add_annotation_io(agree);
  agree->callback([&] { action = [&] { cmd_agreement(*agree, ao); }; });
  auto* flags = annotate->add_subcommand("flags", "scores far from the other annotators' mean");
  add_annotation_io(flags);
  flags->add_option("--threshold", ao.threshold, "flag deviations strictly above this")->capture_default_str();
  flags->callback([&] { action = [&] { cmd_flags(*flags, ao); }; });
  auto* aggregate = annotate->add_subcommand("aggregate", "mean score per pair");
  add_annotation_io(aggregate);
  aggregate->callback([&] { action = [&] { cmd_aggregate(*aggregate, ao); }; });

  // export
  ExportOpts ex;
  auto* exp = app.add_subcommand("export", "write embeddings for a word list");
  add_model_sources(exp, ex.src);
  exp->add_option("--words", ex.words, "file with one word or phrase per line")->required()->check(CLI::ExistingFile);
  exp->add_option("--out", ex.out, "embedding text file")->required();
  exp->add_option("--manifest", ex.manifest, "manifest path [<out>.manifest.json]");
  exp->callback([&] { action = [&] { cmd_export(*exp, ex); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    if (action) action();
  } catch (const ConfigError& e) {
    spdlog::error("configuration error: {}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
