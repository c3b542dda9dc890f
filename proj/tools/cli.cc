#include "cli.h"

#include <CLI11.hpp>
#include <omp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "daat/annotator.h"
#include "daat/corpus.h"
#include "daat/errors.h"
#include "daat/eval.h"
#include "daat/gradcheck.h"
#include "daat/miner.h"
#include "daat/model_io.h"
#include "daat/train.h"

namespace daat::cli {

namespace {

// A flag combination CLI11 cannot reject on its own.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Global {
  std::uint64_t seed = 42;
  int threads = 0;
  CLI::Option* seed_opt = nullptr;
};

// Table-2 flags shared by both training commands.
struct ConfigFlags {
  std::string config_path;
  std::optional<std::size_t> epochs, batch_size, char_emb, gcnn_dim, gcnn_layers, gcnn_window,
      textcnn_filters;
  std::optional<double> lr, dropout;
  std::string filter_sizes;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "key=value training config file");
    app->add_option("--epochs", epochs);
    app->add_option("--batch-size", batch_size);
    app->add_option("--lr", lr);
    app->add_option("--dropout", dropout);
    app->add_option("--char-emb", char_emb);
    app->add_option("--gcnn-dim", gcnn_dim);
    app->add_option("--gcnn-layers", gcnn_layers);
    app->add_option("--gcnn-window", gcnn_window);
    app->add_option("--textcnn-filters", textcnn_filters);
    app->add_option("--filter-sizes", filter_sizes, "comma-separated, e.g. 3,4,5");
  }

  train::TrainConfig build(const Global& g) const {
    train::TrainConfig cfg = config_path.empty() ? train::TrainConfig{}
                                                 : train::load_train_config(config_path);
    if (epochs) cfg.epochs = *epochs;
    if (batch_size) cfg.batch_size = *batch_size;
    if (lr) cfg.lr = *lr;
    if (dropout) cfg.dropout = *dropout;
    if (char_emb) cfg.char_emb = *char_emb;
    if (gcnn_dim) cfg.gcnn_dim = *gcnn_dim;
    if (gcnn_layers) cfg.gcnn_layers = *gcnn_layers;
    if (gcnn_window) cfg.gcnn_window = *gcnn_window;
    if (textcnn_filters) cfg.textcnn_filters = *textcnn_filters;
    try {
      if (!filter_sizes.empty()) cfg.set("filter_sizes", filter_sizes);
      if (g.seed_opt->count() > 0 || config_path.empty()) cfg.seed = g.seed;
      cfg.validate();
    } catch (const InvalidInput& e) {
      throw UsageError(e.what());
    }
    return cfg;
  }
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

Domain parse_domain(const std::string& s) {
  if (s == "source") return Domain::Source;
  if (s == "target") return Domain::Target;
  throw UsageError("--domain must be source or target");
}

// A model file holds either a base segmenter or a dual-encoder model.
class LoadedModel {
 public:
  explicit LoadedModel(const std::string& path) {
    auto c = model_io::load(path);
    const auto& format = c.get("format");
    if (format == "segmenter") {
      base_.emplace(train::Segmenter::from_container(c));
    } else if (format == "daat") {
      daat_.emplace(train::DaatModel::from_container(c));
    } else {
      throw FormatError("model: unknown format '" + format + "'");
    }
  }

  TagSequence tag(const Sentence& s, Domain d) const {
    return base_ ? base_->tag(s) : daat_->tag(s, d);
  }
  const train::Segmenter* base() const { return base_ ? &*base_ : nullptr; }

 private:
  std::optional<train::Segmenter> base_;
  std::optional<train::DaatModel> daat_;
};

int cmd_mine(const std::string& input, const std::string& out_path, miner::MinerConfig cfg,
             const std::string& stopwords, std::ostream& out) {
  if (!stopwords.empty()) cfg.stopwords = miner::load_stopwords(stopwords);
  try {
    cfg.validate();
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  const auto corpus = load_raw(input);
  const auto words = miner::mine(corpus, cfg);
  miner::write_lexicon(out_path, words);
  out << "mined " << words.size() << " words from " << corpus.size() << " sentences\n";
  return kOk;
}

int cmd_annotate(const std::string& input, const std::string& lexicon, const std::string& model,
                 const std::string& out_path, std::ostream& out) {
  const auto raw = load_raw(input);
  const auto words = miner::read_lexicon(lexicon);
  LoadedModel m(model);
  if (!m.base()) throw FormatError("annotate: --model must be a base segmenter");
  const auto annotated = annotator::annotate_corpus(raw, words, *m.base());
  annotator::write_distant(out_path, annotated);
  out << "annotated " << annotated.size() << " sentences\n";
  return kOk;
}

LabeledDataset load_labeled(const std::string& path, Domain d, Provenance p) {
  LabeledDataset ds(d);
  for (const auto& words : load_segmented(path)) ds.add(words, p);
  return ds;
}

int cmd_train_base(const std::string& train_path, const std::string& out_model,
                   const train::TrainConfig& cfg, std::ostream& out) {
  const auto ds = load_labeled(train_path, Domain::Source, Provenance::Gold);
  const auto seg = train::train_base(ds, cfg);
  model_io::save(out_model, seg.to_container());
  char buf[64];
  for (std::size_t e = 0; e < seg.loss_history().size(); ++e) {
    std::snprintf(buf, sizeof buf, "epoch %zu loss %.6f\n", e + 1, seg.loss_history()[e]);
    out << buf;
  }
  return kOk;
}

int cmd_train_daat(const std::string& source, const std::string& target,
                   const std::string& out_model, const std::string& mode_str,
                   const std::string& log_path, const std::string& checkpoint_dir,
                   const train::TrainConfig& cfg, std::ostream& out) {
  train::Mode mode;
  try {
    mode = train::parse_mode(mode_str);
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  const auto src = load_labeled(source, Domain::Source, Provenance::Gold);
  std::ofstream log;
  train::TrainOptions opts;
  if (!log_path.empty()) {
    log = open_out(log_path);
    log << "epoch\tstep\tL_src\tL_tgt\tL_adv\twall_ms\n";
    opts.log = &log;
  }
  opts.checkpoint_dir = checkpoint_dir;
  if (!checkpoint_dir.empty()) std::filesystem::create_directories(checkpoint_dir);

  if (mode == train::Mode::Daat) {
    const auto tgt = load_labeled(target, Domain::Target, Provenance::Distant);
    model_io::save(out_model, train::adversarial_train(src, tgt, cfg, opts).to_container());
  } else {
    const auto raw = load_raw(target);
    model_io::save(out_model, train::adversarial_train_at(src, raw, cfg, opts).to_container());
  }
  out << "trained " << train::mode_name(mode) << " model for " << cfg.epochs << " epochs\n";
  return kOk;
}

int cmd_segment(const std::string& model, const std::string& input, const std::string& domain,
                const std::string& out_path) {
  const Domain d = parse_domain(domain);
  LoadedModel m(model);
  const auto raw = load_raw(input);
  std::vector<SegmentedSentence> result(raw.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < raw.size(); ++i) result[i] = tags_to_words(raw[i], m.tag(raw[i], d));
  write_segmented(out_path, result);
  return kOk;
}

int cmd_eval(const std::string& gold_path, const std::string& pred_path,
             const std::string& out_path, const std::string& train_path, std::ostream& out) {
  const auto gold = load_segmented(gold_path);
  const auto pred = load_segmented(pred_path);
  const auto rep = train_path.empty()
                       ? eval::prf(gold, pred)
                       : eval::prf(gold, pred, Vocabulary::from_corpus(load_segmented(train_path)));
  if (!out_path.empty()) eval::report(rep, out_path);
  out << eval::format_table(rep);
  return kOk;
}

int cmd_gradcheck(const gradcheck::Options& opts, std::ostream& out) {
  bool ok = true;
  char buf[160];
  for (const auto& r : gradcheck::run_suite(opts)) {
    std::snprintf(buf, sizeof buf, "%-20s trials=%zu max_rel_err=%.3e tol=%.0e %s\n",
                  r.name.c_str(), r.trials, r.max_error, r.tolerance, r.passed() ? "ok" : "FAIL");
    out << buf;
    ok = ok && r.passed();
  }
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-domain word segmentation: lexicon mining, distant annotation and "
               "adversarial training"};
  app.name("daat");
  app.require_subcommand(1, 1);
  Global g;
  g.seed_opt = app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "worker thread cap (0 = runtime default)");

  std::function<int()> action;

  auto* mine = app.add_subcommand("mine", "mine a domain lexicon from raw text");
  std::string mine_in, mine_out, mine_stop;
  miner::MinerConfig mcfg;
  mine->add_option("--input", mine_in)->required();
  mine->add_option("--out", mine_out)->required();
  mine->add_option("--pval", mcfg.p_val_threshold)->capture_default_str();
  mine->add_option("--min-freq", mcfg.min_frequency)->capture_default_str();
  mine->add_option("--nmin", mcfg.n_min)->capture_default_str();
  mine->add_option("--nmax", mcfg.n_max)->capture_default_str();
  mine->add_option("--stopwords", mine_stop);
  mine->callback([&] { action = [&] { return cmd_mine(mine_in, mine_out, mcfg, mine_stop, out); }; });

  auto* annotate = app.add_subcommand("annotate", "distantly annotate raw target text");
  std::string ann_in, ann_lex, ann_model, ann_out;
  annotate->add_option("--input", ann_in)->required();
  annotate->add_option("--lexicon", ann_lex)->required();
  annotate->add_option("--model", ann_model)->required();
  annotate->add_option("--out", ann_out)->required();
  annotate->callback([&] {
    action = [&] { return cmd_annotate(ann_in, ann_lex, ann_model, ann_out, out); };
  });

  auto* tbase = app.add_subcommand("train-base", "train the base segmenter on gold source data");
  std::string tb_train, tb_out;
  ConfigFlags tb_cfg;
  tbase->add_option("--train", tb_train)->required();
  tbase->add_option("--out-model", tb_out)->required();
  tb_cfg.attach(tbase);
  tbase->callback([&] {
    action = [&] { return cmd_train_base(tb_train, tb_out, tb_cfg.build(g), out); };
  });

  auto* tdaat = app.add_subcommand("train-daat", "adversarial training on source and target data");
  std::string td_src, td_tgt, td_out, td_mode = "daat", td_log, td_ckpt;
  ConfigFlags td_cfg;
  tdaat->add_option("--source", td_src)->required();
  tdaat->add_option("--target", td_tgt, "distantly annotated (daat) or raw (at) target text")
      ->required();
  tdaat->add_option("--out-model", td_out)->required();
  tdaat->add_option("--mode", td_mode)->capture_default_str();
  tdaat->add_option("--log", td_log, "TSV training log");
  tdaat->add_option("--checkpoint-dir", td_ckpt);
  td_cfg.attach(tdaat);
  tdaat->callback([&] {
    action = [&] {
      return cmd_train_daat(td_src, td_tgt, td_out, td_mode, td_log, td_ckpt, td_cfg.build(g), out);
    };
  });

  auto* seg = app.add_subcommand("segment", "segment raw text with a trained model");
  std::string sg_model, sg_in, sg_domain = "target", sg_out;
  seg->add_option("--model", sg_model)->required();
  seg->add_option("--input", sg_in)->required();
  seg->add_option("--domain", sg_domain)->capture_default_str();
  seg->add_option("--out", sg_out)->required();
  seg->callback([&] { action = [&] { return cmd_segment(sg_model, sg_in, sg_domain, sg_out); }; });

  auto* ev = app.add_subcommand("eval", "word-level P/R/F1 against a gold file");
  std::string ev_gold, ev_pred, ev_out, ev_train;
  ev->add_option("--gold", ev_gold)->required();
  ev->add_option("--pred", ev_pred)->required();
  ev->add_option("--out", ev_out, "single-line JSON report");
  ev->add_option("--train", ev_train, "segmented training file for the OOV rate");
  ev->callback([&] { action = [&] { return cmd_eval(ev_gold, ev_pred, ev_out, ev_train, out); }; });

  auto* gc = app.add_subcommand("gradcheck", "finite-difference check of every differentiable op");
  gradcheck::Options gopts;
  gc->add_option("--trials", gopts.trials)->capture_default_str();
  gc->add_option("--tolerance", gopts.tolerance)->capture_default_str();
  gc->callback([&] {
    action = [&] {
      gopts.seed = g.seed;
      return cmd_gradcheck(gopts, out);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (g.threads < 0) {
    err << "--threads must be non-negative\n";
    return kUsage;
  }
  if (g.threads > 0) omp_set_num_threads(g.threads);

  try {
    return action();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace daat::cli
