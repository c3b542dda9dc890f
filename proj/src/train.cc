#include "daat/train.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>

#include "daat/errors.h"
#include "daat/nn/ops.h"

namespace daat::train {

namespace {

std::size_t parse_count(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long n = 0;
  try {
    if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
    n = std::stoull(v, &used);
  } catch (const std::exception&) {
    throw InvalidInput("config: '" + key + "' expects a non-negative integer, got '" + v + "'");
  }
  if (used != v.size())
    throw InvalidInput("config: '" + key + "' expects a non-negative integer, got '" + v + "'");
  return static_cast<std::size_t>(n);
}

double parse_real(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw InvalidInput("config: '" + key + "' expects a number, got '" + v + "'");
  }
  if (used != v.size() || !std::isfinite(x))
    throw InvalidInput("config: '" + key + "' expects a number, got '" + v + "'");
  return x;
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void add_chars(std::set<char32_t>& out, const Sentence& s) { out.insert(s.begin(), s.end()); }

nn::Var mean_of(const std::vector<nn::Var>& xs) {
  return nn::scale(nn::add_n(xs), 1.0 / static_cast<double>(xs.size()));
}

TagSequence decode(const nn::Tensor& scores, const crf::CrfHead& head) {
  return crf::viterbi_decode(scores, head.transitions());
}

// Applies only the config keys in the container, leaving the rest to the
// caller.
TrainConfig config_from(const model_io::Container& c) {
  TrainConfig cfg;
  const auto keys = TrainConfig{}.to_pairs();
  for (const auto& [k, v] : keys) cfg.set(k, c.get(k));
  cfg.validate();
  return cfg;
}

class Cursor {
 public:
  Cursor(std::size_t n, nn::Rng& rng) : order_(n), rng_(rng) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::shuffle(order_.begin(), order_.end(), rng_);
  }

  std::size_t next() {
    if (pos_ == order_.size()) {
      std::shuffle(order_.begin(), order_.end(), rng_);
      pos_ = 0;
    }
    return order_[pos_++];
  }

 private:
  std::vector<std::size_t> order_;
  nn::Rng& rng_;
  std::size_t pos_ = 0;
};

}  // namespace

void TrainConfig::validate() const {
  if (epochs == 0 || batch_size == 0 || char_emb == 0 || gcnn_dim == 0 || gcnn_layers == 0 ||
      textcnn_filters == 0 || filter_sizes.empty()) {
    throw InvalidInput("config: sizes must be positive");
  }
  if (!(lr > 0.0)) throw InvalidInput("config: lr must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw InvalidInput("config: dropout must be in [0, 1)");
  if (gcnn_window % 2 == 0) throw InvalidInput("config: gcnn_window must be odd");
  for (std::size_t f : filter_sizes)
    if (f == 0) throw InvalidInput("config: filter sizes must be positive");
}

void TrainConfig::set(const std::string& key, const std::string& value) {
  if (key == "epochs") {
    epochs = parse_count(key, value);
  } else if (key == "batch_size") {
    batch_size = parse_count(key, value);
  } else if (key == "lr") {
    lr = parse_real(key, value);
  } else if (key == "dropout") {
    dropout = parse_real(key, value);
  } else if (key == "char_emb") {
    char_emb = parse_count(key, value);
  } else if (key == "gcnn_dim") {
    gcnn_dim = parse_count(key, value);
  } else if (key == "gcnn_layers") {
    gcnn_layers = parse_count(key, value);
  } else if (key == "gcnn_window") {
    gcnn_window = parse_count(key, value);
  } else if (key == "textcnn_filters") {
    textcnn_filters = parse_count(key, value);
  } else if (key == "filter_sizes") {
    std::vector<std::size_t> sizes;
    std::size_t start = 0;
    while (start <= value.size()) {
      const auto comma = value.find(',', start);
      const auto end = comma == std::string::npos ? value.size() : comma;
      sizes.push_back(parse_count(key, trim(value.substr(start, end - start))));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    filter_sizes = std::move(sizes);
  } else if (key == "seed") {
    seed = parse_count(key, value);
  } else {
    throw InvalidInput("config: unknown key '" + key + "'");
  }
}

std::vector<std::pair<std::string, std::string>> TrainConfig::to_pairs() const {
  std::string sizes;
  for (std::size_t i = 0; i < filter_sizes.size(); ++i) {
    if (i) sizes += ',';
    sizes += std::to_string(filter_sizes[i]);
  }
  return {{"epochs", std::to_string(epochs)},
          {"batch_size", std::to_string(batch_size)},
          {"lr", format_real(lr)},
          {"dropout", format_real(dropout)},
          {"char_emb", std::to_string(char_emb)},
          {"gcnn_dim", std::to_string(gcnn_dim)},
          {"gcnn_layers", std::to_string(gcnn_layers)},
          {"gcnn_window", std::to_string(gcnn_window)},
          {"textcnn_filters", std::to_string(textcnn_filters)},
          {"filter_sizes", sizes},
          {"seed", std::to_string(seed)}};
}

TrainConfig parse_train_config(std::istream& in) {
  TrainConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw FormatError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    cfg.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

TrainConfig load_train_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_train_config(in);
}

std::vector<char32_t> character_set(const LabeledDataset& ds) {
  std::set<char32_t> chars;
  for (const auto& item : ds.items()) add_chars(chars, item.sentence);
  return {chars.begin(), chars.end()};
}

std::string vocabulary_hex(const std::vector<char32_t>& chars) {
  std::string out;
  char buf[16];
  for (std::size_t i = 0; i < chars.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%x", i ? "," : "", static_cast<unsigned>(chars[i]));
    out += buf;
  }
  return out;
}

std::vector<char32_t> parse_vocabulary_hex(const std::string& s) {
  std::vector<char32_t> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    const std::string tok = s.substr(start, comma == std::string::npos ? std::string::npos
                                                                       : comma - start);
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &used, 16);
    } catch (const std::exception&) {
      throw FormatError("model: bad vocabulary entry '" + tok + "'");
    }
    if (used != tok.size() || v > 0x10FFFF) throw FormatError("model: bad vocabulary entry '" + tok + "'");
    out.push_back(static_cast<char32_t>(v));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Base segmenter

Segmenter::Segmenter(const TrainConfig& cfg, const std::vector<char32_t>& chars) : cfg_(cfg) {
  cfg_.validate();
  embedding_ = nn::EmbeddingTable(store_, "emb", chars, cfg_.char_emb);
  encoder_ = nn::GcnnEncoder::create(store_, "enc", cfg_.gcnn_layers, cfg_.gcnn_window,
                                     cfg_.char_emb, cfg_.gcnn_dim, cfg_.dropout);
  crf_ = crf::CrfHead::create(store_, "crf", cfg_.gcnn_dim);
  nn::Rng rng(cfg_.seed);
  nn::init_uniform(embedding_.matrix().value, 0.1, rng);
  encoder_.init(rng);
  crf_.init(rng);
}

nn::Var Segmenter::features(nn::Graph& g, const Sentence& s, bool training, nn::Rng* rng) const {
  return encoder_.forward(g, embedding_.forward(g, s), training, rng);
}

nn::Var Segmenter::loss(nn::Graph& g, const Sentence& s, const TagSequence& gold, bool training,
                        nn::Rng* rng) const {
  return crf::nll(g, crf::emission_scores(g, features(g, s, training, rng), crf_), crf_, gold);
}

TagSequence Segmenter::tag(const Sentence& s) const {
  if (s.empty()) return {};
  nn::Graph g;
  nn::Var h = encoder_.forward(g, embedding_.forward(g, s, false), false, nullptr, false);
  return decode(crf::emission_scores(h.value(), crf_), crf_);
}

model_io::Container Segmenter::to_container() const {
  model_io::Container c;
  c.hyper.emplace_back("format", "segmenter");
  for (auto& kv : cfg_.to_pairs()) c.hyper.push_back(std::move(kv));
  c.hyper.emplace_back("vocab", vocabulary_hex(embedding_.chars()));
  model_io::append_parameters(c, store_);
  return c;
}

Segmenter Segmenter::from_container(const model_io::Container& c) {
  if (c.get("format") != "segmenter") throw FormatError("model: not a base segmenter");
  Segmenter s(config_from(c), parse_vocabulary_hex(c.get("vocab")));
  model_io::restore(s.store_, c);
  return s;
}

Segmenter train_base(const LabeledDataset& ds, const TrainConfig& cfg) {
  if (ds.empty()) throw InvalidInput("train_base: empty dataset");
  if (ds.domain() != Domain::Source) throw InvalidInput("train_base: dataset must be source-domain");
  Segmenter seg(cfg, character_set(ds));
  nn::Rng rng(cfg.seed + 1);
  nn::Adam adam({.lr = cfg.lr});
  const auto params = seg.store().all();

  std::vector<std::size_t> order(ds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> history;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      nn::Graph g;
      std::vector<nn::Var> losses;
      for (std::size_t k = start; k < end; ++k) {
        const auto& item = ds[order[k]];
        losses.push_back(seg.loss(g, item.sentence, item.tags, true, &rng));
        epoch_loss += losses.back().value()[0];
      }
      g.backward(mean_of(losses));
      adam.step(params);
    }
    history.push_back(epoch_loss / static_cast<double>(ds.size()));
  }
  seg.set_loss_history(std::move(history));
  return seg;
}

// ---------------------------------------------------------------------------
// Dual-encoder model

std::string_view mode_name(Mode m) { return m == Mode::Daat ? "daat" : "at"; }

Mode parse_mode(std::string_view s) {
  if (s == "daat") return Mode::Daat;
  if (s == "at") return Mode::At;
  throw InvalidInput("unknown mode '" + std::string(s) + "' (expected daat or at)");
}

DaatModel::DaatModel(const TrainConfig& cfg, const std::vector<char32_t>& chars, Mode mode)
    : cfg_(cfg), mode_(mode) {
  cfg_.validate();
  const auto make_encoder = [&](const std::string& name) {
    return nn::GcnnEncoder::create(store_, name, cfg_.gcnn_layers, cfg_.gcnn_window, cfg_.char_emb,
                                   cfg_.gcnn_dim, cfg_.dropout);
  };
  embedding_ = nn::EmbeddingTable(store_, "emb", chars, cfg_.char_emb);
  enc_src_ = make_encoder("enc_src");
  enc_tgt_ = make_encoder("enc_tgt");
  enc_shr_ = make_encoder("enc_shr");
  disc_ = nn::TextCnn::create(store_, "disc", cfg_.filter_sizes, cfg_.textcnn_filters,
                              cfg_.gcnn_dim);
  crf_src_ = crf::CrfHead::create(store_, "crf_src", 2 * cfg_.gcnn_dim);
  crf_tgt_ = crf::CrfHead::create(store_, "crf_tgt", 2 * cfg_.gcnn_dim);

  nn::Rng rng(cfg_.seed);
  nn::init_uniform(embedding_.matrix().value, 0.1, rng);
  enc_src_.init(rng);
  enc_tgt_.init(rng);
  enc_shr_.init(rng);
  disc_.init(rng);
  crf_src_.init(rng);
  crf_tgt_.init(rng);
}

nn::Var DaatModel::embed(nn::Graph& g, const Sentence& s) const { return embedding_.forward(g, s); }

nn::Var DaatModel::encode(nn::Graph& g, nn::Var x, EncoderId which, bool training,
                          nn::Rng* rng) const {
  switch (which) {
    case EncoderId::Source: return enc_src_.forward(g, x, training, rng);
    case EncoderId::Target: return enc_tgt_.forward(g, x, training, rng);
    case EncoderId::Shared: break;
  }
  return enc_shr_.forward(g, x, training, rng);
}

nn::Var DaatModel::tower_scores(nn::Graph& g, nn::Var x, nn::Var shared, Domain d, bool training,
                                nn::Rng* rng) const {
  nn::Var own = encode(g, x, d == Domain::Source ? EncoderId::Source : EncoderId::Target,
                       training, rng);
  return crf::emission_scores(g, nn::concat_cols({own, shared}), head(d));
}

nn::Tensor DaatModel::encoder_output(const Sentence& s, EncoderId which) const {
  nn::Graph g;
  return encode(g, embed(g, s), which, false, nullptr).value();
}

TagSequence DaatModel::tag(const Sentence& s, Domain d) const {
  if (s.empty()) return {};
  if (mode_ == Mode::At) d = Domain::Source;
  nn::Graph g;
  nn::Var x = embed(g, s);
  nn::Var shared = encode(g, x, EncoderId::Shared, false, nullptr);
  return decode(tower_scores(g, x, shared, d, false, nullptr).value(), head(d));
}

std::vector<nn::Parameter*> DaatModel::discriminator_parameters() const {
  return disc_.parameters();
}

std::vector<nn::Parameter*> DaatModel::shared_encoder_parameters() const {
  return enc_shr_.parameters();
}

std::vector<nn::Parameter*> DaatModel::tagger_parameters() const {
  std::vector<nn::Parameter*> out{&embedding_.matrix()};
  const auto append = [&out](const std::vector<nn::Parameter*>& ps) {
    out.insert(out.end(), ps.begin(), ps.end());
  };
  append(enc_src_.parameters());
  append(enc_shr_.parameters());
  append(crf_src_.parameters());
  if (mode_ == Mode::Daat) {
    append(enc_tgt_.parameters());
    append(crf_tgt_.parameters());
  }
  return out;
}

model_io::Container DaatModel::to_container() const {
  model_io::Container c;
  c.hyper.emplace_back("format", "daat");
  c.hyper.emplace_back("mode", std::string(mode_name(mode_)));
  for (auto& kv : cfg_.to_pairs()) c.hyper.push_back(std::move(kv));
  c.hyper.emplace_back("vocab", vocabulary_hex(embedding_.chars()));
  model_io::append_parameters(c, store_);
  return c;
}

DaatModel DaatModel::from_container(const model_io::Container& c) {
  if (c.get("format") != "daat") throw FormatError("model: not a dual-encoder model");
  Mode mode;
  try {
    mode = parse_mode(c.get("mode"));
  } catch (const InvalidInput& e) {
    throw FormatError(std::string("model: ") + e.what());
  }
  DaatModel m(config_from(c), parse_vocabulary_hex(c.get("vocab")), mode);
  model_io::restore(m.store_, c);
  return m;
}

// ---------------------------------------------------------------------------
// Losses

nn::Var adversarial_loss(nn::Graph& g, const nn::TextCnn& disc,
                         const std::vector<nn::Var>& src_shared,
                         const std::vector<nn::Var>& tgt_shared, AdversarialTerm term,
                         bool discriminator_trainable) {
  if (src_shared.empty() || tgt_shared.empty())
    throw InvalidInput("adversarial loss needs sentences from both domains");
  // log G(h) for one side, log(1 - G(h)) = log G(-logit) for the other.
  const auto side = [&](const std::vector<nn::Var>& hs, bool toward_source) {
    std::vector<nn::Var> terms;
    for (const nn::Var& h : hs) {
      nn::Var logit = disc.logit(g, h, discriminator_trainable);
      if (!toward_source) logit = nn::scale(logit, -1.0);
      terms.push_back(nn::log_clamped(nn::sigmoid(logit), kProbabilityFloor));
    }
    return nn::scale(nn::add_n(terms), -1.0 / static_cast<double>(hs.size()));
  };
  const bool d = term == AdversarialTerm::Discriminator;
  return nn::add(side(src_shared, d), side(tgt_shared, !d));
}

namespace {

nn::Var inference_adversarial(nn::Graph& g, const DaatModel& m, const std::vector<Sentence>& src,
                              const std::vector<Sentence>& tgt, AdversarialTerm term) {
  const auto shared = [&](const std::vector<Sentence>& ss) {
    std::vector<nn::Var> out;
    for (const auto& s : ss) out.push_back(m.encode(g, m.embed(g, s), EncoderId::Shared, false, nullptr));
    return out;
  };
  return adversarial_loss(g, m.discriminator(), shared(src), shared(tgt), term, true);
}

}  // namespace

nn::Var discriminator_loss(nn::Graph& g, const DaatModel& m, const std::vector<Sentence>& src,
                           const std::vector<Sentence>& tgt) {
  return inference_adversarial(g, m, src, tgt, AdversarialTerm::Discriminator);
}

nn::Var confusion_loss(nn::Graph& g, const DaatModel& m, const std::vector<Sentence>& src,
                       const std::vector<Sentence>& tgt) {
  return inference_adversarial(g, m, src, tgt, AdversarialTerm::Confusion);
}

TaggingLosses tagging_losses(const DaatModel& m, const std::vector<LabeledItem>& src,
                             const std::vector<LabeledItem>& tgt) {
  if (src.empty()) throw InvalidInput("tagging_losses: empty source batch");
  const auto mean_nll = [&](const std::vector<LabeledItem>& items, Domain d) {
    if (items.empty()) return std::numeric_limits<double>::quiet_NaN();
    double total = 0.0;
    for (const auto& item : items) {
      nn::Graph g;
      nn::Var x = m.embed(g, item.sentence);
      nn::Var shared = m.encode(g, x, EncoderId::Shared, false, nullptr);
      total += crf::nll_loss(m.tower_scores(g, x, shared, d, false, nullptr).value(),
                             m.head(d).transitions(), item.tags);
    }
    return total / static_cast<double>(items.size());
  };
  return {mean_nll(src, Domain::Source), mean_nll(tgt, Domain::Target)};
}

StepLoss build_step_loss(nn::Graph& g, const DaatModel& m, const Batch& src, const Batch& tgt,
                         std::uint64_t step, const StepTerms& terms, bool training,
                         nn::Rng* rng) {
  if (src.items.empty() || tgt.items.empty()) throw InvalidInput("step: empty batch");
  StepLoss out;
  out.term = step % 2 == 1 ? AdversarialTerm::Discriminator : AdversarialTerm::Confusion;
  const bool use_tgt = terms.tgt && m.mode() == Mode::Daat;

  const auto run_side = [&](const Batch& b, Domain d, bool tag_loss, std::vector<nn::Var>& shared,
                            std::vector<nn::Var>& losses) {
    for (const LabeledItem* item : b.items) {
      nn::Var x = m.embed(g, item->sentence);
      nn::Var h = m.encode(g, x, EncoderId::Shared, training, rng);
      if (tag_loss) {
        losses.push_back(
            crf::nll(g, m.tower_scores(g, x, h, d, training, rng), m.head(d), item->tags));
      }
      if (terms.adversarial)
        shared.push_back(out.term == AdversarialTerm::Discriminator ? nn::detach(h) : h);
    }
  };

  std::vector<nn::Var> src_shared, tgt_shared, src_losses, tgt_losses;
  run_side(src, Domain::Source, terms.src, src_shared, src_losses);
  run_side(tgt, Domain::Target, use_tgt, tgt_shared, tgt_losses);

  std::vector<nn::Var> parts;
  if (terms.src) {
    parts.push_back(mean_of(src_losses));
    out.l_src = parts.back().value()[0];
  }
  if (use_tgt) {
    parts.push_back(mean_of(tgt_losses));
    out.l_tgt = parts.back().value()[0];
  }
  if (terms.adversarial) {
    parts.push_back(adversarial_loss(g, m.discriminator(), src_shared, tgt_shared, out.term,
                                     out.term == AdversarialTerm::Discriminator));
    out.l_adv = parts.back().value()[0];
  }
  if (parts.empty()) throw InvalidInput("step: no loss terms selected");
  out.total = nn::add_n(parts);
  return out;
}

std::vector<nn::Parameter*> step_parameters(const DaatModel& m, std::uint64_t step) {
  auto params = m.tagger_parameters();
  if (step % 2 == 1) {
    const auto disc = m.discriminator_parameters();
    params.insert(params.end(), disc.begin(), disc.end());
  }
  return params;
}

namespace {

DaatModel run_adversarial(const LabeledDataset& src, const std::vector<LabeledItem>& tgt,
                          Mode mode, const TrainConfig& cfg, const TrainOptions& opts) {
  cfg.validate();
  if (src.empty()) throw InvalidInput("adversarial_train: empty source dataset");
  if (tgt.empty()) throw InvalidInput("adversarial_train: empty target data");

  std::set<char32_t> chars;
  for (const auto& item : src.items()) add_chars(chars, item.sentence);
  for (const auto& item : tgt) add_chars(chars, item.sentence);
  DaatModel m(cfg, {chars.begin(), chars.end()}, mode);

  nn::Rng rng(cfg.seed + 1);
  nn::Adam adam({.lr = cfg.lr});
  Cursor src_cursor(src.size(), rng);
  Cursor tgt_cursor(tgt.size(), rng);
  const std::size_t steps_per_epoch =
      (std::max(src.size(), tgt.size()) + cfg.batch_size - 1) / cfg.batch_size;
  const auto t0 = std::chrono::steady_clock::now();

  std::uint64_t step = 0;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    for (std::size_t k = 0; k < steps_per_epoch; ++k) {
      ++step;
      Batch bs, bt;
      for (std::size_t i = 0; i < cfg.batch_size; ++i) {
        bs.items.push_back(&src[src_cursor.next()]);
        bt.items.push_back(&tgt[tgt_cursor.next()]);
      }
      nn::Graph g;
      const StepLoss sl = build_step_loss(g, m, bs, bt, step, {}, true, &rng);
      StepRecord rec{epoch, step, sl.term, sl.l_src, sl.l_tgt, sl.l_adv, sl.total.value()[0]};
      if (!std::isfinite(rec.total)) {
        throw Error("adversarial_train: non-finite loss at step " + std::to_string(step));
      }
      g.backward(sl.total);
      adam.step(step_parameters(m, step));
      m.store().zero_grad();

      if (opts.on_step) opts.on_step(rec, m);
      if (opts.log) {
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
        char buf[160];
        std::snprintf(buf, sizeof buf, "%zu\t%llu\t%.6f\t%.6f\t%.6f\t%lld\n", epoch,
                      static_cast<unsigned long long>(step), rec.l_src, rec.l_tgt, rec.l_adv,
                      static_cast<long long>(ms));
        *opts.log << buf;
      }
    }
    if (!opts.checkpoint_dir.empty()) {
      model_io::save(opts.checkpoint_dir / ("epoch-" + std::to_string(epoch) + ".daat"),
                     m.to_container());
    }
  }
  return m;
}

}  // namespace

DaatModel adversarial_train(const LabeledDataset& src, const LabeledDataset& tgt,
                            const TrainConfig& cfg, const TrainOptions& opts) {
  return run_adversarial(src, tgt.items(), Mode::Daat, cfg, opts);
}

DaatModel adversarial_train_at(const LabeledDataset& src, const std::vector<Sentence>& raw_tgt,
                               const TrainConfig& cfg, const TrainOptions& opts) {
  std::vector<LabeledItem> tgt;
  tgt.reserve(raw_tgt.size());
  for (const auto& s : raw_tgt) {
    if (s.empty()) throw InvalidInput("adversarial_train: empty target sentence");
    tgt.push_back({s, {}, Provenance::Distant});
  }
  return run_adversarial(src, tgt, Mode::At, cfg, opts);
}

SegmentedSentence segment(const Sentence& s, const DaatModel& m, Domain d) {
  return tags_to_words(s, m.tag(s, d));
}

SegmentedSentence segment(const Sentence& s, const Tagger& t) { return tags_to_words(s, t.tag(s)); }

}  // namespace daat::train
