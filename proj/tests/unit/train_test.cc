#include <cmath>
#include <random>
#include <sstream>

#include "daat/errors.h"
#include "daat/eval.h"
#include "daat/model_io.h"
#include "daat/nn/ops.h"
#include "daat/train.h"
#include "doctest.h"

using namespace daat;
using namespace daat::train;

namespace {

TrainConfig tiny() {
  TrainConfig c;
  c.epochs = 2;
  c.batch_size = 4;
  c.char_emb = 6;
  c.gcnn_dim = 5;
  c.gcnn_layers = 2;
  c.textcnn_filters = 3;
  c.filter_sizes = {2, 3};
  c.seed = 7;
  return c;
}

// Every character belongs to exactly one 2-character word.
std::vector<SegmentedSentence> pair_language(std::size_t sentences, std::uint64_t seed,
                                             char32_t first = 0x4E00) {
  std::mt19937_64 rng(seed);
  std::vector<Word> words;
  for (char32_t k = 0; k < 12; ++k) words.push_back({first + 2 * k, first + 2 * k + 1});
  std::vector<SegmentedSentence> out;
  for (std::size_t i = 0; i < sentences; ++i) {
    SegmentedSentence s;
    const int n = 2 + rng() % 4;
    for (int k = 0; k < n; ++k) s.push_back(words[rng() % words.size()]);
    out.push_back(s);
  }
  return out;
}

LabeledDataset dataset(const std::vector<SegmentedSentence>& c, Domain d) {
  LabeledDataset ds(d);
  for (const auto& s : c) ds.add(s, d == Domain::Source ? Provenance::Gold : Provenance::Distant);
  return ds;
}

bool all_zero(const std::vector<nn::Parameter*>& ps) {
  for (const auto* p : ps)
    for (double v : p->grad.values())
      if (v != 0.0) return false;
  return true;
}

std::vector<char32_t> chars_of(const LabeledDataset& a, const LabeledDataset& b) {
  auto x = character_set(a), y = character_set(b);
  x.insert(x.end(), y.begin(), y.end());
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  return x;
}

Batch batch(const LabeledDataset& ds, std::size_t n) {
  Batch b;
  for (std::size_t i = 0; i < n; ++i) b.items.push_back(&ds[i]);
  return b;
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream in("# reduced\nepochs = 3\nlr=0.01\n\nfilter_sizes=2,3\nseed=5\n");
  const TrainConfig c = parse_train_config(in);
  CHECK(c.epochs == 3);
  CHECK(c.lr == 0.01);
  CHECK(c.filter_sizes == std::vector<std::size_t>{2, 3});
  CHECK(c.seed == 5);
  CHECK(c.batch_size == 128);

  std::ostringstream out;
  for (const auto& [k, v] : c.to_pairs()) out << k << '=' << v << '\n';
  std::istringstream back(out.str());
  CHECK(parse_train_config(back) == c);

  std::istringstream unknown("epochz=3\n");
  CHECK_THROWS_AS(parse_train_config(unknown), InvalidInput);
  std::istringstream no_eq("epochs\n");
  CHECK_THROWS_AS(parse_train_config(no_eq), FormatError);
  std::istringstream bad("dropout=1.5\n");
  CHECK_THROWS_AS(parse_train_config(bad), InvalidInput);
  std::istringstream even("gcnn_window=4\n");
  CHECK_THROWS_AS(parse_train_config(even), InvalidInput);
  std::istringstream zero("batch_size=0\n");
  CHECK_THROWS_AS(parse_train_config(zero), InvalidInput);

  const TrainConfig d;
  CHECK(d.epochs == 30);
  CHECK(d.batch_size == 128);
  CHECK(d.char_emb == 200);
  CHECK(d.gcnn_dim == 200);
  CHECK(d.gcnn_layers == 5);
  CHECK(d.textcnn_filters == 200);
  CHECK(d.filter_sizes == std::vector<std::size_t>{3, 4, 5});
}

TEST_CASE("vocabulary hex roundtrip") {
  const std::vector<char32_t> v{U'a', 0x4E00, 0x10FFFF};
  CHECK(parse_vocabulary_hex(vocabulary_hex(v)) == v);
  CHECK_THROWS_AS(parse_vocabulary_hex("zz"), FormatError);
}

TEST_CASE("base segmenter losses") {
  const auto ds = dataset(pair_language(5, 1), Domain::Source);
  Segmenter seg(tiny(), character_set(ds));
  seg.store().get("crf.W").value.fill(0.0);
  nn::Graph g;
  for (Tag t : {Tag::B, Tag::M, Tag::E, Tag::S})
    CHECK(seg.loss(g, U"一", {t}, false, nullptr).value()[0] ==
          doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK(seg.tag(U"").empty());
}

TEST_CASE("one small step lowers the loss on a fixed batch") {
  const auto ds = dataset(pair_language(6, 2), Domain::Source);
  Segmenter seg(tiny(), character_set(ds));
  auto batch_loss = [&] {
    nn::Graph g;
    std::vector<nn::Var> parts;
    for (const auto& item : ds.items()) parts.push_back(seg.loss(g, item.sentence, item.tags, false, nullptr));
    return nn::add_n(parts).value()[0];
  };
  nn::Graph g;
  std::vector<nn::Var> parts;
  for (const auto& item : ds.items()) parts.push_back(seg.loss(g, item.sentence, item.tags, false, nullptr));
  nn::Var total = nn::add_n(parts);
  const double before = total.value()[0];
  g.backward(total);
  nn::Adam adam({.lr = 1e-3});
  adam.step(seg.store().all());
  CHECK(batch_loss() < before);
}

TEST_CASE("base segmenter learns an unambiguous language") {
  const auto corpus = pair_language(200, 3);
  const auto ds = dataset(corpus, Domain::Source);
  TrainConfig cfg = tiny();
  cfg.char_emb = 16;
  cfg.gcnn_dim = 16;
  cfg.batch_size = 8;
  cfg.epochs = 30;
  cfg.dropout = 0.1;
  const Segmenter seg = train_base(ds, cfg);
  std::vector<SegmentedSentence> pred;
  for (const auto& s : corpus) pred.push_back(segment(join(s), seg));
  CHECK(eval::prf(corpus, pred).f1 >= 0.99);
  CHECK(seg.loss_history().size() == 30);
  CHECK(seg.loss_history().back() < seg.loss_history().front());
}

TEST_CASE("train_base is deterministic and rejects bad datasets") {
  const auto ds = dataset(pair_language(20, 4), Domain::Source);
  const auto a = train_base(ds, tiny()), b = train_base(ds, tiny());
  CHECK(model_io::serialize(a.to_container()) == model_io::serialize(b.to_container()));
  CHECK_THROWS_AS(train_base(LabeledDataset(Domain::Source), tiny()), InvalidInput);
  CHECK_THROWS_AS(train_base(dataset(pair_language(3, 1), Domain::Target), tiny()), InvalidInput);
}

TEST_CASE("adversarial loss examples") {
  const auto src = dataset(pair_language(3, 5), Domain::Source);
  const auto tgt = dataset(pair_language(3, 6, 0x5000), Domain::Target);
  DaatModel m(tiny(), chars_of(src, tgt), Mode::Daat);
  std::vector<Sentence> s{src[0].sentence, src[1].sentence}, t{tgt[0].sentence};

  m.discriminator().proj_w->value.fill(0.0);
  m.discriminator().proj_b->value.fill(0.0);
  {
    nn::Graph g;
    CHECK(discriminator_loss(g, m, s, t).value()[0] == doctest::Approx(2 * std::log(2.0)).epsilon(1e-15));
    CHECK(confusion_loss(g, m, s, t).value()[0] == doctest::Approx(2 * std::log(2.0)).epsilon(1e-15));
  }
  m.discriminator().proj_b->value.fill(50.0);
  {
    nn::Graph g;
    CHECK(confusion_loss(g, m, s, t).value()[0] ==
          doctest::Approx(-std::log(kProbabilityFloor) - std::log1p(-kProbabilityFloor))
              .epsilon(1e-12));
  }
  nn::Rng rng(3);
  m.discriminator().proj_b->value.fill(0.3);
  nn::init_uniform(m.discriminator().proj_w->value, 0.5, rng);
  {
    nn::Graph g;
    CHECK(confusion_loss(g, m, s, t).value()[0] ==
          doctest::Approx(discriminator_loss(g, m, t, s).value()[0]).epsilon(1e-14));
  }
}

TEST_CASE("step parity and gradient routing") {
  const auto src = dataset(pair_language(4, 7), Domain::Source);
  const auto tgt = dataset(pair_language(4, 8, 0x5000), Domain::Target);
  DaatModel m(tiny(), chars_of(src, tgt), Mode::Daat);
  const Batch bs = batch(src, 2), bt = batch(tgt, 2);

  for (std::uint64_t step : {1u, 2u, 3u, 4u}) {
    m.store().zero_grad();
    nn::Graph g;
    const StepLoss sl = build_step_loss(g, m, bs, bt, step, {false, false, true}, false, nullptr);
    CHECK(sl.term == (step % 2 ? AdversarialTerm::Discriminator : AdversarialTerm::Confusion));
    g.backward(sl.total);
    if (step % 2) {
      CHECK(all_zero(m.shared_encoder_parameters()));
      CHECK(all_zero({&m.store().get("emb")}));
      CHECK_FALSE(all_zero(m.discriminator_parameters()));
    } else {
      CHECK(all_zero(m.discriminator_parameters()));
      CHECK_FALSE(all_zero(m.shared_encoder_parameters()));
    }
  }

  const auto odd = step_parameters(m, 1), even = step_parameters(m, 2);
  CHECK(odd.size() == even.size() + m.discriminator_parameters().size());
  for (const auto* p : m.discriminator_parameters())
    CHECK(std::find(even.begin(), even.end(), p) == even.end());

  // One odd step: E_shr moves only because of the tagging losses.
  auto shared_after = [&](bool with_adv) {
    DaatModel fresh(tiny(), chars_of(src, tgt), Mode::Daat);
    nn::Graph g;
    const StepLoss sl = build_step_loss(g, fresh, bs, bt, 1, {true, true, with_adv}, false, nullptr);
    g.backward(sl.total);
    nn::Adam adam;
    adam.step(step_parameters(fresh, 1));
    std::vector<nn::Tensor> out;
    for (const auto* p : fresh.shared_encoder_parameters()) out.push_back(p->value);
    return out;
  };
  CHECK(shared_after(true) == shared_after(false));
}

TEST_CASE("at mode ignores target tags and tags with the source tower") {
  const auto src = dataset(pair_language(4, 9), Domain::Source);
  const auto tgt = dataset(pair_language(4, 10, 0x5000), Domain::Target);
  DaatModel m(tiny(), chars_of(src, tgt), Mode::At);
  nn::Graph g;
  const StepLoss sl = build_step_loss(g, m, batch(src, 2), batch(tgt, 2), 2, {}, false, nullptr);
  CHECK(sl.l_tgt == 0.0);
  g.backward(sl.total);
  for (const auto* p : m.store().with_prefix("enc_tgt")) {
    for (double v : p->grad.values()) CHECK(v == 0.0);
  }
  const auto params = m.tagger_parameters();
  for (const auto* p : m.store().with_prefix("crf_tgt"))
    CHECK(std::find(params.begin(), params.end(), p) == params.end());
  CHECK(m.tag(tgt[0].sentence, Domain::Target) == m.tag(tgt[0].sentence, Domain::Source));
}

TEST_CASE("adversarial training: losses, determinism, containers") {
  const auto src = dataset(pair_language(16, 11), Domain::Source);
  const auto tgt = dataset(pair_language(16, 12, 0x5000), Domain::Target);
  std::vector<StepRecord> records;
  TrainOptions opts;
  opts.on_step = [&](const StepRecord& r, const DaatModel&) { records.push_back(r); };
  std::ostringstream log;
  opts.log = &log;
  const DaatModel a = adversarial_train(src, tgt, tiny(), opts);
  REQUIRE(records.size() == 2 * 4);
  for (const auto& r : records) {
    CHECK(r.term == (r.step % 2 ? AdversarialTerm::Discriminator : AdversarialTerm::Confusion));
    CHECK(r.l_src >= 0.0);
    CHECK(r.l_tgt >= 0.0);
    CHECK(std::isfinite(r.total));
  }
  std::size_t lines = 0;
  for (char ch : log.str()) lines += ch == '\n';
  CHECK(lines == records.size());

  const DaatModel b = adversarial_train(src, tgt, tiny());
  const std::string bytes = model_io::serialize(a.to_container());
  CHECK(bytes == model_io::serialize(b.to_container()));
  const DaatModel back = DaatModel::from_container(model_io::deserialize(bytes));
  CHECK(model_io::serialize(back.to_container()) == bytes);
  CHECK(back.tag(tgt[0].sentence, Domain::Target) == a.tag(tgt[0].sentence, Domain::Target));
  CHECK_THROWS_AS(Segmenter::from_container(a.to_container()), FormatError);

  std::vector<Sentence> raw;
  for (const auto& item : tgt.items()) raw.push_back(item.sentence);
  const DaatModel at = adversarial_train_at(src, raw, tiny());
  CHECK(at.mode() == Mode::At);
  CHECK_THROWS_AS(adversarial_train(src, LabeledDataset(Domain::Target), tiny()), InvalidInput);
}

TEST_CASE("segment is deterministic and total") {
  const auto ds = dataset(pair_language(10, 13), Domain::Source);
  const Segmenter seg = train_base(ds, tiny());
  const Sentence s = join(ds.segmentations()[0]);
  CHECK(segment(s, seg) == segment(s, seg));
  CHECK(join(segment(s, seg)) == s);
  CHECK(segment(U"x", seg) == SegmentedSentence{U"x"});
}
