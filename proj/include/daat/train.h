// Base segmenter training and the alternating adversarial procedure over a
// source tower [E_src + E_shr -> crf_src], a target tower
// [E_tgt + E_shr -> crf_tgt] and a text-CNN domain discriminator on E_shr.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "daat/corpus.h"
#include "daat/crf.h"
#include "daat/model_io.h"
#include "daat/nn/adam.h"
#include "daat/nn/graph.h"
#include "daat/nn/layers.h"

namespace daat::train {

struct TrainConfig {
  std::size_t epochs = 30;
  std::size_t batch_size = 128;
  double lr = 0.001;
  double dropout = 0.3;
  std::size_t char_emb = 200;
  std::size_t gcnn_dim = 200;
  std::size_t gcnn_layers = 5;
  std::size_t gcnn_window = 3;
  std::size_t textcnn_filters = 200;
  std::vector<std::size_t> filter_sizes{3, 4, 5};
  std::uint64_t seed = 42;

  void validate() const;
  // Throws InvalidInput on an unknown key or unparsable value.
  void set(const std::string& key, const std::string& value);
  std::vector<std::pair<std::string, std::string>> to_pairs() const;
  bool operator==(const TrainConfig&) const = default;
};

// key=value lines; '#' starts a comment line; unknown keys are rejected.
TrainConfig parse_train_config(std::istream& in);
TrainConfig load_train_config(const std::filesystem::path& path);

// Sorted distinct characters.
std::vector<char32_t> character_set(const LabeledDataset& ds);

class Segmenter : public Tagger {
 public:
  Segmenter(const TrainConfig& cfg, const std::vector<char32_t>& chars);

  TagSequence tag(const Sentence& s) const override;
  nn::Var features(nn::Graph& g, const Sentence& s, bool training, nn::Rng* rng) const;
  nn::Var loss(nn::Graph& g, const Sentence& s, const TagSequence& gold, bool training,
               nn::Rng* rng) const;

  const TrainConfig& config() const { return cfg_; }
  nn::ParameterStore& store() { return store_; }
  const nn::ParameterStore& store() const { return store_; }
  const std::vector<double>& loss_history() const { return loss_history_; }
  void set_loss_history(std::vector<double> h) { loss_history_ = std::move(h); }

  model_io::Container to_container() const;
  static Segmenter from_container(const model_io::Container& c);

 private:
  TrainConfig cfg_;
  nn::ParameterStore store_;
  nn::EmbeddingTable embedding_;
  nn::GcnnEncoder encoder_;
  crf::CrfHead crf_;
  std::vector<double> loss_history_;
};

// Mean per-sentence NLL of each epoch ends up in loss_history().
Segmenter train_base(const LabeledDataset& ds, const TrainConfig& cfg);

enum class Mode { Daat, At };
std::string_view mode_name(Mode m);
Mode parse_mode(std::string_view s);

enum class EncoderId { Source, Target, Shared };

class DaatModel {
 public:
  DaatModel(const TrainConfig& cfg, const std::vector<char32_t>& chars, Mode mode);

  const TrainConfig& config() const { return cfg_; }
  Mode mode() const { return mode_; }

  nn::Var embed(nn::Graph& g, const Sentence& s) const;
  nn::Var encode(nn::Graph& g, nn::Var x, EncoderId which, bool training, nn::Rng* rng) const;
  // Emission scores of a tower given the embedded sentence and its E_shr output.
  nn::Var tower_scores(nn::Graph& g, nn::Var x, nn::Var shared, Domain d, bool training,
                       nn::Rng* rng) const;

  // Inference-mode encoder output, n x gcnn_dim.
  nn::Tensor encoder_output(const Sentence& s, EncoderId which) const;
  // The target tower in At mode is never trained, so Target falls back to Source.
  TagSequence tag(const Sentence& s, Domain d) const;

  const nn::TextCnn& discriminator() const { return disc_; }
  const crf::CrfHead& head(Domain d) const { return d == Domain::Source ? crf_src_ : crf_tgt_; }
  nn::ParameterStore& store() { return store_; }
  const nn::ParameterStore& store() const { return store_; }

  std::vector<nn::Parameter*> discriminator_parameters() const;
  std::vector<nn::Parameter*> shared_encoder_parameters() const;
  // Everything the tagging losses can reach in this mode.
  std::vector<nn::Parameter*> tagger_parameters() const;

  model_io::Container to_container() const;
  static DaatModel from_container(const model_io::Container& c);

 private:
  TrainConfig cfg_;
  Mode mode_;
  nn::ParameterStore store_;
  nn::EmbeddingTable embedding_;
  nn::GcnnEncoder enc_src_, enc_tgt_, enc_shr_;
  nn::TextCnn disc_;
  crf::CrfHead crf_src_, crf_tgt_;
};

// Tagger view of one tower.
class TowerTagger : public Tagger {
 public:
  TowerTagger(const DaatModel& m, Domain d) : model_(m), domain_(d) {}
  TagSequence tag(const Sentence& s) const override { return model_.tag(s, domain_); }

 private:
  const DaatModel& model_;
  Domain domain_;
};

inline constexpr double kProbabilityFloor = 1e-7;

enum class AdversarialTerm { Discriminator, Confusion };

// L_d = -mean_src log G(h) - mean_tgt log(1 - G(h)); L_c swaps the two logs.
nn::Var adversarial_loss(nn::Graph& g, const nn::TextCnn& disc,
                         const std::vector<nn::Var>& src_shared,
                         const std::vector<nn::Var>& tgt_shared, AdversarialTerm term,
                         bool discriminator_trainable);

// Inference-mode losses over whole sentence lists, with gradients reaching
// every parameter on the path.
nn::Var discriminator_loss(nn::Graph& g, const DaatModel& m, const std::vector<Sentence>& src,
                           const std::vector<Sentence>& tgt);
nn::Var confusion_loss(nn::Graph& g, const DaatModel& m, const std::vector<Sentence>& src,
                       const std::vector<Sentence>& tgt);

struct TaggingLosses {
  double l_src = 0.0;
  double l_tgt = 0.0;
};
TaggingLosses tagging_losses(const DaatModel& m, const std::vector<LabeledItem>& src,
                             const std::vector<LabeledItem>& tgt);

struct Batch {
  std::vector<const LabeledItem*> items;
};

struct StepTerms {
  bool src = true;
  bool tgt = true;
  bool adversarial = true;
};

struct StepLoss {
  nn::Var total;
  double l_src = 0.0;
  double l_tgt = 0.0;
  double l_adv = 0.0;
  AdversarialTerm term = AdversarialTerm::Discriminator;
};

// Assembles the loss of step j (1-based): odd steps use L_d on detached
// E_shr features, even steps use L_c with the discriminator frozen. Target
// tags are ignored in At mode.
StepLoss build_step_loss(nn::Graph& g, const DaatModel& m, const Batch& src, const Batch& tgt,
                         std::uint64_t step, const StepTerms& terms, bool training,
                         nn::Rng* rng);

// Parameters updated after step j.
std::vector<nn::Parameter*> step_parameters(const DaatModel& m, std::uint64_t step);

struct StepRecord {
  std::size_t epoch = 0;
  std::uint64_t step = 0;
  AdversarialTerm term = AdversarialTerm::Discriminator;
  double l_src = 0.0;
  double l_tgt = 0.0;
  double l_adv = 0.0;
  double total = 0.0;
};

struct TrainOptions {
  std::function<void(const StepRecord&, const DaatModel&)> on_step;
  std::ostream* log = nullptr;             // TSV: epoch, step, L_src, L_tgt, L_adv, wall-ms
  std::filesystem::path checkpoint_dir;    // epoch-N.daat per epoch when set
};

DaatModel adversarial_train(const LabeledDataset& src, const LabeledDataset& tgt,
                            const TrainConfig& cfg, const TrainOptions& opts = {});
DaatModel adversarial_train_at(const LabeledDataset& src, const std::vector<Sentence>& raw_tgt,
                               const TrainConfig& cfg, const TrainOptions& opts = {});

SegmentedSentence segment(const Sentence& s, const DaatModel& m, Domain d);
SegmentedSentence segment(const Sentence& s, const Tagger& t);

std::string vocabulary_hex(const std::vector<char32_t>& chars);
std::vector<char32_t> parse_vocabulary_hex(const std::string& s);

}  // namespace daat::train
