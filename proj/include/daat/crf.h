// Linear-chain CRF over the four BMES labels.
//
// Path score of tags y over emission scores S (n x 4):
//   start[y_0] + sum_i S[i][y_i] + sum_{i>0} T[y_{i-1}][y_i] + stop[y_{n-1}]
// The log-partition is computed with the forward algorithm in log space.

#pragma once

#include <string>

#include "daat/corpus.h"
#include "daat/nn/graph.h"
#include "daat/nn/layers.h"
#include "daat/nn/tensor.h"

namespace daat::crf {

struct Transitions {
  const nn::Tensor& trans;  // 4 x 4, from-row to-column
  const nn::Tensor& start;  // 4
  const nn::Tensor& stop;   // 4
};

struct CrfHead {
  nn::Parameter* w = nullptr;      // hidden x 4
  nn::Parameter* b = nullptr;      // 4
  nn::Parameter* trans = nullptr;  // 4 x 4
  nn::Parameter* start = nullptr;  // 4
  nn::Parameter* stop = nullptr;   // 4

  static CrfHead create(nn::ParameterStore& store, const std::string& prefix, std::size_t hidden);
  std::size_t hidden() const { return w->value.dim(0); }
  void init(nn::Rng& rng);
  Transitions transitions() const { return {trans->value, start->value, stop->value}; }
  std::vector<nn::Parameter*> parameters() const { return {w, b, trans, start, stop}; }
};

// S = H W + b. Throws InvalidInput when H's width differs from the head's.
nn::Tensor emission_scores(const nn::Tensor& hidden, const CrfHead& head);

double path_score(const nn::Tensor& scores, const Transitions& t, const TagSequence& tags);
double log_partition(const nn::Tensor& scores, const Transitions& t);
double nll_loss(const nn::Tensor& scores, const Transitions& t, const TagSequence& gold);

// Per-position label marginals, n x 4.
nn::Tensor marginals(const nn::Tensor& scores, const Transitions& t);

struct NllGradients {
  nn::Tensor scores;  // n x 4: marginal - gold indicator
  nn::Tensor trans;
  nn::Tensor start;
  nn::Tensor stop;
};
NllGradients nll_gradients(const nn::Tensor& scores, const Transitions& t,
                           const TagSequence& gold);

// Highest-scoring path; ties go to the lower label index (B < M < E < S).
TagSequence viterbi_decode(const nn::Tensor& scores, const Transitions& t);

// Graph versions.
nn::Var emission_scores(nn::Graph& g, nn::Var hidden, const CrfHead& head, bool trainable = true);
nn::Var nll(nn::Graph& g, nn::Var scores, const CrfHead& head, const TagSequence& gold,
            bool trainable = true);

}  // namespace daat::crf
