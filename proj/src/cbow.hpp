#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diagnostics.hpp"
#include "trace_sampler.hpp"

namespace clickseg {

// Dense token index. The boundary token always has index 0; activity
// labels follow in lexicographic order.
class Vocabulary {
 public:
  static constexpr std::size_t boundary = 0;

  Vocabulary();
  explicit Vocabulary(const std::vector<std::string>& labels);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t index) const { return labels_.at(index); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> find(const std::string& label) const;
  // Throws Error(vocabulary) naming the label.
  std::size_t index(const std::string& label) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.labels_ == b.labels_; }

 private:
  std::vector<std::string> labels_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

Vocabulary build_vocab(std::span<const TrainingSequence> sequences);
Vocabulary build_vocab(const TrainingLog& log);

struct TrainConfig {
  std::size_t dim = 32;
  std::size_t radius = 1;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  double min_learning_rate = 0.0001;
  std::uint64_t seed = 1;
  // Used when training from a training log: traces joined per sequence,
  // regrouped with a fresh shuffle every epoch.
  std::size_t traces_per_sequence = 10;

  void validate() const;
};

// CBOW network: the hidden vector is the mean of the context embeddings,
// the output layer a full softmax over the vocabulary.
class CbowModel {
 public:
  // All weights zero.
  CbowModel(Vocabulary vocab, std::size_t dim, std::size_t radius);
  // Input embeddings uniform in [-0.5/dim, 0.5/dim), output weights zero.
  static CbowModel initialize(Vocabulary vocab, std::size_t dim, std::size_t radius, std::uint64_t seed);

  const Vocabulary& vocab() const { return vocab_; }
  std::size_t dim() const { return dim_; }
  std::size_t radius() const { return radius_; }

  // |V| x dim, row-major.
  std::vector<double>& input_weights() { return input_; }
  const std::vector<double>& input_weights() const { return input_; }
  // dim x |V|, row-major.
  std::vector<double>& output_weights() { return output_; }
  const std::vector<double>& output_weights() const { return output_; }

  // Softmax over the vocabulary. `probs` must have vocab().size() entries.
  void predict(std::span<const std::size_t> context, std::span<double> probs) const;
  std::vector<double> predict(std::span<const std::size_t> context) const;

  // Cross-entropy of predicting `center` from `context`.
  double loss(std::span<const std::size_t> context, std::size_t center) const;

  struct Gradients {
    double loss = 0.0;
    std::vector<double> input;   // same layout as input_weights()
    std::vector<double> output;  // same layout as output_weights()
  };
  Gradients gradients(std::span<const std::size_t> context, std::size_t center) const;

  // One SGD update; returns the loss before the update.
  double sgd_step(std::span<const std::size_t> context, std::size_t center, double learning_rate);

  bool finite() const;

  friend bool operator==(const CbowModel&, const CbowModel&) = default;

 private:
  void hidden(std::span<const std::size_t> context, std::span<double> h) const;
  void logits_to_probs(std::span<const double> h, std::span<double> probs) const;

  Vocabulary vocab_;
  std::size_t dim_;
  std::size_t radius_;
  std::vector<double> input_;
  std::vector<double> output_;
};

struct TrainResult {
  CbowModel model;
  std::vector<double> epoch_loss;  // mean loss per epoch
};

// Slides a window of 2*radius+1 tokens over every sequence; contexts are
// truncated at sequence edges. Requires at least one full window.
TrainResult train(const TrainConfig& config, std::span<const TrainingSequence> sequences);
TrainResult train(const TrainConfig& config, const TrainingLog& log);

// Context tokens must all be in the vocabulary.
std::vector<double> predict_center(const CbowModel& model, std::span<const std::string> context);

enum class Aggregation { mean, median };
Aggregation parse_aggregation(std::string_view name);
std::string_view to_string(Aggregation aggregation);

// One score per gap of `activities` (n - 1 values): the probability of the
// boundary token as the center between the `radius` activities on each
// side, aggregated over the models. Unknown activities are left out of the
// context; a gap without any known context scores 0.
std::vector<double> boundary_scores(std::span<const CbowModel* const> models, std::span<const std::string> activities,
                                    Aggregation aggregation = Aggregation::mean, Diagnostics* diag = nullptr);

// Versioned JSON document with vocabulary, shapes and both matrices.
inline constexpr int kModelFormatVersion = 1;
void save_model(std::ostream& out, const CbowModel& model);
CbowModel load_model(std::istream& in);

}  // namespace clickseg
