#include "cbow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include <json.hpp>

#include "error.hpp"

namespace clickseg {

Vocabulary::Vocabulary() : labels_{kBoundaryToken} { index_.emplace(kBoundaryToken, boundary); }

Vocabulary::Vocabulary(const std::vector<std::string>& labels) : Vocabulary() {
  std::set<std::string> sorted(labels.begin(), labels.end());
  sorted.erase(kBoundaryToken);
  for (const auto& l : sorted) {
    if (l.empty()) throw Error(ErrorKind::vocabulary, "empty activity label");
    index_.emplace(l, labels_.size());
    labels_.push_back(l);
  }
}

std::optional<std::size_t> Vocabulary::find(const std::string& label) const {
  const auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Vocabulary::index(const std::string& label) const {
  const auto i = find(label);
  if (!i) throw Error(ErrorKind::vocabulary, "activity '" + label + "' is not in the model vocabulary");
  return *i;
}

Vocabulary build_vocab(std::span<const TrainingSequence> sequences) {
  std::vector<std::string> labels;
  for (const auto& seq : sequences) labels.insert(labels.end(), seq.begin(), seq.end());
  return Vocabulary(labels);
}

Vocabulary build_vocab(const TrainingLog& log) {
  std::vector<std::string> labels;
  for (const auto& t : log.traces) labels.insert(labels.end(), t.begin(), t.end());
  return Vocabulary(labels);
}

void TrainConfig::validate() const {
  if (dim == 0) throw Error(ErrorKind::config, "train.d must be >= 1");
  if (radius == 0) throw Error(ErrorKind::config, "train.radius must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorKind::config, "train.lr must be positive");
  }
  if (!(min_learning_rate >= 0.0) || min_learning_rate > learning_rate) {
    throw Error(ErrorKind::config, "train.lr_min must be in [0, train.lr]");
  }
  if (traces_per_sequence == 0) throw Error(ErrorKind::config, "sampler.traces_per_sequence must be >= 1");
}

CbowModel::CbowModel(Vocabulary vocab, std::size_t dim, std::size_t radius)
    : vocab_(std::move(vocab)),
      dim_(dim),
      radius_(radius),
      input_(vocab_.size() * dim, 0.0),
      output_(dim * vocab_.size(), 0.0) {
  if (dim == 0 || radius == 0) throw Error(ErrorKind::invalid_argument, "model dim and radius must be >= 1");
}

CbowModel CbowModel::initialize(Vocabulary vocab, std::size_t dim, std::size_t radius, std::uint64_t seed) {
  CbowModel model(std::move(vocab), dim, radius);
  Rng rng(seed);
  for (auto& w : model.input_) w = (rng.uniform() - 0.5) / static_cast<double>(dim);
  return model;
}

void CbowModel::hidden(std::span<const std::size_t> context, std::span<double> h) const {
  std::fill(h.begin(), h.end(), 0.0);
  for (auto c : context) {
    const double* row = &input_[c * dim_];
    for (std::size_t k = 0; k < dim_; ++k) h[k] += row[k];
  }
  const double scale = 1.0 / static_cast<double>(context.size());
  for (auto& v : h) v *= scale;
}

void CbowModel::logits_to_probs(std::span<const double> h, std::span<double> probs) const {
  const std::size_t V = vocab_.size();
  std::fill(probs.begin(), probs.end(), 0.0);
  for (std::size_t k = 0; k < dim_; ++k) {
    const double hk = h[k];
    const double* row = &output_[k * V];
    for (std::size_t j = 0; j < V; ++j) probs[j] += hk * row[j];
  }
  const double max = *std::max_element(probs.begin(), probs.end());
  double sum = 0.0;
  for (auto& p : probs) {
    p = std::exp(p - max);
    sum += p;
  }
  for (auto& p : probs) p /= sum;
}

void CbowModel::predict(std::span<const std::size_t> context, std::span<double> probs) const {
  if (context.empty()) throw Error(ErrorKind::invalid_argument, "empty context");
  if (probs.size() != vocab_.size()) throw Error(ErrorKind::invalid_argument, "probability buffer size mismatch");
  for (auto c : context) {
    if (c >= vocab_.size()) throw Error(ErrorKind::invalid_argument, "context index out of range");
  }
  std::vector<double> h(dim_);
  hidden(context, h);
  logits_to_probs(h, probs);
}

std::vector<double> CbowModel::predict(std::span<const std::size_t> context) const {
  std::vector<double> probs(vocab_.size());
  predict(context, probs);
  return probs;
}

double CbowModel::loss(std::span<const std::size_t> context, std::size_t center) const {
  if (context.empty()) throw Error(ErrorKind::invalid_argument, "empty context");
  const std::size_t V = vocab_.size();
  std::vector<double> h(dim_);
  hidden(context, h);
  std::vector<double> z(V, 0.0);
  for (std::size_t k = 0; k < dim_; ++k) {
    for (std::size_t j = 0; j < V; ++j) z[j] += h[k] * output_[k * V + j];
  }
  const double max = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - max);
  return max + std::log(sum) - z.at(center);
}

CbowModel::Gradients CbowModel::gradients(std::span<const std::size_t> context, std::size_t center) const {
  const std::size_t V = vocab_.size();
  Gradients g;
  std::vector<double> h(dim_);
  std::vector<double> dz(V);
  predict(context, dz);
  g.loss = -std::log(dz.at(center));
  hidden(context, h);
  dz[center] -= 1.0;

  g.output.assign(output_.size(), 0.0);
  std::vector<double> dh(dim_, 0.0);
  for (std::size_t k = 0; k < dim_; ++k) {
    for (std::size_t j = 0; j < V; ++j) {
      g.output[k * V + j] = h[k] * dz[j];
      dh[k] += output_[k * V + j] * dz[j];
    }
  }
  g.input.assign(input_.size(), 0.0);
  const double scale = 1.0 / static_cast<double>(context.size());
  for (auto c : context) {
    for (std::size_t k = 0; k < dim_; ++k) g.input[c * dim_ + k] += dh[k] * scale;
  }
  return g;
}

double CbowModel::sgd_step(std::span<const std::size_t> context, std::size_t center, double learning_rate) {
  const std::size_t V = vocab_.size();
  std::vector<double> h(dim_);
  std::vector<double> dz(V);
  hidden(context, h);
  logits_to_probs(h, dz);
  const double loss = -std::log(std::max(dz[center], 1e-300));
  dz[center] -= 1.0;

  std::vector<double> dh(dim_, 0.0);
  for (std::size_t k = 0; k < dim_; ++k) {
    double* row = &output_[k * V];
    for (std::size_t j = 0; j < V; ++j) {
      dh[k] += row[j] * dz[j];
      row[j] -= learning_rate * (h[k] * dz[j]);
    }
  }
  const double scale = 1.0 / static_cast<double>(context.size());
  for (auto c : context) {
    double* row = &input_[c * dim_];
    for (std::size_t k = 0; k < dim_; ++k) row[k] -= learning_rate * (dh[k] * scale);
  }
  return loss;
}

bool CbowModel::finite() const {
  const auto ok = [](double v) { return std::isfinite(v); };
  return std::all_of(input_.begin(), input_.end(), ok) && std::all_of(output_.begin(), output_.end(), ok);
}

namespace {

using EpochData = std::function<const std::vector<TrainingSequence>&(std::size_t epoch)>;

std::size_t count_positions(const std::vector<TrainingSequence>& sequences) {
  std::size_t n = 0;
  for (const auto& s : sequences) {
    if (s.size() >= 2) n += s.size();
  }
  return n;
}

TrainResult run_training(const TrainConfig& config, Vocabulary vocab, const EpochData& epoch_data) {
  config.validate();
  TrainResult result{CbowModel::initialize(std::move(vocab), config.dim, config.radius, derive_seed(config.seed, 0)),
                     {}};
  if (config.epochs == 0) return result;

  const std::size_t full_window = 2 * config.radius + 1;
  std::size_t total = 0;
  std::vector<std::size_t> idx;
  std::vector<std::size_t> context;
  std::size_t done = 0;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const auto& sequences = epoch_data(epoch);
    if (epoch == 0) {
      const bool any_full = std::any_of(sequences.begin(), sequences.end(),
                                        [&](const TrainingSequence& s) { return s.size() >= full_window; });
      if (!any_full) {
        throw Error(ErrorKind::degenerate,
                    "training data has no full context window of " + std::to_string(full_window) + " tokens");
      }
      total = count_positions(sequences) * config.epochs;
    }

    double loss_sum = 0.0;
    std::size_t count = 0;
    for (const auto& seq : sequences) {
      if (seq.size() < 2) continue;
      idx.resize(seq.size());
      for (std::size_t p = 0; p < seq.size(); ++p) idx[p] = result.model.vocab().index(seq[p]);
      for (std::size_t p = 0; p < seq.size(); ++p) {
        context.clear();
        const std::size_t lo = p >= config.radius ? p - config.radius : 0;
        const std::size_t hi = std::min(seq.size() - 1, p + config.radius);
        for (std::size_t q = lo; q <= hi; ++q) {
          if (q != p) context.push_back(idx[q]);
        }
        const double progress = std::min(1.0, static_cast<double>(done) / static_cast<double>(total));
        const double lr = config.learning_rate - (config.learning_rate - config.min_learning_rate) * progress;
        loss_sum += result.model.sgd_step(context, idx[p], lr);
        ++count;
        ++done;
      }
    }
    if (!result.model.finite()) {
      throw Error(ErrorKind::degenerate, "training diverged in epoch " + std::to_string(epoch + 1));
    }
    result.epoch_loss.push_back(count > 0 ? loss_sum / static_cast<double>(count) : 0.0);
  }
  return result;
}

}  // namespace

TrainResult train(const TrainConfig& config, std::span<const TrainingSequence> sequences) {
  const std::vector<TrainingSequence> data(sequences.begin(), sequences.end());
  return run_training(config, build_vocab(sequences),
                      [&data](std::size_t) -> const std::vector<TrainingSequence>& { return data; });
}

TrainResult train(const TrainConfig& config, const TrainingLog& log) {
  config.validate();
  Rng shuffle(derive_seed(config.seed, 1));
  std::vector<TrainingSequence> current;
  return run_training(config, build_vocab(log),
                      [&](std::size_t) -> const std::vector<TrainingSequence>& {
                        current = build_training_sequences(log, shuffle, config.traces_per_sequence);
                        return current;
                      });
}

std::vector<double> predict_center(const CbowModel& model, std::span<const std::string> context) {
  std::vector<std::size_t> idx;
  idx.reserve(context.size());
  for (const auto& token : context) idx.push_back(model.vocab().index(token));
  return model.predict(idx);
}

Aggregation parse_aggregation(std::string_view name) {
  if (name == "mean") return Aggregation::mean;
  if (name == "median") return Aggregation::median;
  throw Error(ErrorKind::config, "unknown aggregation '" + std::string(name) + "' (expected mean or median)");
}

std::string_view to_string(Aggregation aggregation) {
  return aggregation == Aggregation::mean ? "mean" : "median";
}

std::vector<double> boundary_scores(std::span<const CbowModel* const> models, std::span<const std::string> activities,
                                    Aggregation aggregation, Diagnostics* diag) {
  if (models.empty()) throw Error(ErrorKind::invalid_argument, "no model to score with");
  for (const auto* m : models) {
    if (!(m->vocab() == models.front()->vocab())) {
      throw Error(ErrorKind::vocabulary, "ensemble members have different vocabularies");
    }
  }
  const std::size_t n = activities.size();
  if (n < 2) return {};

  const auto& vocab = models.front()->vocab();
  std::vector<std::optional<std::size_t>> idx(n);
  for (std::size_t p = 0; p < n; ++p) {
    idx[p] = vocab.find(activities[p]);
    if (!idx[p] && diag) {
      ++diag->unknown_activities;
      diag->unknown_labels.insert(activities[p]);
    }
  }

  std::vector<double> scores(n - 1, 0.0);
  std::vector<double> member(models.size());
  std::vector<std::size_t> context;
  std::vector<double> probs(vocab.size());
  for (std::size_t gap = 0; gap + 1 < n; ++gap) {
    bool scorable = true;
    for (std::size_t m = 0; m < models.size(); ++m) {
      const std::size_t r = models[m]->radius();
      context.clear();
      // left side: events gap-r+1 .. gap, right side: gap+1 .. gap+r
      const std::size_t lo = gap + 1 >= r ? gap + 1 - r : 0;
      const std::size_t hi = std::min(n - 1, gap + r);
      for (std::size_t q = lo; q <= hi; ++q) {
        if (idx[q]) context.push_back(*idx[q]);
      }
      if (context.empty()) {
        scorable = false;
        break;
      }
      models[m]->predict(context, probs);
      member[m] = probs[Vocabulary::boundary];
    }
    if (!scorable) {
      if (diag) ++diag->unscorable_gaps;
      continue;
    }
    if (aggregation == Aggregation::mean || member.size() == 1) {
      double sum = 0.0;
      for (double v : member) sum += v;
      scores[gap] = sum / static_cast<double>(member.size());
    } else {
      std::vector<double> sorted = member;
      std::sort(sorted.begin(), sorted.end());
      const std::size_t mid = sorted.size() / 2;
      scores[gap] = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    }
  }
  return scores;
}

void save_model(std::ostream& out, const CbowModel& model) {
  nlohmann::json doc;
  doc["format"] = "clickseg-cbow";
  doc["version"] = kModelFormatVersion;
  doc["dim"] = model.dim();
  doc["radius"] = model.radius();
  doc["vocab"] = model.vocab().labels();
  doc["input"] = model.input_weights();
  doc["output"] = model.output_weights();
  out << doc.dump() << '\n';
}

CbowModel load_model(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, std::string("model file: ") + e.what());
  }
  try {
    if (doc.value("format", std::string{}) != "clickseg-cbow") {
      throw Error(ErrorKind::version, "not a clickseg CBOW model file");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw Error(ErrorKind::version, "model format version " + std::to_string(version) + " is not supported (expected " +
                                          std::to_string(kModelFormatVersion) + ")");
    }
    const auto labels = doc.at("vocab").get<std::vector<std::string>>();
    if (labels.empty() || labels.front() != kBoundaryToken) {
      throw Error(ErrorKind::parse, "model vocabulary must start with the boundary token");
    }
    Vocabulary vocab(labels);
    if (vocab.labels() != labels) throw Error(ErrorKind::parse, "model vocabulary is not in canonical order");

    CbowModel model(std::move(vocab), doc.at("dim").get<std::size_t>(), doc.at("radius").get<std::size_t>());
    auto input = doc.at("input").get<std::vector<double>>();
    auto output = doc.at("output").get<std::vector<double>>();
    if (input.size() != model.input_weights().size() || output.size() != model.output_weights().size()) {
      throw Error(ErrorKind::parse, "model matrix shapes do not match vocabulary and dim");
    }
    model.input_weights() = std::move(input);
    model.output_weights() = std::move(output);
    if (!model.finite()) throw Error(ErrorKind::parse, "model contains non-finite weights");
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("model file: ") + e.what());
  }
}

}  // namespace clickseg
