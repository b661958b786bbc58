#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wmarena/corpus.hpp"
#include "wmarena/image.hpp"
#include "wmarena/keyed_stream.hpp"
#include "wmarena/payload.hpp"

namespace wmarena {

struct TrainingParams {
  double lr = 0.5;
  int epochs = 600;
  double lambda = 1e-4;
  std::uint64_t seed = 0;
};

struct TrainingEvent {
  int epoch = 0;
  double lr = 0.0;
  std::string what;
};

/// Multinomial logistic regression over standardized features.
struct ClassifierModel {
  std::vector<std::string> classes;
  std::vector<std::string> feature_names;
  std::vector<double> weights;  // classes x features, row-major
  std::vector<double> bias;
  std::vector<double> feature_mean;
  std::vector<double> feature_scale;
  TrainingParams params;
  int best_epoch = 0;
  double best_val_accuracy = 0.0;
  double final_lr = 0.0;
  std::vector<double> loss_history;  // accepted training loss per epoch, epoch 0 first
  std::vector<TrainingEvent> events;

  std::size_t class_count() const { return classes.size(); }
  std::size_t feature_count() const { return feature_names.size(); }
};

/// Mean cross-entropy + lambda * ||W||^2 of a linear softmax model on
/// already-standardized rows. With grad_w / grad_b non-null, writes the
/// analytic gradient (same shapes as w / b).
double softmax_loss(const std::vector<double>& w, const std::vector<double>& b, std::size_t classes,
                    const std::vector<std::vector<double>>& x, const std::vector<int>& y, double lambda,
                    std::vector<double>* grad_w = nullptr, std::vector<double>* grad_b = nullptr);

/// Full-batch gradient descent from zero weights. An epoch whose step would
/// raise the loss halves lr and retries (recorded). The returned weights are
/// those of the epoch with the best validation accuracy (earliest on ties;
/// training accuracy when there is no validation row).
/// Every class needs at least `min_per_class` rows in total.
ClassifierModel train_classifier(const std::vector<std::vector<double>>& features,
                                 const std::vector<std::string>& labels, const std::vector<Split>& splits,
                                 const std::vector<std::string>& classes, const std::vector<std::string>& feature_names,
                                 const TrainingParams& params = {}, std::size_t min_per_class = 50);

struct Prediction {
  std::string label;
  std::size_t index = 0;
  std::vector<double> probabilities;
};

/// Argmax of the softmax; ties go to the earlier class.
Prediction predict(const ClassifierModel& model, const std::vector<double>& features);
Prediction predict(const ClassifierModel& model, const RgbImage& img);

struct ClassMetrics {
  std::string label;
  std::size_t support = 0;
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

struct Evaluation {
  std::vector<std::string> classes;
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
  std::vector<ClassMetrics> per_class;
  std::size_t total = 0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;  // over classes present in truth or predictions
  /// Confusions above 5% between two multi-bit codecs (disjoint embedding subspaces).
  std::vector<std::string> gate_violations;
};

Evaluation evaluate_predictions(const std::vector<std::string>& classes, const std::vector<std::string>& truth,
                                const std::vector<std::string>& predicted);
/// One generated training image. Keys and payloads are fresh per image.
struct LabeledSample {
  std::string path;  // "<class>/<class>-<index>.png"
  std::string label;
  std::optional<WatermarkKey> key;
  std::optional<Payload> payload;
  RgbImage image;  // quantized to 8 bits, as written to PNG
};

/// `per_class` synthetic images per class (image seeds first_image + running
/// index), each class other than "unwatermarked" embedded at default strength
/// with key derive_seed(seed, "gen-corpus", path).
std::vector<LabeledSample> generate_labeled_corpus(const std::vector<std::string>& classes, std::size_t per_class,
                                                   const Seed256& seed, std::uint64_t first_image = 0,
                                                   int size = 256, int jobs = 0);

/// Samples rounded to the nearest of 256 levels.
RgbImage quantize_8bit(const RgbImage& img);

Evaluation evaluate_classifier(const ClassifierModel& model, const std::vector<std::vector<double>>& features,
                               const std::vector<std::string>& labels);

}  // namespace wmarena
