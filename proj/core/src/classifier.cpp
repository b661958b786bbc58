#include "wmarena/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "wmarena/codecs.hpp"
#include "wmarena/error.hpp"
#include "wmarena/features.hpp"
#include "wmarena/parallel.hpp"
#include "wmarena/synth.hpp"

namespace wmarena {

namespace {

void logits(const std::vector<double>& w, const std::vector<double>& b, std::size_t classes,
            const std::vector<double>& x, std::vector<double>& z) {
  const std::size_t d = x.size();
  z.assign(classes, 0.0);
  for (std::size_t k = 0; k < classes; ++k) {
    double s = b[k];
    const double* row = w.data() + k * d;
    for (std::size_t j = 0; j < d; ++j) s += row[j] * x[j];
    z[k] = s;
  }
}

// In place: z -> softmax(z); returns log-sum-exp.
double softmax_inplace(std::vector<double>& z) {
  const double mx = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double& v : z) s += (v = std::exp(v - mx));
  for (double& v : z) v /= s;
  return mx + std::log(s);
}

std::size_t argmax_first(const std::vector<double>& p) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < p.size(); ++k)
    if (p[k] > p[best]) best = k;
  return best;
}

double accuracy_of(const std::vector<double>& w, const std::vector<double>& b, std::size_t classes,
                   const std::vector<std::vector<double>>& x, const std::vector<int>& y) {
  if (x.empty()) return 0.0;
  std::size_t correct = 0;
  std::vector<double> z;
  for (std::size_t i = 0; i < x.size(); ++i) {
    logits(w, b, classes, x[i], z);
    correct += static_cast<int>(argmax_first(z)) == y[i];
  }
  return static_cast<double>(correct) / static_cast<double>(x.size());
}

std::vector<double> standardize(const ClassifierModel& m, const std::vector<double>& f) {
  std::vector<double> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = (f[j] - m.feature_mean[j]) / m.feature_scale[j];
  return out;
}

}  // namespace

double softmax_loss(const std::vector<double>& w, const std::vector<double>& b, std::size_t classes,
                    const std::vector<std::vector<double>>& x, const std::vector<int>& y, double lambda,
                    std::vector<double>* grad_w, std::vector<double>* grad_b) {
  if (x.empty() || x.size() != y.size()) throw ValidationError("softmax_loss needs matching non-empty rows and labels");
  const std::size_t d = x.front().size();
  if (w.size() != classes * d || b.size() != classes) throw ValidationError("weight shape mismatch");
  if (grad_w) grad_w->assign(w.size(), 0.0);
  if (grad_b) grad_b->assign(b.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(x.size());
  double loss = 0.0;
  std::vector<double> z;
  for (std::size_t i = 0; i < x.size(); ++i) {
    logits(w, b, classes, x[i], z);
    const double zy = z[y[i]];
    const double lse = softmax_inplace(z);
    loss += lse - zy;
    if (grad_w || grad_b) {
      z[y[i]] -= 1.0;
      for (std::size_t k = 0; k < classes; ++k) {
        const double g = z[k] * inv_n;
        if (grad_b) (*grad_b)[k] += g;
        if (grad_w) {
          double* row = grad_w->data() + k * d;
          for (std::size_t j = 0; j < d; ++j) row[j] += g * x[i][j];
        }
      }
    }
  }
  loss *= inv_n;
  double reg = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    reg += w[i] * w[i];
    if (grad_w) (*grad_w)[i] += 2.0 * lambda * w[i];
  }
  return loss + lambda * reg;
}

ClassifierModel train_classifier(const std::vector<std::vector<double>>& features,
                                 const std::vector<std::string>& labels, const std::vector<Split>& splits,
                                 const std::vector<std::string>& classes, const std::vector<std::string>& feature_names,
                                 const TrainingParams& params, std::size_t min_per_class) {
  if (features.size() != labels.size() || features.size() != splits.size())
    throw ValidationError("features, labels and splits differ in length");
  if (classes.size() < 2) throw ValidationError("a classifier needs at least two classes");
  if (!(params.lr > 0.0) || params.epochs < 1 || params.lambda < 0.0)
    throw ValidationError("invalid training hyperparameters");
  const std::size_t d = feature_names.size();
  std::map<std::string, int> index;
  for (std::size_t k = 0; k < classes.size(); ++k) index[classes[k]] = static_cast<int>(k);
  std::vector<std::size_t> counts(classes.size(), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = index.find(labels[i]);
    if (it == index.end()) throw ValidationError("label '" + labels[i] + "' is not a classifier class");
    if (features[i].size() != d) throw ValidationError("feature row has the wrong dimension");
    ++counts[it->second];
  }
  for (std::size_t k = 0; k < classes.size(); ++k)
    if (counts[k] < min_per_class)
      throw ValidationError("class '" + classes[k] + "' has " + std::to_string(counts[k]) + " samples; at least " +
                            std::to_string(min_per_class) + " required");

  ClassifierModel m;
  m.classes = classes;
  m.feature_names = feature_names;
  m.params = params;
  m.feature_mean.assign(d, 0.0);
  m.feature_scale.assign(d, 1.0);
  std::size_t n_train = 0;
  for (std::size_t i = 0; i < features.size(); ++i)
    if (splits[i] == Split::train) {
      ++n_train;
      for (std::size_t j = 0; j < d; ++j) m.feature_mean[j] += features[i][j];
    }
  if (n_train == 0) throw ValidationError("no training rows");
  for (double& v : m.feature_mean) v /= static_cast<double>(n_train);
  std::vector<double> var(d, 0.0);
  for (std::size_t i = 0; i < features.size(); ++i)
    if (splits[i] == Split::train)
      for (std::size_t j = 0; j < d; ++j) {
        const double t = features[i][j] - m.feature_mean[j];
        var[j] += t * t;
      }
  for (std::size_t j = 0; j < d; ++j) {
    const double s = std::sqrt(var[j] / static_cast<double>(n_train));
    m.feature_scale[j] = s > 1e-12 ? s : 1.0;
  }

  std::vector<std::vector<double>> xt, xv;
  std::vector<int> yt, yv;
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (splits[i] == Split::train) {
      xt.push_back(standardize(m, features[i]));
      yt.push_back(index[labels[i]]);
    } else if (splits[i] == Split::val) {
      xv.push_back(standardize(m, features[i]));
      yv.push_back(index[labels[i]]);
    }
  }
  const bool has_val = !xv.empty();
  const std::size_t kc = classes.size();
  std::vector<double> w(kc * d, 0.0), b(kc, 0.0), gw, gb;
  double lr = params.lr;
  double loss = softmax_loss(w, b, kc, xt, yt, params.lambda, &gw, &gb);
  m.loss_history.push_back(loss);
  auto val_acc = [&] { return has_val ? accuracy_of(w, b, kc, xv, yv) : accuracy_of(w, b, kc, xt, yt); };
  m.best_val_accuracy = val_acc();
  m.best_epoch = 0;
  m.weights = w;
  m.bias = b;

  std::vector<double> w2, b2, gw2, gb2;
  for (int epoch = 1; epoch <= params.epochs; ++epoch) {
    double next = 0.0;
    bool accepted = false;
    for (int attempt = 0; attempt < 40; ++attempt) {
      w2 = w;
      b2 = b;
      for (std::size_t i = 0; i < w2.size(); ++i) w2[i] -= lr * gw[i];
      for (std::size_t k = 0; k < kc; ++k) b2[k] -= lr * gb[k];
      next = softmax_loss(w2, b2, kc, xt, yt, params.lambda, &gw2, &gb2);
      if (next <= loss) {
        accepted = true;
        break;
      }
      lr *= 0.5;
      m.events.push_back({epoch, lr, "loss increased; lr halved"});
    }
    if (!accepted) {
      m.events.push_back({epoch, lr, "no descent step found; stopped"});
      break;
    }
    w.swap(w2);
    b.swap(b2);
    gw.swap(gw2);
    gb.swap(gb2);
    loss = next;
    m.loss_history.push_back(loss);
    const double acc = val_acc();
    if (acc > m.best_val_accuracy) {
      m.best_val_accuracy = acc;
      m.best_epoch = epoch;
      m.weights = w;
      m.bias = b;
    }
  }
  m.final_lr = lr;
  return m;
}

Prediction predict(const ClassifierModel& model, const std::vector<double>& features) {
  if (features.size() != model.feature_count() || model.feature_mean.size() != features.size())
    throw ValidationError("feature dimension " + std::to_string(features.size()) + " does not match the model (" +
                          std::to_string(model.feature_count()) + ")");
  std::vector<double> z;
  logits(model.weights, model.bias, model.class_count(), standardize(model, features), z);
  softmax_inplace(z);
  Prediction p;
  p.index = argmax_first(z);
  p.label = model.classes[p.index];
  p.probabilities = std::move(z);
  return p;
}

Prediction predict(const ClassifierModel& model, const RgbImage& img) { return predict(model, extract_features(img)); }

Evaluation evaluate_predictions(const std::vector<std::string>& classes, const std::vector<std::string>& truth,
                                const std::vector<std::string>& predicted) {
  if (truth.size() != predicted.size()) throw ValidationError("truth and predictions differ in length");
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < classes.size(); ++k) index[classes[k]] = k;
  auto lookup = [&](const std::string& s) {
    auto it = index.find(s);
    if (it == index.end()) throw ValidationError("label '" + s + "' is not a classifier class");
    return it->second;
  };
  Evaluation e;
  e.classes = classes;
  e.total = truth.size();
  e.confusion.assign(classes.size(), std::vector<std::size_t>(classes.size(), 0));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto t = lookup(truth[i]);
    const auto p = lookup(predicted[i]);
    ++e.confusion[t][p];
    correct += t == p;
  }
  e.accuracy = e.total ? static_cast<double>(correct) / static_cast<double>(e.total) : 0.0;
  double f1_sum = 0.0;
  std::size_t f1_n = 0;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    ClassMetrics c;
    c.label = classes[k];
    std::size_t predicted_k = 0;
    for (std::size_t t = 0; t < classes.size(); ++t) {
      c.support += e.confusion[k][t];
      predicted_k += e.confusion[t][k];
    }
    const double tp = static_cast<double>(e.confusion[k][k]);
    c.recall = c.support ? tp / static_cast<double>(c.support) : 0.0;
    c.precision = predicted_k ? tp / static_cast<double>(predicted_k) : 0.0;
    c.f1 = (c.recall + c.precision) > 0.0 ? 2.0 * c.recall * c.precision / (c.recall + c.precision) : 0.0;
    if (c.support || predicted_k) {
      f1_sum += c.f1;
      ++f1_n;
    }
    e.per_class.push_back(c);
  }
  e.macro_f1 = f1_n ? f1_sum / static_cast<double>(f1_n) : 0.0;

  for (std::size_t a = 0; a < classes.size(); ++a) {
    if (!is_known_codec(classes[a]) || !descriptor(classes[a]).multi_bit() || e.per_class[a].support == 0) continue;
    for (std::size_t b = 0; b < classes.size(); ++b) {
      if (a == b || !is_known_codec(classes[b]) || !descriptor(classes[b]).multi_bit()) continue;
      const double rate = static_cast<double>(e.confusion[a][b]) / static_cast<double>(e.per_class[a].support);
      if (rate > 0.05) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s -> %s confusion %.4f exceeds 0.05", classes[a].c_str(),
                      classes[b].c_str(), rate);
        e.gate_violations.push_back(buf);
      }
    }
  }
  return e;
}

Evaluation evaluate_classifier(const ClassifierModel& model, const std::vector<std::vector<double>>& features,
                               const std::vector<std::string>& labels) {
  std::vector<std::string> predicted;
  predicted.reserve(features.size());
  for (const auto& f : features) predicted.push_back(predict(model, f).label);
  return evaluate_predictions(model.classes, labels, predicted);
}

RgbImage quantize_8bit(const RgbImage& img) {
  RgbImage out = img;
  for (double& v : out.samples()) v = std::nearbyint(std::clamp(v, 0.0, 1.0) * 255.0) / 255.0;
  return out;
}

std::vector<LabeledSample> generate_labeled_corpus(const std::vector<std::string>& classes, std::size_t per_class,
                                                   const Seed256& seed, std::uint64_t first_image, int size,
                                                   int jobs) {
  for (const auto& c : classes)
    if (c != kUnwatermarkedLabel && !is_known_codec(c)) throw ValidationError("unknown class '" + c + "'");
  if (per_class == 0) throw ValidationError("per-class image count must be positive");
  std::vector<LabeledSample> out(classes.size() * per_class);
  parallel_for(out.size(), jobs, [&](std::size_t i) {
    const std::string& cls = classes[i / per_class];
    char name[64];
    std::snprintf(name, sizeof name, "-%06zu.png", i % per_class);
    LabeledSample& s = out[i];
    s.path = cls + "/" + cls + name;
    s.label = cls;
    RgbImage img = synth_image(first_image + i, size, size);
    if (cls != kUnwatermarkedLabel) {
      s.key = WatermarkKey{derive_seed(seed, "gen-corpus", s.path), cls};
      s.payload = random_message(cls, *s.key);
      img = embed(cls, img, *s.key, s.payload, descriptor(cls).default_strength);
    }
    s.image = quantize_8bit(img);
  });
  return out;
}

}  // namespace wmarena
