#include "wmarena/pipeline.hpp"

#include <algorithm>
#include <numeric>

#include "wmarena/error.hpp"
#include "wmarena/features.hpp"
#include "wmarena/parallel.hpp"

namespace wmarena {

const char* to_string(PipelineMode m) { return m == PipelineMode::blackbox ? "blackbox" : "beigebox"; }

PipelineMode pipeline_mode_from_string(const std::string& s) {
  if (s == "blackbox") return PipelineMode::blackbox;
  if (s == "beigebox") return PipelineMode::beigebox;
  throw ValidationError("unknown pipeline mode '" + s + "'");
}

namespace {

struct Item {
  bool ok = false;
  std::string error;
  PipelineRecord record;
  std::vector<double> negatives;
  DetectionOutcome unwatermarked;
};

std::optional<double> mean_optional(const std::vector<std::optional<double>>& v) {
  std::vector<double> xs;
  for (const auto& x : v) {
    if (!x) return std::nullopt;
    xs.push_back(*x);
  }
  if (xs.empty()) return std::nullopt;
  return mean(xs);
}

double mean_or_zero(const std::vector<double>& v) { return v.empty() ? 0.0 : mean(v); }

}  // namespace

PipelineRun run_pipeline(const Corpus& corpus, const std::vector<std::string>& victims, const ClassifierModel* model,
                         const PolicyTable& policy, PipelineMode mode, const Seed256& seed,
                         const PipelineOptions& options) {
  if (victims.empty()) throw ValidationError("the pipeline needs at least one victim");
  if (corpus.entries.empty()) throw ValidationError("the pipeline needs a non-empty corpus");
  for (const auto& v : victims) descriptor(v);
  if (mode == PipelineMode::blackbox) {
    if (!model) throw ValidationError("blackbox mode needs a classifier model");
    if (model->feature_count() != kFeatureCount) throw ValidationError("classifier feature dimension does not match");
    for (const auto& c : model->classes) policy.route(c, options.paranoid);
  } else {
    for (const auto& v : victims) policy.route(v, options.paranoid);
  }

  std::vector<std::size_t> order(corpus.entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return corpus.entries[a].path < corpus.entries[b].path; });
  const std::size_t n = order.size();
  const std::size_t per_image = (options.min_negatives + n - 1) / n;

  std::vector<Item> items(n * victims.size());
  parallel_for(items.size(), options.jobs, [&](std::size_t idx) {
    const auto& victim = victims[idx / n];
    const auto& entry = corpus.entries[order[idx % n]];
    Item& it = items[idx];
    try {
      auto& r = it.record;
      r.image = entry.path;
      r.victim = victim;
      const WatermarkKey key = victim_key(seed, victim, entry.path);
      const auto message = random_message(victim, key);
      const RgbImage marked = embed(victim, entry.image, key, message);
      r.pre = detect(victim, marked, key, message);
      for (std::size_t k = 0; k < per_image; ++k) {
        const WatermarkKey nk = negative_key(key, k);
        auto d = detect(victim, entry.image, nk, k == 0 ? message : random_message(victim, nk));
        it.negatives.push_back(d.score);
        if (k == 0) it.unwatermarked = std::move(d);
      }
      r.predicted = mode == PipelineMode::blackbox ? predict(*model, marked).label : victim;
      const AttackSpec spec = policy.route(r.predicted, options.paranoid);
      r.attack_id = spec.id;
      auto attacked = apply_attack(spec, marked, attack_rng_key(seed, spec.id, victim, entry.path));
      r.post = detect(victim, attacked.image, key, message);
      r.quality = quality_vector(marked, attacked.image);
      r.unchanged = attacked.image.samples().size() == marked.samples().size() &&
                    std::equal(attacked.image.samples().begin(), attacked.image.samples().end(),
                               marked.samples().begin());
      it.ok = true;
    } catch (const std::exception& e) {
      it.ok = false;
      it.error = entry.path + " [" + victim + "]: " + e.what();
    }
  });

  PipelineRun run;
  run.mode = mode;
  run.seed = seed.hex();
  run.paranoid = options.paranoid;
  run.victims = victims;
  for (auto i : order) run.images.push_back(corpus.entries[i].path);
  for (const auto& it : items)
    if (!it.ok) run.skipped.push_back(it.error);
  if (static_cast<double>(run.skipped.size()) > options.max_skip_fraction * static_cast<double>(items.size()))
    throw Error("pipeline skipped " + std::to_string(run.skipped.size()) + " of " + std::to_string(items.size()) +
                " image/victim pairs; first: " + run.skipped.front());

  if (options.nqd) {
    run.nqd = options.nqd;
  } else {
    std::vector<QualityVector> fit;
    for (const auto& it : items)
      if (it.ok && it.record.attack_id != "identity") fit.push_back(it.record.quality);
    if (fit.size() >= 20) run.nqd = fit_nqd(fit);
  }

  for (std::size_t vi = 0; vi < victims.size(); ++vi) {
    const auto& desc = descriptor(victims[vi]);
    VictimAggregate agg;
    agg.victim_id = victims[vi];
    std::vector<double> negatives, clean, unwm, post, nqds;
    std::vector<std::optional<double>> ba_clean, ba_unwm, ba_post;
    std::vector<PipelineRecord*> recs;
    for (std::size_t i = 0; i < n; ++i) {
      auto& it = items[vi * n + i];
      if (!it.ok) continue;
      negatives.insert(negatives.end(), it.negatives.begin(), it.negatives.end());
      clean.push_back(it.record.pre.score);
      unwm.push_back(it.unwatermarked.score);
      post.push_back(it.record.post.score);
      ba_clean.push_back(it.record.pre.bit_accuracy);
      ba_unwm.push_back(it.unwatermarked.bit_accuracy);
      ba_post.push_back(it.record.post.bit_accuracy);
      recs.push_back(&it.record);
    }
    if (recs.empty()) throw Error("every image failed for victim '" + victims[vi] + "'");
    agg.images = recs.size();
    agg.threshold = calibrate_threshold(negatives, desc.score_direction(), options.target_fpr, desc.id);
    for (auto* r : recs) {
      r->detected_pre = agg.threshold.is_positive(r->pre.score);
      r->detected_post = agg.threshold.is_positive(r->post.score);
      if (run.nqd) {
        r->nqd = nqd_score(r->quality, *run.nqd);
        nqds.push_back(*r->nqd);
      }
      agg.mis += r->predicted == kUnwatermarkedLabel;
      ++agg.predictions[r->predicted];
      ++agg.attacks[r->attack_id];
      run.records.push_back(*r);
    }
    agg.ba_clean = mean_optional(ba_clean);
    agg.ba_unwatermarked = mean_optional(ba_unwm);
    agg.ba_attacked = mean_optional(ba_post);
    agg.mean_score_clean = mean_or_zero(clean);
    agg.mean_score_unwatermarked = mean_or_zero(unwm);
    agg.mean_score_attacked = mean_or_zero(post);
    agg.tpr_clean = tpr_at_threshold(clean, agg.threshold);
    agg.tpr = tpr_at_threshold(post, agg.threshold);
    if (!nqds.empty()) agg.mean_nqd = mean(nqds);
    run.aggregates.push_back(std::move(agg));
  }
  return run;
}

RunComparison compare_runs(const PipelineRun& blackbox, const PipelineRun& beigebox) {
  if (blackbox.images != beigebox.images || blackbox.seed != beigebox.seed || blackbox.victims != beigebox.victims)
    throw ValidationError("pipeline runs cover different corpora, seeds or victims");
  RunComparison out;
  for (std::size_t vi = 0; vi < blackbox.victims.size(); ++vi) {
    const auto& a = blackbox.aggregates.at(vi);
    const auto& b = beigebox.aggregates.at(vi);
    VictimComparison c;
    c.victim_id = a.victim_id;
    c.blackbox_tpr = a.tpr;
    c.beigebox_tpr = b.tpr;
    c.delta_tpr = a.tpr - b.tpr;
    if (a.ba_attacked && b.ba_attacked) c.delta_ba = *a.ba_attacked - *b.ba_attacked;
    c.mis = a.mis;
    c.mis_fraction = a.images ? static_cast<double>(a.mis) / static_cast<double>(a.images) : 0.0;
    std::map<std::string, const PipelineRecord*> beige;
    for (const auto& r : beigebox.records)
      if (r.victim == c.victim_id) beige[r.image] = &r;
    for (const auto& r : blackbox.records) {
      if (r.victim != c.victim_id) continue;
      if (r.predicted != r.victim && r.predicted != kUnwatermarkedLabel) ++c.misrouted;
      auto it = beige.find(r.image);
      if (it != beige.end() && it->second->detected_post != r.detected_post) ++c.gap_by_prediction[r.predicted];
    }
    out.victims.push_back(std::move(c));
  }
  return out;
}

}  // namespace wmarena
