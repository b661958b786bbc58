#include "wmarena/arena.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>

#include "wmarena/codecs.hpp"
#include "wmarena/error.hpp"
#include "wmarena/parallel.hpp"

namespace wmarena {

WatermarkKey victim_key(const Seed256& run_seed, std::string_view victim, std::string_view image) {
  return WatermarkKey{derive_seed(run_seed, "victim:" + std::string(victim), image), std::string(victim)};
}

WatermarkKey negative_key(const WatermarkKey& key, std::size_t k) {
  if (k == 0) return key;
  return WatermarkKey{derive_seed(key.seed, "negative", {}, k), key.codec_id};
}

WatermarkKey attack_rng_key(const Seed256& run_seed, std::string_view attack_id, std::string_view victim,
                            std::string_view image) {
  return WatermarkKey{derive_seed(run_seed, "attack:" + std::string(attack_id),
                                  std::string(victim) + "/" + std::string(image)),
                      "attack"};
}

const InterferenceCell& InterferenceMatrix::cell(std::string_view victim, std::string_view attack_id) const {
  for (const auto& c : cells)
    if (c.victim_id == victim && c.attack_id == attack_id) return c;
  throw ValidationError("matrix has no cell (" + std::string(victim) + ", " + std::string(attack_id) + ")");
}

const VictimBaseline& InterferenceMatrix::baseline(std::string_view victim) const {
  for (const auto& b : baselines)
    if (b.victim_id == victim) return b;
  throw ValidationError("matrix has no victim '" + std::string(victim) + "'");
}

namespace {

struct ItemResult {
  bool ok = false;
  std::string error;
  VictimRecord victim;
  std::vector<double> negatives;
  std::vector<AttackRecord> attacks;
};

double mean_of(const std::vector<double>& v) { return v.empty() ? 0.0 : mean(v); }

std::optional<double> mean_of_optional(const std::vector<std::optional<double>>& v) {
  std::vector<double> xs;
  for (const auto& x : v) {
    if (!x) return std::nullopt;
    xs.push_back(*x);
  }
  if (xs.empty()) return std::nullopt;
  return mean(xs);
}

std::vector<double> negatives_for(const std::string& codec_id, const RgbImage& clean, const WatermarkKey& key,
                                  const std::optional<Payload>& message, std::size_t count,
                                  DetectionOutcome* first) {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const WatermarkKey nk = negative_key(key, k);
    const auto msg = k == 0 ? message : random_message(codec_id, nk);
    auto d = detect(codec_id, clean, nk, msg);
    out.push_back(d.score);
    if (k == 0 && first) *first = std::move(d);
  }
  return out;
}

ItemResult run_item(const CorpusEntry& entry, const std::string& victim, const std::vector<AttackSpec>& attacks,
                    const Seed256& seed, std::size_t negatives_per_image) {
  ItemResult r;
  const WatermarkKey key = victim_key(seed, victim, entry.path);
  const auto message = random_message(victim, key);
  const RgbImage marked = embed(victim, entry.image, key, message);
  const auto clean = detect(victim, marked, key, message);

  r.victim.image = entry.path;
  r.victim.clean_score = clean.score;
  r.victim.clean_bit_accuracy = clean.bit_accuracy;
  r.victim.clean_message_accuracy = clean.message_accuracy;
  r.victim.embed_psnr = psnr(entry.image, marked);
  DetectionOutcome unwm;
  r.negatives = negatives_for(victim, entry.image, key, message, negatives_per_image, &unwm);
  r.victim.unwatermarked_score = unwm.score;
  r.victim.unwatermarked_bit_accuracy = unwm.bit_accuracy;

  for (const auto& spec : attacks) {
    AttackRecord a;
    a.image = entry.path;
    auto result = apply_attack(spec, marked, attack_rng_key(seed, spec.id, victim, entry.path));
    const auto det = detect(victim, result.image, key, message);
    a.score = det.score;
    a.bit_accuracy = det.bit_accuracy;
    a.message_accuracy = det.message_accuracy;
    a.quality = quality_vector(marked, result.image);
    if (result.receipt.attacker_key) {
      const auto& ak = *result.receipt.attacker_key;
      const auto adet = detect(spec.codec_id, result.image, ak, result.receipt.attacker_payload);
      a.attacker_score = adet.score;
      a.attacker_bit_accuracy = adet.bit_accuracy;
      a.attacker_negatives = negatives_for(spec.codec_id, entry.image, ak, result.receipt.attacker_payload,
                                           negatives_per_image, nullptr);
    }
    r.attacks.push_back(std::move(a));
  }
  r.ok = true;
  return r;
}

}  // namespace

InterferenceMatrix build_matrix(const Corpus& corpus, const std::vector<std::string>& victims,
                                const std::vector<AttackSpec>& attacks, const Seed256& seed,
                                const ArenaOptions& options) {
  if (victims.empty()) throw ValidationError("build_matrix needs at least one victim");
  if (attacks.empty()) throw ValidationError("build_matrix needs at least one attack");
  if (corpus.entries.empty()) throw ValidationError("build_matrix needs a non-empty corpus");
  {
    std::set<std::string> seen;
    for (const auto& v : victims) {
      descriptor(v);
      if (!seen.insert(v).second) throw ValidationError("duplicate victim '" + v + "'");
    }
    seen.clear();
    for (const auto& a : attacks) {
      if (a.is_rewatermark() && !descriptor(a.codec_id).attack_capable)
        throw ValidationError("codec '" + a.codec_id + "' cannot be applied to existing images");
      if (!seen.insert(a.id).second) throw ValidationError("duplicate attack '" + a.id + "'");
    }
  }

  std::vector<std::size_t> order(corpus.entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return corpus.entries[a].path < corpus.entries[b].path; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (corpus.entries[order[i]].path == corpus.entries[order[i - 1]].path)
      throw ValidationError("duplicate corpus path '" + corpus.entries[order[i]].path + "'");

  const std::size_t n = order.size();
  const std::size_t per_image = (options.min_negatives + n - 1) / n;
  std::vector<ItemResult> items(n * victims.size());
  parallel_for(items.size(), options.jobs, [&](std::size_t idx) {
    const auto& v = victims[idx / n];
    const auto& entry = corpus.entries[order[idx % n]];
    try {
      items[idx] = run_item(entry, v, attacks, seed, per_image);
    } catch (const std::exception& e) {
      items[idx].ok = false;
      items[idx].error = entry.path + " [" + v + "]: " + e.what();
    }
  });

  InterferenceMatrix m;
  m.seed = seed.hex();
  m.target_fpr = options.target_fpr;
  m.victims = victims;
  m.attacks = attacks;
  for (auto i : order) m.images.push_back(corpus.entries[i].path);
  for (const auto& it : items)
    if (!it.ok) m.skipped.push_back(it.error);
  if (static_cast<double>(m.skipped.size()) > options.max_skip_fraction * static_cast<double>(items.size()))
    throw Error("matrix run skipped " + std::to_string(m.skipped.size()) + " of " + std::to_string(items.size()) +
                " image/victim pairs; first: " + m.skipped.front());

  std::vector<QualityVector> fit_set;
  std::vector<QualityVector> all_set;
  for (const auto& it : items) {
    if (!it.ok) continue;
    for (std::size_t a = 0; a < attacks.size(); ++a) {
      all_set.push_back(it.attacks[a].quality);
      if (attacks[a].kind != AttackKind::identity) fit_set.push_back(it.attacks[a].quality);
    }
  }
  if (fit_set.size() < 20) fit_set = all_set;
  m.nqd = fit_nqd(fit_set);

  for (std::size_t vi = 0; vi < victims.size(); ++vi) {
    const auto& v = victims[vi];
    const auto& desc = descriptor(v);
    VictimBaseline base;
    base.victim_id = v;
    std::vector<double> clean_scores;
    std::vector<double> unwm_scores;
    std::vector<std::optional<double>> clean_ba;
    std::vector<std::optional<double>> unwm_ba;
    std::vector<double> psnrs;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& it = items[vi * n + i];
      if (!it.ok) continue;
      base.records.push_back(it.victim);
      base.negatives.insert(base.negatives.end(), it.negatives.begin(), it.negatives.end());
      clean_scores.push_back(it.victim.clean_score);
      unwm_scores.push_back(it.victim.unwatermarked_score);
      clean_ba.push_back(it.victim.clean_bit_accuracy);
      unwm_ba.push_back(it.victim.unwatermarked_bit_accuracy);
      psnrs.push_back(it.victim.embed_psnr);
    }
    if (base.records.empty()) throw Error("every image failed for victim '" + v + "'");
    base.threshold = calibrate_threshold(base.negatives, desc.score_direction(), options.target_fpr, v);
    base.tpr_clean = tpr_at_threshold(clean_scores, base.threshold);
    base.mean_clean_score = mean_of(clean_scores);
    base.mean_unwatermarked_score = mean_of(unwm_scores);
    base.ba_clean = mean_of_optional(clean_ba);
    base.ba_unwatermarked = mean_of_optional(unwm_ba);
    base.mean_embed_psnr = mean_of(psnrs);

    for (std::size_t ai = 0; ai < attacks.size(); ++ai) {
      const auto& spec = attacks[ai];
      InterferenceCell c;
      c.victim_id = v;
      c.attack_id = spec.id;
      std::vector<double> scores, nqds, psnr_vals, attacker_scores, attacker_negatives;
      std::vector<std::optional<double>> bas, attacker_bas;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& it = items[vi * n + i];
        if (!it.ok) continue;
        AttackRecord rec = it.attacks[ai];
        rec.detected = base.threshold.is_positive(rec.score);
        rec.nqd = nqd_score(rec.quality, m.nqd);
        scores.push_back(rec.score);
        nqds.push_back(rec.nqd);
        psnr_vals.push_back(rec.quality.psnr);
        bas.push_back(rec.bit_accuracy);
        if (rec.attacker_score) {
          attacker_scores.push_back(*rec.attacker_score);
          attacker_bas.push_back(rec.attacker_bit_accuracy);
          attacker_negatives.insert(attacker_negatives.end(), rec.attacker_negatives.begin(),
                                    rec.attacker_negatives.end());
        }
        c.records.push_back(std::move(rec));
      }
      c.tpr_at_fpr = tpr_at_threshold(scores, base.threshold);
      c.mean_ba = mean_of_optional(bas);
      c.mean_score = mean_of(scores);
      c.mean_nqd = mean_of(nqds);
      c.mean_psnr = mean_of(psnr_vals);
      if (!attacker_scores.empty()) {
        const auto& ad = descriptor(spec.codec_id);
        c.attacker_mean_score = mean_of(attacker_scores);
        c.attacker_mean_ba = mean_of_optional(attacker_bas);
        const auto t = calibrate_threshold(attacker_negatives, ad.score_direction(), options.target_fpr, ad.id);
        c.attacker_tpr = tpr_at_threshold(attacker_scores, t);
      }
      m.cells.push_back(std::move(c));
    }
    m.baselines.push_back(std::move(base));
  }
  return m;
}

// ---- policy -----------------------------------------------------------------------

const PolicyEntry* PolicyTable::find(std::string_view victim) const {
  for (const auto& e : entries)
    if (e.victim_id == victim) return &e;
  return nullptr;
}

AttackSpec PolicyTable::route(std::string_view predicted_class, bool paranoid) const {
  if (predicted_class == kUnwatermarkedLabel) return paranoid ? rewatermark_attack("chi2-ring") : identity_attack();
  if (const auto* e = find(predicted_class)) return e->attack;
  throw ValidationError("policy has no entry for class '" + std::string(predicted_class) + "'");
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Larger = harsher distortion.
double attack_severity(const AttackSpec& s) {
  return s.kind == AttackKind::resize_restore ? -s.level : s.level;
}

}  // namespace

PolicyTable derive_policy(const InterferenceMatrix& matrix, double nqd_budget) {
  if (matrix.cells.empty() || matrix.victims.empty()) throw ValidationError("cannot derive a policy from an empty matrix");
  PolicyTable table;
  table.nqd_budget = nqd_budget;
  std::map<std::string, AttackSpec> specs;
  for (const auto& a : matrix.attacks) specs.emplace(a.id, a);

  for (const auto& victim : matrix.victims) {
    std::vector<const InterferenceCell*> candidates;
    for (const auto& c : matrix.cells) {
      if (c.victim_id != victim) continue;
      auto it = specs.find(c.attack_id);
      if (it != specs.end() && it->second.is_rewatermark()) candidates.push_back(&c);
    }
    if (candidates.empty()) throw ValidationError("matrix has no rewatermark attack for victim '" + victim + "'");

    PolicyEntry entry;
    entry.victim_id = victim;
    std::vector<const InterferenceCell*> within;
    for (const auto* c : candidates)
      if (c->mean_nqd <= nqd_budget) within.push_back(c);
    if (within.empty()) {
      entry.budget_relaxed = true;
      within = candidates;
      entry.trace.push_back("no rewatermark attack within NQD budget " + fmt(nqd_budget) + "; budget relaxed");
    }
    double min_tpr = within.front()->tpr_at_fpr;
    for (const auto* c : within) min_tpr = std::min(min_tpr, c->tpr_at_fpr);
    std::vector<const InterferenceCell*> tied;
    for (const auto* c : within)
      if (c->tpr_at_fpr <= min_tpr + kPolicyTieBand + 1e-12) tied.push_back(c);
    std::sort(tied.begin(), tied.end(), [](const InterferenceCell* a, const InterferenceCell* b) {
      if (a->mean_nqd != b->mean_nqd) return a->mean_nqd < b->mean_nqd;
      return a->attack_id < b->attack_id;
    });
    const InterferenceCell* chosen = tied.front();

    for (const auto* c : candidates) {
      const bool in_budget = std::find(within.begin(), within.end(), c) != within.end();
      const bool in_band = std::find(tied.begin(), tied.end(), c) != tied.end();
      std::string line = c->attack_id + ": tpr=" + fmt(c->tpr_at_fpr) + " nqd=" + fmt(c->mean_nqd);
      if (c == chosen) line += " -> chosen";
      else if (!in_budget) line += " (over budget)";
      else if (!in_band) line += " (tpr outside tie band)";
      else line += " (tied, lost on nqd/id)";
      entry.trace.push_back(line);
    }
    entry.attack = specs.at(chosen->attack_id);
    entry.tpr_at_fpr = chosen->tpr_at_fpr;
    entry.mean_nqd = chosen->mean_nqd;
    entry.mean_ba = chosen->mean_ba;

    std::vector<AttackKind> kinds;
    for (const auto& a : matrix.attacks)
      if (a.kind != AttackKind::identity && !a.is_rewatermark() &&
          std::find(kinds.begin(), kinds.end(), a.kind) == kinds.end())
        kinds.push_back(a.kind);
    for (AttackKind kind : kinds) {
      std::vector<std::pair<const AttackSpec*, const InterferenceCell*>> levels;
      for (const auto& a : matrix.attacks)
        if (a.kind == kind) levels.emplace_back(&a, &matrix.cell(victim, a.id));
      std::sort(levels.begin(), levels.end(), [](const auto& x, const auto& y) {
        return attack_severity(*x.first) < attack_severity(*y.first);
      });
      BaselineMatch match;
      match.kind = kind;
      const std::pair<const AttackSpec*, const InterferenceCell*>* pick = nullptr;
      for (const auto& l : levels)
        if (l.second->mean_nqd <= chosen->mean_nqd) pick = &l;
      if (!pick) {
        pick = &levels.front();
        match.exceeds_budget = true;
      }
      match.attack_id = pick->first->id;
      match.mean_nqd = pick->second->mean_nqd;
      match.tpr_at_fpr = pick->second->tpr_at_fpr;
      match.mean_ba = pick->second->mean_ba;
      entry.baselines.push_back(match);
    }
    table.entries.push_back(std::move(entry));
  }
  return table;
}

// ---- forgery ------------------------------------------------------------------------

ForgeryReport forgery_from_matrix(const InterferenceMatrix& matrix) {
  ForgeryReport report;
  for (const auto& a : matrix.attacks) {
    if (!a.is_rewatermark()) continue;
    for (const char* scenario : {"cross", "same"}) {
      const bool same = std::string(scenario) == "same";
      std::vector<double> bas, scores, tprs;
      bool has_ba = true;
      std::size_t pairs = 0;
      for (const auto& v : matrix.victims) {
        if ((v == a.codec_id) != same) continue;
        const auto& c = matrix.cell(v, a.id);
        if (!c.attacker_mean_score) continue;
        ++pairs;
        scores.push_back(*c.attacker_mean_score);
        tprs.push_back(c.attacker_tpr.value_or(0.0));
        if (c.attacker_mean_ba) bas.push_back(*c.attacker_mean_ba);
        else has_ba = false;
      }
      if (pairs == 0) continue;
      ForgeryRow row;
      row.attack_id = a.id;
      row.scenario = scenario;
      row.pairs = pairs;
      row.attacker_mean_score = mean(scores);
      row.attacker_tpr = mean(tprs);
      if (has_ba) row.attacker_mean_ba = mean(bas);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

ForgeryReport evaluate_forgery(const Corpus& corpus, const std::vector<std::string>& victims,
                               const std::vector<std::string>& attack_codecs, const Seed256& seed,
                               const ArenaOptions& options) {
  if (attack_codecs.empty()) throw ValidationError("forgery evaluation needs at least one attack codec");
  std::vector<AttackSpec> attacks;
  for (const auto& c : attack_codecs) attacks.push_back(rewatermark_attack(c));
  return forgery_from_matrix(build_matrix(corpus, victims, attacks, seed, options));
}

}  // namespace wmarena
