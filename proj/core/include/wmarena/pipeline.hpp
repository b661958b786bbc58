#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wmarena/arena.hpp"
#include "wmarena/classifier.hpp"
#include "wmarena/codecs.hpp"
#include "wmarena/corpus.hpp"

namespace wmarena {

enum class PipelineMode { blackbox, beigebox };
const char* to_string(PipelineMode m);
PipelineMode pipeline_mode_from_string(const std::string& s);

struct PipelineOptions {
  double target_fpr = 0.01;
  bool paranoid = false;  // route "unwatermarked" predictions to chi2-ring instead of identity
  std::size_t min_negatives = 100;
  double max_skip_fraction = 0.05;
  std::optional<NqdModel> nqd;  // fitted over the run's attacked images when absent
  int jobs = 0;
};

struct PipelineRecord {
  std::string image;
  std::string victim;
  std::string predicted;
  std::string attack_id;
  DetectionOutcome pre;
  DetectionOutcome post;
  bool detected_pre = false;
  bool detected_post = false;
  QualityVector quality;  // attacked vs once-watermarked
  std::optional<double> nqd;
  bool unchanged = false;  // attacked image bit-identical to its input
};

struct VictimAggregate {
  std::string victim_id;
  std::size_t images = 0;
  Threshold threshold;
  std::optional<double> ba_clean;
  std::optional<double> ba_unwatermarked;
  std::optional<double> ba_attacked;
  double mean_score_clean = 0.0;
  double mean_score_unwatermarked = 0.0;
  double mean_score_attacked = 0.0;
  double tpr_clean = 0.0;
  double tpr = 0.0;  // after the attack
  std::size_t mis = 0;  // predicted "unwatermarked", left unattacked
  std::optional<double> mean_nqd;
  std::map<std::string, std::size_t> predictions;
  std::map<std::string, std::size_t> attacks;
};

struct PipelineRun {
  PipelineMode mode = PipelineMode::blackbox;
  std::string seed;
  bool paranoid = false;
  std::vector<std::string> images;
  std::vector<std::string> victims;
  std::vector<PipelineRecord> records;  // victim-major, image order
  std::vector<VictimAggregate> aggregates;
  std::optional<NqdModel> nqd;
  std::vector<std::string> skipped;
};

/// Watermarks every image with each victim (arena key discipline), then
/// routes through the policy: by classifier prediction in blackbox mode, by
/// the true victim in beigebox mode. A policy gap is an error raised before
/// any image is processed. `model` may be null in beigebox mode.
PipelineRun run_pipeline(const Corpus& corpus, const std::vector<std::string>& victims, const ClassifierModel* model,
                         const PolicyTable& policy, PipelineMode mode, const Seed256& seed,
                         const PipelineOptions& options = {});

struct VictimComparison {
  std::string victim_id;
  double blackbox_tpr = 0.0;
  double beigebox_tpr = 0.0;
  double delta_tpr = 0.0;  // blackbox - beigebox
  std::optional<double> delta_ba;
  std::size_t mis = 0;
  double mis_fraction = 0.0;
  std::size_t misrouted = 0;  // predicted another codec
  /// Images whose post-attack detection differs between modes, by blackbox prediction.
  std::map<std::string, std::size_t> gap_by_prediction;
};

struct RunComparison {
  std::vector<VictimComparison> victims;
};

RunComparison compare_runs(const PipelineRun& blackbox, const PipelineRun& beigebox);

}  // namespace wmarena
