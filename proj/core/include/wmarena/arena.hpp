#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wmarena/attacks.hpp"
#include "wmarena/corpus.hpp"
#include "wmarena/keyed_stream.hpp"
#include "wmarena/quality.hpp"
#include "wmarena/stats.hpp"

namespace wmarena {

// ---- per-image key discipline (shared with the pipeline) ----------------------

/// Victim key for one image: derive_seed(run, "victim:<codec>", image path).
WatermarkKey victim_key(const Seed256& run_seed, std::string_view victim, std::string_view image);
/// Calibration key k for negatives; k = 0 is the key itself.
WatermarkKey negative_key(const WatermarkKey& key, std::size_t k);
/// Randomness handed to an attack on one (victim, image) pair.
WatermarkKey attack_rng_key(const Seed256& run_seed, std::string_view attack_id, std::string_view victim,
                            std::string_view image);

struct ArenaOptions {
  double target_fpr = 0.01;
  double max_skip_fraction = 0.05;
  /// Negatives per threshold. Corpora smaller than this are scored with
  /// ceil(min_negatives / n) calibration keys per image.
  std::size_t min_negatives = 100;
  int jobs = 0;
};

struct VictimRecord {
  std::string image;
  double clean_score = 0.0;
  std::optional<double> clean_bit_accuracy;
  std::optional<double> clean_message_accuracy;
  double unwatermarked_score = 0.0;  // clean image, victim key
  std::optional<double> unwatermarked_bit_accuracy;
  double embed_psnr = 0.0;
};

/// Victim detection before any attack, and its calibrated threshold.
struct VictimBaseline {
  std::string victim_id;
  Threshold threshold;
  double tpr_clean = 0.0;
  double mean_clean_score = 0.0;
  double mean_unwatermarked_score = 0.0;
  std::optional<double> ba_clean;
  std::optional<double> ba_unwatermarked;
  double mean_embed_psnr = 0.0;
  std::vector<double> negatives;
  std::vector<VictimRecord> records;  // sorted by image
};

struct AttackRecord {
  std::string image;
  double score = 0.0;
  std::optional<double> bit_accuracy;
  std::optional<double> message_accuracy;
  bool detected = false;
  QualityVector quality;
  double nqd = 0.0;
  std::optional<double> attacker_score;
  std::optional<double> attacker_bit_accuracy;
  std::vector<double> attacker_negatives;
};

struct InterferenceCell {
  std::string victim_id;
  std::string attack_id;
  double tpr_at_fpr = 0.0;
  std::optional<double> mean_ba;
  double mean_score = 0.0;
  double mean_nqd = 0.0;
  double mean_psnr = 0.0;
  std::optional<double> attacker_mean_ba;
  std::optional<double> attacker_mean_score;
  std::optional<double> attacker_tpr;
  std::vector<AttackRecord> records;  // sorted by image
};

struct InterferenceMatrix {
  std::string seed;  // hex
  double target_fpr = 0.01;
  std::vector<std::string> images;
  std::vector<std::string> victims;
  std::vector<AttackSpec> attacks;
  std::vector<VictimBaseline> baselines;  // victim order
  std::vector<InterferenceCell> cells;    // victim-major, attack order
  NqdModel nqd;
  std::vector<std::string> skipped;

  const InterferenceCell& cell(std::string_view victim, std::string_view attack_id) const;
  const VictimBaseline& baseline(std::string_view victim) const;
};

/// For each image and victim: embed with a fresh key and message, detect
/// clean, apply every attack on top and detect again with the victim key.
/// Per-(image, victim) failures are recorded; more than max_skip_fraction
/// of them fails the run. NQD is fitted over every non-identity attacked
/// image against its once-watermarked reference.
InterferenceMatrix build_matrix(const Corpus& corpus, const std::vector<std::string>& victims,
                                const std::vector<AttackSpec>& attacks, const Seed256& seed,
                                const ArenaOptions& options = {});

// ---- policy -----------------------------------------------------------------------

inline constexpr double kPolicyTieBand = 0.01;
inline constexpr double kDefaultNqdBudget = 0.6;

struct BaselineMatch {
  AttackKind kind = AttackKind::noise;
  std::string attack_id;
  double mean_nqd = 0.0;
  double tpr_at_fpr = 0.0;
  std::optional<double> mean_ba;
  bool exceeds_budget = false;  // even the weakest level is above the attack's NQD
};

struct PolicyEntry {
  std::string victim_id;
  AttackSpec attack;
  double tpr_at_fpr = 0.0;
  double mean_nqd = 0.0;
  std::optional<double> mean_ba;
  bool budget_relaxed = false;
  std::vector<std::string> trace;
  std::vector<BaselineMatch> baselines;
};

struct PolicyTable {
  double nqd_budget = kDefaultNqdBudget;
  std::vector<PolicyEntry> entries;  // matrix victim order

  const PolicyEntry* find(std::string_view victim) const;
  /// Attack for a predicted class. "unwatermarked" maps to identity, or to
  /// rewatermarking with chi2-ring when paranoid. Unknown classes throw.
  AttackSpec route(std::string_view predicted_class, bool paranoid = false) const;
};

/// Per victim, among rewatermark cells with mean NQD <= budget (all of them if
/// none qualifies, recorded as a relaxation): minimal TPR, ties within 0.01
/// broken by lower mean NQD, then by attack id. Baselines reported per kind at
/// the highest level whose mean NQD does not exceed the chosen attack's.
PolicyTable derive_policy(const InterferenceMatrix& matrix, double nqd_budget = kDefaultNqdBudget);

// ---- forgery ------------------------------------------------------------------------

struct ForgeryRow {
  std::string attack_id;
  std::string scenario;  // "cross" or "same"
  std::size_t pairs = 0;
  std::optional<double> attacker_mean_ba;
  double attacker_mean_score = 0.0;
  double attacker_tpr = 0.0;
};

struct ForgeryReport {
  std::vector<ForgeryRow> rows;  // attack order, cross before same
};

/// Aggregates attacker-side detection from the rewatermark cells of a matrix.
ForgeryReport forgery_from_matrix(const InterferenceMatrix& matrix);

ForgeryReport evaluate_forgery(const Corpus& corpus, const std::vector<std::string>& victims,
                               const std::vector<std::string>& attack_codecs, const Seed256& seed,
                               const ArenaOptions& options = {});

}  // namespace wmarena
