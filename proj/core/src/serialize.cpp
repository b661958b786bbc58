#include "wmarena/serialize.hpp"

#include <fstream>
#include <sstream>

#include "wmarena/error.hpp"

namespace wmarena {

namespace {

template <typename T>
void get_field(const json& j, const char* name, T& out) {
  auto it = j.find(name);
  if (it == j.end()) throw ValidationError(std::string("missing JSON field '") + name + "'");
  it->get_to(out);
}

template <typename T>
void get_field(const json& j, const char* name, std::optional<T>& out) {
  auto it = j.find(name);
  if (it == j.end() || it->is_null()) out.reset();
  else out = it->get<T>();
}

template <typename E, std::size_t N>
E enum_from(const json& j, const std::array<E, N>& values, const char* what) {
  const auto s = j.get<std::string>();
  for (E e : values)
    if (s == to_string(e)) return e;
  throw ValidationError(std::string("unknown ") + what + " '" + s + "'");
}

}  // namespace

#define PUT(f) j[#f] = v.f;
#define GET(f) get_field(j, #f, v.f);

void to_json(json& j, const Seed256& v) { j = v.hex(); }
void from_json(const json& j, Seed256& v) { v = Seed256::from_hex(j.get<std::string>()); }

void to_json(json& j, const WatermarkKey& v) {
  j = json::object();
  PUT(seed) PUT(codec_id)
}
void from_json(const json& j, WatermarkKey& v) { GET(seed) GET(codec_id) }

void to_json(json& j, const Payload& v) { j = v.to_bit_string(); }
void from_json(const json& j, Payload& v) { v = Payload::from_bit_string(j.get<std::string>()); }

void to_json(json& j, const Split& v) { j = to_string(v); }
void from_json(const json& j, Split& v) {
  v = enum_from(j, std::array{Split::train, Split::val, Split::test}, "split");
}

void to_json(json& j, const AttackKind& v) { j = to_string(v); }
void from_json(const json& j, AttackKind& v) {
  v = enum_from(j,
                std::array{AttackKind::identity, AttackKind::rewatermark, AttackKind::noise, AttackKind::blur,
                           AttackKind::jpeg_quant, AttackKind::resize_restore},
                "attack kind");
}

void to_json(json& j, const AttackSpec& v) {
  j = json::object();
  PUT(id) PUT(kind) PUT(codec_id) PUT(strength) PUT(level)
}
void from_json(const json& j, AttackSpec& v) {
  GET(id) GET(kind) GET(codec_id) GET(strength) GET(level)
  if (v.is_rewatermark() && !descriptor(v.codec_id).attack_capable)
    throw ValidationError("codec '" + v.codec_id + "' cannot be applied to existing images");
}

void to_json(json& j, const AttackReceipt& v) {
  j = json::object();
  PUT(attack_id) PUT(attacker_key) PUT(attacker_payload)
}
void from_json(const json& j, AttackReceipt& v) { GET(attack_id) GET(attacker_key) GET(attacker_payload) }

void to_json(json& j, const ScoreDirection& v) { j = to_string(v); }
void from_json(const json& j, ScoreDirection& v) { v = score_direction_from_string(j.get<std::string>()); }

void to_json(json& j, const Threshold& v) {
  j = json::object();
  PUT(codec_id) PUT(value) PUT(direction) PUT(target_fpr) PUT(negatives_used)
}
void from_json(const json& j, Threshold& v) { GET(codec_id) GET(value) GET(direction) GET(target_fpr) GET(negatives_used) }

void to_json(json& j, const Statistic& v) { j = to_string(v); }
void from_json(const json& j, Statistic& v) {
  v = enum_from(j, std::array{Statistic::bit_accuracy, Statistic::l1_distance, Statistic::p_value}, "statistic");
}

void to_json(json& j, const DetectionOutcome& v) {
  j = json::object();
  PUT(codec_id) PUT(score) PUT(statistic) PUT(bit_accuracy) PUT(message_accuracy) PUT(decoded_payload)
  PUT(decode_ok) PUT(lattice_fit)
}
void from_json(const json& j, DetectionOutcome& v) {
  GET(codec_id) GET(score) GET(statistic) GET(bit_accuracy) GET(message_accuracy) GET(decoded_payload)
  GET(decode_ok) GET(lattice_fit)
}

void to_json(json& j, const QualityVector& v) {
  j = json::object();
  PUT(mse) PUT(psnr) PUT(ssim) PUT(mean_delta_e) PUT(highfreq_artifact) PUT(banding)
}
void from_json(const json& j, QualityVector& v) {
  GET(mse) GET(psnr) GET(ssim) GET(mean_delta_e) GET(highfreq_artifact) GET(banding)
}

void to_json(json& j, const NqdAnchor& v) {
  j = json::object();
  PUT(p10) PUT(p90)
}
void from_json(const json& j, NqdAnchor& v) { GET(p10) GET(p90) }

void to_json(json& j, const NqdModel& v) {
  j = json::object();
  PUT(metrics) PUT(orientation) PUT(anchors) PUT(fitted_on)
}
void from_json(const json& j, NqdModel& v) {
  GET(metrics) GET(orientation) GET(anchors) GET(fitted_on)
  if (v.metrics != quality_metric_names()) throw ValidationError("NQD model metric list does not match");
}

void to_json(json& j, const VictimRecord& v) {
  j = json::object();
  PUT(image) PUT(clean_score) PUT(clean_bit_accuracy) PUT(clean_message_accuracy) PUT(unwatermarked_score)
  PUT(unwatermarked_bit_accuracy) PUT(embed_psnr)
}
void from_json(const json& j, VictimRecord& v) {
  GET(image) GET(clean_score) GET(clean_bit_accuracy) GET(clean_message_accuracy) GET(unwatermarked_score)
  GET(unwatermarked_bit_accuracy) GET(embed_psnr)
}

void to_json(json& j, const VictimBaseline& v) {
  j = json::object();
  PUT(victim_id) PUT(threshold) PUT(tpr_clean) PUT(mean_clean_score) PUT(mean_unwatermarked_score) PUT(ba_clean)
  PUT(ba_unwatermarked) PUT(mean_embed_psnr) PUT(negatives) PUT(records)
}
void from_json(const json& j, VictimBaseline& v) {
  GET(victim_id) GET(threshold) GET(tpr_clean) GET(mean_clean_score) GET(mean_unwatermarked_score) GET(ba_clean)
  GET(ba_unwatermarked) GET(mean_embed_psnr) GET(negatives) GET(records)
}

void to_json(json& j, const AttackRecord& v) {
  j = json::object();
  PUT(image) PUT(score) PUT(bit_accuracy) PUT(message_accuracy) PUT(detected) PUT(quality) PUT(nqd)
  PUT(attacker_score) PUT(attacker_bit_accuracy) PUT(attacker_negatives)
}
void from_json(const json& j, AttackRecord& v) {
  GET(image) GET(score) GET(bit_accuracy) GET(message_accuracy) GET(detected) GET(quality) GET(nqd)
  GET(attacker_score) GET(attacker_bit_accuracy) GET(attacker_negatives)
}

void to_json(json& j, const InterferenceCell& v) {
  j = json::object();
  PUT(victim_id) PUT(attack_id) PUT(tpr_at_fpr) PUT(mean_ba) PUT(mean_score) PUT(mean_nqd) PUT(mean_psnr)
  PUT(attacker_mean_ba) PUT(attacker_mean_score) PUT(attacker_tpr) PUT(records)
}
void from_json(const json& j, InterferenceCell& v) {
  GET(victim_id) GET(attack_id) GET(tpr_at_fpr) GET(mean_ba) GET(mean_score) GET(mean_nqd) GET(mean_psnr)
  GET(attacker_mean_ba) GET(attacker_mean_score) GET(attacker_tpr) GET(records)
}

void to_json(json& j, const InterferenceMatrix& v) {
  j = json::object();
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "interference_matrix";
  PUT(seed) PUT(target_fpr) PUT(images) PUT(victims) PUT(attacks) PUT(baselines) PUT(cells) PUT(nqd) PUT(skipped)
}
void from_json(const json& j, InterferenceMatrix& v) {
  if (j.value("kind", "") != "interference_matrix") throw ValidationError("not an interference matrix document");
  GET(seed) GET(target_fpr) GET(images) GET(victims) GET(attacks) GET(baselines) GET(cells) GET(nqd) GET(skipped)
}

void to_json(json& j, const BaselineMatch& v) {
  j = json::object();
  PUT(kind) PUT(attack_id) PUT(mean_nqd) PUT(tpr_at_fpr) PUT(mean_ba) PUT(exceeds_budget)
}
void from_json(const json& j, BaselineMatch& v) {
  GET(kind) GET(attack_id) GET(mean_nqd) GET(tpr_at_fpr) GET(mean_ba) GET(exceeds_budget)
}

void to_json(json& j, const PolicyEntry& v) {
  j = json::object();
  PUT(victim_id) PUT(attack) PUT(tpr_at_fpr) PUT(mean_nqd) PUT(mean_ba) PUT(budget_relaxed) PUT(trace) PUT(baselines)
}
void from_json(const json& j, PolicyEntry& v) {
  GET(victim_id) GET(attack) GET(tpr_at_fpr) GET(mean_nqd) GET(mean_ba) GET(budget_relaxed) GET(trace) GET(baselines)
}

void to_json(json& j, const PolicyTable& v) {
  j = json::object();
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "policy";
  PUT(nqd_budget) PUT(entries)
}
void from_json(const json& j, PolicyTable& v) {
  if (j.value("kind", "") != "policy") throw ValidationError("not a policy document");
  GET(nqd_budget) GET(entries)
}

void to_json(json& j, const ForgeryRow& v) {
  j = json::object();
  PUT(attack_id) PUT(scenario) PUT(pairs) PUT(attacker_mean_ba) PUT(attacker_mean_score) PUT(attacker_tpr)
}
void from_json(const json& j, ForgeryRow& v) {
  GET(attack_id) GET(scenario) GET(pairs) GET(attacker_mean_ba) GET(attacker_mean_score) GET(attacker_tpr)
}

void to_json(json& j, const ForgeryReport& v) {
  j = json::object();
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "forgery";
  PUT(rows)
}
void from_json(const json& j, ForgeryReport& v) {
  if (j.value("kind", "") != "forgery") throw ValidationError("not a forgery document");
  GET(rows)
}

void to_json(json& j, const TrainingParams& v) {
  j = json::object();
  PUT(lr) PUT(epochs) PUT(lambda) PUT(seed)
}
void from_json(const json& j, TrainingParams& v) { GET(lr) GET(epochs) GET(lambda) GET(seed) }

void to_json(json& j, const TrainingEvent& v) {
  j = json::object();
  PUT(epoch) PUT(lr) PUT(what)
}
void from_json(const json& j, TrainingEvent& v) { GET(epoch) GET(lr) GET(what) }

void to_json(json& j, const ClassifierModel& v) {
  j = json::object();
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "classifier";
  PUT(classes) PUT(feature_names) PUT(weights) PUT(bias) PUT(feature_mean) PUT(feature_scale) PUT(params)
  PUT(best_epoch) PUT(best_val_accuracy) PUT(final_lr) PUT(loss_history) PUT(events)
}
void from_json(const json& j, ClassifierModel& v) {
  if (j.value("kind", "") != "classifier") throw ValidationError("not a classifier document");
  GET(classes) GET(feature_names) GET(weights) GET(bias) GET(feature_mean) GET(feature_scale) GET(params)
  GET(best_epoch) GET(best_val_accuracy) GET(final_lr) GET(loss_history) GET(events)
  const std::size_t d = v.feature_names.size();
  if (v.weights.size() != v.classes.size() * d || v.bias.size() != v.classes.size() || v.feature_mean.size() != d ||
      v.feature_scale.size() != d)
    throw ValidationError("classifier document has inconsistent shapes");
}

void to_json(json& j, const ClassMetrics& v) {
  j = json::object();
  PUT(label) PUT(support) PUT(recall) PUT(precision) PUT(f1)
}
void from_json(const json& j, ClassMetrics& v) { GET(label) GET(support) GET(recall) GET(precision) GET(f1) }

void to_json(json& j, const Evaluation& v) {
  j = json::object();
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "classifier_evaluation";
  PUT(classes) PUT(confusion) PUT(per_class) PUT(total) PUT(accuracy) PUT(macro_f1) PUT(gate_violations)
}
void from_json(const json& j, Evaluation& v) {
  GET(classes) GET(confusion) GET(per_class) GET(total) GET(accuracy) GET(macro_f1) GET(gate_violations)
}

void to_json(json& j, const PipelineMode& v) { j = to_string(v); }
void from_json(const json& j, PipelineMode& v) { v = pipeline_mode_from_string(j.get<std::string>()); }

void to_json(json& j, const PipelineRecord& v) {
  j = json::object();
  PUT(image) PUT(victim) PUT(predicted) PUT(attack_id) PUT(pre) PUT(post) PUT(detected_pre) PUT(detected_post)
  PUT(quality) PUT(nqd) PUT(unchanged)
}
void from_json(const json& j, PipelineRecord& v) {
  GET(image) GET(victim) GET(predicted) GET(attack_id) GET(pre) GET(post) GET(detected_pre) GET(detected_post)
  GET(quality) GET(nqd) GET(unchanged)
}

void to_json(json& j, const VictimAggregate& v) {
  j = json::object();
  PUT(victim_id) PUT(images) PUT(threshold) PUT(ba_clean) PUT(ba_unwatermarked) PUT(ba_attacked)
  PUT(mean_score_clean) PUT(mean_score_unwatermarked) PUT(mean_score_attacked) PUT(tpr_clean) PUT(tpr) PUT(mis)
  PUT(mean_nqd) PUT(predictions) PUT(attacks)
}
void from_json(const json& j, VictimAggregate& v) {
  GET(victim_id) GET(images) GET(threshold) GET(ba_clean) GET(ba_unwatermarked) GET(ba_attacked)
  GET(mean_score_clean) GET(mean_score_unwatermarked) GET(mean_score_attacked) GET(tpr_clean) GET(tpr) GET(mis)
  GET(mean_nqd) GET(predictions) GET(attacks)
}

void to_json(json& j, const PipelineRun& v) {
  j = json::object();
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "pipeline_run";
  PUT(mode) PUT(seed) PUT(paranoid) PUT(images) PUT(victims) PUT(records) PUT(aggregates) PUT(nqd) PUT(skipped)
}
void from_json(const json& j, PipelineRun& v) {
  if (j.value("kind", "") != "pipeline_run") throw ValidationError("not a pipeline run document");
  GET(mode) GET(seed) GET(paranoid) GET(images) GET(victims) GET(records) GET(aggregates) GET(nqd) GET(skipped)
}

void to_json(json& j, const VictimComparison& v) {
  j = json::object();
  PUT(victim_id) PUT(blackbox_tpr) PUT(beigebox_tpr) PUT(delta_tpr) PUT(delta_ba) PUT(mis) PUT(mis_fraction)
  PUT(misrouted) PUT(gap_by_prediction)
}
void from_json(const json& j, VictimComparison& v) {
  GET(victim_id) GET(blackbox_tpr) GET(beigebox_tpr) GET(delta_tpr) GET(delta_ba) GET(mis) GET(mis_fraction)
  GET(misrouted) GET(gap_by_prediction)
}

void to_json(json& j, const RunComparison& v) {
  j = json::object();
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "run_comparison";
  PUT(victims)
}
void from_json(const json& j, RunComparison& v) { GET(victims) }

#undef PUT
#undef GET

json read_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open " + file.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(file.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& file, const json& doc) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  out << doc.dump(2) << '\n';
  if (!out) throw Error("failed writing " + file.string());
}

}  // namespace wmarena
