#pragma once

#include <filesystem>
#include <optional>

#include <nlohmann/json.hpp>

#include "wmarena/arena.hpp"
#include "wmarena/attacks.hpp"
#include "wmarena/classifier.hpp"
#include "wmarena/codecs.hpp"
#include "wmarena/pipeline.hpp"
#include "wmarena/quality.hpp"
#include "wmarena/stats.hpp"

namespace nlohmann {
template <typename T>
struct adl_serializer<std::optional<T>> {
  static void to_json(json& j, const std::optional<T>& v) {
    if (v) j = *v;
    else j = nullptr;
  }
  static void from_json(const json& j, std::optional<T>& v) {
    if (j.is_null()) v.reset();
    else v = j.get<T>();
  }
};
}  // namespace nlohmann

namespace wmarena {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

void to_json(json& j, const Seed256& v);
void from_json(const json& j, Seed256& v);
void to_json(json& j, const WatermarkKey& v);
void from_json(const json& j, WatermarkKey& v);
void to_json(json& j, const Payload& v);
void from_json(const json& j, Payload& v);
void to_json(json& j, const Split& v);
void from_json(const json& j, Split& v);

void to_json(json& j, const AttackKind& v);
void from_json(const json& j, AttackKind& v);
void to_json(json& j, const AttackSpec& v);
void from_json(const json& j, AttackSpec& v);
void to_json(json& j, const AttackReceipt& v);
void from_json(const json& j, AttackReceipt& v);

void to_json(json& j, const ScoreDirection& v);
void from_json(const json& j, ScoreDirection& v);
void to_json(json& j, const Threshold& v);
void from_json(const json& j, Threshold& v);
void to_json(json& j, const Statistic& v);
void from_json(const json& j, Statistic& v);
void to_json(json& j, const DetectionOutcome& v);
void from_json(const json& j, DetectionOutcome& v);

void to_json(json& j, const QualityVector& v);
void from_json(const json& j, QualityVector& v);
void to_json(json& j, const NqdAnchor& v);
void from_json(const json& j, NqdAnchor& v);
void to_json(json& j, const NqdModel& v);
void from_json(const json& j, NqdModel& v);

void to_json(json& j, const VictimRecord& v);
void from_json(const json& j, VictimRecord& v);
void to_json(json& j, const VictimBaseline& v);
void from_json(const json& j, VictimBaseline& v);
void to_json(json& j, const AttackRecord& v);
void from_json(const json& j, AttackRecord& v);
void to_json(json& j, const InterferenceCell& v);
void from_json(const json& j, InterferenceCell& v);
void to_json(json& j, const InterferenceMatrix& v);
void from_json(const json& j, InterferenceMatrix& v);
void to_json(json& j, const BaselineMatch& v);
void from_json(const json& j, BaselineMatch& v);
void to_json(json& j, const PolicyEntry& v);
void from_json(const json& j, PolicyEntry& v);
void to_json(json& j, const PolicyTable& v);
void from_json(const json& j, PolicyTable& v);
void to_json(json& j, const ForgeryRow& v);
void from_json(const json& j, ForgeryRow& v);
void to_json(json& j, const ForgeryReport& v);
void from_json(const json& j, ForgeryReport& v);

void to_json(json& j, const TrainingParams& v);
void from_json(const json& j, TrainingParams& v);
void to_json(json& j, const TrainingEvent& v);
void from_json(const json& j, TrainingEvent& v);
void to_json(json& j, const ClassifierModel& v);
void from_json(const json& j, ClassifierModel& v);
void to_json(json& j, const ClassMetrics& v);
void from_json(const json& j, ClassMetrics& v);
void to_json(json& j, const Evaluation& v);
void from_json(const json& j, Evaluation& v);

void to_json(json& j, const PipelineMode& v);
void from_json(const json& j, PipelineMode& v);
void to_json(json& j, const PipelineRecord& v);
void from_json(const json& j, PipelineRecord& v);
void to_json(json& j, const VictimAggregate& v);
void from_json(const json& j, VictimAggregate& v);
void to_json(json& j, const PipelineRun& v);
void from_json(const json& j, PipelineRun& v);
void to_json(json& j, const VictimComparison& v);
void from_json(const json& j, VictimComparison& v);
void to_json(json& j, const RunComparison& v);
void from_json(const json& j, RunComparison& v);

/// Parse failures and missing files are ValidationErrors naming the file.
json read_json_file(const std::filesystem::path& file);
/// Two-space indentation, trailing newline.
void write_json_file(const std::filesystem::path& file, const json& doc);

}  // namespace wmarena
