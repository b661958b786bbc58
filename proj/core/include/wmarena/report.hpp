#pragma once

#include <filesystem>
#include <string>

#include "wmarena/arena.hpp"
#include "wmarena/classifier.hpp"
#include "wmarena/pipeline.hpp"

namespace wmarena {

/// "%.6g"; non-finite values print as "nan" / "inf" / "-inf"; absent as "".
std::string format_number(double v);
std::string format_number(const std::optional<double>& v);

/// Grid shading bands for TPR: <= 0.1 removed, (0.1, 0.5] partial, > 0.5 no effect.
enum class TprBand { removed, partial, no_effect };
inline constexpr double kBandRemoved = 0.1;
inline constexpr double kBandPartial = 0.5;
TprBand tpr_band(double tpr);
const char* to_string(TprBand b);

std::string matrix_csv(const InterferenceMatrix& m);
/// Victim x attack grid of TPR with band letters and a legend.
std::string matrix_markdown(const InterferenceMatrix& m);
/// Per (victim, attack, metric in {nqd, quality metrics}) box statistics over images.
std::string nqd_boxplot_csv(const InterferenceMatrix& m);
/// TPR vs mean NQD per non-identity cell; rewatermark attacks as stars, baselines as crosses.
std::string tpr_nqd_svg(const InterferenceMatrix& m);

std::string policy_csv(const PolicyTable& p);
std::string policy_markdown(const PolicyTable& p);
std::string forgery_csv(const ForgeryReport& f);

/// Per victim: BA^clean, BA^unwm, BA^atk, TPR, #mis, plus the strength-matched
/// baseline columns from the policy when given.
std::string pipeline_csv(const PipelineRun& run, const PolicyTable* policy = nullptr);
std::string pipeline_markdown(const PipelineRun& run, const PolicyTable* policy = nullptr);
std::string comparison_csv(const RunComparison& c);

std::string confusion_csv(const Evaluation& e);
std::string evaluation_markdown(const Evaluation& e);

void write_text_file(const std::filesystem::path& file, const std::string& text);

}  // namespace wmarena
