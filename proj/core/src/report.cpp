#include "wmarena/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "wmarena/error.hpp"
#include "wmarena/stats.hpp"

namespace wmarena {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string format_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

TprBand tpr_band(double tpr) {
  if (tpr <= kBandRemoved) return TprBand::removed;
  if (tpr <= kBandPartial) return TprBand::partial;
  return TprBand::no_effect;
}

const char* to_string(TprBand b) {
  switch (b) {
    case TprBand::removed: return "removed";
    case TprBand::partial: return "partial";
    case TprBand::no_effect: return "no effect";
  }
  return "no effect";
}

namespace {

const char* band_letter(TprBand b) {
  switch (b) {
    case TprBand::removed: return "R";
    case TprBand::partial: return "P";
    case TprBand::no_effect: return "N";
  }
  return "N";
}

const AttackSpec* find_attack(const InterferenceMatrix& m, const std::string& id) {
  for (const auto& a : m.attacks)
    if (a.id == id) return &a;
  return nullptr;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string matrix_csv(const InterferenceMatrix& m) {
  std::ostringstream o;
  o << "victim,attack,kind,images,tpr_at_fpr,mean_ba,mean_score,mean_nqd,mean_psnr,attacker_mean_ba,"
       "attacker_mean_score,attacker_tpr\n";
  for (const auto& c : m.cells) {
    const auto* a = find_attack(m, c.attack_id);
    o << c.victim_id << ',' << c.attack_id << ',' << (a ? to_string(a->kind) : "") << ',' << c.records.size() << ','
      << format_number(c.tpr_at_fpr) << ',' << format_number(c.mean_ba) << ',' << format_number(c.mean_score) << ','
      << format_number(c.mean_nqd) << ',' << format_number(c.mean_psnr) << ',' << format_number(c.attacker_mean_ba)
      << ',' << format_number(c.attacker_mean_score) << ',' << format_number(c.attacker_tpr) << '\n';
  }
  return o.str();
}

std::string matrix_markdown(const InterferenceMatrix& m) {
  std::ostringstream o;
  o << "| victim \\ attack |";
  for (const auto& a : m.attacks) o << ' ' << a.id << " |";
  o << "\n|---|";
  for (std::size_t i = 0; i < m.attacks.size(); ++i) o << "---|";
  o << '\n';
  for (const auto& v : m.victims) {
    o << "| " << v << " |";
    for (const auto& a : m.attacks) {
      const auto& c = m.cell(v, a.id);
      o << ' ' << format_number(c.tpr_at_fpr) << ' ' << band_letter(tpr_band(c.tpr_at_fpr)) << " |";
    }
    o << '\n';
  }
  o << "\nCells: TPR at " << format_number(m.target_fpr) << " FPR after the attack.\n"
    << "Legend: R = removed (TPR <= " << format_number(kBandRemoved) << "), P = partial ("
    << format_number(kBandRemoved) << " < TPR <= " << format_number(kBandPartial) << "), N = no effect (TPR > "
    << format_number(kBandPartial) << ").\n";
  return o.str();
}

std::string nqd_boxplot_csv(const InterferenceMatrix& m) {
  std::ostringstream o;
  o << "victim,attack,metric,count,q1,median,q3,whisker_low,whisker_high,mean\n";
  const auto& names = quality_metric_names();
  for (const auto& c : m.cells) {
    for (int k = -1; k < kQualityMetricCount; ++k) {
      std::vector<double> vals;
      for (const auto& r : c.records) vals.push_back(k < 0 ? r.nqd : r.quality.values()[k]);
      if (vals.empty()) continue;
      const auto b = box_stats(vals);
      o << c.victim_id << ',' << c.attack_id << ',' << (k < 0 ? std::string("nqd") : names[k]) << ',' << b.count
        << ',' << format_number(b.q1) << ',' << format_number(b.median) << ',' << format_number(b.q3) << ','
        << format_number(b.whisker_low) << ',' << format_number(b.whisker_high) << ',' << format_number(b.mean)
        << '\n';
    }
  }
  return o.str();
}

std::string tpr_nqd_svg(const InterferenceMatrix& m) {
  static const char* palette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d",
                                  "#666666"};
  const double width = 720, height = 460, left = 70, right = 200, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;
  double xmax = 0.0;
  for (const auto& c : m.cells) xmax = std::max(xmax, c.mean_nqd);
  xmax = xmax > 0.0 ? std::ceil(xmax * 10.0) / 10.0 : 1.0;
  auto px = [&](double x) { return left + pw * std::clamp(x / xmax, 0.0, 1.0); };
  auto py = [&](double y) { return top + ph * (1.0 - std::clamp(y, 0.0, 1.0)); };
  std::ostringstream o;
  char buf[256];
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << left << "\" y=\"24\" font-size=\"14\">Detection rate vs quality degradation</text>\n";
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n"
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                left, top + ph, left + pw, top + ph, left, top, left, top + ph);
  o << buf;
  for (int i = 0; i <= 5; ++i) {
    const double t = i / 5.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%s</text>\n"
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%s</text>\n",
                  px(t * xmax), top + ph + 18, format_number(t * xmax).c_str(), left - 6, py(t) + 4,
                  format_number(t).c_str());
    o << buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">mean NQD</text>\n"
                "<text x=\"18\" y=\"%.1f\" text-anchor=\"middle\" transform=\"rotate(-90 18 %.1f)\">TPR@%s FPR</text>\n",
                left + pw / 2, height - 18, top + ph / 2, top + ph / 2, format_number(m.target_fpr).c_str());
  o << buf;

  for (std::size_t vi = 0; vi < m.victims.size(); ++vi) {
    const char* color = palette[vi % 8];
    for (const auto& a : m.attacks) {
      if (a.kind == AttackKind::identity) continue;
      const auto& c = m.cell(m.victims[vi], a.id);
      const double x = px(c.mean_nqd), y = py(c.tpr_at_fpr);
      o << "<g><title>" << xml_escape(m.victims[vi] + " / " + a.id) << "</title>";
      if (a.is_rewatermark()) {
        std::string pts;
        for (int k = 0; k < 10; ++k) {
          const double ang = -std::numbers::pi / 2 + k * std::numbers::pi / 5;
          const double r = k % 2 ? 3.0 : 7.0;
          std::snprintf(buf, sizeof buf, "%.1f,%.1f ", x + r * std::cos(ang), y + r * std::sin(ang));
          pts += buf;
        }
        pts.pop_back();
        o << "<polygon class=\"star\" points=\"" << pts << "\" fill=\"" << color << "\"/>";
      } else {
        std::snprintf(buf, sizeof buf,
                      "<path class=\"cross\" d=\"M%.1f %.1fL%.1f %.1fM%.1f %.1fL%.1f %.1f\" stroke=\"%s\" "
                      "stroke-width=\"2\"/>",
                      x - 5, y - 5, x + 5, y + 5, x - 5, y + 5, x + 5, y - 5, color);
        o << buf;
      }
      o << "</g>\n";
    }
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"10\" height=\"10\" fill=\"%s\"/>"
                  "<text x=\"%.1f\" y=\"%.1f\">%s</text>\n",
                  left + pw + 20, top + 18.0 * vi, color, left + pw + 36, top + 18.0 * vi + 9,
                  xml_escape(m.victims[vi]).c_str());
    o << buf;
  }
  const double ly = top + 18.0 * m.victims.size() + 20;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"%.1f\">star = re-watermarking</text>\n"
                "<text x=\"%.1f\" y=\"%.1f\">cross = baseline distortion</text>\n",
                left + pw + 20, ly, left + pw + 20, ly + 18);
  o << buf << "</svg>\n";
  return o.str();
}

std::string policy_csv(const PolicyTable& p) {
  std::ostringstream o;
  o << "victim,attack,tpr_at_fpr,mean_nqd,mean_ba,budget_relaxed,nqd_budget\n";
  for (const auto& e : p.entries)
    o << e.victim_id << ',' << e.attack.id << ',' << format_number(e.tpr_at_fpr) << ',' << format_number(e.mean_nqd)
      << ',' << format_number(e.mean_ba) << ',' << (e.budget_relaxed ? "true" : "false") << ','
      << format_number(p.nqd_budget) << '\n';
  return o.str();
}

std::string policy_markdown(const PolicyTable& p) {
  std::ostringstream o;
  o << "| victim | attack | TPR | mean NQD | budget relaxed |\n|---|---|---|---|---|\n";
  for (const auto& e : p.entries)
    o << "| " << e.victim_id << " | " << e.attack.id << " | " << format_number(e.tpr_at_fpr) << " | "
      << format_number(e.mean_nqd) << " | " << (e.budget_relaxed ? "yes" : "no") << " |\n";
  o << "\nNQD budget " << format_number(p.nqd_budget) << "; TPR ties within " << format_number(kPolicyTieBand)
    << " broken by lower NQD, then attack id.\n";
  return o.str();
}

std::string forgery_csv(const ForgeryReport& f) {
  std::ostringstream o;
  o << "attack,scenario,pairs,attacker_mean_ba,attacker_mean_score,attacker_tpr\n";
  for (const auto& r : f.rows)
    o << r.attack_id << ',' << r.scenario << ',' << r.pairs << ',' << format_number(r.attacker_mean_ba) << ','
      << format_number(r.attacker_mean_score) << ',' << format_number(r.attacker_tpr) << '\n';
  return o.str();
}

namespace {

std::vector<AttackKind> baseline_kinds(const PolicyTable* policy) {
  std::vector<AttackKind> kinds;
  if (!policy) return kinds;
  for (const auto& e : policy->entries)
    for (const auto& b : e.baselines)
      if (std::find(kinds.begin(), kinds.end(), b.kind) == kinds.end()) kinds.push_back(b.kind);
  return kinds;
}

const BaselineMatch* baseline_for(const PolicyTable* policy, const std::string& victim, AttackKind kind) {
  if (!policy) return nullptr;
  const auto* e = policy->find(victim);
  if (!e) return nullptr;
  for (const auto& b : e->baselines)
    if (b.kind == kind) return &b;
  return nullptr;
}

}  // namespace

std::string pipeline_csv(const PipelineRun& run, const PolicyTable* policy) {
  const auto kinds = baseline_kinds(policy);
  std::ostringstream o;
  o << "victim,mode,images,ba_clean,ba_unwm,ba_atk,score_clean,score_unwm,score_atk,tpr_clean,tpr,mis,mean_nqd";
  for (auto k : kinds) {
    const std::string n = to_string(k);
    o << ',' << n << "_attack," << n << "_tpr," << n << "_ba," << n << "_nqd," << n << "_over_budget";
  }
  o << '\n';
  for (const auto& a : run.aggregates) {
    o << a.victim_id << ',' << to_string(run.mode) << ',' << a.images << ',' << format_number(a.ba_clean) << ','
      << format_number(a.ba_unwatermarked) << ',' << format_number(a.ba_attacked) << ','
      << format_number(a.mean_score_clean) << ',' << format_number(a.mean_score_unwatermarked) << ','
      << format_number(a.mean_score_attacked) << ',' << format_number(a.tpr_clean) << ',' << format_number(a.tpr)
      << ',' << a.mis << ',' << format_number(a.mean_nqd);
    for (auto k : kinds) {
      const auto* b = baseline_for(policy, a.victim_id, k);
      if (b)
        o << ',' << b->attack_id << ',' << format_number(b->tpr_at_fpr) << ',' << format_number(b->mean_ba) << ','
          << format_number(b->mean_nqd) << ',' << (b->exceeds_budget ? "true" : "false");
      else
        o << ",,,,,";
    }
    o << '\n';
  }
  return o.str();
}

std::string pipeline_markdown(const PipelineRun& run, const PolicyTable* policy) {
  const auto kinds = baseline_kinds(policy);
  std::ostringstream o;
  o << "| victim | BA^clean | BA^unwm | BA^atk | TPR | #mis |";
  for (auto k : kinds) o << ' ' << to_string(k) << " TPR |";
  o << "\n|---|---|---|---|---|---|";
  for (std::size_t i = 0; i < kinds.size(); ++i) o << "---|";
  o << '\n';
  for (const auto& a : run.aggregates) {
    auto ba = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("-"); };
    o << "| " << a.victim_id << " | " << ba(a.ba_clean) << " | " << ba(a.ba_unwatermarked) << " | "
      << ba(a.ba_attacked) << " | " << format_number(a.tpr) << " | " << a.mis << " |";
    for (auto k : kinds) {
      const auto* b = baseline_for(policy, a.victim_id, k);
      o << ' ' << (b ? format_number(b->tpr_at_fpr) + " (" + b->attack_id + (b->exceeds_budget ? ", over budget" : "") + ")"
                     : std::string("-"))
        << " |";
    }
    o << '\n';
  }
  o << "\nMode: " << to_string(run.mode) << (run.paranoid ? " (paranoid)" : "")
    << ". #mis = images classified as unwatermarked and left unattacked.\n";
  return o.str();
}

std::string comparison_csv(const RunComparison& c) {
  std::ostringstream o;
  o << "victim,blackbox_tpr,beigebox_tpr,delta_tpr,delta_ba,mis,mis_fraction,misrouted,gap_attribution\n";
  for (const auto& v : c.victims) {
    std::string gaps;
    for (const auto& [cls, count] : v.gap_by_prediction) {
      if (!gaps.empty()) gaps += ';';
      gaps += cls + ":" + std::to_string(count);
    }
    o << v.victim_id << ',' << format_number(v.blackbox_tpr) << ',' << format_number(v.beigebox_tpr) << ','
      << format_number(v.delta_tpr) << ',' << format_number(v.delta_ba) << ',' << v.mis << ','
      << format_number(v.mis_fraction) << ',' << v.misrouted << ',' << gaps << '\n';
  }
  return o.str();
}

std::string confusion_csv(const Evaluation& e) {
  std::ostringstream o;
  o << "true\\predicted";
  for (const auto& c : e.classes) o << ',' << c;
  o << ",support,recall\n";
  for (std::size_t i = 0; i < e.classes.size(); ++i) {
    o << e.classes[i];
    for (auto n : e.confusion[i]) o << ',' << n;
    o << ',' << e.per_class[i].support << ',' << format_number(e.per_class[i].recall) << '\n';
  }
  return o.str();
}

std::string evaluation_markdown(const Evaluation& e) {
  std::ostringstream o;
  o << "| class | support | recall | precision | F1 |\n|---|---|---|---|---|\n";
  for (const auto& c : e.per_class)
    o << "| " << c.label << " | " << c.support << " | " << format_number(c.recall) << " | "
      << format_number(c.precision) << " | " << format_number(c.f1) << " |\n";
  o << "\nOverall accuracy " << format_number(e.accuracy) << ", macro-F1 " << format_number(e.macro_f1) << " over "
    << e.total << " images.\n";
  for (std::size_t i = 0; i < e.per_class.size(); ++i) {
    if (e.per_class[i].support == 0 || e.per_class[i].recall >= 0.9) continue;
    o << "\nRecall below 0.90 for " << e.classes[i] << "; confusion row:";
    for (std::size_t j = 0; j < e.classes.size(); ++j) o << ' ' << e.classes[j] << '=' << e.confusion[i][j];
    o << '\n';
  }
  for (const auto& g : e.gate_violations) o << "\nGate violation: " << g << '\n';
  return o.str();
}

void write_text_file(const std::filesystem::path& file, const std::string& text) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  out << text;
  if (!out) throw Error("failed writing " + file.string());
}

}  // namespace wmarena
