#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "test_support.hpp"
#include "wmarena/arena.hpp"
#include "wmarena/error.hpp"
#include "wmarena/report.hpp"
#include "wmarena/serialize.hpp"

using namespace wmarena;
using wmarena::testing::TempDir;

namespace {

InterferenceMatrix tiny_matrix() {
  InterferenceMatrix m;
  m.seed = seed_from_integer(1).hex();
  m.victims = {"ss-dct", "ring-fft"};
  m.attacks = {identity_attack(), rewatermark_attack("ss-dct"), baseline_attack(AttackKind::noise, 0.05)};
  const double tprs[2][3] = {{1.0, 0.0, 0.3}, {1.0, 0.95, 0.6}};
  for (int v = 0; v < 2; ++v) {
    VictimBaseline b;
    b.victim_id = m.victims[v];
    b.threshold.codec_id = m.victims[v];
    m.baselines.push_back(b);
    for (int a = 0; a < 3; ++a) {
      InterferenceCell c;
      c.victim_id = m.victims[v];
      c.attack_id = m.attacks[a].id;
      c.tpr_at_fpr = tprs[v][a];
      c.mean_nqd = 0.1 * a;
      if (v == 0) c.mean_ba = 1.0 - 0.2 * a;
      AttackRecord r;
      r.image = "x.png";
      r.nqd = c.mean_nqd;
      r.quality.psnr = 40.0 - a;
      c.records.push_back(r);
      m.cells.push_back(c);
    }
  }
  return m;
}

}  // namespace

TEST(FormatNumber, SixSignificantDigits) {
  EXPECT_EQ(format_number(0.123456789), "0.123457");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(1234567.0), "1.23457e+06");
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_number(std::optional<double>{}), "");
}

TEST(TprBand, Thresholds) {
  EXPECT_EQ(tpr_band(0.1), TprBand::removed);
  EXPECT_EQ(tpr_band(0.1000001), TprBand::partial);
  EXPECT_EQ(tpr_band(0.5), TprBand::partial);
  EXPECT_EQ(tpr_band(0.51), TprBand::no_effect);
}

TEST(Serialize, OptionalAndPayloadRoundtrip) {
  DetectionOutcome d;
  d.codec_id = "ss-dct";
  d.score = 0.75;
  d.bit_accuracy = 0.75;
  d.decoded_payload = Payload::from_bit_string("0101");
  const auto back = json::parse(json(d).dump()).get<DetectionOutcome>();
  EXPECT_EQ(back.bit_accuracy, d.bit_accuracy);
  EXPECT_FALSE(back.message_accuracy.has_value());
  EXPECT_EQ(back.decoded_payload, d.decoded_payload);
}

TEST(Serialize, MatrixAndPolicyRoundtrip) {
  const auto m = tiny_matrix();
  const json j = m;
  EXPECT_EQ(j["kind"], "interference_matrix");
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_EQ(json(j.get<InterferenceMatrix>()).dump(), j.dump());
  const json p = derive_policy(m);
  EXPECT_EQ(json(p.get<PolicyTable>()).dump(), p.dump());
}

TEST(Serialize, WrongKindRejected) {
  const json p = derive_policy(tiny_matrix());
  EXPECT_THROW(p.get<InterferenceMatrix>(), ValidationError);
}

TEST(Serialize, FileErrorsNameTheFile) {
  TempDir dir;
  try {
    read_json_file(dir / "missing.json");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("missing.json"), std::string::npos);
  }
  write_text_file(dir / "bad.json", "{not json");
  EXPECT_THROW(read_json_file(dir / "bad.json"), ValidationError);
  write_json_file(dir / "ok.json", json{{"a", 1}});
  EXPECT_EQ(read_json_file(dir / "ok.json")["a"], 1);
}

TEST(Report, MatrixCsvAndMarkdownLegend) {
  const auto m = tiny_matrix();
  const std::string csv = matrix_csv(m);
  EXPECT_EQ(csv.substr(0, csv.find('\n')).find("victim,attack,kind,images,tpr_at_fpr,mean_ba"), 0u);
  EXPECT_NE(csv.find("ss-dct,rw:ss-dct,rewatermark,1,0,0.8,"), std::string::npos);
  const std::string md = matrix_markdown(m);
  EXPECT_NE(md.find("R = removed (TPR <= 0.1)"), std::string::npos);
  EXPECT_NE(md.find("P = partial (0.1 < TPR <= 0.5)"), std::string::npos);
  EXPECT_NE(md.find("N = no effect (TPR > 0.5)"), std::string::npos);
  EXPECT_NE(md.find("| 0 R |"), std::string::npos);
  EXPECT_NE(md.find("| 0.3 P |"), std::string::npos);
}

TEST(Report, SvgUsesStarsForRewatermarkAndCrossesForBaselines) {
  const std::string svg = tpr_nqd_svg(tiny_matrix());
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  auto count = [&](const std::string& needle) {
    std::size_t n = 0;
    for (auto p = svg.find(needle); p != std::string::npos; p = svg.find(needle, p + 1)) ++n;
    return n;
  };
  EXPECT_EQ(count("class=\"star\""), 2u);
  EXPECT_EQ(count("class=\"cross\""), 2u);
}

TEST(Report, BoxplotCsvHasQuartiles) {
  const std::string csv = nqd_boxplot_csv(tiny_matrix());
  EXPECT_NE(csv.find("q1"), std::string::npos);
  EXPECT_NE(csv.find("whisker_high"), std::string::npos);
}

TEST(Report, DeterministicBytes) {
  EXPECT_EQ(matrix_csv(tiny_matrix()), matrix_csv(tiny_matrix()));
  EXPECT_EQ(tpr_nqd_svg(tiny_matrix()), tpr_nqd_svg(tiny_matrix()));
}

TEST(Report, EvaluationListsLowRecallRows) {
  std::vector<std::string> truth(10, "ss-dct"), pred(10, "ss-dct");
  for (int i = 0; i < 3; ++i) pred[i] = "pix-add";
  const auto e = evaluate_predictions({"ss-dct", "pix-add"}, truth, pred);
  const std::string md = evaluation_markdown(e);
  EXPECT_NE(md.find("ss-dct"), std::string::npos);
  EXPECT_NE(md.find("0.7"), std::string::npos);
  EXPECT_NE(confusion_csv(e).find("ss-dct,7,3"), std::string::npos);
}
