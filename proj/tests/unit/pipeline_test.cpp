#include <gtest/gtest.h>

#include "wmarena/arena.hpp"
#include "wmarena/classifier.hpp"
#include "wmarena/codecs.hpp"
#include "wmarena/error.hpp"
#include "wmarena/features.hpp"
#include "wmarena/pipeline.hpp"
#include "wmarena/serialize.hpp"

using namespace wmarena;

namespace {

PolicyTable test_policy() {
  PolicyTable p;
  for (const auto& [victim, attack] : {std::pair{"ss-dct", "rw:ss-dct"}, std::pair{"chi2-ring", "rw:chi2-ring"}}) {
    PolicyEntry e;
    e.victim_id = victim;
    e.attack = parse_attack(attack);
    p.entries.push_back(e);
  }
  return p;
}

PolicyTable full_policy() {
  PolicyTable p;
  for (const auto& d : registry()) {
    PolicyEntry e;
    e.victim_id = d.id;
    e.attack = rewatermark_attack(d.attack_capable ? d.id : "chi2-ring");
    p.entries.push_back(e);
  }
  return p;
}

/// Always predicts `label`.
ClassifierModel constant_model(const std::string& label) {
  ClassifierModel m;
  m.classes = known_labels();
  m.feature_names = feature_names();
  const std::size_t d = m.feature_names.size();
  m.weights.assign(m.classes.size() * d, 0.0);
  m.bias.assign(m.classes.size(), 0.0);
  m.feature_mean.assign(d, 0.0);
  m.feature_scale.assign(d, 1.0);
  for (std::size_t k = 0; k < m.classes.size(); ++k)
    if (m.classes[k] == label) m.bias[k] = 10.0;
  return m;
}

class PipelineFixture : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    corpus_ = new Corpus(synthetic_corpus(4, 800));
    PipelineOptions o;
    o.jobs = 2;
    beige_ = new PipelineRun(run_pipeline(*corpus_, {"ss-dct", "chi2-ring"}, nullptr, full_policy(),
                                          PipelineMode::beigebox, seed_from_integer(3), o));
  }
  static void TearDownTestSuite() {
    delete beige_;
    delete corpus_;
  }
  static Corpus* corpus_;
  static PipelineRun* beige_;
};

Corpus* PipelineFixture::corpus_ = nullptr;
PipelineRun* PipelineFixture::beige_ = nullptr;

}  // namespace

TEST(Pipeline, PolicyGapFailsBeforeWork) {
  const Corpus c = synthetic_corpus(1, 0);
  try {
    run_pipeline(c, {"pix-wide"}, nullptr, test_policy(), PipelineMode::beigebox, seed_from_integer(0));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("pix-wide"), std::string::npos);
  }
}

TEST(Pipeline, BlackboxNeedsModel) {
  const Corpus c = synthetic_corpus(1, 0);
  EXPECT_THROW(run_pipeline(c, {"ss-dct"}, nullptr, test_policy(), PipelineMode::blackbox, seed_from_integer(0)),
               ValidationError);
}

TEST(Pipeline, ModeStrings) {
  EXPECT_EQ(pipeline_mode_from_string("blackbox"), PipelineMode::blackbox);
  EXPECT_STREQ(to_string(PipelineMode::beigebox), "beigebox");
  EXPECT_THROW(pipeline_mode_from_string("whitebox"), ValidationError);
}

TEST_F(PipelineFixture, BeigeboxRoutesByTrueVictim) {
  ASSERT_EQ(beige_->records.size(), 8u);
  for (const auto& r : beige_->records) {
    EXPECT_EQ(r.attack_id, "rw:" + r.victim);
    EXPECT_EQ(r.predicted, r.victim);
  }
  const auto& ss = beige_->aggregates[0];
  EXPECT_EQ(ss.victim_id, "ss-dct");
  EXPECT_DOUBLE_EQ(*ss.ba_clean, 1.0);
  EXPECT_LE(*ss.ba_attacked, 0.75);
  EXPECT_EQ(ss.mis, 0u);
}

TEST_F(PipelineFixture, DeterministicReplay) {
  PipelineOptions o;
  o.jobs = 1;
  const auto again = run_pipeline(*corpus_, {"ss-dct", "chi2-ring"}, nullptr, full_policy(), PipelineMode::beigebox,
                                  seed_from_integer(3), o);
  EXPECT_EQ(json(again).dump(), json(*beige_).dump());
}

TEST_F(PipelineFixture, IdenticalRunsCompareToZero) {
  const auto c = compare_runs(*beige_, *beige_);
  for (const auto& v : c.victims) {
    EXPECT_EQ(v.delta_tpr, 0.0);
    if (v.delta_ba) {
      EXPECT_EQ(*v.delta_ba, 0.0);
    }
    EXPECT_EQ(v.mis, 0u);
  }
}

TEST_F(PipelineFixture, EverythingMisroutedToIdentity) {
  const auto model = constant_model(kUnwatermarkedLabel);
  const auto black = run_pipeline(*corpus_, {"ss-dct", "chi2-ring"}, &model, full_policy(), PipelineMode::blackbox,
                                  seed_from_integer(3));
  for (const auto& r : black.records) {
    EXPECT_EQ(r.predicted, kUnwatermarkedLabel);
    EXPECT_EQ(r.attack_id, "identity");
    EXPECT_TRUE(r.unchanged);
    EXPECT_EQ(r.pre.score, r.post.score);
  }
  const auto c = compare_runs(black, *beige_);
  for (std::size_t i = 0; i < c.victims.size(); ++i) {
    EXPECT_EQ(c.victims[i].mis, 4u);
    EXPECT_DOUBLE_EQ(c.victims[i].mis_fraction, 1.0);
    EXPECT_NEAR(c.victims[i].delta_tpr, 1.0 - beige_->aggregates[i].tpr, 1e-15);
  }
}

TEST_F(PipelineFixture, ParanoidRoutesUnwatermarkedToChi2) {
  const auto model = constant_model(kUnwatermarkedLabel);
  PipelineOptions o;
  o.paranoid = true;
  const auto run = run_pipeline(*corpus_, {"chi2-ring"}, &model, full_policy(), PipelineMode::blackbox,
                                seed_from_integer(3), o);
  for (const auto& r : run.records) EXPECT_EQ(r.attack_id, "rw:chi2-ring");
}

TEST_F(PipelineFixture, PerfectClassifierMatchesBeigebox) {
  const auto model = constant_model("ss-dct");
  const auto black = run_pipeline(*corpus_, {"ss-dct"}, &model, full_policy(), PipelineMode::blackbox,
                                  seed_from_integer(3));
  for (std::size_t i = 0; i < black.records.size(); ++i) {
    EXPECT_EQ(black.records[i].post.score, beige_->records[i].post.score);
    EXPECT_EQ(black.records[i].attack_id, beige_->records[i].attack_id);
  }
}

TEST_F(PipelineFixture, MismatchedRunsRejected) {
  PipelineRun other = *beige_;
  other.seed = seed_from_integer(4).hex();
  EXPECT_THROW(compare_runs(*beige_, other), ValidationError);
  other = *beige_;
  other.images.pop_back();
  EXPECT_THROW(compare_runs(*beige_, other), ValidationError);
}
