// Copyright 2026 The lilguard Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "lilguard/campaign.hpp"
#include "lilguard/error.hpp"
#include "lilguard/ngram.hpp"
#include "lilguard/simulator.hpp"

namespace sim = lilguard::simulator;
namespace gd = lilguard::guardian;

namespace {

const std::string kDataDir = LILGUARD_TEST_DATA_DIR;

const std::vector<std::string>& countdown() {
  static const auto corpus = sim::load_corpus(kDataDir + "/countdown.txt");
  return corpus;
}

const std::vector<std::string>& songbook() {
  static const auto corpus = sim::load_corpus(kDataDir + "/songbook.txt");
  return corpus;
}

sim::Distribution dist(std::vector<std::pair<sim::TokenId, double>> p) {
  sim::Distribution d;
  d.probs = std::move(p);
  d.total = 1;
  return d;
}

}  // namespace

TEST(NGramTrain, DeterministicCycle) {
  const auto m = sim::train(sim::tokenize_chars("ababab"), 1);
  const sim::TokenId a = m.id("a");
  const sim::TokenId b = m.id("b");
  const auto* after_a = m.lookup(std::vector<sim::TokenId>{a});
  const auto* after_b = m.lookup(std::vector<sim::TokenId>{b});
  ASSERT_NE(after_a, nullptr);
  ASSERT_NE(after_b, nullptr);
  EXPECT_DOUBLE_EQ(after_a->prob(b), 1.0);
  EXPECT_DOUBLE_EQ(after_b->prob(a), 1.0);
  EXPECT_EQ(m.id("c"), sim::kUnknownToken);
}

TEST(NGramTrain, HandCountedOrderTwo) {
  // a a b _ a a b _ a a b
  const auto m = sim::train(sim::tokenize_chars("aab aab aab"), 2);
  const sim::TokenId a = m.id("a");
  const sim::TokenId b = m.id("b");
  const sim::TokenId sp = m.id(" ");
  using Ctx = std::vector<sim::TokenId>;
  EXPECT_DOUBLE_EQ(m.lookup(Ctx{a, a})->prob(b), 1.0);
  EXPECT_EQ(m.lookup(Ctx{a, a})->total, 3u);
  EXPECT_DOUBLE_EQ(m.lookup(Ctx{a, b})->prob(sp), 1.0);
  EXPECT_EQ(m.lookup(Ctx{a, b})->total, 2u);
  EXPECT_DOUBLE_EQ(m.lookup(Ctx{b, sp})->prob(a), 1.0);
  EXPECT_DOUBLE_EQ(m.lookup(Ctx{sp, a})->prob(a), 1.0);
  EXPECT_EQ(m.lookup(Ctx{b, a}), nullptr);
  EXPECT_EQ(m.context_count(2), 4u);
  // Order-1 suffix table: a is followed by a three times and b three times.
  EXPECT_DOUBLE_EQ(m.lookup(Ctx{a})->prob(a), 0.5);
  EXPECT_DOUBLE_EQ(m.lookup(Ctx{a})->prob(b), 0.5);
}

TEST(NGramTrain, CorpusTooShort) {
  EXPECT_THROW(sim::train(sim::tokenize_chars("abc"), 3), lilguard::DataError);
  EXPECT_THROW(sim::train(sim::tokenize_chars("abc"), 5), lilguard::DataError);
  EXPECT_THROW(sim::train(sim::tokenize_chars("abc"), 0), lilguard::DataError);
}

TEST(NGramTrain, DistributionsSumToOne) {
  const auto m = sim::train(songbook(), 3);
  std::mt19937_64 rng(1);
  const std::size_t n = songbook().size();
  for (int i = 0; i < 2000; ++i) {
    const std::size_t at = 3 + rng() % (n - 4);
    std::vector<sim::TokenId> ctx;
    for (std::size_t k = at - 3; k < at; ++k) ctx.push_back(m.id(songbook()[k]));
    for (std::size_t len = 1; len <= 3; ++len) {
      const auto* d = m.lookup(std::span<const sim::TokenId>(ctx).last(len));
      ASSERT_NE(d, nullptr);
      double sum = 0.0;
      for (const auto& [tok, p] : d->probs) sum += p;
      EXPECT_NEAR(sum, 1.0, 1e-9);
      EXPECT_TRUE(std::is_sorted(d->probs.begin(), d->probs.end()));
    }
  }
  EXPECT_EQ(m.lookup(std::vector<sim::TokenId>{0, 0, 0, 0}), nullptr);
}

TEST(Tokenize, WordsAndChars) {
  EXPECT_EQ(sim::tokenize_words("  a bb\n\tccc "), (std::vector<std::string>{"a", "bb", "ccc"}));
  EXPECT_EQ(sim::tokenize_chars("ab "), (std::vector<std::string>{"a", "b", " "}));
}

TEST(SampleToken, ZeroTemperatureIsArgmax) {
  std::mt19937_64 rng(1);
  const auto d = dist({{0, 0.2}, {1, 0.5}, {2, 0.3}});
  for (int i = 0; i < 10; ++i) EXPECT_EQ(sim::sample_token(d, 0.0, 1.0, rng), 1u);
}

TEST(SampleToken, TopPCutsTheTail) {
  std::mt19937_64 rng(2);
  // After sharpening with T = 0.6, token 0 holds about 0.97 of the mass.
  const auto d = dist({{0, 8.0 / 9.0}, {1, 1.0 / 9.0}});
  for (int i = 0; i < 2000; ++i) ASSERT_EQ(sim::sample_token(d, 0.6, 0.95, rng), 0u);
  int ones = 0;
  for (int i = 0; i < 20000; ++i) ones += sim::sample_token(d, 1.0, 1.0, rng) == 1u;
  EXPECT_NEAR(ones / 20000.0, 1.0 / 9.0, 0.01);
}

TEST(SampleToken, TiesAtTheCutAreKept) {
  std::mt19937_64 rng(3);
  const auto d = dist({{0, 0.25}, {1, 0.25}, {2, 0.25}, {3, 0.25}});
  std::vector<int> hits(4, 0);
  for (int i = 0; i < 8000; ++i) ++hits[sim::sample_token(d, 0.6, 0.3, rng)];
  for (int h : hits) EXPECT_GT(h, 1500);
}

TEST(Generate, UnlimitedBudgetFollowsCycle) {
  const auto m = sim::train(sim::tokenize_chars("abcabcabcabc"), 2);
  sim::SimConfig cfg;
  cfg.max_len = 50;
  cfg.joiner = "";
  const auto t = sim::generate(m, {"a"}, cfg);
  EXPECT_EQ(t.stop_reason, sim::StopReason::max_length);
  ASSERT_EQ(t.token_count, 50u);
  for (std::size_t i = 0; i < t.tokens.size(); ++i) EXPECT_EQ(t.tokens[i], std::string(1, "bca"[i % 3]));
}

TEST(Generate, UnseenContextEndsRun) {
  const auto m = sim::train(sim::tokenize_words("x y z x y z"), 2);
  const auto t = sim::generate(m, {"never", "seen"}, sim::SimConfig{});
  EXPECT_EQ(t.stop_reason, sim::StopReason::end_of_sequence);
  EXPECT_EQ(t.token_count, 0u);
  EXPECT_THROW(sim::generate(m, {}, sim::SimConfig{}), lilguard::DataError);
}

TEST(Generate, EosSymbolEndsRun) {
  const auto m = sim::train(sim::tokenize_words("go go stop <eos> go go stop <eos>"), 2);
  sim::SimConfig cfg;
  cfg.temperature = 0.0;
  const auto t = sim::generate(m, {"<eos>", "go"}, cfg);
  EXPECT_EQ(t.stop_reason, sim::StopReason::end_of_sequence);
  EXPECT_EQ(t.tokens, (std::vector<std::string>{"go", "stop"}));
}

TEST(Generate, SeededDeterminism) {
  const auto m = sim::train(countdown(), 12);
  sim::SimConfig cfg;
  cfg.context_budget = 2;
  cfg.seed = 42;
  const auto prompt = sim::prompt_for_seed(countdown(), cfg.eos_symbol, 5, 42);
  const auto a = sim::generate(m, prompt, cfg, gd::GuardianConfig{});
  const auto b = sim::generate(m, prompt, cfg, gd::GuardianConfig{});
  EXPECT_EQ(a.tokens, b.tokens);
  ASSERT_EQ(a.checkpoints.size(), b.checkpoints.size());
  for (std::size_t i = 0; i < a.checkpoints.size(); ++i) {
    EXPECT_EQ(a.checkpoints[i].compressed_len, b.checkpoints[i].compressed_len);
  }
}

TEST(Generate, TraceCheckpointsAreOrdered) {
  const auto m = sim::train(countdown(), 12);
  for (std::optional<std::size_t> budget : {std::optional<std::size_t>{}, std::optional<std::size_t>{2}}) {
    sim::SimConfig cfg;
    cfg.context_budget = budget;
    cfg.seed = 5;
    const auto prompt = sim::prompt_for_seed(countdown(), cfg.eos_symbol, 5, 5);
    for (const auto& guard : {std::optional<gd::GuardianConfig>{}, std::optional<gd::GuardianConfig>{gd::GuardianConfig{}}}) {
      const auto t = sim::generate(m, prompt, cfg, guard);
      EXPECT_EQ(t.tokens.size(), t.token_count);
      EXPECT_EQ(t.checkpoints.size(), 1 + t.token_count / 250);
      for (std::size_t i = 1; i < t.checkpoints.size(); ++i) {
        EXPECT_GT(t.checkpoints[i].original_len, t.checkpoints[i - 1].original_len);
        EXPECT_GE(t.checkpoints[i].compressed_len, t.checkpoints[i - 1].compressed_len);
      }
    }
  }
}

TEST(Generate, StructuredTextRepeatsMoreUnderTightBudget) {
  const auto m = sim::train(songbook(), 3);
  const auto prompt = sim::prompt_for_seed(songbook(), "<eos>", 4, 3);
  sim::SimConfig full;
  full.seed = 3;
  full.max_len = 2000;
  sim::SimConfig tight = full;
  tight.context_budget = 1;
  const auto base = sim::generate(m, prompt, full);
  const auto loop = sim::generate(m, prompt, tight);
  EXPECT_GT(sim::repetition_rate(loop.tokens), sim::repetition_rate(base.tokens));
  EXPECT_GT(sim::repetition_rate(loop.tokens), 0.5);

  const auto guarded = sim::generate(m, prompt, tight, gd::GuardianConfig{});
  EXPECT_EQ(guarded.stop_reason, sim::StopReason::information_plateau);
  EXPECT_LT(guarded.token_count, loop.token_count);
  // The guarded run is a prefix of the unguarded one.
  EXPECT_TRUE(std::equal(guarded.tokens.begin(), guarded.tokens.end(), loop.tokens.begin()));
}

TEST(Generate, GuardContextLimit) {
  const auto m = sim::train(countdown(), 12);
  sim::SimConfig cfg;
  cfg.context_budget = 2;
  gd::GuardianConfig g;
  g.max_context = 105;
  const auto prompt = sim::prompt_for_seed(countdown(), cfg.eos_symbol, 5, 0);
  const auto t = sim::generate(m, prompt, cfg, g);
  EXPECT_EQ(t.stop_reason, sim::StopReason::context_limit);
  EXPECT_EQ(t.token_count, 100u);
}

TEST(RatioCurve, IdenticalTokensFlattenAfterFirstCheckpoint) {
  const auto m = sim::train(sim::tokenize_words("la la la la la la"), 1);
  sim::SimConfig cfg;
  cfg.max_len = 2000;
  const auto t = sim::generate(m, {"la"}, cfg);
  const auto curve = sim::ratio_curve(t);
  ASSERT_EQ(curve.size(), 8u);
  for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_LT(curve[i].slope, 0.01) << i;
}

TEST(RatioCurve, RandomTokensStaySteep) {
  // Every token is distinct, so the model wanders through random bytes.
  std::mt19937_64 rng(6);
  std::vector<std::string> corpus;
  for (int i = 0; i < 6000; ++i) {
    std::string w(6, ' ');
    for (auto& c : w) c = static_cast<char>('a' + rng() % 26);
    corpus.push_back(w);
  }
  const auto m = sim::train(corpus, 1);
  sim::SimConfig cfg;
  cfg.max_len = 1500;
  const auto t = sim::generate(m, {corpus[0]}, cfg);
  const auto curve = sim::ratio_curve(t);
  ASSERT_GE(curve.size(), 5u);
  for (const auto& p : curve) EXPECT_GT(p.slope, 0.5);
  EXPECT_FALSE(sim::find_knee(curve));
}

TEST(RatioCurve, NeedsTwoCheckpoints) {
  sim::GenerationTrace t;
  EXPECT_THROW(sim::ratio_curve(t), lilguard::DataError);
  t.checkpoints.push_back({10, 30});
  EXPECT_THROW(sim::ratio_curve(t), lilguard::DataError);
  t.checkpoints.push_back({20, 35});
  const auto c = sim::ratio_curve(t);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_DOUBLE_EQ(c[0].slope, 0.5);
}

TEST(FindKnee, LocatesPlateau) {
  std::vector<sim::CurvePoint> c{{0, 0, 1.2}, {0, 0, 0.9}, {0, 0, 0.3}, {0, 0, 0.01}, {0, 0, 0.0}};
  const auto k = sim::find_knee(c);
  ASSERT_TRUE(k);
  EXPECT_EQ(k->index, 3u);
  EXPECT_NEAR(k->early_mean_slope, 0.8, 1e-12);
  EXPECT_DOUBLE_EQ(k->late_max_slope, 0.01);
  // A late bump breaks the plateau.
  c.push_back({0, 0, 0.05});
  EXPECT_FALSE(sim::find_knee(c));
  // An early phase that is too flat.
  EXPECT_FALSE(sim::find_knee({{0, 0, 0.4}, {0, 0, 0.0}}));
  EXPECT_FALSE(sim::find_knee({{0, 0, 0.0}, {0, 0, 0.0}}));
  EXPECT_FALSE(sim::find_knee({}));
}

TEST(RepetitionRate, Counts) {
  EXPECT_DOUBLE_EQ(sim::repetition_rate({"a", "b"}, 8), 0.0);
  const std::vector<std::string> same(20, "x");
  EXPECT_NEAR(sim::repetition_rate(same, 8), 12.0 / 13.0, 1e-12);
  EXPECT_DOUBLE_EQ(sim::repetition_rate({"a", "b", "c", "a", "b", "c"}, 3), 0.25);
  EXPECT_THROW(sim::repetition_rate(same, 0), lilguard::DomainError);
}

TEST(Jct, Examples) {
  EXPECT_DOUBLE_EQ(sim::jct(0, 0, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(sim::jct(1.0, 1000, 0.03), 31.0);
  EXPECT_NEAR(sim::jct(1.0, 2000, 0.024), 49.0, 1e-12);
  EXPECT_GT(sim::jct(1.0, 2000, 0.024), sim::jct(1.0, 1000, 0.03));
  EXPECT_THROW(sim::jct(-1, 1, 1), lilguard::DomainError);
}

TEST(Jct, StrictlyIncreasingInEachArgument) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    EXPECT_LT(sim::jct(a, b, c), sim::jct(a + d, b, c));
    EXPECT_LT(sim::jct(a, b, c), sim::jct(a, b + d, c));
    EXPECT_LT(sim::jct(a, b, c), sim::jct(a, b, c + d));
  }
}

TEST(Campaign, PromptsComeFromDocumentStarts) {
  const auto p = sim::prompt_for_seed(countdown(), "<eos>", 5, 9);
  ASSERT_EQ(p.size(), 5u);
  EXPECT_EQ(p[0], "count");
  EXPECT_EQ(p[4], ":");
  EXPECT_EQ(p, sim::prompt_for_seed(countdown(), "<eos>", 5, 9));
  EXPECT_THROW(sim::prompt_for_seed({"a", "<eos>"}, "<eos>", 5, 0), lilguard::DataError);
}

TEST(Campaign, LoadCorpusErrors) {
  EXPECT_THROW(sim::load_corpus(kDataDir + "/missing.txt"), lilguard::DataError);
}

TEST(Campaign, SummariesAndCsv) {
  const auto m = sim::train(countdown(), 12);
  sim::CampaignConfig c;
  c.budgets = {std::nullopt, 2};
  c.seeds = 4;
  c.sim.max_len = 4000;
  const auto r = sim::run_campaign(m, countdown(), c);
  ASSERT_EQ(r.runs.size(), 8u);
  ASSERT_EQ(r.summaries.size(), 2u);
  EXPECT_NEAR(r.summaries[0].mean_savings, 0.0, 1e-9);
  EXPECT_GT(r.summaries[1].mean_savings, 50.0);
  EXPECT_EQ(r.summaries[1].plateau_stops, 4u);
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    EXPECT_EQ(r.runs[i].seed, i % 4);
    EXPECT_EQ(r.runs[i].budget, c.budgets[i / 4]);
  }

  std::ostringstream csv;
  sim::write_trace_csv(csv, r);
  std::istringstream lines(csv.str());
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header,
            "run_id,seed,budget,checkpoint_index,original_len,compressed_len,slope,stop_reason,"
            "token_count");
  std::string row;
  std::size_t rows = 0;
  while (std::getline(lines, row)) {
    ++rows;
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), 8) << row;
  }
  std::size_t expected = 0;
  for (const auto& run : r.runs) expected += run.unguarded.checkpoints.size() + run.guarded.checkpoints.size();
  EXPECT_EQ(rows, expected);
  EXPECT_NE(csv.str().find("b2-s0-guarded,0,2,0,"), std::string::npos);
}

TEST(Campaign, RejectsBadConfig) {
  const auto m = sim::train(countdown(), 12);
  sim::CampaignConfig c;
  c.seeds = 0;
  EXPECT_THROW(sim::run_campaign(m, countdown(), c), lilguard::ConfigError);
  c = {};
  c.budgets = {0};
  EXPECT_THROW(sim::run_campaign(m, countdown(), c), lilguard::ConfigError);
}
