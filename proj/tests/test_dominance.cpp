#include <gtest/gtest.h>

#include "gen.hpp"
#include "mivote/mivote.hpp"
#include "oracle.hpp"
#include "properties.hpp"

using namespace mivote;

namespace {

struct Instance {
  IssueDomain d;
  Ranking ranking;
  ScoreTuple center;
  Alternative vote;
  UncertaintySpec spec;
  std::size_t issue;
};

Instance random_instance(Rng& rng, bool binary, std::int64_t max_r = 2) {
  Instance x{binary ? IssueDomain::binary(gen::uniform(rng, 1, 3)) : gen::domain(rng, 3, 4), {}, {}, {}, {}, 0};
  x.ranking = uniform_ranking(x.d, rng);
  x.center = gen::random_tuple(rng, x.d, 6);
  x.vote = x.d.alternative(gen::uniform(rng, 0, x.d.alternatives() - 1));
  x.spec = gen::random_spec(rng, x.d.issues(), max_r);
  x.issue = gen::uniform(rng, 0, x.d.issues() - 1);
  return x;
}

StepContext context(const Instance& x) {
  return StepContext{x.d, x.ranking, x.center, x.vote, x.spec, x.issue, BallotEffect::AddVote};
}

}  // namespace

TEST(Beats, MatchesEnumeration) {
  const auto res = props::oracle_equivalence(600, 21, 50'000);
  EXPECT_EQ(res.violations, 0u) << res.first;
  EXPECT_GT(res.nontrivial, 50u);
}

TEST(Beats, Irreflexive) {
  Rng rng(1);
  for (int t = 0; t < 300; ++t) {
    const Instance x = random_instance(rng, false);
    const IssueDominance dom(context(x));
    for (Candidate c = 0; c < x.d.size(x.issue); ++c) EXPECT_FALSE(dom.beats(c, c));
  }
}

TEST(Dominance, AntisymmetricAndTransitive) {
  Rng rng(2);
  std::size_t chains = 0;
  for (int t = 0; t < 3000; ++t) {
    const Instance x = random_instance(rng, false);
    const IssueDominance dom(context(x));
    const int k = x.d.size(x.issue);
    for (Candidate a = 0; a < k; ++a)
      for (Candidate b = 0; b < k; ++b) {
        if (!dom.dominates(a, b)) continue;
        EXPECT_FALSE(dom.dominates(b, a));
        for (Candidate c = 0; c < k; ++c)
          if (dom.dominates(b, c)) {
            ++chains;
            EXPECT_TRUE(dom.dominates(a, c)) << "instance " << t;
          }
      }
  }
  EXPECT_GT(chains, 20u);
}

TEST(Dominance, SingleIssueChecksOtherIssues) {
  const IssueDomain d = IssueDomain::binary(2);
  const Ranking r(std::vector<std::size_t>{0, 1, 2, 3});
  const StepContext ctx{d, r, ScoreTuple{{1, 1}, {1, 1}}, Alternative{0, 0}, UncertaintySpec::exact(2), 0};
  EXPECT_THROW(s_beats(ctx, Alternative{1, 1}, Alternative{0, 0}), DomainError);
  EXPECT_FALSE(s_beats(ctx, Alternative{1, 0}, Alternative{1, 0}));
}

TEST(Ldi, BinaryStepIsTheDominatingVote) {
  Rng rng(3);
  for (int t = 0; t < 2000; ++t) {
    const Instance x = random_instance(rng, true, 3);
    const IssueDominance dom(context(x));
    const auto ld = dom.ldi_targets();
    const Candidate other = 1 - x.vote[x.issue];
    ASSERT_LE(ld.size(), 1u);
    EXPECT_EQ(!ld.empty(), dom.dominates(other, x.vote[x.issue]));
  }
}

TEST(Ldi, ZeroRadiusIsBestResponse) {
  Rng rng(4);
  for (int t = 0; t < 2000; ++t) {
    const bool binary = t % 2 == 0;
    const IssueDomain d = binary ? IssueDomain::binary(gen::uniform(rng, 1, 3)) : gen::domain(rng, 3, 4);
    const std::size_t n = gen::uniform(rng, 2, 9);
    const auto prefs = sample_impartial_culture(n, d, rng);
    const VoteProfile votes = gen::random_votes(rng, d, n);
    const std::size_t j = gen::uniform(rng, 0, n - 1), i = gen::uniform(rng, 0, d.issues() - 1);
    const auto ctx = make_step_context(prefs, votes, j, i, UncertaintySpec::exact(d.issues()));
    const Alternative br = best_response(ctx);
    EXPECT_EQ(br, oracle::best_response(prefs, votes, j, i));
    const auto ld = IssueDominance(ctx).ldi_targets();
    if (br == votes[j]) {
      EXPECT_TRUE(ld.empty());
      continue;
    }
    ASSERT_FALSE(ld.empty());
    if (binary) EXPECT_EQ(ld, std::vector<Candidate>{br[i]});
    EXPECT_NE(std::find(ld.begin(), ld.end(), br[i]), ld.end());
    const Alternative best = outcome_with_vote(ctx.center, br);
    for (Candidate c : ld) EXPECT_EQ(outcome_with_vote(ctx.center, votes[j].with(i, c)), best);
  }
}

TEST(Ldi, TruthfulSeparableBinaryAgentStays) {
  Rng rng(5);
  for (int t = 0; t < 500; ++t) {
    const std::size_t p = gen::uniform(rng, 1, 3), n = gen::uniform(rng, 2, 12);
    const IssueDomain d = IssueDomain::binary(p);
    IssueOrder o = IssueOrder::identity(p);
    auto tables = sample_conditional_tables(d, o, rng);
    for (auto& table : tables)
      for (auto& [prefix, local] : table) local = table.begin()->second;
    std::vector<Ranking> rankings{o_legal_ranking(d, o, tables)};
    for (std::size_t j = 1; j < n; ++j) rankings.push_back(uniform_ranking(d, rng));
    const PreferenceProfile prefs(d, rankings);
    VoteProfile votes = gen::random_votes(rng, d, n);
    votes[0] = d.alternative(rankings[0].top());
    for (std::size_t i = 0; i < p; ++i)
      EXPECT_TRUE(IssueDominance(make_step_context(prefs, votes, 0, i, gen::random_spec(rng, p, 3))).ldi_targets().empty());
  }
}

TEST(Containment, HoldsOnBinaryInstances) {
  const auto res = props::containment(1000, 31);
  EXPECT_EQ(res.violations, 0u) << res.first;
  EXPECT_GT(res.nontrivial, 50u);
}

TEST(Containment, EqualRadiiGiveEqualSets) {
  Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    const Instance x = random_instance(rng, true);
    const auto rep = containment_check(context(x), context(x), context(x));
    EXPECT_EQ(rep.ld, rep.lq);
    EXPECT_EQ(rep.ld, rep.lq_hat);
  }
}

TEST(Containment, RejectsMultiCandidateIssues) {
  const auto x = example5_data();
  const StepContext ctx{x.domain, x.ranking, x.tally, x.vote, UncertaintySpec::linf({1, 0}), 0};
  EXPECT_THROW(containment_check(ctx, ctx, ctx), UnsupportedError);
}

TEST(Characterization, HoldsOnBinarySteps) {
  const auto res = props::response_characterization(3000, 41);
  EXPECT_EQ(res.violations, 0u) << res.first;
  EXPECT_GT(res.nontrivial, 100u);
}

// Four-candidate example: step sets across radius pairs, computed by full
// enumeration. Larger uncertainty neither shrinks nor grows the set monotonically.
TEST(Ldi, FourCandidateRadiusRowsByEnumeration) {
  constexpr Candidate A = 0, C = 2;
  const auto x = example5_data();
  ScoreTuple without = x.tally;
  without.add(x.vote, -1);
  const std::vector<std::pair<UncertaintySpec, std::vector<Candidate>>> rows{
      {UncertaintySpec::linf({0, 0}), {}},  {UncertaintySpec::linf({1, 0}), {A}}, {UncertaintySpec::linf({2, 0}), {A}},
      {UncertaintySpec::linf({1, 1}), {C}}, {UncertaintySpec::linf({1, 2}), {C}}};
  for (const auto& [spec, want] : rows) {
    const auto brute = oracle::ldi_targets(x.domain, x.ranking, without, spec, x.vote, 0);
    EXPECT_EQ(brute, want);
    const StepContext ctx{x.domain, x.ranking, without, x.vote, spec, 0};
    EXPECT_EQ(IssueDominance(ctx).ldi_targets(), brute);
  }
}
